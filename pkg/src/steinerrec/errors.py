"""Exception types raised across the package."""


class RecommenderError(Exception):
    """Base class for all errors raised by steinerrec."""


class ParseError(RecommenderError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IntegrityError(RecommenderError):
    pass


class EmptyInputError(RecommenderError):
    pass


class ParameterError(RecommenderError, ValueError):
    pass


class DomainError(RecommenderError, ValueError):
    pass


class CapacityError(RecommenderError):
    pass


class UncoverableKeywordError(RecommenderError):
    def __init__(self, keyword):
        self.keyword = keyword
        super().__init__(f"no API covers keyword {keyword!r}")


class NoValidSampleError(RecommenderError):
    pass


class EmptyResultError(RecommenderError):
    def __init__(self, message, **counts):
        self.counts = counts
        if counts:
            detail = ", ".join(f"{k}={v}" for k, v in counts.items())
            message = f"{message} ({detail})"
        super().__init__(message)
