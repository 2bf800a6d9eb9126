"""App/API ecosystems: loading, validation, synthesis and query derivation."""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import EmptyInputError, IntegrityError, ParameterError, ParseError

FORMATS = ("app-api-csv", "ecosystem-json")
CSV_HEADER = ["app_id", "api_id", "api_name", "api_keywords"]

_WS = re.compile(r"\s+")


def normalize_keyword(keyword: str) -> str:
    return _WS.sub(" ", keyword.strip()).lower()


@dataclass(frozen=True)
class ApiRecord:
    id: int
    name: str
    keywords: frozenset

    def __post_init__(self):
        kws = frozenset(normalize_keyword(k) for k in self.keywords)
        kws = frozenset(k for k in kws if k)
        if not kws:
            raise IntegrityError(f"API {self.id} has no keywords")
        object.__setattr__(self, "keywords", kws)


@dataclass(frozen=True)
class AppRecord:
    id: int
    apis: frozenset

    def __post_init__(self):
        object.__setattr__(self, "apis", frozenset(self.apis))
        if not self.apis:
            raise IntegrityError(f"app {self.id} invokes no APIs")


@dataclass(frozen=True)
class Query:
    """An ordered list of distinct, normalized keywords."""

    keywords: tuple

    def __post_init__(self):
        kws = tuple(normalize_keyword(k) for k in self.keywords)
        if not kws or any(not k for k in kws):
            raise ParameterError("query needs at least one non-empty keyword")
        if len(set(kws)) != len(kws):
            raise ParameterError(f"duplicate keywords in query {kws}")
        object.__setattr__(self, "keywords", kws)

    @classmethod
    def parse(cls, keywords: Iterable[str]) -> "Query":
        """Normalize and drop repeats, keeping first-seen order."""
        seen = []
        for k in keywords:
            k = normalize_keyword(k)
            if k and k not in seen:
                seen.append(k)
        return cls(tuple(seen))

    def __len__(self):
        return len(self.keywords)

    def __iter__(self):
        return iter(self.keywords)


@dataclass(frozen=True)
class Ecosystem:
    apis: tuple
    apps: tuple

    def __post_init__(self):
        object.__setattr__(self, "apis", tuple(sorted(self.apis, key=lambda a: a.id)))
        object.__setattr__(self, "apps", tuple(sorted(self.apps, key=lambda a: a.id)))
        if not self.apps:
            raise EmptyInputError("ecosystem has no apps")
        ids = [a.id for a in self.apis]
        if len(set(ids)) != len(ids):
            raise IntegrityError("duplicate API ids")
        app_ids = [a.id for a in self.apps]
        if len(set(app_ids)) != len(app_ids):
            raise IntegrityError("duplicate app ids")
        known = set(ids)
        for app in self.apps:
            missing = sorted(app.apis - known)
            if missing:
                raise IntegrityError(f"app {app.id} references unknown API id {missing[0]}")

    def api_by_id(self) -> dict:
        return {a.id: a for a in self.apis}

    def to_dict(self) -> dict:
        return {
            "apis": [
                {"id": a.id, "name": a.name, "keywords": sorted(a.keywords)} for a in self.apis
            ],
            "apps": [{"id": app.id, "apis": sorted(app.apis)} for app in self.apps],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Ecosystem":
        if not isinstance(data, dict) or "apis" not in data or "apps" not in data:
            raise ParseError("expected an object with 'apis' and 'apps'")
        apis = []
        for i, raw in enumerate(data["apis"]):
            try:
                apis.append(ApiRecord(int(raw["id"]), str(raw.get("name", "")), frozenset(raw["keywords"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"apis[{i}]: bad record ({exc})") from exc
        apps = []
        for i, raw in enumerate(data["apps"]):
            try:
                ids = [int(x) for x in raw["apis"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"apps[{i}]: bad record ({exc})") from exc
            if len(set(ids)) != len(ids):
                raise IntegrityError(f"app {raw['id']} lists an API twice")
            apps.append(AppRecord(int(raw["id"]), frozenset(ids)))
        return cls(tuple(apis), tuple(apps))


def load_ecosystem(path, format: str = "ecosystem-json") -> Ecosystem:
    path = Path(path)
    if format not in FORMATS:
        raise ParameterError(f"unknown format {format!r}; expected one of {FORMATS}")
    if not path.exists():
        raise EmptyInputError(f"{path} does not exist")
    if format == "ecosystem-json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from exc
        return Ecosystem.from_dict(data)
    return _load_csv(path)


def _load_csv(path: Path) -> Ecosystem:
    apis: dict = {}
    apps: dict = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyInputError(f"{path} is empty")
        if [h.strip() for h in header] != CSV_HEADER:
            raise ParseError(f"expected header {','.join(CSV_HEADER)}", line=1)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ParseError(f"expected 4 fields, got {len(row)}", line=line)
            try:
                app_id, api_id = int(row[0]), int(row[1])
            except ValueError as exc:
                raise ParseError(f"non-integer id ({exc})", line=line) from exc
            members = apps.setdefault(app_id, [])
            if api_id in members:
                raise IntegrityError(f"line {line}: app {app_id} lists API {api_id} twice")
            members.append(api_id)
            if not row[2].strip() and not row[3].strip():
                # bare reference; the API must be defined on some other row
                continue
            keywords = frozenset(k for k in row[3].split(";") if k.strip())
            try:
                record = ApiRecord(api_id, row[2].strip(), keywords)
            except IntegrityError as exc:
                raise ParseError(str(exc), line=line) from exc
            previous = apis.setdefault(api_id, record)
            if previous != record:
                raise IntegrityError(f"line {line}: API id {api_id} redefined with different fields")
    if not apps:
        raise EmptyInputError(f"{path} has no data rows")
    return Ecosystem(
        tuple(apis.values()),
        tuple(AppRecord(a, frozenset(ids)) for a, ids in apps.items()),
    )


def save_ecosystem(e: Ecosystem, path, format: str = "ecosystem-json") -> None:
    path = Path(path)
    if format == "ecosystem-json":
        path.write_text(json.dumps(e.to_dict(), separators=(",", ":")) + "\n", encoding="utf-8")
        return
    if format != "app-api-csv":
        raise ParameterError(f"unknown format {format!r}")
    by_id = e.api_by_id()
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for app in e.apps:
            for api_id in sorted(app.apis):
                api = by_id[api_id]
                writer.writerow([app.id, api.id, api.name, ";".join(sorted(api.keywords))])


def _check_range(name, rng, upper=None):
    lo, hi = rng
    if lo < 1 or hi < lo:
        raise ParameterError(f"{name} range {rng} must satisfy 1 <= min <= max")
    if upper is not None and hi > upper:
        raise ParameterError(f"{name} max {hi} exceeds available {upper}")


def gen_synthetic(
    n_apis: int = 2000,
    n_apps: int = 6000,
    n_keywords: int = 300,
    keywords_per_api: Sequence[int] = (1, 3),
    apis_per_app: Sequence[int] = (2, 6),
    popularity_skew: float = 1.0,
    seed: int = 42,
) -> Ecosystem:
    """Generate a reproducible ecosystem with power-law API popularity.

    API ``i`` (0-based) is drawn into apps with weight ``(i + 1) ** -popularity_skew``,
    so low ids act as hubs. Every API is placed in at least one app so that
    the co-usage graph has a vertex for it.
    """
    for name, value in (("n_apis", n_apis), ("n_apps", n_apps), ("n_keywords", n_keywords)):
        if value < 1:
            raise ParameterError(f"{name} must be >= 1, got {value}")
    if popularity_skew <= 0:
        raise ParameterError("popularity_skew must be positive")
    _check_range("keywords_per_api", keywords_per_api, n_keywords)
    _check_range("apis_per_app", apis_per_app, n_apis)

    rng = np.random.default_rng(seed)
    vocab = [f"k{i:0{len(str(n_keywords - 1))}d}" for i in range(n_keywords)]
    apis = []
    for i in range(n_apis):
        k = int(rng.integers(keywords_per_api[0], keywords_per_api[1] + 1))
        picks = rng.choice(n_keywords, size=k, replace=False)
        apis.append(ApiRecord(i, f"api-{i}", frozenset(vocab[j] for j in picks)))

    weights = np.arange(1, n_apis + 1, dtype=float) ** -popularity_skew
    weights /= weights.sum()
    members = []
    for _ in range(n_apps):
        m = int(rng.integers(apis_per_app[0], apis_per_app[1] + 1))
        members.append(set(int(x) for x in rng.choice(n_apis, size=m, replace=False, p=weights)))

    # Every API must be invoked somewhere: swap each unused API into a random app
    # in place of a member that other apps still use, keeping app sizes fixed.
    usage = np.zeros(n_apis, dtype=int)
    for m in members:
        usage[list(m)] += 1
    for api_id in np.flatnonzero(usage == 0):
        api_id = int(api_id)
        app = members[int(rng.integers(n_apps))]
        spare = [a for a in sorted(app) if usage[a] > 1]
        if spare:
            app.discard(spare[0])
            usage[spare[0]] -= 1
        app.add(api_id)
        usage[api_id] += 1
    apps = tuple(AppRecord(i, frozenset(m)) for i, m in enumerate(members))
    return Ecosystem(tuple(apis), apps)


def app_keywords(e: Ecosystem, app: AppRecord, api_lookup: Optional[dict] = None) -> frozenset:
    lookup = api_lookup if api_lookup is not None else e.api_by_id()
    return frozenset().union(*(lookup[a].keywords for a in app.apis))


def derive_queries(e: Ecosystem, r_filter: Optional[Sequence[int]] = None) -> list:
    """Pair each app with the query formed by the union of its APIs' tags.

    With no ``r_filter`` only apps whose union has exactly two keywords are
    skipped; otherwise the union size must fall inside ``[lo, hi]``.
    """
    lookup = e.api_by_id()
    out = []
    for app in e.apps:
        kws = app_keywords(e, app, lookup)
        r = len(kws)
        if r_filter is None:
            if r == 2:
                continue
        elif not (r_filter[0] <= r <= r_filter[1]):
            continue
        out.append((Query(tuple(sorted(kws))), app))
    return out
