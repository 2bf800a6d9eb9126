"""Command line entry point: ``steinerrec <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import metrics
from .corpus import FORMATS, Query, derive_queries, gen_synthetic, load_ecosystem, save_ecosystem
from .errors import ParameterError, ParseError, RecommenderError, UncoverableKeywordError, IntegrityError, EmptyInputError
from .graph import build_graph, max_component, save_graph
from .pipeline import DEFAULTS, baseline, evaluate, recommend
from .ranker import DEPLOYMENT, EVALUATION
from .sampler import dump_samples

EXIT_ERROR = 1
EXIT_UNCOVERABLE = 2
EXIT_PARSE = 3

log = logging.getLogger("steinerrec")


def _guess_format(path: str, given):
    if given:
        return given
    return "app-api-csv" if str(path).lower().endswith(".csv") else "ecosystem-json"


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load(args):
    eco = load_ecosystem(args.input, _guess_format(args.input, args.format))
    return eco, max_component(build_graph(eco))


def _query(args) -> Query:
    if not args.query:
        raise ParameterError("--query is required")
    return Query.parse(args.query.split(","))


def _validate(args):
    for name in ("z", "p", "K"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise ParameterError(f"{name} must be >= 1, got {value}")
    theta = getattr(args, "theta", None)
    if theta is not None and not 0 <= theta <= 1:
        raise ParameterError(f"theta must lie in [0, 1], got {theta}")
    r_min, r_max = getattr(args, "r_min", None), getattr(args, "r_max", None)
    if r_min is not None and r_max is not None and r_min > r_max:
        raise ParameterError("--r-min exceeds --r-max")


def cmd_gen(args):
    eco = gen_synthetic(
        n_apis=args.n_apis,
        n_apps=args.n_apps,
        n_keywords=args.n_keywords,
        keywords_per_api=tuple(args.keywords_per_api),
        apis_per_app=tuple(args.apis_per_app),
        popularity_skew=args.skew,
        seed=args.seed,
    )
    if not args.out:
        sys.stdout.write(json.dumps(eco.to_dict(), indent=1) + "\n")
    else:
        save_ecosystem(eco, args.out, _guess_format(args.out, args.format))
    return 0


def cmd_build_graph(args):
    _, g = _load(args)
    if args.out:
        save_graph(g, args.out)
    else:
        sys.stdout.write(json.dumps(g.to_dict(), indent=1) + "\n")
    return 0


def cmd_recommend(args):
    eco, g = _load(args)
    q = _query(args)
    recs, outcomes = recommend(
        g, q, z=args.z, p=args.p, K=args.K, theta=args.theta, seed=args.seed,
        mode=DEPLOYMENT, workers=args.workers,
    )
    if args.samples_out:
        dump_samples([o for o in outcomes if o.nodes is not None], args.samples_out)
    names = {a.id: a.name for a in eco.apis}
    body = recs.to_dict(names)
    body.update(query=list(q.keywords), z=args.z, p=args.p, seed=args.seed,
                skipped_samples=[o.index for o in outcomes if o.nodes is None])
    _emit(_dumps(body), args.out)
    return 0


def cmd_baseline(args):
    eco, g = _load(args)
    q = _query(args)
    recs = baseline(g, q, K=args.K, theta=args.theta, limit=args.limit or args.z)
    names = {a.id: a.name for a in eco.apis}
    body = recs.to_dict(names)
    body.update(query=list(q.keywords), method="baseline", limit=args.limit or args.z)
    if len(recs) >= 2:
        body["mild"] = metrics.mild(recs.lists)
    _emit(_dumps(body), args.out)
    return 0


def _pairs(args, eco):
    pairs = derive_queries(eco, (args.r_min, args.r_max))
    if args.max_queries:
        pairs = pairs[: args.max_queries]
    if not pairs:
        raise EmptyInputError("no app yields a query inside the requested r range")
    return pairs


def _run_cells(args, eco, g, z_values, p_values):
    """Per-instance reports and per-(z, p) aggregates, ordered by cell."""
    pairs = _pairs(args, eco)
    per_cell = {(z, p): [] for p in p_values for z in z_values}
    lines = []
    failures = 0
    for p in p_values:
        for app_id, result in evaluate(
            eco, pairs, z_values=z_values, p=p, K=args.K, theta=args.theta, seed=args.seed,
            leave_one_out=args.leave_one_out, timing=not args.no_timing,
            workers=args.workers, graph=g,
        ):
            if isinstance(result, Exception):
                failures += 1
                lines.append({"app_id": app_id, "p": p, "error": f"{type(result).__name__}: {result}"})
                continue
            for rep in result:
                per_cell[(rep.z, rep.p)].append(rep)
                lines.append(rep.to_dict())
    return lines, per_cell, failures


def cmd_evaluate(args):
    eco, g = _load(args)
    lines, per_cell, failures = _run_cells(args, eco, g, [args.z], [args.p])
    agg = metrics.aggregate(per_cell[(args.z, args.p)])
    agg.update(z=args.z, p=args.p, failed=failures)
    text = "".join(json.dumps(x, sort_keys=True) + "\n" for x in lines)
    text += json.dumps({"aggregate": agg}, sort_keys=True) + "\n"
    _emit(text, args.out)
    return 0


def cmd_sweep(args):
    eco, g = _load(args)
    z_values = sorted(set(args.z_values))
    p_values = sorted(set(args.p_values or [args.p]))
    _, per_cell, failures = _run_cells(args, eco, g, z_values, p_values)
    out = []
    for p in p_values:
        for z in z_values:
            agg = metrics.aggregate(per_cell[(z, p)])
            agg.update(z=z, p=p)
            out.append(json.dumps({"aggregate": agg}, sort_keys=True) + "\n")
    _emit("".join(out), args.out)
    return 0


def _common(sp, query=True):
    sp.add_argument("--input", required=True, help="ecosystem file")
    sp.add_argument("--format", choices=FORMATS, help="input format (default: by extension)")
    sp.add_argument("--out", help="write output here instead of stdout")
    if query:
        sp.add_argument("--query", help="comma-separated keywords, e.g. mapping,payments")


def _search_opts(sp):
    sp.add_argument("-z", "--z", type=int, default=DEFAULTS["z"], help="number of samples")
    sp.add_argument("-p", "--p", type=int, default=DEFAULTS["p"], help="vertices per sample")
    sp.add_argument("-K", "--K", type=int, default=DEFAULTS["K"], help="lists to return")
    sp.add_argument("--theta", type=float, default=DEFAULTS["theta"], help="diversity threshold")
    sp.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    sp.add_argument("--workers", type=int, default=1, help="processes for per-sample search")


def _eval_opts(sp):
    sp.add_argument("--r-min", type=int, default=3)
    sp.add_argument("--r-max", type=int, default=6)
    sp.add_argument("--leave-one-out", action="store_true",
                    help="drop the evaluated app's co-usage from the graph")
    sp.add_argument("--max-queries", type=int, help="evaluate only the first N derived queries")
    sp.add_argument("--no-timing", action="store_true", help="report time_seconds as null")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steinerrec", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="generate a synthetic ecosystem")
    sp.add_argument("--n-apis", type=int, default=2000)
    sp.add_argument("--n-apps", type=int, default=6000)
    sp.add_argument("--n-keywords", type=int, default=300)
    sp.add_argument("--keywords-per-api", type=int, nargs=2, default=(1, 3), metavar=("MIN", "MAX"))
    sp.add_argument("--apis-per-app", type=int, nargs=2, default=(2, 6), metavar=("MIN", "MAX"))
    sp.add_argument("--skew", type=float, default=1.0, help="power-law exponent of API popularity")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--format", choices=FORMATS)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("build-graph", help="write the co-usage graph snapshot")
    _common(sp, query=False)
    sp.set_defaults(func=cmd_build_graph)

    sp = sub.add_parser("recommend", help="top-K diverse API compositions for a query")
    _common(sp)
    _search_opts(sp)
    sp.add_argument("--samples-out", help="dump sampled vertex sets as JSON")
    sp.set_defaults(func=cmd_recommend)

    sp = sub.add_parser("baseline", help="rank the cheapest trees of the whole graph")
    _common(sp)
    _search_opts(sp)
    sp.add_argument("--limit", type=int, help="full trees to collect (default: z)")
    sp.set_defaults(func=cmd_baseline)

    sp = sub.add_parser("evaluate", help="metrics over queries derived from apps")
    _common(sp, query=False)
    _search_opts(sp)
    _eval_opts(sp)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("sweep", help="aggregate metrics over a z/p grid")
    _common(sp, query=False)
    _search_opts(sp)
    _eval_opts(sp)
    sp.add_argument("--z-values", type=int, nargs="+", default=list(range(10, 101, 10)))
    sp.add_argument("--p-values", type=int, nargs="+", help="sample sizes (default: -p)")
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _validate(args)
        return args.func(args)
    except UncoverableKeywordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCOVERABLE
    except (ParseError, IntegrityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RecommenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
