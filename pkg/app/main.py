"""Command-line entry point: python -m app.main <verb> ..."""
import argparse
import json
import logging
import sys
from typing import List, Optional

from app.api import router
from app.core.config import settings

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="app.main", description=f"{settings.APP_NAME}: exact Leibniz algebra checks")
    parser.add_argument("--format", choices=("json", "text"), default="text", help="report format")
    parser.add_argument("--log-level", default=None, help="override LOG_LEVEL")
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("verify", help="Leibniz, Lie and nilradical report for an algebra or spec file")
    p.add_argument("file")

    p = verbs.add_parser("series", help="derived and lower central series dimensions")
    p.add_argument("file")

    p = verbs.add_parser("invariants", help="invariant signature")
    p.add_argument("file")

    p = verbs.add_parser("build-t", help="structure constants of T(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = verbs.add_parser("transform", help="apply a shift, basis change or recombination to a spec")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--shift", metavar="MU_JSON")
    group.add_argument("--basis", metavar="G_JSON")
    group.add_argument("--recombine", metavar="M_JSON")
    p.add_argument("--out", default=None)

    p = verbs.add_parser("normalize", help="canonical form of an n = 4 spec")
    p.add_argument("file")
    p.add_argument("--out", default=None)

    p = verbs.add_parser("constraints", help="symbolic constraint derivation")
    sub = p.add_subparsers(dest="action", required=True)
    d = sub.add_parser("derive")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--f", type=int, required=True)
    d.add_argument("--gauge", action="store_true", help="reduce modulo X -> X + mu shifts")

    p = verbs.add_parser("catalog", help="classified algebra catalog")
    p.add_argument("--catalog", default=None, help="catalog file (default: shipped catalog)")
    sub = p.add_subparsers(dest="action", required=True)
    v = sub.add_parser("verify")
    v.add_argument("--entry", default=None)
    v.add_argument("--samples", nargs="*", default=None, help='"default" or points like a=2,s11=1')
    sub.add_parser("list")
    dist = sub.add_parser("distinctness")
    dist.add_argument("--entries", nargs="*", default=None)

    p = verbs.add_parser("random-spec", help="seeded random extension spec")
    p.add_argument("--seed", type=int, default=settings.RANDOM_SEED)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--invalid", action="store_true", help="perturb one entry")
    p.add_argument("--out", default=None)
    return parser


def dispatch(args: argparse.Namespace) -> router.CommandResult:
    verb = args.verb
    if verb == "verify":
        return router.execute(router.verify_file, args.file)
    if verb == "series":
        return router.execute(router.series, args.file)
    if verb == "invariants":
        return router.execute(router.invariants, args.file)
    if verb == "build-t":
        return router.execute(router.build_t, args.n, args.out)
    if verb == "transform":
        return router.execute(router.transform, args.file, args.shift, args.basis, args.recombine, args.out)
    if verb == "normalize":
        return router.execute(router.normalize, args.file, args.out)
    if verb == "constraints":
        return router.execute(router.constraints_derive, args.n, args.f, args.gauge)
    if verb == "catalog":
        if args.action == "verify":
            return router.execute(router.catalog_verify, args.entry, args.samples, args.catalog)
        if args.action == "list":
            return router.execute(router.catalog_list, args.catalog)
        return router.execute(router.catalog_distinctness, args.entries, args.catalog)
    if verb == "random-spec":
        return router.execute(router.random_spec_command, args.seed, args.n, args.f, args.invalid, args.out)
    raise ValueError(f"Unsupported verb: {verb}")


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one verb and print its report

    Returns:
        0 on success, 1 when a verification or check fails, 2 on input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return router.EXIT_OK if e.code == 0 else router.EXIT_INPUT

    level = args.log_level.upper() if args.log_level else settings.effective_log_level
    if level not in getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))():
        print(f"error: unknown log level {args.log_level}", file=sys.stderr)
        return router.EXIT_INPUT
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    result = dispatch(args)
    if args.format == "json":
        print(json.dumps(result.report, indent=2, sort_keys=True))
    else:
        print(result.text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(run())
