"""``ubkit`` command line.

JSON goes to standard output (or ``--output``); human-readable summaries go
to standard error. Exit codes: 0 positive verdict, 3 negative verdict,
1 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from . import constructions as cons
from .certifiers import (
    DEFAULT_SEED,
    SeesawOptions,
    certify_unambiguous_locc,
    is_extendible,
    is_genuinely_unextendible,
    verify_detecting_certificate,
)
from .demos import DEMOS
from .documents import (
    DocumentError,
    certificate_report_to_dict,
    certificates_from_report,
    dumps,
    read_json,
    report_document,
    state_to_dict,
    stateset_from_dict,
    stateset_to_dict,
)
from .errors import UBKitError
from .reciprocal import theorem3_analysis

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 3

log = logging.getLogger("ubkit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_shape(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace("x", ",").split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; use e.g. 2,2")


def parse_indices(text: str) -> list[tuple]:
    """``"0,0;1,1;inf,inf"`` -> ``[(0, 0), (1, 1), (INF, INF)]``."""
    try:
        return [tuple(cons.extended(v) for v in group.split(",")) for group in text.split(";") if group.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index set {text!r}; use e.g. 0,0;1,1;inf,inf")


def parse_points(text: str):
    """Comma-separated complex values, or ``spread`` for :func:`spread_theorem2_points`."""
    if text.strip().lower() == "spread":
        return "spread"
    try:
        return [cons.extended(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point list {text!r}; use e.g. 1,2,3,4 or 1+2j,...")


def _points(points, shape):
    return cons.spread_theorem2_points(shape) if points == "spread" else points


def default_seed() -> int:
    env = os.environ.get("UBKIT_SEED")
    return int(env) if env else DEFAULT_SEED


def _add_search_flags(p):
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $UBKIT_SEED or 0)")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--max-iterations", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-8, help="orthogonality tolerance for certificates")
    p.add_argument("--overlap-threshold", type=float, default=1e-6)


def _options(args) -> SeesawOptions:
    seed = args.seed if args.seed is not None else default_seed()
    return SeesawOptions(restarts=args.restarts, max_iterations=args.max_iterations, seed=seed,
                         membership_tol=args.tol, overlap_threshold=args.overlap_threshold)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ubkit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a state family")
    p.add_argument("family", choices=["minimal-gupb", "theorem2-basis", "cross-set", "fourier-pairs",
                                      "ghz-triple", "example2", "max-entangled", "computational"])
    p.add_argument("--shape", type=parse_shape)
    p.add_argument("--indices", type=parse_indices, help="index tuples, e.g. 0,0;1,1;inf,inf")
    p.add_argument("--points", type=parse_points, help="complex points, e.g. 1,2,3,4, or 'spread'")
    p.add_argument("--k", type=int, help="number of qubits for ghz-triple")
    p.add_argument("--x", help="bitstring for ghz-triple")
    p.add_argument("--d", type=int, help="local dimension for cross-set, fourier-pairs, max-entangled")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--output", "-o")

    p = sub.add_parser("certify", help="certify a state set document")
    p.add_argument("args", nargs="+", metavar="[MODE] INPUT",
                   help="mode: gub | locc-unambiguous | extendible | verify-only")
    p.add_argument("--verify-only", action="store_true",
                   help="re-verify the certificates embedded in a report document")
    _add_search_flags(p)
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    p.add_argument("--output", "-o")

    p = sub.add_parser("reciprocal", help="reciprocal basis and duality analysis")
    p.add_argument("input")
    _add_search_flags(p)
    p.add_argument("--output", "-o")

    p = sub.add_parser("demo", help="reproduce a worked example end to end")
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--shape", type=parse_shape, default=(2, 2))
    p.add_argument("--points", type=parse_points, help="complex points, or 'spread'")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--x", default=None)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--max-subsets", type=int, default=50)
    _add_search_flags(p)
    p.add_argument("--output", "-o")
    return parser


def _emit(doc: dict, output) -> None:
    text = dumps(doc)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_construct(args) -> int:
    fam = args.family

    def need(name):
        value = getattr(args, name)
        if value is None:
            raise UsageError(f"{fam} needs --{name}")
        return value

    if fam == "minimal-gupb":
        S = cons.minimal_gupb(need("shape"), args.indices)
    elif fam == "theorem2-basis":
        S = cons.theorem2_basis(need("shape"), _points(args.points, args.shape))
    elif fam == "cross-set":
        S = cons.cross_set(need("d"))
    elif fam == "fourier-pairs":
        S = cons.fourier_pair_set(need("d"))
    elif fam == "ghz-triple":
        S = cons.ghz_triple(need("k"), need("x"))
    elif fam == "example2":
        S = cons.example2_basis()
    elif fam == "computational":
        S = cons.computational_basis(need("shape"))
    else:
        from .linalg import StateSet
        state = cons.max_entangled_state(need("d"), args.m, args.n)
        S = StateSet(state.shape, (state,))
    _emit(stateset_to_dict(S), args.output)
    _say(f"{fam}: {len(S)} states on {S.shape}")
    return EXIT_OK


def _split_certify_args(args):
    modes = ("gub", "locc-unambiguous", "extendible", "verify-only")
    items = list(args.args)
    if args.verify_only:
        if len(items) != 1:
            raise UsageError("--verify-only takes exactly one report file")
        return "verify-only", items[0]
    if len(items) != 2 or items[0] not in modes:
        raise UsageError(f"usage: certify MODE INPUT with MODE in {', '.join(modes)}")
    return items[0], items[1]


def cmd_certify(args, argv) -> int:
    mode, path = _split_certify_args(args)
    if mode == "verify-only":
        return _verify_only(path, args)
    opts = _options(args)
    S = stateset_from_dict(_stateset_doc(read_json(path)))
    start = time.perf_counter()
    if mode == "locc-unambiguous":
        report = certify_unambiguous_locc(S, opts)
        body = certificate_report_to_dict(report)
        positive = report.distinguishable
        summary = report.verdict
        if not positive:
            summary += f" (members {', '.join(str(i + 1) for i in report.failing)})"
    elif mode == "gub":
        verdict = is_genuinely_unextendible(S, opts)
        body = {"verdict": verdict.kind}
        if verdict.kind == "UBnotGUB":
            body["unextendible_subset"] = [i + 1 for i in verdict.culprit]
        elif verdict.kind == "Extendible":
            body["witness"] = state_to_dict(verdict.witness)
            body["residual"] = verdict.residual
        positive = verdict.kind == "GUB"
        summary = verdict.kind
    else:
        verdict = is_extendible(S, opts)
        if verdict.extendible:
            body = {"verdict": "ExtendibleWith", "witness": state_to_dict(verdict.witness),
                    "residual": verdict.residual}
        else:
            body = {"verdict": "NoProductFound", "best_value": verdict.best_value,
                    "restarts_used": verdict.restarts_used, "heuristic": True}
        positive = verdict.extendible
        summary = body["verdict"]
    if args.timing:
        body["timing_seconds"] = time.perf_counter() - start
    _emit(report_document(argv, opts, S, mode=mode, **body), args.output)
    _say(f"{mode}: {summary}")
    return EXIT_OK if positive else EXIT_NEGATIVE


def _stateset_doc(doc):
    return doc["input"] if "states" not in doc and "input" in doc else doc


def _verify_only(path, args) -> int:
    doc = read_json(path)
    S = stateset_from_dict(_stateset_doc(doc))
    certs = certificates_from_report(doc, S.shape)
    if not certs:
        raise DocumentError(f"{path}: no certificates to verify")
    ok = True
    for k, state in certs:
        good = verify_detecting_certificate(S, k, state, args.tol, args.overlap_threshold)
        ok &= good
        _say(f"member {k + 1}: {'verified' if good else 'FAILED'}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_reciprocal(args, argv) -> int:
    opts = _options(args)
    S = stateset_from_dict(_stateset_doc(read_json(args.input)))
    a = theorem3_analysis(S, opts)
    body = {
        "reciprocal": stateset_to_dict(a.dual),
        "classification": a.classification.tag,
        "reciprocal_classification": a.dual_classification.tag,
        "locc_unambiguous": a.distinguishable,
        "entangled_reciprocal_members": [i + 1 for i in a.entangled_dual_members],
        "pairing": a.pairing,
    }
    if a.certificates is not None:
        body["certification"] = certificate_report_to_dict(a.certificates)
    _emit(report_document(argv, opts, S, **body), args.output)
    _say(f"basis: {a.classification.tag}; reciprocal: {a.dual_classification.tag}; "
         f"LOCC-unambiguous: {a.distinguishable}" + (f"; {a.pairing}" if a.pairing else ""))
    return EXIT_OK


def cmd_demo(args, argv) -> int:
    opts = _options(args)
    name = args.name
    if name == "theorem2":
        result = DEMOS[name](args.shape, _points(args.points, args.shape), opts, args.max_subsets)
    elif name == "ghz":
        x = args.x if args.x is not None else "0" + "1" * (args.k - 1)
        result = DEMOS[name](args.k, x, opts)
    elif name == "maxent":
        result = DEMOS[name](args.d, opts)
    else:
        result = DEMOS[name](opts)
    _emit(report_document(argv, opts, None, **result.to_dict()), args.output)
    for c in result.claims:
        _say(f"[{'PASS' if c.passed else 'FAIL'}] {c.text}" + (f"  ({c.detail})" if c.detail and not c.passed else ""))
    return EXIT_OK if result.passed else EXIT_NEGATIVE


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        if args.command == "construct":
            return cmd_construct(args)
        if args.command == "certify":
            return cmd_certify(args, argv)
        if args.command == "reciprocal":
            return cmd_reciprocal(args, argv)
        return cmd_demo(args, argv)
    except UsageError as exc:
        _say(f"ubkit: error: {exc}")
        return EXIT_ERROR
    except (UBKitError, argparse.ArgumentTypeError) as exc:
        _say(f"ubkit: error: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
