"""Command-line surface: frames, bounds, experiments, verification.

Every command is deterministic given its full flag set; experiment output
is CSV (or the equivalent JSON projection) with 17-significant-digit
floats, LF line endings and '.' decimals.  When --out is given, a sidecar
<out>.meta.json records the command, package version, all parameters and
the wall time, so published figures are reproducible from metadata alone.

Exit codes: 0 ok, 2 non-prime, 3 wrong residue class, 4 parameter/usage
error, 5 malformed input, 6 duplicate support, 7 verification failure.
"""

from __future__ import annotations

import argparse
import csv as _csv
import json
import sys
import time

import numpy as np

from . import __version__, bounds, experiments, frame, verify
from .errors import (
    EXIT_PARAMETER_RANGE,
    EXIT_VERIFY_FAILED,
    MalformedInputError,
    PaleyRipError,
    ParameterRangeError,
    exit_code_for,
)
from .frame import SupportSet, reduce_support

RIPCURVE_COLUMNS = ("j", "d", "gershgorin", "skew_linear", "dembo_recursive", "generalized_dembo")
DEMBORATIO_COLUMNS = ("j", "lambda_max", "dembo_bound", "gershgorin_bound",
                      "dembo_ratio", "gershgorin_ratio")
CONJECTURE_COLUMNS = ("trial", "k", "best_i", "best_j", "ratio", "satisfied")


def _fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(row[c]) for c in columns) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to the parameter-range exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMETER_RANGE, f"{self.prog}: error: {message}\n")


def _parse_support(p: int, text: str) -> tuple[tuple[int, ...], list]:
    try:
        values = [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise MalformedInputError(f"cannot parse support list {text!r}") from exc
    reduced, changed = reduce_support(p, values)
    for before, after in changed:
        print(f"warning: support element {before} reduced to {after} mod {p}",
              file=sys.stderr)
    return reduced, changed


def _ripcurve_rows(est: experiments.RipEstimate) -> list[dict]:
    rows = []
    for j in range(1, est.k + 1):
        row = {
            "j": j,
            "d": float(est.d[j - 1]),
            "gershgorin": bounds.bound_gershgorin(j, est.p),
            "skew_linear": bounds.bound_skew(j, est.p, exact=False),
            "dembo_recursive": bounds.bound_dembo_recursive(j, est.p) if j >= 3 else None,
            "generalized_dembo": bounds.bound_generalized_dembo(j, est.p) if j >= 3 else None,
        }
        rows.append(row)
    return rows


# --- command handlers: each returns (text, extra_meta, exit_code) -----------


def _cmd_frame(args):
    f = frame.build_frame(args.p)
    return _json_text(frame.frame_to_json(f)), {}, 0


def _cmd_gram(args):
    support, _ = _parse_support(args.p, args.support)
    if args.method == "direct":
        g = frame.gram_direct(frame.build_frame(args.p), support)
    else:
        g = frame.gram_analytic(args.p, support)
    return _json_text(frame.gram_to_json(args.p, support, g)), {}, 0


def _cmd_bounds(args):
    report = bounds.build_report(args.p, args.k, beta=args.beta)
    return _json_text(report.to_dict()), {}, 0


def _cmd_estimate(args):
    if args.trials == 1:
        est = experiments.estimate_rip_single(args.p, args.k, args.seed)
    else:
        est = experiments.estimate_rip_worst(args.p, args.k, args.trials, args.seed,
                                             keep_supports=False)
    rows = _ripcurve_rows(est)
    if args.format == "json":
        doc = {"p": est.p, "k": est.k, "seed": est.seed, "trials": est.trials, "rows": rows}
        return _json_text(doc), {}, 0
    return _csv_text(RIPCURVE_COLUMNS, rows), {}, 0


def _cmd_fit(args):
    try:
        with open(args.input, newline="") as fh:
            reader = _csv.DictReader(fh)
            if reader.fieldnames is None or "j" not in reader.fieldnames or "d" not in reader.fieldnames:
                raise MalformedInputError(
                    f"{args.input}: expected ripcurve CSV with 'j' and 'd' columns"
                )
            js, ds = [], []
            for line in reader:
                js.append(int(line["j"]))
                ds.append(float(line["d"]))
    except OSError as exc:
        raise MalformedInputError(f"cannot read {args.input}: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise MalformedInputError(f"{args.input}: malformed ripcurve CSV: {exc}") from exc
    if not js or js != list(range(1, len(js) + 1)):
        raise MalformedInputError(f"{args.input}: 'j' column must run 1..k")
    # the CSV carries no modulus and the fit never looks at it
    est = experiments.RipEstimate(p=0, k=len(js), seed=0, trials=0, d=np.asarray(ds))
    beta, intercept, r2 = experiments.fit_power_law(est, j_min=args.jmin)
    doc = {"beta": beta, "intercept": intercept, "r2": r2,
           "window": {"j_min": args.jmin, "k": len(js)}}
    return _json_text(doc), {}, 0


def _cmd_demboratio(args):
    rows = [
        {"j": r.j, "lambda_max": r.lambda_max, "dembo_bound": r.dembo_bound,
         "gershgorin_bound": r.gershgorin_bound, "dembo_ratio": r.dembo_ratio,
         "gershgorin_ratio": r.gershgorin_ratio}
        for r in experiments.dembo_ratio_study(args.p, args.k, args.seed)
    ]
    if args.format == "json":
        doc = {"p": args.p, "k": args.k, "seed": args.seed, "rows": rows}
        return _json_text(doc), {}, 0
    return _csv_text(DEMBORATIO_COLUMNS, rows), {}, 0


def _record_doc(rec: experiments.ConjectureRecord) -> dict:
    return {
        "p": rec.p,
        "support": list(rec.support),
        "pair": list(rec.pair),
        "pair_values": [rec.support[rec.pair[0]], rec.support[rec.pair[1]]],
        "numerator": rec.numerator,
        "ratio": rec.ratio,
        "alpha": rec.alpha,
        "satisfied": rec.satisfied,
        "zero_terms": rec.zero_terms,
    }


def _cmd_conjecture(args):
    if args.support is not None:
        support, _ = _parse_support(args.p, args.support)
        if args.peel:
            trace = experiments.greedy_peel(args.p, SupportSet(args.p, support),
                                            args.alpha, args.m_alpha)
            doc = {"p": args.p, "alpha": args.alpha, "m_alpha": args.m_alpha,
                   "steps": [_record_doc(rec) for rec in trace],
                   "all_satisfied": all(rec.satisfied for rec in trace)}
            return _json_text(doc), {}, 0
        rec = experiments.conjecture_search(args.p, SupportSet(args.p, support), args.alpha)
        return _json_text(_record_doc(rec)), {}, 0
    if args.k is None:
        raise ParameterRangeError("conjecture scan mode needs --k (or pass --support)")
    summary = experiments.conjecture_scan(args.p, args.k, args.trials, args.alpha, args.seed)
    rows = [
        {"trial": t, "k": summary.k, "best_i": r.pair[0], "best_j": r.pair[1],
         "ratio": r.ratio, "satisfied": r.satisfied}
        for t, r in enumerate(summary.records)
    ]
    meta = {
        "summary": {
            "fraction_satisfied": summary.fraction_satisfied,
            "worst_ratio": summary.worst_ratio,
            "worst_support": list(summary.worst_support),
        }
    }
    if args.format == "json":
        doc = {"p": summary.p, "k": summary.k, "trials": summary.trials,
               "seed": summary.seed, "alpha": summary.alpha,
               "rows": rows, **meta}
        return _json_text(doc), meta, 0
    print(f"summary: fraction_satisfied={_fmt(summary.fraction_satisfied)} "
          f"worst_ratio={_fmt(summary.worst_ratio)}", file=sys.stderr)
    return _csv_text(CONJECTURE_COLUMNS, rows), meta, 0


def _cmd_verify(args):
    report = verify.run_verification(args.p)
    code = 0 if report["all_passed"] else EXIT_VERIFY_FAILED
    if code != 0:
        print(f"verification failed: {', '.join(report['failed'])}", file=sys.stderr)
    return _json_text(report), {}, code


def build_parser() -> _Parser:
    parser = _Parser(prog="paleyrip", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"paleyrip {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, *, k=False, seed=False, trials=False,
            alpha=False, beta=False, fmt=None, support=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        if name != "fit":
            sp.add_argument("--p", type=int, required=True, help="prime modulus")
        if k:
            sp.add_argument("--k", type=int, required=(name != "conjecture"),
                            default=None, help="sparsity / support size")
        if seed:
            sp.add_argument("--seed", type=int, default=0, help="64-bit master seed")
        if trials:
            sp.add_argument("--trials", type=int, default=1, help="number of random supports")
        if alpha:
            sp.add_argument("--alpha", type=float, default=0.8, help="conjecture threshold")
        if beta:
            sp.add_argument("--beta", type=float, default=None,
                            help="include the conditional k^beta bound")
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"), default=fmt)
        if support:
            sp.add_argument("--support", type=str, default=None,
                            help="comma-separated residues, reduced mod p")
        sp.add_argument("--out", type=str, default=None, help="output file (default stdout)")
        return sp

    add("frame", _cmd_frame, "emit the measurement matrix as JSON")
    gram = add("gram", _cmd_gram, "emit a Gramian submatrix as JSON", support=True)
    gram.add_argument("--method", choices=("analytic", "direct"), default="analytic")
    add("bounds", _cmd_bounds, "evaluate every bound family at (p, k)", k=True, beta=True)
    add("estimate", _cmd_estimate, "empirical RIP curve d(j) as ripcurve CSV",
        k=True, seed=True, trials=True, fmt="csv")
    fit = add("fit", _cmd_fit, "power-law fit of a ripcurve CSV")
    fit.add_argument("--input", type=str, required=True, help="ripcurve CSV path")
    fit.add_argument("--jmin", type=int, default=experiments.DEFAULT_FIT_JMIN,
                     help="first order included in the fit window")
    add("demboratio", _cmd_demboratio, "bound-sharpness study as demboratio CSV",
        k=True, seed=True, fmt="csv")
    conj = add("conjecture", _cmd_conjecture, "one-sided difference-set pair search",
               k=True, seed=True, trials=True, alpha=True, fmt="csv", support=True)
    conj.add_argument("--peel", action="store_true",
                      help="with --support: peel best pairs until < m_alpha remain")
    conj.add_argument("--m-alpha", dest="m_alpha", type=int, default=5,
                      help="minimum support size the peeling keeps searching at")
    add("verify", _cmd_verify, "run the identity suite; exit 7 on failure")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        text, extra_meta, code = args.func(args)
    except PaleyRipError as exc:
        print(f"paleyrip {args.command}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    wall = time.monotonic() - t0

    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        params = {
            key: value for key, value in sorted(vars(args).items())
            if key not in ("func", "out") and not key.startswith("_")
        }
        meta = {
            "command": args.command,
            "version": __version__,
            "parameters": params,
            "seed": getattr(args, "seed", None),
            "wall_time_s": wall,
            **extra_meta,
        }
        with open(f"{args.out}.meta.json", "w") as fh:
            fh.write(_json_text(meta))
    else:
        sys.stdout.write(text)
    return code


def entry():  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
