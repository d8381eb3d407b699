"""Command-line front end.

Subcommands: gen, cf, stream, asymp, verify, paper-examples. Output is
deterministic (decimal-string serialization, no timestamps, no locale); the
same invocation always produces the same bytes.

Exit codes: 0 success, 2 validation error, 3 bit budget exceeded,
4 internal invariant violation (a failing check or an oracle mismatch).
"""

import argparse
import json
import sys

from mpmath import mp

from . import catalog
from .asymptotics import full_report
from .cf import cf_text, expand_rational
from .exceptions import (
    BitBudgetExceeded,
    EngelError,
    IdentityViolation,
    InsufficientFactors,
    InvalidSpec,
    NegativeGap,
)
from .expansion import SeriesSource, partial_cf, stream
from .sequences import (
    BitBudget,
    FactorSequence,
    SecondOrderSpec,
    ThirdOrderSpec,
    from_factors,
    generate_recurrence,
    ones_tail,
    parse_spec_line,
)
from .verify import run_generic_suite, run_identities_suite, run_lift_suite, run_z2_suite

SEQ_HEADER = "# engel-seq v1"


def _csv_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    parser.add_argument("--bits", type=int, default=1 << 26,
                        help="total bit budget for generated terms (default 67108864)")
    parser.add_argument("--digits", type=int, default=50,
                        help="working precision in decimal digits (default 50)")
    parser.add_argument("--out", type=str, default=None, help="write output to this path")


def _add_source(parser: argparse.ArgumentParser):
    parser.add_argument("--z", type=str, default=None, help="factor list z2,z3,...")
    parser.add_argument("--d1", type=int, default=None, help="second-order exponent d1")
    parser.add_argument("--G", type=str, default=None, help="G coefficients, constant term first")
    parser.add_argument("--e1", type=int, default=None, help="third-order exponent e1")
    parser.add_argument("--e2", type=int, default=None, help="third-order exponent e2")
    parser.add_argument("--H", type=str, default=None, help="H terms i,j,coeff separated by ';'")
    parser.add_argument("--u", type=int, default=None, help="power-sum base (factors u,1,1,...)")
    parser.add_argument("--pow2", action="store_true",
                        help="with --u: the exponent doubling series sum u^(-2^k)")
    parser.add_argument("--spec-file", type=str, default=None,
                        help="read a one-line recurrence spec from this file")


def _source_from_args(args):
    picked = []
    if args.z is not None:
        zs = _csv_ints(args.z)
        picked.append(FactorSequence(zs))
    if args.d1 is not None or args.G is not None:
        if args.d1 is None or args.G is None:
            raise InvalidSpec("--d1 and --G must be given together")
        picked.append(SecondOrderSpec(args.d1, _csv_ints(args.G)).validate())
    if args.e1 is not None or args.e2 is not None or args.H is not None:
        if None in (args.e1, args.e2, args.H):
            raise InvalidSpec("--e1, --e2 and --H must be given together")
        terms = tuple(tuple(int(v) for v in chunk.split(",")) for chunk in args.H.split(";"))
        picked.append(ThirdOrderSpec(args.e1, args.e2, terms).validate())
    if args.u is not None:
        # --pow2 names the classical doubling exponents; --u alone already
        # denotes the same ones-tail source.
        picked.append(ones_tail(args.u))
    elif args.pow2:
        raise InvalidSpec("--pow2 requires --u")
    if args.spec_file is not None:
        with open(args.spec_file, "r", encoding="ascii") as fh:
            picked.append(parse_spec_line(fh.read().strip()))
    if len(picked) != 1:
        raise InvalidSpec("give exactly one input source (--z | --d1/--G | --e1/--e2/--H | --u | --spec-file)")
    return picked[0]


def _budget(args) -> BitBudget:
    if args.bits < 64:
        raise InvalidSpec("--bits must be at least 64")
    return BitBudget.from_total(args.bits)


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (text, exit_code)
# ---------------------------------------------------------------------------


def cmd_gen(args) -> tuple[str, int]:
    source = _source_from_args(args)
    if args.n < 1:
        raise InvalidSpec("--n must be >= 1")
    budget = _budget(args)
    if isinstance(source, FactorSequence):
        terms = list(from_factors(source, args.n, budget).x)
        z_comment = ",".join(str(v) for v in source.z)
    else:
        terms = generate_recurrence(source, args.n, budget)
        z_comment = None
    if args.json:
        payload = {"x": [str(v) for v in terms]}
        if z_comment is not None:
            payload["z"] = z_comment
        return json.dumps(payload) + "\n", 0
    lines = [SEQ_HEADER]
    if z_comment is not None:
        lines.append(f"# z: {z_comment}")
    lines.extend(str(v) for v in terms)
    return "\n".join(lines) + "\n", 0


def cmd_cf(args) -> tuple[str, int]:
    source = _source_from_args(args)
    budget = _budget(args)
    part = partial_cf(source, args.n, budget)
    code = 0
    if args.check == "oracle":
        src = SeriesSource(source, budget)
        value = src.partial_sum(args.n)
        oracle = expand_rational(value)
        if part.cf.is_canonical:
            ok = part.cf.coeffs == oracle.coeffs
        else:  # the u = 2 split representative: same value, length + 1
            ok = (part.cf.coeffs[:-2] + (part.cf.coeffs[-2] + 1,) == oracle.coeffs)
        if not ok:
            raise IdentityViolation(f"partial expansion disagrees with the Euclidean oracle at n={args.n}")
    if args.json:
        src = SeriesSource(source, budget)
        payload = {
            "n": part.n,
            "class": src.series_class.value,
            "cf": cf_text(part.cf),
            "coefficients": [str(a) for a in part.cf.coeffs],
            "length": part.length,
        }
        return json.dumps(payload) + "\n", code
    return cf_text(part.cf) + "\n", code


def cmd_stream(args) -> tuple[str, int]:
    source = _source_from_args(args)
    if args.K < 1:
        raise InvalidSpec("--K must be >= 1")
    result = stream(source, args.K, _budget(args))
    coeffs = result.certified[: args.K]
    if args.json:
        payload = result.to_json_dict()
        payload["certified"] = [str(a) for a in coeffs]
        return json.dumps(payload) + "\n", 0
    return cf_text(coeffs) + "\n", 0


def cmd_asymp(args) -> tuple[str, int]:
    source = _source_from_args(args)
    if not isinstance(source, SecondOrderSpec):
        raise InvalidSpec("asymp reports need a second-order spec (--d1/--G)")
    if args.n < 3:
        raise InvalidSpec("--n must be >= 3")
    report = full_report(source, args.n, args.eps, args.digits, _budget(args))
    rows = []
    growth = dict(report.growth_exponents)
    roth = {r.n: r for r in report.roth.records}
    for n in range(2, args.n + 1):
        rows.append({
            "n": n,
            "log_x": mp.nstr(report.lambda_n_true[n], 15),
            "exact": mp.nstr(report.lambda_n_exact[n], 15),
            "growth_exp": mp.nstr(growth[n], 15),
            "roth_lo": mp.nstr(roth[n].lower, 15),
            "roth_hi": mp.nstr(roth[n].upper, 15),
        })
    payload = {
        "lambda": mp.nstr(report.lam, args.digits),
        "C": mp.nstr(report.C, min(args.digits, 20)),
        "C_err": mp.nstr(report.C_bound, 3),
        "rows": rows,
    }
    return json.dumps(payload) + "\n", 0


def cmd_verify(args) -> tuple[str, int]:
    lines = []
    if args.suite == "generic":
        checked = run_generic_suite(args.trials, args.maxn, args.seed)
        lines.append(f"ok generic: {args.trials} trials, {checked} expansions checked")
    elif args.suite == "z2":
        checked = run_z2_suite(args.trials, args.maxn, args.seed)
        lines.append(f"ok z2: {args.trials} trials, {checked} expansions checked")
    elif args.suite == "lift":
        if args.d1 is None or args.G is None:
            raise InvalidSpec("--suite lift needs --d1/--G")
        spec = SecondOrderSpec(args.d1, _csv_ints(args.G)).validate()
        checked = run_lift_suite(spec, args.n)
        lines.append(f"ok lift: factorization identity holds for {checked} terms")
    elif args.suite == "identities":
        if args.z is None:
            raise InvalidSpec("--suite identities needs --z")
        zs = FactorSequence(_csv_ints(args.z))
        checked = run_identities_suite(zs, args.n)
        lines.append(f"ok identities: {checked} doubling steps verified")
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidSpec(f"unknown suite {args.suite}")
    if args.json:
        return json.dumps({"ok": True, "detail": lines}) + "\n", 0
    return "\n".join(lines) + "\n", 0


def cmd_paper_examples(args) -> tuple[str, int]:
    results = catalog.run_examples(args.only)
    all_ok = all(r.ok for r in results)
    if args.json:
        payload = {
            "ok": all_ok,
            "results": [
                {"tag": r.tag, "name": r.name, "ok": r.ok} for r in results
            ],
        }
        return json.dumps(payload) + "\n", 0 if all_ok else 4
    width = max(len(f"{r.tag}: {r.name}") for r in results)
    lines = [
        "{} {}".format("PASS" if r.ok else "FAIL", f"{r.tag}: {r.name}".ljust(width)).rstrip()
        for r in results
    ]
    lines.append(f"{sum(r.ok for r in results)}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", 0 if all_ok else 4


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="engelcf",
        description="Exact continued fractions of Engel series with x_n^2 | x_{n+1}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate sequence terms")
    _add_source(p)
    _add_common(p)
    p.add_argument("--n", type=int, required=True, help="number of terms")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("cf", help="continued fraction of the n-th partial sum")
    _add_source(p)
    _add_common(p)
    p.add_argument("--n", type=int, required=True, help="partial sum index")
    p.add_argument("--check", choices=["oracle"], default=None,
                   help="cross-check against the Euclidean expansion")
    p.set_defaults(handler=cmd_cf)

    p = sub.add_parser("stream", help="certified prefix of the limit expansion")
    _add_source(p)
    _add_common(p)
    p.add_argument("--K", type=int, required=True, help="number of certified coefficients")
    p.set_defaults(handler=cmd_stream)

    p = sub.add_parser("asymp", help="growth and irrationality report")
    _add_source(p)
    _add_common(p)
    p.add_argument("--n", type=int, default=10, help="largest index in the report")
    p.add_argument("--eps", type=float, default=0.1, help="margin in the growth check")
    p.set_defaults(handler=cmd_asymp)

    p = sub.add_parser("verify", help="run a randomized invariant suite")
    _add_source(p)
    _add_common(p)
    p.add_argument("--suite", choices=["generic", "z2", "lift", "identities"], required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--maxn", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=7, help="depth for lift/identities suites")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("paper-examples", help="re-derive the bundled worked examples")
    _add_common(p)
    p.add_argument("--only", type=str, default=None, help="run a single example tag")
    p.set_defaults(handler=cmd_paper_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.handler(args)
    except BitBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except IdentityViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (InvalidSpec, NegativeGap, InsufficientFactors, EngelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
