"""Command line interface: ``lrs-density <command> [options]``.

Every command writes one JSON document to standard output. Exit status is
0 on success, 2 when the answer is unknown within the budget, 1 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import density as dens
from .algebraic import DEFAULT_BUDGET_BITS, isolate_roots
from .errors import LoopSyntaxError, LrsError, PrecisionError, Undecided
from .jsonio import SCHEMA_ID, dumps, parse_rational
from .loop import compile_loop, parse_loop
from .lrs import Lrs, minimize_order
from .normalize import DEFAULT_RELATION_BOUND, preprocess
from .oracle import empirical_density, sign_profile

EXIT_OK, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rationals(text: str) -> list[Fraction]:
    try:
        return [parse_rational(x) for x in text.split(",") if x.strip()]
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise UsageError(f"bad rational list {text!r}: {e}") from None


def _positive_fraction(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser, with_input: bool = True):
    if with_input:
        p.add_argument("--coeffs", help="recurrence coefficients a1,...,ak (rationals p/q)")
        p.add_argument("--init", help="initial terms u1,...,uk")
        p.add_argument("--file", help='JSON file {"coeffs": [...], "init": [...]} or {"loop": "<source>"}')
    p.add_argument("--budget-bits", type=int, default=DEFAULT_BUDGET_BITS)
    p.add_argument("--relation-bound", type=int, default=DEFAULT_RELATION_BOUND)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-identical output)")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="lrs-density", description="Density of the positivity set of a linear recurrence sequence.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help, with_input=True):
        p = sub.add_parser(name, help=help)
        _add_common(p, with_input)
        return p

    cmd("analyze", "decomposition summary, P1, P2, partition and torus dimensions")
    p = cmd("density", "certified density interval, or a Monte Carlo estimate")
    p.add_argument("--eps", type=_positive_fraction, default=Fraction(1, 100))
    p.add_argument("--monte-carlo", action="store_true")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p = cmd("decide-zero", "is the density 0?")
    p.add_argument("--max-boxes", type=int, default=20_000)
    p = cmd("decide-one", "is the density 1?")
    p.add_argument("--max-boxes", type=int, default=20_000)
    cmd("rational", "exact rationality for at most one dominant pair per class")
    cmd("finite", "finiteness of the positivity set (diagonalisable case)")
    p = cmd("empirical", "fraction of positive terms among u_1..u_N")
    p.add_argument("--n", type=int, required=True)
    p = cmd("signs", "run-length encoded signs of u_A..u_B")
    p.add_argument("--from", dest="start", type=int, default=1)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p = sub.add_parser("loop", help="compile a loop program, then run a command on its guard sequence")
    p.add_argument("path")
    p.add_argument("rest", nargs=argparse.REMAINDER, help="a command and its options")
    return top


def _sequence_from_args(args) -> tuple[Lrs, dict]:
    if args.file:
        if args.coeffs or args.init:
            raise UsageError("give either --file or --coeffs/--init, not both")
        try:
            with open(args.file, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read {args.file}: {e}") from None
        if not isinstance(doc, dict):
            raise UsageError("input file must hold a JSON object")
        if "loop" in doc:
            return _from_loop_source(doc["loop"])
        try:
            coeffs = [parse_rational(x) for x in doc["coeffs"]]
            init = [parse_rational(x) for x in doc["init"]]
        except KeyError as e:
            raise UsageError(f"input file lacks {e}") from None
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise UsageError(str(e)) from None
    else:
        if not (args.coeffs and args.init):
            raise UsageError("an LRS needs --coeffs and --init (or --file)")
        coeffs, init = _rationals(args.coeffs), _rationals(args.init)
    try:
        seq = Lrs(coeffs, init)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from None
    return seq, {"sequence": seq.to_json()}


def _from_loop_source(source: str) -> tuple[Lrs, dict]:
    loop = parse_loop(source)
    c = compile_loop(loop)
    info = {"sequence": c.seq.to_json(), "loop": {"variables": list(loop.variables),
                                                  "init": list(loop.init),
                                                  "update": [list(r) for r in loop.update],
                                                  "guard": list(loop.guard),
                                                  "comparison": ">" if loop.strict else ">=",
                                                  "offset": c.offset}}
    if not loop.strict:
        # {u >= 0} is the complement of {-u > 0}; computed on the negated sequence
        info["loop"]["note"] = "guard >= 0 evaluated as the complement of {-u > 0}"
    return c.seq, info


# --- commands --------------------------------------------------------------


def _complement_fraction(x):
    return None if x is None else 1 - x


def run_analyze(seq, args, nonstrict):
    s = minimize_order(seq)
    out = {"order": seq.order, "minimal_order": s.order, "minimal": s.to_json()}
    if not s.is_zero:
        out["char_poly"] = [str(c) for c in s.char_poly.coeffs]
        out["roots"] = [{"approx": [float(r.approx(60).real), float(r.approx(60).imag)],
                         "multiplicity": m, "real": r.is_real}
                        for r, m in isolate_roots(s.char_poly, args.budget_bits)]
    sysm = preprocess(seq, args.relation_bound, args.budget_bits)
    out["subsequences"] = sysm.summary()
    out["eta"] = [f.eta for f in sysm.nonzero_forms]
    return out, EXIT_OK


def run_density(seq, args, nonstrict):
    target = dens.negated(seq) if nonstrict else seq
    if args.monte_carlo:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        rep = dens.monte_carlo_sequence_density(target, args.samples, args.seed, bound=args.relation_bound,
                                                budget=args.budget_bits, workers=args.workers)
    else:
        if not 0 < args.eps < 1:
            raise UsageError("--eps must lie in (0, 1)")
        rep = dens.approximate_density(target, args.eps, bound=args.relation_bound,
                                       budget=args.budget_bits, workers=args.workers)
    out = rep.to_json()
    if nonstrict:
        lo, hi = 1 - rep.hi, 1 - rep.lo
        out = {"value": lo if lo == hi else {"lo": lo, "hi": hi}, "midpoint": (lo + hi) / 2,
               "complement_of": out}
    return out, EXIT_OK


def run_decide_zero(seq, args, nonstrict):
    kw = dict(bound=args.relation_bound, budget=args.budget_bits, max_boxes=args.max_boxes)
    if nonstrict:
        v = dens.decide_density_one(dens.negated(seq), **kw)
        d = {"yes": "zero", "no": "positive", "unknown": "unknown"}[v.decision]
        out = {"decision": d, "complement_of": v}
    else:
        v = dens.decide_density_zero(seq, **kw)
        d, out = v.decision, v
    return out, EXIT_UNKNOWN if d == "unknown" else EXIT_OK


def run_decide_one(seq, args, nonstrict):
    kw = dict(bound=args.relation_bound, budget=args.budget_bits, max_boxes=args.max_boxes)
    if nonstrict:
        v = dens.decide_density_zero(dens.negated(seq), **kw)
        d = {"zero": "yes", "positive": "no", "unknown": "unknown"}[v.decision]
        out = {"decision": d, "complement_of": v}
    else:
        v = dens.decide_density_one(seq, **kw)
        d, out = v.decision, v
    return out, EXIT_UNKNOWN if d == "unknown" else EXIT_OK


def run_rational(seq, args, nonstrict):
    r = dens.decide_rational_one_pair(dens.negated(seq) if nonstrict else seq,
                                      bound=args.relation_bound, budget=args.budget_bits)
    out = r.to_json()
    if nonstrict:
        out = {"decision": r.decision, "value": _complement_fraction(r.value),
               "approx": None if r.approx is None else 1 - r.approx, "complement_of": out}
    return out, EXIT_OK


def run_finite(seq, args, nonstrict):
    if nonstrict:
        raise UsageError("finite is defined for strict guards only")
    d = dens.finite_positivity_diagonalisable(seq, bound=args.relation_bound, budget=args.budget_bits)
    return {"decision": d}, EXIT_UNKNOWN if d == "unknown" else EXIT_OK


def run_empirical(seq, args, nonstrict):
    if args.n < 1:
        raise UsageError("--n must be positive")
    v = empirical_density(dens.negated(seq) if nonstrict else seq, args.n)
    return {"N": args.n, "density": 1 - v if nonstrict else v}, EXIT_OK


def run_signs(seq, args, nonstrict):
    if args.start < 1 or args.stop < args.start:
        raise UsageError("need 1 <= --from <= --to")
    return sign_profile(seq, args.start, args.stop), EXIT_OK


COMMANDS = {
    "analyze": run_analyze,
    "density": run_density,
    "decide-zero": run_decide_zero,
    "decide-one": run_decide_one,
    "rational": run_rational,
    "finite": run_finite,
    "empirical": run_empirical,
    "signs": run_signs,
}


def _join_lists(argv: list[str]) -> list[str]:
    """--init -1,2 would read -1,2 as an option; pass it as --init=-1,2."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--coeffs", "--init") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _envelope(command, body: dict) -> dict:
    # no argv echo: --workers must not change the bytes
    return {"schema": SCHEMA_ID, "command": command, **body}


def run(argv: list[str]) -> tuple[int, str]:
    """Returns (exit code, JSON text)."""
    parser = build_parser()
    command = None
    try:
        args = parser.parse_args(_join_lists(argv))
        command = args.command
        nonstrict = False
        if command == "loop":
            if not args.rest:
                raise UsageError("loop needs a command after the file, e.g. loop prog.loop density --eps 1/200")
            try:
                with open(args.path, encoding="utf-8") as fh:
                    source = fh.read()
            except OSError as e:
                raise UsageError(f"cannot read {args.path}: {e}") from None
            args = parser.parse_args(_join_lists(args.rest))
            if args.command == "loop":
                raise UsageError("loop cannot be nested")
            if args.coeffs or args.init or args.file:
                raise UsageError("loop takes its sequence from the program file")
            command = "loop " + args.command
            seq, info = _from_loop_source(source)
            nonstrict = info["loop"]["comparison"] == ">="
        else:
            seq, info = _sequence_from_args(args)
            nonstrict = "loop" in info and info["loop"]["comparison"] == ">="
        t0 = time.perf_counter()
        try:
            result, code = COMMANDS[args.command](seq, args, nonstrict)
        except (Undecided, PrecisionError) as e:
            result, code = {"decision": "unknown", "reason": str(e)}, EXIT_UNKNOWN
        body = {"input": info, "result": result}
        if args.timing:
            body["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
        return code, dumps(_envelope(command, body))
    except UsageError as e:
        return EXIT_USAGE, dumps(_envelope(command, {"error": {"type": "usage", "message": str(e)}}))
    except LoopSyntaxError as e:
        err = {"type": "loop-syntax", "message": str(e), "line": e.line, "col": e.col}
        return EXIT_USAGE, dumps(_envelope(command, {"error": err}))
    except (ValueError, LrsError) as e:
        return EXIT_USAGE, dumps(_envelope(command, {"error": {"type": "input", "message": str(e)}}))


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, text = run(argv)
    except SystemExit as e:  # --help
        return int(e.code or 0)
    sys.stdout.write(text)
    sys.stdout.flush()
    if code == EXIT_USAGE:
        err = json.loads(text).get("error", {})
        sys.stderr.write(err.get("message", "error") + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
