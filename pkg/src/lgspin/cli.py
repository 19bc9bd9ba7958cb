"""Command-line front end.

Every subcommand builds a JSON-able report; ``--json`` prints it as sorted
JSON, otherwise a short text form is printed.  Rationals are always written
as "p/q" strings.  Reports are cached on disk under a content hash of the
exponent matrix, the subcommand and its options.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .charclass import NegativeValuationError, correlator3, loop_B_matrix
from .givental import (SeriesShapeError, big_I, extract_correlators, mirror_map_and_J, pf_check,
                       small_I)
from .poly import FIVE_CHAIN, InvertiblePolynomial, PolynomialError, parse_polynomial
from .series import GradedPoly
from .spincomb import SelectionRuleError, TheoremInapplicable, numerics
from .statespace import (StateError, StateVector, basis, degree, dual, pairing,
                         parse_insertion, state, state_to_json)
from .symmetry import SymmetryError, aut_group, grading_element

CACHE_FORMAT = 1
DOMAIN_ERRORS = (PolynomialError, SymmetryError, StateError, SelectionRuleError,
                 TheoremInapplicable, NegativeValuationError, SeriesShapeError,
                 ArithmeticError)


class UsageError(Exception):
    pass


def q(x: Any) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class RunConfig:
    poly: str
    json: bool
    cache_dir: Path | None
    threads: int


# serialization helpers

def _state_text(e) -> str:
    return e.label()


def _vector_json(v: StateVector) -> list[dict]:
    return [{"state": _state_text(s), "coeff": q(c)} for s, c in v.items()]


def _poly_json(c: Any) -> list[dict]:
    if not isinstance(c, GradedPoly):
        return [{"monomial": {}, "coeff": q(c)}] if c else []
    rows = [{"monomial": {s: e for s, e in m}, "coeff": q(v)}
            for m, v in c.terms.items() if v]
    return sorted(rows, key=lambda r: (sum(r["monomial"].values()), sorted(r["monomial"].items())))


def _series_rows(series, var: str = "t") -> list[dict]:
    rows = []
    for z, s, c in series.items():
        if isinstance(c, GradedPoly):
            for m, v in c.terms.items():
                if not v:
                    continue
                d = dict(m)
                if set(d) <= {var}:
                    rows.append({"t_exp": d.get(var, 0), "z_exp": z, "state": _state_text(s),
                                 "coeff": q(v)})
                else:
                    rows.append({"monomial": {k: e for k, e in sorted(d.items())}, "z_exp": z,
                                 "state": _state_text(s), "coeff": q(v)})
        else:
            rows.append({"t_exp": 0, "z_exp": z, "state": _state_text(s), "coeff": q(c)})
    return sorted(rows, key=lambda r: (r.get("t_exp", 0), json.dumps(r.get("monomial", {}), sort_keys=True),
                                       -r["z_exp"], r["state"]))


def _split_list(text: str | None, what: str) -> list[str]:
    if not text:
        raise UsageError(f"{what} is required")
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur.strip())
    return parts


# subcommands

def cmd_classify(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    weights, d = w.weight_system
    comps = [c.to_json() for c in w.decomposition]
    kind = comps[0]["kind"] if len(comps) == 1 else "sum"
    return {"polynomial": w.to_text(), "kind": kind, "components": comps,
            "weights": list(weights), "d": d, "charges": [q(c) for c in w.charges],
            "central_charge": q(w.central_charge), "calabi_yau": w.is_calabi_yau,
            "matrix": [list(r) for r in w.matrix], "mirror": w.mirror().to_text()}


def cmd_aut(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    g = aut_group(w)
    return {"order": g.order, "invariant_factors": list(g.invariant_factors),
            "exponent": g.exponent,
            "generators": [[q(p) for p in x.phases] for x in g.generators],
            "grading_element": [q(p) for p in grading_element(w).phases]}


def cmd_states(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    states = basis(w)
    rows = []
    for e in sorted(states, key=lambda s: s.sort_key()):
        d = state_to_json(w, e)
        d["degree"] = q(degree(w, e))
        d["gamma"] = [q(p) for p in e.gamma.phases]
        rows.append(d)
    return {"dimension": len(rows), "states": rows}


def _sweep_one(w, e, unit) -> bool:
    f = state(w, e.gamma.inverse())
    return correlator3(w, e, f, unit) == pairing(w, e, f)


def cmd_pairing(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    if args.insertions:
        ins = [parse_insertion(w, s) for s in _split_list(args.insertions, "--insertions")]
        if len(ins) != 2:
            raise UsageError("pairing takes exactly two insertions")
        e, f = ins
        out = {"value": q(pairing(w, e, f))}
        if not e.is_zero:
            out["dual"] = _vector_json(dual(w, e))
        return out
    # without insertions: check <e_g, e_{g^-1}, e_j> = pairing for every chain state
    if not w.is_chain:
        raise TheoremInapplicable("the pairing sweep needs a chain polynomial (unique decorations)")
    unit = state(w, grading_element(w))
    states = [state(w, g) for g in aut_group(w)]
    states = [e for e in states if not e.is_zero]
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            oks = list(pool.map(lambda e: _sweep_one(w, e, unit), states))
    else:
        oks = [_sweep_one(w, e, unit) for e in states]
    bad = [states[i].label() for i, ok in enumerate(oks) if not ok]
    return {"checked": len(states), "mismatches": bad, "agree": not bad}


def cmd_correlator3(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    ins = [parse_insertion(w, s) for s in _split_list(args.insertions, "--insertions")]
    if len(ins) != 3:
        raise UsageError("correlator3 takes exactly three insertions")
    value = correlator3(w, *ins)
    num = numerics(w, ins, with_D=False)
    return {"value": q(value), "degvir": num.degvir}


def cmd_bmatrix(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    rows = loop_B_matrix(w)
    return {"B": [[q(x) for x in r] for r in rows]}


def _param_states(w, text: str | None, default: str | None = None) -> dict:
    names = _split_list(text or default, "--params")
    return {n: parse_insertion(w, n) for n in names}


def _default_params(w: InvertiblePolynomial) -> dict:
    """Narrow degree-2 states among the powers of j, named j^k."""
    jj = grading_element(w)
    out = {}
    for k in range(1, jj.order + 1):
        e = state(w, jj ** k)
        if not e.is_zero and not e.broad and degree(w, e) == 2:
            out[f"j^{k}"] = e
    return out


def cmd_ifunction(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    if args.big:
        params = _param_states(w, args.params) if args.params else _default_params(w)
        series = big_I(w, params, args.n_max)
        return {"kind": "big", "n_max": args.n_max, "params": list(params), "terms": _series_rows(series)}
    series = small_I(w, args.order)
    return {"kind": "small", "order": args.order, "terms": _series_rows(series)}


def cmd_pfcheck(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    ok = pf_check(w, small_I(w, args.order), args.order)
    weights, d = w.weight_system
    return {"annihilated": ok, "order": args.order, "d": d, "weights": list(weights)}


def cmd_jfunction(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    if args.params or args.big:
        params = _param_states(w, args.params) if args.params else _default_params(w)
        I = big_I(w, params, args.n_max)
        order = args.n_max
    else:
        I = small_I(w, args.order)
        order = args.order
    J = mirror_map_and_J(w, I)
    pieces = []
    for k, v in enumerate(J.pieces):
        for s, c in v.items():
            pieces.append({"y_exp": -k, "state": _state_text(s), "coeff": _poly_json(c)})
    return {"order": order, "omega0": _poly_json(J.omega0),
            "mirror_map": [{"state": _state_text(s), "coeff": _poly_json(c)} for s, c in J.tau.items()],
            "J": pieces}


def cmd_correlator(w: InvertiblePolynomial, args, cfg: RunConfig) -> dict:
    names = _split_list(args.insertions, "--insertions")
    if not args.last:
        raise UsageError("--last is required")
    last = parse_insertion(w, args.last)
    params = _param_states(w, args.params) if args.params else _default_params(w)
    for n in names:
        if n not in params:
            params[n] = parse_insertion(w, n)
    n_max = args.n_max
    if len(names) > n_max:
        raise UsageError(f"{len(names)} insertions need --n-max >= {len(names)}")
    [value] = extract_correlators(w, params, [(names, last)], n_max)
    return {"value": q(value), "insertions": names, "last": args.last, "n_max": n_max}


COMMANDS: dict[str, Callable] = {
    "classify": cmd_classify, "aut": cmd_aut, "states": cmd_states, "pairing": cmd_pairing,
    "correlator3": cmd_correlator3, "bmatrix": cmd_bmatrix, "ifunction": cmd_ifunction,
    "pfcheck": cmd_pfcheck, "jfunction": cmd_jfunction, "correlator": cmd_correlator,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poly", help=f"invertible polynomial (default: {FIVE_CHAIN})")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--cache-dir", help="cache directory (default: $LGSPIN_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    common.add_argument("--order", type=int, default=25, help="t-order of one-variable series")
    common.add_argument("--n-max", type=int, default=6, help="maximal number of parameter insertions")
    common.add_argument("--params", help="comma-separated parameter states, e.g. j^2,j^3")
    common.add_argument("--insertions", help="comma-separated insertions, e.g. j^3,j^3,j^6")
    common.add_argument("--last", help="last insertion of a correlator")

    p = argparse.ArgumentParser(prog="lgspin", description="Genus-zero invariants of invertible polynomials")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command")
    helps = {
        "classify": "weights, atomic types and central charge",
        "aut": "the group of diagonal symmetries",
        "states": "basis of the state space",
        "pairing": "pairing of two states, or a sweep against three-point numbers",
        "correlator3": "three-point genus-zero correlator",
        "bmatrix": "broad three-point matrix of an even loop",
        "ifunction": "small (or --big) I-function",
        "pfcheck": "check the Picard-Fuchs equation on the small I-function",
        "jfunction": "mirror map and J-function",
        "correlator": "correlator extracted from the J-function",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "classify":
            sp.add_argument("polynomial", nargs="?", help="same as --poly")
        if name in ("ifunction", "jfunction"):
            sp.add_argument("--big", action="store_true", help="big I-function in --params")
    return p


def _cache_dir(args) -> Path | None:
    if args.no_cache:
        return None
    d = args.cache_dir or os.environ.get("LGSPIN_CACHE_DIR")
    return Path(d) if d else None


def cache_key(w: InvertiblePolynomial, command: str, args) -> str:
    opts = {k: getattr(args, k, None) for k in ("order", "n_max", "params", "insertions", "last", "big")}
    blob = json.dumps({"format": CACHE_FORMAT, "version": __version__, "matrix": [list(r) for r in w.matrix],
                       "command": command, "options": opts}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _cached(cfg: RunConfig, key: str, compute: Callable[[], dict]) -> dict:
    if cfg.cache_dir is None:
        return compute()
    path = cfg.cache_dir / f"{key}.json"
    if path.exists():
        try:
            return json.loads(path.read_text())
        except (OSError, ValueError):
            pass
    report = compute()
    try:
        cfg.cache_dir.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(report, sort_keys=True))
        tmp.replace(path)
    except OSError:
        pass  # an unwritable cache just disables caching
    return report


def _text(command: str, report: dict) -> str:
    if command == "pfcheck":
        return f"annihilated: {'true' if report['annihilated'] else 'false'}"
    if command in ("correlator3", "correlator") or (command == "pairing" and "value" in report):
        return report["value"]
    if command == "classify":
        return (f"kind={report['kind']} weights ({','.join(map(str, report['weights']))}) "
                f"d={report['d']} c={report['central_charge']}")
    if command == "aut":
        return f"order {report['order']}, invariant factors {tuple(report['invariant_factors'])}"
    if command == "bmatrix":
        return "\n".join(" ".join(r) for r in report["B"])
    if command == "pairing":
        return f"checked {report['checked']} states, agree: {'true' if report['agree'] else 'false'}"
    if command == "states":
        lines = [f"{len(report['states'])} states"]
        lines += [f"({','.join(s['gamma'])}) crossed={s['crossed']} deg={s['degree']}" for s in report["states"]]
        return "\n".join(lines)
    return json.dumps(report, sort_keys=True, indent=1)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if not args.command:
        parser.print_usage(err)
        return 2
    text = args.poly or getattr(args, "polynomial", None) or FIVE_CHAIN
    if args.order < 1 or args.n_max < 1 or args.threads < 1:
        print("error: --order, --n-max and --threads must be positive", file=err)
        return 2
    cfg = RunConfig(text, args.json, _cache_dir(args), args.threads)
    try:
        w = parse_polynomial(text)
        report = _cached(cfg, cache_key(w, args.command, args),
                         lambda: COMMANDS[args.command](w, args, cfg))
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 1
    if cfg.json:
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        print(_text(args.command, report), file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
