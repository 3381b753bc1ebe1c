"""Command-line surface: evaluate norms and actions, run property suites,
emit machine-readable JSON reports.

Exit codes: 0 success, 1 report contains failing cases, 2 usage error,
3 integrity error (a cross-checked invariant failed).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import __version__
from .actions import (
    ab_element,
    action_preset,
    apply_gamma,
    apply_phi,
    berger_element,
    frobenius_congruence_check,
    lubin_tate_series,
    reality_check_bound,
)
from .apf import IntegrityError, TowerSpec, ramification_data, strict_apf_constant
from .config import SessionConfig, build_config
from .descent import SeriesMatrix, newton_idempotent, phi_decompose
from .scalars import ParameterError, PadicScalar
from .series import DaggerSeries, RingDescriptor, series_to_json
from .slopes import degree, polygon_of_standard_sum, pure_standard, scalar_module_ring
from .suites import SUITES, jsonable, render_report, run_suite
from .witt import embed_robba, isometry_check, witt_norm

_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>p|pi|[TUY]\d*)"
                    r"|(?P<pow>\^)|(?P<mul>\*)|(?P<slash>/))")


class UsageError(ValueError):
    pass


def parse_series(expr: str, ring: RingDescriptor) -> DaggerSeries:
    """Parse 'pi^2*T1 + 3*p*U1^2 - 7' into a series over the ring."""
    out = DaggerSeries.zero(ring)
    expr = expr.replace("-", "+-").replace("++", "+")
    for raw_term in expr.split("+"):
        raw_term = raw_term.strip()
        if not raw_term:
            continue
        negate = raw_term.startswith("-")
        if negate:
            raw_term = raw_term[1:]
        coeff = 1
        exps = [Fraction(0)] * ring.nvars
        for factor in raw_term.split("*"):
            factor = factor.strip()
            if not factor:
                raise UsageError(f"empty factor in {raw_term!r}")
            m = re.fullmatch(
                r"(?P<base>-?\d+|p|pi|[TUY]\d*)(\^(?P<exp>-?\d+(/\d+)?))?",
                factor)
            if not m:
                raise UsageError(f"cannot parse factor {factor!r}")
            base = m.group("base")
            exp = Fraction(m.group("exp")) if m.group("exp") else Fraction(1)
            if base.lstrip("-").isdigit():
                if exp.denominator != 1:
                    raise UsageError("integer factors take integer exponents")
                coeff *= int(base) ** int(exp)
            elif base == "p":
                if exp.denominator != 1:
                    raise UsageError("p takes integer exponents")
                coeff *= ring.p ** int(exp)
            else:
                idx = _var_index(base, ring)
                exps[idx] += exp
        if negate:
            coeff = -coeff
        out = out + DaggerSeries.monomial(ring, tuple(exps), coeff)
    return out


def _var_index(name: str, ring: RingDescriptor) -> int:
    if name == "pi" or name == "Y0":
        return 0
    kind, num = name[0], name[1:]
    if not num:
        raise UsageError(f"variable {name!r} needs an index")
    k = int(num)
    if kind == "Y":
        if not 1 <= k <= ring.nvars_T:
            raise UsageError(f"Y{k} outside the descriptor")
        return k
    if kind == "T":
        if not 1 <= k <= ring.nvars_T:
            raise UsageError(f"T{k} outside the descriptor")
        return k
    if kind == "U":
        if not 1 <= k <= ring.nvars_U:
            raise UsageError(f"U{k} outside the descriptor")
        return ring.nvars_T + k
    raise UsageError(f"unknown variable {name!r}")


def _spec_for(cfg: SessionConfig):
    return action_preset(cfg.preset, cfg.p, cfg.h, cfg.N, nvars_T=cfg.nvars_T)


def _emit(payload: dict, cfg: SessionConfig) -> None:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_norm(cfg: SessionConfig, args) -> int:
    spec = _spec_for(cfg)
    x = parse_series(args.series, spec.ring)
    g = x.gauss_norm(cfg.r)
    _emit({"series": repr(x), "radius": jsonable(cfg.r),
           "valuation": jsonable(g.value), "certified": g.certified,
           "certification_floor": jsonable(g.bound)}, cfg)
    return 0


def cmd_frob(cfg: SessionConfig, args) -> int:
    spec = _spec_for(cfg)
    x = parse_series(args.series, spec.ring)
    y = apply_phi(spec, x)
    margin, verdict = reality_check_bound(spec, x, cfg.r)
    _emit({"input": repr(x), "phi": repr(y),
           "congruence_mod_p": frobenius_congruence_check(spec, x),
           "reality_margin": jsonable(margin),
           "reality_verdict": verdict, "radius": jsonable(cfg.r)}, cfg)
    return 0


def cmd_gamma(cfg: SessionConfig, args) -> int:
    spec = _spec_for(cfg)
    x = parse_series(args.series, spec.ring)
    if spec.kind == "cyclotomic_ab":
        trans = [int(t) for t in args.trans.split(",")] if args.trans else None
        g = ab_element(spec, gamma=args.gamma, trans=trans)
    else:
        units = [int(t) for t in args.units.split(",")] if args.units else None
        g = berger_element(spec, units=units, phi_p_power=args.phi_p)
    y = apply_gamma(spec, g, x)
    _emit({"input": repr(x), "image": repr(y),
           "series_json": series_to_json(y)}, cfg)
    return 0


def cmd_lt(cfg: SessionConfig, args) -> int:
    spec = action_preset("berger", cfg.p, cfg.h, cfg.N)
    series = lubin_tate_series(spec, args.a, cap=args.cap)
    coeffs = {str(int(e[0])): list(c.coeffs)
              for e, c in series.sorted_terms()}
    _emit({"a": args.a, "cap": args.cap, "coefficients": coeffs}, cfg)
    return 0


def cmd_witt(cfg: SessionConfig, args) -> int:
    spec = _spec_for(cfg)
    x = parse_series(args.series, spec.ring)
    w = embed_robba(x)
    g = witt_norm(w, cfg.r)
    equal, wit = isometry_check(x, cfg.r)
    _emit({"input": repr(x),
           "witt_norm": jsonable(g.value), "certified": g.certified,
           "isometry_with_series_norm": equal,
           "series_norm": jsonable(wit["series"].value)}, cfg)
    return 0 if equal else 1


def cmd_newton(cfg: SessionConfig, args) -> int:
    ring = scalar_module_ring(cfg.p, cfg.h, cfg.N)
    rows = [[int(e) for e in row.split(",")]
            for row in args.entries.split(";")]
    V = SeriesMatrix.from_scalars(ring, rows)
    W, log = newton_idempotent(V, cfg.r)
    _emit({"entries": rows,
           "log": [jsonable(v) for v in log],
           "idempotent": [[repr(e) for e in row] for row in W.rows]}, cfg)
    return 0


def cmd_psi(cfg: SessionConfig, args) -> int:
    spec = _spec_for(cfg)
    x = parse_series(args.series, spec.ring)
    comps = phi_decompose(spec, x)
    _emit({"input": repr(x),
           "components": {str(k): repr(v) for k, v in comps.items()
                          if not v.is_zero}}, cfg)
    return 0


def cmd_slope(cfg: SessionConfig, args) -> int:
    ring = scalar_module_ring(cfg.p, 1, max(cfg.N, 8))
    parts = [tuple(int(x) for x in part.split(","))
             for part in args.pure.split(";")]
    payload = {"parts": [list(p) for p in parts]}
    degs = []
    for c, d in parts:
        degs.append(degree(pure_standard(ring, c, d)))
    payload["degrees"] = degs
    payload["polygon"] = polygon_of_standard_sum(parts).to_json()
    _emit(payload, cfg)
    return 0


def cmd_apf(cfg: SessionConfig, args) -> int:
    kind = "cyclotomic" if cfg.tower == "cyclotomic" else "lubin_tate"
    spec = TowerSpec(kind, cfg.p, cfg.J, cfg.N,
                     h=cfg.h if kind == "lubin_tate" else 1)
    data = ramification_data(spec)
    payload = data.to_json()
    payload["c_estimate_positive"] = strict_apf_constant(spec, data) > 0
    _emit(payload, cfg)
    return 0


def cmd_suite(cfg: SessionConfig, args) -> int:
    rep = run_suite(args.name, cfg)
    text = render_report(rep)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="robba-lab",
        description="finite-precision computer algebra for weighted p-adic "
                    "series rings, Witt vectors and ramification towers")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--config", help="key=value config file "
                                     "(or ROBBA_LAB_CONFIG)")
    ap.add_argument("--p", type=int)
    ap.add_argument("--h", type=int)
    ap.add_argument("--N", type=int)
    ap.add_argument("--nvars-T", dest="nvars_T", type=int)
    ap.add_argument("--preset", choices=["ab", "berger", "plain"])
    ap.add_argument("--tower", choices=["cyclotomic", "lubin-tate"])
    ap.add_argument("--seed", type=int)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--r", help="Gauss radius (rational like 1/8)")
    ap.add_argument("--s", help="lower Gauss radius")
    ap.add_argument("--J", type=int, help="top tower level")
    ap.add_argument("--out", help="write the JSON report here")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("norm", help="Gauss-norm valuation of a series")
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=cmd_norm)

    sp = sub.add_parser("frob", help="apply phi; congruence and margin checks")
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=cmd_frob)

    sp = sub.add_parser("gamma", help="apply one group operator")
    sp.add_argument("--series", required=True)
    sp.add_argument("--gamma", type=int, default=1,
                    help="unit for the cyclotomic factor")
    sp.add_argument("--trans", help="comma-separated translation vector")
    sp.add_argument("--units", help="comma-separated units (berger)")
    sp.add_argument("--phi-p", dest="phi_p", type=int, default=0)
    sp.set_defaults(fn=cmd_gamma)

    sp = sub.add_parser("lt", help="Lubin-Tate series [a](T)")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--cap", type=int, default=8)
    sp.set_defaults(fn=cmd_lt)

    sp = sub.add_parser("witt", help="embed a series and compare norms")
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=cmd_witt)

    sp = sub.add_parser("newton", help="idempotent iteration on a matrix")
    sp.add_argument("--entries", required=True,
                    help="rows as 'a,b;c,d' over the scalar ring")
    sp.set_defaults(fn=cmd_newton)

    sp = sub.add_parser("psi", help="decompose against the phi-basis")
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=cmd_psi)

    sp = sub.add_parser("slope", help="degrees and polygon of pure summands")
    sp.add_argument("--pure", required=True, help="'c1,d1;c2,d2;...'")
    sp.set_defaults(fn=cmd_slope)

    sp = sub.add_parser("apf", help="ramification report for the tower")
    sp.set_defaults(fn=cmd_apf)

    sp = sub.add_parser("suite", help="run a named property suite")
    sp.add_argument("--name", required=True, choices=sorted(SUITES))
    sp.set_defaults(fn=cmd_suite)
    return ap


_CFG_KEYS = ("p", "h", "N", "nvars_T", "preset", "tower", "seed", "samples",
             "r", "s", "J", "out")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    flag_values = {k: getattr(args, k, None) for k in _CFG_KEYS}
    try:
        cfg = build_config(flag_values, args.config)
        return args.fn(cfg, args)
    except (UsageError, ParameterError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except IntegrityError as e:
        print(f"integrity error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
