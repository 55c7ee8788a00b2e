"""Command-line interface.

Subcommands: density (posmogram data files), validate (self-check suites),
compare-sho (oscillator overlays), expand (general-state expansion).
Data goes to stdout or --out; diagnostics go to stderr.  Exit codes:
0 success, 1 validation failure, 2 usage error, 3 quadrature failure.

Numbers are written with 17 significant digits so identical invocations
produce byte-identical files.  An optional key=value config file supplies
grid/quadrature defaults; command-line flags override it.  The environment
variable POSMOGRAM_THREADS caps internal parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .closed_forms import CLOSED_FORM_MODES, crossvalidate
from .core import (amplitude_grid, count_nodes, expand_state_grid,
                   normalization, posmogram, superposition)
from .errors import DomainError, PosmogramError, QuadratureError
from .modes import LambdaGrid, ModeIndex, Parity, QuadratureConfig
from .sho import compare
from .sphere_ops import AngularPoint, lz_apply, posmom_apply, psi_eigenfunction, qz_apply
from .sphere_ops import EigenfunctionSpec

_HEADER = f"# posmogram {__version__}; dimensionless units (hbar = 1, r = 1)"


def _g17(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_m_spec(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in spec.split(",")]


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line not in key=value form: {raw.strip()!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key] = val
    return values


_CONFIG_KEYS = {"lo": float, "hi": float, "n": ("grid_n", int), "u_max": float,
                "panel_order": int, "format": str}


def _apply_config_file(args) -> None:
    if not getattr(args, "config", None):
        return
    file_values = _read_config_file(args.config)
    unknown = set(file_values) - set(_CONFIG_KEYS)
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    for key, conv in _CONFIG_KEYS.items():
        dest = key
        if isinstance(conv, tuple):
            dest, conv = conv
        if key in file_values and key not in args._explicit:
            setattr(args, dest, conv(file_values[key]))


def _grid_from_args(args) -> LambdaGrid:
    return LambdaGrid(args.lo, args.hi, args.grid_n)


def _quadrature_from_args(args) -> QuadratureConfig:
    return QuadratureConfig(u_max=args.u_max, panel_order=args.panel_order)


def _open_out(args):
    if args.out:
        return open(args.out, "w", encoding="utf-8", newline="\n")
    return None


def _emit(text: str, args) -> None:
    fh = _open_out(args)
    if fh is None:
        sys.stdout.write(text)
    else:
        with fh:
            fh.write(text)


def _posmogram_json_record(p) -> dict:
    return {
        "l": p.mode.l,
        "m": p.mode.m,
        "parity": p.parity.symbol,
        "grid": {"lo": p.grid.lo, "hi": p.grid.hi, "count": p.grid.count},
        "quadrature": {"u_max": p.config.u_max, "panel_order": p.config.panel_order,
                       "rel_tol": p.config.rel_tol, "abs_tol": p.config.abs_tol},
        "lambda": p.lambdas().tolist(),
        "re_I": p.amplitudes.real.tolist(),
        "im_I": p.amplitudes.imag.tolist(),
        "density": p.density.tolist(),
    }


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------

def _cmd_density(args) -> int:
    grid = _grid_from_args(args)
    config = _quadrature_from_args(args)
    parity = Parity.from_symbol(args.parity) if args.parity else None
    grams = [posmogram(ModeIndex(args.l, m), grid, config, parity=parity)
             for m in _parse_m_spec(args.m)]
    if args.format == "json":
        doc = {"format": "posmogram-density", "version": __version__,
               "units": "dimensionless (hbar = 1, r = 1)",
               "modes": [_posmogram_json_record(p) for p in grams]}
        _emit(json.dumps(doc, indent=1) + "\n", args)
        return 0
    lines = [_HEADER, "lambda,re_I,im_I,density"]
    for p in grams:
        lines.append(f"# l={p.mode.l} m={p.mode.m} parity={p.parity.symbol}")
        lams = p.lambdas()
        for k in range(p.grid.count):
            lines.append(",".join((_g17(lams[k]), _g17(p.amplitudes[k].real),
                                   _g17(p.amplitudes[k].imag), _g17(p.density[k]))))
    _emit("\n".join(lines) + "\n", args)
    return 0


# ---------------------------------------------------------------------------
# compare-sho
# ---------------------------------------------------------------------------

def _cmd_compare_sho(args) -> int:
    from .sho import rescaled_sho_density

    grid = _grid_from_args(args)
    config = _quadrature_from_args(args)
    p = posmogram(ModeIndex(args.l, args.m), grid, config)
    report = compare(p, args.n)
    lams = p.lambdas()
    sho = rescaled_sho_density(args.n, report.scale, lams)
    rep = {"l": args.l, "m": args.m, "sho_level": report.sho_level,
           "scale": report.scale, "linf_diff": report.linf_diff,
           "l1_diff": report.l1_diff, "variance_posmom": report.variance_posmom,
           "variance_sho": report.variance_sho, "peak_density": report.peak_density,
           "matched_antinodes": report.matched_antinodes}
    if args.json:
        doc = {"format": "posmogram-sho-overlay", "version": __version__,
               "report": rep, "lambda": lams.tolist(),
               "density": p.density.tolist(), "sho_density": sho.tolist()}
        _emit(json.dumps(doc, indent=1) + "\n", args)
        return 0
    lines = [_HEADER,
             "# " + " ".join(f"{k}={v}" for k, v in rep.items()),
             "lambda,density,sho_density"]
    for k in range(lams.size):
        lines.append(",".join((_g17(lams[k]), _g17(p.density[k]), _g17(sho[k]))))
    _emit("\n".join(lines) + "\n", args)
    return 0


# ---------------------------------------------------------------------------
# expand
# ---------------------------------------------------------------------------

def _parse_term(tok: str):
    parts = tok.split(",")
    if len(parts) not in (3, 4):
        raise DomainError(f"state term must be l,m,re[,im], got {tok!r}")
    l, m = int(parts[0]), int(parts[1])
    re = float(parts[2])
    im = float(parts[3]) if len(parts) == 4 else 0.0
    return l, m, complex(re, im)


def _cmd_expand(args) -> int:
    if not args.term:
        raise DomainError("expand needs at least one --term l,m,re[,im]")
    terms = [_parse_term(t) for t in args.term]
    sq_norm = sum(abs(c) ** 2 for (_, _, c) in terms)
    if abs(sq_norm - 1.0) > 1e-8 and not args.allow_unnormalized:
        raise DomainError(f"state norm^2 = {sq_norm:.8f} != 1; pass --allow-unnormalized to proceed")
    psi = superposition(terms)
    grid = _grid_from_args(args)
    config = _quadrature_from_args(args)
    lams = grid.values()
    m_values = sorted({m for (_, m, _) in terms})
    blocks = []
    parseval = 0.0
    for m in m_values:
        for parity in (Parity.EVEN, Parity.ODD):
            c = expand_state_grid(psi, m, parity, lams, config)
            blocks.append((m, parity, c))
            parseval += float(np.trapezoid(np.abs(c) ** 2, dx=grid.spacing))
    if args.format == "json":
        doc = {"format": "posmogram-expansion", "version": __version__,
               "terms": [{"l": l, "m": m, "re": c.real, "im": c.imag} for (l, m, c) in terms],
               "lambda": lams.tolist(),
               "coefficients": [{"m": m, "parity": par.symbol,
                                 "re_c": c.real.tolist(), "im_c": c.imag.tolist(),
                                 "density": (np.abs(c) ** 2).tolist()}
                                for (m, par, c) in blocks],
               "parseval_total": parseval}
        _emit(json.dumps(doc, indent=1) + "\n", args)
        return 0
    lines = [_HEADER,
             "# state: " + "; ".join(f"({l},{m}) {c.real:+.6g}{c.imag:+.6g}i" for (l, m, c) in terms),
             "lambda,re_c,im_c,density"]
    for (m, parity, c) in blocks:
        lines.append(f"# m={m} parity={parity.symbol}")
        for k in range(lams.size):
            lines.append(",".join((_g17(lams[k]), _g17(c[k].real), _g17(c[k].imag),
                                   _g17(abs(c[k]) ** 2))))
    lines.append(f"# parseval_total={_g17(parseval)}")
    _emit("\n".join(lines) + "\n", args)
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _suite_selection_rule(args) -> dict:
    worst = 0.0
    lams = np.linspace(-5.0, 5.0, 21)
    config = QuadratureConfig()
    exact_zero = True
    for l in range(0, 9):
        for m in range(-l, l + 1):
            mode = ModeIndex(l, m)
            dead = Parity.ODD if mode.physical_parity is Parity.EVEN else Parity.EVEN
            short = amplitude_grid(mode, dead, lams, config)
            exact_zero = exact_zero and not np.any(short)
            forced = amplitude_grid(mode, dead, lams, config, force_integrate=True)
            worst = max(worst, float(np.max(np.abs(forced))))
    return {"passed": exact_zero and worst < 1e-12,
            "max_forced_amplitude": worst, "short_circuit_exact": exact_zero,
            "l_range": "0..8"}


def _suite_symmetry(args) -> dict:
    config = QuadratureConfig()
    worst_herm = 0.0
    worst_msym = 0.0
    lams = np.linspace(0.1, 6.1, 25)
    for (l, m) in ((2, 1), (3, 2)):
        mode = ModeIndex(l, m)
        up = amplitude_grid(mode, mode.physical_parity, lams, config)
        dn = amplitude_grid(mode, mode.physical_parity, -lams, config)
        worst_herm = max(worst_herm, float(np.max(np.abs(dn - np.conj(up)))))
        neg = ModeIndex(l, -m)
        d_pos = np.abs(up) ** 2
        d_neg = np.abs(amplitude_grid(neg, neg.physical_parity, lams, config)) ** 2
        worst_msym = max(worst_msym, float(np.max(np.abs(d_pos - d_neg) / d_pos.max())))
    return {"passed": worst_herm < 1e-12 and worst_msym < 1e-12,
            "max_hermitian_defect": worst_herm, "max_m_sign_defect": worst_msym}


def _suite_normalization(args) -> dict:
    checks = [((0, 0), 14.0, 2801), ((1, 1), 14.0, 2801), ((3, 0), 14.0, 2801),
              ((5, 3), 14.0, 2801), ((20, 0), 25.0, 5001)]
    results = {}
    ok = True
    for (l, m), hi, n in checks:
        p = posmogram(ModeIndex(l, m), LambdaGrid(-hi, hi, n))
        err = abs(normalization(p) - 1.0)
        results[f"({l},{m})"] = err
        ok = ok and err < 1e-5
    return {"passed": ok, "abs_norm_errors": results}


def _suite_closed_forms(args) -> dict:
    tol = args.tol if getattr(args, "tol", None) else 1e-7
    grid = LambdaGrid(-5.0, 5.0, 201)
    reports = [crossvalidate(mode, grid, tol) for mode in CLOSED_FORM_MODES]
    notes = [note for r in reports for note in r.notes]
    return {"passed": all(r.passed for r in reports),
            "tol": tol,
            "max_rel_deviations": {f"({r.mode.l},{r.mode.m})": r.max_rel_deviation for r in reports},
            "notes": notes}


def _suite_nodes(args) -> dict:
    grid = LambdaGrid(-10.0, 10.0, 2001)
    counts = [count_nodes(posmogram(ModeIndex(5, m), grid)) for m in range(6)]
    return {"passed": counts == [2, 2, 1, 1, 0, 0], "l5_node_counts": counts,
            "expected": [2, 2, 1, 1, 0, 0]}


def _suite_operators(args) -> dict:
    point = AngularPoint(0.83, 0.0)
    ratios = {}
    for lam in (0.5, 2.0):
        spec = EigenfunctionSpec(lam, Parity.EVEN)
        f = lambda th, ph: psi_eigenfunction(spec, th)
        res = [abs(qz_apply(f, point, step=h) - lam * f(point.theta, point.phi))
               for h in (1e-3, 5e-4)]
        ratios[f"qz_eigen_lam={lam}"] = res[0] / res[1]
    g = lambda th, ph: math.sin(th) * complex(math.cos(ph), math.sin(ph))
    pt = AngularPoint(1.1, 0.7)
    sums = [abs(sum(posmom_apply(ax, g, pt, step=h) for ax in "xyz"))
            for h in (1e-3, 5e-4)]
    ratios["sum_rule"] = sums[0] / sums[1]
    h = lambda th, ph: math.sin(th) ** 2 * complex(math.cos(2 * ph), math.sin(2 * ph))
    lzh = lambda th, ph: lz_apply(h, AngularPoint(th, ph), step=1e-3)
    qzh = lambda th, ph: qz_apply(h, AngularPoint(th, ph), step=1e-3)
    comm = abs(qz_apply(lzh, pt, step=1e-3) - lz_apply(qzh, pt, step=1e-3))
    ok = all(3.2 < r < 4.8 for r in ratios.values()) and comm < 1e-5
    return {"passed": ok, "halving_ratios": ratios, "commutator_residual": comm}


_SUITES = {
    "selection-rule": _suite_selection_rule,
    "symmetry": _suite_symmetry,
    "normalization": _suite_normalization,
    "closed-forms": _suite_closed_forms,
    "nodes": _suite_nodes,
    "operators": _suite_operators,
}


def _cmd_validate(args) -> int:
    names = [args.suite] if args.suite else list(_SUITES)
    unknown = set(names) - set(_SUITES)
    if unknown:
        raise DomainError(f"unknown suite(s) {sorted(unknown)}; available: {list(_SUITES)}")
    suites = []
    for name in names:
        print(f"running suite: {name}", file=sys.stderr)
        detail = _SUITES[name](args)
        suites.append({"name": name, "passed": detail.pop("passed"), "details": detail})
    doc = {"passed": all(s["passed"] for s in suites), "suites": suites}
    _emit(json.dumps(doc, indent=1) + "\n", args)
    return 0 if doc["passed"] else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _TrackingParser(argparse.ArgumentParser):
    """Records which destinations were set explicitly, so a config file can
    fill in only the untouched ones."""

    def parse_args(self, argv=None, namespace=None):
        ns = super().parse_args(argv, namespace)
        explicit = set()
        argv = list(sys.argv[1:] if argv is None else argv)
        for tok in argv:
            if tok.startswith("--"):
                explicit.add(tok[2:].split("=", 1)[0].replace("-", "_"))
        ns._explicit = explicit
        return ns


def _add_grid_flags(sub, lo=-12.0, hi=12.0, n=2401, count_flag="--n"):
    sub.add_argument("--lo", type=float, default=lo, help="lower lambda bound")
    sub.add_argument("--hi", type=float, default=hi, help="upper lambda bound")
    sub.add_argument(count_flag, dest="grid_n", type=int, default=n,
                     help="number of lambda grid points")
    sub.add_argument("--u-max", dest="u_max", type=float, default=80.0,
                     help="truncation of the u-line integral")
    sub.add_argument("--panel-order", dest="panel_order", type=int, default=16,
                     help="Gauss-Legendre order per panel")
    sub.add_argument("--config", help="key=value config file (flags win)")


def build_parser() -> argparse.ArgumentParser:
    parser = _TrackingParser(prog="posmogram",
                             description="Posmom distribution densities on the two-sphere")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    d = subs.add_parser("density", help="compute posmogram data for modes (l, m)")
    d.add_argument("--l", type=int, required=True)
    d.add_argument("--m", required=True, help="m value, comma list, or range a..b")
    d.add_argument("--parity", choices=["+", "-"], help="force a parity sector")
    d.add_argument("--format", choices=["csv", "json"], default="csv")
    d.add_argument("--out", help="output path (default stdout)")
    _add_grid_flags(d)
    d.set_defaults(func=_cmd_density)

    v = subs.add_parser("validate", help="run the numerical self-check suites")
    v.add_argument("--suite", help=f"run one suite of {list(_SUITES)}")
    v.add_argument("--tol", type=float, help="tolerance for the closed-forms suite")
    v.add_argument("--out", help="output path for the JSON report (default stdout)")
    v.set_defaults(func=_cmd_validate)

    c = subs.add_parser("compare-sho", help="overlay a posmogram with an oscillator level")
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--n", type=int, required=True, help="oscillator level")
    c.add_argument("--json", action="store_true", help="emit a JSON document")
    c.add_argument("--out", help="output path (default stdout)")
    _add_grid_flags(c, count_flag="--points")
    c.set_defaults(func=_cmd_compare_sho)

    e = subs.add_parser("expand", help="expand a Y_lm superposition in the Q_z eigenbasis")
    e.add_argument("--term", action="append", default=[],
                   help="state term l,m,re[,im]; repeatable")
    e.add_argument("--allow-unnormalized", action="store_true")
    e.add_argument("--format", choices=["csv", "json"], default="csv")
    e.add_argument("--out", help="output path (default stdout)")
    _add_grid_flags(e)
    e.set_defaults(func=_cmd_expand)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        if hasattr(args, "lo") and not (args.lo < args.hi):
            raise DomainError(f"empty lambda range [{args.lo}, {args.hi}]")
        return args.func(args)
    except QuadratureError as exc:
        print(f"quadrature failure: {exc} (achieved {exc.achieved:.3e})", file=sys.stderr)
        return 3
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PosmogramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
