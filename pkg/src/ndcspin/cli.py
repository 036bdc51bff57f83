"""Command-line sweeps producing plot-ready CSV or JSON.

Angle grids are written start:end:count (half-open, count points from
start towards end) or as comma lists; both accept expressions in pi.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import operator
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import CheckFailure, DomainError, NumericError, ResourceError

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
        ast.UAdd: operator.pos}


def parse_number(text: str) -> float:
    """Evaluate a numeric expression that may contain pi."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return float(np.pi)
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise UsageError(f"cannot parse number {text!r}")
    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError:
        raise UsageError(f"cannot parse number {text!r}") from None


def parse_grid(text: str) -> np.ndarray:
    text = text.strip()
    if not text:
        raise UsageError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} must be start:end:count")
        start, end = parse_number(parts[0]), parse_number(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise UsageError(f"grid count must be an integer in {text!r}") from None
        if count < 1:
            raise UsageError("empty grid")
        return start + (end - start) * np.arange(count) / count
    vals = [parse_number(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise UsageError("empty grid")
    return np.array(vals)


def parse_ints(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}") from None
    if not vals:
        raise UsageError("empty integer list")
    return vals


def parse_seeds(text: str) -> list[int]:
    vals = parse_ints(text)
    return list(range(vals[0])) if len(vals) == 1 else vals


@dataclass
class SweepConfig:
    command: str
    params: dict
    columns: list
    points: list = field(default_factory=list)


# --- per-point workers (module level so a process pool can pickle them) ----

def _ideal_point(tj, phi):
    from .ideal import ideal_probabilities
    t = ideal_probabilities(tj, phi)
    d = t.as_dict()
    return [phi, tj] + [d[k] for k in ("p2_plus", "p2_minus", "p12_pp", "p12_pm", "p12_mp", "p12_mm",
                                       "v_plus", "v_minus")]


def _two_angle_point(tj, phi1, phi2):
    from .ideal import two_angle_probabilities
    t = two_angle_probabilities(tj, phi1, phi2)
    return [phi1, phi2, tj, t.v_plus, t.v_minus]


def _rotation_point(tj, phi1):
    from .ideal import orthogonal_error_violation
    r = orthogonal_error_violation(tj, phi1)
    return [phi1, tj, r.v_plus, r.table.v_plus]


def _averaged_point(tj, sigma):
    from .ideal import gaussian_averaged_violation, small_angle_violation
    return [sigma, tj, gaussian_averaged_violation(tj, sigma), small_angle_violation(tj, sigma)]


def _decoherence_point(tj, alpha, rc, rs, phi):
    from .decoherence import DecoherenceRates, decohered_violation
    v = decohered_violation(tj, phi, alpha, DecoherenceRates(rc, rs))
    return [rc, rs, tj, alpha, abs(v.v_plus)]


def _inhomogeneity_point(n_qubits, groups, alpha, r_sigma, seeds, phi):
    from .inhomogeneity import averaged_violation
    r = averaged_violation(n_qubits, r_sigma, groups, alpha, seeds, phi)
    return [r_sigma, n_qubits, groups, alpha, r.mean_abs_v, r.stderr, len(seeds)]


def _run_points(fn, points, workers: int):
    if workers <= 1:
        return [fn(*p) for p in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*points)))


# --- output -----------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render(cfg: SweepConfig, rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"version": __version__, "command": cfg.command, "params": cfg.params,
                           "columns": cfg.columns, "rows": [[_jsonable(v) for v in r] for r in rows]},
                          indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# ndcspin {__version__}\n# command: {cfg.command}\n")
    buf.write(f"# params: {json.dumps(cfg.params, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cfg.columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


# --- subcommands ------------------------------------------------------------

def cmd_ideal(a):
    tjs, phis = parse_ints(a.twice_j), parse_grid(a.phi_grid)
    cfg = SweepConfig("ideal", {"twice_j": tjs, "phi_grid": a.phi_grid},
                      ["phi", "twice_j", "p2_plus", "p2_minus", "p12_pp", "p12_pm", "p12_mp", "p12_mm",
                       "v_plus", "v_minus"])
    return cfg, _run_points(_ideal_point, [(tj, p) for tj in tjs for p in phis], a.workers)


def cmd_two_angle(a):
    tjs, p1, p2 = parse_ints(a.twice_j), parse_grid(a.phi_grid), parse_grid(a.phi2_grid)
    cfg = SweepConfig("two-angle", {"twice_j": tjs, "phi_grid": a.phi_grid, "phi2_grid": a.phi2_grid},
                      ["phi1", "phi2", "twice_j", "v_plus", "v_minus"])
    pts = [(tj, x, y) for tj in tjs for x in p1 for y in p2]
    return cfg, _run_points(_two_angle_point, pts, a.workers)


def cmd_rotation_error(a):
    tjs = parse_ints(a.twice_j)
    if a.sigma_phi:
        sig = parse_grid(a.sigma_phi)
        if np.any(sig < 0):
            raise UsageError("sigma must be non-negative")
        cfg = SweepConfig("rotation-error", {"twice_j": tjs, "sigma_phi": a.sigma_phi},
                          ["sigma_phi", "twice_j", "v_avg", "v_small_angle"])
        return cfg, _run_points(_averaged_point, [(tj, s) for tj in tjs for s in sig], a.workers)
    phis = parse_grid(a.phi_grid)
    cfg = SweepConfig("rotation-error", {"twice_j": tjs, "phi_grid": a.phi_grid},
                      ["phi1", "twice_j", "v_plus", "v_plus_sum"])
    return cfg, _run_points(_rotation_point, [(tj, p) for tj in tjs for p in phis], a.workers)


def cmd_decoherence(a):
    tjs = parse_ints(a.twice_j)
    alphas = parse_grid(a.alpha0)
    rcs, rss = parse_grid(a.rc), parse_grid(a.rs)
    phi = parse_number(a.phi)
    if np.any(rcs < 0) or np.any(rss < 0) or np.any(alphas <= 0):
        raise UsageError("rates must be non-negative and |alpha_0| positive")
    cfg = SweepConfig("decoherence", {"twice_j": tjs, "alpha0": a.alpha0, "rc": a.rc,
                                      "rs": a.rs, "phi": a.phi},
                      ["r_c", "r_s", "twice_j", "alpha0", "v_abs"])
    pts = [(tj, al, rc, rs, phi) for tj in tjs for al in alphas for rc in rcs for rs in rss]
    return cfg, _run_points(_decoherence_point, pts, a.workers)


def cmd_inhomogeneity(a):
    ns = parse_ints(a.twice_j)
    groups = parse_ints(a.groups)
    sig = parse_grid(a.sigma_g)
    seeds = parse_seeds(a.seeds)
    alpha = parse_number(a.alpha0)
    phi = parse_number(a.phi)
    for n in ns:
        for k in groups:
            if n % k:
                raise UsageError(f"{n} qubits cannot be split into {k} groups")
    cfg = SweepConfig("inhomogeneity", {"n_qubits": ns, "groups": groups, "sigma_g": a.sigma_g,
                                        "seeds": seeds, "alpha0": alpha, "phi": a.phi},
                      ["r_sigma", "n_qubits", "n_groups", "alpha0", "mean_v_abs", "stderr", "n_seeds"])
    pts = [(n, k, alpha, s, seeds, phi) for n in ns for k in groups for s in sig]
    return cfg, _run_points(_inhomogeneity_point, pts, a.workers)


def cmd_planner(a):
    from . import planner as pl
    specs, geom = list(pl.REFERENCE_SPECS), pl.ResonatorGeometry()
    if a.config:
        try:
            extra, geom = pl.load_specs(a.config)
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise UsageError(f"bad planner config {a.config}: {exc}") from None
        specs += extra
    sheets = [pl.build_sheet(q, geom) for q in specs]
    if a.format == "text":
        return pl.sheets_to_text(sheets)
    if a.format == "json":
        return json.dumps({"version": __version__, "geometry": pl.geometry_dict(geom),
                           "sheets": [s.row_hz() for s in sheets],
                           "reference_rows": pl.REFERENCE_ROWS}, indent=2) + "\n"
    rows = [s.row_hz() for s in sheets]
    cols = [c for c in rows[0] if c != "flags"] + ["flags"]
    cfg = SweepConfig("planner", {"geometry": pl.geometry_dict(geom)}, cols)
    return render(cfg, [[r[c] if c != "flags" else ";".join(r[c]) for c in cols] for r in rows], "csv")


def cmd_oracle_check(a):
    from .oracle import run_oracle_suite
    results = run_oracle_suite(a.tolerance, a.n_max)
    ok = all(r.passed for r in results)
    text = json.dumps({"version": __version__, "passed": ok,
                       "checks": [r.as_dict() for r in results]}, indent=2) + "\n"
    return text, ok


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ndcspin", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmts=("csv", "json")):
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--format", choices=fmts, default=fmts[0])
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("ideal", help="violation with perfect parity measurements")
    sp.add_argument("--twice-j", required=True)
    sp.add_argument("--phi-grid", required=True)
    common(sp)

    sp = sub.add_parser("two-angle", help="violation for two different rotation angles")
    sp.add_argument("--twice-j", required=True)
    sp.add_argument("--phi-grid", required=True, help="first angle grid")
    sp.add_argument("--phi2-grid", required=True, help="second angle grid")
    common(sp)

    sp = sub.add_parser("rotation-error", help="orthogonal rotation error, optionally Gaussian averaged")
    sp.add_argument("--twice-j", required=True)
    sp.add_argument("--phi-grid", default="0:pi/2:64")
    sp.add_argument("--sigma-phi", default=None, help="grid of angle spreads; switches to the averaged violation")
    common(sp)

    sp = sub.add_parser("decoherence", help="violation under photon loss and spin dephasing")
    sp.add_argument("--twice-j", required=True)
    sp.add_argument("--alpha0", default="2")
    sp.add_argument("--rc", default="0")
    sp.add_argument("--rs", default="0")
    sp.add_argument("--phi", default="pi/4")
    common(sp)

    sp = sub.add_parser("inhomogeneity", help="seed-averaged violation with spread couplings")
    sp.add_argument("--twice-j", required=True, help="number of qubits N = 2j")
    sp.add_argument("--sigma-g", required=True, help="grid of relative spreads sigma_g/<g>")
    sp.add_argument("--groups", default="1")
    sp.add_argument("--seeds", default="32", help="a count, or a comma list of seeds")
    sp.add_argument("--alpha0", default="2")
    sp.add_argument("--phi", default="pi/4")
    common(sp)

    sp = sub.add_parser("planner", help="hardware budget sheet")
    sp.add_argument("--config", default=None, help="JSON with optional geometry and extra qubits")
    common(sp, ("json", "text", "csv"))

    sp = sub.add_parser("oracle-check", help="analytic modules against brute-force references")
    sp.add_argument("--tolerance", type=float, default=None, help="override every check tolerance")
    sp.add_argument("--n-max", type=int, default=None, help="force the Fock cutoff")
    sp.add_argument("--out", default=None)
    return p


SWEEPS = {"ideal": cmd_ideal, "two-angle": cmd_two_angle, "rotation-error": cmd_rotation_error,
          "decoherence": cmd_decoherence, "inhomogeneity": cmd_inhomogeneity}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command in SWEEPS:
            if args.workers < 1:
                raise UsageError("--workers must be at least 1")
            cfg, rows = SWEEPS[args.command](args)
            _emit(render(cfg, rows, args.format), args.out)
            return EXIT_OK
        if args.command == "planner":
            _emit(cmd_planner(args), args.out)
            return EXIT_OK
        text, ok = cmd_oracle_check(args)
        _emit(text, args.out)
        return EXIT_OK if ok else EXIT_CHECK
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CheckFailure, NumericError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
