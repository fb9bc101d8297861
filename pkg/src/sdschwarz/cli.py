"""Command line front end.

Subcommands::

    run           one coupled solve; writes results.json, history.csv, fields
    table1        test1 over h = 2^-3 .. 2^-6 with optimal weights
    table2        the nine test2 parameter sets
    sweep         reduction factors over the frequency band as CSV
    oracle-check  Fourier oracle against the closed-form factor

Settings come from built-in defaults, then an INI file (``--config``,
section ``[run]``), then command line flags. The output directory can also
be set with the ``SDSCHWARZ_OUT`` environment variable, which overrides
the config file but not ``--out``.
"""

import argparse
import configparser
from dataclasses import asdict, dataclass, fields, replace
import os
from pathlib import Path
import sys
import time

import numpy as np

from . import cases, fem
from .export import write_field_csv, write_json, write_rows_csv, write_vtk
from .fourier_oracle import measured_reduction
from .linalg import ConvergenceError
from .params import BAND_CONVENTIONS, PhysicalParams, RobinParams, frequency_band
from .schwarz import build_solver, darcy_velocity
from .symbol import optimal_alphas, rho, sweep_reduction_factor, write_sweep_csv

OUT_ENV = "SDSCHWARZ_OUT"
MODES = ("gmres", "gauss_seidel")


@dataclass(frozen=True)
class RunConfig:
    case: str = "test1"
    h: float = None
    kappa: float = None
    epsilon: float = None
    n1bl: float = None
    m11bl: float = None
    table2_case: int = None
    robin: str = "optimal"
    alpha_ff: float = None
    alpha_pm: float = None
    band: str = None
    mode: str = "gmres"
    tol: float = 1e-9
    max_iter: int = 500
    out: str = "results"
    fields: bool = True

    def validate(self):
        if self.case not in ("test1", "test2"):
            raise ValueError(f"case must be 'test1' or 'test2', got {self.case!r}")
        if self.h is not None and not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h!r}")
        if self.robin not in ("optimal", "manual"):
            raise ValueError(f"robin must be 'optimal' or 'manual', got {self.robin!r}")
        if self.robin == "manual" and (self.alpha_ff is None or self.alpha_pm is None):
            raise ValueError("robin = manual needs alpha_ff and alpha_pm")
        if self.robin == "optimal" and (self.alpha_ff is not None or self.alpha_pm is not None):
            raise ValueError("alpha_ff/alpha_pm given but robin = optimal; set robin = manual")
        if self.band is not None and self.band not in BAND_CONVENTIONS:
            raise ValueError(f"band must be one of {sorted(BAND_CONVENTIONS)}, got {self.band!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter!r}")
        if self.case == "test1":
            for key in ("n1bl", "m11bl", "table2_case"):
                if getattr(self, key) is not None:
                    raise ValueError(f"{key} cannot be set for test1 (it is fixed by the case)")
        if self.table2_case is not None:
            if not 1 <= self.table2_case <= len(cases.TABLE2):
                raise ValueError(f"table2_case must be in 1..{len(cases.TABLE2)}")
            for key in ("kappa", "epsilon", "m11bl", "n1bl"):
                if getattr(self, key) is not None:
                    raise ValueError(f"{key} conflicts with table2_case")
        for key in ("kappa", "epsilon", "n1bl", "alpha_ff", "alpha_pm"):
            v = getattr(self, key)
            if v is not None and not v > 0:
                raise ValueError(f"{key} must be positive, got {v!r}")
        if self.m11bl is not None and self.m11bl < 0:
            raise ValueError(f"m11bl must be non-negative, got {self.m11bl!r}")
        return self

    @property
    def mesh_size(self):
        if self.h is not None:
            return self.h
        return cases.TABLE1_H[0] if self.case == "test1" else cases.TEST2_H

    @property
    def band_convention(self):
        if self.band is not None:
            return self.band
        return "quarter_h" if self.case == "test1" else "half_h"


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_FLOATS = {"h", "kappa", "epsilon", "n1bl", "m11bl", "alpha_ff", "alpha_pm", "tol"}
_INTS = {"table2_case", "max_iter"}


def _convert(key, text):
    if key in _FLOATS:
        return float(text)
    if key in _INTS:
        return int(text)
    if key == "fields":
        return text.strip().lower() in ("1", "true", "yes", "on")
    return text.strip()


def _line_of(path, key):
    with open(path) as fh:
        for i, line in enumerate(fh, 1):
            if line.split("=")[0].split(":")[0].strip().lower() == key:
                return i
    return None


def load_config(path):
    """Read the ``[run]`` section of an INI file into a dict of overrides."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as err:
        raise ValueError(f"{path}: {err}") from None
    extra = [s for s in parser.sections() if s != "run"]
    if extra:
        raise ValueError(f"{path}: unknown section(s) {extra}; only [run] is read")
    if "run" not in parser:
        return {}
    out = {}
    for key, text in parser["run"].items():
        where = f"{path}:{_line_of(path, key)}"
        if key not in _TYPES:
            raise ValueError(f"{where}: unknown key {key!r}; valid keys: {sorted(_TYPES)}")
        try:
            out[key] = _convert(key, text)
        except ValueError:
            raise ValueError(f"{where}: bad value {text!r} for {key!r}") from None
    return out


def resolve_config(args):
    values = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    env = os.environ.get(OUT_ENV)
    if env:
        values["out"] = env
    for key in _TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values).validate()


# ---------------------------------------------------------------------------
# experiment logic
# ---------------------------------------------------------------------------

def make_case(cfg):
    if cfg.case == "test1":
        kw = {k: getattr(cfg, k) for k in ("kappa", "epsilon") if getattr(cfg, k) is not None}
        return cases.test1(h=cfg.mesh_size, **kw)
    if cfg.table2_case is not None:
        return cases.table2_case(cfg.table2_case, h=cfg.mesh_size)
    kw = {k: getattr(cfg, k) for k in ("kappa", "epsilon", "m11bl", "n1bl")
          if getattr(cfg, k) is not None}
    return cases.test2(h=cfg.mesh_size, **kw)


def choose_robin(cfg, case):
    band = frequency_band(case.interface_length, case.h, cfg.band_convention)
    if cfg.robin == "manual":
        return RobinParams(cfg.alpha_ff, cfg.alpha_pm), band
    return optimal_alphas(case.params, band).robin, band


def _solve(solver, cfg):
    if cfg.mode == "gmres":
        return solver.gmres_interface_solve(tol=cfg.tol, max_iter=cfg.max_iter)
    return solver.gauss_seidel_solve(tol=cfg.tol, max_iter=cfg.max_iter)


def run_experiment(cfg, write=True):
    """Run one configuration. Returns ``(exit_status, results_dict, result)``."""
    t0 = time.perf_counter()
    case = make_case(cfg)
    robin, band = choose_robin(cfg, case)
    solver = build_solver(case, robin)
    t_setup = time.perf_counter() - t0
    converged = True
    try:
        res = _solve(solver, cfg)
    except ConvergenceError as err:
        converged = False
        res = err.x
    t_solve = time.perf_counter() - t0 - t_setup
    results = {
        "case": case.name,
        "h": case.h,
        "params": asdict(case.params),
        "band": {"convention": cfg.band_convention, "k_min": band.k_min, "k_max": band.k_max},
        "robin_mode": cfg.robin,
        "alpha_ff": robin.alpha_ff,
        "alpha_pm": robin.alpha_pm,
        "mode": cfg.mode,
        "tol": cfg.tol,
        "max_iter": cfg.max_iter,
        "converged": converged,
        "iterations": res.iterations,
        "final_residual": res.final_residual,
        "reference_iterations": case.reference_iterations,
        "interface_unknowns": 3 * solver.n,
        "l2_errors": None,
        "timing": {"setup_seconds": t_setup, "solve_seconds": t_solve},
    }
    if case.exact is not None:
        results["l2_errors"] = {
            "v_ff": fem.l2_error(res.v_ff, case.exact.v_ff),
            "p_ff": fem.l2_error(res.p_ff, case.exact.p_ff),
            "p_pm": fem.l2_error(res.p_pm, case.exact.p_pm),
        }
    if write:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "results.json", results)
        res.log.to_csv(out / "history.csv")
        if cfg.fields:
            write_fields(out, res, case, solver)
    return (0 if converged else 2), results, res


def write_fields(out, res, case, solver):
    write_field_csv(out / "v_ff.csv", res.v_ff)
    write_field_csv(out / "p_ff.csv", res.p_ff)
    write_field_csv(out / "p_pm.csv", res.p_pm)
    v_pm = darcy_velocity(res.p_pm, case.params, solver.recovery)
    write_vtk(out / "free_flow.vtk", [res.v_ff])
    write_vtk(out / "porous_medium.vtk", [res.p_pm, v_pm])


def table1_rows(cfg):
    rows = []
    for h, ref, (a_ff, a_pm) in zip(cases.TABLE1_H, cases.TABLE1_ITERATIONS, cases.TABLE1_ALPHAS):
        row_cfg = replace(cfg, case="test1", h=h, robin="optimal", alpha_ff=None, alpha_pm=None)
        rows.append(_table_row(row_cfg, {"h": h, "reference_iterations": ref,
                                         "reference_alpha_ff": a_ff, "reference_alpha_pm": a_pm}))
    return rows


def table2_rows(cfg):
    rows = []
    for i, (kappa, eps, m11, a_ff, a_pm, ref) in enumerate(cases.TABLE2, 1):
        row_cfg = replace(cfg, case="test2", h=cases.TEST2_H, table2_case=i, robin="optimal",
                          alpha_ff=None, alpha_pm=None, kappa=None, epsilon=None,
                          m11bl=None, n1bl=None)
        rows.append(_table_row(row_cfg, {"case": i, "kappa": kappa, "epsilon": eps, "m11bl": m11,
                                         "reference_iterations": ref,
                                         "reference_alpha_ff": a_ff, "reference_alpha_pm": a_pm}))
    return rows


def _table_row(cfg, row):
    try:
        status, results, _ = run_experiment(cfg.validate(), write=False)
        row.update(alpha_ff=f"{results['alpha_ff']:.3e}", alpha_pm=f"{results['alpha_pm']:.3e}",
                   iterations=results["iterations"], converged=results["converged"], error="")
    except Exception as err:  # keep going with the remaining rows
        row.update(alpha_ff="", alpha_pm="", iterations="", converged=False, error=str(err))
    return row


TABLE1_COLUMNS = ["h", "alpha_ff", "alpha_pm", "iterations", "reference_alpha_ff",
                  "reference_alpha_pm", "reference_iterations", "converged", "error"]
TABLE2_COLUMNS = ["case", "kappa", "epsilon", "m11bl", "alpha_ff", "alpha_pm", "iterations",
                  "reference_alpha_ff", "reference_alpha_pm", "reference_iterations",
                  "converged", "error"]


def sweep_table(cfg, n_samples=1000, log=False):
    case = make_case(cfg)
    robin, band = choose_robin(cfg, case)
    return sweep_reduction_factor(case.params, robin, band, n_samples, log=log), robin, band


def oracle_check(n_samples=200, seed=0):
    """Largest relative gap between the Fourier oracle and the closed form
    over random admissible tuples."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        k = 10 ** rng.uniform(-1, 3)
        params = PhysicalParams(10 ** rng.uniform(-8, -1), 10 ** rng.uniform(-8, -1),
                                10 ** rng.uniform(-3, -1), 10 ** rng.uniform(-4, 0),
                                10 ** rng.uniform(-4, 0))
        robin = RobinParams(10 ** rng.uniform(-2, 5), 10 ** rng.uniform(-2, 5))
        closed = float(rho(params, robin, k))
        gap = abs(measured_reduction(k, params, robin) - closed) / closed
        worst = max(worst, gap)
    return worst


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="INI file with a [run] section")
    p.add_argument("--out", help=f"output directory (env {OUT_ENV})")
    p.add_argument("--band", choices=sorted(BAND_CONVENTIONS),
                   help="k_max convention (default: quarter_h for test1, half_h for test2)")
    p.add_argument("--mode", choices=MODES, help="interface solver")
    p.add_argument("--tol", type=float, help="relative stopping tolerance")
    p.add_argument("--max-iter", dest="max_iter", type=int)


def _case_args(p):
    p.add_argument("--case", choices=("test1", "test2"))
    p.add_argument("--h", type=float, help="mesh size")
    p.add_argument("--kappa", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n1bl", type=float)
    p.add_argument("--m11bl", type=float)
    p.add_argument("--table2-case", dest="table2_case", type=int,
                   help="take test2 parameters from this row of the reference table")
    p.add_argument("--robin", choices=("optimal", "manual"))
    p.add_argument("--alpha-ff", dest="alpha_ff", type=float)
    p.add_argument("--alpha-pm", dest="alpha_pm", type=float)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sdschwarz", description="Robin-Robin Schwarz solver for coupled Stokes-Darcy flow"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="solve one configuration")
    _common(p)
    _case_args(p)
    p.add_argument("--no-fields", dest="fields", action="store_const", const=False,
                   help="skip field exports")

    for name in ("table1", "table2"):
        p = sub.add_parser(name, help=f"reproduce {name}")
        _common(p)

    p = sub.add_parser("sweep", help="reduction factors over the frequency band")
    _common(p)
    _case_args(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--log", action="store_true", help="logarithmic k grid")

    p = sub.add_parser("oracle-check", help="Fourier oracle against the closed form")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rtol", type=float, default=1e-10)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "oracle-check":
            worst = oracle_check(args.samples, args.seed)
            ok = worst <= args.rtol
            print(f"max relative gap {worst:.3e} over {args.samples} samples: "
                  f"{'ok' if ok else 'FAILED'}")
            return 0 if ok else 1
        cfg = resolve_config(args)
    except (ValueError, OSError) as err:
        print(f"sdschwarz: error: {err}", file=sys.stderr)
        return 1

    out = Path(cfg.out)
    if args.command == "run":
        try:
            status, results, _ = run_experiment(cfg)
        except (ValueError, OSError) as err:
            print(f"sdschwarz: error: {err}", file=sys.stderr)
            return 1
        flag = "" if results["converged"] else " (NOT converged)"
        print(f"{results['case']}: alpha_ff={results['alpha_ff']:.3e} "
              f"alpha_pm={results['alpha_pm']:.3e} iterations={results['iterations']}{flag}")
        if results["l2_errors"]:
            print("  L2 errors: " + ", ".join(f"{k}={v:.3e}" for k, v in
                                             results["l2_errors"].items()))
        return status

    if args.command in ("table1", "table2"):
        rows = table1_rows(cfg) if args.command == "table1" else table2_rows(cfg)
        cols = TABLE1_COLUMNS if args.command == "table1" else TABLE2_COLUMNS
        out.mkdir(parents=True, exist_ok=True)
        write_rows_csv(out / f"{args.command}.csv", rows, cols)
        for r in rows:
            print("  ".join(f"{c}={r[c]}" for c in cols if c != "error" and r[c] != ""),
                  r["error"])
        return 0 if all(r["converged"] for r in rows) else 2

    if args.command == "sweep":
        if args.samples < 2:
            print("sdschwarz: error: --samples must be at least 2", file=sys.stderr)
            return 1
        try:
            table, robin, band = sweep_table(cfg, args.samples, args.log)
        except ValueError as err:
            print(f"sdschwarz: error: {err}", file=sys.stderr)
            return 1
        out.mkdir(parents=True, exist_ok=True)
        write_sweep_csv(out / "sweep.csv", table)
        print(f"k in [{band.k_min:.4g}, {band.k_max:.4g}], alpha_ff={robin.alpha_ff:.3e}, "
              f"alpha_pm={robin.alpha_pm:.3e}, max rho={table['rho'].max():.4f}, "
              f"max rho_tilde={table['rho_tilde'].max():.4f}")
        return 0
    return 1  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
