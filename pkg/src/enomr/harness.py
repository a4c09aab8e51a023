"""Experiment presets, error norms, convergence ladders, shock metrics, timing.

Every benchmark of the study is a named preset; a preset builds a
:class:`RunSetup` (problem, initial state, end time, step rule, integrator)
from an :class:`ExperimentConfig`.  Scalar presets run in either precision;
the convergence ladders flag rows that hit the precision floor instead of
reporting a bogus order.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath
import numpy as np

from . import extended as xt
from .fluxsplit import SPLIT_GLOBAL_LF, SPLIT_UPWIND
from .physics import AdvectionModel, BurgersModel, EulerModel, SourceTerm, SOURCE_RAYLEIGH_TAYLOR
from .reconstruct import scheme_from_name
from .solver import (
    BoundarySpec,
    Dirichlet,
    Grid,
    NonReflective,
    Problem,
    Reflective,
    SimState,
    SplitSide,
    TimeDependent,
    advance,
    enforce_symmetry,
)
from .timeint import lssprk_step, lssprk_tableau, ssp_rk3_step

_MP_DPS = 50


def _mpf(fr: Fraction):
    return mpmath.mpf(fr.numerator) / fr.denominator


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    scheme: str = "eno-mr5"
    n: int = 100  # nodes per unit length (1/h)
    precision: str = xt.DOUBLE
    lam: Fraction = Fraction(1)
    alpha: int = 3
    cfl: float = 0.3
    t_end: Fraction | None = None
    nx: int | None = None
    ny: int | None = None

    def with_updates(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)


@dataclass
class RunSetup:
    problem: Problem
    state0: SimState
    t_end: Fraction
    dt_rule: object
    stepper: object
    on_step: object
    exact_final: object  # callable() -> field, or None
    meta: dict


@dataclass
class RunResult:
    state: SimState
    t: float
    steps: int
    setup: RunSetup


def run_experiment(setup: RunSetup) -> RunResult:
    state, t, steps = advance(
        setup.problem, setup.state0.copy(), setup.t_end, setup.dt_rule, setup.stepper,
        on_step=setup.on_step,
    )
    return RunResult(state, t, steps, setup)


# ---------------------------------------------------------------------------
# norms, convergence rows, metrics
# ---------------------------------------------------------------------------


def error_norms(numeric, exact):
    """(mean absolute, max absolute) over all nodes; sizes must agree."""
    if numeric.shape != exact.shape:
        raise ValueError(f"field shapes differ: {numeric.shape} vs {exact.shape}")
    diff = abs(numeric - exact)
    n = diff.size
    if xt.is_dd(diff):
        l1 = diff.sum() / xt.DD.wrap(float(n))
        return l1, diff.max()
    return float(np.sum(diff) / n), float(np.max(diff))


@dataclass
class ConvergenceRow:
    h: float
    l1: float
    linf: float
    order_l1: float | None
    order_linf: float | None
    floored: bool
    l1_str: str = ""
    linf_str: str = ""


def _observed_order(prev, cur, h_prev, h_cur):
    if prev <= 0 or cur <= 0:
        return None
    return math.log(prev / cur) / math.log(h_prev / h_cur)


def run_convergence_ladder(base: ExperimentConfig, meshes) -> list[ConvergenceRow]:
    """One row per mesh (given as 1/h); orders from consecutive rows.

    Rows whose max error sits at the representation floor are flagged and
    excluded from order reporting.
    """
    rows: list[ConvergenceRow] = []
    prev = None
    for n in meshes:
        cfg = base.with_updates(n=int(n))
        setup = build_setup(cfg)
        result = run_experiment(setup)
        exact = setup.exact_final()
        l1, linf = error_norms(result.state.field, exact)
        scale = abs(xt.to_float_array(exact)).max()
        floor = 50.0 * xt.EPS[cfg.precision] * max(scale, 1e-300)
        l1_f = l1.to_float() if xt.is_dd(l1) else l1
        linf_f = linf.to_float() if xt.is_dd(linf) else linf
        floored = linf_f < floor
        row = ConvergenceRow(
            h=1.0 / n,
            l1=l1_f,
            linf=linf_f,
            order_l1=None,
            order_linf=None,
            floored=floored,
            l1_str=xt.format_scalar(l1),
            linf_str=xt.format_scalar(linf),
        )
        if prev is not None and not floored and not prev.floored:
            row.order_l1 = _observed_order(prev.l1, row.l1, prev.h, row.h)
            row.order_linf = _observed_order(prev.linf, row.linf, prev.h, row.h)
        rows.append(row)
        prev = row
    return rows


def fitted_order(rows) -> float:
    """Least-squares slope of log(l1) vs log(h) over non-floored rows."""
    pts = [(math.log(r.h), math.log(r.l1)) for r in rows if not r.floored and r.l1 > 0]
    if len(pts) < 2:
        raise ValueError("need at least two usable rows for a fit")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])


def shock_quality_metrics(field, reference) -> dict:
    """Total variation plus over/undershoot against a reference value range."""
    u = xt.to_float_array(field).ravel()
    ref = xt.to_float_array(reference).ravel()
    tv = float(np.sum(np.abs(np.diff(u))))
    overshoot = max(0.0, float(u.max() - ref.max()))
    undershoot = max(0.0, float(ref.min() - u.min()))
    return {"total_variation": tv, "overshoot": overshoot, "undershoot": undershoot}


def timing_comparison(scheme_names, base: ExperimentConfig, repetitions: int = 3,
                      steps: int = 4, reference: str = "weno-ao53"):
    """Median wall-clock per step, normalized to the reference scheme.

    Same preset, resolution, and process for every scheme; direction of the
    ratios is meaningful, absolute values are hardware-dependent.
    """
    seconds = {}
    for name in scheme_names:
        cfg = base.with_updates(scheme=name)
        per_rep = []
        for _ in range(repetitions):
            setup = build_setup(cfg)
            state = setup.state0.copy()
            dt = setup.dt_rule(setup.problem, state)
            t0 = _time.perf_counter()
            t = 0.0
            for _k in range(steps):
                state = setup.stepper(state, t, dt)
                t += dt if isinstance(dt, float) else dt.to_float()
            per_rep.append((_time.perf_counter() - t0) / steps)
        seconds[name] = sorted(per_rep)[len(per_rep) // 2]
    ref = seconds[reference]
    return [(name, seconds[name], seconds[name] / ref) for name in scheme_names]


# ---------------------------------------------------------------------------
# initial conditions and exact solutions (evaluated once, exactly)
# ---------------------------------------------------------------------------


def _sin_alpha_values(grid: Grid, alpha: int):
    with mpmath.workdps(_MP_DPS):
        return [
            mpmath.sin(mpmath.pi * _mpf(grid.exact_coord(0, k))) ** alpha
            for k in range(grid.extents[0])
        ]


def _burgers_base_values(grid: Grid):
    with mpmath.workdps(_MP_DPS):
        return [
            1 + mpmath.sin(mpmath.pi * _mpf(grid.exact_coord(0, k))) ** 3 / 2
            for k in range(grid.extents[0])
        ]


def _burgers_exact_base(grid: Grid, t: Fraction):
    """Pre-shock solution of the unit-scale problem by characteristics."""
    with mpmath.workdps(_MP_DPS):
        tm = _mpf(t)
        out = []

        def u0(z):
            return 1 + mpmath.sin(mpmath.pi * z) ** 3 / 2

        def du0(z):
            return 3 * mpmath.pi * mpmath.sin(mpmath.pi * z) ** 2 * mpmath.cos(mpmath.pi * z) / 2

        tol = mpmath.mpf(10) ** (-_MP_DPS + 5)
        for k in range(grid.extents[0]):
            x = _mpf(grid.exact_coord(0, k))
            xi = x - u0(x) * tm
            for _ in range(100):
                g = xi + u0(xi) * tm - x
                xi = xi - g / (1 + du0(xi) * tm)
                if abs(g) < tol:
                    break
            out.append(u0(xi))
        return out


def composite_profile(x: np.ndarray) -> np.ndarray:
    """Four-shape advection test profile: Gaussians, square, triangle, ellipse."""
    u = np.zeros_like(x)
    delta = 0.005
    z = -0.7
    beta = math.log(2.0) / (36.0 * delta**2)

    def gauss(center):
        return np.exp(-beta * (x - center) ** 2)

    m = (x >= -0.8) & (x <= -0.6)
    u[m] = ((gauss(z - delta) + gauss(z + delta) + 4.0 * gauss(z)) / 6.0)[m]
    m = (x >= -0.4) & (x <= -0.2)
    u[m] = 1.0
    m = (x >= 0.0) & (x <= 0.2)
    u[m] = (1.0 - np.abs(10.0 * (x - 0.1)))[m]
    a = 0.5
    ell = 10.0

    def ellipse(center):
        return np.sqrt(np.maximum(1.0 - ell**2 * (x - center) ** 2, 0.0))

    m = (x >= 0.4) & (x <= 0.6)
    u[m] = ((ellipse(a - delta) + ellipse(a + delta) + 4.0 * ellipse(a)) / 6.0)[m]
    return u


# ---------------------------------------------------------------------------
# preset builders
# ---------------------------------------------------------------------------


def _scalar_field_from_values(values, lam: Fraction, precision: str):
    base = xt.asarray(values, precision).reshape(1, -1)
    lam_c = xt.const(lam, precision)
    return lam_c * base


def _lssprk_stepper(problem: Problem, order: int):
    tab = lssprk_tableau(order + 1)
    rhs = problem.rhs_operator()
    check = problem.stage_check()

    def stepper(state, t, dt):
        return lssprk_step(state, t, dt, rhs, tab, precision=problem.precision, stage_check=check)

    return stepper


def _ssprk3_stepper(problem: Problem):
    rhs = problem.rhs_operator()
    check = problem.stage_check()

    def stepper(state, t, dt):
        return ssp_rk3_step(state, t, dt, rhs, precision=problem.precision, stage_check=check)

    return stepper


def _cfl_dt_rule(cfl: float):
    def rule(problem: Problem, state: SimState):
        model = problem.model
        field = state.field
        if problem.grid.dims == 1:
            alpha = model.max_wavespeed(field) if not model.is_system else model.max_wavespeed(field, 0)
        else:
            alpha = max(model.max_wavespeed(field, 0), model.max_wavespeed(field, 1))
        h = float(min(problem.grid.spacing))
        return cfl * h / alpha

    return rule


def _fixed_dt_rule(dt):
    return lambda problem, state: dt


def _scheme_and_grid_1d(cfg: ExperimentConfig, n_nodes: int, origin, spacing) -> tuple:
    scheme = scheme_from_name(cfg.scheme)
    gw = scheme.window_halfwidth + 1
    grid = Grid((n_nodes,), (Fraction(origin),), (Fraction(spacing),), gw)
    return scheme, grid


def _build_advect_sin_alpha(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    scheme, grid = _scheme_and_grid_1d(cfg, 2 * n, Fraction(-1), Fraction(1, n))
    problem = Problem(grid, AdvectionModel(), scheme, BoundarySpec.periodic_1d(),
                      precision=cfg.precision, splitting=SPLIT_UPWIND)
    u0 = _scalar_field_from_values(_sin_alpha_values(grid, cfg.alpha), cfg.lam, cfg.precision)
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(2)
    dt = xt.const(Fraction(1, n), cfg.precision)
    order = scheme.order

    def exact_final():
        if Fraction(t_end) % 2 != 0:
            raise ValueError("the periodic-return error measure needs t_end to be a multiple of 2")
        return u0

    return RunSetup(
        problem,
        problem.make_state(u0.copy()),
        Fraction(t_end),
        _fixed_dt_rule(dt),
        _lssprk_stepper(problem, order),
        None,
        exact_final,
        {"problem": "advect-sin-alpha", "alpha": cfg.alpha, "lambda": str(cfg.lam),
         "domain": "[-1,1]", "t_end": str(t_end), "integrator": f"lssprk({order + 1},{order})",
         "dt": "h"},
    )


def _build_advect_composite(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    scheme, grid = _scheme_and_grid_1d(cfg, 2 * n, Fraction(-1), Fraction(1, n))
    problem = Problem(grid, AdvectionModel(), scheme, BoundarySpec.periodic_1d(),
                      precision=cfg.precision, splitting=SPLIT_UPWIND)
    base = composite_profile(grid.axis_coords(0))
    u0 = _scalar_field_from_values(base, cfg.lam, cfg.precision)
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(20)
    dt = xt.const(Fraction(1, n), cfg.precision)

    def exact_final():
        return u0

    return RunSetup(
        problem,
        problem.make_state(u0.copy()),
        Fraction(t_end),
        _fixed_dt_rule(dt),
        _lssprk_stepper(problem, scheme.order),
        None,
        exact_final,
        {"problem": "advect-composite", "lambda": str(cfg.lam), "domain": "[-1,1]",
         "t_end": str(t_end), "integrator": f"lssprk({scheme.order + 1},{scheme.order})"},
    )


_BURGERS_DT_FACTORS = {5: (Fraction(1), Fraction(5, 3)), 9: (Fraction(100), Fraction(3)),
                       13: (Fraction(10**4), Fraction(13, 3)), 17: (Fraction(10**6), Fraction(17, 3))}


def _burgers_dt(order: int, h: Fraction, lam: Fraction):
    coef, expo = _BURGERS_DT_FACTORS[order]
    with mpmath.workdps(_MP_DPS):
        return _mpf(coef) * mpmath.power(_mpf(h), _mpf(expo)) / _mpf(lam)


def _build_burgers_smooth(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    scheme, grid = _scheme_and_grid_1d(cfg, 2 * n, Fraction(0), Fraction(1, n))
    problem = Problem(grid, BurgersModel(), scheme, BoundarySpec.periodic_1d(),
                      precision=cfg.precision, splitting=SPLIT_UPWIND)
    u0 = _scalar_field_from_values(_burgers_base_values(grid), cfg.lam, cfg.precision)
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(1, 10) / cfg.lam
    dt_mpf = _burgers_dt(scheme.order, Fraction(1, n), cfg.lam)
    dt = xt.const(dt_mpf, cfg.precision)
    base_t = Fraction(t_end) * cfg.lam  # unit-scale end time

    def exact_final():
        vals = _burgers_exact_base(grid, base_t)
        return _scalar_field_from_values(vals, cfg.lam, cfg.precision)

    return RunSetup(
        problem,
        problem.make_state(u0.copy()),
        Fraction(t_end),
        _fixed_dt_rule(dt),
        _ssprk3_stepper(problem),
        None,
        exact_final,
        {"problem": "burgers-smooth", "lambda": str(cfg.lam), "domain": "[0,2]",
         "t_end": str(t_end), "integrator": "ssp-rk3", "dt_rule": "order-matched"},
    )


def _build_burgers_shock(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    scheme, grid = _scheme_and_grid_1d(cfg, 2 * n, Fraction(0), Fraction(1, n))
    problem = Problem(grid, BurgersModel(), scheme, BoundarySpec.periodic_1d(),
                      precision=cfg.precision, splitting=SPLIT_UPWIND)
    u0 = _scalar_field_from_values(_burgers_base_values(grid), cfg.lam, cfg.precision)
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(2) / cfg.lam
    return RunSetup(
        problem,
        problem.make_state(u0.copy()),
        Fraction(t_end),
        _cfl_dt_rule(cfg.cfl),
        _ssprk3_stepper(problem),
        None,
        None,
        {"problem": "burgers-shock", "lambda": str(cfg.lam), "domain": "[0,2]",
         "t_end": str(t_end), "integrator": "ssp-rk3", "cfl": cfg.cfl},
    )


def _euler_problem_1d(cfg: ExperimentConfig, n_nodes: int, origin, spacing, gamma=1.4) -> Problem:
    scheme = scheme_from_name(cfg.scheme)
    gw = scheme.window_halfwidth + 1
    grid = Grid((n_nodes,), (Fraction(origin),), (Fraction(spacing),), gw)
    model = EulerModel(gamma=gamma, dims=1)
    return Problem(grid, model, scheme, BoundarySpec.non_reflective_1d(),
                   splitting=SPLIT_GLOBAL_LF)


def _build_lax(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    problem = _euler_problem_1d(cfg, 2 * n + 1, Fraction(0), Fraction(1, n))
    model = problem.model
    x = problem.grid.axis_coords(0)
    rho = np.where(x < 1.0, 0.445, 0.5)
    u = np.where(x < 1.0, 0.698, 0.0)
    p = np.where(x < 1.0, 3.528, 0.571)
    U0 = model.from_primitive(rho, u, p)
    model.validate(U0, "initial condition")
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(26, 100)
    return RunSetup(
        problem,
        problem.make_state(U0),
        Fraction(t_end),
        _cfl_dt_rule(cfg.cfl),
        _ssprk3_stepper(problem),
        None,
        None,
        {"problem": "lax", "domain": "[0,2]", "t_end": str(t_end), "gamma": 1.4,
         "integrator": "ssp-rk3", "cfl": cfg.cfl},
    )


def _build_titarev_toro(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    problem = _euler_problem_1d(cfg, 10 * n + 1, Fraction(-5), Fraction(1, n))
    model = problem.model
    x = problem.grid.axis_coords(0)
    left = x < -4.5
    rho = np.where(left, 1.515695, 1.0 + 0.1 * np.sin(20.0 * np.pi * x))
    u = np.where(left, 0.523346, 0.0)
    p = np.where(left, 1.805, 1.0)
    U0 = model.from_primitive(rho, u, p)
    model.validate(U0, "initial condition")
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(5)
    return RunSetup(
        problem,
        problem.make_state(U0),
        Fraction(t_end),
        _cfl_dt_rule(cfg.cfl),
        _ssprk3_stepper(problem),
        None,
        None,
        {"problem": "titarev-toro", "domain": "[-5,5]", "t_end": str(t_end), "gamma": 1.4,
         "integrator": "ssp-rk3", "cfl": cfg.cfl},
    )


_RP1_QUADRANTS = {
    # (x >= 0, y >= 0): (rho, u, v, p)
    (False, False): (0.138, 1.206, 1.206, 0.029),
    (False, True): (0.5323, 1.206, 0.0, 0.3),
    (True, True): (1.5, 0.0, 0.0, 1.5),
    (True, False): (0.5323, 0.0, 1.206, 0.3),
}

_RP2_QUADRANTS = {
    (False, False): (1.0, -0.75, 0.5, 1.0),
    (False, True): (2.0, 0.75, 0.5, 1.0),
    (True, True): (1.0, 0.75, -0.5, 1.0),
    (True, False): (3.0, -0.75, -0.5, 1.0),
}


def _quadrant_ic(grid: Grid, model: EulerModel, quadrants: dict) -> np.ndarray:
    x = grid.axis_coords(0)
    y = grid.axis_coords(1)
    X, Y = np.meshgrid(x, y, indexing="xy")
    rho = np.empty_like(X)
    u = np.empty_like(X)
    v = np.empty_like(X)
    p = np.empty_like(X)
    for (xe, ye), (r_, u_, v_, p_) in quadrants.items():
        m = ((X >= 0) == xe) & ((Y >= 0) == ye)
        rho[m], u[m], v[m], p[m] = r_, u_, v_, p_
    return model.from_primitive(rho, (u, v), p)


def _build_riemann2d(cfg: ExperimentConfig, quadrants: dict, label: str) -> RunSetup:
    n = cfg.n
    nx = cfg.nx if cfg.nx is not None else 2 * n + 1
    ny = cfg.ny if cfg.ny is not None else 2 * n + 1
    scheme = scheme_from_name(cfg.scheme)
    gw = scheme.window_halfwidth + 1
    grid = Grid((nx, ny), (Fraction(-1), Fraction(-1)),
                (Fraction(2, nx - 1), Fraction(2, ny - 1)), gw)
    grid.require_square_cells()
    model = EulerModel(1.4, dims=2)
    problem = Problem(grid, model, scheme, BoundarySpec.non_reflective_2d())
    U0 = _quadrant_ic(grid, model, quadrants)
    model.validate(U0, "initial condition")
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(1)
    levels = "30 equidistant 0.2..1.7" if label == "rp1" else "30 equidistant 0.2..3"
    return RunSetup(
        problem,
        problem.make_state(U0),
        Fraction(t_end),
        _cfl_dt_rule(cfg.cfl),
        _ssprk3_stepper(problem),
        None,
        None,
        {"problem": label, "domain": "[-1,1]^2", "t_end": str(t_end), "gamma": 1.4,
         "integrator": "ssp-rk3", "cfl": cfg.cfl, "contour-levels": levels},
    )


_DMR_POST = (8.0, 8.25 * math.sin(math.radians(60)), -8.25 * math.cos(math.radians(60)), 116.5)
_DMR_PRE = (1.4, 0.0, 0.0, 1.0)


def _dmr_states(model: EulerModel):
    post = model.from_primitive(_DMR_POST[0], (_DMR_POST[1], _DMR_POST[2]), _DMR_POST[3])
    pre = model.from_primitive(_DMR_PRE[0], (_DMR_PRE[1], _DMR_PRE[2]), _DMR_PRE[3])
    return post.reshape(4), pre.reshape(4)


def dmr_shock_x(y, t):
    """Oblique-shock foot position: x = 1/6 + (y + 20 t)/sqrt(3)."""
    return 1.0 / 6.0 + (y + 20.0 * t) / math.sqrt(3.0)


def _build_double_mach(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    nx = cfg.nx if cfg.nx is not None else 4 * n + 1
    ny = cfg.ny if cfg.ny is not None else n + 1
    scheme = scheme_from_name(cfg.scheme)
    gw = scheme.window_halfwidth + 1
    grid = Grid((nx, ny), (Fraction(0), Fraction(0)),
                (Fraction(4, nx - 1), Fraction(1, ny - 1)), gw)
    grid.require_square_cells()
    model = EulerModel(1.4, dims=2)
    post, pre = _dmr_states(model)

    def top_states(X, Y, t):
        states = np.where(X[None, :, :] < dmr_shock_x(Y, t)[None, :, :],
                          post.reshape(4, 1, 1), pre.reshape(4, 1, 1))
        return states

    bc = BoundarySpec({
        "left": Dirichlet(tuple(post)),
        "right": NonReflective(),
        "top": TimeDependent(top_states),
        "bottom": SplitSide(1.0 / 6.0, NonReflective(), Reflective()),
    })
    problem = Problem(grid, model, scheme, bc)
    x = grid.axis_coords(0)
    y = grid.axis_coords(1)
    X, Y = np.meshgrid(x, y, indexing="xy")
    U0 = np.where(X[None] < dmr_shock_x(Y, 0.0)[None], post.reshape(4, 1, 1), pre.reshape(4, 1, 1))
    model.validate(U0, "initial condition")
    t_end = cfg.t_end if cfg.t_end is not None else Fraction(2, 10)
    return RunSetup(
        problem,
        problem.make_state(U0),
        Fraction(t_end),
        _cfl_dt_rule(cfg.cfl),
        _ssprk3_stepper(problem),
        None,
        None,
        {"problem": "double-mach", "domain": "[0,4]x[0,1]", "t_end": str(t_end), "gamma": 1.4,
         "integrator": "ssp-rk3", "cfl": cfg.cfl, "contour-levels": "40 equidistant 2..21"},
    )


def _build_rayleigh_taylor(cfg: ExperimentConfig) -> RunSetup:
    n = cfg.n
    nx = cfg.nx if cfg.nx is not None else n // 4 + 1
    ny = cfg.ny if cfg.ny is not None else n + 1
    scheme = scheme_from_name(cfg.scheme)
    gw = scheme.window_halfwidth + 1
    grid = Grid((nx, ny), (Fraction(0), Fraction(0)),
                (Fraction(1, 4 * (nx - 1)), Fraction(1, ny - 1)), gw)
    grid.require_square_cells()
    gamma = 5.0 / 3.0
    model = EulerModel(gamma, dims=2)
    x = grid.axis_coords(0)
    y = grid.axis_coords(1)
    X, Y = np.meshgrid(x, y, indexing="xy")
    lower = Y < 0.5
    rho = np.where(lower, 2.0, 1.0)
    p = np.where(lower, 2.0 * Y + 1.0, Y + 1.5)
    c = np.sqrt(gamma * p / rho)
    v = -0.025 * c * np.cos(8.0 * np.pi * X)
    U0 = model.from_primitive(rho, (np.zeros_like(rho), v), p)
    model.validate(U0, "initial condition")
    bc = BoundarySpec({
        "left": Reflective(),
        "right": Reflective(),
        "bottom": Dirichlet((2.0, 0.0, 0.0, 1.0 / (gamma - 1.0))),
        "top": Dirichlet((1.0, 0.0, 0.0, 2.5 / (gamma - 1.0))),
    })
    problem = Problem(grid, model, scheme, bc,
                      source=SourceTerm(SOURCE_RAYLEIGH_TAYLOR))

    def symmetrize(state: SimState, t: float) -> SimState:
        state.field = enforce_symmetry(state.field, grid, 0.125, flip_component=1)
        return state

    t_end = cfg.t_end if cfg.t_end is not None else Fraction(195, 100)
    return RunSetup(
        problem,
        problem.make_state(U0),
        Fraction(t_end),
        _cfl_dt_rule(cfg.cfl),
        _ssprk3_stepper(problem),
        symmetrize,
        None,
        {"problem": "rayleigh-taylor", "domain": "[0,0.25]x[0,1]", "t_end": str(t_end),
         "gamma": gamma, "integrator": "ssp-rk3", "cfl": cfg.cfl,
         "contour-levels": "20 equidistant 0.9..2.2", "symmetry-plane": 0.125},
    )


PRESETS = {
    "advect-sin-alpha": _build_advect_sin_alpha,
    "advect-composite": _build_advect_composite,
    "burgers-smooth": _build_burgers_smooth,
    "burgers-shock": _build_burgers_shock,
    "lax": _build_lax,
    "titarev-toro": _build_titarev_toro,
    "rp1": lambda cfg: _build_riemann2d(cfg, _RP1_QUADRANTS, "rp1"),
    "rp2": lambda cfg: _build_riemann2d(cfg, _RP2_QUADRANTS, "rp2"),
    "double-mach": _build_double_mach,
    "rayleigh-taylor": _build_rayleigh_taylor,
}


def build_setup(cfg: ExperimentConfig) -> RunSetup:
    if cfg.problem not in PRESETS:
        raise ValueError(f"unknown preset {cfg.problem!r}; have {sorted(PRESETS)}")
    return PRESETS[cfg.problem](cfg)
