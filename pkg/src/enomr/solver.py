"""Structured-grid driver: ghosts, boundary conditions, and the semi-discrete operator.

Node-centered uniform grids in one or two dimensions.  Grid geometry is kept
as exact rationals so the extended-precision runs are not floored by the
spacing itself.  Fields are stored interior-only with a leading component
axis; every right-hand-side evaluation pads the field, fills ghosts at the
stage time, sweeps each direction with interface fluxes shared by the two
adjacent cells, and accumulates an exact boundary-flux rate so discrete
conservation can be audited under any boundary condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import extended as xt
from .fluxsplit import SPLIT_GLOBAL_LF, scalar_line_fluxes, system_line_fluxes
from .physics import SourceTerm
from .reconstruct import ReconstructionScheme
from .timeint import NanDetected


@dataclass(frozen=True)
class Grid:
    """Uniform node-centered grid; ``extents`` counts unique nodes per axis."""

    extents: tuple[int, ...]
    origin: tuple[Fraction, ...]
    spacing: tuple[Fraction, ...]
    ghost_width: int

    def __post_init__(self):
        if len(self.extents) not in (1, 2):
            raise ValueError("grids are one- or two-dimensional")
        if len(self.origin) != self.dims or len(self.spacing) != self.dims:
            raise ValueError("origin/spacing must match the grid dimension")
        if self.ghost_width < 1:
            raise ValueError("ghost width must be positive")
        object.__setattr__(self, "origin", tuple(Fraction(v) for v in self.origin))
        object.__setattr__(self, "spacing", tuple(Fraction(v) for v in self.spacing))

    @property
    def dims(self) -> int:
        return len(self.extents)

    def axis_coords(self, axis: int) -> np.ndarray:
        """Float node coordinates (exact positions are origin + k*spacing)."""
        n = self.extents[axis]
        return np.array([float(self.origin[axis] + k * self.spacing[axis]) for k in range(n)])

    def exact_coord(self, axis: int, k: int) -> Fraction:
        return self.origin[axis] + k * self.spacing[axis]

    def require_square_cells(self):
        if self.dims == 2 and self.spacing[0] != self.spacing[1]:
            raise ValueError("this configuration requires equal spacing in both axes")


def make_grid_1d(n_nodes: int, origin, spacing, ghost_width: int) -> Grid:
    return Grid((n_nodes,), (Fraction(origin),), (Fraction(spacing),), ghost_width)


def make_grid_2d(nx: int, ny: int, origin, spacing, ghost_width: int) -> Grid:
    ox, oy = origin
    hx, hy = spacing
    return Grid((nx, ny), (Fraction(ox), Fraction(oy)), (Fraction(hx), Fraction(hy)), ghost_width)


# ---------------------------------------------------------------------------
# boundary conditions
# ---------------------------------------------------------------------------


class Periodic:
    kind = "periodic"


class NonReflective:
    """Zeroth-order extrapolation: copy of the nearest interior node."""

    kind = "non-reflective"


class Reflective:
    """Mirror about the wall node with the wall-normal velocity sign flipped."""

    kind = "reflective"


@dataclass(frozen=True)
class Dirichlet:
    state: tuple
    kind = "dirichlet"


@dataclass(frozen=True)
class TimeDependent:
    """Ghost states from a callback of the ghost-node coordinates and time.

    The callback receives (X, Y, t) broadcast over the ghost block and
    returns the (K, ...) conserved states.
    """

    fn: object
    kind = "time-dependent"


@dataclass(frozen=True)
class SplitSide:
    """Different treatments along one side, split at an x coordinate."""

    split: float
    before: object
    after: object
    kind = "split"


SIDES_1D = ("left", "right")
SIDES_2D = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class BoundarySpec:
    sides: dict

    def __post_init__(self):
        for a, b in (("left", "right"), ("bottom", "top")):
            if a in self.sides or b in self.sides:
                pa = isinstance(self.sides.get(a), Periodic)
                pb = isinstance(self.sides.get(b), Periodic)
                if pa != pb:
                    raise ValueError(f"periodic sides must be paired: {a}/{b}")

    @staticmethod
    def periodic_1d() -> "BoundarySpec":
        return BoundarySpec({"left": Periodic(), "right": Periodic()})

    @staticmethod
    def non_reflective_1d() -> "BoundarySpec":
        return BoundarySpec({"left": NonReflective(), "right": NonReflective()})

    @staticmethod
    def periodic_2d() -> "BoundarySpec":
        return BoundarySpec({s: Periodic() for s in SIDES_2D})

    @staticmethod
    def non_reflective_2d() -> "BoundarySpec":
        return BoundarySpec({s: NonReflective() for s in SIDES_2D})


def _fill_side_1d(pad, bc, side: str, gw: int, model):
    n = pad.shape[-1] - 2 * gw
    if isinstance(bc, Periodic):
        if side == "left":
            pad[..., :gw] = pad[..., n : n + gw]
        else:
            pad[..., n + gw :] = pad[..., gw : 2 * gw]
    elif isinstance(bc, NonReflective):
        if side == "left":
            pad[..., :gw] = pad[..., gw : gw + 1]
        else:
            pad[..., n + gw :] = pad[..., n + gw - 1 : n + gw]
    elif isinstance(bc, Dirichlet):
        state = np.asarray(bc.state, dtype=np.float64).reshape(-1, 1)
        if side == "left":
            pad[..., :gw] = state
        else:
            pad[..., n + gw :] = state
    elif isinstance(bc, Reflective):
        signs = model.reflect_signs(0).reshape(-1, 1)
        for k in range(1, gw + 1):
            if side == "left":
                pad[..., gw - k : gw - k + 1] = signs * pad[..., gw + k : gw + k + 1]
            else:
                wall = n + gw - 1
                pad[..., wall + k : wall + k + 1] = signs * pad[..., wall - k : wall - k + 1]
    else:
        raise ValueError(f"unsupported boundary kind for 1D side {side}: {bc!r}")


def fill_ghosts(pad, grid: Grid, bc: BoundarySpec, model, t: float):
    """Populate ghost layers of a padded field in place.

    2D fills the x sides first, then the y sides over full rows (corners take
    the y-side rule); the fixed order keeps runs bitwise reproducible.
    """
    gw = grid.ghost_width
    if grid.dims == 1:
        for side in SIDES_1D:
            _fill_side_1d(pad, bc.sides[side], side, gw, model)
        return pad
    for side in SIDES_2D:
        _fill_side_2d(pad, bc.sides[side], side, gw, model, grid, t)
    return pad


def _ghost_block(pad, side: str, gw: int, n: int):
    if side == "left":
        return (Ellipsis, slice(None), slice(0, gw))
    if side == "right":
        return (Ellipsis, slice(None), slice(n + gw, None))
    if side == "bottom":
        return (Ellipsis, slice(0, gw), slice(None))
    return (Ellipsis, slice(n + gw, None), slice(None))


def _fill_side_2d(pad, bc, side: str, gw: int, model, grid: Grid, t: float):
    nx, ny = grid.extents
    horizontal = side in ("left", "right")
    n = nx if horizontal else ny
    block = _ghost_block(pad, side, gw, n)
    if isinstance(bc, Periodic):
        if side == "left":
            pad[block] = pad[..., :, n : n + gw]
        elif side == "right":
            pad[block] = pad[..., :, gw : 2 * gw]
        elif side == "bottom":
            pad[block] = pad[..., n : n + gw, :]
        else:
            pad[block] = pad[..., gw : 2 * gw, :]
    elif isinstance(bc, NonReflective):
        if side == "left":
            pad[block] = pad[..., :, gw : gw + 1]
        elif side == "right":
            pad[block] = pad[..., :, n + gw - 1 : n + gw]
        elif side == "bottom":
            pad[block] = pad[..., gw : gw + 1, :]
        else:
            pad[block] = pad[..., n + gw - 1 : n + gw, :]
    elif isinstance(bc, Dirichlet):
        pad[block] = np.asarray(bc.state, dtype=np.float64).reshape(-1, 1, 1)
    elif isinstance(bc, Reflective):
        axis = 0 if horizontal else 1
        signs = model.reflect_signs(axis).reshape(-1, 1, 1)
        wall = gw if side in ("left", "bottom") else n + gw - 1
        for k in range(1, gw + 1):
            if side == "left":
                pad[..., :, wall - k : wall - k + 1] = signs * pad[..., :, wall + k : wall + k + 1]
            elif side == "right":
                pad[..., :, wall + k : wall + k + 1] = signs * pad[..., :, wall - k : wall - k + 1]
            elif side == "bottom":
                pad[..., wall - k : wall - k + 1, :] = signs * pad[..., wall + k : wall + k + 1, :]
            else:
                pad[..., wall + k : wall + k + 1, :] = signs * pad[..., wall - k : wall - k + 1, :]
    elif isinstance(bc, TimeDependent):
        hx, hy = (float(s) for s in grid.spacing)
        x0, y0 = (float(o) for o in grid.origin)
        xs = x0 + hx * (np.arange(pad.shape[-1]) - gw)
        if side == "top":
            ys = y0 + hy * np.arange(ny, ny + gw)
        elif side == "bottom":
            ys = y0 + hy * np.arange(-gw, 0)
        else:
            raise ValueError("time-dependent fills are supported on y sides")
        X, Y = np.meshgrid(xs, ys, indexing="xy")
        pad[block] = bc.fn(X, Y, t)
    elif isinstance(bc, SplitSide):
        hx = float(grid.spacing[0])
        x0 = float(grid.origin[0])
        xs = x0 + hx * (np.arange(pad.shape[-1]) - gw)
        before_cols = xs <= bc.split
        _fill_side_2d(pad, bc.before, side, gw, model, grid, t)
        keep = pad[block].copy()
        _fill_side_2d(pad, bc.after, side, gw, model, grid, t)
        sub = pad[block]
        sub[..., before_cols] = keep[..., before_cols]
    else:
        raise ValueError(f"unsupported boundary kind for side {side}: {bc!r}")


# ---------------------------------------------------------------------------
# linear state carrying the boundary-flux integral
# ---------------------------------------------------------------------------


@dataclass
class SimState:
    """Field plus the running boundary-flux integral, combined linearly together."""

    field: object  # (K, ...) ndarray or DD
    bflux: np.ndarray  # (K,) accumulated boundary inflow integral
    precision: str = xt.DOUBLE

    def __add__(self, other: "SimState") -> "SimState":
        return SimState(self.field + other.field, self.bflux + other.bflux, self.precision)

    def scale(self, c) -> "SimState":
        if isinstance(c, Fraction):
            cc = xt.const(c, self.precision)
            cf = float(c)
        elif xt.is_dd(c):
            cc, cf = c, c.to_float()
        else:
            cc, cf = float(c), float(c)
        return SimState(cc * self.field, cf * self.bflux, self.precision)

    def copy(self) -> "SimState":
        payload = self.field.copy() if hasattr(self.field, "copy") else np.copy(self.field)
        return SimState(payload, self.bflux.copy(), self.precision)


# ---------------------------------------------------------------------------
# the semi-discrete problem
# ---------------------------------------------------------------------------


@dataclass
class Problem:
    grid: Grid
    model: object
    scheme: ReconstructionScheme
    bc: BoundarySpec
    precision: str = xt.DOUBLE
    splitting: str = SPLIT_GLOBAL_LF
    source: SourceTerm = dc_field(default_factory=SourceTerm)

    def __post_init__(self):
        need = self.scheme.window_halfwidth + 1
        if self.grid.ghost_width < need:
            raise ValueError(f"scheme needs ghost width >= {need}, grid has {self.grid.ghost_width}")
        if self.model.is_system and self.precision != xt.DOUBLE:
            raise ValueError("the system path runs in double precision")
        self._inv_h = tuple(
            xt.const(Fraction(1) / s, self.precision) for s in self.grid.spacing
        )
        self.last_alpha = 0.0

    # -- padding -----------------------------------------------------------

    def _pad_shape(self):
        gw = self.grid.ghost_width
        if self.grid.dims == 1:
            return (self.model.n_components, self.grid.extents[0] + 2 * gw)
        nx, ny = self.grid.extents
        return (self.model.n_components, ny + 2 * gw, nx + 2 * gw)

    def pad_field(self, field, t: float):
        gw = self.grid.ghost_width
        pad = xt.empty(self._pad_shape(), self.precision)
        if self.grid.dims == 1:
            pad[:, gw:-gw] = field
        else:
            pad[:, gw:-gw, gw:-gw] = field
        fill_ghosts(pad, self.grid, self.bc, self.model, t)
        return pad

    # -- semi-discrete operator ---------------------------------------------

    def semidiscrete_rhs(self, field, t: float):
        """(d(field)/dt, boundary inflow rate); fluxes shared by adjacent cells."""
        pad = self.pad_field(field, t)
        gw = self.grid.ghost_width
        if self.grid.dims == 1:
            rhs, brate = self._rhs_1d(pad, gw)
        else:
            rhs, brate = self._rhs_2d(pad, gw)
        self._check_finite(rhs)
        return rhs, brate

    def _rhs_1d(self, pad, gw):
        if self.model.is_system:
            fhat, alpha = system_line_fluxes(pad, self.model, self.scheme, gw)
        else:
            fhat, alpha = scalar_line_fluxes(pad, self.model, self.scheme, gw,
                                             self.precision, self.splitting)
        self.last_alpha = alpha.to_float() if xt.is_dd(alpha) else float(alpha)
        rhs = (fhat[..., :-1] - fhat[..., 1:]) * self._inv_h[0]
        brate = xt.to_float_array(fhat[..., 0] - fhat[..., -1]).reshape(-1)
        return rhs, brate

    def _rhs_2d(self, pad, gw):
        hx_f, hy_f = (float(s) for s in self.grid.spacing)
        nx, ny = self.grid.extents
        model = self.model

        rows = pad[:, gw : gw + ny, :]
        fhat_x, ax = system_line_fluxes(rows, model, self.scheme, gw, axis=0)
        rhs = (fhat_x[..., :-1] - fhat_x[..., 1:]) * float(self._inv_h[0])
        brate = (fhat_x[..., 0] - fhat_x[..., -1]).sum(axis=-1) * hy_f

        perm = list(model.component_permutation(1))
        cols = np.ascontiguousarray(pad[perm][:, :, gw : gw + nx].transpose(0, 2, 1))
        fhat_y, ay = system_line_fluxes(cols, model, self.scheme, gw, axis=1)
        fhat_y = fhat_y[perm]  # the swap is its own inverse
        rhs = rhs + (fhat_y[..., :-1] - fhat_y[..., 1:]).transpose(0, 2, 1) * float(self._inv_h[1])
        brate = brate + (fhat_y[..., 0] - fhat_y[..., -1]).sum(axis=-1) * hx_f

        self.last_alpha = max(ax, ay)
        if not self.source.is_zero:
            rhs = rhs + self.source.apply(pad[:, gw : gw + ny, gw : gw + nx])
        return rhs, brate

    def _check_finite(self, rhs):
        payload = rhs.hi if xt.is_dd(rhs) else rhs
        if not np.all(np.isfinite(payload)):
            idx = tuple(int(v) for v in np.argwhere(~np.isfinite(payload))[0])
            raise NanDetected(f"non-finite derivative at cell {idx}")

    # -- state plumbing -------------------------------------------------------

    def make_state(self, field) -> SimState:
        return SimState(field, np.zeros(self.model.n_components), self.precision)

    def rhs_operator(self):
        def op(state: SimState, t: float) -> SimState:
            rhs, brate = self.semidiscrete_rhs(state.field, t)
            return SimState(rhs, brate, self.precision)

        return op

    def stage_check(self):
        def check(state: SimState, stage: int):
            payload = state.field.hi if xt.is_dd(state.field) else state.field
            if not np.all(np.isfinite(payload)):
                idx = tuple(int(v) for v in np.argwhere(~np.isfinite(payload))[0])
                raise NanDetected(f"non-finite field after stage {stage} at cell {idx}")

        return check

    def total_conserved(self, state: SimState) -> np.ndarray:
        """Cell-measure-weighted sum of each conserved component (float view)."""
        f = xt.to_float_array(state.field)
        measure = float(np.prod([float(s) for s in self.grid.spacing]))
        return f.reshape(f.shape[0], -1).sum(axis=1) * measure

    def conservation_defect(self, initial: SimState, current: SimState) -> np.ndarray:
        """Change of the conserved totals minus the boundary-flux account.

        Zero to roundoff for a conservative scheme: interior fluxes telescope,
        so only the tracked boundary fluxes can move the totals.
        """
        d_total = self.total_conserved(current) - self.total_conserved(initial)
        d_bflux = current.bflux - initial.bflux
        return d_total - d_bflux


def enforce_symmetry(field, grid: Grid, plane: float, flip_component: int | None = 1):
    """Mirror-average a 2D field about a vertical plane x = plane.

    The plane must be the domain's center plane, sitting on a node or halfway
    between nodes.  The component at ``flip_component`` (the x momentum) is
    antisymmetrized; the others are symmetrized.
    """
    nx = grid.extents[0]
    hx = float(grid.spacing[0])
    pos = (plane - float(grid.origin[0])) / hx
    if not np.isclose(pos * 2, round(pos * 2), atol=1e-9):
        raise ValueError("symmetry plane must align with a node or a mid-edge")
    if not np.isclose(pos, (nx - 1) / 2, atol=1e-9):
        raise ValueError("symmetry plane must be the domain center plane")
    mirrored = field[..., ::-1]
    out = 0.5 * (field + mirrored)
    if flip_component is not None:
        out[flip_component] = 0.5 * (field[flip_component] - mirrored[flip_component])
    return out


def advance(problem: Problem, state: SimState, t_end, dt_rule, stepper,
            on_step=None, max_steps: int = 10**8):
    """Drive the integrator from t=0 to t_end, landing exactly on t_end.

    ``t_end`` is exact (Fraction); time is accumulated in the active
    precision so partial final steps do not floor extended-precision runs.
    ``dt_rule(problem, state)`` returns the nominal step; ``stepper(state,
    t_float, dt)`` takes one step.
    """
    prec = problem.precision
    t_acc = xt.const(Fraction(0), prec)
    t_end_acc = xt.const(Fraction(t_end), prec)
    t_end_f = float(Fraction(t_end))
    steps = 0
    while _to_f(t_acc) < t_end_f - 1e-14 * max(1.0, abs(t_end_f)):
        dt = dt_rule(problem, state)
        remaining = t_end_acc - t_acc
        if _to_f(dt) > _to_f(remaining) * (1 + 1e-12):
            dt = remaining
        state = stepper(state, _to_f(t_acc), dt)
        t_acc = t_acc + dt
        steps += 1
        if on_step is not None:
            state = on_step(state, _to_f(t_acc))
        if steps >= max_steps:
            raise RuntimeError("step limit exceeded")
    return state, _to_f(t_acc), steps


def _to_f(x) -> float:
    return x.to_float() if xt.is_dd(x) else float(x)
