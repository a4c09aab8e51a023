"""Equation models: linear advection, inviscid Burgers, and the Euler systems.

Fields carry a leading component axis even for scalar models (shape (1, ...)),
so the solver treats every model uniformly.  The scalar models run in either
precision; the Euler systems are double-precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import extended as xt


class NonPhysicalState(ValueError):
    """Raised when a density or pressure is non-positive; carries the cell index."""

    def __init__(self, message: str, index):
        super().__init__(f"{message} at cell {index}")
        self.index = index


class AdvectionModel:
    """u_t + u_x = 0."""

    name = "advection"
    n_components = 1
    is_system = False

    def flux(self, u):
        return u

    def flux_derivative_bounds(self, u):
        # df/du = 1 everywhere
        return 1.0, 1.0

    def max_wavespeed(self, u):
        return 1.0


class BurgersModel:
    """u_t + (u^2/2)_x = 0."""

    name = "burgers"
    n_components = 1
    is_system = False

    def flux(self, u):
        return u * u * 0.5

    def flux_derivative_bounds(self, u):
        if xt.is_dd(u):
            return u.min().to_float(), u.max().to_float()
        return float(np.min(u)), float(np.max(u))

    def max_wavespeed(self, u):
        lo, hi = self.flux_derivative_bounds(u)
        return max(abs(lo), abs(hi))


def _check_positive(name, arr, context):
    bad = np.asarray(arr <= 0)
    if bad.any():
        idx = tuple(int(v) for v in np.argwhere(bad)[0])
        raise NonPhysicalState(f"non-positive {name} in {context}", idx)


@dataclass(frozen=True)
class EulerModel:
    """Compressible Euler equations, 1D (rho, rho*u, rho*e) or 2D (+ rho*v)."""

    gamma: float = 1.4
    dims: int = 1

    name = "euler"
    is_system = True

    @property
    def n_components(self) -> int:
        return 3 if self.dims == 1 else 4

    # -- primitive algebra ------------------------------------------------

    def pressure(self, U):
        rho = U[0]
        if self.dims == 1:
            kinetic = 0.5 * U[1] * U[1] / rho
        else:
            kinetic = 0.5 * (U[1] * U[1] + U[2] * U[2]) / rho
        return (self.gamma - 1.0) * (U[-1] - kinetic)

    def validate(self, U, context="field"):
        _check_positive("density", U[0], context)
        _check_positive("pressure", self.pressure(U), context)

    def sound_speed(self, U):
        return np.sqrt(self.gamma * self.pressure(U) / U[0])

    def from_primitive(self, rho, velocity, p):
        """Conserved state from (rho, (u[, v]), p); accepts arrays or scalars."""
        rho = np.asarray(rho, dtype=np.float64)
        p = np.asarray(p, dtype=np.float64)
        if not isinstance(velocity, (tuple, list)):
            velocity = (velocity,)
        vels = [np.asarray(v, dtype=np.float64) for v in velocity]
        if len(vels) != self.dims:
            raise ValueError(f"expected {self.dims} velocity component(s)")
        q2 = sum(v * v for v in vels)
        energy = p / (self.gamma - 1.0) + 0.5 * rho * q2
        comps = [rho] + [rho * v for v in vels] + [energy]
        return np.array(np.broadcast_arrays(*comps))

    # -- fluxes ------------------------------------------------------------

    def flux(self, U, axis: int = 0):
        """Analytic flux along one axis (0 = x, 1 = y)."""
        rho = U[0]
        p = self.pressure(U)
        if self.dims == 1:
            u = U[1] / rho
            return np.stack([U[1], U[1] * u + p, (U[2] + p) * u])
        u = U[1] / rho
        v = U[2] / rho
        if axis == 0:
            return np.stack([U[1], U[1] * u + p, U[2] * u, (U[3] + p) * u])
        return np.stack([U[2], U[1] * v, U[2] * v + p, (U[3] + p) * v])

    def max_wavespeed(self, U, axis: int = 0):
        rho = U[0]
        vel = U[1 + axis] / rho
        c = self.sound_speed(U)
        return float(np.max(np.abs(vel) + c))

    # -- solver plumbing -----------------------------------------------------

    def component_permutation(self, axis: int) -> tuple[int, ...]:
        """Component order that maps the y-sweep onto the x machinery."""
        if self.dims == 1 or axis == 0:
            return tuple(range(self.n_components))
        return (0, 2, 1, 3)

    def reflect_signs(self, axis: int) -> np.ndarray:
        """Per-component sign flips for a wall normal to the given axis."""
        signs = np.ones(self.n_components)
        signs[1 + axis] = -1.0
        return signs


SOURCE_NONE = "none"
SOURCE_RAYLEIGH_TAYLOR = "rayleigh-taylor"


@dataclass(frozen=True)
class SourceTerm:
    """Optional algebraic source; the buoyancy-style kind adds (0, 0, rho, rho*v)."""

    kind: str = SOURCE_NONE

    def __post_init__(self):
        if self.kind not in (SOURCE_NONE, SOURCE_RAYLEIGH_TAYLOR):
            raise ValueError(f"unknown source kind {self.kind!r}")

    @property
    def is_zero(self) -> bool:
        return self.kind == SOURCE_NONE

    def apply(self, U):
        """Right-hand-side increment per cell; zero for the trivial kind."""
        out = np.zeros_like(U)
        if self.kind == SOURCE_RAYLEIGH_TAYLOR:
            if U.shape[0] != 4:
                raise ValueError("this source applies to the 2D four-component system")
            out[2] = U[0]
            out[3] = U[2]
        return out
