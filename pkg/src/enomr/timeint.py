"""Time integrators: three-stage SSP Runge-Kutta and the linear SSP family.

Integrators are generic over the state: plain arrays (numpy or extended) and
any object exposing ``__add__`` plus ``scale(c)`` work.  Combination
coefficients are exact rationals converted once to the active precision, so
the extended-precision ladders are not floored by the integrator itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import extended as xt


class NanDetected(RuntimeError):
    """A stage produced a non-finite value; message carries stage/cell info."""


def _scale(obj, c, precision: str):
    if hasattr(obj, "scale"):
        return obj.scale(c)
    if isinstance(c, Fraction):
        c = xt.const(c, precision)
    return c * obj


def default_stage_check(state, stage: int) -> None:
    payload = state.field if hasattr(state, "field") else state
    if not xt.isfinite_all(payload):
        raise NanDetected(f"non-finite value after stage {stage}")


def ssp_rk3_step(state, t: float, dt, rhs_op, precision: str = xt.DOUBLE,
                 stage_check=default_stage_check):
    """One step of the classical three-stage, third-order SSP scheme.

    ``rhs_op(state, t)`` returns the semi-discrete derivative; ``dt`` is a
    scalar in the active precision; ``t`` stays a float for boundary-condition
    callbacks.
    """
    dt_f = dt.to_float() if xt.is_dd(dt) else float(dt)
    u1 = state + _scale(rhs_op(state, t), dt, precision)
    stage_check(u1, 1)
    inner = u1 + _scale(rhs_op(u1, t + dt_f), dt, precision)
    u2 = _scale(state, Fraction(3, 4), precision) + _scale(inner, Fraction(1, 4), precision)
    stage_check(u2, 2)
    inner = u2 + _scale(rhs_op(u2, t + 0.5 * dt_f), dt, precision)
    out = _scale(state, Fraction(1, 3), precision) + _scale(inner, Fraction(2, 3), precision)
    stage_check(out, 3)
    return out


@dataclass(frozen=True)
class LssprkTableau:
    """Combination weights of the m-stage, order-(m-1) linear SSP scheme."""

    m: int
    alphas: tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.alphas) != 1:
            raise ValueError("combination weights must sum to one")
        if any(a < 0 for a in self.alphas):
            raise ValueError("combination weights must be non-negative")


@lru_cache(maxsize=None)
def lssprk_tableau(m: int) -> LssprkTableau:
    """Recursively built weights; exact rationals, 2 <= m <= 18."""
    if not 2 <= m <= 18:
        raise ValueError(f"stage count {m} outside the supported range [2, 18]")
    if m == 2:
        return LssprkTableau(2, (Fraction(0), Fraction(1)))
    prev = lssprk_tableau(m - 1).alphas
    alphas = [Fraction(0)] * m
    for k in range(1, m - 1):
        alphas[k] = Fraction(2, k) * prev[k - 1]
    alphas[m - 1] = Fraction(2, m) * prev[m - 2]
    alphas[0] = 1 - sum(alphas[1:])
    return LssprkTableau(m, tuple(alphas))


def lssprk_step(state, t: float, dt, rhs_op, tableau: LssprkTableau,
                precision: str = xt.DOUBLE, stage_check=default_stage_check):
    """One step of the m-stage linear SSP scheme: m-1 half steps plus combine.

    Intended for linear operators (the advection runs); order m-1 there.
    """
    m = tableau.m
    dt_f = dt.to_float() if xt.is_dd(dt) else float(dt)
    half_dt = _scale_scalar(dt, precision)
    stages = [state]
    cur = state
    for s in range(1, m):
        cur = cur + _scale(rhs_op(cur, t + 0.5 * dt_f * (s - 1)), half_dt, precision)
        stage_check(cur, s)
        stages.append(cur)
    final = stages[m - 1] + _scale(rhs_op(stages[m - 1], t + 0.5 * dt_f * (m - 1)), half_dt, precision)
    out = None
    for k in range(m - 1):
        if tableau.alphas[k] == 0:
            continue
        term = _scale(stages[k], tableau.alphas[k], precision)
        out = term if out is None else out + term
    last = _scale(final, tableau.alphas[m - 1], precision)
    out = last if out is None else out + last
    stage_check(out, m)
    return out


def _scale_scalar(dt, precision: str):
    """dt/2 in the active precision (exact halving)."""
    if xt.is_dd(dt):
        return dt * xt.DD.wrap(0.5)
    return 0.5 * float(dt)


def amplification_polynomial(tableau: LssprkTableau) -> tuple[Fraction, ...]:
    """Exact coefficients of the one-step map G(z) for the linear ODE u' = (z/dt) u.

    G(z) = sum_{k<=m-2} alpha_k (1+z/2)^k + alpha_{m-1} (1+z/2)^m; the scheme
    has order m-1, i.e. G agrees with exp through z^{m-1}.
    """
    m = tableau.m

    def poly_pow(e):
        out = [Fraction(1)]
        for _ in range(e):
            nxt = [Fraction(0)] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i] += c
                nxt[i + 1] += c * Fraction(1, 2)
            out = nxt
        return out

    acc = [Fraction(0)] * (m + 1)
    for k in range(m - 1):
        if tableau.alphas[k] == 0:
            continue
        for i, c in enumerate(poly_pow(k)):
            acc[i] += tableau.alphas[k] * c
    for i, c in enumerate(poly_pow(m)):
        acc[i] += tableau.alphas[m - 1] * c
    return tuple(acc)
