"""Flux splitting, Roe-averaged characteristic frames, and per-line interface fluxes.

The solver hands this module padded lines (ghosts filled) and gets back one
numeric flux per interface.  Scalar problems may run without splitting when
the wave speed is one-signed over the line; systems always use the global
Lax-Friedrichs splitting with the line maximum wave speed, projected onto
Roe-averaged characteristic fields.

Only one reconstruction kernel exists: the downwind-biased value at an
interface is produced by feeding the kernel the column-reversed window
anchored one cell to the right (the reflected problem), which is equivalent
to using the mirrored coefficient sets and mirrored candidate order.
"""

from __future__ import annotations

import numpy as np

from . import extended as xt
from .physics import EulerModel, NonPhysicalState
from .reconstruct import ReconstructionScheme, reconstruct_windows

SPLIT_GLOBAL_LF = "global-lf"
SPLIT_UPWIND = "upwind"


def lax_friedrichs_split(f_values, u_values, alpha):
    """f_pm = (f +- alpha*u)/2 with alpha at least the line's max wave speed.

    ``alpha`` is a scalar per line; batched sweeps may pass an array
    broadcastable against the line axis (one value per line).
    """
    if xt.is_dd(alpha):
        a_min = float(np.min(alpha.hi))
    else:
        a_min = float(np.min(alpha))
    if a_min < 0:
        raise ValueError(f"splitting speed must be non-negative, got {a_min}")
    au = alpha * u_values
    plus = (f_values + au) * 0.5
    minus = (f_values - au) * 0.5
    return plus, minus


def wave_speed_bound(model, line, axis: int = 0):
    """Max |df/du| (spectral radius for systems) over one axis-aligned line."""
    if model.is_system:
        model.validate(line, "wave-speed line")
        return model.max_wavespeed(line, axis)
    return model.max_wavespeed(line)


def roe_average(left, right, gamma: float, dims: int = 1):
    """Square-root-density weighted interface state.

    ``left``/``right`` are conserved component arrays (K, ...).  Returns
    (rho, u[, v], H, c) with c derived from H and the velocity magnitude.
    """
    rho_l, rho_r = left[0], right[0]
    if np.any(rho_l <= 0) or np.any(rho_r <= 0):
        idx = tuple(int(v) for v in np.argwhere(np.asarray((rho_l <= 0) | (rho_r <= 0)))[0])
        raise NonPhysicalState("non-positive density in interface pair", idx)
    sl = np.sqrt(rho_l)
    sr = np.sqrt(rho_r)
    wsum = sl + sr
    model = EulerModel(gamma=gamma, dims=dims)
    p_l = model.pressure(left)
    p_r = model.pressure(right)
    if np.any(p_l <= 0) or np.any(p_r <= 0):
        idx = tuple(int(v) for v in np.argwhere(np.asarray((p_l <= 0) | (p_r <= 0)))[0])
        raise NonPhysicalState("non-positive pressure in interface pair", idx)
    h_l = (left[-1] + p_l) / rho_l
    h_r = (right[-1] + p_r) / rho_r

    rho = sl * sr
    vels = []
    for k in range(dims):
        vels.append((sl * left[1 + k] / rho_l + sr * right[1 + k] / rho_r) / wsum)
    enthalpy = (sl * h_l + sr * h_r) / wsum
    q2 = sum(v * v for v in vels)
    c2 = (gamma - 1.0) * (enthalpy - 0.5 * q2)
    c = np.sqrt(c2)
    return (rho, *vels, enthalpy, c)


def eigen_frames(roe_state, gamma: float, dims: int):
    """Left/right eigenvector matrices of the normal-direction flux Jacobian.

    ``roe_state`` is the tuple from :func:`roe_average` with the NORMAL
    velocity first.  Returns (L, R, lambdas) with shapes (K, K, ...) and
    (K, ...); entries are arrays over the interface batch.
    """
    if dims == 1:
        rho, u, enthalpy, c = roe_state
        v = None
    else:
        rho, u, v, enthalpy, c = roe_state
    K = 3 if dims == 1 else 4
    shape = np.shape(u)
    b1 = (gamma - 1.0) / (c * c)
    q2 = u * u if dims == 1 else u * u + v * v
    b2 = 0.5 * b1 * q2
    inv_c = 1.0 / c
    zeros = np.zeros(shape)
    ones = np.ones(shape)

    if dims == 1:
        R = np.array(
            [
                [ones, ones, ones],
                [u - c, u, u + c],
                [enthalpy - u * c, 0.5 * q2, enthalpy + u * c],
            ]
        )
        L = np.array(
            [
                [0.5 * (b2 + u * inv_c), -0.5 * (b1 * u + inv_c), 0.5 * b1 * ones],
                [1.0 - b2, b1 * u, -b1 * ones],
                [0.5 * (b2 - u * inv_c), -0.5 * (b1 * u - inv_c), 0.5 * b1 * ones],
            ]
        )
        lambdas = np.array([u - c, u, u + c])
    else:
        R = np.array(
            [
                [ones, ones, zeros, ones],
                [u - c, u, zeros, u + c],
                [v, v, ones, v],
                [enthalpy - u * c, 0.5 * q2, v, enthalpy + u * c],
            ]
        )
        L = np.array(
            [
                [0.5 * (b2 + u * inv_c), -0.5 * (b1 * u + inv_c), -0.5 * b1 * v, 0.5 * b1 * ones],
                [1.0 - b2, b1 * u, b1 * v, -b1 * ones],
                [-v, zeros, ones, zeros],
                [0.5 * (b2 - u * inv_c), -0.5 * (b1 * u - inv_c), -0.5 * b1 * v, 0.5 * b1 * ones],
            ]
        )
        lambdas = np.array([u - c, u, u, u + c])
    assert R.shape[:2] == (K, K)
    return L, R, lambdas


def _window_slices(n_pad: int, ghost: int, halfwidth: int):
    """Start offsets of the upwind and mirrored window blocks along a padded line."""
    n_interfaces = n_pad - 2 * ghost + 1
    start_plus = ghost - 1 - halfwidth
    start_minus = ghost - halfwidth
    if start_plus < 0:
        raise ValueError("ghost width too small for the scheme window")
    return n_interfaces, start_plus, start_minus


def scalar_line_fluxes(u_pad, model, scheme: ReconstructionScheme, ghost: int,
                       precision: str, splitting: str):
    """Interface fluxes for scalar lines; ``u_pad`` has shape (..., M) with ghosts.

    Returns (fluxes (..., I), alpha) where I = M - 2*ghost + 1.
    """
    hw = scheme.window_halfwidth
    width = 2 * hw + 1
    n_pad = u_pad.shape[-1]
    n_ifaces, s_plus, s_minus = _window_slices(n_pad, ghost, hw)

    f_pad = model.flux(u_pad)
    if splitting == SPLIT_UPWIND:
        lo, hi = model.flux_derivative_bounds(u_pad)
        if lo < 0:
            raise ValueError(
                f"one-sided reconstruction requires a non-negative wave speed; min df/du = {lo}"
            )
        alpha = hi
        f_plus, f_minus = f_pad, None
    elif splitting == SPLIT_GLOBAL_LF:
        # the splitting speed is the maximum over one axis-aligned line
        if precision == xt.EXTENDED:
            if u_pad.ndim > 2 or (u_pad.ndim == 2 and u_pad.shape[0] != 1):
                raise ValueError("extended-precision sweeps handle one line at a time")
            alpha = xt.const(model.max_wavespeed(u_pad), precision)
        elif u_pad.ndim <= 1 or u_pad.shape[0] == 1:
            alpha = model.max_wavespeed(u_pad)
        else:
            profile = np.abs(model.flux_derivative_profile(u_pad))
            alpha = profile.max(axis=-1, keepdims=True)
        f_plus, f_minus = lax_friedrichs_split(f_pad, u_pad, alpha)
    else:
        raise ValueError(f"unknown splitting {splitting!r}")

    win_p = xt.sliding_windows(f_plus, width)[..., s_plus : s_plus + n_ifaces, :]
    flat_p = win_p.reshape(-1, width)
    fhat = reconstruct_windows(flat_p, scheme, precision).reshape(win_p.shape[:-1])
    if f_minus is not None:
        win_m = xt.sliding_windows(f_minus, width)[..., s_minus : s_minus + n_ifaces, ::-1]
        flat_m = win_m.reshape(-1, width)
        fhat = fhat + reconstruct_windows(flat_m, scheme, precision).reshape(win_m.shape[:-1])
    return fhat, alpha


def system_line_fluxes(U_pad, model: EulerModel, scheme: ReconstructionScheme, ghost: int,
                       axis: int = 0):
    """Characteristic-space interface fluxes for Euler lines.

    ``U_pad`` has shape (K, ..., M), components already permuted so the sweep
    direction's momentum sits in slot 1; ghosts filled.  Projects the
    Lax-Friedrichs split fluxes and states onto the left eigenvectors of the
    Roe frame at each interface, reconstructs per characteristic field, and
    projects back.  Returns (fluxes (K, ..., I), alpha).
    """
    hw = scheme.window_halfwidth
    width = 2 * hw + 1
    K = U_pad.shape[0]
    n_pad = U_pad.shape[-1]
    n_ifaces, s_plus, s_minus = _window_slices(n_pad, ghost, hw)

    model.validate(U_pad, "padded line")
    vel = U_pad[1] / U_pad[0]
    c = model.sound_speed(U_pad)
    alpha = float(np.max(np.abs(vel) + c))

    F_pad = model.flux(U_pad, axis=0)  # components pre-permuted: use x-form
    f_plus, f_minus = lax_friedrichs_split(F_pad, U_pad, alpha)

    left_cells = slice(ghost - 1, ghost - 1 + n_ifaces)
    right_cells = slice(ghost, ghost + n_ifaces)
    roe = roe_average(U_pad[..., left_cells], U_pad[..., right_cells], model.gamma, model.dims)
    L, R, _ = eigen_frames(roe, model.gamma, model.dims)

    win_p = np.lib.stride_tricks.sliding_window_view(f_plus, width, axis=-1)[
        :, ..., s_plus : s_plus + n_ifaces, :
    ]
    win_m = np.lib.stride_tricks.sliding_window_view(f_minus, width, axis=-1)[
        :, ..., s_minus : s_minus + n_ifaces, ::-1
    ]

    # project onto characteristic fields: w[p] = sum_q L[p, q] * win[q]
    fhat_char = np.empty((K,) + win_p.shape[1:-1])
    for p in range(K):
        wp = L[p, 0][..., None] * win_p[0]
        wm = L[p, 0][..., None] * win_m[0]
        for q in range(1, K):
            wp = wp + L[p, q][..., None] * win_p[q]
            wm = wm + L[p, q][..., None] * win_m[q]
        vp = reconstruct_windows(wp.reshape(-1, width), scheme, xt.DOUBLE).reshape(wp.shape[:-1])
        vm = reconstruct_windows(wm.reshape(-1, width), scheme, xt.DOUBLE).reshape(wm.shape[:-1])
        fhat_char[p] = vp + vm

    fhat = np.empty_like(fhat_char)
    for q in range(K):
        acc = R[q, 0] * fhat_char[0]
        for p in range(1, K):
            acc = acc + R[q, p] * fhat_char[p]
        fhat[q] = acc
    return fhat, alpha
