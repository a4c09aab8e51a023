"""Interface flux reconstruction kernels.

Two families share one calling convention:

* the multi-resolution ENO selection: walk the ordered candidate list,
  accept the first two-sided stencil whose highest-derivative indicator is
  strictly below the baseline, otherwise fall back to a limited two-point
  value;
* the adaptive-order weighted reference schemes (5,3) and (9,5,3) built on
  classical integrated-square smoothness indicators with Z-type weights.

All kernels operate on window matrices ``windows[i, :]`` holding the samples
``f[anchor_i - (r-1) .. anchor_i + (r-1)]`` of one upwind flux component, and
run unchanged in double or extended precision (see :mod:`enomr.extended`).
The downwind-biased companion value at the same interface is obtained by
applying the same kernel to the column-reversed window anchored one cell to
the right; callers handle the reversal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import extended as xt
from .coeffs import flux_coefficients, indicator_coefficients, jiang_shu_sos
from .stencils import SUPPORTED_HALFWIDTHS, Stencil, candidate_pool


@dataclass(frozen=True)
class WenoParams:
    epsilon: Fraction = Fraction(1, 10**12)
    power_p: int = 2
    gamma_hi: Fraction = Fraction(85, 100)
    gamma_lo: Fraction = Fraction(85, 100)

    def __post_init__(self):
        if self.power_p < 1:
            raise ValueError("power_p must be a positive integer")
        for g in (self.gamma_hi, self.gamma_lo):
            if not Fraction(85, 100) <= g <= Fraction(95, 100):
                raise ValueError("gamma weights must lie in [0.85, 0.95]")


ENO_MR = "eno-mr"
WENO_AO_53 = "weno-ao53"
WENO_AO_953 = "weno-ao953"


@dataclass(frozen=True)
class ReconstructionScheme:
    """Configuration of one flux reconstruction; the ENO selection carries no tunables."""

    kind: str
    r: int
    weno_params: WenoParams | None = None

    def __post_init__(self):
        if self.kind == ENO_MR:
            if self.r not in SUPPORTED_HALFWIDTHS:
                raise ValueError(f"half-width {self.r} not in {SUPPORTED_HALFWIDTHS}")
            if self.weno_params is not None:
                raise ValueError("the multi-resolution ENO selection is parameter-free")
        elif self.kind == WENO_AO_53:
            if self.r != 3:
                raise ValueError("the (5,3) scheme has half-width 3")
        elif self.kind == WENO_AO_953:
            if self.r != 5:
                raise ValueError("the (9,5,3) scheme has half-width 5")
        else:
            raise ValueError(f"unknown scheme kind {self.kind!r}")

    @property
    def order(self) -> int:
        return 2 * self.r - 1

    @property
    def window_halfwidth(self) -> int:
        return self.r - 1

    @property
    def name(self) -> str:
        if self.kind == ENO_MR:
            return f"eno-mr{self.order}"
        return self.kind

    @property
    def params(self) -> WenoParams:
        return self.weno_params if self.weno_params is not None else WenoParams()


_SCHEME_NAMES = ("eno-mr5", "eno-mr9", "eno-mr13", "eno-mr17", WENO_AO_53, WENO_AO_953)


def scheme_from_name(name: str, weno_params: WenoParams | None = None) -> ReconstructionScheme:
    name = name.lower()
    if name.startswith("eno-mr"):
        order = int(name[len("eno-mr"):])
        if order % 2 == 0 or (order + 1) // 2 not in SUPPORTED_HALFWIDTHS:
            raise ValueError(f"unsupported scheme {name!r}")
        return ReconstructionScheme(ENO_MR, (order + 1) // 2)
    if name == WENO_AO_53:
        return ReconstructionScheme(WENO_AO_53, 3, weno_params or WenoParams())
    if name == WENO_AO_953:
        return ReconstructionScheme(WENO_AO_953, 5, weno_params or WenoParams())
    raise ValueError(f"unknown scheme {name!r}; expected one of {_SCHEME_NAMES}")


def all_scheme_names() -> tuple[str, ...]:
    return _SCHEME_NAMES


# ---------------------------------------------------------------------------
# elementary pieces
# ---------------------------------------------------------------------------


def minmod(a, b):
    """a if ab>0 and |a|<=|b|; b if ab>0 and |a|>|b|; 0 otherwise.

    The sign test avoids forming the product, so the function is exact under
    scaling of both arguments.  Works elementwise in either precision.
    """
    zero = 0.0 if not xt.is_dd(a) else xt.DD.wrap(0.0)
    same_sign = ((a > 0.0) & (b > 0.0)) | ((a < 0.0) & (b < 0.0))
    pick_a = abs(a) <= abs(b)
    return xt.where(same_sign, xt.where(pick_a, a, b), zero)


def baseline_indicator(window):
    """Baseline smoothness scale from one-sided first/second differences.

    ``window`` holds the five samples f_{j-2} .. f_{j+2} (last axis); returns
    MIN over the two sides of MAX(|first difference|, |second difference|).
    """
    f_m2, f_m1, f_0, f_p1, f_p2 = (window[..., k] for k in range(5))
    is_l = xt.maximum(abs(f_0 - f_m1), abs((f_0 - 2.0 * f_m1) + f_m2))
    is_r = xt.maximum(abs(f_0 - f_p1), abs((f_0 - 2.0 * f_p1) + f_p2))
    return xt.minimum(is_l, is_r)


def stencil_indicator(samples, is_coeffs):
    """|sum(b_l * f_{j+l})|: magnitude of the highest undivided derivative."""
    acc = is_coeffs[0] * samples[..., 0]
    for k in range(1, len(is_coeffs)):
        acc = acc + is_coeffs[k] * samples[..., k]
    return abs(acc)


def _dot_taps(windows, idx, cols, taps):
    """Accumulate sum(taps[k] * windows[idx, cols[k]]) in fixed tap order."""
    acc = taps[0] * windows[idx, cols[0]]
    for k in range(1, len(taps)):
        acc = acc + taps[k] * windows[idx, cols[k]]
    return acc


def _dot_cols(windows, cols, taps):
    acc = taps[0] * windows[:, cols[0]]
    for k in range(1, len(taps)):
        acc = acc + taps[k] * windows[:, cols[k]]
    return acc


def _coeffs_for(values, precision):
    if precision == xt.EXTENDED:
        return tuple(xt.DD.from_fraction(Fraction(v)) for v in values)
    return tuple(float(v) for v in values)


# ---------------------------------------------------------------------------
# multi-resolution ENO tables and kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Candidate:
    stencil: Stencil
    cols: tuple[int, ...]
    flux_taps: tuple
    is_taps: tuple


@dataclass(frozen=True)
class EnoMrTables:
    r: int
    precision: str
    center: int
    width: int
    candidates: tuple[_Candidate, ...]  # two-sided, in selection order
    half: object  # the constant 1/2 in the active precision


@lru_cache(maxsize=None)
def enomr_tables(r: int, precision: str) -> EnoMrTables:
    center = r - 1
    cands = []
    for st in candidate_pool(r):
        if st.m < 1 or st.n < 1:
            continue
        cols = tuple(center + off for off in st.offsets())
        cands.append(
            _Candidate(
                st,
                cols,
                _coeffs_for(flux_coefficients(st), precision),
                _coeffs_for(indicator_coefficients(st), precision),
            )
        )
    half = 0.5 if precision == xt.DOUBLE else xt.DD.wrap(0.5)
    return EnoMrTables(r, precision, center, 2 * r - 1, tuple(cands), half)


@dataclass
class SelectionResult:
    """Outcome of one interface selection."""

    chosen: Stencil | None  # None marks the limited two-point fallback
    flux_value: object
    indicators_evaluated: int


def _fallback_flux(windows, idx, center, half):
    f_m1 = windows[idx, center - 1]
    f_0 = windows[idx, center]
    f_p1 = windows[idx, center + 1]
    return f_0 + half * minmod(f_p1 - f_0, f_0 - f_m1)


def enomr_reconstruct(windows, tab: EnoMrTables, diagnostics: bool = False):
    """Vectorized selection over all rows of a window matrix.

    Returns the flux array; with ``diagnostics`` also the chosen-candidate
    index per row (-1 for the fallback) and the per-row count of candidate
    indicators evaluated.
    """
    npts = windows.shape[0]
    c = tab.center
    base = baseline_indicator(windows[:, c - 2 : c + 3])
    flux = xt.empty(npts, tab.precision)
    pending = np.arange(npts)
    chosen = np.full(npts, -1, dtype=np.int64) if diagnostics else None
    counts = np.zeros(npts, dtype=np.int64) if diagnostics else None
    for ci, cand in enumerate(tab.candidates):
        if pending.size == 0:
            break
        indicator = abs(_dot_taps(windows, pending, cand.cols, cand.is_taps))
        if diagnostics:
            counts[pending] += 1
        accept = indicator < base[pending]
        if np.any(accept):
            hit = pending[accept]
            flux[hit] = _dot_taps(windows, hit, cand.cols, cand.flux_taps)
            if diagnostics:
                chosen[hit] = ci
            pending = pending[~accept]
    if pending.size:
        flux[pending] = _fallback_flux(windows, pending, c, tab.half)
    if diagnostics:
        return flux, chosen, counts
    return flux


def enomr_select(window, scheme: ReconstructionScheme, precision: str = xt.DOUBLE) -> SelectionResult:
    """Single-interface selection; the window holds 2r-1 samples centered at j."""
    if scheme.kind != ENO_MR:
        raise ValueError("selection applies to the multi-resolution ENO schemes")
    tab = enomr_tables(scheme.r, precision)
    if precision == xt.DOUBLE:
        win = np.asarray(window, dtype=np.float64).reshape(1, -1)
    else:
        win = window if xt.is_dd(window) else xt.DD.from_float_array(window)
        win = win.reshape(1, -1)
    if win.shape[1] != tab.width:
        raise ValueError(f"expected a window of {tab.width} samples, got {win.shape[1]}")
    flux, chosen, counts = enomr_reconstruct(win, tab, diagnostics=True)
    idx = int(chosen[0])
    stencil = tab.candidates[idx].stencil if idx >= 0 else None
    return SelectionResult(stencil, flux[0], int(counts[0]))


# ---------------------------------------------------------------------------
# adaptive-order weighted schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _BetaForm:
    terms: tuple  # ((d_i, cols, taps), ...)


def _beta_form(stencil: Stencil, center: int, precision: str) -> _BetaForm:
    terms = []
    for d_i, vec in jiang_shu_sos(stencil):
        cols, taps = [], []
        for off, v in zip(stencil.offsets(), vec):
            if v != 0:
                cols.append(center + off)
                taps.append(v)
        terms.append((_coeffs_for([d_i], precision)[0], tuple(cols), _coeffs_for(taps, precision)))
    return _BetaForm(tuple(terms))


def _eval_beta(windows, form: _BetaForm):
    acc = None
    for d_i, cols, taps in form.terms:
        s = _dot_cols(windows, cols, taps)
        term = d_i * (s * s)
        acc = term if acc is None else acc + term
    return acc


def jiang_shu_beta(samples, stencil: Stencil, precision: str = xt.DOUBLE):
    """Classical smoothness indicator of one stencil polynomial.

    ``samples`` covers the stencil itself, anchor cell at index ``stencil.m``.
    """
    if precision == xt.DOUBLE:
        win = np.asarray(samples, dtype=np.float64).reshape(1, -1)
    else:
        win = samples if xt.is_dd(samples) else xt.DD.from_float_array(samples)
        win = win.reshape(1, -1)
    form = _beta_form(stencil, stencil.m, precision)
    return _eval_beta(win, form)[0]


def jiang_shu_beta_sub(samples, sub_index: int, precision: str = xt.DOUBLE):
    """Beta of the k-th three-point sub-stencil of a five-point window."""
    st = Stencil(2 - sub_index, sub_index)
    return jiang_shu_beta(samples[..., sub_index : sub_index + 3], st, precision)


@dataclass(frozen=True)
class _AoBlock:
    big_cols: tuple[int, ...]
    big_flux: tuple
    big_beta: _BetaForm
    low_cols: tuple[tuple[int, ...], ...]
    low_flux: tuple
    low_betas: tuple[_BetaForm, ...]
    d_hi: object
    d_low: tuple  # (d0, d1, d2)


def _ao_block(big: Stencil, center: int, params: WenoParams, precision: str) -> _AoBlock:
    lows = (Stencil(2, 0), Stencil(1, 1), Stencil(0, 2))
    d_hi_fr = params.gamma_hi
    d0_fr = (1 - params.gamma_hi) * (1 - params.gamma_lo) / 2
    d1_fr = (1 - params.gamma_hi) * params.gamma_lo
    return _AoBlock(
        big_cols=tuple(center + off for off in big.offsets()),
        big_flux=_coeffs_for(flux_coefficients(big), precision),
        big_beta=_beta_form(big, center, precision),
        low_cols=tuple(tuple(center + off for off in st.offsets()) for st in lows),
        low_flux=tuple(_coeffs_for(flux_coefficients(st), precision) for st in lows),
        low_betas=tuple(_beta_form(st, center, precision) for st in lows),
        d_hi=_coeffs_for([d_hi_fr], precision)[0],
        d_low=_coeffs_for([d0_fr, d1_fr, d0_fr], precision),
    )


@dataclass(frozen=True)
class WenoAoTables:
    kind: str
    precision: str
    center: int
    width: int
    blocks: tuple[_AoBlock, ...]  # (big,) or (big, inner)
    eps: object
    power_p: int
    gamma_hi: object
    one_minus_gamma_hi: object
    third: object


@lru_cache(maxsize=None)
def weno_ao_tables(scheme: ReconstructionScheme, precision: str) -> WenoAoTables:
    params = scheme.params
    center = scheme.window_halfwidth
    if scheme.kind == WENO_AO_53:
        blocks = (_ao_block(Stencil(2, 2), center, params, precision),)
    elif scheme.kind == WENO_AO_953:
        blocks = (
            _ao_block(Stencil(4, 4), center, params, precision),
            _ao_block(Stencil(2, 2), center, params, precision),
        )
    else:
        raise ValueError(scheme.kind)
    return WenoAoTables(
        scheme.kind,
        precision,
        center,
        2 * scheme.r - 1,
        blocks,
        _coeffs_for([params.epsilon], precision)[0],
        params.power_p,
        _coeffs_for([params.gamma_hi], precision)[0],
        _coeffs_for([1 - params.gamma_hi], precision)[0],
        _coeffs_for([Fraction(1, 3)], precision)[0],
    )


def _ipow(x, p: int):
    acc = x
    for _ in range(p - 1):
        acc = acc * x
    return acc


def _ao_block_flux(windows, block: _AoBlock, tab: WenoAoTables):
    """One adaptive-order level: returns (flux, beta of the big stencil)."""
    beta_hi = _eval_beta(windows, block.big_beta)
    betas = [_eval_beta(windows, form) for form in block.low_betas]
    p_hi = _dot_cols(windows, block.big_cols, block.big_flux)
    p_low = [_dot_cols(windows, cols, taps) for cols, taps in zip(block.low_cols, block.low_flux)]
    tau = (abs(beta_hi - betas[0]) + abs(beta_hi - betas[1]) + abs(beta_hi - betas[2])) * tab.third
    alpha_hi = block.d_hi * (1.0 + _ipow(tau / (beta_hi + tab.eps), tab.power_p))
    alphas = [
        d * (1.0 + _ipow(tau / (b + tab.eps), tab.power_p))
        for d, b in zip(block.d_low, betas)
    ]
    total = alpha_hi + alphas[0] + alphas[1] + alphas[2]
    w_hi = alpha_hi / total
    w = [a / total for a in alphas]
    central = p_hi - (block.d_low[0] * p_low[0] + block.d_low[1] * p_low[1] + block.d_low[2] * p_low[2])
    flux = (w_hi / block.d_hi) * central + w[0] * p_low[0] + w[1] * p_low[1] + w[2] * p_low[2]
    return flux, beta_hi


def weno_ao_reconstruct(windows, tab: WenoAoTables):
    """Vectorized adaptive-order flux over all rows of a window matrix."""
    flux_hi, beta_hi = _ao_block_flux(windows, tab.blocks[0], tab)
    if len(tab.blocks) == 1:
        return flux_hi
    flux_lo, beta_lo = _ao_block_flux(windows, tab.blocks[1], tab)
    sigma = abs(beta_hi - beta_lo)
    a_hi = tab.gamma_hi * (1.0 + sigma / (beta_hi + tab.eps))
    a_lo = tab.one_minus_gamma_hi * (1.0 + sigma / (beta_lo + tab.eps))
    total = a_hi + a_lo
    w_hi = a_hi / total
    w_lo = a_lo / total
    return (w_hi / tab.gamma_hi) * (flux_hi - tab.one_minus_gamma_hi * flux_lo) + w_lo * flux_lo


def weno_ao_flux(window, scheme: ReconstructionScheme, precision: str = xt.DOUBLE):
    """Single-interface adaptive-order flux; window holds 2r-1 samples."""
    tab = weno_ao_tables(scheme, precision)
    if precision == xt.DOUBLE:
        win = np.asarray(window, dtype=np.float64).reshape(1, -1)
    else:
        win = window if xt.is_dd(window) else xt.DD.from_float_array(window)
        win = win.reshape(1, -1)
    if win.shape[1] != tab.width:
        raise ValueError(f"expected a window of {tab.width} samples, got {win.shape[1]}")
    return weno_ao_reconstruct(win, tab)[0]


# ---------------------------------------------------------------------------
# unified entry used by the solver
# ---------------------------------------------------------------------------


def reconstruct_windows(windows, scheme: ReconstructionScheme, precision: str):
    """Interface values for a (npts, 2r-1) window matrix, either family."""
    if scheme.kind == ENO_MR:
        return enomr_reconstruct(windows, enomr_tables(scheme.r, precision))
    return weno_ao_reconstruct(windows, weno_ao_tables(scheme, precision))
