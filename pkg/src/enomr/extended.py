"""Vectorized double-double arithmetic: the ``extended`` precision scalar.

A value is an unevaluated sum hi + lo of two float64 with |lo| <= ulp(hi)/2,
giving ~31 significant decimal digits.  All operations use the classical
error-free transformations (Dekker splitting, no FMA requirement) and work
elementwise on numpy arrays, so the solver kernels run unchanged on either
float64 arrays or :class:`DD` arrays.

Comparisons are exact lexicographic (hi, lo) comparisons, which for
normalized values order the represented reals; this keeps the stencil
selection logic meaningful in extended precision.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1

DOUBLE = "double"
EXTENDED = "extended"
PRECISIONS = (DOUBLE, EXTENDED)

# Machine epsilon of the representation, used for precision-floor reporting.
EPS = {DOUBLE: 2.0 ** -52, EXTENDED: 2.0 ** -104}


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _quick_two_sum(a, b):
    # requires |a| >= |b| (or a == 0)
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


class DD:
    """Double-double scalar or array; hi/lo are float64 scalars or ndarrays."""

    __slots__ = ("hi", "lo")
    __array_priority__ = 100  # keep numpy from hijacking mixed operations

    def __init__(self, hi, lo=0.0):
        self.hi = hi
        self.lo = lo

    # -- construction -------------------------------------------------

    @staticmethod
    def wrap(x) -> "DD":
        if isinstance(x, DD):
            return x
        if isinstance(x, Fraction):
            return DD.from_fraction(x)
        if isinstance(x, (int, float)):
            return DD(float(x), 0.0)
        if isinstance(x, np.ndarray):
            return DD(x.astype(np.float64), np.zeros_like(x, dtype=np.float64))
        raise TypeError(f"cannot wrap {type(x)!r} as DD")

    @staticmethod
    def from_fraction(fr: Fraction) -> "DD":
        hi = float(fr)
        lo = float(fr - Fraction(hi))
        return DD(hi, lo)

    @staticmethod
    def from_mpf(x) -> "DD":
        hi = float(x)
        lo = float(x - mpmath.mpf(hi))
        return DD(hi, lo)

    @staticmethod
    def from_float_array(a) -> "DD":
        a = np.asarray(a, dtype=np.float64)
        return DD(a.copy(), np.zeros_like(a))

    @staticmethod
    def zeros(shape) -> "DD":
        return DD(np.zeros(shape), np.zeros(shape))

    @staticmethod
    def empty(shape) -> "DD":
        return DD(np.empty(shape), np.empty(shape))

    def copy(self) -> "DD":
        return DD(np.copy(self.hi), np.copy(self.lo))

    # -- shape plumbing ------------------------------------------------

    @property
    def shape(self):
        return np.shape(self.hi)

    @property
    def ndim(self):
        return np.ndim(self.hi)

    @property
    def size(self):
        return np.size(self.hi)

    def __len__(self):
        return len(self.hi)

    def __getitem__(self, idx) -> "DD":
        return DD(self.hi[idx], self.lo[idx])

    def __setitem__(self, idx, value):
        value = DD.wrap(value)
        self.hi[idx] = value.hi
        self.lo[idx] = value.lo

    def reshape(self, *shape) -> "DD":
        return DD(self.hi.reshape(*shape), self.lo.reshape(*shape))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "DD":
        o = DD.wrap(other)
        s1, s2 = _two_sum(self.hi, o.hi)
        t1, t2 = _two_sum(self.lo, o.lo)
        s2 = s2 + t1
        s1, s2 = _quick_two_sum(s1, s2)
        s2 = s2 + t2
        hi, lo = _quick_two_sum(s1, s2)
        return DD(hi, lo)

    __radd__ = __add__

    def __neg__(self) -> "DD":
        return DD(-self.hi, -self.lo)

    def __sub__(self, other) -> "DD":
        return self + (-DD.wrap(other))

    def __rsub__(self, other) -> "DD":
        return DD.wrap(other) + (-self)

    def __mul__(self, other) -> "DD":
        o = DD.wrap(other)
        p1, p2 = _two_prod(self.hi, o.hi)
        p2 = p2 + (self.hi * o.lo + self.lo * o.hi)
        hi, lo = _quick_two_sum(p1, p2)
        return DD(hi, lo)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        o = DD.wrap(other)
        q1 = self.hi / o.hi
        r = self - o * DD(q1)
        q2 = r.hi / o.hi
        r = r - o * DD(q2)
        q3 = r.hi / o.hi
        s1, s2 = _quick_two_sum(q1, q2)
        return DD(s1, s2) + DD(q3)

    def __rtruediv__(self, other) -> "DD":
        return DD.wrap(other) / self

    def __abs__(self) -> "DD":
        neg = self.hi < 0
        return DD(np.where(neg, -self.hi, self.hi), np.where(neg, -self.lo, self.lo))

    def sqrt(self) -> "DD":
        # Karp's trick: one Newton correction of the float64 root.
        x = 1.0 / np.sqrt(self.hi)
        ax = self.hi * x
        ax_dd = DD(ax)
        err = (self - ax_dd * ax_dd).hi * (x * 0.5)
        s1, s2 = _two_sum(ax, err)
        return DD(s1, s2)

    # -- comparisons (exact for normalized values) ----------------------

    def __lt__(self, other):
        o = DD.wrap(other)
        return (self.hi < o.hi) | ((self.hi == o.hi) & (self.lo < o.lo))

    def __le__(self, other):
        o = DD.wrap(other)
        return (self.hi < o.hi) | ((self.hi == o.hi) & (self.lo <= o.lo))

    def __gt__(self, other):
        return DD.wrap(other).__lt__(self)

    def __ge__(self, other):
        return DD.wrap(other).__le__(self)

    def __eq__(self, other):  # type: ignore[override]
        o = DD.wrap(other)
        return (self.hi == o.hi) & (self.lo == o.lo)

    def __ne__(self, other):  # type: ignore[override]
        return ~self.__eq__(other)

    def __hash__(self):
        return hash((float(self.hi), float(self.lo)))

    # -- reductions ------------------------------------------------------

    def sum(self) -> "DD":
        """Deterministic pairwise-fold sum of the flattened array."""
        acc = self.reshape(-1)
        while acc.size > 1:
            n = acc.size
            folded = _fold_pairs(acc)
            if n % 2:
                folded[0] = folded[0] + acc[n - 1]
            acc = folded
        return DD(acc.hi.reshape(())[()], acc.lo.reshape(())[()])

    def max(self) -> "DD":
        flat = self.reshape(-1)
        order = np.lexsort((flat.lo, flat.hi))
        i = order[-1]
        return DD(flat.hi[i], flat.lo[i])

    def min(self) -> "DD":
        flat = self.reshape(-1)
        order = np.lexsort((flat.lo, flat.hi))
        i = order[0]
        return DD(flat.hi[i], flat.lo[i])

    # -- conversions -------------------------------------------------------

    def to_float(self):
        return self.hi + self.lo

    def to_mpf(self):
        if np.ndim(self.hi) != 0:
            raise ValueError("to_mpf expects a scalar")
        return mpmath.mpf(float(self.hi)) + mpmath.mpf(float(self.lo))

    def isfinite(self):
        return np.isfinite(self.hi) & np.isfinite(self.lo)

    def __repr__(self):
        return f"DD(hi={self.hi!r}, lo={self.lo!r})"


def _fold_pairs(x: DD) -> DD:
    half = x.size // 2
    return x[0 : 2 * half : 2] + x[1 : 2 * half : 2]


# -- precision-generic helpers used by the kernels -------------------------


def is_dd(x) -> bool:
    return isinstance(x, DD)


def maximum(a, b):
    if is_dd(a) or is_dd(b):
        a, b = DD.wrap(a), DD.wrap(b)
        m = b < a
        return DD(np.where(m, a.hi, b.hi), np.where(m, a.lo, b.lo))
    return np.maximum(a, b)


def minimum(a, b):
    if is_dd(a) or is_dd(b):
        a, b = DD.wrap(a), DD.wrap(b)
        m = a < b
        return DD(np.where(m, a.hi, b.hi), np.where(m, a.lo, b.lo))
    return np.minimum(a, b)


def where(mask, a, b):
    if is_dd(a) or is_dd(b):
        a, b = DD.wrap(a), DD.wrap(b)
        hi = np.where(mask, a.hi, b.hi)
        lo = np.where(mask, a.lo, b.lo)
        return DD(hi, lo)
    return np.where(mask, a, b)


def isfinite_all(x) -> bool:
    if is_dd(x):
        return bool(np.all(np.isfinite(x.hi)))
    return bool(np.all(np.isfinite(x)))


def sliding_windows(x, width: int):
    """Read-only (n-width+1, width) windows over the last axis."""
    swv = np.lib.stride_tricks.sliding_window_view
    if is_dd(x):
        return DD(swv(x.hi, width, axis=-1), swv(x.lo, width, axis=-1))
    return swv(x, width, axis=-1)


def zeros(shape, precision: str):
    if precision == EXTENDED:
        return DD.zeros(shape)
    return np.zeros(shape)


def empty(shape, precision: str):
    if precision == EXTENDED:
        return DD.empty(shape)
    return np.empty(shape)


def const(value, precision: str):
    """Working copy of an exact value: one rounding per float64 component."""
    if precision == EXTENDED:
        if isinstance(value, Fraction):
            return DD.from_fraction(value)
        if isinstance(value, mpmath.mpf):
            return DD.from_mpf(value)
        return DD.wrap(value)
    if isinstance(value, mpmath.mpf):
        return float(value)
    return float(value)


def asarray(values, precision: str):
    """Array from a sequence of exact values (Fractions, mpf, floats)."""
    if precision == EXTENDED:
        his = np.array([float(const(v, EXTENDED).hi) for v in values])
        los = np.array([float(const(v, EXTENDED).lo) for v in values])
        return DD(his, los)
    return np.array([const(v, DOUBLE) for v in values], dtype=np.float64)


def to_float_array(x):
    if is_dd(x):
        return x.hi + x.lo
    return np.asarray(x, dtype=np.float64)


def scalar_to_mpf(x):
    if is_dd(x):
        return x.to_mpf()
    return mpmath.mpf(float(x))


def format_scalar(x) -> str:
    """Round-trip-faithful decimal string for either precision."""
    if is_dd(x):
        with mpmath.workdps(34):
            return mpmath.nstr(x.to_mpf(), 33, strip_zeros=False)
    return repr(float(x))
