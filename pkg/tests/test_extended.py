"""Double-double arithmetic checked against an arbitrary-precision reference."""

from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enomr import extended as xt
from enomr.extended import DD

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False,
                   allow_infinity=False).filter(lambda v: abs(v) > 1e-12 or v == 0.0)


def to_mpf(x: DD, i=None):
    hi = x.hi if i is None else x.hi[i]
    lo = x.lo if i is None else x.lo[i]
    return mpmath.mpf(float(hi)) + mpmath.mpf(float(lo))


def dd_pair(a: float, b: float) -> DD:
    # a genuine two-part value: hi + a small incommensurate tail
    return DD(a, 0.0) + DD(a * 2.0**-60, 0.0) * DD(b if b else 1.0, 0.0) * DD(2.0**-10)


@given(finite, finite)
@settings(max_examples=300, deadline=None)
def test_field_ops_match_mpmath(a, b):
    with mpmath.workdps(60):
        x = dd_pair(a, b)
        y = dd_pair(b, a) + DD(1.0) if b == 0 else dd_pair(b, a)
        xm, ym = to_mpf(x), to_mpf(y)
        for op, ref in (
            (x + y, xm + ym),
            (x - y, xm - ym),
            (x * y, xm * ym),
        ):
            err = abs(to_mpf(op) - ref)
            scale = max(abs(ref), mpmath.mpf(1e-300))
            assert err / scale < mpmath.mpf(2) ** -100
        if float(ym) != 0.0:
            q = x / y
            err = abs(to_mpf(q) - xm / ym) / max(abs(xm / ym), mpmath.mpf(1e-300))
            assert err < mpmath.mpf(2) ** -98


@given(st.floats(min_value=1e-6, max_value=1e12))
@settings(max_examples=200, deadline=None)
def test_sqrt(a):
    with mpmath.workdps(60):
        x = DD(a) + DD(a * 2.0**-55)
        r = x.sqrt()
        ref = mpmath.sqrt(to_mpf(x))
        assert abs(to_mpf(r) - ref) / ref < mpmath.mpf(2) ** -98


def test_fraction_roundtrip():
    fr = Fraction(1, 3)
    x = DD.from_fraction(fr)
    with mpmath.workdps(40):
        err = abs(to_mpf(x) - mpmath.mpf(1) / 3)
        assert err < mpmath.mpf(2) ** -104


def test_comparisons_exact():
    eps = 2.0**-70
    a = DD(1.0, 0.0)
    b = DD(1.0, eps)
    assert bool(a < b) and not bool(b < a)
    assert bool(a <= b) and bool(a != b)
    assert bool(DD(2.0) > DD(1.0, 1e-17))


def test_pairwise_sum_accuracy_and_scaling():
    rng = np.random.default_rng(5)
    vals = rng.uniform(-1, 1, 1003)
    x = DD.from_float_array(vals) * DD.from_fraction(Fraction(1, 7))
    with mpmath.workdps(60):
        ref = mpmath.fsum(to_mpf(x, i) for i in range(1003))
        got = x.sum().to_mpf()
        assert abs(got - ref) < mpmath.mpf(2) ** -90
    # power-of-two scaling is bitwise on every component
    y = x * DD(2.0**20)
    assert np.array_equal(y.hi, x.hi * 2.0**20)
    assert np.array_equal(y.lo, x.lo * 2.0**20)
    assert y.sum().hi == x.sum().hi * 2.0**20


def test_max_min_lexicographic():
    x = DD(np.array([1.0, 1.0, -2.0]), np.array([0.0, 1e-20, 0.0]))
    assert x.max().lo == 1e-20
    assert x.min().hi == -2.0


def test_where_maximum_minimum_and_abs():
    a = DD(np.array([1.0, -3.0]), np.zeros(2))
    b = DD(np.array([2.0, -4.0]), np.zeros(2))
    mx = xt.maximum(a, b)
    mn = xt.minimum(a, b)
    assert list(mx.hi) == [2.0, -3.0]
    assert list(mn.hi) == [1.0, -4.0]
    assert list(abs(b).hi) == [2.0, 4.0]
    sel = xt.where(np.array([True, False]), a, b)
    assert list(sel.hi) == [1.0, -4.0]


def test_indexing_and_views():
    x = DD(np.arange(10.0), np.arange(10.0) * 1e-20)
    w = xt.sliding_windows(x, 3)
    assert w.shape == (8, 3)
    assert w[2, 1].hi == 3.0
    rev = w[:, ::-1]
    assert rev[0, 0].hi == 2.0
    x[np.array([0, 1])] = DD(np.array([5.0, 6.0]), np.zeros(2))
    assert x.hi[0] == 5.0 and x.lo[0] == 0.0


def test_isfinite_and_format():
    x = DD(np.array([1.0, np.nan]), np.zeros(2))
    assert not xt.isfinite_all(x)
    s = xt.format_scalar(DD.from_fraction(Fraction(1, 3)))
    assert s.startswith("0.3333333333333333333333333333")
    assert xt.format_scalar(0.1) == "0.1"


def test_const_and_asarray():
    c = xt.const(Fraction(1, 3), xt.EXTENDED)
    assert isinstance(c, DD) and c.lo != 0.0
    assert xt.const(Fraction(1, 2), xt.DOUBLE) == 0.5
    arr = xt.asarray([Fraction(1, 3), Fraction(2, 3)], xt.EXTENDED)
    assert arr.shape == (2,)
    with pytest.raises(TypeError):
        DD.wrap("nope")
