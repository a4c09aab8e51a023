"""Exact-rational generation of flux and smoothness-indicator coefficients.

Every candidate stencil carries two coefficient lists:

* flux coefficients ``a_l`` such that ``sum(a_l * f[j+l])`` evaluates the
  degree-(m+n) reconstruction polynomial at the interface x_{j+1/2};
* indicator coefficients ``b_l`` such that ``abs(sum(b_l * f[j+l]))`` is the
  magnitude of the highest (undivided) derivative of that polynomial.

All generation happens in exact rational arithmetic and is cross-checked,
entry by entry, against an independently transcribed reference table
(see :mod:`enomr.tables`).  Floating-point working copies are produced by a
single rounding per coefficient.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .stencils import CANDIDATES_17, Stencil
from . import tables


def _solve_linear(A: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan solve of an exact rational system (small, dense)."""
    n = len(A)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [vr - factor * vc for vr, vc in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def _average_matrix(stencil: Stencil) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix mapping monomial coefficients to sliding cell averages.

    Row k (cell offset), column q (monomial power):
    integral of x^q over [k-1/2, k+1/2], unit spacing, anchor at x_j = 0.
    """
    d = stencil.degree
    rows = []
    for k in stencil.offsets():
        hi = Fraction(2 * k + 1, 2)
        lo = Fraction(2 * k - 1, 2)
        rows.append(tuple((hi ** (q + 1) - lo ** (q + 1)) / (q + 1) for q in range(d + 1)))
    return tuple(rows)


def polynomial_from_samples(stencil: Stencil, samples) -> list[Fraction]:
    """Monomial coefficients of the polynomial whose sliding averages match samples."""
    if len(samples) != stencil.width:
        raise ValueError(f"expected {stencil.width} samples for {stencil}, got {len(samples)}")
    A = [list(r) for r in _average_matrix(stencil)]
    return _solve_linear(A, [Fraction(s) for s in samples])


@lru_cache(maxsize=None)
def flux_coefficients(stencil: Stencil) -> tuple[Fraction, ...]:
    """Coefficients a_l, l = -m..n, of the interface value P(x_{j+1/2}).

    Solved column by column from the conservation conditions: coefficient of
    f_{j+l} is P(1/2) for unit data at offset l.
    """
    d = stencil.degree
    if d == 0:
        return (Fraction(1),)
    # a = A^{-T} v with v_q = (1/2)^q: solve A^T a = v.
    A = _average_matrix(stencil)
    At = [[A[r][c] for r in range(d + 1)] for c in range(d + 1)]
    v = [Fraction(1, 2) ** q for q in range(d + 1)]
    return tuple(_solve_linear(At, v))


@lru_cache(maxsize=None)
def indicator_coefficients(stencil: Stencil) -> tuple[Fraction, ...]:
    """Coefficients b_l of the highest undivided derivative of the stencil polynomial.

    For width 1 the indicator is unused; the list is [0] by convention.
    """
    d = stencil.degree
    if d == 0:
        return (Fraction(0),)
    # d-th derivative of P is d! * c_d; c_d is row d of A^{-1} applied to samples.
    A = _average_matrix(stencil)
    At = [[A[r][c] for r in range(d + 1)] for c in range(d + 1)]
    e_last = [Fraction(0)] * d + [Fraction(1)]
    row = _solve_linear(At, e_last)
    return tuple(factorial(d) * y for y in row)


@lru_cache(maxsize=None)
def _inverse_average_matrix(stencil: Stencil) -> tuple[tuple[Fraction, ...], ...]:
    """Rows of A^{-1}: sample-to-monomial-coefficient map."""
    d = stencil.degree
    A = _average_matrix(stencil)
    cols = []
    for k in range(d + 1):
        e = [Fraction(0)] * (d + 1)
        e[k] = Fraction(1)
        cols.append(_solve_linear([list(r) for r in A], e))
    # cols[k] is A^{-1} e_k, i.e. column k of the inverse
    return tuple(tuple(cols[k][q] for k in range(d + 1)) for q in range(d + 1))


@lru_cache(maxsize=None)
def jiang_shu_quadratic_form(stencil: Stencil) -> tuple[tuple[Fraction, ...], ...]:
    """Exact quadratic form Q with beta = f^T Q f.

    beta is the classical integrated-square-derivative smoothness measure of
    the stencil polynomial over the anchor cell [x_{j-1/2}, x_{j+1/2}], with
    the usual h^{2l-1} weights (unit spacing here).  Machine-generated from
    the integral definition; hand transcription of the high-degree forms is
    error-prone.
    """
    d = stencil.degree
    w = stencil.width
    M = _inverse_average_matrix(stencil)  # c_q = sum_k M[q][k] f_k
    Q = [[Fraction(0)] * w for _ in range(w)]
    for lderiv in range(1, d + 1):
        # D[q][q'] = (q!/(q-l)!) (q'!/(q'-l)!) * int_{-1/2}^{1/2} x^{q+q'-2l} dx
        D = [[Fraction(0)] * (d + 1) for _ in range(d + 1)]
        for q in range(lderiv, d + 1):
            for qp in range(lderiv, d + 1):
                p = q + qp - 2 * lderiv
                if p % 2 == 0:
                    integral = Fraction(1, 2) ** p / (p + 1)
                    D[q][qp] = (
                        Fraction(factorial(q), factorial(q - lderiv))
                        * Fraction(factorial(qp), factorial(qp - lderiv))
                        * integral
                    )
        # accumulate M^T D M
        for a_idx in range(w):
            for b_idx in range(w):
                s = Fraction(0)
                for q in range(lderiv, d + 1):
                    for qp in range(lderiv, d + 1):
                        if D[q][qp]:
                            s += M[q][a_idx] * D[q][qp] * M[qp][b_idx]
                Q[a_idx][b_idx] += s
    return tuple(tuple(row) for row in Q)


@lru_cache(maxsize=None)
def jiang_shu_sos(stencil: Stencil) -> tuple[tuple[Fraction, tuple[Fraction, ...]], ...]:
    """Sum-of-squares form of the quadratic: beta = sum_i d_i (v_i . f)^2.

    LDL^T factorization in exact rationals; guarantees beta >= 0 under
    floating-point evaluation.
    """
    Q = [list(row) for row in jiang_shu_quadratic_form(stencil)]
    w = stencil.width
    terms = []
    for i in range(w):
        piv = Q[i][i]
        if piv == 0:
            if any(Q[i][j] != 0 for j in range(w)):
                raise ArithmeticError("zero pivot with nonzero row in PSD factorization")
            continue
        if piv < 0:
            raise ArithmeticError("negative pivot in PSD factorization")
        v = tuple(Q[i][j] / piv for j in range(w))
        terms.append((piv, v))
        for r in range(i, w):
            for c in range(i, w):
                Q[r][c] -= piv * v[r] * v[c]
    return tuple(terms)


def finite_difference_weights(stencil: Stencil) -> tuple[Fraction, ...]:
    """Closed form of the indicator coefficients: alternating binomials."""
    d = stencil.degree
    if d == 0:
        return (Fraction(0),)
    return tuple(Fraction((-1) ** (d - k) * comb(d, k)) for k in range(d + 1))


def mirror_coefficients(coeffs, stencil: Stencil) -> tuple[tuple[Fraction, ...], Stencil]:
    """Reflect a flux rule about the interface x_{j+1/2}.

    The reversed coefficient list, attached to the mirrored stencil anchored
    at cell j+1, reconstructs the downwind-biased interface value: applying
    it to data reflected about the interface gives the reflected flux.
    """
    if len(coeffs) != stencil.width:
        raise ValueError("coefficient list does not match stencil width")
    return tuple(reversed(tuple(coeffs))), stencil.mirrored()


@dataclass(frozen=True)
class CoefficientSet:
    stencil: Stencil
    flux_coeffs: tuple[Fraction, ...]
    is_coeffs: tuple[Fraction, ...]


@lru_cache(maxsize=None)
def coefficient_set(stencil: Stencil) -> CoefficientSet:
    return CoefficientSet(stencil, flux_coefficients(stencil), indicator_coefficients(stencil))


@dataclass(frozen=True)
class Mismatch:
    stencil: Stencil
    kind: str  # "flux" or "indicator"
    offset: int
    generated: Fraction
    expected: Fraction


@dataclass
class ValidationReport:
    checked: int
    mismatches: list[Mismatch]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        lines = [f"stencils checked: {self.checked}, mismatches: {len(self.mismatches)}"]
        for mm in self.mismatches:
            lines.append(
                f"  {mm.stencil} {mm.kind} l={mm.offset}: generated {mm.generated}, expected {mm.expected}"
            )
        return "\n".join(lines)


def validate_reference_tables(reference=None) -> ValidationReport:
    """Compare generated coefficients against the transcribed reference tables.

    Exact rational comparison over all 29 candidate stencils, both the flux
    and the indicator lists.  Any disagreement is reported with its stencil
    and offset; the test suite fails on a non-empty report.
    """
    if reference is None:
        reference = tables.reference_coefficients()
    mismatches = []
    checked = 0
    for m, n in CANDIDATES_17:
        st = Stencil(m, n)
        ref_flux, ref_is = reference[(m, n)]
        checked += 1
        for kind, gen, ref in (
            ("flux", flux_coefficients(st), ref_flux),
            ("indicator", indicator_coefficients(st), ref_is),
        ):
            if len(gen) != len(ref):
                raise ValueError(f"reference width mismatch for {st} {kind}")
            for off, (g, e) in zip(st.offsets(), zip(gen, ref)):
                if g != e:
                    mismatches.append(Mismatch(st, kind, off, g, e))
    return ValidationReport(checked, mismatches)


def dump_coefficients_csv(path) -> None:
    """Debug dump of every coefficient set: stencil, offset, numerator, denominator."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "n", "kind", "l", "numerator", "denominator"])
        for m, n in CANDIDATES_17:
            st = Stencil(m, n)
            for kind, coeffs in (("flux", flux_coefficients(st)), ("indicator", indicator_coefficients(st))):
                for off, c in zip(st.offsets(), coeffs):
                    writer.writerow([m, n, kind, off, c.numerator, c.denominator])
