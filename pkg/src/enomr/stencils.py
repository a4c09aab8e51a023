"""Stencil geometry and the ordered candidate pools of the multi-resolution schemes."""

from __future__ import annotations

from dataclasses import dataclass

MAX_WIDTH = 17


@dataclass(frozen=True, order=True)
class Stencil:
    """Contiguous cell window {j-m, ..., j+n} relative to an anchor cell j."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError(f"stencil offsets must be non-negative, got ({self.m}, {self.n})")
        if self.width > MAX_WIDTH:
            raise ValueError(f"stencil width {self.width} exceeds supported maximum {MAX_WIDTH}")

    @property
    def width(self) -> int:
        return self.m + self.n + 1

    @property
    def degree(self) -> int:
        """Degree of the reconstruction polynomial built on this stencil."""
        return self.m + self.n

    def offsets(self) -> range:
        return range(-self.m, self.n + 1)

    def mirrored(self) -> "Stencil":
        """Reflection about the interface j+1/2, re-anchored at cell j+1."""
        return Stencil(self.n, self.m)

    def __str__(self) -> str:
        return f"S[j-{self.m}..j+{self.n}]"


# Ordered candidate list of the 17-point scheme, widest first.  Each width
# from 17 down to 1 contributes the most-centered window(s); even widths and
# widths 8..16 also carry an upwind-leaning partner.
CANDIDATES_17: tuple[tuple[int, int], ...] = (
    (8, 8), (7, 8), (8, 7), (7, 7), (8, 6), (6, 7), (7, 6), (6, 6), (7, 5),
    (5, 6), (6, 5), (5, 5), (6, 4), (4, 5), (5, 4), (4, 4), (5, 3), (3, 4),
    (4, 3), (3, 3), (2, 3), (3, 2), (2, 2), (1, 2), (2, 1), (1, 1),
    (0, 1), (1, 0), (0, 0),
)

SUPPORTED_HALFWIDTHS = (3, 5, 7, 9)


def candidate_pool(r: int) -> list[Stencil]:
    """Ordered candidates of the (2r-1)-point scheme.

    The pool is the subsequence of the 17-point list whose stencils fit in
    the (2r-1)-point window, i.e. m <= r-1 and n <= r-1, order preserved.
    """
    if r not in SUPPORTED_HALFWIDTHS:
        raise ValueError(f"unsupported half-width r={r}; expected one of {SUPPORTED_HALFWIDTHS}")
    return [Stencil(m, n) for m, n in CANDIDATES_17 if m <= r - 1 and n <= r - 1]


def two_sided_candidates(r: int) -> list[Stencil]:
    """Candidates eligible for the indicator comparison: m >= 1 and n >= 1."""
    return [s for s in candidate_pool(r) if s.m >= 1 and s.n >= 1]
