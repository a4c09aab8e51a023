"""Transcribed reference coefficient tables for the 29 candidate stencils.

These are an independent copy of the published coefficient tabulation, kept
purely for cross-validation: the build generates every coefficient from the
conservation conditions and must reproduce these values exactly (rational
comparison; see ``coeffs.validate_reference_tables``).

Flux entries are stored as (numerator list, common denominator).  Indicator
entries are integers.  Two indicator entries were misprinted in circulation
(3423 where the value 3432 is forced by the zero-sum property of the
column); the corrected values are stored here.
"""

from __future__ import annotations

from fractions import Fraction

# Flux coefficients a_l, keyed by (m, n), ordered l = -m .. n.
_FLUX: dict[tuple[int, int], tuple[list[int], int]] = {
    (8, 8): ([56, -1015, 8777, -48343, 191561, -588127, 1491041, -3409855,
              8842385, 7481025, -2320767, 797985, -241599, 58281, -10263,
              1161, -63], 12252240),
    (7, 8): ([-7, 121, -999, 5273, -20207, 61329, -162895, 477745, 477745,
              -162895, 61329, -20207, 5273, -999, 121, -7], 720720),
    (8, 7): ([7, -119, 961, -4919, 18013, -50783, 117385, -242975, 567835,
              397665, -106839, 30753, -7467, 1353, -159, 9], 720720),
    (7, 7): ([-7, 113, -867, 4229, -14881, 41175, -98965, 261395, 216350,
              -63930, 20154, -5326, 1044, -132, 8], 360360),
    (8, 6): ([8, -127, 953, -4507, 15149, -38905, 81215, -150445, 312875,
              176310, -39906, 9234, -1686, 204, -12], 360360),
    (6, 7): ([15, -230, 1681, -7874, 27161, -77944, 237371, 237371, -77944,
              27161, -7874, 1681, -230, 15], 360360),
    (7, 6): ([-15, 225, -1595, 7141, -22889, 57191, -122989, 288851, 192326,
              -47914, 12146, -2414, 316, -20], 360360),
    (6, 6): ([30, -425, 2851, -12164, 37886, -97249, 263111, 211631, -58639,
              16436, -3584, 511, -35], 360360),
    (7, 5): ([-35, 485, -3155, 12861, -37189, 82931, -157309, 323171, 166586,
              -33614, 6426, -854, 56], 360360),
    (5, 6): ([-5, 67, -428, 1772, -5653, 18107, 18107, -5653, 1772, -428,
              67, -5], 27720),
    (6, 5): ([5, -65, 397, -1528, 4247, -9613, 22727, 14147, -3178, 672,
              -98, 7], 27720),
    (5, 5): ([-10, 122, -703, 2597, -7303, 20417, 15797, -4003, 947, -153,
              12], 27720),
    (6, 4): ([12, -142, 782, -2683, 6557, -12847, 25961, 11837, -2023, 287,
              -21], 27720),
    (4, 5): ([2, -23, 127, -473, 1627, 1627, -473, 127, -23, 2], 2520),
    (5, 4): ([-2, 22, -113, 367, -893, 2131, 1207, -233, 37, -3], 2520),
    (4, 4): ([4, -41, 199, -641, 1879, 1375, -305, 55, -5], 2520),
    (5, 3): ([-5, 49, -221, 619, -1271, 2509, 955, -125, 10], 2520),
    (3, 4): ([-3, 29, -139, 533, 533, -139, 29, -3], 840),
    (4, 3): ([3, -27, 113, -307, 743, 365, -55, 5], 840),
    (3, 3): ([-3, 25, -101, 319, 214, -38, 4], 420),
    (2, 3): ([1, -8, 37, 37, -8, 1], 60),
    (3, 2): ([-1, 7, -23, 57, 22, -2], 60),
    (2, 2): ([2, -13, 47, 27, -3], 60),
    (1, 2): ([-1, 7, 7, -1], 12),
    (2, 1): ([1, -5, 13, 3], 12),
    (1, 1): ([-1, 5, 2], 6),
    (0, 1): ([1, 1], 2),
    (1, 0): ([-1, 3], 2),
    (0, 0): ([1], 1),
}

# Indicator coefficients b_l, keyed by (m, n), ordered l = -m .. n.
_INDICATOR: dict[tuple[int, int], list[int]] = {
    (8, 8): [1, -16, 120, -560, 1820, -4368, 8008, -11440, 12870, -11440,
             8008, -4368, 1820, -560, 120, -16, 1],
    (7, 8): [-1, 15, -105, 455, -1365, 3003, -5005, 6435, -6435, 5005,
             -3003, 1365, -455, 105, -15, 1],
    (8, 7): [-1, 15, -105, 455, -1365, 3003, -5005, 6435, -6435, 5005,
             -3003, 1365, -455, 105, -15, 1],
    (7, 7): [1, -14, 91, -364, 1001, -2002, 3003, -3432, 3003, -2002, 1001,
             -364, 91, -14, 1],
    (8, 6): [1, -14, 91, -364, 1001, -2002, 3003, -3432, 3003, -2002, 1001,
             -364, 91, -14, 1],
    (6, 7): [-1, 13, -78, 286, -715, 1287, -1716, 1716, -1287, 715, -286,
             78, -13, 1],
    (7, 6): [-1, 13, -78, 286, -715, 1287, -1716, 1716, -1287, 715, -286,
             78, -13, 1],
    (6, 6): [1, -12, 66, -220, 495, -792, 924, -792, 495, -220, 66, -12, 1],
    (7, 5): [1, -12, 66, -220, 495, -792, 924, -792, 495, -220, 66, -12, 1],
    (5, 6): [-1, 11, -55, 165, -330, 462, -462, 330, -165, 55, -11, 1],
    (6, 5): [-1, 11, -55, 165, -330, 462, -462, 330, -165, 55, -11, 1],
    (5, 5): [1, -10, 45, -120, 210, -252, 210, -120, 45, -10, 1],
    (6, 4): [1, -10, 45, -120, 210, -252, 210, -120, 45, -10, 1],
    (4, 5): [-1, 9, -36, 84, -126, 126, -84, 36, -9, 1],
    (5, 4): [-1, 9, -36, 84, -126, 126, -84, 36, -9, 1],
    (4, 4): [1, -8, 28, -56, 70, -56, 28, -8, 1],
    (5, 3): [1, -8, 28, -56, 70, -56, 28, -8, 1],
    (3, 4): [-1, 7, -21, 35, -35, 21, -7, 1],
    (4, 3): [-1, 7, -21, 35, -35, 21, -7, 1],
    (3, 3): [1, -6, 15, -20, 15, -6, 1],
    (2, 3): [-1, 5, -10, 10, -5, 1],
    (3, 2): [-1, 5, -10, 10, -5, 1],
    (2, 2): [1, -4, 6, -4, 1],
    (1, 2): [-1, 3, -3, 1],
    (2, 1): [-1, 3, -3, 1],
    (1, 1): [1, -2, 1],
    (0, 1): [-1, 1],
    (1, 0): [-1, 1],
    (0, 0): [0],
}


def reference_coefficients() -> dict[tuple[int, int], tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
    """All reference entries as exact rationals: {(m, n): (flux, indicator)}."""
    out = {}
    for key, (nums, den) in _FLUX.items():
        flux = tuple(Fraction(n, den) for n in nums)
        ind = tuple(Fraction(v) for v in _INDICATOR[key])
        out[key] = (flux, ind)
    return out
