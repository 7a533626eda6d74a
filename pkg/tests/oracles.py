"""Shared independent oracles and random fixtures for the test suite.

Everything here deliberately avoids the library's own computational paths:
the quadrature oracle integrates on a deterministic grid, the convolution
oracle is a double loop, and the cover oracle is exhaustive search.
"""

import itertools

import numpy as np

from matails import WindowSeq, ZERO


def random_window(rng) -> WindowSeq:
    """Random finitely supported sequence, sometimes zero, sometimes sparse."""
    width = int(rng.integers(0, 7))
    if width == 0:
        return ZERO
    lo = int(rng.integers(-8, 9))
    values = rng.uniform(0.0, 3.0, width)
    values[rng.random(width) < 0.3] = 0.0
    return WindowSeq(lo, tuple(values))


def dyadic_window(rng) -> WindowSeq:
    """Random window with dyadic values, exact under binary64 arithmetic."""
    width = int(rng.integers(1, 6))
    lo = int(rng.integers(-6, 7))
    vals = rng.integers(0, 64, width) / 16.0
    return WindowSeq(lo, tuple(vals))


def tm_oracle(coeffs, m, z) -> WindowSeq:
    """Direct double-loop lag-map convolution."""
    if z.is_zero:
        return ZERO
    vals = [
        sum(coeffs.psi(j) * z.value_at(k - j) for j in range(m + 1))
        for k in range(z.lo, z.hi + m + 1)
    ]
    return WindowSeq(z.lo, tuple(vals))


def coverage(coeffs, m, rect, i):
    return {k for k in rect.indices if 0 <= k - i <= m and coeffs.psi(k - i) > 0}


def cover_oracle(coeffs, m, rect):
    """Exhaustive search for the smallest covering spike set."""
    needed = set(rect.indices)
    positions = [
        i
        for i in range(rect.min_index - m, rect.max_index + 1)
        if coverage(coeffs, m, rect, i)
    ]
    for r in range(1, len(needed) + 1):
        for combo in itertools.combinations(positions, r):
            if set().union(*(coverage(coeffs, m, rect, i) for i in combo)) == needed:
                return r
    return float("inf")


def order1_quadrature(coeffs, m, alpha, rect, grid=1500):
    """Deterministic tensor-grid quadrature of the two-spike integral.

    Substituting u = z^-alpha turns each Pareto-tail factor into Lebesgue
    measure on a bounded interval; the integral becomes the area of the
    acceptance region, computed on a midpoint grid.
    """
    thresholds = dict(rect.constraints)
    needed = set(rect.indices)
    cands = [
        i
        for i in range(rect.min_index - m, rect.max_index + 1)
        if coverage(coeffs, m, rect, i)
    ]
    total = 0.0
    for i1, i2 in itertools.combinations(cands, 2):
        cov1, cov2 = coverage(coeffs, m, rect, i1), coverage(coeffs, m, rect, i2)
        if cov1 | cov2 != needed:
            continue
        lows = []
        for i, cov, other in ((i1, cov1, cov2), (i2, cov2, cov1)):
            private = [thresholds[k] / coeffs.psi(k - i) for k in cov if k not in other]
            lows.append(max(private))
        u_hi = [low**-alpha for low in lows]
        u1 = (np.arange(grid) + 0.5) / grid * u_hi[0]
        u2 = (np.arange(grid) + 0.5) / grid * u_hi[1]
        z1, z2 = u1 ** (-1 / alpha), u2 ** (-1 / alpha)
        ok = np.ones((grid, grid), dtype=bool)
        for k in needed:
            p1 = coeffs.psi(k - i1) if 0 <= k - i1 <= m else 0.0
            p2 = coeffs.psi(k - i2) if 0 <= k - i2 <= m else 0.0
            ok &= p1 * z1[:, None] + p2 * z2[None, :] > thresholds[k]
        total += ok.sum() * (u_hi[0] / grid) * (u_hi[1] / grid)
    return total
