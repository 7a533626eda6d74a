"""
The sequence space: metric, spikes, cones, and the lag map
==========================================================

Double-sided nonnegative sequences with finite support are the state space
for everything downstream.  The metric weights coordinate gaps by
2^-(|i|+1), so it is bounded by 3/2 and is computed exactly on windows.
Cone membership just counts strictly positive coordinates.
"""

from matails import (
    ZERO,
    ExplicitFinite,
    apply_Tm,
    cone_label,
    dist,
    exceedance_count,
    scale,
    spike,
)

e0, e1 = spike(0, 1.0), spike(1, 1.0)

print("Metric values")
print("  d(0, e_0)      =", dist(ZERO, e0), "   (single unit gap at index 0)")
print("  d(e_0, e_1)    =", dist(e0, e1), "  (two unit gaps, weights 1/2 + 1/4)")
print("  d(0, 100 e_0)  =", dist(ZERO, scale(e0, 100.0)), "   (gaps are capped at 1)")
print("  d(0, wide big) =", dist(ZERO, sum((spike(i, 9.0) for i in range(-20, 21)), ZERO)),
      " (approaches the bound 3/2)")

print("\nCone classification counts positive coordinates:")
x = spike(-3, 0.2) + spike(0, 1.0) + spike(4, 7.0)
print("  x has spikes at -3, 0, 4    ->  cone label", cone_label(x))
print("  scaling never moves a sequence across cones:",
      cone_label(scale(x, 0.01)), "==", cone_label(x))
print("  thresholded exceedance count at u = 0.5:", exceedance_count(x, 0.5))

print("\nThe lag map spreads each spike over m+1 coordinates:")
coeffs = ExplicitFinite([1.0, 0.5, 0.25])
image = apply_Tm(coeffs, 2, e0)
print("  T^2(e_0) window:", dict(image.support()))
two = apply_Tm(coeffs, 2, spike(0, 1.0) + spike(10, 2.0))
print("  two well-separated spikes produce 2 * (m+1) =", cone_label(two), "positive coordinates")
