#!/usr/bin/env python3
"""Independent NumPy computation of Gaussian-smooth-then-interpolate resampling.

Kernel: sampled Gaussian truncated at ceil(4*sigma), normalised to unit sum,
edge-replication padding; then linear interpolation at target_length equally
spaced positions over [0, n-1]. Prints values with 17 significant digits for
freezing into the C++ tests.
"""
import math
import numpy as np


def resample(x, target_length, sigma):
    x = np.asarray(x, dtype=float)
    radius = math.ceil(4 * sigma)
    k = np.arange(-radius, radius + 1)
    kernel = np.exp(-0.5 * (k / sigma) ** 2)
    kernel /= kernel.sum()
    padded = np.pad(x, radius, mode="edge")
    smoothed = np.convolve(padded, kernel[::-1], mode="valid")
    pos = np.linspace(0, len(x) - 1, target_length)
    return np.interp(pos, np.arange(len(x)), smoothed)


def largest_remainder(counts, total):
    n = sum(counts)
    floors = [total * c // n for c in counts]
    rema = [total * c % n for c in counts]
    left = total - sum(floors)
    order = sorted(range(len(counts)), key=lambda i: (-rema[i], i))
    for i in order[:left]:
        floors[i] += 1
    return floors


if __name__ == "__main__":
    alt = [i % 2 for i in range(64)]
    out = resample(alt, 8, 2.0)
    print("alternating64->8 sigma2:", ", ".join(f"{v:.17g}" for v in out))
    print("mean:", f"{out.mean():.17g}")
    ramp = [0.0, 1.0, 4.0, 9.0, 16.0, 25.0, 36.0, 49.0, 64.0, 81.0]
    out = resample(ramp, 4, 1.25)
    print("squares10->4 sigma1.25:", ", ".join(f"{v:.17g}" for v in out))
    out = np.interp(np.linspace(0, 3, 7), np.arange(4), [1.0, 3.0, 2.0, 5.0])
    print("upsample [1,3,2,5]->7:", ", ".join(f"{v:.17g}" for v in out))
    print("quota [20,10]->60:", largest_remainder([20, 10], 60))
    print("quota [3,2,2]->10:", largest_remainder([3, 2, 2], 10))
    print("quota [1,1,1]->5:", largest_remainder([1, 1, 1], 5))
