#!/usr/bin/env python3
# Copyright 2026 the abr-lab authors
# Licensed under the Apache License, Version 2.0.
"""Regenerate the bundled synthetic HSDPA fixtures.

Each route gets 40 one-second samples built from its published summary row
(min, max, mean, std): the min and max once, and 19 low / 19 high interior
samples placed symmetrically around the interior mean so that the whole set
reproduces the row exactly. Byte counts are integers; the sub-byte deficit
is spread one byte at a time so the mean stays exact. Sample order is fixed:
a short strong head, a deep five-second dip with the min at its center (the
max spikes just after), then alternating two-second low/high pairs. Stats
are order-invariant; the early dip lands on thin startup buffers and the
recurring pairs keep the bandwidth volatile, which is what concentrates
rebuffering in the first seconds of simulated sessions.

Prints the exact post-quantization stats of every fixture as a C++ table.
"""

import math
import os
from fractions import Fraction

ROUTES = [
    # route, min, max, mean, std (Kbps)
    ("css", 234, 1768, 989, 380),
    ("tjl", 52, 1067, 617, 207),
    ("tvo", 131, 1632, 702, 349),
    ("mkj", 28, 1511, 696, 456),
    ("blo", 9, 886, 373, 235),
    ("fno", 35, 3869, 1325, 761),
    ("tlj", 86, 485, 269, 86),
]

N = 40
INTERIOR = N - 2  # 38, split 19 low / 19 high
BYTES_PER_KBPS_SECOND = 125  # 1 Kbps over 1 s = 1000 bits = 125 bytes


def interior_levels(m, mx, mean, std):
    mu_i = Fraction(N * mean - m - mx, INTERIOR)
    var_left = (
        Fraction(N * std * std)
        - Fraction(m - mean) ** 2
        - Fraction(mx - mean) ** 2
        - INTERIOR * (mu_i - mean) ** 2
    )
    delta = math.sqrt(float(var_left) / INTERIOR)
    lo = float(mu_i) - delta
    hi = float(mu_i) + delta
    assert m < lo < hi < mx, (m, lo, hi, mx)
    return lo, hi


def sequence(m, mx, lo, hi):
    seq = [hi, hi, lo, lo, m, lo, lo, hi, hi, mx]
    seq += [lo, lo, hi, hi] * 7
    seq += [lo, hi]
    assert len(seq) == N and seq.count(lo) == 19 and seq.count(hi) == 19
    return seq


def quantize(seq, m, mx, mean):
    total = N * mean * BYTES_PER_KBPS_SECOND
    by = [int(math.floor(v * BYTES_PER_KBPS_SECOND)) for v in seq]
    deficit = total - sum(by)
    assert 0 <= deficit <= INTERIOR, deficit
    for i in range(N):
        if deficit == 0:
            break
        if seq[i] in (m, mx):
            continue
        by[i] += 1
        deficit -= 1
    assert sum(by) == total
    return by


def exact_stats(by):
    kbps = [Fraction(b, BYTES_PER_KBPS_SECOND) for b in by]
    mean = sum(kbps) / N
    var = sum((k - mean) ** 2 for k in kbps) / N
    std = math.sqrt(var)
    return min(kbps), max(kbps), mean, std


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "data", "traces")
    os.makedirs(out_dir, exist_ok=True)
    print("// route, min_kbps, max_kbps, mean_kbps, std_kbps")
    for route, m, mx, mean, std in ROUTES:
        lo, hi = interior_levels(m, mx, mean, std)
        by = quantize(sequence(m, mx, lo, hi), m, mx, mean)
        path = os.path.join(out_dir, route + ".log")
        with open(path, "w") as f:
            for i, b in enumerate(by):
                f.write(f"{(i + 1) * 1000} {b}\n")
        emin, emax, emean, estd = exact_stats(by)
        assert (emin, emax, emean) == (m, mx, mean)
        print(f'{{"{route}", {m}.0, {mx}.0, {mean}.0, {estd!r}}},')


if __name__ == "__main__":
    main()
