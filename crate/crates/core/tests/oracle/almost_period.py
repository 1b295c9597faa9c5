"""Empirical window length for eps-translation numbers of zeta.

Rectangle [1.5, 2] x [-1, 1] sampled on a 3 x 5 grid; tau qualifies when
max |zeta(s + i tau) - zeta(s)| < eps (grid max plus one parabolic step in
t, as in the scans). Coarse grid step 0.05 over [0, 1e4]; cells whose
value minus L * H / 2 is below eps, with L = |zeta'(1.5)|, are refined at
step 0.001. Prints the largest gap between consecutive qualifying tau
(counting from tau = 0) and the number of qualifying clusters.
"""
import math

import mpmath as mp
import numpy as np

from zeta_np import hurwitz_shifted

EPS_LIST = (0.1, 0.5)
RANGE = 1e4
C = np.linspace(1.5, 2.0, 3)
T = np.linspace(-1.0, 1.0, 5)
PTS = np.array([c + 1j * t for c in C for t in T])
H_T = T[1] - T[0]
BASE = hurwitz_shifted(PTS, [0.0])[0]
L = float(-mp.zeta(1.5, derivative=1))


def j_values(taus):
    vals = hurwitz_shifted(PTS, taus)
    f = np.abs(vals - BASE[None, :])
    out = f.max(axis=1)
    for r in range(len(taus)):
        row = f[r]
        b = int(np.argmax(row))
        ci, ti = divmod(b, len(T))
        if 0 < ti < len(T) - 1:
            fm, f0, fp = row[b - 1], row[b], row[b + 1]
            den = fm - 2 * f0 + fp
            if den < 0:
                d = 0.5 * H_T * (fm - fp) / den
                s = C[ci] + 1j * (T[ti] + d)
                v = hurwitz_shifted([s], [taus[r]])[0, 0] - hurwitz_shifted([s], [0.0])[0, 0]
                out[r] = max(out[r], abs(v))
    return out


def main():
    coarse_h, fine_h = 0.05, 0.001
    taus = np.arange(int(RANGE / coarse_h) + 1) * coarse_h
    J = np.concatenate([j_values(taus[i:i + 4000]) for i in range(0, len(taus), 4000)])
    print(f"L={L!r} min_coarse_J_over_1={J[taus >= 1].min()!r}")
    for eps in EPS_LIST:
        cells = np.nonzero(J - L * coarse_h / 2 < eps)[0]
        fine_ks = set()
        for k in cells:
            lo = int(round((taus[k] - coarse_h / 2) / fine_h))
            hi = int(round((taus[k] + coarse_h / 2) / fine_h))
            fine_ks.update(i for i in range(lo, hi + 1) if 0 <= i and i * fine_h <= RANGE)
        fine = np.array(sorted(fine_ks)) * fine_h
        jf = np.concatenate([j_values(fine[i:i + 4000]) for i in range(0, len(fine), 4000)])
        hits = fine[jf < eps].tolist()
        gaps = np.diff([0.0] + hits + [RANGE])
        clusters = 1 + int(np.sum(np.diff(hits) > 0.5)) if hits else 0
        print(f"eps={eps} refined_cells={len(cells)} hits={len(hits)} clusters={clusters} "
              f"max_gap={gaps.max()!r} (ends included)")
        print("  largest gaps:", sorted(round(float(g), 3) for g in np.sort(gaps)[-5:]))

if __name__ == "__main__":
    main()
