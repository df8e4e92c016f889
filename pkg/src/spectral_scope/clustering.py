"""Grouping and conjugate-pairing helpers for finite complex spectra.

Shared by the estimator (merging numerically split polynomial roots) and the
oracle (grouping repeated eigenvalues). All tolerances are relative to
max(1, |value|) so unit-scale and large spectra behave alike.
"""

from __future__ import annotations

import numpy as np

__all__ = ["cluster_indices", "cluster_complex", "enforce_conjugate_pairs"]


def _within(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def cluster_indices(values, tol: float) -> list[np.ndarray]:
    """Group indices of ``values`` whose entries sit within ``tol`` of each other.

    Merging is transitive (union-find), so chains of nearby points collapse
    into a single group. Groups come back ordered by first member index.
    """
    vals = np.asarray(values, dtype=complex)
    parent = list(range(len(vals)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if _within(complex(vals[i]), complex(vals[j]), tol):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(len(vals)):
        groups.setdefault(find(i), []).append(i)
    return [np.array(groups[r], dtype=int) for r in sorted(groups)]


def cluster_complex(values, tol: float) -> list[tuple[complex, int]]:
    """Merge nearby complex values into (centroid, count) pairs.

    Pairs are sorted by descending real part, then descending imaginary part,
    which keeps conjugate partners adjacent in the output.
    """
    vals = np.asarray(values, dtype=complex)
    out = [(complex(vals[idx].mean()), len(idx)) for idx in cluster_indices(vals, tol)]
    out.sort(key=lambda vm: (-vm[0].real, -vm[0].imag))
    return out


def enforce_conjugate_pairs(
    pairs: list[tuple[complex, int]], tol: float
) -> list[tuple[complex, int]]:
    """Symmetrize (value, multiplicity) pairs of a real-coefficient spectrum.

    Near-real values snap onto the real axis; the rest are matched with their
    best conjugate partner and both are replaced by the exact conjugate pair
    of their average. Values without a partner pass through unchanged.
    """
    snapped: list[tuple[complex, int]] = []
    for v, m in pairs:
        if abs(v.imag) <= tol * max(1.0, abs(v)):
            snapped.append((complex(v.real, 0.0), m))
        else:
            snapped.append((complex(v), m))

    pos = [i for i, (v, _) in enumerate(snapped) if v.imag > 0]
    neg = [i for i, (v, _) in enumerate(snapped) if v.imag < 0]
    out = list(snapped)
    used: set[int] = set()
    for i in pos:
        v, m = snapped[i]
        best, best_d = None, np.inf
        for j in neg:
            if j in used:
                continue
            d = abs(v - snapped[j][0].conjugate())
            if d < best_d:
                best, best_d = j, d
        if best is not None and best_d <= tol * max(1.0, abs(v)):
            used.add(best)
            avg = (v + snapped[best][0].conjugate()) / 2.0
            out[i] = (avg, m)
            out[best] = (avg.conjugate(), snapped[best][1])
    out.sort(key=lambda vm: (-vm[0].real, -vm[0].imag))
    return out
