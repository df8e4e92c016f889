"""Shared constructors for seeded test systems.

The observability tests need matrices whose spectrum is known exactly and
whose unobservable modes are placed deliberately: an orthogonally similar
diagonal matrix hides mode ``i`` exactly when the output weighting has a zero
coordinate in the eigenbasis. Eigenvalues come from a jittered ladder so
every pair is well separated and no conditioning accident can blur the
pass/fail line.
"""

from __future__ import annotations

import numpy as np

from spectral_scope import ObservationSetup

__all__ = ["orthogonal", "spaced_eigenvalues", "hidden_mode_system"]


def orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random orthogonal matrix via QR with sign-fixed diagonal."""
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def spaced_eigenvalues(n: int, rng: np.random.Generator) -> np.ndarray:
    """n distinct reals on a jittered ladder across [-1.5, 1.5] (gaps >= 0.2)."""
    return np.linspace(-1.5, 1.5, n) + rng.uniform(-0.05, 0.05, n)


def hidden_mode_system(n: int, rng: np.random.Generator, hidden_count: int = 1):
    """A diagonalizable system with exactly ``hidden_count`` unobservable modes.

    Returns ``(G, setup, eigenvalues, hidden_indices)`` where
    ``G = Q diag(eigenvalues) Q^T`` and the output weighting is zero along the
    hidden eigenvectors and O(1) along every other one; the initial state is
    redrawn until every retained mode carries an O(1) weight too, so the
    constructed case has exactly the advertised invisible set.
    """
    D = spaced_eigenvalues(n, rng)
    Q = orthogonal(n, rng)
    G = Q @ np.diag(D) @ Q.T
    hidden = np.sort(rng.choice(n, size=hidden_count, replace=False))
    v = rng.uniform(0.5, 1.5, n) * rng.choice([-1.0, 1.0], n)
    v[hidden] = 0.0
    c = Q @ v
    for _ in range(100):
        x0 = rng.uniform(0.5, 1.5, n)
        if np.min(np.abs(Q.T @ x0)) >= 0.1:
            break
    return G, ObservationSetup(x0=x0, c=c), D, hidden
