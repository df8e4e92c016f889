"""Simulators producing the scalar output sequences the estimator consumes.

Four system classes: discrete-time single integrators coupled through a graph
matrix, the same network sampled from continuous time, and both variants with
identical higher-dimensional linear agents at the nodes. Powers of the system
matrix are never formed; every rollout is an iterated matrix-vector product,
and networked rollouts work blockwise so the Kronecker-stacked matrix is
never materialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
import scipy.linalg

from .graphs import as_array

__all__ = [
    "DT",
    "CT",
    "ObservationSetup",
    "NodeDynamics",
    "OutputSequence",
    "SimulationOverflowError",
    "matrix_exponential",
    "simulate_dt",
    "simulate_dt_networked",
    "simulate_ct_sampled",
    "simulate_ct_networked",
    "random_setup",
    "write_sequence",
    "read_sequence",
]

DT = "dt"
CT = "ct"
TimeMode = Literal["dt", "ct"]


class SimulationOverflowError(OverflowError):
    """The floating range was exhausted mid-rollout.

    ``index`` is the first step whose state was non-finite; ``partial`` holds
    the outputs recorded before that step.
    """

    def __init__(self, message: str, index: int, partial):
        super().__init__(message)
        self.index = int(index)
        self.partial = np.asarray(partial, dtype=float)


@dataclass(frozen=True, eq=False)
class ObservationSetup:
    """Initial condition x0 and output weighting c for one rollout."""

    x0: np.ndarray
    c: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if x0.ndim != 1 or c.ndim != 1 or x0.shape != c.shape:
            raise ValueError(
                f"x0 and c must be equal-length vectors, got {x0.shape} and {c.shape}"
            )
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.x0.shape[0]


def random_setup(n: int, seed=None, observed=None, observe_weights=None) -> ObservationSetup:
    """Draw ``x0 ~ Uniform[0,1)^n`` and build the output weighting.

    ``observed`` selects nodes: a single index or a sequence of indices gives
    ``c`` with ones (or ``observe_weights``) at those positions; ``None``
    draws a fully random ``c ~ Uniform[0,1)^n`` after ``x0``.
    """
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(0.0, 1.0, n)
    if observed is None:
        c = rng.uniform(0.0, 1.0, n)
    else:
        idx = np.atleast_1d(np.asarray(observed, dtype=int))
        if idx.size == 0 or np.any(idx < 0) or np.any(idx >= n):
            raise ValueError(f"observed nodes {idx.tolist()} out of range for n={n}")
        w = np.ones(idx.size) if observe_weights is None else np.asarray(observe_weights, float)
        if w.shape != idx.shape:
            raise ValueError("one weight per observed node required")
        c = np.zeros(n)
        np.add.at(c, idx, w)
    return ObservationSetup(x0=x0, c=c, seed=seed if isinstance(seed, int) else None)


@dataclass(frozen=True, eq=False)
class NodeDynamics:
    """Identical per-agent dynamics: state matrix A, input direction beta, readout gamma."""

    A: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        beta = np.atleast_1d(np.asarray(self.beta, dtype=float))
        gamma = np.atleast_1d(np.asarray(self.gamma, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got {A.shape}")
        if beta.shape != (A.shape[0],) or gamma.shape != (A.shape[0],):
            raise ValueError("beta and gamma must match the state dimension of A")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @classmethod
    def trivial(cls) -> "NodeDynamics":
        """Scalar single integrator: d=1, A=0, beta=gamma=1."""
        return cls(A=np.zeros((1, 1)), beta=np.ones(1), gamma=np.ones(1))

    @classmethod
    def random_symmetric(cls, d: int, seed=None) -> "NodeDynamics":
        """Symmetric A with Uniform[0,1) entries (lower triangle mirrored), beta, gamma ~ Uniform[0,1)^d."""
        rng = np.random.default_rng(seed)
        M = rng.uniform(0.0, 1.0, (d, d))
        A = np.tril(M) + np.tril(M, -1).T
        return cls(A=A, beta=rng.uniform(0.0, 1.0, d), gamma=rng.uniform(0.0, 1.0, d))


@dataclass(eq=False)
class OutputSequence:
    """A finite scalar output record y[0..K-1] with its timing metadata."""

    values: np.ndarray
    mode: TimeMode = DT
    tau: float | None = None
    n_hint: int | None = None

    def __post_init__(self):
        self.values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("values must be a non-empty 1-d array")
        if self.mode not in (DT, CT):
            raise ValueError(f"mode must be {DT!r} or {CT!r}, got {self.mode!r}")
        if self.mode == CT:
            if self.tau is None or not self.tau > 0:
                raise ValueError("continuous-time sequences need a sampling period tau > 0")
            self.tau = float(self.tau)
        else:
            self.tau = None

    def __len__(self) -> int:
        return self.values.shape[0]


# =========================================================================
# Core rollouts
# =========================================================================


def matrix_exponential(M, t: float = 1.0) -> np.ndarray:
    """Dense ``e^{M t}`` by scaling-and-squaring with a Pade approximant.

    Thin wrapper over scipy's expm (Al-Mohy/Higham order selection with
    norm-based scaling), plus explicit finiteness checks so overflow surfaces
    as an error instead of silent inf entries.
    """
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    if not np.isfinite(t):
        raise ValueError(f"non-finite time {t}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    E = scipy.linalg.expm(A * float(t))
    if not np.all(np.isfinite(E)):
        raise OverflowError("matrix exponential exceeded the floating range")
    return E


def _setup_arrays(G, setup: ObservationSetup):
    A = as_array(G)
    n = A.shape[0]
    if setup.n != n:
        raise ValueError(f"matrix is {n}x{n} but the setup has {setup.n} components")
    return A, setup.x0.copy(), setup.c


def _rollout(P, x0, c, K, mode, tau, n_hint) -> OutputSequence:
    # Iterated matvec; P^k is never formed. The state accumulates in extended
    # precision where the platform has one (x86 long double), so each emitted
    # double carries only its final rounding instead of K steps of drift; on
    # platforms where long double is double this degrades gracefully.
    if K < 1:
        raise ValueError(f"need at least one step, got K={K}")
    Pl = P.astype(np.longdouble)
    cl = c.astype(np.longdouble)
    x = x0.astype(np.longdouble)
    ys = np.empty(K)
    for k in range(K):
        ys[k] = float(cl @ x)
        if not (np.all(np.isfinite(x)) and np.isfinite(ys[k])):
            raise SimulationOverflowError(
                f"state overflowed the floating range at step {k}", index=k, partial=ys[:k]
            )
        if k + 1 < K:
            x = Pl @ x
    return OutputSequence(ys, mode=mode, tau=tau, n_hint=n_hint)


def simulate_dt(G, setup: ObservationSetup, K: int) -> OutputSequence:
    """y[k] = c^T G^k x0 for k = 0..K-1."""
    A, x0, c = _setup_arrays(G, setup)
    return _rollout(A, x0, c, K, DT, None, A.shape[0])


def simulate_dt_networked(G, node: NodeDynamics, setup: ObservationSetup, K: int) -> OutputSequence:
    """Networked rollout of identical agents, blockwise.

    With agent states as rows of an (n, d) array X, one step of the stacked
    system ``I_n (x) A + G (x) I_d`` is ``X <- X A^T + G X`` and the output is
    ``c^T X gamma``; initial state is ``outer(x0, beta)``.
    """
    A, x0, c = _setup_arrays(G, setup)
    if K < 1:
        raise ValueError(f"need at least one step, got K={K}")
    Al = A.astype(np.longdouble)
    AnT = node.A.T.astype(np.longdouble)
    gl = node.gamma.astype(np.longdouble)
    cl = c.astype(np.longdouble)
    X = np.outer(x0, node.beta).astype(np.longdouble)
    ys = np.empty(K)
    for k in range(K):
        ys[k] = float(cl @ (X @ gl))
        if not (np.all(np.isfinite(X)) and np.isfinite(ys[k])):
            raise SimulationOverflowError(
                f"state overflowed the floating range at step {k}", index=k, partial=ys[:k]
            )
        if k + 1 < K:
            X = X @ AnT + Al @ X
    return OutputSequence(ys, mode=DT, tau=None, n_hint=A.shape[0])


def simulate_ct_sampled(G, setup: ObservationSetup, tau: float, K: int) -> OutputSequence:
    """y[k] = c^T e^{G k tau} x0: one matrix exponential, then the DT rollout path."""
    if not tau > 0:
        raise ValueError(f"sampling period must be positive, got tau={tau}")
    A, x0, c = _setup_arrays(G, setup)
    P = matrix_exponential(A, tau)
    return _rollout(P, x0, c, K, CT, float(tau), A.shape[0])


def simulate_ct_networked(
    G, node: NodeDynamics, setup: ObservationSetup, tau: float, K: int
) -> OutputSequence:
    """Sampled networked continuous-time output.

    Because ``I (x) A`` and ``G (x) I`` commute, the sampled output factors
    exactly into (network part) * (node part); each factor is iterated with
    its own one-step propagator.
    """
    if not tau > 0:
        raise ValueError(f"sampling period must be positive, got tau={tau}")
    if K < 1:
        raise ValueError(f"need at least one step, got K={K}")
    A, x0, c = _setup_arrays(G, setup)
    P = matrix_exponential(A, tau).astype(np.longdouble)
    Q = matrix_exponential(node.A, tau).astype(np.longdouble)
    u = x0.astype(np.longdouble)
    v = node.beta.astype(np.longdouble)
    cl = c.astype(np.longdouble)
    gl = node.gamma.astype(np.longdouble)
    ys = np.empty(K)
    for k in range(K):
        ys[k] = float((cl @ u) * (gl @ v))
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v)) and np.isfinite(ys[k])):
            raise SimulationOverflowError(
                f"state overflowed the floating range at step {k}", index=k, partial=ys[:k]
            )
        if k + 1 < K:
            u = P @ u
            v = Q @ v
    return OutputSequence(ys, mode=CT, tau=float(tau), n_hint=A.shape[0])


# =========================================================================
# File formats
# =========================================================================


def write_sequence(seq: OutputSequence, path, sidecar=None, seed=None) -> None:
    """CSV with header ``k,y`` (discrete) or ``t,y`` (continuous, t = k tau),
    plus a JSON sidecar ``{mode, tau, n_hint, seed}`` next to it."""
    path = Path(path)
    if seq.mode == DT:
        lines = ["k,y"] + [f"{k},{y:.17g}" for k, y in enumerate(seq.values)]
    else:
        lines = ["t,y"] + [f"{k * seq.tau:.17g},{y:.17g}" for k, y in enumerate(seq.values)]
    path.write_text("\n".join(lines) + "\n")
    meta = {
        "schema": 1,
        "mode": seq.mode,
        "tau": seq.tau,
        "n_hint": seq.n_hint,
        "seed": seed,
    }
    sidecar = Path(sidecar) if sidecar is not None else path.with_suffix(".json")
    sidecar.write_text(json.dumps(meta, indent=2) + "\n")


def read_sequence(path, sidecar=None) -> OutputSequence:
    path = Path(path)
    sidecar = Path(sidecar) if sidecar is not None else path.with_suffix(".json")
    meta = json.loads(sidecar.read_text())
    rows = path.read_text().strip().splitlines()
    values = np.array([float(line.split(",")[1]) for line in rows[1:]])
    return OutputSequence(values, mode=meta["mode"], tau=meta.get("tau"), n_hint=meta.get("n_hint"))
