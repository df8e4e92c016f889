"""Hankel-based recovery of a network spectrum from one scalar output record.

The pipeline: fill the largest square Hankel matrix ``H[i, j] = y[i + j]``
with (optionally geometrically prescaled) outputs, detect its numerical rank
r, solve the r x r Hankel system for the coefficients of a monic degree-r
polynomial, read the roots off its balanced companion matrix, merge
numerically split roots into (value, multiplicity) pairs, and, for sampled
continuous-time data, map each root through the principal complex logarithm.
Networked variants first strip the known identical per-agent dynamics from
the outputs, after which the plain pipeline applies unchanged.

The detected rank equals the number of eigenvalues that are actually present
in the output (weighted by how much of each Jordan chain the initial state
and the output weighting excite), so unobservable modes simply never appear:
no model order is assumed beyond an optional upper bound ``n_hint``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .clustering import cluster_complex, enforce_conjugate_pairs
from .dynamics import CT, DT, NodeDynamics, OutputSequence, matrix_exponential

__all__ = [
    "EstimatorOptions",
    "HankelAnalysis",
    "CharacteristicPoly",
    "SpectrumEstimate",
    "SigmaSequence",
    "OnlineRankDetection",
    "SingularDeconvolutionError",
    "LogSingularRootError",
    "InsufficientDataError",
    "default_rank_tolerance",
    "geometric_prescale",
    "build_hankel",
    "detect_rank_online",
    "solve_coefficients",
    "roots_with_multiplicity",
    "estimate_dt_spectrum",
    "nu_sequence",
    "deconvolve_sigma",
    "deconvolve_sigma_ct",
    "estimate_networked_dt_spectrum",
    "estimate_ct_spectrum",
]

RANK_TOL_BASE = 1e-10
DEFAULT_CLUSTER_TOL = 1e-6
ILL_CONDITION_LIMIT = 1e12
PRESCALE_TRIGGER = 1e6
NU_ZERO_RTOL = 1e-12
ETA_ZERO_TOL = 1e-12
ALIAS_MARGIN = 1e-9


class SingularDeconvolutionError(ValueError):
    """The node factor is numerically singular; the agent dynamics cannot be stripped."""


class LogSingularRootError(ValueError):
    """A recovered discrete root sits at zero, where no finite continuous eigenvalue exists."""


class InsufficientDataError(ValueError):
    """Fewer observations than the detected rank requires for the coefficient solve."""


@dataclass
class EstimatorOptions:
    """Tunables for the spectrum pipelines; ``None`` picks the documented default.

    rank_tolerance
        Relative singular-value threshold for rank detection. Default
        ``1e-10 * max(1, r_max)``.
    cluster_tol
        Roots within ``cluster_tol * max(1, |root|)`` of each other merge
        into one root with summed multiplicity. Default 1e-6; widen to ~1e-3
        when hunting defective eigenvalues, whose computed roots split at
        order ``eps^(1/multiplicity)``.
    prescale
        Geometric prescaling of the outputs. Default: on for continuous-time
        data, off for discrete-time unless ``max |y| > 1e6``.
    """

    rank_tolerance: float | None = None
    cluster_tol: float = DEFAULT_CLUSTER_TOL
    prescale: bool | None = None


def default_rank_tolerance(r_max: int) -> float:
    """Relative threshold used when none is supplied: 1e-10 * max(1, r_max)."""
    return RANK_TOL_BASE * max(1, r_max)


@dataclass(eq=False)
class HankelAnalysis:
    """A square Hankel matrix of outputs with its SVD-based rank decision."""

    matrix: np.ndarray
    singular_values: np.ndarray
    rank: int
    rank_tolerance: float
    scale_rho: float
    y_scaled: np.ndarray
    y_raw: np.ndarray | None = None

    @property
    def r_max(self) -> int:
        return self.matrix.shape[0]


@dataclass(eq=False)
class CharacteristicPoly:
    """Monic polynomial whose roots are the recoverable eigenvalues.

    ``coefficients`` holds alpha_0 .. alpha_{degree-1} in ascending order;
    the leading coefficient is an implicit 1. ``residual`` is the relative
    norm of the solved Hankel system's defect and ``condition`` estimates
    the conditioning of that solve.
    """

    coefficients: np.ndarray
    degree: int
    residual: float
    condition: float
    # same coefficients kept in extended precision when the solve refined
    # them past double rounding; consumed by the root polish, never exported
    coefficients_hi: np.ndarray | None = None


@dataclass(eq=False)
class SpectrumEstimate:
    """Recovered eigenvalues with multiplicities plus solve diagnostics."""

    roots: list[tuple[complex, int]]
    mode: str = DT
    tau: float | None = None
    rank: int = 0
    residual: float = 0.0
    condition: float = 1.0
    scale_rho: float = 1.0
    warnings: list[str] = field(default_factory=list)

    def expanded(self) -> np.ndarray:
        """Roots repeated by multiplicity, as a flat complex array."""
        return np.array([v for v, m in self.roots for _ in range(m)], dtype=complex)

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "mode": self.mode,
            "tau": self.tau,
            "rank": self.rank,
            "residual": self.residual,
            "condition": self.condition if np.isfinite(self.condition) else None,
            "rho": self.scale_rho,
            "roots": [
                {"re": v.real, "im": v.imag, "multiplicity": m} for v, m in self.roots
            ],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SpectrumEstimate":
        return cls(
            roots=[(complex(r["re"], r["im"]), int(r["multiplicity"])) for r in d["roots"]],
            mode=d["mode"],
            tau=d.get("tau"),
            rank=int(d["rank"]),
            residual=float(d["residual"]),
            condition=float("inf") if d.get("condition") is None else float(d["condition"]),
            scale_rho=float(d.get("rho", 1.0)),
            warnings=list(d.get("warnings", [])),
        )


@dataclass(eq=False)
class SigmaSequence:
    """Single-integrator-equivalent outputs after the node dynamics are stripped."""

    values: np.ndarray


@dataclass(eq=False)
class OnlineRankDetection:
    """Result of streaming rank detection: rank, samples consumed, and the prefix read."""

    rank: int
    consumed: int
    stabilized: bool
    values: np.ndarray


def _sequence_values(y) -> np.ndarray:
    vals = y.values if isinstance(y, OutputSequence) else np.asarray(y, dtype=float)
    vals = np.atleast_1d(vals)
    if vals.ndim != 1 or vals.size < 1:
        raise ValueError("a non-empty 1-d sequence of outputs is required")
    return vals.astype(float, copy=False)


def geometric_prescale(values) -> tuple[float, np.ndarray]:
    """Scale out geometric growth: rho = max(1, max_k |y_k|^(1/max(k,1))).

    The scaled sequence ``y_k / rho^k`` has all recoverable roots divided by
    rho, so callers must multiply recovered roots back. Keeps the Hankel
    matrix of strongly unstable data away from the floating range edge.
    """
    v = np.asarray(values, dtype=float)
    exponents = 1.0 / np.maximum(np.arange(len(v)), 1)
    rho = float(max(1.0, np.max(np.abs(v) ** exponents)))
    if rho == 1.0:
        return 1.0, v.copy()
    return rho, v / rho ** np.arange(len(v))


def _hankel_rank(values: np.ndarray, size: int, rel_tol: float):
    H = scipy.linalg.hankel(values[:size], values[size - 1 : 2 * size - 1])
    s = np.linalg.svd(H, compute_uv=False)
    rank = int(np.count_nonzero(s > rel_tol * s[0])) if s.size and s[0] > 0 else 0
    return H, s, rank


def build_hankel(y, prescale: bool = False, rank_tolerance: float | None = None) -> HankelAnalysis:
    """Largest square Hankel matrix from K outputs, with numerical rank.

    The matrix has order ``r_max = floor((K + 1) / 2)`` so every entry
    ``y[i + j]`` exists; rank counts singular values above
    ``rank_tolerance * sigma_1`` (an all-zero sequence has rank 0).
    """
    values = _sequence_values(y)
    if prescale:
        rho, scaled = geometric_prescale(values)
    else:
        rho, scaled = 1.0, values.astype(float)
    r_max = (len(values) + 1) // 2
    tol = rank_tolerance if rank_tolerance is not None else default_rank_tolerance(r_max)
    H, s, rank = _hankel_rank(scaled, r_max, tol)
    return HankelAnalysis(
        matrix=H,
        singular_values=s,
        rank=rank,
        rank_tolerance=tol,
        scale_rho=rho,
        y_scaled=scaled,
        y_raw=values,
    )


def detect_rank_online(stream, n_hint: int | None = None, rank_tolerance: float | None = None) -> OnlineRankDetection:
    """Streaming rank detection: grow a k x k Hankel matrix one k at a time.

    Stops as soon as appending ``y[2k-1]`` and ``y[2k]`` fails to grow the
    rank, or once k reaches a known system size ``n_hint`` (consuming at most
    2 * n_hint samples, including the extra sample the coefficient solve
    needs when the rank is still full at the cap). If the stream dries up
    first, the best-effort rank is returned with ``stabilized=False``.
    """
    it = iter(stream)
    buf: list[float] = []

    def pull(count: int) -> bool:
        while len(buf) < count:
            try:
                buf.append(float(next(it)))
            except StopIteration:
                return False
        return True

    prev: int | None = None
    k = 1
    while True:
        if not pull(2 * k - 1):
            size = (len(buf) + 1) // 2
            rank = 0
            if size >= 1:
                tol = rank_tolerance if rank_tolerance is not None else default_rank_tolerance(size)
                _, _, rank = _hankel_rank(np.asarray(buf), size, tol)
            return OnlineRankDetection(rank, len(buf), False, np.asarray(buf, dtype=float))
        tol = rank_tolerance if rank_tolerance is not None else default_rank_tolerance(k)
        _, _, rk = _hankel_rank(np.asarray(buf[: 2 * k - 1]), k, tol)
        if prev is not None and rk == prev:
            return OnlineRankDetection(rk, len(buf), True, np.asarray(buf, dtype=float))
        if n_hint is not None and k >= n_hint:
            # the solve needs y[0..2r-1]; fetch the tail while the stream lasts
            got = pull(max(2 * rk, len(buf)))
            return OnlineRankDetection(rk, len(buf), got, np.asarray(buf, dtype=float))
        prev = rk
        k += 1


def _as_fraction(v) -> Fraction:
    # exact rational of a double or extended-precision scalar: the hi/lo
    # double pair captures up to 106 mantissa bits, enough for long double
    hi = float(v)
    lo = float(v - type(v)(hi)) if not isinstance(v, float) else 0.0
    return Fraction(hi) + Fraction(lo)


def _exact_residual(S: list[Fraction], r: int, x: np.ndarray) -> np.ndarray:
    """Residual of the scaled Hankel system in exact rational arithmetic.

    ``S[k]`` is the exactly scaled sample ``y[k] / rho^k`` as a rational, so
    the residual ``sum_j S[i+j] x_j + S[r+i]`` of a candidate solution x is
    exact up to the final cast back to float; that is what lets the
    refinement sweeps in solve_coefficients contract well past the naive
    eps*cond(H) floor, where the rounding of the scaled matrix entries would
    otherwise dominate.
    """
    xf = [_as_fraction(v) for v in x]
    out = np.empty(r)
    for i in range(r):
        acc = S[r + i]
        for j, xj in enumerate(xf):
            acc += S[i + j] * xj
        out[i] = float(acc)
    return out


_REFINE_SWEEPS = 6
_REFINE_SIZE_CAP = 64


def solve_coefficients(h: HankelAnalysis, y_scaled=None) -> CharacteristicPoly:
    """Solve ``H_r alpha = -(y[r..2r-1])`` for the monic polynomial coefficients.

    Uses the SVD pseudo-inverse truncated at the detected-rank tolerance
    (never an explicit inverse), then iterates the same truncated operator
    against exactly computed residuals; each sweep contracts the forward
    error by roughly eps * cond(H_r), so the coefficients come out close to
    the exact-arithmetic solution of the stored system even when the Hankel
    condition number is large. Reports the relative residual
    ``||H_r alpha + y_rhs|| / ||y_rhs||`` plus a condition estimate. Rank 0
    yields the empty polynomial.
    """
    r = h.rank
    y = np.asarray(y_scaled if y_scaled is not None else h.y_scaled, dtype=float)
    if r == 0:
        return CharacteristicPoly(np.zeros(0), 0, 0.0, 1.0)
    if len(y) < 2 * r:
        raise InsufficientDataError(f"need {2 * r} samples to solve at rank {r}, have {len(y)}")
    Hr = h.matrix[:r, :r]
    rhs = -y[r : 2 * r]
    U, s, Vt = np.linalg.svd(Hr)
    keep = s > h.rank_tolerance * s[0] if s[0] > 0 else np.zeros_like(s, dtype=bool)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]

    def apply_pinv(v: np.ndarray) -> np.ndarray:
        return Vt.T @ (inv * (U.T @ v))

    alpha = apply_pinv(rhs)
    alpha_hi = None
    raw = h.y_raw if h.y_raw is not None else y
    if (
        np.any(keep)
        and r <= _REFINE_SIZE_CAP
        and np.all(np.isfinite(alpha))
        and np.all(np.isfinite(raw[: 2 * r]))
    ):
        rho_f = _as_fraction(float(h.scale_rho))
        S = [Fraction(float(raw[k])) / rho_f**k for k in range(2 * r)]
        best, best_norm = np.asarray(alpha, dtype=np.longdouble), float("inf")
        x = best
        for sweep in range(_REFINE_SWEEPS + 1):
            res = _exact_residual(S, r, x)
            rnorm = float(np.linalg.norm(res))
            if rnorm < best_norm:
                best, best_norm = x, rnorm
            if rnorm == 0.0 or sweep == _REFINE_SWEEPS:
                break
            x = x - apply_pinv(res).astype(np.longdouble)
            if not np.all(np.isfinite(x.astype(float))):
                break
        alpha_hi = best
        alpha = best.astype(float)
    defect = float(np.linalg.norm(Hr @ alpha - rhs))
    rhs_norm = float(np.linalg.norm(rhs))
    residual = defect / rhs_norm if rhs_norm > 0 else defect
    smallest_kept = s[keep][-1] if np.any(keep) else 0.0
    condition = float(s[0] / smallest_kept) if smallest_kept > 0 else float("inf")
    return CharacteristicPoly(alpha, r, residual, condition, alpha_hi)


def _polish_roots(monic: np.ndarray, raw: np.ndarray) -> np.ndarray:
    """A few guarded Newton steps per root, evaluated in extended precision.

    The companion-matrix eigensolver is backward stable in doubles; when the
    coefficients themselves are accurate (see solve_coefficients) the roots
    can be tightened further by Newton iteration with the polynomial and its
    derivative evaluated via Horner in long double. Steps that fail to shrink
    |p(z)| are rejected, which keeps clustered (near-multiple) roots where the
    eigensolver put them.
    """
    coeff = monic.astype(np.clongdouble)
    deriv = coeff[:-1] * np.arange(len(coeff) - 1, 0, -1, dtype=np.clongdouble)

    def horner(c: np.ndarray, z: np.clongdouble) -> np.clongdouble:
        acc = c[0]
        for ck in c[1:]:
            acc = acc * z + ck
        return acc

    out = np.empty(len(raw), dtype=complex)
    for i, z0 in enumerate(raw):
        z = np.clongdouble(z0)
        pz = abs(horner(coeff, z))
        for _ in range(3):
            dz = horner(deriv, z)
            if dz == 0 or pz == 0:
                break
            step = horner(coeff, z) / dz
            cand = z - step
            pc = abs(horner(coeff, cand))
            if not np.isfinite(float(pc)) or pc >= pz:
                break
            z, pz = cand, pc
        out[i] = complex(z)
    return out


def roots_with_multiplicity(
    p: CharacteristicPoly,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    scale_rho: float = 1.0,
    mode: str = DT,
    tau: float | None = None,
) -> SpectrumEstimate:
    """Roots of the monic polynomial as (value, multiplicity) pairs.

    Roots come from the eigenvalues of the balanced companion matrix with a
    short Newton polish; roots within ``cluster_tol * max(1, |root|)`` of
    each other merge into their centroid with summed multiplicity, conjugate
    symmetry is made exact, and any prescaling is undone by multiplying
    through by ``scale_rho``.
    """
    if p.degree == 0:
        return SpectrumEstimate([], mode, tau, 0, p.residual, p.condition, scale_rho)
    monic = np.concatenate(([1.0], p.coefficients[::-1]))
    if p.coefficients_hi is not None:
        monic_hi = np.concatenate((np.ones(1, dtype=np.longdouble), p.coefficients_hi[::-1]))
    else:
        monic_hi = monic
    raw = _polish_roots(monic_hi, np.atleast_1d(np.roots(monic)))
    pairs = cluster_complex(raw, cluster_tol)
    pairs = enforce_conjugate_pairs(pairs, cluster_tol)
    if scale_rho != 1.0:
        pairs = [(v * scale_rho, m) for v, m in pairs]
    return SpectrumEstimate(list(pairs), mode, tau, p.degree, p.residual, p.condition, scale_rho)


def estimate_dt_spectrum(y, opts: EstimatorOptions | None = None) -> SpectrumEstimate:
    """Full discrete-time pipeline: Hankel, rank, coefficients, clustered roots.

    Accepts an OutputSequence (must be discrete-time) or a plain array.
    An identically zero sequence gives rank 0 and an empty spectrum, which is
    a valid answer, not an error.
    """
    if isinstance(y, OutputSequence) and y.mode != DT:
        raise ValueError("discrete-time sequence required; use estimate_ct_spectrum")
    opts = opts or EstimatorOptions()
    values = _sequence_values(y)
    if opts.prescale is not None:
        prescale = opts.prescale
    else:
        prescale = bool(np.max(np.abs(values)) > PRESCALE_TRIGGER)
    h = build_hankel(values, prescale=prescale, rank_tolerance=opts.rank_tolerance)
    poly = solve_coefficients(h)
    est = roots_with_multiplicity(poly, opts.cluster_tol, h.scale_rho, DT, None)
    if est.condition > ILL_CONDITION_LIMIT:
        est.warnings.append("ill-conditioned coefficient solve; roots may be inaccurate")
    return est


# =========================================================================
# Networked variants
# =========================================================================


def nu_sequence(node: NodeDynamics, K: int, mode: str = DT, tau: float | None = None) -> np.ndarray:
    """Node impulse weights: gamma^T A^k beta (discrete) or gamma^T e^{A k tau} beta (sampled)."""
    if K < 1:
        raise ValueError(f"need at least one weight, got K={K}")
    if mode == CT:
        if tau is None or not tau > 0:
            raise ValueError("sampled node weights need tau > 0")
        P = matrix_exponential(node.A, tau)
    elif mode == DT:
        P = node.A
    else:
        raise ValueError(f"mode must be {DT!r} or {CT!r}, got {mode!r}")
    v = node.beta.astype(np.longdouble)
    Pl = P.astype(np.longdouble)
    gl = node.gamma.astype(np.longdouble)
    out = np.empty(K)
    for k in range(K):
        out[k] = float(gl @ v)
        if k + 1 < K:
            v = Pl @ v
    return out


def _binomial_table(K: int) -> list[list[int]]:
    # Pascal recurrence over exact integers, no overflow at any K
    C: list[list[int]] = [[1]]
    for k in range(1, K):
        prev = C[-1]
        C.append([1] + [prev[j - 1] + prev[j] for j in range(1, k)] + [1])
    return C


def deconvolve_sigma(y, nu) -> SigmaSequence:
    """Strip discrete-time node dynamics from the outputs.

    Solves the lower-triangular system ``sum_s binom(k, s) nu_{k-s} sigma_s
    = y_k`` by forward substitution carried in exact rational arithmetic
    (the binomial weights reach ~1e5 by k = 20 and would otherwise amplify
    rounding ahead of the Hankel stage), invertible exactly when ``nu_0 =
    gamma^T beta`` is nonzero. For the trivial single-integrator node
    (nu = 1, 0, 0, ...) this returns ``y`` itself, bit for bit.
    """
    values = _sequence_values(y)
    nu = np.asarray(nu, dtype=float)
    K = len(values)
    if len(nu) < K:
        raise ValueError(f"need {K} node weights, got {len(nu)}")
    scale = float(np.max(np.abs(nu[:K])))
    if abs(nu[0]) <= NU_ZERO_RTOL * scale:
        raise SingularDeconvolutionError(
            f"nu_0 = gamma^T beta = {nu[0]:.3e} is numerically zero; "
            "the node dynamics cannot be deconvolved"
        )
    if not np.all(np.isfinite(values)):
        raise ValueError("outputs contain non-finite values; cannot deconvolve")
    C = _binomial_table(K)
    nu_f = [Fraction(v) for v in nu[:K].tolist()]
    y_f = [Fraction(v) for v in values.tolist()]
    sigma_f: list[Fraction] = []
    sigma = np.empty(K)
    for k in range(K):
        head = sum((C[k][s] * nu_f[k - s] * sigma_f[s] for s in range(k)), Fraction(0))
        sk = (y_f[k] - head) / nu_f[0]
        sigma_f.append(sk)
        sigma[k] = float(sk)
    return SigmaSequence(sigma)


def deconvolve_sigma_ct(y, nu) -> SigmaSequence:
    """Strip sampled continuous-time node dynamics.

    In continuous time the node factor multiplies the network factor sample
    by sample (the two Kronecker terms commute), so stripping it is pointwise
    division; every ``nu_k`` must be nonzero.
    """
    values = _sequence_values(y)
    nu = np.asarray(nu, dtype=float)
    K = len(values)
    if len(nu) < K:
        raise ValueError(f"need {K} node weights, got {len(nu)}")
    scale = float(np.max(np.abs(nu[:K])))
    bad = np.abs(nu[:K]) <= NU_ZERO_RTOL * max(scale, np.finfo(float).tiny)
    if scale == 0.0 or np.any(bad):
        raise SingularDeconvolutionError(
            f"node factor vanishes at sample {int(np.argmax(bad))}; cannot deconvolve"
        )
    return SigmaSequence(values / nu[:K])


def estimate_networked_dt_spectrum(
    y, node: NodeDynamics, opts: EstimatorOptions | None = None
) -> SpectrumEstimate:
    """Discrete-time networked pipeline: deconvolve the node factor, then estimate."""
    if isinstance(y, OutputSequence) and y.mode != DT:
        raise ValueError("discrete-time sequence required; use estimate_ct_spectrum")
    values = _sequence_values(y)
    nu = nu_sequence(node, len(values), DT)
    sigma = deconvolve_sigma(values, nu)
    inner = OutputSequence(
        sigma.values, mode=DT, n_hint=y.n_hint if isinstance(y, OutputSequence) else None
    )
    return estimate_dt_spectrum(inner, opts)


def estimate_ct_spectrum(
    y: OutputSequence, node: NodeDynamics | None = None, opts: EstimatorOptions | None = None
) -> SpectrumEstimate:
    """Spectrum from sampled continuous-time outputs.

    Runs the discrete pipeline on the samples (deconvolving the node factor
    first when one is supplied); the recovered roots are ``eta_i =
    e^{lambda_i tau}`` and are mapped back through the principal complex
    logarithm. Roots within 1e-12 of zero are rejected as log-singular.
    Sampling can only distinguish imaginary parts inside ``(-pi/tau,
    pi/tau]``; any recovered eigenvalue at that boundary gets an ``aliasing``
    warning rather than a silent unwrap.
    """
    if not isinstance(y, OutputSequence) or y.mode != CT:
        raise ValueError("continuous-time OutputSequence required")
    opts = opts or EstimatorOptions()
    tau = y.tau
    values = y.values
    if node is not None:
        nu = nu_sequence(node, len(values), CT, tau)
        values = deconvolve_sigma_ct(values, nu).values
    prescale = opts.prescale if opts.prescale is not None else True
    h = build_hankel(values, prescale=prescale, rank_tolerance=opts.rank_tolerance)
    poly = solve_coefficients(h)
    eta = roots_with_multiplicity(poly, opts.cluster_tol, h.scale_rho, DT, None)
    roots: list[tuple[complex, int]] = []
    for v, m in eta.roots:
        if abs(v) <= ETA_ZERO_TOL:
            raise LogSingularRootError(
                f"recovered discrete root {v} is numerically zero; "
                "no finite continuous eigenvalue maps to it"
            )
        roots.append((complex(np.log(complex(v)) / tau), m))
    roots.sort(key=lambda vm: (-vm[0].real, -vm[0].imag))
    warnings: list[str] = []
    if eta.condition > ILL_CONDITION_LIMIT:
        warnings.append("ill-conditioned coefficient solve; roots may be inaccurate")
    boundary = (np.pi / tau) * (1.0 - ALIAS_MARGIN)
    if any(abs(v.imag) >= boundary for v, _ in roots):
        warnings.append(
            f"aliasing: an eigenvalue sits at the principal-strip boundary |Im| = pi/tau;"
            f" frequencies beyond {np.pi / tau:.6g} are indistinguishable at this tau"
        )
    return SpectrumEstimate(
        roots, CT, tau, eta.rank, eta.residual, eta.condition, eta.scale_rho, warnings
    )
