"""Sparse principal component analysis as a curvature-shifting testbed.

The problem

    minimize over the unit ball   kappa |x|_1 + eta |x|^2 / 2 - x' Sigma x / 2

splits into ``f1 = kappa |.|_1 + eta |.|^2/2 + ball indicator`` (nonsmooth,
lower curvature eta) and ``f2 = quadratic with matrix Sigma``.  Subtracting
``lam |.|^2 / 2`` from both parts leaves the objective unchanged but moves
the splitting, and the conjugate step of the shifted f1 stays closed form: a
shrink followed by a scale.  The experiment measures, across random starts,
how many iterations each shift needs to reach given residual accuracies.
"""

import collections
import dataclasses
from dataclasses import dataclass

import numpy as np

from .curvature import INF, Splitting, validate_splitting

__all__ = (
    'SpcaProblem', 'NEpsilonTable', 'spca_conjugate_step', 'build_problem',
    'run_experiment', 'power_iteration_extremes', 'NegativeCurvatureError',
    'SingularCaseError', 'NoConsensusClusterError',
)

_SUPPORT_TOL = 1e-8


class NegativeCurvatureError(ValueError):
    """eta - lambda < 0: the shifted f1 is no longer convex."""


class SingularCaseError(ValueError):
    """The sampled covariance is (numerically) degenerate."""


class NoConsensusClusterError(RuntimeError):
    """No solution cluster collected the required share of runs."""


@dataclass(frozen=True)
class SpcaProblem:
    """Covariance matrix with regularisation weights and a curvature shift.

    ``mu2``/``L2`` are the extreme eigenvalues of Sigma (``L2 = 1`` after
    normalisation); ``lam <= eta`` is the curvature shift.  The induced
    splitting is stored shifted: ``(eta - lam, inf, mu2 - lam, L2 - lam)``.
    """

    Sigma: np.ndarray
    kappa: float
    eta: float
    mu2: float
    L2: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        sym_err = float(np.max(np.abs(self.Sigma - self.Sigma.T)))
        if sym_err > 1e-12:
            raise ValueError(f'Sigma not symmetric (max asymmetry {sym_err})')
        if self.lam > self.eta:
            raise ValueError(f'lam = {self.lam} exceeds eta = {self.eta}')
        if not 0 <= self.mu2 < self.L2:
            raise ValueError(f'need 0 <= mu2 < L2, got {self.mu2}, {self.L2}')

    @property
    def n(self) -> int:
        return self.Sigma.shape[0]

    def splitting(self, allow_no_decrease: bool = False) -> Splitting:
        """The shifted splitting induced by the current lam."""
        return validate_splitting(self.eta - self.lam, INF,
                                  self.mu2 - self.lam, self.L2 - self.lam,
                                  allow_no_decrease=allow_no_decrease)

    def with_shift(self, lam: float) -> 'SpcaProblem':
        return dataclasses.replace(self, lam=float(lam))

    def lambda_max(self) -> float:
        """Largest shift keeping the decrease guarantee."""
        return (self.eta + min(self.eta, self.mu2)) / 2.0

    def objective(self, x: np.ndarray) -> float:
        sx = self.Sigma @ x
        return (self.kappa * float(np.abs(x).sum())
                + 0.5 * self.eta * float(x @ x) - 0.5 * float(x @ sx))


@dataclass(frozen=True)
class NEpsilonTable:
    """Average first-hit iteration counts per shift and accuracy level.

    ``counts[i][j]`` is the average iteration index at which the squared
    residual of a kept run first drops to ``epsilons[j]``, for shift
    ``lambdas[i]``.  ``kept_runs`` is the number of starts whose runs (for
    every shift) converged to the dominant solution cluster.
    """

    epsilons: tuple
    lambdas: tuple
    counts: tuple          # tuple of tuples, len(lambdas) x len(epsilons)
    kept_runs: int
    all_kept_monotone: bool


def spca_conjugate_step(y: np.ndarray, kappa: float,
                        eta_minus_lambda: float) -> np.ndarray:
    """Conjugate-subdifferential step of the shifted elastic-net-plus-ball part.

    Returns the shrink-then-scale point

        sign(y) * max(|y| - kappa, 0) / max(eta_minus_lambda, |shrunk|_2)

    which minimises ``f1_shifted(w) - <y, w>``.  Returns the zero vector when
    y = 0, and also in the set-valued boundary case ``eta_minus_lambda = 0``
    with ``|y_i| = kappa`` for all i (a documented subgradient selection).
    """
    if eta_minus_lambda < 0:
        raise NegativeCurvatureError(
            f'eta - lambda = {eta_minus_lambda} < 0')
    y = np.asarray(y, dtype=float)
    shrunk = np.sign(y) * np.maximum(np.abs(y) - kappa, 0.0)
    denom = max(eta_minus_lambda, float(np.linalg.norm(shrunk)))
    if denom == 0.0:
        return np.zeros_like(y)
    return shrunk / denom


def power_iteration_extremes(S: np.ndarray, start: np.ndarray,
                             rtol: float = 1e-10, max_iter: int = 200000):
    """Extreme eigenvalues of a symmetric PSD matrix by power iteration.

    The largest eigenvalue comes from plain power iteration; the smallest
    from power iteration on ``lmax I - S``.  Convergence is declared when the
    Rayleigh quotient is stable to ``rtol`` relative.

    Returns
    -------
    (lmin, lmax) : (float, float)
    """
    def largest(M, v):
        ray = 0.0
        v = v / np.linalg.norm(v)
        for _ in range(max_iter):
            w = M @ v
            new_ray = float(v @ w)
            norm = float(np.linalg.norm(w))
            if norm == 0.0:
                return 0.0
            v = w / norm
            if abs(new_ray - ray) <= rtol * max(1.0, abs(new_ray)):
                return new_ray
            ray = new_ray
        return ray

    lmax = largest(S, start)
    lmin = lmax - largest(lmax * np.eye(S.shape[0]) - S, start)
    return lmin, lmax


def build_problem(n: int, density: float, kappa: float, eta: float,
                  seed: int) -> SpcaProblem:
    """Sample a sparse random covariance and wrap it as an experiment problem.

    A ``20n x n`` matrix with the given density of uniform [0, 1) entries is
    drawn, and ``Sigma = A'A`` is normalised by its largest eigenvalue, so
    ``L2 = 1`` exactly and ``0 < mu2 < 1`` for a nondegenerate draw.  The
    same seed reproduces Sigma bitwise.

    Raises
    ------
    SingularCaseError
        If the draw is singular (zero top eigenvalue or mu2 = L2).
    """
    if n < 2:
        raise ValueError(f'n = {n} < 2')
    if not 0 < density <= 1:
        raise ValueError(f'density = {density} outside (0, 1]')
    rng = np.random.default_rng(seed)
    m = 20 * n
    mask = rng.random((m, n)) < density
    A = np.where(mask, rng.random((m, n)), 0.0)
    S0 = A.T @ A
    S0 = 0.5 * (S0 + S0.T)
    start = rng.standard_normal(n)
    _, lmax0 = power_iteration_extremes(S0, start)
    if lmax0 <= 1e-12:
        raise SingularCaseError('largest eigenvalue of the sample is ~ 0')
    Sigma = S0 / lmax0
    Sigma = 0.5 * (Sigma + Sigma.T)
    lmin, _ = power_iteration_extremes(Sigma, start)
    mu2 = min(max(lmin, 0.0), 1.0)
    if mu2 >= 1.0:
        raise SingularCaseError('mu2 = L2: the covariance is a multiple of I')
    return SpcaProblem(Sigma=Sigma, kappa=float(kappa), eta=float(eta),
                       mu2=float(mu2), L2=1.0)


def _subgrad_f1(x: np.ndarray, kappa: float, enl: float) -> np.ndarray:
    # sign(0) = 0 picks a valid element of the l1 subdifferential; the ball
    # indicator contributes 0 (normal-cone selection valid on the whole ball)
    return kappa * np.sign(x) + enl * x


def _canonical_sign(x: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(x)))
    s = np.sign(x[idx])
    return x if s == 0 else s * x


def _sample_ball(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.standard_normal(n)
    u /= np.linalg.norm(u)
    return u * rng.random() ** (1.0 / n)


def run_experiment(prob: SpcaProblem, lambdas, M: int, epsilons,
                   max_iter: int = 5000, seed: int = 0,
                   stop_tol: float = 1e-18, cluster_tol: float = 1e-6,
                   min_cluster_frac: float = 0.2) -> NEpsilonTable:
    """Average first-hit iteration counts across random starts and shifts.

    For each of M starts drawn uniformly from the unit ball and each shift,
    the iteration runs with the closed-form conjugate step until the squared
    residual falls to ``stop_tol`` (or ``max_iter``).  A start is kept when,
    for every shift, its final point lands in the dominant solution cluster
    (matching support pattern and within ``cluster_tol`` of the cluster
    centroid, after sign canonicalisation).  Counts are averaged over kept
    starts only.

    Raises
    ------
    NoConsensusClusterError
        If fewer than ``min_cluster_frac * M`` starts are kept.
    ValueError
        If some shift exceeds eta or loses the decrease guarantee.
    """
    lambdas = [float(l) for l in lambdas]
    epsilons = sorted((float(e) for e in epsilons), reverse=True)
    for lam in lambdas:
        if lam > prob.eta:
            raise ValueError(f'shift {lam} exceeds eta = {prob.eta}')
        prob.with_shift(lam).splitting()   # raises when infeasible
    rng = np.random.default_rng(seed)
    n = prob.n
    starts = [_sample_ball(rng, n) for _ in range(M)]

    n_eps = len(epsilons)
    first_hits = {}    # (lam_index, start_index) -> list of hit iterations
    finals = {}
    monotone = {}
    for li, lam in enumerate(lambdas):
        enl = prob.eta - lam
        for si, x0 in enumerate(starts):
            x = x0.copy()
            sx = prob.Sigma @ x
            g2 = sx - lam * x
            g1 = _subgrad_f1(x, prob.kappa, enl)
            f_val = (prob.kappa * float(np.abs(x).sum())
                     + 0.5 * prob.eta * float(x @ x) - 0.5 * float(x @ sx))
            hits = [None] * n_eps
            mono = True
            diff = g1 - g2
            res = float(diff @ diff)
            level = 0
            while level < n_eps and res <= epsilons[level]:
                hits[level] = 0
                level += 1
            for k in range(1, max_iter + 1):
                if res <= stop_tol:
                    break
                x = spca_conjugate_step(g2, prob.kappa, enl)
                sx = prob.Sigma @ x
                g1 = g2
                g2 = sx - lam * x
                diff = g1 - g2
                res = float(diff @ diff)
                f_new = (prob.kappa * float(np.abs(x).sum())
                         + 0.5 * prob.eta * float(x @ x)
                         - 0.5 * float(x @ sx))
                if f_new > f_val + 1e-9 * (1.0 + abs(f_val)):
                    mono = False
                f_val = f_new
                while level < n_eps and res <= epsilons[level]:
                    hits[level] = k
                    level += 1
            first_hits[li, si] = [h if h is not None else max_iter + 1
                                  for h in hits]
            finals[li, si] = _canonical_sign(x)
            monotone[li, si] = mono

    # dominant cluster: most common support pattern, then distance filter
    supports = collections.Counter(
        tuple(np.abs(v) > _SUPPORT_TOL) for v in finals.values())
    dominant = supports.most_common(1)[0][0]
    members = [v for v in finals.values()
               if tuple(np.abs(v) > _SUPPORT_TOL) == dominant]
    centroid = np.mean(members, axis=0)

    def in_cluster(v):
        return (tuple(np.abs(v) > _SUPPORT_TOL) == dominant
                and float(np.linalg.norm(v - centroid)) <= cluster_tol)

    kept = [si for si in range(M)
            if all(in_cluster(finals[li, si]) for li in range(len(lambdas)))]
    if len(kept) < min_cluster_frac * M:
        raise NoConsensusClusterError(
            f'only {len(kept)} of {M} runs reach the dominant cluster')

    counts = tuple(
        tuple(float(np.mean([first_hits[li, si][j] for si in kept]))
              for j in range(n_eps))
        for li in range(len(lambdas)))
    all_mono = all(monotone[li, si]
                   for li in range(len(lambdas)) for si in kept)
    return NEpsilonTable(tuple(epsilons), tuple(lambdas), counts,
                         len(kept), all_mono)
