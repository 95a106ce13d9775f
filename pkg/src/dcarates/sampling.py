"""Random samplers over regime domains, shared by the verify suites and tests."""

import numpy as np

from .curvature import INF, Splitting
from .regimes import Regime, boundary_e, classify, threshold_b

__all__ = (
    'sample_splitting', 'sample_p1_generator_params',
    'sample_p2_generator_params', 'sample_quadratic_pair',
)


def sample_splitting(rng: np.random.Generator,
                     allow_inf: bool = True) -> Splitting:
    """A random admissible splitting with a decrease guarantee.

    Mixes convex, strongly convex and weakly convex second parts and
    occasionally makes one upper curvature infinite, so repeated draws cover
    all six regimes plus the degenerate case.
    """
    kind = rng.integers(0, 20)
    if kind == 0:
        mu1, mu2 = 0.0, 0.0
    elif kind < 8:       # weakly convex f2
        mu1 = rng.uniform(0.05, 3.0)
        mu2 = -rng.uniform(0.0, 0.95) * mu1
    elif kind < 10:      # f2 strongly convex, possibly above L1 (concave F)
        mu1 = rng.uniform(0.0, 1.0)
        mu2 = rng.uniform(0.5, 6.0)
    else:
        mu1 = rng.uniform(0.0, 3.0)
        mu2 = rng.uniform(0.0, 3.0)
        if mu1 + mu2 == 0.0:
            mu1 = 0.5
    L1 = mu1 + rng.uniform(0.05, 5.0)
    L2 = mu2 + rng.uniform(0.05, 5.0)
    if allow_inf:
        which = rng.integers(0, 8)
        if which == 0:
            L1 = INF
        elif which == 1:
            L2 = INF
    return Splitting(mu1, L1, mu2, L2)


def sample_p1_generator_params(rng: np.random.Generator):
    """Parameters in the worst-case p1 construction domain.

    Mixes the convex sub-case (mu2 >= 0) with the weakly convex one (mu2 < 0,
    boundary diagnostic <= 0, obtained by rejection).
    """
    while True:
        mu1 = rng.uniform(0.05, 2.0)
        L2 = mu1 + rng.uniform(0.05, 2.0)
        L1 = L2 + rng.uniform(0.0, 3.0)
        if rng.random() < 0.5:
            mu2 = rng.uniform(0.0, 0.95 * min(L1, L2))
            return mu1, L1, mu2, L2
        mu2 = -rng.uniform(0.05, 0.95) * mu1
        e = boundary_e(Splitting(mu1, L1, mu2, L2))
        if e is not None and e <= 0:
            return mu1, L1, mu2, L2


def sample_p2_generator_params(rng: np.random.Generator):
    """Parameters in the worst-case p2 construction domain."""
    mu1 = rng.uniform(0.0, 1.5)
    mu2 = rng.uniform(0.0, 1.5)
    if mu1 + mu2 == 0.0:
        mu2 = 0.5
    L1 = max(mu1, mu2) + rng.uniform(0.05, 2.0)
    L2 = L1 + rng.uniform(0.05, 2.0)
    return mu1, L1, mu2, L2


def sample_quadratic_pair(rng: np.random.Generator, s: Splitting):
    """Random 1-D quadratics (a/2 x^2 + b x) inside the classes of s.

    The curvature of f1 is kept strictly positive so the conjugate step is
    single valued.  Returns ``(a1, b1, a2, b2)``.
    """
    hi1 = s.L1 if s.L1 < INF else s.mu1 + 10.0
    lo1 = max(s.mu1, 1e-3) if s.mu1 < hi1 else s.mu1
    a1 = rng.uniform(lo1, hi1)
    hi2 = s.L2 if s.L2 < INF else s.mu2 + 10.0
    a2 = rng.uniform(s.mu2, hi2)
    b1 = rng.uniform(-2.0, 2.0)
    b2 = rng.uniform(-2.0, 2.0)
    return a1, b1, a2, b2
