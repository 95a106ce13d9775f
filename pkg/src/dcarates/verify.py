"""Randomised verification suites behind the command-line ``verify``.

Each suite draws seeded random problems, checks one family of guarantees at
a fixed tolerance, and reports the worst observed slack.  The suites double
as executable documentation of the package's invariants:

``bounds``      one-step decrease and two-sided step bounds on random
                in-class quadratic instances
``boundaries``  coefficient agreement of adjacent regimes on their shared
                boundaries
``swap``        the p1/p2 mirror symmetry of the coefficient formulas
``pgd-equiv``   proximal-gradient iterates and residuals match the
                equivalent splitting run
"""

from dataclasses import dataclass

import numpy as np

from .curvature import INF, Splitting
from .engine import DcOracles, check_one_step, run_dca
from .pgd import run_pgd
from .regimes import Regime, classify, regime_coefficients, threshold_b
from .sampling import sample_quadratic_pair, sample_splitting

__all__ = ('SuiteResult', 'run_suite', 'run_suites', 'SUITES')


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    worst_slack: float
    samples: int
    detail: str = ''


def _rel_gap(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def suite_bounds(samples: int, seed: int) -> SuiteResult:
    """One-step and two-sided bounds on random quadratic instances."""
    rng = np.random.default_rng(seed)
    worst = INF
    tol = 1e-9
    ok = True
    for _ in range(samples):
        s = sample_splitting(rng)
        a1, b1, a2, b2 = sample_quadratic_pair(rng, s)
        x = rng.uniform(-3.0, 3.0)
        g2 = a2 * x + b2
        x_next = (g2 - b1) / a1
        def f(pt):
            return 0.5 * a1 * pt * pt + b1 * pt - (0.5 * a2 * pt * pt + b2 * pt)
        F_x, F_next = f(x), f(x_next)
        G = (a1 * x + b1) - g2
        G_plus = (a1 * x_next + b1) - (a2 * x_next + b2)
        check = check_one_step(s, F_x, F_next, G * G, G_plus * G_plus, tol)
        worst = min(worst, check.slack)
        ok &= check.holds
        # two-sided step bounds
        dx_sq = (x - x_next) ** 2
        drop = F_x - F_next
        lo_slack = drop - 0.5 * (s.mu1 + s.mu2) * dx_sq
        worst = min(worst, lo_slack)
        ok &= lo_slack >= -tol
        if s.L1 < INF and s.L2 < INF:
            hi_slack = 0.5 * (s.L1 + s.L2) * dx_sq - drop
            worst = min(worst, hi_slack)
            ok &= hi_slack >= -tol
    return SuiteResult('bounds', ok, worst, samples)


def _boundary_points(rng: np.random.Generator, family: str, count: int):
    """Sample (splitting, regime_a, regime_b) triples on one boundary."""
    out = []
    while len(out) < count:
        if family == 'b_zero':
            mu2 = -rng.uniform(0.05, 3.0)
            L2 = -mu2 * rng.uniform(2.05, 6.0)
            mu1 = -mu2 * L2 / (L2 + mu2)
            L1 = max(L2, mu1) * rng.uniform(1.01, 3.0)
            s = Splitting(mu1, L1, mu2, L2)
            if mu1 + mu2 > 0 and mu1 < min(L1, L2):
                out.append((s, Regime.P3, Regime.P4))
        elif family == 'e_zero':
            L2 = rng.uniform(0.5, 3.0)
            L1 = L2 * rng.uniform(1.0, 3.0)
            mu2 = -rng.uniform(0.01, 1.5)
            lead = (L2 + mu2) * (1.0 / L1 - 1.0 / L2) / (-mu2)
            inv_mu1 = 1.0 / L1 - lead
            if inv_mu1 <= 0:
                continue
            mu1 = 1.0 / inv_mu1
            s = Splitting(mu1, L1, mu2, L2)
            if (mu1 + mu2 > 0 and mu1 <= L2 and mu1 < L1
                    and threshold_b(s) <= 0):
                out.append((s, Regime.P1, Regime.P3))
        elif family == 'l1_eq_l2':
            L = rng.uniform(0.5, 4.0)
            mu1 = rng.uniform(0.01, 0.9) * L
            mu2 = rng.uniform(0.0, 0.9) * L
            out.append((Splitting(mu1, L, mu2, L), Regime.P1, Regime.P2))
        elif family == 'l2_eq_mu1':
            mu1 = rng.uniform(0.3, 3.0)
            L2 = mu1
            L1 = L2 * rng.uniform(1.01, 4.0)
            if rng.random() < 0.5:
                mu2 = rng.uniform(0.0, 0.9) * L2
            else:
                mu2 = -rng.uniform(0.01, 0.45) * mu1   # keeps B <= 0 here
            out.append((Splitting(mu1, L1, mu2, L2), Regime.P1, Regime.P5))
        else:
            raise ValueError(f'unknown boundary family {family}')
    return out


def suite_boundaries(samples: int, seed: int) -> SuiteResult:
    """Adjacent regime formulas agree on raw shared-boundary samples."""
    rng = np.random.default_rng(seed)
    families = ('b_zero', 'e_zero', 'l1_eq_l2', 'l2_eq_mu1')
    per = max(1, samples // len(families))
    worst = 0.0
    ok = True
    for family in families:
        for s, ra, rb in _boundary_points(rng, family, per):
            ca = regime_coefficients(s, ra)
            cb = regime_coefficients(s, rb)
            gap = max(_rel_gap(ca[0], cb[0]), _rel_gap(ca[1], cb[1]))
            worst = max(worst, gap)
            ok &= gap <= 1e-8
            if family == 'b_zero':
                # exact identity between the two residual-plus weights
                ident = abs(1.0 / (s.L2 + s.mu2)
                            - (s.mu1 + s.mu2) / (s.mu2 * s.mu2))
                ok &= ident <= 1e-12
                worst = max(worst, ident)
    return SuiteResult('boundaries', ok, -worst, 4 * per,
                       detail='worst slack is -(largest relative gap)')


def suite_swap(samples: int, seed: int) -> SuiteResult:
    """classify of the swapped splitting mirrors regime p1 into p2."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    ok = True
    done = 0
    while done < samples:
        s = sample_splitting(rng, allow_inf=False)
        if s.mu2 < 0:
            continue
        try:
            report = classify(s)
        except Exception:
            continue
        if report.regime is not Regime.P1:
            continue
        mirrored = classify(s.swapped())
        ok &= mirrored.regime in (Regime.P2, Regime.P1P2_DEGENERATE)
        gap = max(_rel_gap(report.sigma, mirrored.sigma_plus),
                  _rel_gap(report.sigma_plus, mirrored.sigma))
        worst = max(worst, gap)
        ok &= gap <= 1e-12
        done += 1
    return SuiteResult('swap', ok, -worst, samples,
                       detail='worst slack is -(largest relative gap)')


def _soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def suite_pgd_equiv(samples: int, seed: int) -> SuiteResult:
    """Proximal gradient and splitting runs coincide on 1-D composites."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    ok = True
    N = 30
    for _ in range(samples):
        mu_phi = rng.uniform(-2.0, 1.0)
        L_phi = max(mu_phi, 0.0) + rng.uniform(0.1, 2.0)
        # positive actual curvature keeps the composite bounded below and the
        # iteration contractive; the declared class may still be nonconvex
        a = rng.uniform(0.05 * L_phi, L_phi)
        b = rng.uniform(-2.0, 2.0)
        tau = rng.uniform(0.01, 1.0)
        gamma = rng.uniform(0.05, 1.9) / L_phi
        x0 = rng.uniform(-3.0, 3.0)

        pgd = run_pgd(
            phi_grad=lambda x: a * x + b,
            prox_h=lambda v, g: _soft_threshold(v, g * tau),
            x0=x0, gamma=gamma, N=N,
            h_subgrad=lambda x: tau * np.sign(x),
            eval_phi=lambda x: float(0.5 * a * x[0] ** 2 + b * x[0]),
            eval_h=lambda x: float(tau * abs(x[0])))
        oracles = DcOracles(
            eval_f1=lambda x: float(tau * abs(x[0])
                                    + x[0] ** 2 / (2.0 * gamma)),
            eval_f2=lambda x: float(x[0] ** 2 / (2.0 * gamma)
                                    - 0.5 * a * x[0] ** 2 - b * x[0]),
            subgrad_f1=lambda x: tau * np.sign(x) + x / gamma,
            subgrad_f2=lambda x: x / gamma - (a * x + b),
            conj_step_f1=lambda g: gamma * _soft_threshold(g, tau))
        dca = run_dca(oracles, x0, N)

        for pa, pb in zip(pgd.points, dca.points):
            worst = max(worst, float(abs(pa[0] - pb[0])))
        for raw_a, raw_b in zip(pgd.residual_sq, dca.residual_sq):
            worst = max(worst, abs(raw_a - raw_b) / max(1.0, raw_a, raw_b))
        ok &= worst <= 1e-10
    return SuiteResult('pgd-equiv', ok, -worst, samples,
                       detail='worst slack is -(largest deviation)')


SUITES = {
    'bounds': suite_bounds,
    'boundaries': suite_boundaries,
    'swap': suite_swap,
    'pgd-equiv': suite_pgd_equiv,
}


def run_suite(name: str, samples: int, seed: int) -> SuiteResult:
    return SUITES[name](samples, seed)


def run_suites(names, samples: int, seed: int) -> list[SuiteResult]:
    return [run_suite(name, samples, seed) for name in names]
