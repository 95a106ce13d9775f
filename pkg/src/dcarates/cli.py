"""Command-line front end: every analysis as a reproducible, scriptable command.

Exit codes: 0 success, 1 verification failure, 2 input or validation error.
Machine formats (``--output json`` / ``csv``) are the stable surface; the
human format is a fixed-width key/value table.  Identical flags and seed
always produce byte-identical output.
"""

import argparse
import sys

import numpy as np

from . import serialize
from .curvature import SplittingError, validate_splitting
from .engine import run_dca
from .pgd import PgdSetting, pgd_sigma_plus, pgd_to_dca, run_pgd, stepsize_sweep
from .rates import (InfeasibleRangeError, InvalidNError, optimize_shift,
                    rate_bound)
from .regimes import EmptyGridError, OutsideAllRegimesError, classify, contour_grid
from .spca import build_problem, run_experiment
from .verify import SUITES, run_suites
from .worstcase import DomainViolationError, as_oracles, instance_p1, instance_p2

__all__ = ('main', 'build_parser')

_INPUT_ERRORS = (SplittingError, OutsideAllRegimesError, DomainViolationError,
                 InvalidNError, InfeasibleRangeError, EmptyGridError,
                 ValueError)


def _ext_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a number: {text!r}')


def _add_splitting_args(p: argparse.ArgumentParser):
    p.add_argument('--mu1', type=_ext_float, required=True)
    p.add_argument('--L1', type=_ext_float, required=True,
                   help="upper curvature of f1 ('inf' accepted)")
    p.add_argument('--mu2', type=_ext_float, required=True)
    p.add_argument('--L2', type=_ext_float, required=True,
                   help="upper curvature of f2 ('inf' accepted)")


def _add_output_args(p: argparse.ArgumentParser):
    p.add_argument('--output', choices=('human', 'json', 'csv'),
                   default='human')
    p.add_argument('--out', metavar='PATH', default=None,
                   help='write to a file instead of stdout')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dcarates',
        description='Regime classification, rate bounds, worst-case '
                    'instances and experiments for difference-of-convex '
                    'splittings.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('classify', help='regime and decrease coefficients')
    _add_splitting_args(p)
    p.add_argument('--tol', type=float, default=0.0,
                   help='widen boundary membership')
    _add_output_args(p)

    p = sub.add_parser('rate', help='sublinear residual bound')
    _add_splitting_args(p)
    p.add_argument('--N', type=int, required=True)
    p.add_argument('--deltaF', type=float, required=True)
    p.add_argument('--flo-gap', type=float, default=None)
    _add_output_args(p)

    p = sub.add_parser('shift', help='optimal curvature shift')
    _add_splitting_args(p)
    p.add_argument('--lambda-lo', type=float, default=None)
    p.add_argument('--grid', type=int, default=4096)
    p.add_argument('--refine-tol', type=float, default=1e-10)
    p.add_argument('--profile', action='store_true',
                   help='include the sampled (lambda, p, regime) curve')
    _add_output_args(p)

    p = sub.add_parser('contour', help='regime grid over (mu2, L2)')
    p.add_argument('--mu1', type=_ext_float, required=True)
    p.add_argument('--L1', type=_ext_float, required=True)
    p.add_argument('--mu2-min', type=float, required=True)
    p.add_argument('--mu2-max', type=float, required=True)
    p.add_argument('--mu2-steps', type=int, default=20)
    p.add_argument('--L2-min', type=float, required=True)
    p.add_argument('--L2-max', type=float, required=True)
    p.add_argument('--L2-steps', type=int, default=20)
    _add_output_args(p)

    p = sub.add_parser('worstcase', help='tight instance, generated and run')
    p.add_argument('--regime', choices=('p1', 'p2'), required=True)
    _add_splitting_args(p)
    p.add_argument('--delta', type=float, required=True)
    p.add_argument('--N', type=int, required=True)
    p.add_argument('--dump', metavar='PATH', default=None,
                   help='write the piecewise-quadratic instance as JSON')
    _add_output_args(p)

    p = sub.add_parser('pgd-map', help='stepsize sweep to splittings')
    p.add_argument('--L-phi', type=float, required=True)
    p.add_argument('--mu-phi', type=float, required=True)
    p.add_argument('--gamma-min', type=float, required=True)
    p.add_argument('--gamma-max', type=float, required=True)
    p.add_argument('--steps', type=int, default=20)
    p.add_argument('--mu-h', type=float, default=0.0)
    p.add_argument('--L-h', type=_ext_float, default=float('inf'))
    _add_output_args(p)

    p = sub.add_parser('pgd-sigma', help='one-step coefficient of a stepsize')
    p.add_argument('--L-phi', type=float, required=True)
    p.add_argument('--mu-phi', type=float, required=True)
    p.add_argument('--gamma', type=float, required=True)
    _add_output_args(p)

    p = sub.add_parser('pgd-run',
                       help='proximal gradient on a 1-D l1 composite, '
                            'cross-checked against the splitting run')
    p.add_argument('--phi-curv', type=float, required=True,
                   help='curvature a of phi(x) = a x^2/2 + b x')
    p.add_argument('--phi-slope', type=float, default=0.0, help='slope b')
    p.add_argument('--l1', type=float, default=0.0,
                   help='weight of the l1 term h')
    p.add_argument('--gamma', type=float, required=True)
    p.add_argument('--x0', type=float, required=True)
    p.add_argument('--N', type=int, required=True)
    _add_output_args(p)

    p = sub.add_parser('spca', help='sparse-pca curvature shift experiment')
    p.add_argument('--n', type=int, default=50)
    p.add_argument('--density', type=float, default=0.1)
    p.add_argument('--kappa', type=float, default=0.02)
    p.add_argument('--eta', type=float, default=0.5)
    p.add_argument('--lambdas', default='auto',
                   help="comma-separated shifts, or 'auto' for "
                        '{0, +-lambda*, +-lambda*/2, lambda_max}')
    p.add_argument('--M', type=int, default=50)
    p.add_argument('--epsilons', default='1e-2,1e-4,1e-6,1e-8')
    p.add_argument('--max-iter', type=int, default=5000)
    p.add_argument('--seed', type=int, default=None)
    _add_output_args(p)

    p = sub.add_parser('verify', help='randomised guarantee suites')
    p.add_argument('--suite', choices=tuple(SUITES) + ('all',),
                   default='all')
    p.add_argument('--samples', type=int, default=200)
    p.add_argument('--seed', type=int, default=None)
    _add_output_args(p)
    return parser


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, 'w', newline='') as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _human_table(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return ''.join(f'{k.ljust(width)}  {serialize.fmt(v)}\n'
                   for k, v in pairs)


def _require_seed(args) -> int:
    if args.seed is None:
        if args.output == 'json':
            raise ValueError('--seed is required with --output json')
        return 0
    return args.seed


def _splitting_from(args, allow_no_decrease=False):
    return validate_splitting(args.mu1, args.L1, args.mu2, args.L2,
                              allow_no_decrease=allow_no_decrease)


def _cmd_classify(args) -> int:
    report = classify(_splitting_from(args), tol=args.tol)
    data = serialize.regime_report_dict(report)
    if args.output == 'json':
        _emit(args, serialize.dumps_json(data))
    elif args.output == 'csv':
        keys = list(data)
        _emit(args, ','.join(keys) + '\n'
              + ','.join(serialize.fmt(data[k]) for k in keys) + '\n')
    else:
        _emit(args, _human_table(list(data.items())))
    return 0


def _cmd_rate(args) -> int:
    bound = rate_bound(_splitting_from(args), args.N, args.deltaF,
                       Flo_gap=args.flo_gap)
    data = {'p': bound.p, 'n': bound.N, 'bound_simple': bound.bound_simple,
            'bound_flo': bound.bound_flo}
    if args.output == 'json':
        _emit(args, serialize.dumps_json(data))
    elif args.output == 'csv':
        _emit(args, 'p,n,bound_simple,bound_flo\n' + ','.join(
            serialize.fmt(v) for v in data.values()) + '\n')
    else:
        _emit(args, _human_table(list(data.items())))
    return 0


def _cmd_shift(args) -> int:
    s = _splitting_from(args, allow_no_decrease=True)
    result = optimize_shift(s, lambda_lo=args.lambda_lo,
                            grid_points=args.grid,
                            refine_tol=args.refine_tol,
                            profile=args.profile)
    if args.output == 'csv':
        if result.p_profile is None:
            raise ValueError('csv output of shift needs --profile')
        _emit(args, serialize.shift_profile_csv(result.p_profile))
        return 0
    data = serialize.shift_result_dict(result)
    if args.output == 'json':
        _emit(args, serialize.dumps_json(data))
    else:
        pairs = [(k, v) for k, v in data.items() if k != 'profile']
        _emit(args, _human_table(pairs))
    return 0


def _cmd_contour(args) -> int:
    mu2s = np.linspace(args.mu2_min, args.mu2_max, args.mu2_steps)
    L2s = np.linspace(args.L2_min, args.L2_max, args.L2_steps)
    cells = contour_grid(args.mu1, args.L1, mu2s, L2s)
    if args.output == 'json':
        _emit(args, serialize.dumps_json([
            {'mu2': c.mu2, 'l2': c.L2, 'regime': c.regime, 'p': c.p,
             'sigma': c.sigma, 'sigma_plus': c.sigma_plus} for c in cells]))
    else:
        _emit(args, serialize.grid_csv(cells))
    return 0


def _cmd_worstcase(args) -> int:
    make = instance_p1 if args.regime == 'p1' else instance_p2
    inst = make(args.mu1, args.L1, args.mu2, args.L2, args.delta, args.N)
    traj = run_dca(as_oracles(inst), inst.x_iters[0], inst.N,
                   splitting=inst.splitting)
    achieved = traj.best_residual_sq / 2.0
    predicted = inst.predicted_min_residual_sq / 2.0
    slack = max(abs(r - inst.predicted_min_residual_sq)
                for r in traj.residual_sq)
    data = {
        'regime': inst.regime.value,
        'p': 2.0 * inst.delta / (inst.predicted_min_residual_sq * inst.N),
        'predicted_wc': predicted,
        'achieved_wc': achieved,
        'max_step_slack': slack,
    }
    if args.dump:
        with open(args.dump, 'w', newline='') as fh:
            fh.write(serialize.dumps_json(serialize.instance_dict(inst)))
    if args.output == 'json':
        _emit(args, serialize.dumps_json(data))
    elif args.output == 'csv':
        keys = list(data)
        _emit(args, ','.join(keys) + '\n'
              + ','.join(serialize.fmt(data[k]) for k in keys) + '\n')
    else:
        _emit(args, _human_table(list(data.items())))
    return 0


def _cmd_pgd_map(args) -> int:
    gammas = np.linspace(args.gamma_min, args.gamma_max, args.steps)
    rows = stepsize_sweep(args.L_phi, args.mu_phi, gammas,
                          mu_h=args.mu_h, L_h=args.L_h)
    if args.output == 'json':
        _emit(args, serialize.dumps_json([
            {'gamma': r.gamma, 'mu2': r.mu2, 'l2': r.L2, 'regime': r.regime,
             'sigma_plus': r.sigma_plus} for r in rows]))
    else:
        _emit(args, serialize.sweep_csv(rows))
    return 0


def _cmd_pgd_sigma(args) -> int:
    res = pgd_sigma_plus(args.L_phi, args.mu_phi, args.gamma)
    data = {'sigma_plus': res.sigma_plus, 'branch': res.branch.value,
            'b': res.B, 'regime': res.regime.value,
            'covered_by_theory': res.covered_by_theory}
    if args.output == 'json':
        _emit(args, serialize.dumps_json(data))
    elif args.output == 'csv':
        keys = list(data)
        _emit(args, ','.join(keys) + '\n'
              + ','.join(serialize.fmt(data[k]) for k in keys) + '\n')
    else:
        _emit(args, _human_table(list(data.items())))
    return 0


def _cmd_pgd_run(args) -> int:
    a, b, tau, gamma = args.phi_curv, args.phi_slope, args.l1, args.gamma

    def soft(v, t):
        return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)

    traj = run_pgd(
        phi_grad=lambda x: a * x + b,
        prox_h=lambda v, g: soft(v, g * tau),
        x0=args.x0, gamma=gamma, N=args.N,
        h_subgrad=lambda x: tau * np.sign(x),
        eval_phi=lambda x: float(0.5 * a * x[0] ** 2 + b * x[0]),
        eval_h=lambda x: float(tau * abs(x[0])))
    if args.output == 'json':
        _emit(args, serialize.dumps_json(serialize.trajectory_dict(traj)))
    else:
        _emit(args, serialize.trajectory_csv(traj))
    return 0


def _cmd_spca(args) -> int:
    seed = _require_seed(args)
    prob = build_problem(args.n, args.density, args.kappa, args.eta, seed)
    eps = [float(e) for e in args.epsilons.split(',')]
    if args.lambdas == 'auto':
        result = optimize_shift(prob.splitting())
        star = result.lambda_star
        lams = [0.0, star, -star, 0.5 * star, -0.5 * star, prob.lambda_max()]
    else:
        lams = [float(l) for l in args.lambdas.split(',')]
    table = run_experiment(prob, lams, args.M, eps,
                           max_iter=args.max_iter, seed=seed)
    if args.output == 'json':
        data = serialize.neps_dict(table)
        data['mu2'] = prob.mu2
        _emit(args, serialize.dumps_json(data))
    else:
        _emit(args, serialize.neps_csv(table))
    return 0


def _cmd_verify(args) -> int:
    seed = _require_seed(args)
    names = list(SUITES) if args.suite == 'all' else [args.suite]
    results = run_suites(names, args.samples, seed)
    data = [{'suite': r.name, 'passed': r.passed,
             'worst_slack': r.worst_slack, 'samples': r.samples}
            for r in results]
    if args.output == 'json':
        _emit(args, serialize.dumps_json(data))
    else:
        lines = []
        for r in results:
            status = 'pass' if r.passed else 'FAIL'
            lines.append(f'{r.name:<12} {status}  worst_slack='
                         f'{serialize.fmt(r.worst_slack)}\n')
        _emit(args, ''.join(lines))
    return 0 if all(r.passed for r in results) else 1


_COMMANDS = {
    'classify': _cmd_classify,
    'rate': _cmd_rate,
    'shift': _cmd_shift,
    'contour': _cmd_contour,
    'worstcase': _cmd_worstcase,
    'pgd-map': _cmd_pgd_map,
    'pgd-sigma': _cmd_pgd_sigma,
    'pgd-run': _cmd_pgd_run,
    'spca': _cmd_spca,
    'verify': _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _INPUT_ERRORS as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
