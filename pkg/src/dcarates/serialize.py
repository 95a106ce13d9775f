"""Deterministic CSV and JSON rendering of the package's result types.

All numbers render through `fmt`, which uses the shortest round-trip float
representation and the literal ``inf`` for infinity, so identical inputs
always produce byte-identical text.  CSV uses comma separators, '.' decimals,
a header row and LF line endings; JSON uses UTF-8 and lower_snake_case keys,
with infinities encoded as the string ``"inf"``.
"""

import json
import math

from .curvature import Splitting
from .regimes import RegimeReport

__all__ = (
    'fmt', 'parse_float', 'to_jsonable', 'dumps_json', 'regime_report_dict',
    'grid_csv', 'trajectory_csv', 'trajectory_dict', 'shift_profile_csv',
    'shift_result_dict', 'instance_dict', 'neps_csv', 'neps_dict',
    'sweep_csv', 'splitting_dict',
)


def fmt(x) -> str:
    """Shortest round-trip text of a number; inf renders as ``inf``."""
    if x is None:
        return ''
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return repr(x)


def parse_float(text: str) -> float:
    """Inverse of `fmt` for scalars; accepts the ``inf`` literal."""
    return float(text)


def to_jsonable(obj):
    """Recursively convert to JSON-encodable values; inf becomes ``"inf"``."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return fmt(obj) if math.isinf(obj) else obj
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, 'tolist'):
        return to_jsonable(obj.tolist())
    raise TypeError(f'cannot serialise {type(obj)!r}')


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2) + '\n'


def splitting_dict(s: Splitting) -> dict:
    return {'mu1': s.mu1, 'l1': s.L1, 'mu2': s.mu2, 'l2': s.L2}


def regime_report_dict(report: RegimeReport) -> dict:
    return {
        'regime': report.regime.value,
        'sigma': report.sigma,
        'sigma_plus': report.sigma_plus,
        'p': report.p,
        'threshold_b': report.threshold_b,
        'boundary_e': report.boundary_e,
        'description': report.description,
        'concave_unbounded': report.concave_unbounded,
    }


def _csv(header, rows) -> str:
    lines = [','.join(header)]
    lines.extend(','.join(fmt(v) for v in row) for row in rows)
    return '\n'.join(lines) + '\n'


def grid_csv(cells) -> str:
    return _csv(('mu2', 'L2', 'regime', 'p', 'sigma', 'sigma_plus'),
                ((c.mu2, c.L2, c.regime, c.p, c.sigma, c.sigma_plus)
                 for c in cells))


def trajectory_csv(traj) -> str:
    dim = len(traj.points[0])
    header = ['k'] + [f'x{i}' for i in range(dim)] + ['F', 'residual_sq']
    rows = []
    for k, point in enumerate(traj.points):
        rows.append([k] + list(point)
                    + [traj.objective[k], traj.residual_sq[k]])
    return _csv(header, rows)


def trajectory_dict(traj) -> dict:
    return {
        'points': [list(p) for p in traj.points],
        'objective': list(traj.objective),
        'residual_sq': list(traj.residual_sq),
        'step_norms_sq': list(traj.step_norms_sq),
        'min_residual_sq': list(traj.min_residual_sq),
    }


def shift_profile_csv(profile) -> str:
    return _csv(('lambda', 'p', 'regime'),
                ((lam, p, regime if regime is not None else 'infeasible')
                 for lam, p, regime in profile))


def shift_result_dict(result) -> dict:
    out = {
        'lambda_star': result.lambda_star,
        'p_star': result.p_star,
        'regime_at_star': result.regime_at_star.value,
        'lambda_max': result.lambda_max,
    }
    if result.p_profile is not None:
        out['profile'] = [
            {'lambda': lam, 'p': p,
             'regime': regime if regime is not None else 'infeasible'}
            for lam, p, regime in result.p_profile]
    return out


def instance_dict(inst) -> dict:
    return {
        'regime': inst.regime.value,
        'splitting': splitting_dict(inst.splitting),
        'n_iterations': inst.N,
        'delta': inst.delta,
        'u': inst.U,
        'predicted_min_residual_sq': inst.predicted_min_residual_sq,
        'x_iters': list(inst.x_iters),
        'xbar': list(inst.xbar),
        'f1': inst.f1.to_dict(),
        'f2': inst.f2.to_dict(),
    }


def neps_csv(table) -> str:
    header = ['lambda'] + [fmt(e) for e in table.epsilons]
    rows = [[lam] + list(row)
            for lam, row in zip(table.lambdas, table.counts)]
    return _csv(header, rows)


def neps_dict(table) -> dict:
    return {
        'epsilons': list(table.epsilons),
        'lambdas': list(table.lambdas),
        'counts': [list(row) for row in table.counts],
        'kept_runs': table.kept_runs,
        'all_kept_monotone': table.all_kept_monotone,
    }


def sweep_csv(rows) -> str:
    return _csv(('gamma', 'mu2', 'L2', 'regime', 'sigma_plus'),
                ((r.gamma, r.mu2, r.L2, r.regime, r.sigma_plus)
                 for r in rows))
