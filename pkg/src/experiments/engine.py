"""Experiment engine: runs one CLI command and collects its results.

Every command returns a result dict with the conventions

    {'command', 'verdict', 'body', 'table', 'seed',
     'success', 'failed', 'errors'}

where ``verdict`` is None for plain computations and 'pass',
'constant-mismatch' or 'fail' for verifications, ``body`` is the JSON
payload and ``table`` the pandas frame written for CSV output.
"""

import dataclasses
import logging
import os
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from experiments.config import ExperimentConfig
from experiments.output import build_header, render_csv, render_json
from fractional.erdelyi_kober import left_inverse_deviation, semigroup_check
from fractional.profiles import RadialProfile, tabulate, write_grid_csv
from fractional.riesz import (RieszBackend, calibrate_riesz_constant, riesz_radial,
                              riesz_semigroup_check)
from identities.checks import (check_fuglede, check_intertwining, check_semyanistyi,
                               check_weighted_duality, invert_via_range)
from identities.constants import constant, constant_names
from identities.reports import IdentityReport, Verdict
from montecarlo.estimators import mc_pairing_duality, mc_vs_radial
from montecarlo.streams import fresh_seed
from numerics.errors import ConfigError, DomainError, StrichartzError
from numerics.parallel import evaluate_with_fallback
from radon.config import GrassmannConfig
from radon.existence import (check_existence, counterexample_exponent, lp_existence_bound,
                             sharpness_probe)
from radon.inversion import strichartz_dual_invert_radial, strichartz_invert_radial
from radon.transforms import (consistency_audit, dual_kplane_radial, gonzalez_radial,
                              inclusion_radial, kplane_radial, semyanistyi_direct_radial,
                              semyanistyi_dual_radial, semyanistyi_radial,
                              strichartz_dual_profile, strichartz_dual_radial,
                              strichartz_forward_direct, strichartz_forward_profile,
                              strichartz_forward_radial)
from storage.run_store import RunStore

logger = logging.getLogger(__name__)

TRANSFORM_OPS = ('strichartz-forward', 'strichartz-dual', 'strichartz-direct', 'inclusion',
                 'kplane', 'dual-kplane', 'gonzalez', 'consistency-audit', 'existence')
SEMYANISTYI_OPS = ('forward', 'direct', 'dual')
RIESZ_BACKENDS = ('ek-factorized', 'angular-kernel', 'both', 'calibrate')
SUITES = ('duality', 'fuglede', 'intertwine', 'semyanistyi', 'semigroup', 'sharpness',
          'mc-vs-radial')
ALL_SUITES = 'all'
SWEEPABLE = ('n', 'p', 'q', 'l', 'lam', 'alpha', 'beta', 'dim')

MC_RADII = (0.5, 1.0, 2.0)
SEMIGROUP_ORDERS = (0.5, 1.0)
LEFT_INVERSE_ORDERS = (0.5, 1.0, 1.5, 2.0)
DIVERGENT_CUTOFFS = (10.0, 1e2, 1e3, 1e4)
SHARPNESS_OFFSET = 0.1
# relative increment criterion needs cutoffs far out: the convergent tail decays like 1/log
CONVERGENT_CUTOFFS = tuple(np.geomspace(10.0, 1e300, 30).tolist())
SHARPNESS_GROWTH = 2.0
SHARPNESS_INCREMENT = 1e-3

_SEVERITY = {Verdict.PASS.value: 0, Verdict.CONSTANT_MISMATCH.value: 1, Verdict.FAIL.value: 2}


def worst_verdict(verdicts: Sequence[Optional[str]]) -> Optional[str]:
    present = [v for v in verdicts if v is not None]
    if not present:
        return None
    return max(present, key=lambda v: _SEVERITY[v])


def _entry(name: str, verdict: Optional[str], statistic: float, tolerance: float,
           **details) -> Dict[str, Any]:
    return {'check': name, 'verdict': verdict, 'statistic': statistic,
            'tolerance': tolerance, **details}


def _bounded(name: str, statistic: float, tolerance: float, **details) -> Dict[str, Any]:
    passed = bool(np.isfinite(statistic) and statistic <= tolerance)
    return _entry(name, Verdict.PASS.value if passed else Verdict.FAIL.value, float(statistic),
                  tolerance, **details)


def _report_entry(report: IdentityReport) -> Dict[str, Any]:
    return {'check': report.identity_name, 'verdict': report.verdict.value,
            'statistic': report.max_rel_dev, 'tolerance': report.tolerance,
            'report': report.as_dict()}


class ExperimentEngine:
    """Runs CLI commands against the numerical library."""

    def __init__(self, config: ExperimentConfig, store: Optional[RunStore] = None):
        """Initialize the engine.

        Args:
            config: Fully resolved experiment configuration
            store: Open run log, or None to skip recording
        """
        self.config = config
        self.store = store
        self.seed = config.seed if config.seed is not None else fresh_seed()
        self.commands: Dict[str, Callable[[], Dict[str, Any]]] = {
            'transform': self.run_transform,
            'invert': self.run_invert,
            'riesz': self.run_riesz,
            'semyanistyi': self.run_semyanistyi,
            'verify': self.run_verify,
            'constants': self.run_constants,
            'sweep': self.run_sweep,
            'export-grid': self.run_export_grid,
            'history': self.run_history,
        }

    # orchestration

    def run(self) -> Dict[str, Any]:
        """Run the configured command, recording it when a store is attached."""
        command = self.config.command
        if command not in self.commands:
            raise ConfigError(f"unknown command {command!r}")
        run_id = None
        if self.store is not None and command != 'history':
            run_id = self.store.log_run_start(command, self.config.as_dict(), self.seed)
        try:
            result = self.commands[command]()
        except StrichartzError as e:
            if run_id is not None:
                self.store.log_run_complete(run_id, 'error', error_message=str(e))
            raise
        result.setdefault('command', command)
        result.setdefault('seed', self.seed)
        if run_id is not None:
            status = 'success' if not result['failed'] else 'partial'
            self.store.log_run_complete(run_id, status, verdict=result['verdict'],
                                        output_path=self.config.output)
        return result

    def header(self) -> Dict[str, Any]:
        return build_header(self.config.as_dict(), self.seed)

    def render(self, result: Dict[str, Any]) -> str:
        """The artifact text in the configured format."""
        if self.config.format == 'csv':
            return render_csv(self.header(), result['table'])
        return render_json(self.header(), result['body'])

    def _result(self, body: Dict[str, Any], table: pd.DataFrame,
                verdict: Optional[str] = None, errors: Optional[List[str]] = None,
                success: Optional[int] = None) -> Dict[str, Any]:
        errors = list(errors or [])
        return {
            'command': self.config.command,
            'verdict': verdict,
            'body': body,
            'table': table,
            'seed': self.seed,
            'success': len(table) if success is None else success,
            'failed': len(errors),
            'errors': errors,
        }

    def _values_at(self, func: Callable[[np.ndarray], np.ndarray], radii: Sequence[float],
                   what: str) -> Dict[str, Any]:
        outcome = evaluate_with_fallback(func, radii, self.config.workers)
        if outcome['success'] == 0:
            raise DomainError(f"{what} failed at every radius: {outcome['errors'][0]}")
        return outcome

    # transform

    def run_transform(self) -> Dict[str, Any]:
        """Forward/dual Strichartz, inclusion, k-plane and related radial transforms."""
        cfg_ = self.config
        op = cfg_.operation or 'strichartz-forward'
        if op not in TRANSFORM_OPS:
            raise ConfigError(f"unknown transform op {op!r}; use one of {', '.join(TRANSFORM_OPS)}")
        f = cfg_.radial_profile()
        spec = cfg_.quadrature
        radii = list(cfg_.radii)

        if op in ('kplane', 'dual-kplane'):
            n = cfg_.n
            k = cfg_.dim
            if n is None or k is None:
                raise ConfigError(f"'{op}' needs --n and --dim (the plane dimension k)")
            if op == 'kplane':
                func = lambda r: kplane_radial(f, n, k, r, spec)
            else:
                func = lambda r: dual_kplane_radial(f, n, k, r, spec)
            body = {'operation': op, 'n': n, 'k': k, 'profile': f.label}
        else:
            cfg = cfg_.grassmann()
            body = {'operation': op, 'config': cfg.as_dict(), 'profile': f.label}
            if op == 'existence':
                return self._existence(f, cfg)
            if op == 'consistency-audit':
                audit = consistency_audit(cfg, f, radii, spec)
                table = pd.DataFrame({'radius': audit['probes'], 'factorized': audit['factorized'],
                                      'direct': audit['direct'], 'ratio': audit['ratios']})
                verdict = Verdict.PASS.value if audit['consistent'] else Verdict.FAIL.value
                return self._result({**body, 'audit': audit}, table, verdict)
            if op == 'strichartz-forward':
                func = lambda r: strichartz_forward_radial(f, cfg, r, spec)
            elif op == 'strichartz-dual':
                func = lambda r: strichartz_dual_radial(f, cfg, r, spec)
            elif op == 'strichartz-direct':
                func = lambda r: strichartz_forward_direct(f, cfg, r, spec)
            elif op == 'inclusion':
                func = lambda r: inclusion_radial(f, cfg.j, cfg.k, cfg.n, r, spec)
            else:
                func = lambda r: gonzalez_radial(f, cfg.n, cfg.j, cfg.k, r, spec)

        outcome = self._values_at(func, radii, op)
        table = pd.DataFrame({'radius': radii, 'value': outcome['values']})
        body.update({'radii': radii, 'values': outcome['values'], 'errors': outcome['errors']})
        return self._result(body, table, errors=outcome['errors'], success=outcome['success'])

    def _existence(self, f: RadialProfile, cfg: GrassmannConfig) -> Dict[str, Any]:
        side = self.config.side
        verdict = check_existence(f, cfg, side)
        try:
            bound = lp_existence_bound(cfg, side)
        except DomainError:
            bound = None
        body = {'operation': 'existence', 'config': cfg.as_dict(), 'profile': f.label,
                'existence': verdict.as_dict(), 'lp_bound': bound}
        table = pd.DataFrame([{'side': side, 'head_ok': verdict.head_ok,
                               'tail_ok': verdict.tail_ok, 'method': verdict.method.value,
                               'lp_bound': bound}])
        return self._result(body, table)

    # inversion

    def run_invert(self) -> Dict[str, Any]:
        """Transform a profile, invert it and compare with the original."""
        cfg_ = self.config
        cfg = cfg_.grassmann()
        f = cfg_.radial_profile()
        spec = cfg_.quadrature
        composed = cfg_.composed_quadrature
        radii = [r for r in cfg_.radii if r > 0]
        if cfg_.side == 'forward':
            transformed = tabulate(strichartz_forward_profile(f, cfg, spec), cfg_.grid,
                                   workers=cfg_.workers)
            recovered = strichartz_invert_radial(transformed, cfg, radii, composed, cfg_.grid,
                                                 cfg_.workers)
        else:
            transformed = tabulate(strichartz_dual_profile(f, cfg, spec), cfg_.grid,
                                   workers=cfg_.workers)
            recovered = strichartz_dual_invert_radial(transformed, cfg, radii, composed,
                                                      cfg_.grid, cfg_.workers)

        values = np.asarray(recovered.metadata['values'], dtype=float)
        expected = np.atleast_1d(f(np.asarray(radii)))
        with np.errstate(divide='ignore', invalid='ignore'):
            rel_error = np.abs(values - expected) / np.abs(expected)
        tolerance = cfg_.tolerances['pipeline']
        # a radius where recovery failed counts as an infinite error
        rel_error = np.where(np.isfinite(values), rel_error, np.inf)
        worst = float(np.nanmax(rel_error)) if rel_error.size else float('inf')
        if recovered.metadata['errors']:
            worst = float('inf')
        entry = _bounded(f'invert-{cfg_.side}', worst, tolerance)
        table = pd.DataFrame({'radius': radii, 'recovered': values, 'expected': expected,
                              'relative_error': rel_error})
        body = {
            'config': cfg.as_dict(), 'profile': f.label, 'side': cfg_.side,
            'radii': radii, 'recovered': values, 'expected': expected,
            'relative_error': rel_error, 'max_relative_error': worst,
            'trusted_interval': list(recovered.metadata['trusted_interval']),
            'method': recovered.metadata['method'],
            'errors': recovered.metadata['errors'],
        }
        return self._result(body, table, entry['verdict'], errors=recovered.metadata['errors'])

    # Riesz and Semyanistyi potentials

    def run_riesz(self) -> Dict[str, Any]:
        """Radial Riesz potential with either backend, both, or the constant calibration."""
        cfg_ = self.config
        d = cfg_.dim if cfg_.dim is not None else cfg_.n
        if d is None or cfg_.alpha is None:
            raise ConfigError("'riesz' needs --alpha and --dim (or --n)")
        backend = cfg_.backend
        if backend not in RIESZ_BACKENDS:
            raise ConfigError(f"unknown backend {backend!r}; "
                              f"use one of {', '.join(RIESZ_BACKENDS)}")
        alpha = float(cfg_.alpha)
        spec = cfg_.quadrature
        if backend == 'calibrate':
            calibration = calibrate_riesz_constant(alpha, d, spec)
            entry = _bounded('riesz-calibration', calibration['relative_deviation'],
                             cfg_.tolerances['single'])
            return self._result({'calibration': calibration}, pd.DataFrame([calibration]),
                                entry['verdict'])

        f = cfg_.radial_profile()
        radii = [r for r in cfg_.radii if r > 0]
        backends = (RieszBackend.EK, RieszBackend.ANGULAR) if backend == 'both' \
            else (RieszBackend.of(backend),)
        columns = {'radius': radii}
        errors = []
        for which in backends:
            outcome = self._values_at(lambda r: riesz_radial(f, alpha, d, r, which, spec),
                                      radii, f'Riesz potential ({which.value})')
            columns[which.value] = outcome['values']
            errors.extend(outcome['errors'])
        body = {'profile': f.label, 'alpha': alpha, 'd': d, **columns}
        verdict = None
        if backend == 'both':
            ek = np.asarray(columns[RieszBackend.EK.value])
            angular = np.asarray(columns[RieszBackend.ANGULAR.value])
            deviation = float(np.nanmax(np.abs(ek - angular) / np.abs(angular)))
            entry = _bounded('riesz-backends', deviation, cfg_.tolerances['single'])
            body['max_backend_deviation'] = deviation
            verdict = entry['verdict']
        return self._result(body, pd.DataFrame(columns), verdict, errors=errors)

    def run_semyanistyi(self) -> Dict[str, Any]:
        """P^α_k f (forward, or by the direct kernel) and the dual P^{α*}_k φ."""
        cfg_ = self.config
        n = cfg_.n
        k = cfg_.dim
        if n is None or k is None or cfg_.alpha is None:
            raise ConfigError("'semyanistyi' needs --n, --dim (the plane dimension k) and --alpha")
        op = cfg_.operation or 'forward'
        if op not in SEMYANISTYI_OPS:
            raise ConfigError(f"unknown semyanistyi op {op!r}; use one of "
                              f"{', '.join(SEMYANISTYI_OPS)}")
        alpha = float(cfg_.alpha)
        f = cfg_.radial_profile()
        spec, grid, workers = cfg_.quadrature, cfg_.grid, cfg_.workers
        radii = [r for r in cfg_.radii if r > 0]
        if op == 'forward':
            func = lambda r: semyanistyi_radial(f, n, k, alpha, r, spec, grid, workers=workers)
        elif op == 'direct':
            func = lambda r: semyanistyi_direct_radial(f, n, k, alpha, r, spec, grid, workers)
        else:
            func = lambda r: semyanistyi_dual_radial(f, n, k, alpha, r, spec, grid, workers)
        # one call over all radii so the inner tabulation runs once
        values = np.atleast_1d(func(np.asarray(radii)))
        body = {'operation': op, 'n': n, 'k': k, 'alpha': alpha, 'profile': f.label,
                'radii': radii, 'values': values}
        return self._result(body, pd.DataFrame({'radius': radii, 'value': values}))

    # verification suites

    def run_verify(self) -> Dict[str, Any]:
        """Run one verification suite, or all of them."""
        suite = self.config.suite or ALL_SUITES
        runners = {
            'duality': self._suite_duality,
            'fuglede': self._suite_fuglede,
            'intertwine': self._suite_intertwine,
            'semyanistyi': self._suite_semyanistyi,
            'semigroup': self._suite_semigroup,
            'sharpness': self._suite_sharpness,
            'mc-vs-radial': self._suite_mc_vs_radial,
        }
        if suite != ALL_SUITES and suite not in runners:
            raise ConfigError(f"unknown suite {suite!r}; use one of {', '.join(SUITES)} or all")
        cfg = self.config.grassmann()
        names = SUITES if suite == ALL_SUITES else (suite,)

        entries: List[Dict[str, Any]] = []
        errors: List[str] = []
        for name in names:
            logger.info("verify: suite %s on %s", name, cfg)
            try:
                suite_entries = runners[name](cfg)
            except StrichartzError as e:
                if suite != ALL_SUITES:
                    raise
                errors.append(f"{name}: {e}")
                suite_entries = [_entry(name, Verdict.FAIL.value, float('nan'), float('nan'),
                                        error=str(e))]
            for entry in suite_entries:
                entry['suite'] = name
                if entry.get('report', {}).get('errors'):
                    errors.extend(f"{entry['check']}: {m}" for m in entry['report']['errors'])
            entries.extend(suite_entries)

        verdict = worst_verdict([e['verdict'] for e in entries])
        table = pd.DataFrame([{key: e.get(key) for key in
                               ('suite', 'check', 'verdict', 'statistic', 'tolerance')}
                              for e in entries])
        body = {'suite': suite, 'config': cfg.as_dict(), 'profile': self.config.profile,
                'verdict': verdict, 'checks': entries}
        return self._result(body, table, verdict, errors=errors,
                            success=sum(e['verdict'] == Verdict.PASS.value
                                        for e in entries))

    def _suite_duality(self, cfg: GrassmannConfig) -> List[Dict[str, Any]]:
        """Monte Carlo pairings against the 1-D references, then the weighted dualities."""
        cfg_ = self.config
        f = cfg_.radial_profile()
        tolerances = cfg_.tolerances
        z_limit = tolerances['mc_z']
        if not f.decays_exponentially:
            # pairings and weights 1-4 are only integrable for fast-decaying profiles
            return [_entry('duality', None, float('nan'), z_limit,
                           skipped=f"{f.label} does not decay exponentially")]
        pairing = mc_pairing_duality(f, f, cfg, cfg_.samples, self.seed, cfg_.streams,
                                     cfg_.workers, cfg_.quadrature)
        details = {
            'forward': pairing['forward'].as_dict(),
            'dual': pairing['dual'].as_dict(),
            'reference': pairing['reference'],
            'reference_dual': pairing['reference_dual'],
        }
        entries = [
            _bounded('pairings-agree', abs(pairing['z_pairings']), z_limit, **details),
            _bounded('forward-vs-reference', abs(pairing['z_forward']), z_limit),
            _bounded('dual-vs-reference', abs(pairing['z_dual']), z_limit),
            _bounded('reductions-agree', pairing['reference_agreement'], tolerances['single']),
        ]
        settings = cfg_.check_settings()
        lam = cfg_.lam
        windows = {1: (cfg.l, cfg.n - cfg.j), 2: (cfg.q, cfg.n - cfg.k)}
        for which in (1, 2, 3, 4):
            if which in windows:
                low, high = windows[which]
                lam_w = lam if lam is not None and low < lam < high else 0.5 * (low + high)
            else:
                lam_w = None
            entries.append(_report_entry(check_weighted_duality(f, cfg, lam_w, which, settings)))
        return entries

    def _suite_fuglede(self, cfg: GrassmannConfig) -> List[Dict[str, Any]]:
        cfg_ = self.config
        f = cfg_.radial_profile()
        settings = cfg_.check_settings()
        alpha = cfg_.alpha or 0.0
        beta = cfg_.beta or 0.0
        entries = [_report_entry(check_fuglede(f, cfg, alpha, beta, settings))]
        if f.decays_exponentially:
            # the recovery takes the Riesz order on the k-plane side, i.e. beta
            entries.append(_report_entry(invert_via_range(f, cfg, beta, settings)))
            entries.append(_report_entry(invert_via_range(f, cfg, 0.0, settings, side='dual')))
        return entries

    def _suite_intertwine(self, cfg: GrassmannConfig) -> List[Dict[str, Any]]:
        cfg_ = self.config
        f = cfg_.radial_profile()
        settings = cfg_.check_settings()
        entries = []
        for side, effective in (('forward', cfg), ('dual', cfg.swapped())):
            alpha = cfg_.alpha if cfg_.alpha is not None else effective.ell / 2.0
            entries.append(_report_entry(check_intertwining(f, cfg, alpha, settings, side)))
        return entries

    def _suite_semyanistyi(self, cfg: GrassmannConfig) -> List[Dict[str, Any]]:
        cfg_ = self.config
        f = cfg_.radial_profile()
        settings = cfg_.check_settings()
        alpha = cfg_.alpha or 0.0
        return [_report_entry(check_semyanistyi(f, cfg, alpha, which, settings))
                for which in ('forwardside', 'dualside')]

    def _suite_semigroup(self, cfg: GrassmannConfig) -> List[Dict[str, Any]]:
        """Erdélyi–Kober semigroup and left inverses, and the Riesz semigroup in R^n."""
        cfg_ = self.config
        f = cfg_.radial_profile()
        spec = cfg_.quadrature
        probes = list(cfg_.probes)
        tolerances = cfg_.tolerances
        a1, a2 = SEMIGROUP_ORDERS
        entries = []
        for sign in ('+', '-'):
            entries.append(_bounded(f'ek-semigroup{sign}',
                                    semigroup_check(f, a1, a2, sign, probes, spec),
                                    tolerances['semigroup'], orders=[a1, a2]))
        for sign in ('+', '-'):
            for order in LEFT_INVERSE_ORDERS:
                entries.append(_bounded(f'ek-left-inverse{sign}({order:g})',
                                        left_inverse_deviation(f, order, sign, probes, spec),
                                        tolerances['left_inverse'], order=order))
        alpha = cfg_.alpha if cfg_.alpha is not None else cfg.n / 4.0
        deviation = riesz_semigroup_check(f, alpha, alpha, cfg.n, probes, spec, cfg_.grid,
                                          cfg_.workers)
        entries.append(_bounded('riesz-semigroup', deviation, tolerances['double'],
                                orders=[alpha, alpha], d=cfg.n))
        return entries

    def _suite_sharpness(self, cfg: GrassmannConfig) -> List[Dict[str, Any]]:
        """Counterexample growth at the sharp Lebesgue exponent and convergence below it."""
        side = self.config.side
        spec = self.config.quadrature
        bound = lp_existence_bound(cfg, side)
        at_bound = sharpness_probe(cfg, bound, DIVERGENT_CUTOFFS, side, spec)
        growth = at_bound[-1] / at_bound[0]
        below = bound - SHARPNESS_OFFSET
        converging = sharpness_probe(cfg, below, CONVERGENT_CUTOFFS, side, spec)
        increment = abs(converging[-1] - converging[-2]) / abs(converging[-1])
        grows = growth > SHARPNESS_GROWTH
        return [
            _entry('sharpness-divergent', Verdict.PASS.value if grows else Verdict.FAIL.value,
                   growth, SHARPNESS_GROWTH, s=bound,
                   exponent=counterexample_exponent(cfg, bound, side),
                   cutoffs=list(DIVERGENT_CUTOFFS), values=at_bound),
            _bounded('sharpness-convergent', increment, SHARPNESS_INCREMENT, s=below,
                     exponent=counterexample_exponent(cfg, below, side),
                     final_value=converging[-1]),
        ]

    def _suite_mc_vs_radial(self, cfg: GrassmannConfig) -> List[Dict[str, Any]]:
        cfg_ = self.config
        radii = [r for r in (cfg_.at or MC_RADII) if r > 0]
        comparison = mc_vs_radial(cfg_.radial_profile(), cfg, radii, cfg_.samples, self.seed,
                                  cfg_.streams, cfg_.workers, cfg_.quadrature)
        return [_bounded('mc-vs-radial', comparison['max_abs_z'], cfg_.tolerances['mc_z'],
                         rows=comparison['rows'])]

    # constants, sweeps, grids, history

    def _constant_params(self, cfg_: ExperimentConfig) -> Dict[str, Any]:
        return {'lam': cfg_.lam, 'n': cfg_.n, 'k': cfg_.dim, 'd': cfg_.dim, 'alpha': cfg_.alpha}

    def run_constants(self) -> Dict[str, Any]:
        """Evaluate the named constant, or every constant the given flags determine."""
        cfg_ = self.config
        cfg = cfg_.grassmann() if cfg_.has_dimensions else None
        params = self._constant_params(cfg_)
        if cfg_.name:
            value = constant(cfg_.name, cfg, **params)
            rows = [{'name': cfg_.name, 'value': value}]
            errors = []
        else:
            rows, errors = [], []
            for name in constant_names():
                try:
                    rows.append({'name': name, 'value': constant(name, cfg, **params)})
                except DomainError as e:
                    errors.append(f"{name}: {e}")
            if not rows:
                raise DomainError(f"no constant can be evaluated from the given flags: "
                                  f"{errors[0]}")
        body = {'config': cfg.as_dict() if cfg else None,
                'parameters': {k: v for k, v in params.items() if v is not None},
                'constants': {row['name']: row['value'] for row in rows},
                'skipped': errors}
        # skipped constants are expected when listing; they are not failures
        return self._result(body, pd.DataFrame(rows), success=len(rows))

    def run_sweep(self) -> Dict[str, Any]:
        """Repeat a constant or transform evaluation over values of one parameter."""
        cfg_ = self.config
        if cfg_.vary not in SWEEPABLE or not cfg_.values:
            raise ConfigError(f"'sweep' needs --vary (one of {', '.join(SWEEPABLE)}) "
                              f"and --values")
        rows: List[Dict[str, Any]] = []
        errors: List[str] = []
        for value in cfg_.values:
            param = int(value) if cfg_.vary in ('n', 'p', 'q', 'l', 'dim') else float(value)
            point = dataclasses.replace(cfg_, **{cfg_.vary: param})
            try:
                if point.name:
                    cfg = point.grassmann() if point.has_dimensions else None
                    rows.append({cfg_.vary: param, 'radius': None,
                                 'value': constant(point.name, cfg,
                                                   **self._constant_params(point)),
                                 'status': 'success'})
                    continue
                engine = ExperimentEngine(dataclasses.replace(point, command='transform'))
                engine.seed = self.seed
                sub = engine.run_transform()
                for radius, v in zip(sub['table']['radius'], sub['table']['value']):
                    rows.append({cfg_.vary: param, 'radius': float(radius), 'value': float(v),
                                 'status': 'success' if np.isfinite(v) else 'error'})
                errors.extend(f"{cfg_.vary}={param:g}: {m}" for m in sub['errors'])
            except StrichartzError as e:
                errors.append(f"{cfg_.vary}={param:g}: {e}")
                rows.append({cfg_.vary: param, 'radius': None, 'value': float('nan'),
                             'status': 'error'})
        table = pd.DataFrame(rows)
        body = {'vary': cfg_.vary, 'values': list(cfg_.values),
                'operation': cfg_.name or cfg_.operation or 'strichartz-forward',
                'rows': rows, 'errors': errors}
        return self._result(body, table, errors=errors,
                            success=sum(r['status'] == 'success' for r in rows))

    def run_export_grid(self) -> Dict[str, Any]:
        """Tabulate the profile, or a transform of it, into a CSV grid file."""
        cfg_ = self.config
        if not cfg_.output:
            raise ConfigError("'export-grid' needs --output (the grid CSV path)")
        f = cfg_.radial_profile()
        op = cfg_.operation
        spec = cfg_.quadrature
        if op is None or op == 'profile':
            source = f
        elif op == 'strichartz-forward':
            source = strichartz_forward_profile(f, cfg_.grassmann(), spec)
        elif op == 'strichartz-dual':
            source = strichartz_dual_profile(f, cfg_.grassmann(), spec)
        else:
            raise ConfigError(f"export-grid supports --op profile, strichartz-forward or "
                              f"strichartz-dual, got {op!r}")
        grid = tabulate(source, cfg_.grid, workers=cfg_.workers)
        directory = os.path.dirname(cfg_.output)
        if directory:
            os.makedirs(directory, exist_ok=True)
        write_grid_csv(grid, cfg_.output, extra_header={'tool_seed': self.seed})
        body = {'operation': op or 'profile', 'label': grid.label, 'path': cfg_.output,
                'points': int(grid.radii.size), 'head_exponent': grid.head_exponent,
                'tail_exponent': grid.tail_exponent}
        result = self._result(body, pd.DataFrame({'radius': grid.radii,
                                                    'value': grid.values * grid.amplitude}))
        result['artifact_written'] = cfg_.output
        return result

    def run_history(self) -> Dict[str, Any]:
        if self.store is None:
            raise ConfigError("'history' needs the run log (storage.path)")
        limit = self.config.limit
        runs = self.store.recent_runs(limit)
        return self._result({'runs': runs}, pd.DataFrame(runs))
