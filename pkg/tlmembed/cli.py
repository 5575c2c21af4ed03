# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""The ``tlme-embed`` command line tool.

Every command reads a JSON run configuration (see
:mod:`tlmembed.config`) and writes CSV files into the output directory.
Each file starts with ``#`` lines naming the schema version, the
command, the SHA-256 of the canonical configuration and the seed, so
that a run can be repeated; the same configuration and seed always give
byte-identical files.

Exit codes: 0 on success, 1 on a numerical failure or a failed map
check, 2 on a configuration error.
"""

import argparse
import logging
import os
import sys
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from tlmembed import __version__
from tlmembed.config import RunConfig, bundled_configs, load_config
from tlmembed.dynamics import coherence_signal, evolve_rk4, map_discrepancy, \
 run_mapped_mc, theta_from_coherence
from tlmembed.exceptions import TlmeEmbedException, ConfigParse, \
 NumericalFailure, SchemeUnavailable
from tlmembed.linalg import ket
from tlmembed.mapping import MappedSystem, Scheme, build_mapping, \
 compute_alpha
from tlmembed.model import LindbladSpec, TlmeSpec, lindblad_as_tlme, \
 tilted_generator
from tlmembed.qfilter import alpha_summary, normalized, \
 run_unnormalized_filter, simulate_measured_system, stratonovich_alpha, \
 trace_distance
from tlmembed.trajstats import MicromaserSpec, build_micromaser, \
 full_scale_spec, theta_sweep, unitary_coupling
from tlmembed.util import metadata, state_cells, state_columns, write_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2


def _header(config: RunConfig) -> Dict[str, object]:
	return metadata(config.command, config.sha256(), config.seed, __version__)


def _as_tlme(generator: object) -> TlmeSpec:
	if isinstance(generator, LindbladSpec):
		return lindblad_as_tlme(generator)
	return generator


def cmd_map_check(config: RunConfig, args: argparse.Namespace) -> int:
	"""Compares the direct integration of a TLME with its recovery from
	each mapped system, and writes ``map_check.csv``."""
	spec = _as_tlme(config.generator())
	grid = config.grid()
	rho0 = config.initial_state(spec.dim)
	tolerance = config.get('tolerance')
	decomposition = compute_alpha(spec)
	requested = config.get('schemes')
	if requested is None:
		requested = [scheme.value for scheme in Scheme]
		if not spec.hermiticity_preserving:
			requested.remove(Scheme.DIAGONAL.value)
	rows = []
	for name in requested:
		ms = build_mapping(spec, name)
		discrepancy = map_discrepancy(spec, ms, rho0, grid)
		passed = discrepancy <= tolerance
		if passed:
			logger.info('%s scheme: max discrepancy %.3g', name, discrepancy)
		else:
			logger.error('%s scheme: max discrepancy %.3g exceeds %g', name,
			             discrepancy, tolerance)
		rows.append({
			'scheme': name,
			'alpha': ms.alpha,
			'efficiency': 'EFFICIENT' if decomposition.efficient
			              else 'INEFFICIENT',
			'max_discrepancy': discrepancy,
			'passed': passed,
		})
	write_csv(os.path.join(args.out, 'map_check.csv'), _header(config),
	          ['scheme', 'alpha', 'efficiency', 'max_discrepancy', 'passed'],
	          rows)
	return EXIT_OK if all(row['passed'] for row in rows) else EXIT_NUMERICAL


def cmd_theta_sweep(config: RunConfig, args: argparse.Namespace) -> int:
	"""Computes ``theta(s)`` on the configured grid of ``s`` values and
	writes ``theta_sweep.csv``."""
	model = config.model()
	method = config.get('method')
	if args.full_scale:
		if not isinstance(model, MicromaserSpec) or method != 'growth':
			raise ConfigParse('--paper-scale needs a micromaser model and '
			                  'the growth method')
		model = full_scale_spec()
		logger.warning('Full-scale run (%r): expect a long runtime', model)
	points = theta_sweep(model, config.get('s_values'), method, config.grid(),
	                     config.get('counted_channel'),
	                     config.get('n_trajectories'), config.seed,
	                     args.workers, config.get('timing'))
	write_csv(os.path.join(args.out, 'theta_sweep.csv'), _header(config),
	          ['s', 'theta', 'stderr', 'method', 'wall_time_s'],
	          [point._asdict() for point in points])
	return EXIT_OK


def _mapped_system(config: RunConfig) -> MappedSystem:
	model = config.model()
	scheme = config.get('scheme')
	if isinstance(model, TlmeSpec):
		return build_mapping(model, scheme)
	s = config.get('s')
	if s is None:
		raise ConfigParse('s: required for {} models'.format(
			config.model_kind()))
	base = build_micromaser(model) if isinstance(model, MicromaserSpec) \
	       else model
	channel = config.get('counted_channel')
	if s >= 0:
		return unitary_coupling(base, channel, s)
	return build_mapping(tilted_generator(base, channel, s), scheme)


def cmd_mc(config: RunConfig, args: argparse.Namespace) -> int:
	"""Unravels a mapped system with quantum jumps and writes the
	weighted trace with its batch standard error to ``mc.csv``; the
	fitted slope is appended as a summary line."""
	ms = _mapped_system(config)
	grid = config.grid()
	n_trajectories = config.get('n_trajectories')
	ensemble = run_mapped_mc(ms, ket(0, ms.system_dim), grid, n_trajectories,
	                         config.seed, workers=args.workers)
	times, values = coherence_signal(ms, ensemble)
	growth = np.exp(ms.alpha * (times - times[0]))
	batches = ensemble.scale * ensemble.weighted_batches.real
	stderr = np.std(batches, axis=0, ddof=1) / np.sqrt(len(batches)) \
	         if len(batches) > 1 else np.zeros(len(times))
	rows = [{'t': t, 'mean_re_weight': growth[k] * values[k].real,
	         'stderr': growth[k] * stderr[k], 'n_trajectories': n_trajectories}
	        for k, t in enumerate(times)]
	slope, slope_stderr = theta_from_coherence(ms, ensemble, with_error=True)
	write_csv(os.path.join(args.out, 'mc.csv'), _header(config),
	          ['t', 'mean_re_weight', 'stderr', 'n_trajectories'], rows,
	          {'theta': slope, 'theta_stderr': slope_stderr})
	return EXIT_OK


def cmd_filter_demo(config: RunConfig, args: argparse.Namespace) -> int:
	"""Runs the measured system and the unnormalized filter, and writes
	``filter_trajectory.csv`` and ``filter_alpha.csv`` for the first
	seed. With ``n_seeds > 1`` the efficiency classifier is summarized
	over consecutive seeds."""
	spec = config.filter_spec()
	rho0 = config.initial_state(spec.dim)
	pi0 = rho0
	if config.get('filter_initial_state') is not None:
		pi0 = config.initial_state(spec.dim, 'filter_initial_state')
	traces = []
	for index in range(config.get('n_seeds')):
		true_states, signal = simulate_measured_system(spec, rho0,
		                                               config.seed + index)
		traces.append(stratonovich_alpha(spec, signal))
		if index == 0:
			first_true, first_signal = true_states, signal
	estimates = run_unnormalized_filter(spec, first_signal, pi0)
	unit = normalized(estimates)
	header = _header(config)
	times = spec.times()
	columns = ['t'] + state_columns(spec.dim, 'pi') + ['trace_re', 'dy',
	                                                    'distance']
	rows = []
	for k, t in enumerate(times):
		row = {'t': t}
		row.update(state_cells(estimates[k], 'pi'))
		row['trace_re'] = np.trace(estimates[k]).real
		row['dy'] = first_signal.dy[k] if k < len(first_signal.dy) else None
		row['distance'] = trace_distance(unit[k], first_true[k])
		rows.append(row)
	write_csv(os.path.join(args.out, 'filter_trajectory.csv'), header,
	          columns, rows)
	alpha = traces[0]
	summary = alpha_summary(traces)
	write_csv(os.path.join(args.out, 'filter_alpha.csv'), header,
	          ['t', 'alpha_dt_term', 'alpha_signal_term', 'alpha_total',
	           'cumulative'],
	          [{'t': alpha.times[k], 'alpha_dt_term': alpha.dt_term[k],
	            'alpha_signal_term': alpha.signal_term[k],
	            'alpha_total': alpha.total[k],
	            'cumulative': alpha.cumulative[k]}
	           for k in range(len(alpha.times))],
	          dict(summary._asdict(), decoupled=spec.is_decoupled()))
	return EXIT_OK


def cmd_evolve(config: RunConfig, args: argparse.Namespace) -> int:
	"""Integrates the configured generator and writes ``evolve.csv``."""
	generator = config.generator()
	rho0 = config.initial_state(generator.dim)
	evolution = evolve_rk4(generator, rho0, config.grid())
	rows = []
	for t, rho in zip(evolution.times, evolution.states):
		row = {'t': t}
		row.update(state_cells(rho))
		row['trace_re'] = np.trace(rho).real
		rows.append(row)
	write_csv(os.path.join(args.out, 'evolve.csv'), _header(config),
	          ['t'] + state_columns(generator.dim) + ['trace_re'], rows)
	return EXIT_OK


COMMANDS = {
	'map-check': cmd_map_check,
	'theta-sweep': cmd_theta_sweep,
	'mc': cmd_mc,
	'filter-demo': cmd_filter_demo,
	'evolve': cmd_evolve,
}  # type: Dict[str, Callable[[RunConfig, argparse.Namespace], int]]


def build_parser() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument('--config', required=True,
	                    help='JSON run configuration, or the name of a '
	                    'bundled one ({})'.format(', '.join(bundled_configs())))
	common.add_argument('--out', default='.',
	                    help='output directory (default: current directory)')
	common.add_argument('--seed', type=int, default=None,
	                    help='override the seed of the configuration')
	common.add_argument('--workers', type=int, default=1,
	                    help='worker processes for trajectory ensembles')
	common.add_argument('-v', '--verbose', action='count', default=0,
	                    help='log progress (-vv for debug output)')
	parser = argparse.ArgumentParser(
		prog='tlme-embed',
		description='Lindblad embeddings of time-local master equations.')
	parser.add_argument('--version', action='version',
	                    version='%(prog)s ' + __version__)
	subparsers = parser.add_subparsers(dest='command', metavar='command')
	subparsers.required = True
	helps = {
		'map-check': 'compare a TLME with its mapped systems',
		'theta-sweep': 'compute theta(s) over a range of s',
		'mc': 'quantum jump unravelling of a mapped system',
		'filter-demo': 'homodyne filter and its efficiency classifier',
		'evolve': 'integrate a TLME or Lindblad equation',
	}
	for name in COMMANDS:
		subparser = subparsers.add_parser(name, parents=[common],
		                                  help=helps[name])
		if name == 'theta-sweep':
			subparser.add_argument('--paper-scale', '--full-scale',
			                       dest='full_scale', action='store_true',
			                       help='replace the micromaser with the '
			                       'large preset (growth method only)')
		subparser.set_defaults(full_scale=False)
	return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
	args = build_parser().parse_args(argv)
	level = (logging.WARNING, logging.INFO)[args.verbose] \
	        if args.verbose < 2 else logging.DEBUG
	logging.basicConfig(level=level,
	                    format='%(levelname)s %(name)s: %(message)s')
	if args.workers < 1:
		logger.error('--workers must be positive')
		return EXIT_CONFIG
	try:
		config = load_config(args.config)
		if config.command != args.command:
			raise ConfigParse('command: configuration is for {!r}, not {!r}'
			                  .format(config.command, args.command))
		if args.seed is not None:
			config = config.with_seed(args.seed)
		return COMMANDS[args.command](config, args)
	except NumericalFailure as ex:
		logger.error('%s: %s', type(ex).__name__, ex)
		return EXIT_NUMERICAL
	except (ConfigParse, SchemeUnavailable) as ex:
		logger.error('%s', ex)
		return EXIT_CONFIG
	except (TlmeEmbedException, ValueError) as ex:
		logger.error('%s: %s', type(ex).__name__, ex)
		return EXIT_CONFIG


if __name__ == '__main__':
	sys.exit(main())
