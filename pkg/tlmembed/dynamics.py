# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""Deterministic and stochastic time evolution.

:func:`evolve_rk4` integrates any generator (a
:class:`~tlmembed.model.LindbladSpec`, a
:class:`~tlmembed.model.TlmeSpec` or a piecewise-constant
:class:`~tlmembed.model.Schedule`) with the classical fourth order
Runge-Kutta method.

:func:`jump_mc` and :func:`jump_mc_ensemble` unravel a Lindblad equation
into quantum jump trajectories. Trajectory ``i`` of an ensemble always
uses the seed ``base_seed + i``, and trajectories are processed in
fixed chunks of 1000, so the result does not depend on the number of
worker processes.

The remaining functions extract the large deviation function
``theta``: from the growth of the trace under the TLME
(:func:`theta_from_growth`), from the decay of the weighted trace of a
mapped system (:func:`theta_from_coherence`), or from the dense
vectorized generator (:func:`theta_dense`, qubit scale only).
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm

from tlmembed.defines import STIFFNESS_LIMIT, RENORM_INTERVAL, \
 THETA_SLOPE_TOL, SIGNAL_FLOOR, FIT_FRACTION, MC_CHUNK_SIZE, MC_BATCHES, \
 HERMITIAN_TOL, DENSE_STEP_DIM
from tlmembed.exceptions import DimensionMismatch, NonUnitInitialState, \
 NotConverged, SignalUnderflow
from tlmembed.linalg import ComplexMatrix, as_matrix
from tlmembed.mapping import Mapped, MappedSchedule, MappedSystem, \
 initial_embedding, integrated_alpha, recover_state
from tlmembed.model import DensityMatrix, Generator, LindbladSpec, Schedule, \
 TlmeSpec, check_state, effective_hamiltonian, generator_function, \
 generator_terms, identity

logger = logging.getLogger(__name__)


class TimeGrid(object):
	"""A uniform time grid from `t0` to `t1` with step `dt`; states are
	sampled every `sample_stride` steps and at the final step."""

	def __init__(self, t0: float, t1: float, dt: float,
	             sample_stride: int = 1) -> None:
		if not dt > 0:
			raise ValueError('dt must be positive, got {}'.format(dt))
		if not t1 > t0:
			raise ValueError('t1 must exceed t0')
		if (t1 - t0) / dt < 1 - 1e-9:
			raise ValueError('Grid must contain at least one step')
		if sample_stride < 1:
			raise ValueError('sample_stride must be a positive integer')
		self.t0 = float(t0)
		self.t1 = float(t1)
		self.dt = float(dt)
		self.sample_stride = int(sample_stride)

	@classmethod
	def span(cls, t1: float, dt: float, samples: int = 100) -> 'TimeGrid':
		"""A grid on ``[0, t1]`` with roughly `samples` sample points."""
		steps = int(round(t1 / dt))
		return cls(0.0, t1, dt, max(1, steps // samples))

	@property
	def n_steps(self) -> int:
		return int(round((self.t1 - self.t0) / self.dt))

	def sample_indices(self) -> np.ndarray:
		indices = list(range(0, self.n_steps + 1, self.sample_stride))
		if indices[-1] != self.n_steps:
			indices.append(self.n_steps)
		return np.array(indices)

	def sample_times(self) -> np.ndarray:
		return self.t0 + self.sample_indices() * self.dt

	def __repr__(self) -> str:
		return 'TimeGrid({:g}, {:g}, dt={:g}, stride={})'.format(
			self.t0, self.t1, self.dt, self.sample_stride)


class Evolution(NamedTuple):
	"""Sampled result of :func:`evolve_rk4`."""
	times: np.ndarray
	states: np.ndarray

	def state_at(self, t: float) -> DensityMatrix:
		return self.states[_sample_index(self.times, t)]

	@property
	def final(self) -> DensityMatrix:
		return self.states[-1]


def _sample_index(times: np.ndarray, t: float) -> int:
	index = int(np.argmin(np.abs(times - t)))
	spacing = times[1] - times[0] if len(times) > 1 else 1.0
	if abs(times[index] - t) > 1e-9 * max(1.0, abs(t), spacing):
		raise ValueError('Time {} is not a sample time'.format(t))
	return index


AnyGenerator = Union[Generator, Schedule]


def _rk4_step(apply, rho: DensityMatrix, dt: float) -> DensityMatrix:
	k1 = apply(rho)
	k2 = apply(rho + 0.5 * dt * k1)
	k3 = apply(rho + 0.5 * dt * k2)
	k4 = apply(rho + dt * k3)
	return rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_step_matrix(generator: Generator, dt: float) -> np.ndarray:
	"""Returns the matrix of one RK4 step on column-stacked states,
	``I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24`` with ``hL`` the
	vectorized generator times `dt`. For a constant generator this is
	exactly the RK4 update."""
	scaled = liouvillian_matrix(generator) * dt
	unit = np.eye(scaled.shape[0], dtype=np.complex128)
	step = unit + scaled / 4
	for order in (3, 2, 1):
		step = unit + (scaled @ step) / order
	return step


class _Stepper(object):
	"""Advances a state by RK4 steps of the generator active at each
	step. Small systems are stepped with the dense RK4 step matrix on
	column-stacked states, larger ones matrix-free."""

	def __init__(self, generator: AnyGenerator, grid: TimeGrid) -> None:
		self.grid = grid
		self.dim = generator.dim
		self.dense = self.dim <= DENSE_STEP_DIM
		if isinstance(generator, Schedule):
			self.schedule = generator
			generators = [spec for _, spec in generator.segments]
			for boundary in generator.boundaries()[1:-1]:
				steps = (boundary - grid.t0) / grid.dt
				if abs(steps - round(steps)) > 1e-9:
					logger.warning('Schedule boundary %g is not on the time '
					               'grid', boundary)
		else:
			self.schedule = None
			generators = [generator]
		if self.dense:
			self.steps = [rk4_step_matrix(spec, grid.dt) for spec in generators]
		else:
			self.functions = [generator_function(spec) for spec in generators]
		self._powers = {}
		norm = generator.norm_estimate()
		if norm * grid.dt >= STIFFNESS_LIMIT:
			logger.warning('Step size dt = %g is large for generator norm '
			               '%.3g (||K|| dt = %.3g)', grid.dt, norm,
			               norm * grid.dt)

	def _segment(self, step: int) -> int:
		if self.schedule is None:
			return 0
		midpoint = self.grid.t0 + (step + 0.5) * self.grid.dt
		return self.schedule.index_at(midpoint)

	def pack(self, rho: DensityMatrix) -> np.ndarray:
		return vectorize(rho).copy() if self.dense else rho.copy()

	def unpack(self, state: np.ndarray) -> DensityMatrix:
		if self.dense:
			return state.reshape(self.dim, self.dim, order='F')
		return state

	def trace(self, state: np.ndarray) -> complex:
		if self.dense:
			return complex(state[::self.dim + 1].sum())
		return complex(np.trace(state))

	def advance(self, state: np.ndarray, step: int) -> np.ndarray:
		segment = self._segment(step)
		if self.dense:
			return self.steps[segment] @ state
		return _rk4_step(self.functions[segment], state, self.grid.dt)

	def advance_many(self, state: np.ndarray, step: int,
	                 count: int) -> np.ndarray:
		"""Advances `count` steps; a constant dense generator uses a cached
		matrix power."""
		if self.dense and self.schedule is None:
			if count not in self._powers:
				self._powers[count] = np.linalg.matrix_power(self.steps[0],
				                                             count)
			return self._powers[count] @ state
		for offset in range(count):
			state = self.advance(state, step + offset)
		return state


def evolve_rk4(generator: AnyGenerator, rho0: DensityMatrix,
               grid: TimeGrid) -> Evolution:
	"""Integrates ``d rho / dt = K(rho)`` with classical RK4.

	A warning is logged when ``||K|| dt`` reaches 0.1.

	:returns: an :class:`Evolution` with the states at
	          :meth:`TimeGrid.sample_times`
	:raises: :exc:`~tlmembed.exceptions.DimensionMismatch`
	"""
	rho = check_state(rho0, generator.dim)
	stepper = _Stepper(generator, grid)
	state = stepper.pack(rho)
	sample_indices = grid.sample_indices()
	states = np.empty((len(sample_indices),) + rho.shape, dtype=np.complex128)
	states[0] = rho
	position = 1
	for step in range(grid.n_steps):
		state = stepper.advance(state, step)
		if position < len(sample_indices) and \
		   step + 1 == sample_indices[position]:
			states[position] = stepper.unpack(state)
			position += 1
	return Evolution(grid.sample_times(), states)


def _alpha_integral(ms: Mapped, elapsed: float, t: float) -> float:
	if isinstance(ms, MappedSchedule):
		return integrated_alpha(ms, t)
	return ms.alpha * elapsed


def map_discrepancy(spec: Union[TlmeSpec, Schedule], ms: Mapped,
                    rho0: DensityMatrix, grid: TimeGrid) -> float:
	"""Integrates `spec` directly and through its mapped system, and
	returns the largest entrywise difference of the two state histories.
	"""
	direct = evolve_rk4(spec, rho0, grid)
	mapped = evolve_rk4(ms.lindblad, initial_embedding(ms, rho0), grid)
	worst = 0.0
	for t, rho, rho_tilde in zip(direct.times, direct.states, mapped.states):
		recovered = recover_state(ms, rho_tilde, t - grid.t0,
		                          _alpha_integral(ms, t - grid.t0, t))
		worst = max(worst, float(np.max(np.abs(rho - recovered))))
	return worst


class TrajectoryRecord(NamedTuple):
	"""One quantum jump trajectory. `samples` holds ``(t, values)`` pairs
	with the complex expectation values of the requested observables in
	the normalized state; `final_weighted_trace` is the weighted trace of
	the normalized final state, or :const:`None` without a weight."""
	seed: int
	jump_events: Tuple[Tuple[float, int], ...]
	samples: Tuple[Tuple[float, np.ndarray], ...]
	final_weighted_trace: Optional[complex]

	def jump_count(self, channel: Optional[int] = None) -> int:
		return sum(1 for _, index in self.jump_events
		           if channel is None or index == channel)


class TrajectoryEnsemble(NamedTuple):
	"""Reduced result of :func:`jump_mc_ensemble`.

	`mean_state` is the ensemble mean of the normalized projectors at the
	sample times, `observable_means` the mean expectation values, and
	`weighted_mean` / `weighted_batches` the mean weighted trace over all
	trajectories and over each of up to 20 contiguous batches. `scale`
	is the embedding scale of the initial state, so the joint state is
	estimated by ``scale * mean_state``."""
	times: np.ndarray
	mean_state: np.ndarray
	observable_means: np.ndarray
	weighted_mean: Optional[np.ndarray]
	weighted_batches: Optional[np.ndarray]
	jump_counts: np.ndarray
	records: Tuple[TrajectoryRecord, ...]
	n_trajectories: int
	base_seed: int
	scale: float

	def state_at(self, t: float) -> DensityMatrix:
		return self.scale * self.mean_state[_sample_index(self.times, t)]


class _ChunkResult(NamedTuple):
	state_sum: np.ndarray
	observable_sum: np.ndarray
	weighted_batch_sums: Optional[np.ndarray]
	jump_counts: np.ndarray
	records: List[TrajectoryRecord]


def _run_chunk(propagator: np.ndarray, jumps: np.ndarray,
               psi0: np.ndarray, grid: TimeGrid, seeds: Sequence[int],
               batch_ids: np.ndarray, n_batches: int,
               observables: np.ndarray, weight: Optional[np.ndarray],
               keep_records: bool) -> _ChunkResult:
	n = len(seeds)
	dim = psi0.shape[0]
	rngs = [np.random.default_rng(seed) for seed in seeds]
	psi = np.tile(psi0, (n, 1))
	norm2 = np.ones(n)
	thresholds = np.array([rng.random() for rng in rngs])
	events = [[] for _ in range(n)]
	samples = [[] for _ in range(n)]
	sample_indices = grid.sample_indices()
	times = grid.sample_times()
	state_sum = np.zeros((len(sample_indices), dim, dim), dtype=np.complex128)
	observable_sum = np.zeros((len(sample_indices), len(observables)),
	                          dtype=np.complex128)
	weighted_sums = None
	if weight is not None:
		weighted_sums = np.zeros((n_batches, len(sample_indices)),
		                         dtype=np.complex128)
	transposed = propagator.T
	final = None

	def record_sample(position: int) -> None:
		nonlocal final
		phi = psi / np.sqrt(norm2)[:, None]
		state_sum[position] = np.einsum('ni,nj->ij', phi, phi.conj())
		values = np.einsum('ni,kij,nj->nk', phi.conj(), observables, phi)
		observable_sum[position] = values.sum(axis=0)
		if weight is not None:
			weighted = np.einsum('ni,ij,nj->n', phi.conj(), weight, phi)
			np.add.at(weighted_sums[:, position], batch_ids, weighted)
			final = weighted
		if keep_records:
			for index in range(n):
				samples[index].append((times[position], values[index].copy()))

	record_sample(0)
	position = 1
	for step in range(grid.n_steps):
		t_start = grid.t0 + step * grid.dt
		previous = norm2
		psi = psi @ transposed
		norm2 = np.einsum('ni,ni->n', psi.conj(), psi).real
		jumped = np.nonzero(norm2 < thresholds)[0]
		if len(jumped):
			norm2 = norm2.copy()
			amplitudes = np.einsum('kij,nj->nki', jumps, psi[jumped])
			weights = np.einsum('nki,nki->nk', amplitudes.conj(),
			                    amplitudes).real
			for row, index in enumerate(jumped):
				total = weights[row].sum()
				rng = rngs[index]
				if total > 0:
					cumulative = np.cumsum(weights[row]) / total
					channel = int(np.searchsorted(cumulative, rng.random(),
					                              side='right'))
					channel = min(channel, len(cumulative) - 1)
					drop = previous[index] - norm2[index]
					fraction = (previous[index] - thresholds[index]) / drop \
					           if drop > 0 else 1.0
					events[index].append((t_start + fraction * grid.dt,
					                      channel))
					psi[index] = amplitudes[row, channel] / \
					             math.sqrt(weights[row, channel])
				else:
					psi[index] = psi[index] / math.sqrt(norm2[index])
				norm2[index] = 1.0
				thresholds[index] = rng.random()
		if position < len(sample_indices) and \
		   step + 1 == sample_indices[position]:
			record_sample(position)
			position += 1
	jump_counts = np.zeros((n, len(jumps)), dtype=np.int64)
	for index, trajectory in enumerate(events):
		for _, channel in trajectory:
			jump_counts[index, channel] += 1
	records = []
	if keep_records:
		for index in range(n):
			records.append(TrajectoryRecord(
				int(seeds[index]), tuple(events[index]),
				tuple(samples[index]),
				complex(final[index]) if final is not None else None))
	return _ChunkResult(state_sum, observable_sum, weighted_sums,
	                    jump_counts, records)


def _check_psi0(psi0: np.ndarray, dim: int) -> np.ndarray:
	psi0 = np.asarray(psi0, dtype=np.complex128)
	if psi0.shape != (dim,):
		raise DimensionMismatch('State vector has shape {}, expected ({},)'
		                        .format(psi0.shape, dim))
	norm = float(np.linalg.norm(psi0))
	if abs(norm - 1) > HERMITIAN_TOL * 100:
		raise NonUnitInitialState('Initial state has norm {:.12g}'.format(norm))
	return psi0


def _stack(operators: Sequence[ComplexMatrix], dim: int) -> np.ndarray:
	if not operators:
		return np.zeros((0, dim, dim), dtype=np.complex128)
	stacked = np.array([as_matrix(o, 'observable') for o in operators])
	if stacked.shape[1:] != (dim, dim):
		raise DimensionMismatch('Observables must be {0}x{0}'.format(dim))
	return stacked


def jump_mc_ensemble(spec: LindbladSpec, psi0: np.ndarray, grid: TimeGrid,
                     n_trajectories: int, base_seed: int = 0,
                     observables: Sequence[ComplexMatrix] = (),
                     weight: Optional[ComplexMatrix] = None,
                     workers: int = 1, keep_records: bool = False,
                     scale: float = 1.0) -> TrajectoryEnsemble:
	"""Runs `n_trajectories` quantum jump trajectories of `spec`.

	Between jumps the unnormalized state evolves with the exact
	propagator ``exp(-i H_eff dt)``; a jump happens when the squared
	norm drops below a uniform threshold, at a time interpolated inside
	the step, in a channel chosen with probability proportional to
	``||J_k psi||^2``.

	:param observables: joint-space operators whose expectation values
	                    are sampled
	:param weight: a joint-space weight operator such as ``I ⊗ w``; its
	               expectation values are also reduced per batch
	:param workers: number of worker processes; the result is the same
	                for any value
	:param keep_records: keep one :class:`TrajectoryRecord` per
	                     trajectory
	:raises: :exc:`~tlmembed.exceptions.NonUnitInitialState`
	"""
	if n_trajectories < 1:
		raise ValueError('n_trajectories must be positive')
	dim = spec.dim
	psi0 = _check_psi0(psi0, dim)
	propagator = expm(-1j * effective_hamiltonian(spec) * grid.dt)
	jumps = _stack(spec.jumps, dim)
	observables = _stack(observables, dim)
	if weight is not None:
		weight = as_matrix(weight, 'weight')
	n_batches = min(MC_BATCHES, n_trajectories)
	all_batch_ids = np.arange(n_trajectories) * n_batches // n_trajectories
	chunks = []
	for start in range(0, n_trajectories, MC_CHUNK_SIZE):
		stop = min(start + MC_CHUNK_SIZE, n_trajectories)
		chunks.append((propagator, jumps, psi0, grid,
		               [base_seed + index for index in range(start, stop)],
		               all_batch_ids[start:stop], n_batches, observables,
		               weight, keep_records))
	logger.info('Running %d trajectories in %d chunks on %d workers',
	            n_trajectories, len(chunks), workers)
	if workers > 1 and len(chunks) > 1:
		with ProcessPoolExecutor(max_workers=workers) as executor:
			results = list(executor.map(_run_chunk, *zip(*chunks)))
	else:
		results = [_run_chunk(*chunk) for chunk in chunks]
	state_sum = results[0].state_sum.copy()
	observable_sum = results[0].observable_sum.copy()
	weighted_sums = None
	if weight is not None:
		weighted_sums = results[0].weighted_batch_sums.copy()
	for result in results[1:]:
		state_sum += result.state_sum
		observable_sum += result.observable_sum
		if weight is not None:
			weighted_sums += result.weighted_batch_sums
	weighted_mean = weighted_batches = None
	if weight is not None:
		batch_sizes = np.bincount(all_batch_ids, minlength=n_batches)
		weighted_mean = weighted_sums.sum(axis=0) / n_trajectories
		weighted_batches = weighted_sums / batch_sizes[:, None]
	records = tuple(record for result in results for record in result.records)
	return TrajectoryEnsemble(
		grid.sample_times(), state_sum / n_trajectories,
		observable_sum / n_trajectories, weighted_mean, weighted_batches,
		np.concatenate([result.jump_counts for result in results]),
		records, n_trajectories, base_seed, scale)


def jump_mc(spec: LindbladSpec, psi0: np.ndarray, grid: TimeGrid, seed: int,
            observables: Sequence[ComplexMatrix] = (),
            weight: Optional[ComplexMatrix] = None) -> TrajectoryRecord:
	"""Runs a single quantum jump trajectory with the given seed.

	:raises: :exc:`~tlmembed.exceptions.NonUnitInitialState` if
	         ``||psi0|| != 1``
	"""
	ensemble = jump_mc_ensemble(spec, psi0, grid, 1, seed, observables,
	                            weight, keep_records=True)
	return ensemble.records[0]


def run_mapped_mc(ms: MappedSystem, psi0: np.ndarray, grid: TimeGrid,
                  n_trajectories: int, base_seed: int = 0,
                  observables: Sequence[ComplexMatrix] = (),
                  workers: int = 1,
                  keep_records: bool = False) -> TrajectoryEnsemble:
	"""Unravels a mapped system from the pure embedding of `psi0`.

	`observables` are system operators; they are sampled as their
	weighted versions ``X ⊗ w``. The weighted trace ``I ⊗ w`` is always
	reduced.
	"""
	return jump_mc_ensemble(
		ms.lindblad, ms.initial_ket(psi0), grid, n_trajectories, base_seed,
		[ms.weighted_operator(x) for x in observables],
		ms.weighted_operator(identity(ms.system_dim)), workers,
		keep_records, ms.embedding_scale)


Run = Union[DensityMatrix, Evolution, TrajectoryEnsemble]


def weighted_observable(ms: Mapped, run: Run, x: ComplexMatrix,
                        t: float) -> complex:
	"""Returns ``e^{int alpha} Tr[(X ⊗ w) rho~(t)]``.

	`run` is a joint density matrix at time `t` (elapsed since the
	embedding), a deterministic :class:`Evolution` or a
	:class:`TrajectoryEnsemble`; for the latter two `t` must be one of
	the sample times.

	:raises: :exc:`~tlmembed.exceptions.DimensionMismatch`
	"""
	operator = ms.weighted_operator(x)
	if isinstance(run, (Evolution, TrajectoryEnsemble)):
		rho_tilde = run.state_at(t)
		elapsed = t - run.times[0]
	else:
		rho_tilde = check_state(run, 2 * ms.system_dim)
		elapsed = t
	value = complex(np.trace(operator @ rho_tilde))
	return np.exp(_alpha_integral(ms, elapsed, t)) * value


def weighted_samples(ms: MappedSystem, ensemble: TrajectoryEnsemble, t: float,
                     observable: int = 0) -> np.ndarray:
	"""Returns the per-trajectory estimates of a weighted observable at
	time `t`: ``scale e^{alpha t} <psi|X ⊗ w|psi>``. The ensemble must
	have been run with records and with the observable at index
	`observable`."""
	if not ensemble.records:
		raise ValueError('Ensemble was run without records')
	index = _sample_index(ensemble.times, t)
	factor = ensemble.scale * np.exp(ms.alpha * (t - ensemble.times[0]))
	return factor * np.array([record.samples[index][1][observable]
	                          for record in ensemble.records])


def coherence_signal(ms: Mapped, run: Union[Evolution, TrajectoryEnsemble]
                     ) -> Tuple[np.ndarray, np.ndarray]:
	"""Returns the sample times and the weighted trace
	``Tr[(I ⊗ w) rho~(t)]``, without the ``e^{int alpha}`` factor."""
	if isinstance(run, TrajectoryEnsemble) and run.weighted_mean is not None:
		return run.times, run.scale * run.weighted_mean
	operator = ms.weighted_operator(identity(ms.system_dim))
	states = run.states if isinstance(run, Evolution) else \
	         run.scale * run.mean_state
	return run.times, np.einsum('ij,tji->t', operator, states)


def _fit_window(times: np.ndarray) -> np.ndarray:
	span = times[-1] - times[0]
	return times >= times[-1] - FIT_FRACTION * span - 1e-12 * max(1.0, span)


def _least_squares_slope(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
	design = np.vstack([x, np.ones_like(x)]).T
	coefficients, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
	slope = float(coefficients[0])
	if len(x) > 2:
		residuals = y - design @ coefficients
		variance = float(residuals @ residuals) / (len(x) - 2)
		spread = float(np.sum((x - x.mean()) ** 2))
		stderr = math.sqrt(variance / spread) if spread > 0 else 0.0
	else:
		stderr = 0.0
	return slope, stderr


def fit_log_slope(times: np.ndarray, values: np.ndarray,
                  batches: Optional[np.ndarray] = None) -> Tuple[float, float]:
	"""Least squares slope of ``log |values|`` over the final half of
	`times`.

	:param batches: optional ``(n_batches, n_times)`` batch means; the
	                standard error is then the spread of the batch
	                slopes, otherwise the regression standard error
	:returns: ``(slope, stderr)``
	:raises: :exc:`~tlmembed.exceptions.SignalUnderflow` if ``|values|``
	         drops below ``1e-12``
	"""
	times = np.asarray(times, dtype=float)
	magnitudes = np.abs(np.asarray(values))
	if np.any(magnitudes < SIGNAL_FLOOR):
		first = int(np.argmax(magnitudes < SIGNAL_FLOOR))
		raise SignalUnderflow('Weighted trace fell below {:g} at t = {:g}'
		                      .format(SIGNAL_FLOOR, times[first]))
	window = _fit_window(times)
	slope, stderr = _least_squares_slope(times[window],
	                                     np.log(magnitudes[window]))
	if batches is not None and len(batches) > 1:
		batch_magnitudes = np.abs(np.asarray(batches))[:, window]
		if np.any(batch_magnitudes < SIGNAL_FLOOR):
			raise SignalUnderflow('A batch mean fell below {:g}'
			                      .format(SIGNAL_FLOOR))
		slopes = [_least_squares_slope(times[window], np.log(row))[0]
		          for row in batch_magnitudes]
		stderr = float(np.std(slopes, ddof=1) / math.sqrt(len(slopes)))
	return slope, stderr


def theta_from_coherence(ms: Mapped, run: Union[Evolution, TrajectoryEnsemble],
                         with_error: bool = False
                         ) -> Union[float, Tuple[float, float]]:
	"""Estimates ``theta`` from the exponential decay of the weighted
	trace of a mapped system. For a system with ``alpha > 0`` the
	constant ``alpha`` is added back to the fitted slope.

	:param with_error: also return the standard error (from the batch
	                   means for a :class:`TrajectoryEnsemble`)
	:raises: :exc:`~tlmembed.exceptions.SignalUnderflow`
	"""
	times, values = coherence_signal(ms, run)
	batches = None
	if isinstance(run, TrajectoryEnsemble):
		batches = run.weighted_batches
	slope, stderr = fit_log_slope(times, values, batches)
	if isinstance(ms, MappedSystem):
		slope += ms.alpha
	logger.info('Coherence slope %.10g +- %.3g', slope, stderr)
	if with_error:
		return slope, stderr
	return slope


def _grow(spec: Generator, grid: TimeGrid, rho0: Optional[DensityMatrix]
          ) -> Tuple[np.ndarray, np.ndarray, DensityMatrix]:
	dim = spec.dim
	rho = identity(dim) / dim if rho0 is None else check_state(rho0, dim)
	stepper = _Stepper(spec, grid)
	state = stepper.pack(rho)
	accumulated = 0.0
	times = [grid.t0]
	logs = [math.log(abs(stepper.trace(state)))]
	step = 0
	while step < grid.n_steps:
		count = min(RENORM_INTERVAL, grid.n_steps - step)
		state = stepper.advance_many(state, step, count)
		step += count
		trace = stepper.trace(state)
		if abs(trace) < SIGNAL_FLOOR:
			raise SignalUnderflow('Trace vanished at t = {:g}'.format(
				grid.t0 + step * grid.dt))
		accumulated += math.log(abs(trace))
		state = state / trace
		times.append(grid.t0 + step * grid.dt)
		logs.append(accumulated)
	return np.array(times), np.array(logs), stepper.unpack(state)


def dominant_state(spec: Generator, grid: TimeGrid,
                   rho0: Optional[DensityMatrix] = None) -> DensityMatrix:
	"""Returns the unit-trace state left after integrating over `grid`
	with periodic renormalization; for a converged run this is the
	dominant eigenvector (the stationary state of a Lindblad
	generator)."""
	return _grow(spec, grid, rho0)[2]


def theta_from_growth(spec: Generator, grid: TimeGrid,
                      rho0: Optional[DensityMatrix] = None) -> float:
	"""Estimates the dominant eigenvalue ``theta`` of a TLME from the
	growth of ``Tr rho``.

	The state is integrated with RK4 and renormalized every 100 steps,
	accumulating ``log |Tr rho|``. ``theta`` is the slope of the
	accumulated log-trace over the final half of the grid; the slopes of
	the third and fourth quarters must agree to ``1e-8``.

	:param rho0: initial state, the maximally mixed state by default
	:raises: :exc:`~tlmembed.exceptions.NotConverged` with the two
	         window slopes in :attr:`~NotConverged.slopes`
	"""
	times, logs, _ = _grow(spec, grid, rho0)
	span = times[-1] - times[0]
	half, three_quarters = (times[0] + fraction * span
	                        for fraction in (0.5, 0.75))
	slack = 1e-12 * max(1.0, span)
	third = (times >= half - slack) & (times <= three_quarters + slack)
	fourth = times >= three_quarters - slack
	if third.sum() < 2 or fourth.sum() < 2:
		raise NotConverged('Grid too short for the convergence windows')
	slopes = (_least_squares_slope(times[third], logs[third])[0],
	          _least_squares_slope(times[fourth], logs[fourth])[0])
	if abs(slopes[0] - slopes[1]) >= THETA_SLOPE_TOL:
		raise NotConverged('Growth rate still drifting: {:.12g} vs {:.12g}'
		                   .format(*slopes), slopes)
	theta = _least_squares_slope(times[third | fourth],
	                             logs[third | fourth])[0]
	logger.info('Growth rate converged: theta = %.12g', theta)
	return theta


def liouvillian_matrix(generator: Generator) -> np.ndarray:
	"""Returns the ``dim^2 x dim^2`` matrix of the generator acting on
	column-stacked density matrices, using
	``vec(A X B) = (B^T ⊗ A) vec(X)``."""
	terms = generator_terms(generator)
	unit = np.eye(generator.dim)
	matrix = np.kron(unit, terms.left) + np.kron(terms.right.T, unit)
	for x, y in terms.sandwiches:
		matrix += np.kron(y.conj(), x)
	return matrix


def theta_dense(generator: Generator) -> float:
	"""Returns the largest real part of the generator spectrum, from the
	dense vectorized matrix."""
	eigenvalues = np.linalg.eigvals(liouvillian_matrix(generator))
	return float(np.max(eigenvalues.real))


def vectorize(rho: DensityMatrix) -> np.ndarray:
	"""Column-stacks `rho`, matching :func:`liouvillian_matrix`."""
	return np.asarray(rho).reshape(-1, order='F')
