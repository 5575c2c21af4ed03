# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""Homodyne quantum filters.

A system with Hamiltonian ``H`` and coupling ``L`` is watched by a
homodyne detector at angle ``phi``. Writing ``X = L e^{i phi}``, the
detector records ``dy = <X + X^dagger> dt + dW``. The unnormalized
filter

.. math:: d\\pi = (-i[H, \\pi] + D[L]\\pi)\\,dt + (X\\pi + \\pi X^\\dagger)\\,dy

is a linear TLME with signal-dependent rates. Its efficiency classifier,
evaluated on the Stratonovich form of the equation, is

.. math:: \\alpha_k\\,dt = \\lambda^+_{max}\\big[-(X^2 + X^{\\dagger 2})\\,dt
          + 2(X + X^\\dagger)\\,dy_k\\big].

The signal part vanishes only when ``L^dagger = -L e^{2 i phi}``, and
then the signal carries no information about the system: a filter
started from a wrong state never recovers (see
:func:`tracking_decoupling_demo`).

All stochastic equations are integrated with a fixed step; Ito forms
with Euler-Maruyama, the Stratonovich form with Heun's method.
"""

import logging
import math
from typing import Callable, NamedTuple, Sequence, Tuple

import numpy as np

from tlmembed.defines import FILTER_STABILITY_LIMIT, STRUCTURE_TOL
from tlmembed.exceptions import StabilityGuard, LengthMismatch, \
 ConditionNotSatisfied, DimensionMismatch, NotHermitian
from tlmembed.linalg import ComplexMatrix, as_matrix, dagger, frozen, \
 hermitian_eig, hermitian_part, is_hermitian, lambda_max_plus
from tlmembed.model import DensityMatrix, LindbladSpec, TlmeSpec, \
 check_state, dissipator, lindblad_as_tlme

logger = logging.getLogger(__name__)


class FilterSpec(object):
	"""A homodyne measurement setup.

	:raises: :exc:`~tlmembed.exceptions.StabilityGuard` if
	         ``dt ||L||^2 >= 0.1``,
	         :exc:`~tlmembed.exceptions.NotHermitian`,
	         :exc:`~tlmembed.exceptions.DimensionMismatch`
	"""

	def __init__(self, hamiltonian: ComplexMatrix, coupling: ComplexMatrix,
	             homodyne_angle: float, dt: float, duration: float) -> None:
		hamiltonian = as_matrix(hamiltonian, 'hamiltonian')
		coupling = as_matrix(coupling, 'coupling')
		if hamiltonian.shape != coupling.shape or \
		   hamiltonian.shape[0] != hamiltonian.shape[1]:
			raise DimensionMismatch('Hamiltonian {} and coupling {} must be '
			                        'square and of equal size'.format(
			                        hamiltonian.shape, coupling.shape))
		if not is_hermitian(hamiltonian):
			raise NotHermitian('Filter Hamiltonian is not Hermitian')
		if not dt > 0 or not duration > 0:
			raise ValueError('dt and duration must be positive')
		self.hamiltonian = frozen(hermitian_part(hamiltonian))
		self.coupling = frozen(coupling)
		self.homodyne_angle = float(homodyne_angle)
		self.dt = float(dt)
		self.duration = float(duration)
		stiffness = self.dt * float(np.linalg.norm(coupling, 2)) ** 2
		if stiffness >= FILTER_STABILITY_LIMIT:
			raise StabilityGuard('dt ||L||^2 = {:.3g} must stay below {:g}'
			                     .format(stiffness, FILTER_STABILITY_LIMIT))

	@property
	def dim(self) -> int:
		return self.hamiltonian.shape[0]

	@property
	def n_steps(self) -> int:
		return int(round(self.duration / self.dt))

	def times(self) -> np.ndarray:
		return np.arange(self.n_steps + 1) * self.dt

	def rotated_coupling(self) -> ComplexMatrix:
		"""Returns ``X = L e^{i phi}``."""
		return self.coupling * np.exp(1j * self.homodyne_angle)

	def measured_observable(self) -> ComplexMatrix:
		"""Returns ``L e^{i phi} + L^dagger e^{-i phi}``."""
		x = self.rotated_coupling()
		return x + dagger(x)

	def is_decoupled(self) -> bool:
		""":const:`True` if ``L^dagger = -L e^{2 i phi}``, in which case
		the measured observable vanishes."""
		residual = dagger(self.coupling) + self.coupling * \
		           np.exp(2j * self.homodyne_angle)
		return float(np.max(np.abs(residual))) <= STRUCTURE_TOL

	def drift_generator(self) -> TlmeSpec:
		"""The TLME the unnormalized filter follows when ``dy = 0``."""
		return lindblad_as_tlme(LindbladSpec(self.hamiltonian,
		                                     [self.coupling]))

	def with_dt(self, dt: float) -> 'FilterSpec':
		return FilterSpec(self.hamiltonian, self.coupling,
		                  self.homodyne_angle, dt, self.duration)

	def __repr__(self) -> str:
		return 'FilterSpec(dim={}, phi={:g}, dt={:g}, duration={:g})'.format(
			self.dim, self.homodyne_angle, self.dt, self.duration)


class SignalTrace(NamedTuple):
	"""A homodyne record: increments `dy`, the underlying noise `dw`,
	the step `dt` and the seed that produced it."""
	dy: np.ndarray
	dw: np.ndarray
	dt: float
	seed: int

	def coarsen(self, factor: int) -> 'SignalTrace':
		"""Sums each run of `factor` consecutive increments, giving the
		same record on a grid with step ``factor * dt``."""
		if factor < 1 or len(self.dy) % factor:
			raise LengthMismatch('Cannot coarsen {} increments by {}'
			                     .format(len(self.dy), factor))
		return SignalTrace(self.dy.reshape(-1, factor).sum(axis=1),
		                   self.dw.reshape(-1, factor).sum(axis=1),
		                   self.dt * factor, self.seed)


def _coherent_dissipative(spec: FilterSpec
                          ) -> Callable[[DensityMatrix], DensityMatrix]:
	h = spec.hamiltonian
	coupling = spec.coupling

	def drift(rho: DensityMatrix) -> DensityMatrix:
		return -1j * (h @ rho - rho @ h) + dissipator(coupling, rho)
	return drift


def _check_initial(spec: FilterSpec, rho0: DensityMatrix) -> DensityMatrix:
	return check_state(rho0, spec.dim).copy()


def simulate_measured_system(spec: FilterSpec, rho0: DensityMatrix,
                             seed: int) -> Tuple[np.ndarray, SignalTrace]:
	"""Simulates the conditional state of the measured system with the
	normalized stochastic master equation

	``d rho = (-i[H, rho] + D[L] rho) dt + (X rho + rho X^dagger -
	<X + X^dagger> rho) dW``

	(Euler-Maruyama, renormalized to unit trace after every step) and
	records ``dy = <X + X^dagger> dt + dW``.

	:returns: the states at every step (``n_steps + 1`` of them) and the
	          :class:`SignalTrace`
	"""
	rho = _check_initial(spec, rho0)
	rho = rho / np.trace(rho)
	rng = np.random.default_rng(seed)
	dw = rng.normal(0.0, math.sqrt(spec.dt), spec.n_steps)
	dy = np.empty(spec.n_steps)
	x = spec.rotated_coupling()
	x_dagger = dagger(x)
	observable = x + x_dagger
	drift = _coherent_dissipative(spec)
	states = np.empty((spec.n_steps + 1,) + rho.shape, dtype=np.complex128)
	states[0] = rho
	for k in range(spec.n_steps):
		mean = float(np.real(np.trace(observable @ rho)))
		dy[k] = mean * spec.dt + dw[k]
		innovation = x @ rho + rho @ x_dagger - mean * rho
		rho = rho + drift(rho) * spec.dt + innovation * dw[k]
		rho = hermitian_part(rho)
		rho = rho / np.trace(rho).real
		states[k + 1] = rho
	return states, SignalTrace(dy, dw, spec.dt, seed)


def _check_signal(spec: FilterSpec, signal: SignalTrace) -> None:
	if len(signal.dy) != spec.n_steps:
		raise LengthMismatch('Signal has {} increments, filter needs {}'
		                     .format(len(signal.dy), spec.n_steps))
	if not math.isclose(signal.dt, spec.dt, rel_tol=1e-9):
		raise LengthMismatch('Signal step {:g} differs from filter step {:g}'
		                     .format(signal.dt, spec.dt))


def run_unnormalized_filter(spec: FilterSpec, signal: SignalTrace,
                            pi0: DensityMatrix) -> np.ndarray:
	"""Integrates the linear (Ito) filter equation with Euler-Maruyama on
	the given record. No renormalization is applied.

	:returns: the unnormalized states at every step
	:raises: :exc:`~tlmembed.exceptions.LengthMismatch`
	"""
	_check_signal(spec, signal)
	pi = _check_initial(spec, pi0)
	x = spec.rotated_coupling()
	x_dagger = dagger(x)
	drift = _coherent_dissipative(spec)
	states = np.empty((spec.n_steps + 1,) + pi.shape, dtype=np.complex128)
	states[0] = pi
	for k, increment in enumerate(signal.dy):
		pi = pi + drift(pi) * spec.dt + (x @ pi + pi @ x_dagger) * increment
		states[k + 1] = pi
	return states


def run_stratonovich_filter(spec: FilterSpec, signal: SignalTrace,
                            pi0: DensityMatrix) -> np.ndarray:
	"""Integrates the Stratonovich form of the filter,

	``d pi = (-i[H, pi] - (L^dagger L + X^2) pi / 2
	- pi (L^dagger L + X^dagger^2) / 2) dt + (X pi + pi X^dagger) o dy``,

	with Heun's predictor-corrector method on the given record.

	:raises: :exc:`~tlmembed.exceptions.LengthMismatch`
	"""
	_check_signal(spec, signal)
	pi = _check_initial(spec, pi0)
	x = spec.rotated_coupling()
	x_dagger = dagger(x)
	gain = dagger(spec.coupling) @ spec.coupling
	left = -1j * spec.hamiltonian - 0.5 * (gain + x @ x)
	right = 1j * spec.hamiltonian - 0.5 * (gain + x_dagger @ x_dagger)

	def drift(state: DensityMatrix) -> DensityMatrix:
		return left @ state + state @ right

	def diffusion(state: DensityMatrix) -> DensityMatrix:
		return x @ state + state @ x_dagger

	states = np.empty((spec.n_steps + 1,) + pi.shape, dtype=np.complex128)
	states[0] = pi
	for k, increment in enumerate(signal.dy):
		a, b = drift(pi), diffusion(pi)
		predicted = pi + a * spec.dt + b * increment
		pi = pi + 0.5 * (a + drift(predicted)) * spec.dt + \
		     0.5 * (b + diffusion(predicted)) * increment
		states[k + 1] = pi
	return states


def normalized(states: np.ndarray) -> np.ndarray:
	"""Divides each state of a history by its trace."""
	traces = np.einsum('kii->k', states)
	return states / traces[:, None, None]


class AlphaTrace(NamedTuple):
	"""Per-step efficiency classifier on one record. `dt_term`,
	`signal_term` and `total` are the largest positive eigenvalues of
	the dt part, the signal part and their sum; each is ``alpha_k dt``.
	`cumulative` is the running sum of `total`."""
	times: np.ndarray
	dt_term: np.ndarray
	signal_term: np.ndarray
	total: np.ndarray
	cumulative: np.ndarray

	@property
	def positive_fraction(self) -> float:
		return float(np.mean(self.total > 0))


def stratonovich_alpha(spec: FilterSpec, signal: SignalTrace) -> AlphaTrace:
	"""Evaluates ``alpha_k dt = lambda_max^+[M_k]`` for every step, with

	``M_k = -(X^2 + X^dagger^2) dt + 2 (X + X^dagger) dy_k``.

	The Stratonovich increment of the record equals the Ito one; only
	integrands are evaluated differently.

	:raises: :exc:`~tlmembed.exceptions.LengthMismatch`
	"""
	_check_signal(spec, signal)
	x = spec.rotated_coupling()
	x_dagger = dagger(x)
	dt_part = -(x @ x + x_dagger @ x_dagger) * spec.dt
	signal_part = 2 * (x + x_dagger)
	dt_term = np.full(len(signal.dy), lambda_max_plus(dt_part))
	signal_term = np.empty(len(signal.dy))
	total = np.empty(len(signal.dy))
	for k, increment in enumerate(signal.dy):
		signal_term[k] = lambda_max_plus(signal_part * increment)
		total[k] = lambda_max_plus(dt_part + signal_part * increment)
	return AlphaTrace(spec.times()[:-1], dt_term, signal_term, total,
	                  np.cumsum(total))


class AlphaSummary(NamedTuple):
	n_traces: int
	mean_cumulative: float
	stderr_cumulative: float
	positive_fraction: float
	max_signal_term: float


def alpha_summary(traces: Sequence[AlphaTrace]) -> AlphaSummary:
	"""Averages the final cumulative ``alpha`` and the fraction of
	positive steps over records from different seeds."""
	finals = np.array([trace.cumulative[-1] for trace in traces])
	stderr = float(np.std(finals, ddof=1) / math.sqrt(len(finals))) \
	         if len(finals) > 1 else 0.0
	return AlphaSummary(
		len(traces), float(finals.mean()), stderr,
		float(np.mean([trace.positive_fraction for trace in traces])),
		float(max(trace.signal_term.max() for trace in traces)))


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
	"""Returns the trace norm ``||a - b||_1`` (2 for orthogonal pure
	states)."""
	eigenvalues, _ = hermitian_eig(hermitian_part(np.asarray(a) -
	                                              np.asarray(b)))
	return float(np.sum(np.abs(eigenvalues)))


def tracking_discrepancy(spec: FilterSpec, rho0: DensityMatrix,
                         pi0: DensityMatrix, seed: int) -> np.ndarray:
	"""Runs the measured system from `rho0` and the filter from `pi0` on
	the resulting record, and returns the trace norm distance between
	the true and the estimated state at every step."""
	true_states, signal = simulate_measured_system(spec, rho0, seed)
	estimates = normalized(run_unnormalized_filter(spec, signal, pi0))
	return np.array([trace_distance(a, b)
	                 for a, b in zip(true_states, estimates)])


class TrackingReport(NamedTuple):
	times: np.ndarray
	mismatched: np.ndarray
	matched: np.ndarray


def tracking_decoupling_demo(spec: FilterSpec, rho0: DensityMatrix,
                             pi0: DensityMatrix, seed: int) -> TrackingReport:
	"""Shows that a filter whose coupling obeys
	``L^dagger = -L e^{2 i phi}`` does not track: started from `pi0`
	instead of `rho0` it keeps its distance from the true state, while
	started from `rho0` it follows it.

	:raises: :exc:`~tlmembed.exceptions.ConditionNotSatisfied`
	"""
	if not spec.is_decoupled():
		raise ConditionNotSatisfied('Coupling does not satisfy L^dagger = '
		                            '-L e^{2 i phi}')
	mismatched = tracking_discrepancy(spec, rho0, pi0, seed)
	matched = tracking_discrepancy(spec, rho0, rho0, seed)
	logger.info('Final distance: %.3g mismatched, %.3g matched',
	            mismatched[-1], matched[-1])
	return TrackingReport(spec.times(), mismatched, matched)


def min_relative_eigenvalue(states: np.ndarray) -> float:
	"""Returns the smallest ``lambda_min(pi) / Tr pi`` over a history."""
	worst = math.inf
	for state in states:
		eigenvalues, _ = hermitian_eig(hermitian_part(state))
		worst = min(worst, eigenvalues[0] / float(np.trace(state).real))
	return worst
