# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""Thermodynamics of quantum jump trajectories.

The large deviation function ``theta(s)`` of the number of jumps in a
counted channel is the dominant eigenvalue of the tilted generator
(:func:`~tlmembed.model.tilted_generator`). It can be obtained directly
from the growth of the trace under the tilted TLME, or from the decay of
the ancilla coherence of a Lindblad system that scatters each counted
quantum off an ancilla qubit (:func:`unitary_coupling`). For ``s >= 0``
this coupling has ``alpha = 0``, so the coherence decay can be sampled
efficiently with quantum jumps.

The worked model is the micromaser: a cavity pumped by excited
two-level atoms and damped by a thermal bath, with four jump channels.
"""

import enum
import logging
import math
import time
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, \
 Union

import numpy as np

from tlmembed.defines import TRUNCATION_FRACTION, TRUNCATION_WARN_FRACTION
from tlmembed.dynamics import TimeGrid, dominant_state, evolve_rk4, \
 run_mapped_mc, theta_dense, theta_from_coherence, theta_from_growth
from tlmembed.exceptions import NegativeS, TruncationTooSmall
from tlmembed.linalg import ComplexMatrix, dagger, ket, kron
from tlmembed.mapping import MappedSystem, P0, P1, SIGMA, Scheme, \
 initial_embedding
from tlmembed.model import DensityMatrix, LindbladSpec, identity, \
 tilted_generator

logger = logging.getLogger(__name__)


class MicromaserSpec(object):
	"""Micromaser parameters.

	:param fock_dim: number of Fock states kept
	:param pump_rate: atom injection rate ``r``
	:param rabi_angle: accumulated Rabi angle ``theta_R`` of one atom
	:param thermal_occupancy: bath occupation ``nu``
	:param scaled_angle: if :const:`True`, the atom in Fock state ``n``
	                     rotates by ``theta_R sqrt((n + 1) / r)``
	                     (pump-parameter convention); otherwise by
	                     ``theta_R sqrt(n + 1)``
	"""

	def __init__(self, fock_dim: int, pump_rate: float, rabi_angle: float,
	             thermal_occupancy: float, scaled_angle: bool = False) -> None:
		if not pump_rate > 0:
			raise ValueError('pump_rate must be positive')
		if thermal_occupancy < 0:
			raise ValueError('thermal_occupancy must be non-negative')
		self.fock_dim = int(fock_dim)
		self.pump_rate = float(pump_rate)
		self.rabi_angle = float(rabi_angle)
		self.thermal_occupancy = float(thermal_occupancy)
		self.scaled_angle = bool(scaled_angle)

	def angles(self) -> np.ndarray:
		"""Rabi angle of an atom meeting the cavity in each Fock state."""
		occupation = np.arange(1, self.fock_dim + 1, dtype=float)
		if self.scaled_angle:
			occupation = occupation / self.pump_rate
		return self.rabi_angle * np.sqrt(occupation)

	def __repr__(self) -> str:
		return ('MicromaserSpec(fock_dim={}, pump_rate={:g}, rabi_angle={:g}, '
		        'thermal_occupancy={:g}, scaled_angle={})').format(
			self.fock_dim, self.pump_rate, self.rabi_angle,
			self.thermal_occupancy, self.scaled_angle)


def desk_scale_spec() -> MicromaserSpec:
	return MicromaserSpec(30, 50.0, 4 * math.pi, 1.0)


def full_scale_spec() -> MicromaserSpec:
	"""Parameters with the sharp crossover near ``s = 3.4e-4``. Runs at
	this scale are long."""
	return MicromaserSpec(400, 1000.0, 4 * math.pi, 1.0, scaled_angle=True)


def build_micromaser(spec: MicromaserSpec) -> LindbladSpec:
	"""Builds the micromaser Lindblad generator in the Fock basis, with
	``H = 0`` and the jump operators

	* ``J1|n> = sqrt(r) sin(angle(n)) |n+1>`` (atom leaves in the ground
	  state, one quantum ceded to the cavity),
	* ``J2|n> = sqrt(r) cos(angle(n)) |n>`` (atom leaves excited),
	* ``J3|n> = sqrt((nu + 1) n) |n-1>`` (loss to the bath),
	* ``J4|n> = sqrt(nu (n + 1)) |n+1>`` (gain from the bath).

	``J1`` and ``J4`` annihilate the top Fock state, so
	``J1^dagger J1 + J2^dagger J2 = r`` on all other states.

	:raises: :exc:`~tlmembed.exceptions.TruncationTooSmall` if
	         ``fock_dim < 2``
	"""
	n_states = spec.fock_dim
	if n_states < 2:
		raise TruncationTooSmall('Micromaser needs at least 2 Fock states, '
		                         'got {}'.format(n_states))
	angles = spec.angles()
	occupation = np.arange(n_states - 1, dtype=float)
	root_r = math.sqrt(spec.pump_rate)
	nu = spec.thermal_occupancy
	# Raising operators act on n = 0 .. N-2 only.
	emit = np.diag(root_r * np.sin(angles[:-1]), -1).astype(np.complex128)
	keep = np.diag(root_r * np.cos(angles)).astype(np.complex128)
	loss = np.diag(np.sqrt((nu + 1) * (occupation + 1)), 1).astype(np.complex128)
	gain = np.diag(np.sqrt(nu * (occupation + 1)), -1).astype(np.complex128)
	return LindbladSpec(np.zeros((n_states, n_states)), [emit, keep, loss, gain])


def coupling_unitaries(s: float) -> Tuple[ComplexMatrix, ComplexMatrix]:
	"""Returns ``(U_+, U_-)`` with ``U_pm = e^{i phi_pm} p_0 + p_1`` and
	``phi_pm = pm arccos(e^{-s})``.

	:raises: :exc:`~tlmembed.exceptions.NegativeS`
	"""
	if s < 0:
		raise NegativeS('The unitary coupling needs s >= 0, got {:g}'
		                .format(s))
	phi = math.acos(math.exp(-s))
	return (np.exp(1j * phi) * P0 + P1, np.exp(-1j * phi) * P0 + P1)


def unitary_coupling(base: LindbladSpec, counted_channel: int,
                     s: float) -> MappedSystem:
	"""Maps the tilted generator of `base` with ``s >= 0`` by scattering
	each quantum of the counted channel off an ancilla qubit.

	The counted jump ``J`` is replaced by the pair
	``J ⊗ U_+ / sqrt(2)`` and ``J ⊗ U_- / sqrt(2)`` (jump indices 0 and
	1); the other channels act as ``J_i ⊗ 1`` and follow in their
	original order. The weight is ``|1><0|`` and ``alpha = 0``.

	:raises: :exc:`~tlmembed.exceptions.NegativeS`,
	         :exc:`~tlmembed.exceptions.BadChannelIndex`
	"""
	plus, minus = coupling_unitaries(s)
	rest = base.without_channel(counted_channel)
	counted = base.jumps[counted_channel] / math.sqrt(2)
	ancilla_identity = identity(2)
	jumps = [kron(counted, plus), kron(counted, minus)]
	jumps += [kron(jump, ancilla_identity) for jump in rest.jumps]
	lindblad = LindbladSpec(kron(base.hamiltonian, ancilla_identity), jumps)
	return MappedSystem(Scheme.OFFDIAGONAL, lindblad, SIGMA.copy(), 0.0, 0.0)


def build_sbias_coupling(spec: MicromaserSpec, s: float) -> MappedSystem:
	"""Ancilla coupling of the micromaser that biases the count of
	ground state atoms (channel ``J1``) by ``e^{-s}``; see
	:func:`unitary_coupling`.

	:raises: :exc:`~tlmembed.exceptions.NegativeS` for ``s < 0``
	"""
	return unitary_coupling(build_micromaser(spec), 0, s)


def mean_photon_number(rho: DensityMatrix) -> float:
	diagonal = np.real(np.diag(rho))
	return float(np.dot(np.arange(len(diagonal)), diagonal) / diagonal.sum())


def jump_rate(spec: LindbladSpec, channel: int, rho: DensityMatrix) -> float:
	"""Returns the rate ``Tr[J^dagger J rho]`` of a jump channel."""
	jump = spec.jumps[channel]
	return float(np.real(np.trace(dagger(jump) @ jump @ rho)))


def check_truncation(spec: MicromaserSpec, rho: DensityMatrix) -> float:
	"""Checks that `rho` is well inside the Fock space truncation.

	:returns: the mean photon number
	:raises: :exc:`~tlmembed.exceptions.TruncationTooSmall` if it
	         reaches half of ``fock_dim``
	"""
	mean = mean_photon_number(rho)
	if mean >= TRUNCATION_FRACTION * spec.fock_dim:
		raise TruncationTooSmall('Mean photon number {:.3g} is too large for '
		                         '{} Fock states'.format(mean, spec.fock_dim))
	if mean > TRUNCATION_WARN_FRACTION * spec.fock_dim:
		logger.warning('Mean photon number %.3g is close to the truncation '
		               '(%d Fock states)', mean, spec.fock_dim)
	return mean


def stationary_state(spec: MicromaserSpec, grid: TimeGrid) -> DensityMatrix:
	"""Relaxes the untilted micromaser over `grid` and checks the
	truncation."""
	rho = dominant_state(build_micromaser(spec), grid)
	check_truncation(spec, rho)
	return rho


class Method(enum.Enum):
	"""Estimators available to :func:`theta_sweep`."""
	GROWTH = 'growth'
	COHERENCE = 'coherence'
	MC = 'mc'
	DENSE = 'dense'


class SweepPoint(NamedTuple):
	s: float
	theta: float
	stderr: float
	method: str
	wall_time_s: Optional[float]


Model = Union[MicromaserSpec, LindbladSpec]


def _base(model: Model) -> LindbladSpec:
	if isinstance(model, MicromaserSpec):
		return build_micromaser(model)
	return model


def theta_point(model: Model, s: float, method: Union[Method, str],
                grid: TimeGrid, counted_channel: int = 0,
                n_trajectories: int = 2000, seed: int = 0,
                workers: int = 1) -> Tuple[float, float]:
	"""Computes one ``(theta, stderr)`` pair; deterministic methods have
	zero standard error."""
	method = Method(method)
	base = _base(model)
	if method is Method.GROWTH:
		return theta_from_growth(tilted_generator(base, counted_channel, s),
		                         grid), 0.0
	if method is Method.DENSE:
		return theta_dense(tilted_generator(base, counted_channel, s)), 0.0
	ms = unitary_coupling(base, counted_channel, s)
	if method is Method.COHERENCE:
		rho0 = identity(base.dim) / base.dim
		run = evolve_rk4(ms.lindblad, initial_embedding(ms, rho0), grid)
		return theta_from_coherence(ms, run, with_error=True)
	ensemble = run_mapped_mc(ms, ket(0, base.dim), grid, n_trajectories,
	                         seed, workers=workers)
	return theta_from_coherence(ms, ensemble, with_error=True)


def theta_sweep(model: Model, s_values: Sequence[float],
                method: Union[Method, str], grid: TimeGrid,
                counted_channel: int = 0, n_trajectories: int = 2000,
                seed: int = 0, workers: int = 1,
                timing: bool = False) -> List[SweepPoint]:
	"""Computes ``theta(s)`` at each of `s_values` with the chosen
	estimator and logs the :func:`sweep_diagnostics`.

	For a micromaser model the truncation is checked on the stationary
	state first. Every point uses the same `seed`, so a point does not
	depend on the rest of the sweep.

	:param timing: record the wall time of each point
	:raises: :exc:`ValueError` if an ``s`` value is repeated
	"""
	method = Method(method)
	if len(set(s_values)) != len(s_values):
		raise ValueError('Repeated s value in sweep: {}'.format(
			', '.join('{:g}'.format(s) for s in s_values)))
	if isinstance(model, MicromaserSpec):
		stationary_state(model, grid)
	points = []
	for s in s_values:
		start = time.perf_counter()
		theta, stderr = theta_point(model, s, method, grid, counted_channel,
		                            n_trajectories, seed, workers)
		elapsed = time.perf_counter() - start if timing else None
		logger.info('s = %g: theta = %.10g (+- %.3g, %s)', s, theta, stderr,
		            method.value)
		points.append(SweepPoint(float(s), theta, stderr, method.value, elapsed))
	sweep_diagnostics(points)
	return points


class SweepDiagnostics(NamedTuple):
	monotone: bool
	convex: bool
	violations: List[str]


def sweep_diagnostics(points: Sequence[SweepPoint]) -> SweepDiagnostics:
	"""Checks that ``theta(s)`` is non-increasing and convex in ``s``, as
	a scaled cumulant generating function of a jump count must be.

	Monotonicity allows three standard errors of slack; convexity
	allows second divided differences down to ``-10``. Of several points
	at the same ``s`` only the first is checked.
	"""
	unique = {}  # type: Dict[float, SweepPoint]
	for point in points:
		unique.setdefault(point.s, point)
	ordered = sorted(unique.values(), key=lambda point: point.s)
	violations = []
	for left, right in zip(ordered, ordered[1:]):
		slack = 1e-9 + 3 * max(left.stderr, right.stderr)
		if right.theta > left.theta + slack:
			violations.append('theta increases between s = {:g} and {:g}'
			                  .format(left.s, right.s))
	monotone = not violations
	convex = True
	for left, middle, right in zip(ordered, ordered[1:], ordered[2:]):
		first = (middle.theta - left.theta) / (middle.s - left.s)
		second = (right.theta - middle.theta) / (right.s - middle.s)
		curvature = 2 * (second - first) / (right.s - left.s)
		if curvature < -10:
			convex = False
			violations.append('theta is concave around s = {:g}'
			                  .format(middle.s))
	for text in violations:
		logger.warning('Sweep diagnostic: %s', text)
	return SweepDiagnostics(monotone, convex, violations)
