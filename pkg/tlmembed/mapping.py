# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""This module builds a Lindblad equation on the system ⊗ ancilla space
whose *quantum weighted* partial trace reproduces a given TLME:

.. math:: \\rho(t) = e^{\\int_0^t \\alpha}\\, \\mathrm{Tr}_a[(1 \\otimes w)
          \\tilde\\rho(t)].

Two single-qubit-ancilla schemes are available. The diagonal scheme
(:func:`build_diagonal`) uses the weight ``w = |0><0|`` and needs a
Hermiticity-preserving TLME. The off-diagonal scheme
(:func:`build_offdiagonal`) uses ``w = |1><0|`` and accepts any TLME;
the recovered state is then the ``<0|rho~|1>`` coherence block.

The norm growth rate ``alpha`` (see :func:`compute_alpha`) classifies
the mapping: with ``alpha = 0`` the weighted trace stays bounded and
sampling the Lindblad equation is efficient, with ``alpha > 0`` the
prefactor ``e^{alpha t}`` makes sampling exponentially expensive.

All operators follow the system ⊗ ancilla ordering of
:mod:`tlmembed.linalg`.
"""

import enum
import logging
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, \
 Union

import numpy as np

from tlmembed.defines import ALGEBRA_TOL, STRUCTURE_TOL
from tlmembed.exceptions import DimensionMismatch, NotHermiticityPreserving, \
 ZeroWeight, InvalidDissipatorRoot, SchemeUnavailable
from tlmembed.linalg import ComplexMatrix, as_matrix, dagger, kron, \
 hermitian_part, antihermitian_part, lambda_max_plus, psd_sqrt, ket, \
 projector
from tlmembed.model import DensityMatrix, LindbladSpec, TlmeSpec, Schedule, \
 check_state, identity

logger = logging.getLogger(__name__)

P0 = projector(ket(0, 2))
P1 = projector(ket(1, 2))
SIGMA = np.outer(ket(1, 2), ket(0, 2))  # |1><0|
PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)


class Scheme(enum.Enum):
	"""The two minimal-ancilla mapping schemes."""
	DIAGONAL = 'diagonal'
	OFFDIAGONAL = 'offdiagonal'


class AlphaDecomposition(NamedTuple):
	"""Result of :func:`compute_alpha`. Unpacks as
	``(alpha_l, alpha_r, s_l, s_r)``."""
	alpha_l: float
	alpha_r: float
	s_l: ComplexMatrix
	s_r: ComplexMatrix

	@property
	def alpha(self) -> float:
		return self.alpha_l + self.alpha_r

	@property
	def efficient(self) -> bool:
		""":const:`True` if the weight does not grow, i.e. ``alpha = 0``."""
		return self.alpha == 0


def _shifted(h: ComplexMatrix) -> Tuple[float, ComplexMatrix]:
	alpha = lambda_max_plus(h)
	return alpha, alpha * np.eye(h.shape[0]) - h


def sampling_alpha(b: ComplexMatrix, c: ComplexMatrix,
                   d_ops: Sequence[ComplexMatrix] = (),
                   e_ops: Sequence[ComplexMatrix] = ()) -> AlphaDecomposition:
	"""Computes the efficiency classifier from the raw TLME operators.

	With ``H_l = B_+ + sum D_j^dagger D_j / 2`` and
	``H_r = C_+ + sum E_j^dagger E_j / 2`` (``X_+`` is the Hermitian
	part), ``alpha_l`` and ``alpha_r`` are the largest positive
	eigenvalues of ``H_l`` and ``H_r`` (or 0), and
	``S_{l/r} = alpha_{l/r} I - H_{l/r}`` are positive-semidefinite.
	"""
	b = as_matrix(b, 'b')
	c = as_matrix(c, 'c')
	h_l = hermitian_part(b)
	h_r = hermitian_part(c)
	for d in d_ops:
		h_l = h_l + 0.5 * dagger(d) @ d
	for e in e_ops:
		h_r = h_r + 0.5 * dagger(e) @ e
	alpha_l, s_l = _shifted(hermitian_part(h_l))
	alpha_r, s_r = _shifted(hermitian_part(h_r))
	return AlphaDecomposition(alpha_l, alpha_r, s_l, s_r)


def compute_alpha(spec: TlmeSpec) -> AlphaDecomposition:
	"""Returns the :class:`AlphaDecomposition` of `spec`.

	>>> from tlmembed.model import LindbladSpec, sigma_minus, tilted_generator
	>>> base = LindbladSpec(np.zeros((2, 2)), [sigma_minus()])
	>>> compute_alpha(tilted_generator(base, 0, 0.5)).alpha
	0.0
	"""
	return sampling_alpha(spec.b, spec.c, spec.d_ops, spec.e_ops)


class MappedSystem(object):
	"""A Lindblad equation on the doubled space together with the data
	needed to recover the TLME state from it.

	:attr:`lindblad` is the joint :class:`~tlmembed.model.LindbladSpec`,
	:attr:`weight` the 2x2 weight operator, :attr:`alpha_l` and
	:attr:`alpha_r` the two halves of the norm growth rate.
	"""

	def __init__(self, scheme: Scheme, lindblad: LindbladSpec,
	             weight: ComplexMatrix, alpha_l: float,
	             alpha_r: float) -> None:
		if lindblad.dim % 2:
			raise DimensionMismatch('Mapped system must have even dimension')
		self.scheme = scheme
		self.lindblad = lindblad
		self.weight = weight
		self.alpha_l = alpha_l
		self.alpha_r = alpha_r

	@property
	def alpha(self) -> float:
		return self.alpha_l + self.alpha_r

	@property
	def system_dim(self) -> int:
		return self.lindblad.dim // 2

	@property
	def ancilla_ket(self) -> np.ndarray:
		"""The normalized ancilla state of the initial embedding."""
		if self.scheme is Scheme.DIAGONAL:
			return ket(0, 2)
		return PLUS

	@property
	def embedding_scale(self) -> float:
		"""Factor between the initial embedding and its normalized
		version: 1 for the diagonal scheme, 2 for the off-diagonal one."""
		return 1.0 if self.scheme is Scheme.DIAGONAL else 2.0

	def weighted_operator(self, x: ComplexMatrix) -> ComplexMatrix:
		"""Returns ``X ⊗ w`` on the joint space, so that
		``Tr[(X ⊗ w) rho~] = Tr[X Tr_a[(1 ⊗ w) rho~]]``."""
		x = as_matrix(x, 'x')
		if x.shape != (self.system_dim, self.system_dim):
			raise DimensionMismatch('Observable has shape {}, expected '
			                        '{dim}x{dim}'.format(x.shape,
			                        dim=self.system_dim))
		return kron(x, self.weight)

	def initial_ket(self, psi0: np.ndarray) -> np.ndarray:
		"""Returns the normalized joint state ``psi0 ⊗ a`` whose projector,
		times :attr:`embedding_scale`, is the initial embedding of
		``|psi0><psi0|``."""
		psi0 = np.asarray(psi0, dtype=np.complex128)
		if psi0.shape != (self.system_dim,):
			raise DimensionMismatch('State vector has shape {}, expected '
			                        '({},)'.format(psi0.shape, self.system_dim))
		return np.kron(psi0, self.ancilla_ket)

	def __repr__(self) -> str:
		return 'MappedSystem({}, dim={}, alpha={:g})'.format(
			self.scheme.value, self.system_dim, self.alpha)


def _nonzero(operator: ComplexMatrix) -> bool:
	return float(np.max(np.abs(operator))) > STRUCTURE_TOL


def _check_root(root: ComplexMatrix, s_l: ComplexMatrix) -> ComplexMatrix:
	root = as_matrix(root, 'root')
	if root.shape != s_l.shape:
		raise InvalidDissipatorRoot('Root has shape {}, expected {}'
		                            .format(root.shape, s_l.shape))
	residual = float(np.max(np.abs(dagger(root) @ root - 2 * s_l)))
	if residual > ALGEBRA_TOL:
		raise InvalidDissipatorRoot('V^dagger V differs from 2 S_l by {:.3e}'
		                            .format(residual))
	return root


def build_diagonal(spec: TlmeSpec,
                   root: Optional[ComplexMatrix] = None) -> MappedSystem:
	"""Maps a Hermiticity-preserving TLME with the diagonal ancilla
	scheme, weight ``w = |0><0|``.

	The joint Hamiltonian is ``H_sys ⊗ 1 + i B_- ⊗ 1`` and the jump
	operators are, in this order, the `lsys` jumps ⊗ 1, the ``D_i ⊗ 1``,
	and ``V ⊗ |1><0|`` with ``V = sqrt(2 S_l)`` (omitted when zero).

	:param root: any ``V`` with ``V^dagger V = 2 S_l`` to use instead of
	             the principal square root; all such roots give the
	             same recovered dynamics
	:raises: :exc:`~tlmembed.exceptions.NotHermiticityPreserving`,
	         :exc:`~tlmembed.exceptions.InvalidDissipatorRoot`
	"""
	if not spec.hermiticity_preserving:
		raise NotHermiticityPreserving('Diagonal scheme needs C = B^dagger '
		                               'and E_j = D_j')
	decomposition = compute_alpha(spec)
	if root is None:
		root = psd_sqrt(2 * decomposition.s_l)
	else:
		root = _check_root(root, decomposition.s_l)
	ancilla_identity = identity(2)
	hamiltonian = kron(spec.lsys.hamiltonian, ancilla_identity)
	hamiltonian += kron(1j * antihermitian_part(spec.b), ancilla_identity)
	jumps = [kron(jump, ancilla_identity) for jump in spec.lsys.jumps]
	jumps += [kron(d, ancilla_identity) for d in spec.d_ops]
	if _nonzero(root):
		jumps.append(kron(root, SIGMA))
	logger.debug('Diagonal scheme: alpha_l = %g, %d jump operators',
	             decomposition.alpha_l, len(jumps))
	return MappedSystem(Scheme.DIAGONAL, LindbladSpec(hamiltonian, jumps),
	                    P0.copy(), decomposition.alpha_l,
	                    decomposition.alpha_r)


def build_offdiagonal(spec: TlmeSpec) -> MappedSystem:
	"""Maps any TLME with the off-diagonal ancilla scheme, weight
	``w = |1><0|``.

	The joint Hamiltonian is ``H_sys ⊗ 1 + i(B_- ⊗ p_0 - C_- ⊗ p_1)``; the
	jump operators are the `lsys` jumps ⊗ 1, ``D_i ⊗ p_0 + E_i ⊗ p_1``,
	``sqrt(2 S_l) ⊗ p_0`` and ``sqrt(2 S_r) ⊗ p_1`` (zero roots omitted).
	The ``<0|rho~|1>`` block then evolves under ``K - alpha``.
	"""
	decomposition = compute_alpha(spec)
	ancilla_identity = identity(2)
	hamiltonian = kron(spec.lsys.hamiltonian, ancilla_identity)
	hamiltonian += 1j * (kron(antihermitian_part(spec.b), P0) -
	                     kron(antihermitian_part(spec.c), P1))
	jumps = [kron(jump, ancilla_identity) for jump in spec.lsys.jumps]
	jumps += [kron(d, P0) + kron(e, P1) for d, e in spec.pairs()]
	for s_half, projector_half in ((decomposition.s_l, P0),
	                               (decomposition.s_r, P1)):
		root = psd_sqrt(2 * s_half)
		if _nonzero(root):
			jumps.append(kron(root, projector_half))
	logger.debug('Off-diagonal scheme: alpha = %g, %d jump operators',
	             decomposition.alpha, len(jumps))
	return MappedSystem(Scheme.OFFDIAGONAL, LindbladSpec(hamiltonian, jumps),
	                    SIGMA.copy(), decomposition.alpha_l,
	                    decomposition.alpha_r)


def build_mapping(spec: TlmeSpec, scheme: Union[Scheme, str]) -> MappedSystem:
	"""Builds `spec` with the named scheme.

	:raises: :exc:`~tlmembed.exceptions.SchemeUnavailable` if the
	         diagonal scheme is requested for a TLME that does not
	         preserve Hermiticity
	"""
	scheme = Scheme(scheme)
	if scheme is Scheme.OFFDIAGONAL:
		return build_offdiagonal(spec)
	try:
		return build_diagonal(spec)
	except NotHermiticityPreserving as ex:
		raise SchemeUnavailable('Diagonal scheme is unavailable: {}'
		                        .format(ex)) from ex


def partial_trace_weighted(rho_tilde: DensityMatrix, w: ComplexMatrix,
                           dim: int) -> DensityMatrix:
	"""Returns ``Tr_a[(1 ⊗ w) rho~]`` for a ``2 dim x 2 dim`` joint
	matrix."""
	rho_tilde = check_state(rho_tilde, 2 * dim)
	blocks = rho_tilde.reshape(dim, 2, dim, 2)
	return np.einsum('ab,ibja->ij', as_matrix(w, 'w'), blocks)


def initial_embedding(ms: 'Mapped', rho0: DensityMatrix) -> DensityMatrix:
	"""Returns a positive joint state whose weighted partial trace is
	`rho0`: ``rho0 ⊗ |0><0|`` for the diagonal scheme and
	``rho0 ⊗ 2|+><+|`` for the off-diagonal one."""
	rho0 = check_state(rho0, ms.system_dim)
	ancilla = ms.embedding_scale * projector(ms.ancilla_ket)
	return np.kron(rho0, ancilla)


def recover_state(ms: 'Mapped', rho_tilde: DensityMatrix, t: float,
                  alpha_integral: Optional[float] = None) -> DensityMatrix:
	"""Recovers the TLME state ``e^{int alpha} Tr_a[(1 ⊗ w) rho~(t)]``.

	:param alpha_integral: the accumulated ``int_0^t alpha``; defaults to
	                       ``alpha * t`` for a :class:`MappedSystem` and
	                       to :func:`integrated_alpha` for a
	                       :class:`MappedSchedule`
	:raises: :exc:`~tlmembed.exceptions.DimensionMismatch`
	"""
	if alpha_integral is None:
		if isinstance(ms, MappedSchedule):
			alpha_integral = integrated_alpha(ms, t)
		else:
			alpha_integral = ms.alpha * t
	block = partial_trace_weighted(rho_tilde, ms.weight, ms.system_dim)
	return np.exp(alpha_integral) * block


class MappedSchedule(object):
	"""A piecewise-constant TLME mapped segment by segment with one
	scheme. :attr:`lindblad` is the joint
	:class:`~tlmembed.model.Schedule` consumed by
	:func:`~tlmembed.dynamics.evolve_rk4`."""

	def __init__(self, segments: Sequence[Tuple[float, MappedSystem]],
	             t0: float = 0.0) -> None:
		self.segments = tuple(segments)
		self.t0 = t0
		self.lindblad = Schedule([(t_end, ms.lindblad)
		                          for t_end, ms in self.segments], t0)
		first = self.segments[0][1]
		self.scheme = first.scheme
		self.weight = first.weight
		self.system_dim = first.system_dim
		self.ancilla_ket = first.ancilla_ket
		self.embedding_scale = first.embedding_scale

	def __iter__(self) -> Iterator[Tuple[float, MappedSystem]]:
		return iter(self.segments)


Mapped = Union[MappedSystem, MappedSchedule]


def build_schedule(schedule: Schedule,
                   scheme: Union[Scheme, str]) -> MappedSchedule:
	"""Maps every segment of a piecewise-constant TLME schedule."""
	segments = []
	for t_end, spec in schedule.segments:
		if isinstance(spec, LindbladSpec):
			raise TypeError('Schedule segments must be TlmeSpec instances')
		segments.append((t_end, build_mapping(spec, scheme)))
	return MappedSchedule(segments, schedule.t0)


def integrated_alpha(mapped: MappedSchedule, t: float) -> float:
	"""Returns ``int_{t0}^t alpha``, summed exactly as ``alpha * dt`` per
	segment. The last segment extends past its end time."""
	total = 0.0
	start = mapped.t0
	for index, (t_end, ms) in enumerate(mapped.segments):
		last = index == len(mapped.segments) - 1
		stop = t if last else min(t, t_end)
		if stop > start:
			total += ms.alpha * (stop - start)
		start = t_end
		if t <= t_end:
			break
	return total


class AlgebraRecord(NamedTuple):
	relation: str
	indices: Tuple[int, ...]
	constant: complex
	residual: float


class AlgebraReport(object):
	"""Outcome of :func:`verify_weight_algebra`: one
	:class:`AlgebraRecord` per checked relation. :attr:`passed` is
	:const:`True` iff every residual is at most ``1e-9``."""

	def __init__(self, records: Sequence[AlgebraRecord]) -> None:
		self.records = tuple(records)
		self.passed = all(record.residual <= ALGEBRA_TOL
		                  for record in self.records)

	def constant(self, relation: str, *indices: int) -> complex:
		"""Returns the extracted constant of the given relation."""
		for record in self.records:
			if record.relation == relation and record.indices == indices:
				return record.constant
		raise KeyError((relation,) + indices)

	def failures(self) -> List[AlgebraRecord]:
		return [record for record in self.records
		        if record.residual > ALGEBRA_TOL]

	@property
	def max_residual(self) -> float:
		return max((record.residual for record in self.records), default=0.0)


def _project(w: ComplexMatrix, lhs: ComplexMatrix,
             norm: float) -> Tuple[complex, float]:
	constant = complex(np.vdot(w, lhs)) / norm
	residual = float(np.linalg.norm(lhs - constant * w))
	return constant, residual


def verify_weight_algebra(w: ComplexMatrix, f_ops: Sequence[ComplexMatrix],
                          g_families: Sequence[Sequence[ComplexMatrix]]
                          ) -> AlgebraReport:
	"""Checks the quantum weight algebra numerically.

	For every coherent coupling ``f_j`` the relations ``w f = gamma_l w``
	(``'wf'``), ``w f^dagger = mu_l w`` (``'wf+'``), ``f w = gamma_r w``
	(``'fw'``) and ``f^dagger w = mu_r w`` (``'f+w'``) are checked, plus
	the consistency conditions ``mu = gamma*`` (``'conj_l'``,
	``'conj_r'``). For every pair ``(i, j)`` of a dissipative family
	``k`` the relations ``g_j^dagger w g_i = kappa_m w`` (``'gwg'``),
	``w g_j^dagger g_i = kappa_l w`` (``'wgg'``) and
	``g_j^dagger g_i w = kappa_r w`` (``'ggw'``) are checked, with
	indices ``(k, i, j)``.

	Each constant is the Frobenius projection ``<w, LHS> / <w, w>`` and
	the residual is ``||LHS - constant w||_F``.

	:raises: :exc:`~tlmembed.exceptions.ZeroWeight`
	"""
	w = as_matrix(w, 'w')
	norm = float(np.vdot(w, w).real)
	if norm <= STRUCTURE_TOL ** 2:
		raise ZeroWeight('Weight operator is zero')
	records = []
	for j, f in enumerate(f_ops):
		f = as_matrix(f, 'f')
		f_dagger = dagger(f)
		constants = {}
		for relation, lhs in (('wf', w @ f), ('wf+', w @ f_dagger),
		                      ('fw', f @ w), ('f+w', f_dagger @ w)):
			constant, residual = _project(w, lhs, norm)
			constants[relation] = constant
			records.append(AlgebraRecord(relation, (j,), constant, residual))
		for relation, mu, gamma in (('conj_l', 'wf+', 'wf'),
		                            ('conj_r', 'f+w', 'fw')):
			mismatch = abs(constants[mu] - constants[gamma].conjugate())
			records.append(AlgebraRecord(relation, (j,), constants[mu],
			                             mismatch))
	for k, family in enumerate(g_families):
		family = [as_matrix(g, 'g') for g in family]
		for i, g_i in enumerate(family):
			for j, g_j in enumerate(family):
				g_j_dagger = dagger(g_j)
				for relation, lhs in (('gwg', g_j_dagger @ w @ g_i),
				                      ('wgg', w @ g_j_dagger @ g_i),
				                      ('ggw', g_j_dagger @ g_i @ w)):
					constant, residual = _project(w, lhs, norm)
					records.append(AlgebraRecord(relation, (k, i, j),
					                             constant, residual))
	report = AlgebraReport(records)
	logger.debug('Weight algebra: %d relations, max residual %.3e',
	             len(records), report.max_residual)
	return report
