# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""Data model for Lindblad equations and time-local master equations
(TLMEs), and matrix-free application of their generators to density
matrices.

A :class:`LindbladSpec` holds a Hamiltonian and a list of jump operators
and defines the generator

.. math:: L(\\rho) = -i[H, \\rho] + \\sum_i J_i \\rho J_i^\\dagger
          - \\frac12 \\{J_i^\\dagger J_i, \\rho\\}.

A :class:`TlmeSpec` adds arbitrary bounded operators ``B``, ``C``,
``D_j`` and ``E_j``:

.. math:: K(\\rho) = L_{sys}(\\rho) + B\\rho + \\rho C
          + \\sum_j D_j \\rho E_j^\\dagger.

Such a generator is in general neither trace- nor positivity-preserving,
so a :data:`DensityMatrix` here is any square complex matrix.

Specs are immutable: every operator is stored as a private read-only
copy. Qubit operators use the basis ``{|g>, |e>} = {0, 1}``.
"""

import logging
from typing import Callable, Iterator, List, NamedTuple, Sequence, Tuple, \
 Union

import numpy as np

from tlmembed.defines import STRUCTURE_TOL
from tlmembed.exceptions import DimensionMismatch, BadChannelIndex, \
 NotHermitian
from tlmembed.linalg import ComplexMatrix, as_matrix, frozen, dagger, \
 hermitian_part, is_hermitian, hermiticity_error

logger = logging.getLogger(__name__)

DensityMatrix = np.ndarray


def identity(dim: int) -> ComplexMatrix:
	return np.eye(dim, dtype=np.complex128)


def sigma_minus() -> ComplexMatrix:
	"""Returns the qubit lowering operator ``|g><e|``."""
	return np.array([[0, 1], [0, 0]], dtype=np.complex128)


def sigma_plus() -> ComplexMatrix:
	return np.array([[0, 0], [1, 0]], dtype=np.complex128)


def sigma_x() -> ComplexMatrix:
	return np.array([[0, 1], [1, 0]], dtype=np.complex128)


def sigma_y() -> ComplexMatrix:
	return np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


def sigma_z() -> ComplexMatrix:
	return np.array([[1, 0], [0, -1]], dtype=np.complex128)


def destroy(dim: int) -> ComplexMatrix:
	"""Returns the truncated annihilation operator on ``dim`` Fock
	states."""
	return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(np.complex128)


def number(dim: int) -> ComplexMatrix:
	return np.diag(np.arange(dim)).astype(np.complex128)


def _check_square(matrix: ComplexMatrix, dim: int, name: str) -> None:
	if matrix.shape != (dim, dim):
		raise DimensionMismatch('{} has shape {}, expected ({}, {})'
		                        .format(name, matrix.shape, dim, dim))


def check_state(rho: DensityMatrix, dim: int) -> DensityMatrix:
	"""Converts `rho` to a complex matrix and checks that it is
	``dim x dim``."""
	rho = as_matrix(rho, 'rho')
	_check_square(rho, dim, 'rho')
	return rho


class LindbladSpec(object):
	"""A Lindblad generator: a Hermitian Hamiltonian (in units of rate,
	with hbar = 1) and a list of jump operators, all ``dim x dim``.

	:raises: :exc:`~tlmembed.exceptions.NotHermitian` if the Hamiltonian
	         is not Hermitian,
	         :exc:`~tlmembed.exceptions.DimensionMismatch` if operator
	         shapes disagree
	"""

	def __init__(self, hamiltonian: ComplexMatrix,
	             jumps: Sequence[ComplexMatrix] = ()) -> None:
		hamiltonian = as_matrix(hamiltonian, 'hamiltonian')
		dim = hamiltonian.shape[0]
		_check_square(hamiltonian, dim, 'hamiltonian')
		if not is_hermitian(hamiltonian):
			raise NotHermitian('Hamiltonian is not Hermitian (max |H - '
			                   'H^dagger| = {:.3e})'.format(
			                   hermiticity_error(hamiltonian)))
		self.hamiltonian = frozen(hermitian_part(hamiltonian))
		self.jumps = tuple(frozen(jump, 'jump {}'.format(index))
		                   for index, jump in enumerate(jumps))
		for index, jump in enumerate(self.jumps):
			_check_square(jump, dim, 'jump {}'.format(index))

	@classmethod
	def empty(cls, dim: int) -> 'LindbladSpec':
		"""Returns the zero generator on a ``dim``-dimensional space."""
		return cls(np.zeros((dim, dim), dtype=np.complex128))

	@property
	def dim(self) -> int:
		return self.hamiltonian.shape[0]

	def without_channel(self, index: int) -> 'LindbladSpec':
		"""Returns a copy of the spec with jump `index` removed."""
		if not 0 <= index < len(self.jumps):
			raise BadChannelIndex('Channel {} does not exist, spec has {} '
			                      'jump operators'.format(index, len(self.jumps)))
		return LindbladSpec(self.hamiltonian, self.jumps[:index] +
		                    self.jumps[index + 1:])

	def norm_estimate(self) -> float:
		"""Returns an upper bound of the generator norm, used for the
		step size checks."""
		bound = 2 * np.linalg.norm(self.hamiltonian, 2)
		for jump in self.jumps:
			bound += 2 * np.linalg.norm(jump, 2) ** 2
		return float(bound)

	def __repr__(self) -> str:
		return 'LindbladSpec(dim={}, jumps={})'.format(
			self.dim, len(self.jumps))


class TlmeSpec(object):
	"""A time-local master equation: a Lindblad part `lsys` plus the
	operators ``B``, ``C`` and the paired lists ``D_j``, ``E_j``.

	:attr:`hermiticity_preserving` is :const:`True` when ``C = B^dagger``
	and ``E_j = D_j`` for every ``j``, to ``1e-12``.
	"""

	def __init__(self, lsys: LindbladSpec, b: ComplexMatrix,
	             c: ComplexMatrix, d_ops: Sequence[ComplexMatrix] = (),
	             e_ops: Sequence[ComplexMatrix] = ()) -> None:
		self.lsys = lsys
		dim = lsys.dim
		self.b = frozen(b, 'b')
		self.c = frozen(c, 'c')
		_check_square(self.b, dim, 'b')
		_check_square(self.c, dim, 'c')
		if len(d_ops) != len(e_ops):
			raise DimensionMismatch('d_ops and e_ops have different lengths '
			                        '({} != {})'.format(len(d_ops), len(e_ops)))
		self.d_ops = tuple(frozen(d, 'd') for d in d_ops)
		self.e_ops = tuple(frozen(e, 'e') for e in e_ops)
		for index, (d, e) in enumerate(zip(self.d_ops, self.e_ops)):
			_check_square(d, dim, 'd_ops[{}]'.format(index))
			_check_square(e, dim, 'e_ops[{}]'.format(index))
		self.hermiticity_preserving = self._is_hermiticity_preserving()

	def _is_hermiticity_preserving(self) -> bool:
		if np.max(np.abs(self.c - dagger(self.b))) > STRUCTURE_TOL:
			return False
		return all(np.max(np.abs(d - e)) <= STRUCTURE_TOL
		           for d, e in zip(self.d_ops, self.e_ops))

	@property
	def dim(self) -> int:
		return self.lsys.dim

	def pairs(self) -> Iterator[Tuple[ComplexMatrix, ComplexMatrix]]:
		return zip(self.d_ops, self.e_ops)

	def norm_estimate(self) -> float:
		bound = self.lsys.norm_estimate()
		bound += np.linalg.norm(self.b, 2) + np.linalg.norm(self.c, 2)
		for d, e in self.pairs():
			bound += np.linalg.norm(d, 2) * np.linalg.norm(e, 2)
		return float(bound)

	def __repr__(self) -> str:
		return 'TlmeSpec(dim={}, pairs={}, hermiticity_preserving={})'.format(
			self.dim, len(self.d_ops), self.hermiticity_preserving)


Generator = Union[LindbladSpec, TlmeSpec]


def dissipator(jump: ComplexMatrix, rho: DensityMatrix) -> DensityMatrix:
	"""Returns ``J rho J^dagger - {J^dagger J, rho} / 2``."""
	jump_dagger = dagger(jump)
	gain = jump_dagger @ jump
	return jump @ rho @ jump_dagger - 0.5 * (gain @ rho + rho @ gain)


def effective_hamiltonian(spec: LindbladSpec) -> ComplexMatrix:
	"""Returns the non-Hermitian ``H - (i/2) sum J^dagger J`` that drives
	quantum jump trajectories between jumps."""
	h_eff = spec.hamiltonian.astype(np.complex128)
	for jump in spec.jumps:
		h_eff = h_eff - 0.5j * dagger(jump) @ jump
	return h_eff


def apply_lindblad(spec: LindbladSpec, rho: DensityMatrix) -> DensityMatrix:
	"""Applies the Lindblad generator to `rho`. The result is trace-free.

	:raises: :exc:`~tlmembed.exceptions.DimensionMismatch` if `rho` does
	         not match the spec dimension
	"""
	rho = check_state(rho, spec.dim)
	h = spec.hamiltonian
	result = -1j * (h @ rho - rho @ h)
	for jump in spec.jumps:
		result += dissipator(jump, rho)
	return result


def apply_tlme(spec: TlmeSpec, rho: DensityMatrix) -> DensityMatrix:
	"""Applies the TLME generator
	``K(rho) = L_sys(rho) + B rho + rho C + sum_j D_j rho E_j^dagger``.

	:raises: :exc:`~tlmembed.exceptions.DimensionMismatch`
	"""
	rho = check_state(rho, spec.dim)
	result = apply_lindblad(spec.lsys, rho)
	result += spec.b @ rho + rho @ spec.c
	for d, e in spec.pairs():
		result += d @ rho @ dagger(e)
	return result


def apply_generator(generator: Generator, rho: DensityMatrix) -> DensityMatrix:
	if isinstance(generator, TlmeSpec):
		return apply_tlme(generator, rho)
	return apply_lindblad(generator, rho)


class GeneratorTerms(NamedTuple):
	"""Any generator written as
	``K(rho) = left rho + rho right + sum_k X_k rho Y_k^dagger``."""
	left: ComplexMatrix
	right: ComplexMatrix
	sandwiches: Tuple[Tuple[ComplexMatrix, ComplexMatrix], ...]


def generator_terms(generator: Generator) -> GeneratorTerms:
	"""Collects the operator products of `generator` once, for
	integrators that apply it many times."""
	lsys = generator.lsys if isinstance(generator, TlmeSpec) else generator
	left = -1j * effective_hamiltonian(lsys)
	right = dagger(left)
	sandwiches = [(jump, jump) for jump in lsys.jumps]
	if isinstance(generator, TlmeSpec):
		left = left + generator.b
		right = right + generator.c
		sandwiches += list(generator.pairs())
	return GeneratorTerms(left, right, tuple(sandwiches))


def generator_function(generator: Generator
                       ) -> Callable[[DensityMatrix], DensityMatrix]:
	"""Returns an unchecked ``rho -> K(rho)`` with the products of
	:func:`generator_terms` precomputed."""
	terms = generator_terms(generator)
	sandwiches = [(x, dagger(y)) for x, y in terms.sandwiches]

	def apply(rho: DensityMatrix) -> DensityMatrix:
		result = terms.left @ rho + rho @ terms.right
		for x, y_dagger in sandwiches:
			result += x @ rho @ y_dagger
		return result
	return apply


def tilted_generator(base: LindbladSpec, counted_channel: int,
                     s: float) -> TlmeSpec:
	"""Returns the counting-field deformed generator ``W_s`` of `base`:
	the gain term ``J rho J^dagger`` of the counted channel is replaced by
	``exp(-s) J rho J^dagger``.

	The channel's anticommutator is stored in ``B = C^dagger =
	-J^dagger J / 2`` and the gain in ``D = E = exp(-s/2) J``; the
	remaining channels stay in `lsys`.

	:param counted_channel: zero-based index into ``base.jumps``
	:raises: :exc:`~tlmembed.exceptions.BadChannelIndex`
	"""
	lsys = base.without_channel(counted_channel)
	jump = base.jumps[counted_channel]
	anticommutator = -0.5 * dagger(jump) @ jump
	gain = np.exp(-s / 2) * jump
	return TlmeSpec(lsys, anticommutator, dagger(anticommutator),
	                [gain], [gain])


def lindblad_as_tlme(spec: LindbladSpec) -> TlmeSpec:
	"""Rewrites a Lindblad generator in pure TLME form:
	``B = C^dagger = -iH - sum J^dagger J / 2``, ``D = E = J`` and an
	empty `lsys`."""
	b = -1j * spec.hamiltonian
	for jump in spec.jumps:
		b = b - 0.5 * dagger(jump) @ jump
	return TlmeSpec(LindbladSpec.empty(spec.dim), b, dagger(b),
	                spec.jumps, spec.jumps)


def _random_matrix(dim: int, rng: np.random.Generator,
                   scale: float) -> ComplexMatrix:
	return scale * (rng.standard_normal((dim, dim)) +
	                1j * rng.standard_normal((dim, dim))) / np.sqrt(2 * dim)


def random_tlme(dim: int, rng: np.random.Generator,
                hermiticity_preserving: bool = True,
                n_pairs: int = 2, n_jumps: int = 1) -> TlmeSpec:
	"""Draws a random TLME with operators of order one.

	With `hermiticity_preserving` the spec has ``C = B^dagger`` and
	``E_j = D_j``; otherwise every operator is drawn independently.
	"""
	h = hermitian_part(_random_matrix(dim, rng, 1.0))
	jumps = [_random_matrix(dim, rng, 0.7) for _ in range(n_jumps)]
	b = _random_matrix(dim, rng, 0.7)
	d_ops = [_random_matrix(dim, rng, 0.7) for _ in range(n_pairs)]
	if hermiticity_preserving:
		c = dagger(b)
		e_ops = list(d_ops)
	else:
		c = _random_matrix(dim, rng, 0.7)
		e_ops = [_random_matrix(dim, rng, 0.7) for _ in range(n_pairs)]
	return TlmeSpec(LindbladSpec(h, jumps), b, c, d_ops, e_ops)


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
	"""Returns a random full-rank density matrix with unit trace."""
	a = _random_matrix(dim, rng, 1.0)
	rho = a @ dagger(a) + 0.1 * np.eye(dim)
	return rho / np.trace(rho)


class Schedule(object):
	"""A piecewise-constant generator: a list of ``(t_end, generator)``
	segments with increasing end times. Segment ``k`` is active on
	``[t_end[k-1], t_end[k])``; the last segment also covers any later
	time.
	"""

	def __init__(self, segments: Sequence[Tuple[float, Generator]],
	             t0: float = 0.0) -> None:
		if not segments:
			raise ValueError('Schedule needs at least one segment')
		self.t0 = float(t0)
		self.segments = tuple((float(t_end), generator)
		                      for t_end, generator in segments)
		previous = self.t0
		for t_end, generator in self.segments:
			if t_end <= previous:
				raise ValueError('Segment end times must increase, got {} '
				                 'after {}'.format(t_end, previous))
			if generator.dim != self.dim:
				raise DimensionMismatch('All segments must have the same '
				                        'dimension')
			previous = t_end

	@property
	def dim(self) -> int:
		return self.segments[0][1].dim

	def boundaries(self) -> List[float]:
		return [self.t0] + [t_end for t_end, _ in self.segments]

	def index_at(self, t: float) -> int:
		for index, (t_end, _) in enumerate(self.segments):
			if t < t_end:
				return index
		return len(self.segments) - 1

	def generator_at(self, t: float) -> Generator:
		"""Returns the generator active at time `t`."""
		return self.segments[self.index_at(t)][1]

	def norm_estimate(self) -> float:
		return max(generator.norm_estimate() for _, generator in self.segments)

	def __repr__(self) -> str:
		return 'Schedule({} segments, dim={})'.format(
			len(self.segments), self.dim)


def expectation(x: ComplexMatrix, rho: DensityMatrix,
                normalize: bool = False) -> complex:
	"""Returns ``Tr[x rho]``, divided by ``Tr rho`` if `normalize` is set."""
	value = complex(np.trace(x @ rho))
	if normalize:
		value /= complex(np.trace(rho))
	return value

