# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""Dense complex linear algebra sized for desk-scale Hilbert spaces.

Operators are represented as two-dimensional ``complex128``
:class:`numpy.ndarray` objects (the *ComplexMatrix* of the
documentation). Tensor products are always ordered *system* ⊗ *ancilla*,
with the ancilla index varying fastest: the joint basis state
``|s>|a>`` has index ``s * dim_a + a``. Every block extraction in
:mod:`tlmembed.mapping` relies on this ordering.

The Hermitian eigensolver is a cyclic complex Jacobi iteration; it is
the only eigensolver the mapping code uses.
"""

import math
from typing import Tuple

import numpy as np

from tlmembed.defines import HERMITIAN_TOL, JACOBI_OFFDIAG_TOL, \
 JACOBI_MAX_SWEEPS, PSD_CLAMP_TOL, PSD_REJECT_TOL
from tlmembed.exceptions import NotHermitian, NotPSD, EigenNotConverged, \
 DimensionMismatch

ComplexMatrix = np.ndarray


def as_matrix(data: object, name: str = 'matrix') -> ComplexMatrix:
	"""Returns `data` as a two-dimensional complex128 array.

	:raises: :exc:`ValueError` if the array is not two-dimensional or
	         has non-finite entries.
	"""
	array = np.array(data, dtype=np.complex128)
	if array.ndim != 2 or 0 in array.shape:
		raise ValueError('{} must be a non-empty 2-D array, got shape {}'
		                 .format(name, array.shape))
	if not np.all(np.isfinite(array)):
		raise ValueError('{} has non-finite entries'.format(name))
	return array


def frozen(data: object, name: str = 'matrix') -> ComplexMatrix:
	"""Like :func:`as_matrix`, but returns a private read-only copy."""
	array = as_matrix(data, name).copy()
	array.setflags(write=False)
	return array


def dagger(a: ComplexMatrix) -> ComplexMatrix:
	return a.conj().T


def hermitian_part(a: ComplexMatrix) -> ComplexMatrix:
	"""Returns ``(a + a^dagger) / 2``."""
	return (a + dagger(a)) / 2


def antihermitian_part(a: ComplexMatrix) -> ComplexMatrix:
	"""Returns ``(a - a^dagger) / 2``."""
	return (a - dagger(a)) / 2


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
	return a @ b - b @ a


def hermiticity_error(h: ComplexMatrix) -> float:
	return float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0


def is_hermitian(h: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
	return h.shape[0] == h.shape[1] and hermiticity_error(h) <= tol


def ket(index: int, dim: int) -> np.ndarray:
	vector = np.zeros(dim, dtype=np.complex128)
	vector[index] = 1
	return vector


def projector(vector: np.ndarray) -> ComplexMatrix:
	vector = np.asarray(vector, dtype=np.complex128)
	return np.outer(vector, vector.conj())


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
	"""Returns the Kronecker product ``a ⊗ b``; the index of `b` varies
	fastest, so ``kron(system_op, ancilla_op)`` follows the package-wide
	system ⊗ ancilla ordering."""
	return np.kron(as_matrix(a, 'a'), as_matrix(b, 'b'))


def _check_hermitian(h: ComplexMatrix) -> ComplexMatrix:
	h = as_matrix(h, 'h')
	if h.shape[0] != h.shape[1]:
		raise DimensionMismatch('Hermitian matrix must be square, got {}'
		                        .format(h.shape))
	error = hermiticity_error(h)
	if error > HERMITIAN_TOL:
		raise NotHermitian('Matrix is not Hermitian (max |h - h^dagger| '
		                   '= {:.3e})'.format(error))
	return hermitian_part(h)


def _off_diagonal_norm(a: np.ndarray) -> float:
	return math.sqrt(max(0.0, float(np.sum(np.abs(a) ** 2)
	                                - np.sum(np.abs(np.diag(a)) ** 2))))


def hermitian_eig(h: ComplexMatrix) -> Tuple[np.ndarray, ComplexMatrix]:
	"""Diagonalizes a Hermitian matrix with cyclic complex Jacobi
	rotations.

	:returns: a tuple; the first element is the real vector of
	          eigenvalues in ascending order, the second element is the
	          unitary matrix whose columns are the matching
	          eigenvectors, so that ``h = V diag(lambda) V^dagger``
	:raises: :exc:`~tlmembed.exceptions.NotHermitian` if
	         ``max |h - h^dagger|`` exceeds ``1e-10``
	"""
	a = _check_hermitian(h).copy()
	n = a.shape[0]
	v = np.eye(n, dtype=np.complex128)
	threshold = JACOBI_OFFDIAG_TOL * max(1.0, float(np.linalg.norm(a)))
	for sweep in range(JACOBI_MAX_SWEEPS):
		if _off_diagonal_norm(a) < threshold:
			break
		for p in range(n - 1):
			for q in range(p + 1, n):
				apq = a[p, q]
				magnitude = abs(apq)
				if magnitude == 0:
					continue
				phase = apq / magnitude
				theta = 0.5 * math.atan2(2 * magnitude,
				                         (a[q, q] - a[p, p]).real)
				c, s = math.cos(theta), math.sin(theta)
				# diag(1, phase*) followed by a real plane rotation
				rotation = np.array([[c, s],
				                     [-s * phase.conjugate(), c * phase.conjugate()]])
				pair = [p, q]
				a[:, pair] = a[:, pair] @ rotation
				a[pair, :] = dagger(rotation) @ a[pair, :]
				a[p, q] = a[q, p] = 0
				v[:, pair] = v[:, pair] @ rotation
	else:
		if _off_diagonal_norm(a) >= threshold:
			raise EigenNotConverged('Jacobi iteration did not converge in '
			                        '{} sweeps'.format(JACOBI_MAX_SWEEPS))
	eigenvalues = np.diag(a).real.copy()
	order = np.argsort(eigenvalues, kind='stable')
	return eigenvalues[order], v[:, order]


def lambda_max_plus(h: ComplexMatrix) -> float:
	"""Returns the largest positive eigenvalue of `h`, or ``0`` if `h`
	has no positive eigenvalues."""
	eigenvalues, _ = hermitian_eig(h)
	return max(0.0, float(eigenvalues[-1]))


def psd_sqrt(m: ComplexMatrix) -> ComplexMatrix:
	"""Returns the principal square root ``V diag(sqrt(lambda)) V^dagger``
	of a positive-semidefinite matrix. Eigenvalues in ``[-1e-8, 0)`` are
	treated as round-off and clamped to zero.

	:raises: :exc:`~tlmembed.exceptions.NotPSD` if the smallest
	         eigenvalue is below ``-1e-8``
	"""
	eigenvalues, vectors = hermitian_eig(m)
	if eigenvalues.size and eigenvalues[0] < -PSD_REJECT_TOL:
		raise NotPSD('Matrix is not positive-semidefinite (smallest '
		             'eigenvalue {:.3e})'.format(eigenvalues[0]))
	roots = np.sqrt(np.where(eigenvalues < PSD_CLAMP_TOL, 0.0, eigenvalues)
	                .clip(0.0, None))
	root = (vectors * roots) @ dagger(vectors)
	return hermitian_part(root)
