# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""All tlmembed functions may raise various exceptions when something
goes wrong. All exceptions derive from base
:exc:`TlmeEmbedException` class. The intermediate classes group the
errors by the module that raises them, so callers can catch, say, every
mapping error at once."""

from typing import Optional, Sequence

class TlmeEmbedException(Exception):
	"""All exceptions derive from this class."""

class LinalgException(TlmeEmbedException):
	"""Base class of the errors raised by :mod:`tlmembed.linalg`."""

class NotHermitian(LinalgException):
	"""Raised when an operation that needs a Hermitian matrix (for
	example :func:`~tlmembed.linalg.hermitian_eig`) receives a matrix
	whose anti-Hermitian part exceeds the tolerance."""

class NotPSD(LinalgException):
	"""Raised by :func:`~tlmembed.linalg.psd_sqrt` when the smallest
	eigenvalue is too negative to be round-off."""

class EigenNotConverged(LinalgException):
	"""Raised when the Jacobi sweeps do not reduce the off-diagonal
	part below the tolerance."""

class ModelException(TlmeEmbedException):
	"""Base class of the errors raised while building or applying
	generators."""

class DimensionMismatch(ModelException):
	"""Raised when operators or states of different dimensions are
	combined."""

class BadChannelIndex(ModelException):
	"""Raised when a jump channel index does not exist."""

class TruncationTooSmall(ModelException):
	"""Raised when a Fock space truncation is too small for the model
	or for the state it has to hold."""

class MappingException(TlmeEmbedException):
	"""Base class of the errors raised by :mod:`tlmembed.mapping`."""

class NotHermiticityPreserving(MappingException):
	"""Raised when the diagonal-ancilla scheme is requested for a TLME
	that does not preserve Hermiticity (``C != B^dagger`` or
	``E_j != D_j``)."""

class ZeroWeight(MappingException):
	"""Raised by :func:`~tlmembed.mapping.verify_weight_algebra` when the
	weight operator vanishes."""

class InvalidDissipatorRoot(MappingException):
	"""Raised when a user supplied gauge root ``V`` does not satisfy
	``V^dagger V = 2 S_l``."""

class SchemeUnavailable(MappingException):
	"""Raised when a mapping scheme cannot be built for a given
	configuration."""

class NumericalFailure(TlmeEmbedException):
	"""Base class of the errors that mean a numerical procedure did not
	produce a trustworthy number."""

class NotConverged(NumericalFailure):
	"""Raised by the growth estimator when the slopes of two
	successive windows still disagree. The two slopes are available as
	:attr:`slopes`."""

	def __init__(self, message: str,
	             slopes: Optional[Sequence[float]] = None) -> None:
		NumericalFailure.__init__(self, message)
		self.slopes = tuple(slopes) if slopes is not None else ()

class SignalUnderflow(NumericalFailure):
	"""Raised when the weighted trace is too small to be fitted."""

class NonUnitInitialState(TlmeEmbedException):
	"""Raised when a quantum jump run starts from a state vector that is
	not normalized."""

class NegativeS(TlmeEmbedException):
	"""Raised by :func:`~tlmembed.trajstats.build_sbias_coupling` for
	``s < 0``. Use :func:`~tlmembed.mapping.build_offdiagonal` on the
	tilted generator instead; that mapping has ``alpha > 0``."""

class FilterException(TlmeEmbedException):
	"""Base class of the errors raised by :mod:`tlmembed.qfilter`."""

class StabilityGuard(FilterException):
	"""Raised when ``dt * ||L_p||^2`` is too large for the fixed step
	stochastic integrators."""

class LengthMismatch(FilterException):
	"""Raised when a signal does not match the filter time step or
	duration."""

class ConditionNotSatisfied(FilterException):
	"""Raised by :func:`~tlmembed.qfilter.tracking_decoupling_demo` when
	the coupling does not obey ``L^dagger = -L e^{2 i phi}``."""

class ConfigParse(TlmeEmbedException):
	"""Raised when a run configuration cannot be parsed. The message
	names the offending key path (and row, for matrices).

	>>> from tlmembed.config import parse_matrix
	>>> try:
	...     parse_matrix([[[1, 0]], [[0, 0], [1, 0]]], 'tlme.b')
	... except ConfigParse as ex:
	...     print(ex)
	...
	tlme.b: row 1 has 2 entries, expected 1
	"""
