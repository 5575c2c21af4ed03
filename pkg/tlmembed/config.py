# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""Run configurations for the :mod:`tlmembed.cli` commands.

A configuration is a JSON object::

    {
      "schema_version": 1,
      "command": "map-check",
      "seed": 7,
      "model": {"tilted": {"base": {"hamiltonian": ..., "jumps": [...]},
                           "channel": 0, "s": 0.5}},
      "grid": {"t1": 1.0, "dt": 0.001}
    }

Complex matrices are lists of rows, each row a list of ``[re, im]``
pairs (a bare number is read as a real entry). Unknown keys are
rejected, and every error names the key path it was found at.

Parsing normalizes the document: defaults are filled in and every
matrix entry becomes a ``[re, im]`` pair of floats, so that
:meth:`RunConfig.to_json` is canonical and parsing its output gives
the same configuration back.
"""

import copy
import hashlib
import json
import os
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from tlmembed.defines import SCHEMA_VERSION
from tlmembed.dynamics import TimeGrid
from tlmembed.exceptions import ConfigParse
from tlmembed.linalg import ComplexMatrix
from tlmembed.mapping import Scheme
from tlmembed.model import DensityMatrix, Generator, LindbladSpec, TlmeSpec, \
 identity, tilted_generator
from tlmembed.qfilter import FilterSpec
from tlmembed.trajstats import Method, MicromaserSpec

COMMANDS = ('map-check', 'theta-sweep', 'mc', 'filter-demo', 'evolve')
CONFIGS_DIR = os.path.join(os.path.dirname(__file__), 'configs')

_REQUIRED = object()

Document = Dict[str, Any]


def _fail(path: str, message: str) -> ConfigParse:
	return ConfigParse('{}: {}'.format(path, message))


def _join(path: str, key: str) -> str:
	return '{}.{}'.format(path, key) if path else key


def _entry(value: Any, path: str, row: int, column: int) -> List[float]:
	if isinstance(value, bool):
		raise _fail(path, 'row {} entry {} is not a number'.format(row, column))
	if isinstance(value, (int, float)):
		return [float(value), 0.0]
	if isinstance(value, list) and len(value) == 2 and \
	   all(isinstance(part, (int, float)) and not isinstance(part, bool)
	       for part in value):
		return [float(value[0]), float(value[1])]
	raise _fail(path, 'row {} entry {} is not a [re, im] pair'.format(
		row, column))


def normalize_matrix(data: Any, path: str) -> List[List[List[float]]]:
	"""Validates a matrix document and returns it with every entry as a
	``[re, im]`` pair of floats.

	:raises: :exc:`~tlmembed.exceptions.ConfigParse`
	"""
	if not isinstance(data, list) or not data:
		raise _fail(path, 'expected a non-empty list of rows')
	rows = []
	for index, row in enumerate(data):
		if not isinstance(row, list):
			raise _fail(path, 'row {} is not a list'.format(index))
		if rows and len(row) != len(rows[0]):
			raise _fail(path, 'row {} has {} entries, expected {}'.format(
				index, len(row), len(rows[0])))
		rows.append([_entry(value, path, index, column)
		             for column, value in enumerate(row)])
	if len(rows) != len(rows[0]):
		raise _fail(path, 'matrix is {}x{}, expected a square matrix'.format(
			len(rows), len(rows[0])))
	return rows


def parse_matrix(data: Any, path: str) -> ComplexMatrix:
	"""Converts a matrix document into a complex array.

	:raises: :exc:`~tlmembed.exceptions.ConfigParse` naming `path` and
	         the offending row
	"""
	rows = normalize_matrix(data, path)
	pairs = np.array(rows, dtype=float)
	return pairs[..., 0] + 1j * pairs[..., 1]


def matrix_document(matrix: ComplexMatrix) -> List[List[List[float]]]:
	"""Inverse of :func:`parse_matrix`."""
	matrix = np.asarray(matrix, dtype=np.complex128)
	return [[[float(value.real), float(value.imag)] for value in row]
	        for row in matrix]


class _Block(object):
	"""Reads one JSON object, tracking which keys were consumed."""

	def __init__(self, data: Any, path: str) -> None:
		if not isinstance(data, dict):
			raise _fail(path or '<root>', 'expected an object')
		self.data = data
		self.path = path
		self.out = {}  # type: Document

	def _take(self, key: str, default: Any) -> Any:
		if key in self.data:
			return self.data[key]
		if default is _REQUIRED:
			raise _fail(_join(self.path, key), 'missing required key')
		return default

	def number(self, key: str, default: Any = _REQUIRED,
	           check: Optional[Callable[[float], bool]] = None,
	           requirement: str = '') -> Optional[float]:
		value = self._take(key, default)
		if value is not None:
			if isinstance(value, bool) or not isinstance(value, (int, float)):
				raise _fail(_join(self.path, key), 'expected a number')
			value = float(value)
			if check is not None and not check(value):
				raise _fail(_join(self.path, key), requirement)
		self.out[key] = value
		return value

	def integer(self, key: str, default: Any = _REQUIRED,
	            minimum: Optional[int] = None) -> int:
		value = self._take(key, default)
		if isinstance(value, bool) or not isinstance(value, int):
			raise _fail(_join(self.path, key), 'expected an integer')
		if minimum is not None and value < minimum:
			raise _fail(_join(self.path, key),
			            'must be at least {}'.format(minimum))
		self.out[key] = value
		return value

	def flag(self, key: str, default: Any = _REQUIRED) -> bool:
		value = self._take(key, default)
		if not isinstance(value, bool):
			raise _fail(_join(self.path, key), 'expected true or false')
		self.out[key] = value
		return value

	def choice(self, key: str, options: Sequence[str],
	           default: Any = _REQUIRED) -> str:
		value = self._take(key, default)
		if value not in options:
			raise _fail(_join(self.path, key), 'expected one of {}'.format(
				', '.join(options)))
		self.out[key] = value
		return value

	def matrix(self, key: str, default: Any = _REQUIRED) -> Any:
		value = self._take(key, default)
		if value is not None:
			value = normalize_matrix(value, _join(self.path, key))
		self.out[key] = value
		return value

	def matrices(self, key: str) -> None:
		values = self._take(key, [])
		path = _join(self.path, key)
		if not isinstance(values, list):
			raise _fail(path, 'expected a list of matrices')
		self.out[key] = [normalize_matrix(value, '{}[{}]'.format(path, index))
		                 for index, value in enumerate(values)]

	def numbers(self, key: str, default: Any = _REQUIRED,
	            distinct: bool = False) -> None:
		values = self._take(key, default)
		path = _join(self.path, key)
		if not isinstance(values, list) or not values or any(
		   isinstance(value, bool) or not isinstance(value, (int, float))
		   for value in values):
			raise _fail(path, 'expected a non-empty list of numbers')
		values = [float(value) for value in values]
		if distinct and len(set(values)) != len(values):
			raise _fail(path, 'value {:g} is repeated'.format(
				next(value for value in values if values.count(value) > 1)))
		self.out[key] = values

	def choices(self, key: str, options: Sequence[str],
	            default: Any = _REQUIRED) -> Optional[List[str]]:
		"""Reads a non-empty list drawn from `options`; ``null`` is kept."""
		values = self._take(key, default)
		if values is not None and (not isinstance(values, list) or
		   not values or any(value not in options for value in values)):
			raise _fail(_join(self.path, key), 'expected a non-empty list '
			            'drawn from {}'.format(', '.join(options)))
		self.out[key] = values
		return values

	def block(self, key: str, reader: Callable[['_Block'], None],
	          default: Any = _REQUIRED) -> None:
		value = self._take(key, default)
		if value is None:
			self.out[key] = None
			return
		child = _Block(value, _join(self.path, key))
		reader(child)
		self.out[key] = child.finish()

	def finish(self) -> Document:
		for key in self.data:
			if key not in self.out:
				raise _fail(_join(self.path, key), 'unknown key')
		return self.out


def _read_lindblad(block: _Block) -> None:
	block.matrix('hamiltonian')
	block.matrices('jumps')


def _read_tlme(block: _Block) -> None:
	block.block('lsys', _read_lindblad, None)
	block.matrix('b')
	block.matrix('c')
	block.matrices('d')
	block.matrices('e')


def _read_tilted(block: _Block) -> None:
	block.block('base', _read_lindblad)
	block.integer('channel', 0, minimum=0)
	block.number('s')


def _read_micromaser(block: _Block) -> None:
	block.integer('fock_dim', minimum=2)
	block.number('pump_rate', check=lambda x: x > 0, requirement='must be '
	             'positive')
	block.number('rabi_angle')
	block.number('thermal_occupancy', 0.0, check=lambda x: x >= 0,
	             requirement='must not be negative')
	block.flag('scaled_angle', False)


_MODEL_READERS = {
	'lindblad': _read_lindblad,
	'tlme': _read_tlme,
	'tilted': _read_tilted,
	'micromaser': _read_micromaser,
}

_COMMAND_MODELS = {
	'map-check': ('lindblad', 'tlme', 'tilted'),
	'evolve': ('lindblad', 'tlme', 'tilted'),
	'theta-sweep': ('lindblad', 'micromaser'),
	'mc': ('lindblad', 'tlme', 'tilted', 'micromaser'),
}


def _model_reader(kinds: Sequence[str]) -> Callable[[_Block], None]:
	def read(block: _Block) -> None:
		present = [key for key in block.data if key in _MODEL_READERS]
		if len(present) != 1 or present[0] not in kinds:
			raise _fail(block.path, 'expected exactly one of {}'.format(
				', '.join(kinds)))
		block.block(present[0], _MODEL_READERS[present[0]])
	return read


def _read_grid(block: _Block) -> None:
	block.number('t0', 0.0)
	block.number('t1')
	block.number('dt', check=lambda x: x > 0, requirement='must be positive')
	block.integer('sample_stride', 1, minimum=1)


def _read_filter(block: _Block) -> None:
	block.matrix('hamiltonian')
	block.matrix('coupling')
	block.number('homodyne_angle', 0.0)
	block.number('dt', check=lambda x: x > 0, requirement='must be positive')
	block.number('duration', check=lambda x: x > 0,
	             requirement='must be positive')


def _read_document(block: _Block) -> None:
	version = block.integer('schema_version')
	if version != SCHEMA_VERSION:
		raise _fail('schema_version', 'unsupported version {}, expected {}'
		            .format(version, SCHEMA_VERSION))
	command = block.choice('command', COMMANDS)
	block.integer('seed', 0, minimum=0)
	if command in _COMMAND_MODELS:
		block.block('model', _model_reader(_COMMAND_MODELS[command]))
	if command in ('map-check', 'evolve', 'theta-sweep', 'mc'):
		block.block('grid', _read_grid)
	if command in ('map-check', 'evolve', 'filter-demo'):
		block.matrix('initial_state', None)
	if command == 'map-check':
		# null runs every scheme the model admits
		block.choices('schemes', [scheme.value for scheme in Scheme], None)
		block.number('tolerance', 1e-7, check=lambda x: x > 0,
		             requirement='must be positive')
	if command == 'theta-sweep':
		block.numbers('s_values', distinct=True)
		block.choice('method', [method.value for method in Method], 'growth')
		block.integer('counted_channel', 0, minimum=0)
		block.integer('n_trajectories', 2000, minimum=1)
		block.flag('timing', False)
	if command == 'mc':
		block.number('s', None)
		block.integer('counted_channel', 0, minimum=0)
		block.choice('scheme', [scheme.value for scheme in Scheme],
		             Scheme.OFFDIAGONAL.value)
		block.integer('n_trajectories', 2000, minimum=1)
	if command == 'filter-demo':
		block.block('filter', _read_filter)
		block.matrix('filter_initial_state', None)
		block.integer('n_seeds', 1, minimum=1)


def _lindblad(document: Document) -> LindbladSpec:
	return LindbladSpec(parse_matrix(document['hamiltonian'], 'hamiltonian'),
	                    [parse_matrix(jump, 'jumps') for jump in
	                     document['jumps']])


class RunConfig(object):
	"""A parsed and normalized run configuration. Use :meth:`from_dict`
	or :func:`load_config` to create one."""

	def __init__(self, document: Document) -> None:
		self.document = document

	@classmethod
	def from_dict(cls, data: Any) -> 'RunConfig':
		""":raises: :exc:`~tlmembed.exceptions.ConfigParse`"""
		block = _Block(data, '')
		_read_document(block)
		return cls(block.finish())

	@property
	def command(self) -> str:
		return self.document['command']

	@property
	def seed(self) -> int:
		return self.document['seed']

	def get(self, key: str, default: Any = None) -> Any:
		return self.document.get(key, default)

	def to_dict(self) -> Document:
		return copy.deepcopy(self.document)

	def to_json(self) -> str:
		"""Canonical JSON: sorted keys, no whitespace."""
		return json.dumps(self.document, sort_keys=True,
		                  separators=(',', ':'))

	def sha256(self) -> str:
		return hashlib.sha256(self.to_json().encode('utf-8')).hexdigest()

	def with_seed(self, seed: int) -> 'RunConfig':
		document = self.to_dict()
		document['seed'] = seed
		return RunConfig.from_dict(document)

	def model_kind(self) -> str:
		(kind,) = self.document['model']
		return kind

	def model(self) -> Any:
		"""Builds the model block: a :class:`~tlmembed.model.LindbladSpec`,
		a :class:`~tlmembed.model.TlmeSpec` (also for ``tilted``) or a
		:class:`~tlmembed.trajstats.MicromaserSpec`."""
		kind = self.model_kind()
		block = self.document['model'][kind]
		if kind == 'lindblad':
			return _lindblad(block)
		if kind == 'micromaser':
			return MicromaserSpec(**block)
		if kind == 'tilted':
			return tilted_generator(_lindblad(block['base']), block['channel'],
			                        block['s'])
		lsys = _lindblad(block['lsys']) if block['lsys'] is not None else \
		       LindbladSpec.empty(len(block['b']))
		return TlmeSpec(lsys, parse_matrix(block['b'], 'b'),
		                parse_matrix(block['c'], 'c'),
		                [parse_matrix(m, 'd') for m in block['d']],
		                [parse_matrix(m, 'e') for m in block['e']])

	def generator(self) -> Generator:
		model = self.model()
		if isinstance(model, MicromaserSpec):
			raise _fail('model', 'a micromaser block is not a generator')
		return model

	def grid(self) -> TimeGrid:
		block = self.document['grid']
		try:
			return TimeGrid(block['t0'], block['t1'], block['dt'],
			                block['sample_stride'])
		except ValueError as ex:
			raise _fail('grid', str(ex)) from ex

	def initial_state(self, dim: int, key: str = 'initial_state'
	                  ) -> DensityMatrix:
		"""The configured initial state, or the maximally mixed state."""
		value = self.document.get(key)
		if value is None:
			return identity(dim) / dim
		rho = parse_matrix(value, key)
		if rho.shape != (dim, dim):
			raise _fail(key, 'state is {}x{}, model dimension is {}'.format(
				rho.shape[0], rho.shape[1], dim))
		return rho

	def filter_spec(self) -> FilterSpec:
		block = self.document['filter']
		return FilterSpec(parse_matrix(block['hamiltonian'], 'hamiltonian'),
		                  parse_matrix(block['coupling'], 'coupling'),
		                  block['homodyne_angle'], block['dt'],
		                  block['duration'])

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, RunConfig):
			return NotImplemented
		return self.to_json() == other.to_json()

	def __repr__(self) -> str:
		return 'RunConfig(command={!r}, sha256={})'.format(
			self.command, self.sha256()[:12])


def load_config(path: str) -> RunConfig:
	"""Reads a configuration file. A `path` that does not exist but
	names a bundled configuration (see :func:`bundled_configs`) loads
	that one.

	:raises: :exc:`~tlmembed.exceptions.ConfigParse`
	"""
	if not os.path.exists(path) and path in bundled_configs():
		path = bundled_config_path(path)
	try:
		with open(path, encoding='utf-8') as config_file:
			data = json.load(config_file)
	except OSError as ex:
		raise ConfigParse('{}: cannot read ({})'.format(path,
		                  ex.strerror)) from ex
	except ValueError as ex:
		raise ConfigParse('{}: invalid JSON ({})'.format(path, ex)) from ex
	return RunConfig.from_dict(data)


def bundled_configs() -> List[str]:
	"""Returns the names of the configurations shipped with the package."""
	return sorted(name[:-len('.json')] for name in os.listdir(CONFIGS_DIR)
	              if name.endswith('.json'))


def bundled_config_path(name: str) -> str:
	return os.path.join(CONFIGS_DIR, name + '.json')
