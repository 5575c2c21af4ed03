# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""This module provides the CSV writing helpers used by the command
line interface. They shouldn't normally be used by external
applications."""

import csv
import os
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from tlmembed.defines import SCHEMA_VERSION


def format_number(value: Any) -> str:
	"""Formats a number for CSV output: ``0`` for an exact zero,
	exponent notation for magnitudes below ``1e-3`` or from ``1e6`` up,
	fixed notation otherwise. :const:`None` becomes an empty cell.

	>>> format_number(0.0), format_number(2.5e-4), format_number(0.5)
	('0', '2.500000000000e-04', '0.500000000000')
	"""
	if value is None:
		return ''
	if isinstance(value, str):
		return value
	if isinstance(value, (bool, np.bool_)):
		return str(bool(value)).lower()
	if isinstance(value, (int, np.integer)):
		return str(int(value))
	value = float(value)
	if value == 0:
		return '0'
	magnitude = abs(value)
	if magnitude < 1e-3 or magnitude >= 1e6:
		return '{:.12e}'.format(value)
	return '{:.12f}'.format(value)


def metadata(command: str, config_sha256: str, seed: int,
             version: str) -> Dict[str, Any]:
	"""The metadata every output file starts with."""
	return {
		'schema_version': SCHEMA_VERSION,
		'command': command,
		'config_sha256': config_sha256,
		'seed': seed,
		'version': version,
	}


def write_csv(path: str, header: Mapping[str, Any], fieldnames: Sequence[str],
              rows: Iterable[Mapping[str, Any]],
              summary: Optional[Mapping[str, Any]] = None) -> None:
	"""Writes a CSV file preceded by ``# key: value`` header lines. The
	optional `summary` lines are appended after the rows, also
	``#``-prefixed."""
	directory = os.path.dirname(path)
	if directory:
		os.makedirs(directory, exist_ok=True)
	with open(path, 'w', encoding='utf-8', newline='') as csv_file:
		for key, value in header.items():
			csv_file.write('# {}: {}\n'.format(key, value))
		writer = csv.DictWriter(csv_file, fieldnames=list(fieldnames),
		                        lineterminator='\n')
		writer.writeheader()
		for row in rows:
			writer.writerow({key: format_number(value)
			                 for key, value in row.items()})
		for key, value in (summary or {}).items():
			csv_file.write('# {}: {}\n'.format(key, format_number(value)))


def read_csv(path: str) -> List[Dict[str, str]]:
	"""Reads a file written by :func:`write_csv`, skipping the comment
	lines."""
	with open(path, encoding='utf-8', newline='') as csv_file:
		lines = [line for line in csv_file if not line.startswith('#')]
	return list(csv.DictReader(lines))


def read_header(path: str) -> Dict[str, str]:
	"""Returns the ``# key: value`` lines of a file written by
	:func:`write_csv`."""
	header = {}
	with open(path, encoding='utf-8') as csv_file:
		for line in csv_file:
			if line.startswith('# '):
				key, _, value = line[2:].rstrip('\n').partition(': ')
				header[key] = value
	return header


def state_columns(dim: int, prefix: str = 'rho') -> List[str]:
	"""Column names for the real and imaginary parts of a ``dim x dim``
	matrix, row by row."""
	return ['{}_{}{}_{}'.format(prefix, i, j, part) for i in range(dim)
	        for j in range(dim) for part in ('re', 'im')]


def state_cells(matrix: np.ndarray, prefix: str = 'rho') -> Dict[str, float]:
	dim = matrix.shape[0]
	cells = {}
	for i in range(dim):
		for j in range(dim):
			cells['{}_{}{}_re'.format(prefix, i, j)] = matrix[i, j].real
			cells['{}_{}{}_im'.format(prefix, i, j)] = matrix[i, j].imag
	return cells
