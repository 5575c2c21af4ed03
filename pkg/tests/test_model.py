# Tests for tlmembed
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

# Generator and model tests

import unittest

import numpy as np
from numpy.testing import assert_allclose

from tlmembed.exceptions import NotHermitian, DimensionMismatch, \
 BadChannelIndex
from tlmembed.model import LindbladSpec, TlmeSpec, Schedule, \
 apply_generator, apply_lindblad, apply_tlme, destroy, dissipator, \
 effective_hamiltonian, expectation, generator_function, identity, \
 lindblad_as_tlme, number, random_density_matrix, random_tlme, \
 sigma_minus, sigma_plus, sigma_x, sigma_y, sigma_z, tilted_generator


def driven_decay_qubit(omega: float = 1.0, gamma: float = 1.0) -> LindbladSpec:
	return LindbladSpec(omega * sigma_x(),
	                    [np.sqrt(gamma) * sigma_minus()])


class OperatorTest(unittest.TestCase):
	"""Tests for the standard operators."""

	def test_qubit_operators(self) -> None:
		# basis order {|g>, |e>}, sigma_minus = |g><e|
		assert_allclose(sigma_minus() @ np.array([0, 1]), [1, 0])
		assert_allclose(sigma_plus(), sigma_minus().conj().T)
		assert_allclose(sigma_x() @ sigma_y(), 1j * sigma_z())

	def test_fock_operators(self) -> None:
		a = destroy(4)
		assert_allclose(a.conj().T @ a, number(4))
		assert_allclose(np.diag(number(4)), [0, 1, 2, 3])
		assert_allclose(identity(3), np.eye(3))


class LindbladSpecTest(unittest.TestCase):
	"""Tests for the LindbladSpec type and its generator."""

	def test_validation(self) -> None:
		self.assertRaises(NotHermitian, LindbladSpec, [[0, 1], [0, 0]])
		self.assertRaises(DimensionMismatch, LindbladSpec, np.eye(2),
		                  [np.eye(3)])

	def test_matrices_are_copied(self) -> None:
		h = np.zeros((2, 2))
		spec = LindbladSpec(h, [sigma_minus()])
		h[0, 0] = 1
		self.assertEqual(spec.hamiltonian[0, 0], 0)
		self.assertFalse(spec.jumps[0].flags.writeable)

	def test_trace_preserving(self) -> None:
		rng = np.random.default_rng(3)
		spec = random_tlme(3, rng).lsys
		rho = random_density_matrix(3, rng)
		self.assertAlmostEqual(abs(np.trace(apply_lindblad(spec, rho))), 0,
		                       places=12)

	def test_decay(self) -> None:
		spec = LindbladSpec(np.zeros((2, 2)), [sigma_minus()])
		excited = np.diag([0.0, 1.0])
		assert_allclose(apply_lindblad(spec, excited), np.diag([1.0, -1.0]))
		assert_allclose(dissipator(sigma_minus(), excited),
		                np.diag([1.0, -1.0]))

	def test_without_channel(self) -> None:
		spec = LindbladSpec(np.zeros((2, 2)), [sigma_minus(), sigma_z()])
		rest = spec.without_channel(0)
		self.assertEqual(len(rest.jumps), 1)
		assert_allclose(rest.jumps[0], sigma_z())
		self.assertRaises(BadChannelIndex, spec.without_channel, 2)
		self.assertRaises(BadChannelIndex, spec.without_channel, -1)

	def test_effective_hamiltonian(self) -> None:
		spec = driven_decay_qubit()
		expected = sigma_x() - 0.5j * np.diag([0, 1])
		assert_allclose(effective_hamiltonian(spec), expected)

	def test_dimension_check(self) -> None:
		self.assertRaises(DimensionMismatch, apply_lindblad,
		                  driven_decay_qubit(), np.eye(3))


class TlmeSpecTest(unittest.TestCase):
	"""Tests for the TlmeSpec type and the TLME generator."""

	def setUp(self) -> None:
		self.rng = np.random.default_rng(11)

	def test_hermiticity_flag(self) -> None:
		self.assertTrue(random_tlme(3, self.rng).hermiticity_preserving)
		self.assertFalse(random_tlme(3, self.rng, False)
		                 .hermiticity_preserving)

	def test_hermiticity_preserving_generator(self) -> None:
		spec = random_tlme(3, self.rng)
		rho = random_density_matrix(3, self.rng)
		k = apply_tlme(spec, rho)
		assert_allclose(k, k.conj().T, atol=1e-12)

	def test_unequal_pairs(self) -> None:
		self.assertRaises(DimensionMismatch, TlmeSpec, LindbladSpec.empty(2),
		                  np.eye(2), np.eye(2), [np.eye(2)], [])

	def test_lindblad_as_tlme(self) -> None:
		spec = driven_decay_qubit()
		rho = random_density_matrix(2, self.rng)
		assert_allclose(apply_tlme(lindblad_as_tlme(spec), rho),
		                apply_lindblad(spec, rho), atol=1e-14)

	def test_generator_function(self) -> None:
		for generator in (random_tlme(3, self.rng, False),
		                  random_tlme(3, self.rng).lsys):
			rho = random_density_matrix(3, self.rng)
			assert_allclose(generator_function(generator)(rho),
			                apply_generator(generator, rho), atol=1e-12)


class TiltedGeneratorTest(unittest.TestCase):
	"""Tests for the counting field deformation."""

	def test_zero_field_is_lindblad(self) -> None:
		spec = driven_decay_qubit()
		rho = random_density_matrix(2, np.random.default_rng(5))
		assert_allclose(apply_tlme(tilted_generator(spec, 0, 0.0), rho),
		                apply_lindblad(spec, rho), atol=1e-14)

	def test_gain_is_scaled(self) -> None:
		spec = LindbladSpec(np.zeros((2, 2)), [sigma_minus()])
		s = 0.8
		tilted = tilted_generator(spec, 0, s)
		excited = np.diag([0.0, 1.0])
		assert_allclose(apply_tlme(tilted, excited),
		                np.diag([np.exp(-s), -1.0]))
		self.assertTrue(tilted.hermiticity_preserving)
		self.assertEqual(len(tilted.lsys.jumps), 0)

	def test_other_channels_stay(self) -> None:
		spec = LindbladSpec(np.zeros((2, 2)), [sigma_minus(), sigma_plus()])
		tilted = tilted_generator(spec, 1, 0.3)
		self.assertEqual(len(tilted.lsys.jumps), 1)
		assert_allclose(tilted.lsys.jumps[0], sigma_minus())
		self.assertRaises(BadChannelIndex, tilted_generator, spec, 2, 0.3)


class ScheduleTest(unittest.TestCase):

	def test_segments(self) -> None:
		first = lindblad_as_tlme(driven_decay_qubit())
		second = tilted_generator(driven_decay_qubit(), 0, 1.0)
		schedule = Schedule([(1.0, first), (2.0, second)])
		self.assertIs(schedule.generator_at(0.5), first)
		self.assertIs(schedule.generator_at(1.0), second)
		self.assertIs(schedule.generator_at(5.0), second)
		self.assertEqual(schedule.boundaries(), [0.0, 1.0, 2.0])
		self.assertRaises(ValueError, Schedule, [(1.0, first), (0.5, second)])
		self.assertRaises(DimensionMismatch, Schedule,
		                  [(1.0, first), (2.0, LindbladSpec.empty(3))])


class ExpectationTest(unittest.TestCase):

	def test_expectation(self) -> None:
		rho = np.diag([0.2, 0.6])
		self.assertAlmostEqual(expectation(sigma_z(), rho), -0.4)
		self.assertAlmostEqual(expectation(sigma_z(), rho, normalize=True),
		                       -0.5)


if __name__ == '__main__':
	unittest.main()
