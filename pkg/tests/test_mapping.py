# Tests for tlmembed
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

# Ancilla mapping tests

import math
import unittest

import numpy as np
from numpy.testing import assert_allclose

from tlmembed.dynamics import TimeGrid, evolve_rk4, map_discrepancy
from tlmembed.exceptions import NotHermiticityPreserving, ZeroWeight, \
 InvalidDissipatorRoot, SchemeUnavailable
from tlmembed.linalg import dagger, kron
from tlmembed.mapping import P0, P1, SIGMA, Scheme, build_diagonal, \
 build_mapping, build_offdiagonal, build_schedule, compute_alpha, \
 initial_embedding, integrated_alpha, partial_trace_weighted, \
 recover_state, sampling_alpha, verify_weight_algebra
from tlmembed.model import LindbladSpec, Schedule, identity, \
 lindblad_as_tlme, random_density_matrix, random_tlme, sigma_minus, sigma_x, \
 tilted_generator
from tlmembed.trajstats import coupling_unitaries


def decay_qubit(gamma: float = 1.0) -> LindbladSpec:
	return LindbladSpec(np.zeros((2, 2)), [math.sqrt(gamma) * sigma_minus()])


def driven_decay_qubit() -> LindbladSpec:
	return LindbladSpec(sigma_x(), [sigma_minus()])


class AlphaTest(unittest.TestCase):
	"""Tests for the efficiency classifier."""

	def test_tilted_positive_s_is_efficient(self) -> None:
		for s in (0.0, 0.1, 0.5, 3.0):
			decomposition = compute_alpha(tilted_generator(decay_qubit(), 0, s))
			self.assertEqual(decomposition.alpha, 0.0)
			self.assertTrue(decomposition.efficient)

	def test_tilted_negative_s(self) -> None:
		decomposition = compute_alpha(tilted_generator(decay_qubit(), 0,
		                                               -math.log(2)))
		self.assertAlmostEqual(decomposition.alpha, 1.0, delta=1e-12)
		self.assertFalse(decomposition.efficient)
		gamma = 2.5
		decomposition = compute_alpha(tilted_generator(decay_qubit(gamma), 0,
		                                               -0.7))
		self.assertAlmostEqual(decomposition.alpha,
		                       (math.exp(0.7) - 1) * gamma, delta=1e-12)

	def test_lindblad_form_is_efficient(self) -> None:
		spec = lindblad_as_tlme(driven_decay_qubit())
		self.assertLess(compute_alpha(spec).alpha, 1e-12)

	def test_shifted_parts_are_psd(self) -> None:
		spec = random_tlme(3, np.random.default_rng(21), False)
		alpha_l, alpha_r, s_l, s_r = compute_alpha(spec)
		self.assertGreaterEqual(alpha_l, 0)
		self.assertGreaterEqual(alpha_r, 0)
		self.assertGreaterEqual(np.linalg.eigvalsh(s_l)[0], -1e-10)
		self.assertGreaterEqual(np.linalg.eigvalsh(s_r)[0], -1e-10)

	def test_alpha_is_minimal(self) -> None:
		rng = np.random.default_rng(33)
		specs = [tilted_generator(decay_qubit(), 0, -0.7),
		         tilted_generator(driven_decay_qubit(), 0, -1.5),
		         random_tlme(3, rng), random_tlme(4, rng, False)]
		for index, spec in enumerate(specs):
			alpha_l, alpha_r, s_l, s_r = compute_alpha(spec)
			for alpha, shifted in ((alpha_l, s_l), (alpha_r, s_r)):
				with self.subTest(spec=index):
					lowest = np.linalg.eigvalsh(shifted)[0]
					self.assertGreaterEqual(lowest, -1e-10)
					# a smaller shift would leave S with a negative eigenvalue
					if alpha > 1e-12:
						self.assertAlmostEqual(lowest, 0.0, delta=1e-10)

	def test_sampling_alpha_matches(self) -> None:
		spec = random_tlme(2, np.random.default_rng(4))
		self.assertEqual(sampling_alpha(spec.b, spec.c, spec.d_ops,
		                                spec.e_ops).alpha,
		                 compute_alpha(spec).alpha)


class EmbeddingTest(unittest.TestCase):
	"""Tests for the initial embedding and the recovery map."""

	def setUp(self) -> None:
		self.rng = np.random.default_rng(8)
		self.spec = random_tlme(3, self.rng)

	def test_round_trip(self) -> None:
		rho0 = random_density_matrix(3, self.rng)
		for scheme in Scheme:
			ms = build_mapping(self.spec, scheme)
			rho_tilde = initial_embedding(ms, rho0)
			self.assertAlmostEqual(np.trace(rho_tilde).real,
			                       ms.embedding_scale)
			self.assertGreaterEqual(np.linalg.eigvalsh(rho_tilde)[0], -1e-12)
			assert_allclose(recover_state(ms, rho_tilde, 0.0), rho0,
			                atol=1e-14)

	def test_partial_trace_blocks(self) -> None:
		rho = random_density_matrix(2, self.rng)
		joint = kron(rho, np.array([[1, 2], [3, 4]]))
		assert_allclose(partial_trace_weighted(joint, P0, 2), rho)
		assert_allclose(partial_trace_weighted(joint, SIGMA, 2), 2 * rho)
		assert_allclose(partial_trace_weighted(joint, P1, 2), 4 * rho)

	def test_initial_ket(self) -> None:
		ms = build_offdiagonal(self.spec)
		psi = np.array([1, 1j, 0]) / math.sqrt(2)
		joint = ms.initial_ket(psi)
		assert_allclose(ms.embedding_scale * np.outer(joint, joint.conj()),
		                initial_embedding(ms, np.outer(psi, psi.conj())))


class SchemeTest(unittest.TestCase):
	"""Map equivalence of the two schemes on random TLMEs."""

	def setUp(self) -> None:
		self.rng = np.random.default_rng(2024)
		self.grid = TimeGrid(0.0, 1.0, 5e-4, 100)

	def test_diagonal_scheme(self) -> None:
		for dim in (2, 3, 4):
			spec = random_tlme(dim, self.rng)
			ms = build_diagonal(spec)
			rho0 = random_density_matrix(dim, self.rng)
			self.assertLessEqual(map_discrepancy(spec, ms, rho0, self.grid),
			                     1e-7)

	def test_offdiagonal_scheme(self) -> None:
		for dim in (2, 3, 4):
			spec = random_tlme(dim, self.rng, hermiticity_preserving=False)
			ms = build_offdiagonal(spec)
			rho0 = random_density_matrix(dim, self.rng)
			self.assertLessEqual(map_discrepancy(spec, ms, rho0, self.grid),
			                     1e-7)

	def test_fine_grid(self) -> None:
		grid = TimeGrid(0.0, 0.5, 1e-4, 250)
		for hermiticity_preserving, build in ((True, build_diagonal),
		                                      (False, build_offdiagonal)):
			for index in range(20):
				dim = 2 + index % 3
				spec = random_tlme(dim, self.rng, hermiticity_preserving)
				rho0 = random_density_matrix(dim, self.rng)
				with self.subTest(scheme=build.__name__, index=index):
					self.assertLessEqual(map_discrepancy(spec, build(spec),
					                                     rho0, grid), 1e-7)

	def test_mapped_system_is_physical(self) -> None:
		spec = random_tlme(3, self.rng, hermiticity_preserving=False)
		ms = build_offdiagonal(spec)
		rho_tilde0 = initial_embedding(ms, random_density_matrix(3, self.rng))
		evolution = evolve_rk4(ms.lindblad, rho_tilde0, self.grid)
		for rho_tilde in evolution.states:
			self.assertLessEqual(abs(np.trace(rho_tilde) - 2), 1e-9)
			self.assertGreaterEqual(np.linalg.eigvalsh(
				(rho_tilde + dagger(rho_tilde)) / 2)[0], -1e-8)

	def test_tilted_qubit(self) -> None:
		rho0 = np.diag([0.0, 1.0])
		for s in (0.5, -0.7):
			spec = tilted_generator(driven_decay_qubit(), 0, s)
			for scheme in Scheme:
				ms = build_mapping(spec, scheme)
				self.assertAlmostEqual(ms.alpha, max(0.0, math.exp(-s) - 1),
				                       delta=1e-12)
				self.assertLessEqual(map_discrepancy(spec, ms, rho0,
				                                     self.grid), 1e-7)

	def test_diagonal_needs_hermiticity(self) -> None:
		spec = random_tlme(2, self.rng, hermiticity_preserving=False)
		self.assertRaises(NotHermiticityPreserving, build_diagonal, spec)
		with self.assertRaises(SchemeUnavailable) as context:
			build_mapping(spec, 'diagonal')
		self.assertIsInstance(context.exception.__cause__,
		                      NotHermiticityPreserving)

	def test_jump_layout(self) -> None:
		spec = tilted_generator(decay_qubit(), 0, -0.7)
		diagonal = build_diagonal(spec)
		# D ⊗ 1 and the root ⊗ sigma
		self.assertEqual(len(diagonal.lindblad.jumps), 2)
		assert_allclose(diagonal.lindblad.jumps[0],
		                kron(math.exp(0.35) * sigma_minus(), identity(2)))
		spec = tilted_generator(decay_qubit(), 0, 0.5)
		offdiagonal = build_offdiagonal(spec)
		self.assertEqual(len(offdiagonal.lindblad.jumps), 3)

	def test_root_gauge(self) -> None:
		spec = random_tlme(2, self.rng)
		s_l = compute_alpha(spec).s_l
		rotation = np.array([[0, 1], [1, 0]], dtype=np.complex128)
		root = rotation @ _principal_root(s_l)
		ms = build_diagonal(spec, root=root)
		rho0 = random_density_matrix(2, self.rng)
		self.assertLessEqual(map_discrepancy(spec, ms, rho0, self.grid), 1e-7)
		self.assertRaises(InvalidDissipatorRoot, build_diagonal, spec,
		                  root=np.eye(2) * 5)

	def test_jump_operator_as_root(self) -> None:
		# for s > 0, 2 S_l = (1 - e^{-s}) J^dagger J, so J itself is a root
		rho0 = random_density_matrix(2, self.rng)
		for s in (0.5, 2.0):
			spec = tilted_generator(driven_decay_qubit(), 0, s)
			root = math.sqrt(1 - math.exp(-s)) * sigma_minus()
			ms = build_diagonal(spec, root=root)
			self.assertEqual(ms.alpha, 0.0)
			assert_allclose(ms.lindblad.jumps[-1], kron(root, SIGMA))
			self.assertLessEqual(map_discrepancy(spec, ms, rho0, self.grid),
			                     1e-9)


def _principal_root(s_l: np.ndarray) -> np.ndarray:
	eigenvalues, vectors = np.linalg.eigh(2 * s_l)
	return (vectors * np.sqrt(eigenvalues.clip(0, None))) @ vectors.conj().T


class ScheduleMappingTest(unittest.TestCase):
	"""Tests for piecewise-constant TLMEs."""

	def test_piecewise(self) -> None:
		base = driven_decay_qubit()
		schedule = Schedule([(0.5, tilted_generator(base, 0, -0.7)),
		                     (1.0, tilted_generator(base, 0, 0.5))])
		mapped = build_schedule(schedule, Scheme.OFFDIAGONAL)
		alpha = math.exp(0.7) - 1
		self.assertAlmostEqual(integrated_alpha(mapped, 0.25), 0.25 * alpha)
		self.assertAlmostEqual(integrated_alpha(mapped, 0.75), 0.5 * alpha)
		grid = TimeGrid(0.0, 1.0, 1e-3, 50)
		self.assertLessEqual(map_discrepancy(schedule, mapped,
		                                     np.diag([0.0, 1.0]), grid), 1e-7)


class WeightAlgebraTest(unittest.TestCase):
	"""Tests for the quantum weight algebra check."""

	def test_diagonal_weight(self) -> None:
		report = verify_weight_algebra(P0, [identity(2)],
		                               [[identity(2)], [SIGMA]])
		self.assertTrue(report.passed)
		self.assertAlmostEqual(report.constant('wf', 0), 1)
		self.assertAlmostEqual(report.constant('gwg', 1, 0, 0), 0)
		self.assertAlmostEqual(report.constant('wgg', 1, 0, 0), 1)

	def test_offdiagonal_weight(self) -> None:
		report = verify_weight_algebra(SIGMA, [P0, P1], [[P0, P1]])
		self.assertTrue(report.passed)
		self.assertAlmostEqual(report.constant('wf', 0), 1)
		self.assertAlmostEqual(report.constant('fw', 0), 0)
		self.assertAlmostEqual(report.constant('fw', 1), 1)
		self.assertAlmostEqual(report.constant('gwg', 0, 0, 1), 1)

	def test_unitary_coupling_identity(self) -> None:
		s = 0.3
		report = verify_weight_algebra(SIGMA, [],
		                               [list(coupling_unitaries(s))])
		self.assertTrue(report.passed)
		average = (report.constant('gwg', 0, 0, 0) +
		           report.constant('gwg', 0, 1, 1)) / 2
		self.assertAlmostEqual(average, math.exp(-s), delta=1e-12)

	def test_failures(self) -> None:
		report = verify_weight_algebra(P0, [sigma_x()], [])
		self.assertFalse(report.passed)
		self.assertTrue(report.failures())
		self.assertRaises(KeyError, report.constant, 'gwg', 0, 0, 0)
		self.assertRaises(ZeroWeight, verify_weight_algebra,
		                  np.zeros((2, 2)), [], [])


if __name__ == '__main__':
	unittest.main()
