# Tests for tlmembed
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

# Integrator, quantum jump and theta estimator tests

import math
import unittest

import numpy as np
from numpy.testing import assert_allclose
from scipy.linalg import expm

from tlmembed.dynamics import TimeGrid, Evolution, evolve_rk4, \
 rk4_step_matrix, liouvillian_matrix, vectorize, theta_dense, \
 theta_from_growth, theta_from_coherence, dominant_state, fit_log_slope, \
 jump_mc, jump_mc_ensemble, run_mapped_mc, weighted_observable, \
 weighted_samples, coherence_signal, _rk4_step
from tlmembed.exceptions import NotConverged, SignalUnderflow, \
 NonUnitInitialState, DimensionMismatch
from tlmembed.linalg import ket
from tlmembed.mapping import build_diagonal, build_offdiagonal, \
 initial_embedding
from tlmembed.model import LindbladSpec, Schedule, apply_generator, \
 generator_function, identity, lindblad_as_tlme, random_density_matrix, \
 random_tlme, sigma_minus, sigma_x, tilted_generator
from tlmembed.trajstats import unitary_coupling


def driven_decay_qubit() -> LindbladSpec:
	return LindbladSpec(sigma_x(), [sigma_minus()])


class TimeGridTest(unittest.TestCase):
	"""Tests for the TimeGrid type."""

	def test_samples(self) -> None:
		grid = TimeGrid(0.0, 1.0, 0.1, 3)
		self.assertEqual(grid.n_steps, 10)
		self.assertEqual(list(grid.sample_indices()), [0, 3, 6, 9, 10])
		assert_allclose(grid.sample_times(), [0, 0.3, 0.6, 0.9, 1.0])

	def test_span(self) -> None:
		grid = TimeGrid.span(2.0, 0.01, samples=20)
		self.assertEqual(grid.n_steps, 200)
		self.assertEqual(grid.sample_stride, 10)

	def test_invalid(self) -> None:
		self.assertRaises(ValueError, TimeGrid, 0.0, 1.0, 0.0)
		self.assertRaises(ValueError, TimeGrid, 1.0, 1.0, 0.1)
		self.assertRaises(ValueError, TimeGrid, 0.0, 1.0, 0.1, 0)


class EvolveTest(unittest.TestCase):
	"""Tests for the RK4 integrator."""

	def test_decay(self) -> None:
		spec = LindbladSpec(np.zeros((2, 2)), [sigma_minus()])
		grid = TimeGrid(0.0, 2.0, 1e-3, 100)
		evolution = evolve_rk4(spec, np.diag([0.0, 1.0]), grid)
		for t, rho in zip(evolution.times, evolution.states):
			self.assertAlmostEqual(rho[1, 1].real, math.exp(-t), delta=1e-10)
			self.assertAlmostEqual(np.trace(rho).real, 1.0, delta=1e-12)

	def test_tlme_trace(self) -> None:
		# excited population e^{-t}, ground population e^{-s} (1 - e^{-t})
		spec = tilted_generator(LindbladSpec(np.zeros((2, 2)),
		                                     [sigma_minus()]), 0, 1.0)
		grid = TimeGrid(0.0, 1.0, 1e-3, 1000)
		final = evolve_rk4(spec, np.diag([0.0, 1.0]), grid).final
		self.assertAlmostEqual(final[1, 1].real, math.exp(-1), delta=1e-10)
		self.assertAlmostEqual(final[0, 0].real,
		                       math.exp(-1) * (1 - math.exp(-1)), delta=1e-10)

	def test_state_at(self) -> None:
		grid = TimeGrid(0.0, 1.0, 0.01, 10)
		evolution = evolve_rk4(driven_decay_qubit(), np.diag([1.0, 0.0]), grid)
		self.assertIsInstance(evolution, Evolution)
		assert_allclose(evolution.state_at(0.5), evolution.states[5])
		self.assertRaises(ValueError, evolution.state_at, 0.55)

	def test_step_matrix_is_rk4(self) -> None:
		rng = np.random.default_rng(17)
		spec = random_tlme(3, rng, False)
		rho = random_density_matrix(3, rng)
		dt = 0.05
		expected = _rk4_step(generator_function(spec), rho, dt)
		assert_allclose(rk4_step_matrix(spec, dt) @ vectorize(rho),
		                vectorize(expected), atol=1e-13)

	def test_liouvillian_matrix(self) -> None:
		rng = np.random.default_rng(18)
		for generator in (random_tlme(3, rng, False), driven_decay_qubit()):
			rho = random_density_matrix(generator.dim, rng)
			assert_allclose(liouvillian_matrix(generator) @ vectorize(rho),
			                vectorize(apply_generator(generator, rho)),
			                atol=1e-12)

	def test_fourth_order(self) -> None:
		spec = tilted_generator(driven_decay_qubit(), 0, 0.5)
		rho0 = np.diag([0.0, 1.0])
		exact = expm(liouvillian_matrix(spec)) @ vectorize(rho0)
		errors = []
		for dt in (0.04, 0.02):
			final = evolve_rk4(spec, rho0, TimeGrid(0.0, 1.0, dt)).final
			errors.append(np.max(np.abs(vectorize(final) - exact)))
		self.assertGreaterEqual(errors[0] / errors[1], 8)

	def test_schedule(self) -> None:
		base = driven_decay_qubit()
		first = tilted_generator(base, 0, 0.5)
		second = lindblad_as_tlme(base)
		rho0 = np.diag([0.0, 1.0])
		joined = evolve_rk4(Schedule([(0.5, first), (1.0, second)]), rho0,
		                    TimeGrid(0.0, 1.0, 1e-3, 500))
		middle = evolve_rk4(first, rho0, TimeGrid(0.0, 0.5, 1e-3, 500)).final
		end = evolve_rk4(second, middle, TimeGrid(0.5, 1.0, 1e-3, 500)).final
		assert_allclose(joined.final, end, atol=1e-12)

	def test_stiffness_warning(self) -> None:
		with self.assertLogs('tlmembed.dynamics', 'WARNING'):
			evolve_rk4(driven_decay_qubit(), np.eye(2) / 2,
			           TimeGrid(0.0, 1.0, 0.1))

	def test_dimension_check(self) -> None:
		self.assertRaises(DimensionMismatch, evolve_rk4, driven_decay_qubit(),
		                  np.eye(3) / 3, TimeGrid(0.0, 1.0, 0.1))


class ThetaTest(unittest.TestCase):
	"""Agreement of the theta estimators on the driven decay qubit."""

	def setUp(self) -> None:
		self.base = driven_decay_qubit()
		self.grid = TimeGrid(0.0, 100.0, 0.01, 100)

	def test_zero_field(self) -> None:
		self.assertAlmostEqual(theta_from_growth(self.base, self.grid), 0.0,
		                       delta=1e-8)
		self.assertAlmostEqual(theta_dense(self.base), 0.0, delta=1e-10)

	def test_growth_matches_dense(self) -> None:
		for s in (0.1, 0.2, 0.5, 1.0):
			tilted = tilted_generator(self.base, 0, s)
			theta = theta_from_growth(tilted, self.grid)
			self.assertAlmostEqual(theta, theta_dense(tilted), delta=1e-6)
			self.assertLess(theta, 0)

	def test_reference_value(self) -> None:
		tilted = tilted_generator(self.base, 0, 0.5)
		self.assertAlmostEqual(theta_dense(tilted), -0.18486277885,
		                       delta=1e-10)
		self.assertAlmostEqual(theta_from_growth(tilted, self.grid),
		                       -0.18486277885, delta=1e-8)

	def test_not_converged(self) -> None:
		tilted = tilted_generator(self.base, 0, 0.5)
		with self.assertRaises(NotConverged) as context:
			theta_from_growth(tilted, TimeGrid(0.0, 4.0, 0.01))
		self.assertEqual(len(context.exception.slopes), 2)

	def test_coherence_matches_growth(self) -> None:
		for s in (0.2, 0.5):
			ms = unitary_coupling(self.base, 0, s)
			self.assertEqual(ms.alpha, 0.0)
			run = evolve_rk4(ms.lindblad, initial_embedding(ms, np.eye(2) / 2),
			                 self.grid)
			theta = theta_from_coherence(ms, run)
			tilted = tilted_generator(self.base, 0, s)
			self.assertAlmostEqual(theta, theta_from_growth(tilted, self.grid),
			                       delta=1e-6)
			self.assertAlmostEqual(theta, theta_dense(tilted), delta=1e-6)

	def test_dominant_state(self) -> None:
		rho = dominant_state(self.base, TimeGrid(0.0, 50.0, 0.01))
		# resonance fluorescence at Rabi frequency W = 2: excited population
		# W^2/4 / (W^2/2 + g^2/4)
		self.assertAlmostEqual(rho[1, 1].real, 4 / 9, delta=1e-8)


class FitTest(unittest.TestCase):

	def test_exact_exponential(self) -> None:
		times = np.linspace(0, 10, 101)
		slope, stderr = fit_log_slope(times, 3 * np.exp(-0.7 * times))
		self.assertAlmostEqual(slope, -0.7, delta=1e-12)
		self.assertLess(stderr, 1e-10)

	def test_underflow(self) -> None:
		times = np.linspace(0, 10, 11)
		self.assertRaises(SignalUnderflow, fit_log_slope, times,
		                  np.exp(-5 * times))


class JumpMcTest(unittest.TestCase):
	"""Tests for the quantum jump engine."""

	def setUp(self) -> None:
		self.spec = driven_decay_qubit()
		self.grid = TimeGrid(0.0, 2.0, 1e-3, 500)

	def test_matches_master_equation(self) -> None:
		psi0 = ket(1, 2)
		exact = evolve_rk4(self.spec, np.outer(psi0, psi0.conj()), self.grid)
		errors = []
		for n in (1000, 4000):
			ensemble = jump_mc_ensemble(self.spec, psi0, self.grid, n, 5)
			errors.append(np.max(np.abs(ensemble.mean_state - exact.states)))
			self.assertLessEqual(errors[-1], 5 / math.sqrt(n))
		assert_allclose(np.einsum('tii->t', ensemble.mean_state).real, 1.0,
		                atol=1e-12)

	def test_error_scaling(self) -> None:
		# quadrupling the ensemble halves the error of the mean
		grid = TimeGrid(0.0, 2.0, 2e-3, 20)
		psi0 = ket(1, 2)
		exact = evolve_rk4(self.spec, np.outer(psi0, psi0.conj()),
		                   grid).states[:, 1, 1].real
		squared = {250: [], 1000: []}
		for repeat in range(24):
			start = repeat * 1250
			for n, seed in ((250, start), (1000, start + 250)):
				ensemble = jump_mc_ensemble(self.spec, psi0, grid, n, seed)
				deviation = ensemble.mean_state[:, 1, 1].real - exact
				squared[n].append(np.mean(deviation ** 2))
		ratio = math.sqrt(np.mean(squared[250]) / np.mean(squared[1000]))
		self.assertGreaterEqual(ratio, 1.4)
		self.assertLessEqual(ratio, 2.6)

	def test_single_decay(self) -> None:
		spec = LindbladSpec(np.zeros((2, 2)), [sigma_minus()])
		n = 10000
		ensemble = jump_mc_ensemble(spec, ket(1, 2),
		                            TimeGrid(0.0, 30.0, 0.01, 3000), n, 0,
		                            keep_records=True)
		np.testing.assert_array_equal(ensemble.jump_counts.sum(axis=1),
		                              np.ones(n))
		times = [record.jump_events[0][0] for record in ensemble.records]
		# exponential waiting time: mean 1, standard error 1 / sqrt(n)
		self.assertLessEqual(abs(np.mean(times) - 1.0), 3 / math.sqrt(n))

	def test_deterministic(self) -> None:
		first = jump_mc_ensemble(self.spec, ket(1, 2), self.grid, 1500, 3)
		second = jump_mc_ensemble(self.spec, ket(1, 2), self.grid, 1500, 3)
		assert_allclose(first.mean_state, second.mean_state, rtol=0, atol=0)
		np.testing.assert_array_equal(first.jump_counts, second.jump_counts)

	def test_workers(self) -> None:
		serial = jump_mc_ensemble(self.spec, ket(1, 2), self.grid, 1500, 9)
		parallel = jump_mc_ensemble(self.spec, ket(1, 2), self.grid, 1500, 9,
		                            workers=2)
		assert_allclose(serial.mean_state, parallel.mean_state, atol=1e-14)
		np.testing.assert_array_equal(serial.jump_counts,
		                              parallel.jump_counts)

	def test_single_trajectory(self) -> None:
		record = jump_mc(self.spec, ket(1, 2), self.grid, 42,
		                 observables=[identity(2)])
		self.assertEqual(record.seed, 42)
		self.assertEqual(len(record.samples), len(self.grid.sample_times()))
		self.assertEqual(record.jump_count(), len(record.jump_events))
		for _, values in record.samples:
			self.assertAlmostEqual(values[0].real, 1.0, delta=1e-12)
		times = [t for t, _ in record.jump_events]
		self.assertEqual(times, sorted(times))
		self.assertIsNone(record.final_weighted_trace)

	def test_trajectory_matches_ensemble(self) -> None:
		ensemble = jump_mc_ensemble(self.spec, ket(1, 2), self.grid, 10, 100,
		                            keep_records=True)
		record = jump_mc(self.spec, ket(1, 2), self.grid, 104)
		mine = ensemble.records[4]
		self.assertEqual(mine.seed, 104)
		self.assertEqual([c for _, c in mine.jump_events],
		                 [c for _, c in record.jump_events])
		assert_allclose([t for t, _ in mine.jump_events],
		                [t for t, _ in record.jump_events], atol=1e-9)

	def test_initial_state(self) -> None:
		self.assertRaises(NonUnitInitialState, jump_mc_ensemble, self.spec,
		                  np.array([1.0, 1.0]), self.grid, 10)
		self.assertRaises(DimensionMismatch, jump_mc_ensemble, self.spec,
		                  ket(0, 3), self.grid, 10)


class MappedMcTest(unittest.TestCase):
	"""Quantum jump sampling of mapped systems."""

	def test_weighted_trace(self) -> None:
		base = driven_decay_qubit()
		spec = tilted_generator(base, 0, 0.5)
		ms = build_offdiagonal(spec)
		grid = TimeGrid(0.0, 1.0, 1e-3, 250)
		psi0 = ket(1, 2)
		exact = evolve_rk4(spec, np.outer(psi0, psi0.conj()), grid)
		n = 4000
		ensemble = run_mapped_mc(ms, psi0, grid, n, 1, observables=[sigma_x()])
		for t, rho in zip(exact.times, exact.states):
			estimate = weighted_observable(ms, ensemble, identity(2), t)
			self.assertLessEqual(abs(estimate - np.trace(rho)),
			                     5 * ms.embedding_scale / math.sqrt(n))
		times, values = coherence_signal(ms, ensemble)
		assert_allclose(times, exact.times)
		self.assertAlmostEqual(values[0], 1.0, delta=1e-12)

	def test_variance_grows_with_alpha(self) -> None:
		spec = tilted_generator(LindbladSpec(np.zeros((2, 2)),
		                                     [sigma_minus()]), 0, -0.7)
		ms = build_diagonal(spec)
		self.assertGreater(ms.alpha, 1.0)
		grid = TimeGrid(0.0, 2.0, 1e-3, 500)
		ensemble = run_mapped_mc(ms, ket(1, 2), grid, 2000, 0,
		                         observables=[identity(2)], keep_records=True)
		early = weighted_samples(ms, ensemble, 0.5)
		late = weighted_samples(ms, ensemble, 2.0)
		self.assertGreater(np.var(late), 3 * np.var(early))
		self.assertEqual(len(late), 2000)


if __name__ == '__main__':
	unittest.main()
