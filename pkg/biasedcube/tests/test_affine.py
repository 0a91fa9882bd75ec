import inspect
import math
import os
import unittest

import numpy as np

import biasedcube
from biasedcube.affine import (AffineFunction, ConstantPair, RademacherSum, Theorem3Branch,
                               check_chebyshev_tail, check_hk_small_ball, check_hk_tail_norm,
                               check_small_ball_moment, check_truncation_bound, dist_to_affine,
                               dist_to_bounded_affine, excess_mass, jow_example, khinchine_ratio,
                               lift, lp_norm_rademacher, norm_t_bound, phi, project_l1, tau,
                               theorem3_bound, theorem3_witness, unlift)
from biasedcube.cube import (TableFunction, basis_function, coordinate, lp_norm, make_bias,
                             scalar_product)

SLOW = os.environ.get("BIASED_CUBE_SLOW") == "1"
SYMMETRIC = make_bias(0.5)


def _clamped_sum(n, scale):
    """ phi(scale * (x_1 + ... + x_n)) on the symmetric cube. """
    total = sum(coordinate(SYMMETRIC, n, i).values for i in range(n))
    return TableFunction(SYMMETRIC, n, phi(scale * total))


def _design(n):
    """ The (2^n, n + 1) matrix with columns 1, x_1, ..., x_n. """
    columns = [np.ones(1 << n)] + [coordinate(SYMMETRIC, n, i).values for i in range(n)]
    return np.stack(columns, axis=1)


def _grid_distance(v, radius=1.0, levels=4, points=201):
    """ min ||v - u|| over the planar l1 ball by repeatedly refined grid search. """
    center = np.zeros(2)
    half_width = radius
    best = math.inf
    for _ in range(levels):
        axis = np.linspace(-half_width, half_width, points)
        u0, u1 = np.meshgrid(center[0] + axis, center[1] + axis)
        feasible = np.abs(u0) + np.abs(u1) <= radius
        distances = np.where(feasible, np.hypot(v[0] - u0, v[1] - u1), np.inf)
        index = np.unravel_index(np.argmin(distances), distances.shape)
        best = min(best, float(distances[index]))
        center = np.array([u0[index], u1[index]])
        half_width = 4.0 * half_width / (points - 1)
    return best


class PhiTest(unittest.TestCase):
    def test_values(self):
        self.assertEqual(0.4, phi(0.4))
        self.assertEqual(-1.0, phi(-5))
        self.assertEqual(1.0, phi(1))
        np.testing.assert_array_equal([-1.0, 0.5, 1.0], phi(np.array([-3.0, 0.5, 2.0])))


class AffineFunctionTest(unittest.TestCase):
    def test_bounded_iff_l1_norm_at_most_one(self):
        self.assertTrue(AffineFunction(0.2, [0.3, -0.5]).is_bounded)
        self.assertFalse(AffineFunction(0.2, [0.3, -0.6]).is_bounded)

    def test_table_and_sup_norm(self):
        affine = AffineFunction(0.2, [0.3, -0.5])
        table = affine.to_table()
        self.assertAlmostEqual(affine.l1_norm(), float(np.max(np.abs(table.values))), delta=1e-14)
        np.testing.assert_allclose(table.values, [0.4, 1.0, -0.6, 0.0], atol=1e-14)

    def test_lift_round_trip(self):
        affine = AffineFunction(0.2, [0.3, -0.5])
        lifted = lift(affine)
        self.assertEqual(0.0, lifted.a0)
        np.testing.assert_array_equal([0.2, 0.3, -0.5], lifted.a)
        back = unlift(lifted)
        self.assertEqual(affine.a0, back.a0)
        np.testing.assert_array_equal(affine.a, back.a)


class DistToAffineTest(unittest.TestCase):
    def test_affine_function(self):
        f = AffineFunction(0.1, [0.2, -0.3, 0.1]).to_table()
        result = dist_to_affine(f)
        self.assertAlmostEqual(0.0, result.dist, delta=1e-14)
        np.testing.assert_allclose(result.minimizer.coefficients(), [0.1, 0.2, -0.3, 0.1],
                                   atol=1e-14)

    def test_pure_level_two(self):
        result = dist_to_affine(basis_function(SYMMETRIC, 2, 0b11))
        self.assertAlmostEqual(1.0, result.dist, delta=1e-14)
        np.testing.assert_allclose(result.minimizer.coefficients(), 0.0, atol=1e-14)

    def test_matches_least_squares(self):
        f = jow_example(12, 2.0)
        design = _design(12)
        solution = np.linalg.lstsq(design, f.values, rcond=None)[0]
        residual = f.values - design.dot(solution)
        result = dist_to_affine(f)
        self.assertAlmostEqual(math.sqrt(float(np.mean(residual ** 2))), result.dist, delta=1e-8)
        np.testing.assert_allclose(result.minimizer.coefficients(), solution, atol=1e-8)

    def test_needs_symmetric_cube(self):
        with self.assertRaises(biasedcube.NotSymmetricError):
            dist_to_affine(TableFunction(make_bias(0.25), 1, [1.0, -1.0]))


class ProjectL1Test(unittest.TestCase):
    def test_feasible_vector_is_unchanged(self):
        np.testing.assert_array_equal([0.5, 0.3], project_l1([0.5, 0.3], 1.0))

    def test_examples(self):
        np.testing.assert_allclose([1.0, 0.0], project_l1([2.0, 0.0], 1.0), atol=1e-15)
        np.testing.assert_allclose([0.5, 0.5], project_l1([1.0, 1.0], 1.0), atol=1e-15)
        np.testing.assert_allclose([-0.5, 0.5], project_l1([-1.0, 1.0], 1.0), atol=1e-15)

    def test_radius_must_be_positive(self):
        with self.assertRaises(biasedcube.NonPositiveRadiusError):
            project_l1([1.0], 0.0)

    def test_grid_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(100 if SLOW else 20):
            v = rng.uniform(-2.0, 2.0, 2)
            distance = float(np.linalg.norm(v - project_l1(v, 1.0)))
            self.assertAlmostEqual(_grid_distance(v), distance, delta=1e-6)

    def test_kkt_conditions(self):
        rng = np.random.default_rng(32)
        for n in (3, 7, 11):
            for _ in range(20):
                v = rng.normal(size=n)
                p = project_l1(v, 1.0)
                if np.sum(np.abs(v)) <= 1.0:
                    np.testing.assert_array_equal(v, p)
                    continue
                self.assertAlmostEqual(1.0, float(np.sum(np.abs(p))), delta=1e-12)
                support = p != 0
                theta = float(np.mean(np.abs(v[support] - p[support])))
                self.assertGreaterEqual(theta, 0.0)
                np.testing.assert_allclose(v[support] - p[support], theta * np.sign(p[support]),
                                           atol=1e-12)
                self.assertTrue(np.all(np.abs(v[~support]) <= theta + 1e-12))


class DistToBoundedAffineTest(unittest.TestCase):
    def test_bounded_affine_function(self):
        f = AffineFunction(0.1, [0.2, -0.3, 0.1]).to_table()
        result = dist_to_bounded_affine(f)
        self.assertAlmostEqual(0.0, result.dist, delta=1e-14)
        np.testing.assert_allclose(result.minimizer.coefficients(), [0.1, 0.2, -0.3, 0.1],
                                   atol=1e-14)

    def test_clamped_dictator(self):
        f = TableFunction(SYMMETRIC, 1, phi(np.array([-2.0, 2.0])))
        self.assertAlmostEqual(0.0, dist_to_bounded_affine(f).dist, delta=1e-15)

    def test_clamped_two_sum(self):
        f = _clamped_sum(2, 1.0)
        np.testing.assert_array_equal([-1.0, 0.0, 0.0, 1.0], f.values)
        self.assertAlmostEqual(0.0, dist_to_bounded_affine(f).dist, delta=1e-15)

    def test_minimizer_beats_random_bounded_affine_functions(self):
        rng = np.random.default_rng(33)
        for n in (1, 2, 3):
            for _ in range(100 if SLOW else 20):
                f = TableFunction(SYMMETRIC, n, rng.uniform(-1, 1, 1 << n))
                result = dist_to_bounded_affine(f)
                self.assertTrue(result.minimizer.is_bounded)
                self.assertAlmostEqual(lp_norm(f - result.minimizer.to_table(), 2), result.dist,
                                       delta=1e-12)
                for _ in range(50):
                    candidate = project_l1(rng.normal(size=n + 1), 1.0) * rng.uniform()
                    other = AffineFunction.from_coefficients(candidate).to_table()
                    self.assertGreaterEqual(lp_norm(f - other, 2), result.dist - 1e-12)

    def test_minimizer_satisfies_the_variational_inequality(self):
        # <f - g, h - g> <= 0 for every bounded affine h when g is the minimiser
        rng = np.random.default_rng(36)
        for n in (2, 5, 10):
            for _ in range(5):
                f = TableFunction(SYMMETRIC, n, rng.uniform(-1, 1, 1 << n))
                g = dist_to_bounded_affine(f).minimizer.to_table()
                candidates = [np.eye(n + 1)[i] * sign for i in range(n + 1) for sign in (-1.0, 1.0)]
                candidates += [project_l1(rng.normal(size=n + 1), 1.0) for _ in range(30)]
                for candidate in candidates:
                    h = AffineFunction.from_coefficients(candidate).to_table()
                    gap = lp_norm(h - g, 2)
                    self.assertLessEqual(scalar_product(f - g, h - g), 1e-8 * gap + 1e-14)

    def test_lifted_projection_gives_the_same_distance(self):
        rng = np.random.default_rng(34)
        for _ in range(20):
            affine = AffineFunction.from_coefficients(rng.normal(size=5))
            direct = np.linalg.norm(affine.coefficients() - project_l1(affine.coefficients()))
            lifted = lift(affine).coefficients()
            self.assertAlmostEqual(direct, np.linalg.norm(lifted - project_l1(lifted)), delta=1e-12)

    def test_never_below_distance_to_affine(self):
        rng = np.random.default_rng(35)
        for _ in range(20):
            f = TableFunction(SYMMETRIC, 5, rng.uniform(-1, 1, 32))
            self.assertGreaterEqual(dist_to_bounded_affine(f).dist, dist_to_affine(f).dist - 1e-14)


class TruncationBoundTest(unittest.TestCase):
    def test_bounded_affine_function(self):
        # 0.5 x_1 - 0.5 x_2
        check = check_truncation_bound(TableFunction(SYMMETRIC, 2, [0.0, 1.0, -1.0, 0.0]))
        self.assertEqual(0.0, check.lhs)
        self.assertAlmostEqual(0.0, check.rho, delta=1e-15)
        self.assertTrue(check.holds)

    def test_clamped_three_sum(self):
        check = check_truncation_bound(_clamped_sum(3, 0.7))
        self.assertTrue(check.holds)

    def test_random_tables(self):
        rng = np.random.default_rng(36)
        for _ in range(1000 if SLOW else 50):
            self.assertTrue(check_truncation_bound(TableFunction(SYMMETRIC, 8,
                                                                 rng.uniform(-1, 1, 256))).holds)

    def test_values_out_of_range(self):
        with self.assertRaises(biasedcube.ValuesOutOfRangeError):
            check_truncation_bound(TableFunction(SYMMETRIC, 1, [-1.5, 1.0]))


class RademacherSumTest(unittest.TestCase):
    def test_normalisation(self):
        S = RademacherSum([0.3, -0.5, 0.3, 0.0])
        np.testing.assert_array_equal([0.5, 0.3, 0.3, 0.0], S.a)
        np.testing.assert_array_equal([1, 0, 2, 3], S.order)
        np.testing.assert_array_equal([0.3, -0.5, 0.3, 0.0], S.unsort(S.a))

    def test_values(self):
        np.testing.assert_array_equal([-2.0, 0.0, 0.0, 2.0], RademacherSum([1.0, 1.0]).values())

    def test_lp_norms(self):
        self.assertAlmostEqual(1.0, lp_norm_rademacher(RademacherSum([1.0]), 3.7), delta=1e-15)
        self.assertAlmostEqual(math.sqrt(2.0), lp_norm_rademacher(RademacherSum([1.0, 1.0]), 2),
                               delta=1e-15)
        self.assertAlmostEqual(8.0 ** 0.25, lp_norm_rademacher(RademacherSum([1.0, 1.0]), 4),
                               delta=1e-14)
        with self.assertRaises(biasedcube.MomentOrderOutOfRangeError):
            lp_norm_rademacher(RademacherSum([1.0]), 0.5)

    def test_excess_mass(self):
        self.assertAlmostEqual(0.5, excess_mass(RademacherSum([1.0, 1.0])), delta=1e-15)
        self.assertEqual(0.0, excess_mass(RademacherSum([0.5, 0.5])))


class HitczenkoKwapienTest(unittest.TestCase):
    def test_small_ball_examples(self):
        self.assertEqual(1.0, check_hk_small_ball(RademacherSum([1.0])).prob)
        self.assertEqual(0.5, check_hk_small_ball(RademacherSum([1.0, 1.0])).prob)
        check = check_hk_small_ball(RademacherSum([1.0] * 10))
        self.assertEqual(352.0 / 1024.0, check.prob)
        self.assertTrue(check.holds)

    def test_small_ball_scale_invariance(self):
        rng = np.random.default_rng(37)
        sums = [[1.0] * 10, [3.0, 1.0, 1.0, 1.0], list(rng.uniform(0, 1, 12))]
        for a in sums:
            prob = check_hk_small_ball(RademacherSum(a)).prob
            for scale in (1e-3, 0.125, 3.0, 7.5e4):
                scaled = RademacherSum(np.multiply(scale, a))
                self.assertEqual(prob, check_hk_small_ball(scaled).prob)

    def test_small_ball_needs_nonzero_sum(self):
        with self.assertRaises(biasedcube.ZeroRademacherSumError):
            check_hk_small_ball(RademacherSum([0.0, 0.0]))

    def test_tail_norm_examples(self):
        empty_tail = check_hk_tail_norm(RademacherSum([0.6, 0.3]), 2)
        self.assertEqual(0.0, empty_tail.rhs)
        self.assertTrue(empty_tail.holds)
        check = check_hk_tail_norm(RademacherSum([0.5] * 4), 2)
        self.assertAlmostEqual(0.25, check.rhs, delta=1e-15)
        self.assertAlmostEqual(1.0, check.lhs, delta=1e-15)
        self.assertTrue(check.holds)

    def test_khinchine_examples(self):
        single = khinchine_ratio(RademacherSum([1.0]), 2)
        self.assertAlmostEqual(1.0, single.lhs, delta=1e-15)
        self.assertTrue(single.holds)
        pair = khinchine_ratio(RademacherSum([1.0, 1.0]), 2)
        self.assertAlmostEqual(8.0 ** 0.25, pair.lhs, delta=1e-14)
        self.assertAlmostEqual(math.sqrt(3.0) * math.sqrt(2.0), pair.rhs, delta=1e-14)
        self.assertTrue(pair.holds)
        with self.assertRaises(biasedcube.MomentOrderOutOfRangeError):
            khinchine_ratio(RademacherSum([1.0]), 1.0)

    def test_random_sums(self):
        rng = np.random.default_rng(37)
        for _ in range(1000 if SLOW else 50):
            n = int(rng.integers(1, 15 if SLOW else 11))
            S = RademacherSum(rng.uniform(0.0, 1.0, n))
            self.assertTrue(check_hk_small_ball(S).holds, S)
            for t in (1, 1.5, 2, 3, 5, max(1.0, n / 2.0)):
                self.assertTrue(check_hk_tail_norm(S, t).holds, (S, t))
                self.assertTrue(check_small_ball_moment(S, t).holds, (S, t))
                if t > 1:
                    self.assertTrue(khinchine_ratio(S, t).holds, (S, t))


class TauTest(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(2, tau(RademacherSum([0.5, 0.3, 0.3])))
        self.assertEqual(1, tau(RademacherSum([1.0, 1.0, 1.0])))
        self.assertEqual(3, tau(RademacherSum([0.2, 0.3, 0.1])))

    def test_leading_coefficient_too_large(self):
        with self.assertRaises(biasedcube.LeadingCoefficientTooLargeError):
            tau(RademacherSum([1.5, 0.1]))

    def test_empty_sum(self):
        with self.assertRaises(biasedcube.CoordinateCountOutOfRangeError):
            tau(RademacherSum([]))


class NormTBoundTest(unittest.TestCase):
    def test_bounded_sum(self):
        bound = norm_t_bound(RademacherSum([0.5, 0.3]), 0.0, 2)
        self.assertTrue(bound.applicable)
        self.assertEqual(2.0, bound.upper)
        self.assertTrue(bound.holds)

    def test_scaled_two_sum(self):
        S = RademacherSum([0.9, 0.9])
        rho = math.sqrt(excess_mass(S))
        bound = norm_t_bound(S, rho, 2)
        self.assertTrue(bound.applicable)
        self.assertAlmostEqual(0.9 * math.sqrt(2.0), bound.middle, delta=1e-14)
        self.assertTrue(bound.lower <= bound.middle <= bound.upper)
        self.assertTrue(bound.holds)

    def test_hypothesis_violated(self):
        bound = norm_t_bound(RademacherSum([3.0, 3.0]), 0.0, 2)
        self.assertFalse(bound.applicable)
        self.assertTrue(bound.holds)

    def test_proof_order_on_random_tables(self):
        rng = np.random.default_rng(38)
        for _ in range(20):
            f = TableFunction(SYMMETRIC, 6, rng.uniform(-1, 1, 64))
            minimizer = dist_to_affine(f).minimizer
            rho = dist_to_affine(f).dist
            t = max(2.0, 2.0 / math.log(3.0) * math.log(1.0 / rho))
            S = RademacherSum(minimizer.a, minimizer.a0)
            self.assertTrue(norm_t_bound(S, rho, t).holds)


class ChebyshevTailTest(unittest.TestCase):
    def test_two_sum(self):
        S = RademacherSum([1.0, 1.0])
        check = check_chebyshev_tail(S, math.sqrt(excess_mass(S)), 0.5)
        self.assertEqual(0.5, check.probability)
        self.assertAlmostEqual(2.0, check.excess_bound, delta=1e-14)
        self.assertTrue(check.holds)

    def test_projections_of_random_tables(self):
        rng = np.random.default_rng(39)
        for _ in range(20):
            f = TableFunction(SYMMETRIC, 6, rng.uniform(-1, 1, 64))
            result = dist_to_affine(f)
            S = RademacherSum(result.minimizer.a, result.minimizer.a0)
            for eps in (0.05, 0.2, 1.0):
                self.assertTrue(check_chebyshev_tail(S, result.dist, eps).holds)


class Theorem3WitnessTest(unittest.TestCase):
    def test_bounded_affine_function(self):
        witness = theorem3_witness(_clamped_sum(2, 1.0))
        self.assertEqual(Theorem3Branch.TRIVIAL, witness.branch)
        self.assertEqual(0.0, witness.dist)
        self.assertEqual(0.0, witness.bound)
        self.assertTrue(witness.holds)
        np.testing.assert_allclose(witness.construction.coefficients(), [0.0, 0.5, 0.5], atol=1e-15)

    def test_feasible_level_one_part(self):
        witness = theorem3_witness(basis_function(SYMMETRIC, 2, 0b11))
        self.assertEqual(Theorem3Branch.FEASIBLE, witness.branch)
        self.assertAlmostEqual(1.0, witness.dist, delta=1e-14)
        self.assertTrue(witness.holds)

    def test_majority_uses_zero(self):
        majority = TableFunction(SYMMETRIC, 3, [-1, -1, -1, 1, -1, 1, 1, 1])
        witness = theorem3_witness(majority)
        self.assertEqual(Theorem3Branch.ZERO, witness.branch)
        self.assertAlmostEqual(0.5, witness.rho, delta=1e-14)
        np.testing.assert_array_equal(np.zeros(4), witness.construction.coefficients())
        self.assertGreaterEqual(witness.construction_dist, witness.dist)
        self.assertTrue(witness.holds)

    def test_boundary_branch(self):
        witness = theorem3_witness(_clamped_sum(3, 0.7))
        self.assertEqual(Theorem3Branch.BOUNDARY, witness.branch)
        self.assertAlmostEqual(0.275, witness.rho, delta=1e-12)
        self.assertEqual(2, witness.tau)
        self.assertAlmostEqual(2.0 / math.log(3.0) * math.log(1.0 / 0.275), witness.threshold,
                               delta=1e-9)
        # one of the tied coordinates receives the leftover budget
        np.testing.assert_allclose(np.sort(np.abs(witness.construction.coefficients())),
                                   [0.0, 0.15, 0.425, 0.425], atol=1e-12)
        self.assertAlmostEqual(0.275, witness.branch_distance, delta=1e-12)
        self.assertTrue(witness.construction.is_bounded)
        self.assertTrue(witness.branch_holds)
        self.assertTrue(witness.holds)

    def test_jow_family(self):
        for s in (1.0, 2.0, 4.0):
            witness = theorem3_witness(jow_example(12, s))
            self.assertTrue(witness.holds, s)
            self.assertTrue(witness.construction.is_bounded)
        branch = theorem3_witness(jow_example(12, 2.0)).branch
        self.assertIn(branch, (Theorem3Branch.TRUNCATE, Theorem3Branch.BOUNDARY))

    def test_random_tables(self):
        rng = np.random.default_rng(40)
        for n in (6, 8, 10):
            for _ in range(1000 if SLOW else 20):
                f = TableFunction(SYMMETRIC, n, rng.uniform(-1, 1, 1 << n))
                for constants in ConstantPair:
                    witness = theorem3_witness(f, constants)
                    self.assertTrue(witness.holds, (n, constants))
                    self.assertTrue(witness.vacuous)

    def test_bound(self):
        self.assertEqual(0.0, theorem3_bound(0.0))
        self.assertEqual(math.inf, theorem3_bound(1.0))
        self.assertAlmostEqual(18.0, theorem3_bound(math.exp(-1.0)), delta=1e-12)
        self.assertAlmostEqual(14.5, theorem3_bound(math.exp(-1.0), ConstantPair.LN203),
                               delta=1e-12)

    def test_branch_docs_follow_their_members(self):
        source = inspect.getsource(Theorem3Branch).splitlines()
        expected = {"TRIVIAL": "rho = 0", "FEASIBLE": "already lies in", "ZERO": "zero function",
                    "TRUNCATE": "tau >= threshold", "BOUNDARY": "tau < threshold"}
        seen = set()
        for index, line in enumerate(source):
            name = line.strip().split(" = ")[0]
            if name in expected:
                self.assertIn(expected[name], source[index + 1], name)
                seen.add(name)
        self.assertEqual(set(expected), seen)

    def test_constant_pairs(self):
        self.assertEqual(ConstantPair.LN3, ConstantPair.from_base(3))
        self.assertEqual(14.5, ConstantPair.from_base(2.03).final_constant)
        with self.assertRaises(ValueError):
            ConstantPair.from_base(2.5)

    def test_needs_bounded_values(self):
        with self.assertRaises(biasedcube.ValuesOutOfRangeError):
            theorem3_witness(TableFunction(SYMMETRIC, 1, [2.0, 0.0]))


class JowExampleTest(unittest.TestCase):
    def test_one_coordinate_is_a_dictator(self):
        np.testing.assert_array_equal([-1.0, 1.0], jow_example(1, 1.0).values)

    def test_clamped_even_integers(self):
        self.assertEqual({-1.0, 0.0, 1.0}, set(jow_example(4, 0.5).values))

    def test_large_scale_is_affine(self):
        f = jow_example(12, 10.0)
        self.assertLess(float(np.max(np.abs(f.values))), 1.0)
        self.assertAlmostEqual(0.0, dist_to_affine(f).dist, delta=1e-12)

    def test_scale_must_be_positive(self):
        with self.assertRaises(biasedcube.NonPositiveScaleError):
            jow_example(3, 0.0)

    def test_distances_decrease_with_scale(self):
        distances = [(dist_to_affine(jow_example(12, s)).dist,
                      dist_to_bounded_affine(jow_example(12, s)).dist) for s in (1.0, 2.0, 4.0)]
        for (affine_before, bounded_before), (affine_after, bounded_after) in zip(distances,
                                                                                  distances[1:]):
            self.assertLess(affine_after, affine_before)
            self.assertLess(bounded_after, bounded_before)
        # at s = 2 some truncation is active and the bounded distance dominates
        self.assertLess(distances[1][0], distances[1][1])
        self.assertAlmostEqual(0.0, distances[2][0], delta=1e-12)
