from arcflex.cusp import (
    FLEX_ORDER,
    MIRROR,
    circle_flex_components,
    connecting_bar_length,
    horizontal_bar_motion,
    make_double_watt,
    solve_cusp_flexes,
    trace_cusp_branches,
    verify_watt_relations)
from arcflex.errors import InfeasibleCuspError, PreconditionError
from arcflex.flex import first_order_flex_basis, stress_basis, verify_flex
from arcflex.order_test import classic_order_test
from arcflex.parameters import TraceParameters
import math
import numpy as np
import unittest


def coords(framework, vertex_id):
    return framework.rest_coords[framework.vertex_index(vertex_id)]


class TestDoubleWatt(unittest.TestCase):

    def test_geometry(self):

        watt = make_double_watt()

        assert watt.num_vertices == 12
        assert watt.num_edges == 17
        assert watt.num_coordinates == 16

        for suffix in ("", MIRROR):
            p1 = coords(watt, "p1" + suffix)
            p2 = coords(watt, "p2" + suffix)
            q = coords(watt, "q" + suffix)
            assert np.allclose(np.abs(p1 - coords(watt, "o1" + suffix)),
                               [1.0, 0.0])
            assert np.allclose(q, 0.5 * (p1 + p2))

        assert np.allclose(
            coords(watt, "p2") - coords(watt, "p1"), [1.0, 1.0])
        assert connecting_bar_length(watt) == 4.0
        assert connecting_bar_length(make_double_watt(unit_bar=True)) == 1.0

    def test_first_order(self):

        watt = make_double_watt()
        X0 = watt.rest_configuration()

        flexes = first_order_flex_basis(watt, X0)
        assert len(flexes) == 2, "Both mechanisms move independently"
        assert len(stress_basis(watt, X0)) == 3

        for flex in flexes:
            # every free vertex starts moving vertically
            assert np.allclose(flex.reshape(-1, 2)[:, 0], 0.0, atol=1e-10)

    def test_classic_verdicts(self):

        watt = make_double_watt()
        X0 = watt.rest_configuration()

        assert classic_order_test(watt, X0, 1).is_flexible
        assert classic_order_test(watt, X0, 2).is_flexible
        assert classic_order_test(watt, X0, 3).is_rigid


class TestCircleFlex(unittest.TestCase):

    def test_components(self):

        a, b, c, d, e = -0.5, 0.3, 0.75, -0.2, 0.1

        for orientation in (1, -1):
            X = circle_flex_components(1.0, (a, b, c, d, e), orientation)

            assert len(X) == 6
            assert np.array_equal(X[0], [0.0, 0.0])
            assert np.allclose(X[3], [-orientation * 3 * a**2, c])
            assert np.allclose(X[4], [-orientation * 10 * a * b, d])
            assert np.allclose(
                X[5], [-orientation * (15 * a * c + 10 * b**2), e])

    def test_stays_on_circle(self):

        radius = 2.0
        X = circle_flex_components(radius, (0.4, -1.1, 0.2, 0.3, -0.7), -1)
        deltas = [np.array([-radius, 0.0])] + X

        for k in range(1, 7):
            coefficient = sum(
                math.comb(k, a) * deltas[a] @ deltas[k - a]
                for a in range(k + 1))
            assert abs(coefficient) < 1e-12, f"Level {k} violated"

    def test_radius(self):

        with self.assertRaises(PreconditionError):
            circle_flex_components(0.0, (1, 1, 1, 1, 1), 1)


class TestSolveCuspFlexes(unittest.TestCase):

    def test_relations(self):

        watt = make_double_watt()

        for a in (-0.5, -1.0):
            for branch in (1, -1):
                solution = solve_cusp_flexes(watt, a, branch)
                report = verify_watt_relations(solution)

                assert report.holds(), report.describe()
                assert len(report.relations) == 14
                assert report.autodiff_mismatch <= 1e-8

    def test_is_a_degenerate_flex(self):

        watt = make_double_watt()
        X0 = watt.rest_configuration()
        solution = solve_cusp_flexes(watt, -0.5, 1)

        assert solution.flex.degeneracy == 1
        assert solution.flex.order == FLEX_ORDER
        ok, _ = verify_flex(watt, X0, solution.flex, FLEX_ORDER)
        assert ok

    def test_midpoint(self):

        watt = make_double_watt()
        a = -0.5
        flex = solve_cusp_flexes(watt, a, 1).flex

        q6 = flex.derivative(6)[watt.coordinate_slice("q")]
        assert abs(q6[0] + 45 * a**3) < 1e-12

    def test_unit_bar(self):

        watt = make_double_watt(unit_bar=True)
        solution = solve_cusp_flexes(watt, -1.0, 1)

        assert abs(abs(solution.b_bar - solution.b) - 3.0) < 1e-12
        assert abs(9 * solution.a**3 + (solution.b_bar - solution.b)**2) \
            < 1e-12
        assert verify_watt_relations(solution).holds()

    def test_positive_a(self):

        watt = make_double_watt()

        with self.assertRaises(InfeasibleCuspError) as context:
            solve_cusp_flexes(watt, 0.5, 1)
        assert "a < 0" in context.exception.message

    def test_branches(self):

        watt = make_double_watt()
        plus = solve_cusp_flexes(watt, -0.5, 1, b=0.2)
        minus = solve_cusp_flexes(watt, -0.5, -1, b=0.2)

        assert plus.left == minus.left
        assert plus.a_bar == minus.a_bar
        assert abs((plus.b_bar - plus.b) + (minus.b_bar - minus.b)) < 1e-12
        assert plus.b_bar - plus.b > 0

    def test_perturbed_connecting_bar(self):

        watt = make_double_watt()
        solution = solve_cusp_flexes(watt, -0.5, 1)
        epsilon = 1e-3
        gap = solution.b_bar - solution.b

        perturbed = solution.replaced(right={
            "b1": solution.b_bar + epsilon,
            "b2": solution.b_bar + epsilon
        })
        report = verify_watt_relations(perturbed)

        # only the C(6,3) |delta_3|^2 term of the connecting bar changes
        expected = 10 * ((gap + epsilon)**2 - gap**2)
        assert abs(report.connecting_bar[5] / 2 - expected) < 1e-8
        assert abs(expected - 20 * gap * epsilon) < 1e-4
        assert not report.holds()

    def test_unequal_coupler_components(self):

        watt = make_double_watt()
        solution = solve_cusp_flexes(watt, -0.5, 1)

        report = verify_watt_relations(
            solution.replaced(left={"a2": solution.a + 0.1}))

        assert abs(report.relations["a1 = a2"] - 0.1) < 1e-12
        assert max(report.levels) > 1e-3


class TestCuspBranches(unittest.TestCase):

    def test_both_branches_drop(self):

        watt = make_double_watt()
        branches = trace_cusp_branches(
            watt, a=-1.0, parameters=TraceParameters(num_steps=30))

        assert set(branches) == {1, -1}

        first_tilts = {}
        for branch, samples in branches.items():
            assert len(samples) > 1, f"Branch {branch} did not move"
            assert np.max(samples.max_abs_elongation()) <= 1e-10

            heights, tilts = horizontal_bar_motion(watt, samples)
            assert heights[1] < heights[0], "The connecting bar drops"
            first_tilts[branch] = tilts[1]

        assert first_tilts[1] * first_tilts[-1] < 0, \
            "Branches tilt in opposite directions"

    def test_branches_are_distinct(self):

        watt = make_double_watt()
        branches = trace_cusp_branches(
            watt, parameters=TraceParameters(num_steps=10))

        assert not np.allclose(
            branches[1].configurations[-1], branches[-1].configurations[-1])
