"""Instance construction: plans, exact families, and seeded ensembles."""

import math

import numpy as np
import pytest

from specangles import (
    IntervalSet,
    PerturbationInstance,
    SymmetricMatrix,
    angle_report,
    block_example,
    convex_plan,
    eigh,
    interleaved_plan,
    omega_component,
    psd_block_bounds,
    random_instance,
    rank_one_instance,
    sharpness_pair,
)
from specangles.instances import DOUBLY_INTERLEAVED, SpecPlan


class TestSpecPlan:
    def test_convex_plan_shape(self):
        plan = convex_plan(8)
        assert plan.n == 8
        assert plan.counts == (4, 4)
        assert plan.d_target == 1.0
        assert plan.expected_geometry == "convex-separated"

    def test_convex_plan_scales_with_gap(self):
        plan = convex_plan(5, d_target=2.0)
        assert plan.sigma_locs.intervals == ((-2.0, -0.5),)
        assert plan.big_sigma_locs.intervals == ((1.5, 3.0),)
        assert plan.counts == (2, 3)

    def test_interleaved_plan_shape(self):
        plan = interleaved_plan(9)
        assert plan.counts == (4, 5)
        assert plan.d_target == 2.0
        assert plan.geometry == DOUBLY_INTERLEAVED
        assert plan.expected_geometry == "interleaved"

    def test_size_floors(self):
        with pytest.raises(ValueError):
            convex_plan(1)
        with pytest.raises(ValueError):
            interleaved_plan(3)
        with pytest.raises(ValueError):
            convex_plan(4, d_target=0.0)

    def test_gap_must_match_declared_target(self):
        with pytest.raises(ValueError):
            SpecPlan(
                geometry="convex-separated",
                sigma_locs=IntervalSet(((0.0, 1.0),)),
                big_sigma_locs=IntervalSet(((2.0, 3.0),)),
                counts=(1, 1),
                d_target=0.5,
            )

    def test_geometry_label_must_match_sets(self):
        with pytest.raises(ValueError):
            SpecPlan(
                geometry=DOUBLY_INTERLEAVED,
                sigma_locs=IntervalSet(((0.0, 1.0),)),
                big_sigma_locs=IntervalSet(((2.0, 3.0),)),
                counts=(1, 1),
                d_target=1.0,
            )

    def test_unknown_geometry_rejected(self):
        with pytest.raises(ValueError):
            SpecPlan(
                geometry="diagonal",
                sigma_locs=IntervalSet(((0.0, 1.0),)),
                big_sigma_locs=IntervalSet(((2.0, 3.0),)),
                counts=(1, 1),
                d_target=1.0,
            )


class TestSharpnessPair:
    def test_exact_spectra(self):
        v = 0.6
        inst = sharpness_pair(v)
        assert inst.d == 1.0
        assert inst.geometry == "convex-separated"
        assert inst.v_norm == pytest.approx(v, abs=1e-14)
        spec_v = eigh(inst.v).eigenvalues
        assert spec_v[0] == pytest.approx(0.0, abs=1e-15)
        assert spec_v[1] == pytest.approx(v, abs=1e-15)
        root = math.sqrt(1.0 - v * v)
        spec_avm = eigh(inst.perturbed(1.0)).eigenvalues
        assert spec_avm[0] == pytest.approx((v - root) / 2.0, abs=1e-15)
        assert spec_avm[1] == pytest.approx((v + root) / 2.0, abs=1e-15)

    def test_rotation_angle_attains_bound(self):
        for v in (0.05, 0.45, 0.85):
            inst = sharpness_pair(v)
            p0 = omega_component(inst, 0.0).projector
            p1 = omega_component(inst, 1.0).projector
            theta = angle_report(p0, p1).max_angle
            assert theta == pytest.approx(0.5 * math.asin(v), abs=1e-12)

    def test_label_and_domain(self):
        assert sharpness_pair(0.25).label == "sharpness-v0.25"
        with pytest.raises(ValueError):
            sharpness_pair(1.0)
        with pytest.raises(ValueError):
            sharpness_pair(-0.1)

    def test_zero_perturbation_degenerates_cleanly(self):
        inst = sharpness_pair(0.0)
        assert inst.v_norm == 0.0
        assert not np.any(inst.v.entries)


class TestBlockExample:
    def test_dyadic_norm_triple_is_exact(self):
        v, q = block_example(1.0, 0.75)
        lower, middle, upper = psd_block_bounds(v, q)
        assert (lower, middle, upper) == (1.0, 1.0, 1.5)

    def test_degenerate_corner(self):
        v, q = block_example(1.0, 0.5)
        assert psd_block_bounds(v, q) == (1.0, 1.0, 1.0)

    def test_spectrum(self):
        v, _ = block_example(0.5, 0.5)
        w = eigh(v).eigenvalues
        assert w == pytest.approx([0.0, 0.5, 0.5, 0.5], abs=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            block_example(0.0, 0.0)
        with pytest.raises(ValueError):
            block_example(1.0, 0.4)
        with pytest.raises(ValueError):
            block_example(1.0, 1.1)


class TestRandomInstance:
    def test_convex_instance_realizes_plan(self):
        plan = convex_plan(8)
        inst = random_instance(8, plan, 0.3, seed=7)
        assert inst.d == pytest.approx(1.0, abs=1e-10)
        assert inst.v_norm == pytest.approx(0.3, abs=1e-10)
        assert inst.geometry == plan.expected_geometry
        assert len(inst.sigma_indices) == plan.counts[0]
        assert inst.label == "convex-separated-n8-v0.3-s7"

    def test_sampled_spectrum_stays_in_clusters(self):
        plan = convex_plan(10)
        inst = random_instance(10, plan, 0.1, seed=3)
        w = inst.dec_a.eigenvalues
        for k in range(10):
            locs = plan.sigma_locs if k in inst.sigma_indices else plan.big_sigma_locs
            assert locs.distance_to_point(float(w[k])) < 1e-10

    def test_interleaved_instance(self):
        plan = interleaved_plan(9)
        inst = random_instance(9, plan, 0.4, seed=11)
        assert inst.d == pytest.approx(2.0, abs=1e-10)
        assert inst.geometry == "interleaved"
        assert inst.v_norm == pytest.approx(0.8, abs=1e-10)

    def test_zero_ratio_gives_zero_perturbation(self):
        inst = random_instance(6, convex_plan(6), 0.0, seed=1)
        assert inst.v_norm == 0.0
        assert not np.any(inst.v.entries)

    def test_seed_determinism(self):
        a = random_instance(6, convex_plan(6), 0.5, seed=9)
        b = random_instance(6, convex_plan(6), 0.5, seed=9)
        c = random_instance(6, convex_plan(6), 0.5, seed=10)
        assert np.array_equal(a.a.entries, b.a.entries)
        assert np.array_equal(a.v.entries, b.v.entries)
        assert not np.array_equal(a.a.entries, c.a.entries)

    def test_validation(self):
        plan = convex_plan(6)
        with pytest.raises(ValueError):
            random_instance(5, plan, 0.5, seed=0)
        with pytest.raises(ValueError):
            random_instance(6, plan, 1.0, seed=0)
        with pytest.raises(ValueError):
            random_instance(6, plan, -0.2, seed=0)

    def test_component_tracking_end_to_end(self):
        inst = random_instance(8, interleaved_plan(8), 0.6, seed=21)
        comp = omega_component(inst, 1.0)
        assert len(comp.omega_indices) == len(inst.sigma_indices)


class TestRankOneInstance:
    def test_perturbation_is_a_spike(self):
        plan = convex_plan(7)
        inst = rank_one_instance(7, plan, 0.35, seed=5)
        w = eigh(inst.v).eigenvalues
        assert w[-1] == pytest.approx(0.35, abs=1e-12)
        assert np.abs(w[:-1]).max() < 1e-12
        assert inst.v_norm == pytest.approx(0.35, abs=1e-12)
        assert inst.label == "rank-one-convex-separated-n7-v0.35-s5"

    def test_projector_motion_bounded_by_ratio(self):
        inst = rank_one_instance(8, convex_plan(8), 0.55, seed=14)
        p0 = omega_component(inst, 0.0).projector
        p1 = omega_component(inst, 1.0).projector
        assert angle_report(p0, p1).sines[0] <= inst.v_norm / inst.d + 1e-8

    def test_axis_aligned_spike_matches_plane_trigonometry(self):
        # A diagonal and u mixing exactly one tracked with one untracked
        # coordinate: the problem decouples into a 2x2 block where the
        # projector rotation angle is (1/2)*atan(v/(c-a)) by hand.
        a = SymmetricMatrix.diagonal([0.0, 3.0, 10.0, 13.0])
        v_norm = 0.8
        u = np.array([1.0, 0.0, 1.0, 0.0]) / math.sqrt(2.0)
        v = SymmetricMatrix(v_norm * np.outer(u, u))
        inst = PerturbationInstance.build(a, v, (0, 1))
        p0 = omega_component(inst, 0.0).projector
        p1 = omega_component(inst, 1.0).projector
        phi = 0.5 * math.atan2(v_norm, 10.0)
        assert angle_report(p0, p1).sines[0] == pytest.approx(
            math.sin(phi), abs=1e-12
        )
