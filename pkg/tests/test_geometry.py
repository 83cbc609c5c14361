"""Subspace angles and the PSD block-norm inequalities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specangles import (
    AngleReport,
    PortableRng,
    Projector,
    SymmetricMatrix,
    angle_report,
    block_split,
    compression_2x2,
    eigh,
    psd_block_bounds,
    reflection_defect,
    sin_two_theta_norm,
)
from conftest import random_psd, random_symmetric


def line_projector(phi: float) -> Projector:
    u = np.array([math.cos(phi), math.sin(phi)])
    return Projector(SymmetricMatrix(np.outer(u, u)), rank=1)


def haar_projector(n: int, rank: int, seed: int) -> Projector:
    q = PortableRng(seed).haar_orthogonal(n)
    cols = q[:, :rank]
    return Projector(SymmetricMatrix(cols @ cols.T), rank=rank)


class TestAngleReport:
    def test_rotated_line(self):
        phi = 0.3
        report = angle_report(line_projector(0.0), line_projector(phi))
        assert report.max_angle == pytest.approx(phi, abs=1e-12)
        assert report.sines[0] == pytest.approx(math.sin(phi), abs=1e-12)
        assert report.sin2_norm == pytest.approx(math.sin(2 * phi), abs=1e-12)

    def test_sines_sorted_descending_in_unit_interval(self):
        p = haar_projector(8, 3, 1)
        q = haar_projector(8, 3, 2)
        report = angle_report(p, q)
        assert np.all(np.diff(report.sines) <= 0.0)
        assert report.sines[0] <= 1.0
        assert report.sines[-1] >= 0.0

    def test_identical_projectors(self):
        p = haar_projector(6, 2, 3)
        report = angle_report(p, p)
        assert report.max_angle == 0.0
        assert report.sin2_norm == 0.0

    def test_orthogonal_ranges_hit_right_angle(self):
        p = Projector(SymmetricMatrix.diagonal([1.0, 0.0]), rank=1)
        q = Projector(SymmetricMatrix.diagonal([0.0, 1.0]), rank=1)
        report = angle_report(p, q)
        assert report.max_angle == pytest.approx(math.pi / 2, abs=1e-15)
        assert report.sin2_norm == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            angle_report(haar_projector(4, 2, 4), haar_projector(5, 2, 5))

    def test_json_round_trip(self):
        report = angle_report(haar_projector(6, 2, 6), haar_projector(6, 2, 7))
        again = AngleReport.from_json(report.to_json())
        assert np.array_equal(report.sines, again.sines)
        assert report.max_angle == again.max_angle

    def test_sin_two_theta_matches_report(self):
        p = haar_projector(7, 3, 8)
        q = haar_projector(7, 3, 9)
        assert sin_two_theta_norm(p, q) == angle_report(p, q).sin2_norm

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=25, deadline=None)
    def test_symmetry(self, seed):
        p = haar_projector(6, 2, seed)
        q = haar_projector(6, 4, seed + 1)
        a = angle_report(p, q)
        b = angle_report(q, p)
        assert np.abs(a.sines - b.sines).max() < 1e-12


class TestReflectionDefect:
    def test_block_diagonal_commutes(self):
        v = SymmetricMatrix.diagonal([2.0, 3.0, 5.0])
        q = Projector(SymmetricMatrix.diagonal([1.0, 1.0, 0.0]), rank=2)
        assert reflection_defect(v, q) == pytest.approx(0.0, abs=1e-12)

    def test_pure_off_diagonal_anticommutes(self):
        v = SymmetricMatrix(np.array([[0.0, 1.5], [1.5, 0.0]]))
        q = Projector(SymmetricMatrix.diagonal([1.0, 0.0]), rank=1)
        # K V K = -V, so the defect is ||2V||
        assert reflection_defect(v, q) == pytest.approx(3.0, abs=1e-12)


class TestBlockSplit:
    def test_coordinate_projector_reads_off_blocks(self):
        v = random_psd(5, 31)
        q = Projector(SymmetricMatrix.diagonal([1.0, 1.0, 0.0, 0.0, 0.0]), rank=2)
        split = block_split(v, q)
        assert np.abs(split.v0.entries - v.entries[:2, :2]).max() < 1e-12
        assert np.abs(split.v1.entries - v.entries[2:, 2:]).max() < 1e-12
        assert np.abs(np.abs(split.w) - np.abs(v.entries[:2, 2:])).max() < 1e-12

    def test_reassemble_round_trip(self):
        v = random_psd(7, 32)
        q = haar_projector(7, 3, 33)
        split = block_split(v, q)
        scale = 1.0 + np.abs(v.entries).max()
        assert np.abs(split.reassemble().entries - v.entries).max() < 1e-10 * scale

    def test_rank_extremes_rejected(self):
        v = random_psd(4, 34)
        with pytest.raises(ValueError):
            block_split(v, Projector(SymmetricMatrix.zero(4), rank=0))
        with pytest.raises(ValueError):
            block_split(v, Projector(SymmetricMatrix.identity(4), rank=4))


class TestPsdBlockBounds:
    def test_ordering_on_random_psd(self):
        for seed in range(40, 60):
            n = 3 + seed % 6
            v = random_psd(n, seed)
            q = haar_projector(n, 1 + seed % (n - 1), seed + 1000)
            lower, middle, upper = psd_block_bounds(v, q)
            assert lower <= middle + 1e-10
            assert middle <= upper + 1e-10

    def test_rejects_indefinite(self):
        v = SymmetricMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        q = Projector(SymmetricMatrix.diagonal([1.0, 0.0]), rank=1)
        with pytest.raises(ValueError):
            psd_block_bounds(v, q)

    def test_indefinite_breaks_lower_inequality(self):
        # the same matrix split by hand: 2||W|| = 2 exceeds ||V|| = 1, so the
        # lower inequality genuinely needs positive semidefiniteness
        v = SymmetricMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        q = Projector(SymmetricMatrix.diagonal([1.0, 0.0]), rank=1)
        split = block_split(v, q)
        w_norm = float(np.abs(split.w).max())
        assert 2.0 * w_norm == pytest.approx(2.0, abs=1e-12)
        assert operator_norm_of(v) == pytest.approx(1.0, abs=1e-12)


def operator_norm_of(m: SymmetricMatrix) -> float:
    w = eigh(m).eigenvalues
    return max(abs(float(w[0])), abs(float(w[-1])))


class TestCompression:
    def test_matches_quadratic_forms(self):
        v = random_symmetric(5, 70)
        q = PortableRng(71).haar_orthogonal(5)
        f, g = q[:, 0], q[:, 1]
        comp = compression_2x2(v, f, g)
        assert comp.entries[0, 0] == pytest.approx(f @ v.entries @ f, abs=1e-12)
        assert comp.entries[1, 1] == pytest.approx(g @ v.entries @ g, abs=1e-12)
        assert comp.entries[0, 1] == pytest.approx(f @ v.entries @ g, abs=1e-12)

    def test_rejects_non_unit(self):
        v = random_symmetric(3, 72)
        with pytest.raises(ValueError):
            compression_2x2(v, np.array([1.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]))

    def test_rejects_non_orthogonal(self):
        v = random_symmetric(3, 73)
        f = np.array([1.0, 0.0, 0.0])
        g = np.array([math.sqrt(0.5), math.sqrt(0.5), 0.0])
        with pytest.raises(ValueError):
            compression_2x2(v, f, g)

    def test_eigenvalue_interlacing(self):
        # compression eigenvalues sit inside the full spectrum's hull
        v = random_symmetric(6, 74)
        q = PortableRng(75).haar_orthogonal(6)
        comp = compression_2x2(v, q[:, 0], q[:, 1])
        full = eigh(v).eigenvalues
        small = eigh(comp).eigenvalues
        assert small[0] >= full[0] - 1e-12
        assert small[-1] <= full[-1] + 1e-12
