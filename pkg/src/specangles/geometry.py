"""Angles between spectral subspaces and the PSD block-matrix inequalities."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import Projector, SymmetricMatrix, eigh, is_psd, operator_norm

PSD_TOL = 1e-10
BASIS_THRESHOLD = 1e-12
ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AngleReport:
    """Sine spectrum of a projector pair, descending, with the two derived
    scalars used by every bound: max_angle = arcsin(sines[0]) and
    sin2_norm = max over k of 2*s_k*sqrt(1 - s_k^2)."""

    sines: np.ndarray
    max_angle: float
    sin2_norm: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "sines": self.sines.tolist(),
                "max_angle": self.max_angle,
                "sin2_norm": self.sin2_norm,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "AngleReport":
        obj = json.loads(text)
        return cls(
            sines=np.asarray(obj["sines"], dtype=float),
            max_angle=float(obj["max_angle"]),
            sin2_norm=float(obj["sin2_norm"]),
        )


@dataclass(frozen=True, eq=False)
class BlockSplit:
    """V conjugated into the 2x2 block form [[V0, W], [W^T, V1]] with respect
    to an orthonormal basis adapted to Ran Q then Ran Q-perp."""

    v0: SymmetricMatrix
    w: np.ndarray
    v1: SymmetricMatrix
    basis: np.ndarray

    def reassemble(self) -> SymmetricMatrix:
        r = self.v0.dim
        n = r + self.v1.dim
        block = np.zeros((n, n))
        block[:r, :r] = self.v0.entries
        block[:r, r:] = self.w
        block[r:, :r] = self.w.T
        block[r:, r:] = self.v1.entries
        return SymmetricMatrix(self.basis @ block @ self.basis.T)


def angle_report(p: Projector, q: Projector) -> AngleReport:
    """Sine spectrum from eigenvalues of P - Q (no SVD: the spectrum of the
    symmetric difference is already symmetric around 0 up to kernel)."""
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    w = eigh(p.matrix - q.matrix).eigenvalues
    sines = np.sort(np.abs(w))[::-1]
    sines = np.clip(sines, 0.0, 1.0)
    max_angle = math.asin(float(sines[0]))
    doubled = 2.0 * sines * np.sqrt(1.0 - sines * sines)
    return AngleReport(
        sines=sines, max_angle=max_angle, sin2_norm=float(np.max(doubled))
    )


def sin_two_theta_norm(p: Projector, q: Projector) -> float:
    return angle_report(p, q).sin2_norm


def reflection_defect(v: SymmetricMatrix, q: Projector) -> float:
    """||V - KVK|| for the reflection K = 2Q - I; at most ||V|| when V >= 0."""
    if v.dim != q.dim:
        raise ValueError("dimension mismatch")
    k = 2.0 * q.matrix.entries - np.eye(v.dim)
    return operator_norm(SymmetricMatrix(v.entries - k @ v.entries @ k))


def _pivoted_basis(columns: np.ndarray, rank: int) -> np.ndarray:
    # Pivoted Gram-Schmidt with one re-orthogonalization pass per vector.
    work = np.array(columns, dtype=float)
    n = work.shape[0]
    basis = np.zeros((n, rank))
    for k in range(rank):
        norms = np.linalg.norm(work, axis=0)
        pivot = int(np.argmax(norms))
        if norms[pivot] < BASIS_THRESHOLD:
            raise ValueError("matrix rank below requested basis size")
        vec = work[:, pivot].copy()
        for _ in range(2):
            vec -= basis[:, :k] @ (basis[:, :k].T @ vec)
        vec /= np.linalg.norm(vec)
        basis[:, k] = vec
        work -= np.outer(vec, vec @ work)
    return basis


def block_split(v: SymmetricMatrix, q: Projector) -> BlockSplit:
    """Split V into blocks along Ran Q and its complement.

    The basis comes from pivoted Gram-Schmidt on the columns of the projector
    (threshold 1e-12), so it is deterministic for identical input.
    """
    if v.dim != q.dim:
        raise ValueError("dimension mismatch")
    if q.rank == 0 or q.rank == q.dim:
        raise ValueError("projector must have nontrivial rank for a block split")
    b0 = _pivoted_basis(q.matrix.entries, q.rank)
    b1 = _pivoted_basis(q.complement().matrix.entries, q.dim - q.rank)
    basis = np.hstack([b0, b1])
    gram_residual = float(np.max(np.abs(basis.T @ basis - np.eye(q.dim))))
    if gram_residual > 1e-8:
        raise ValueError(f"basis lost orthonormality: residual {gram_residual:.3e}")
    mat = v.entries
    return BlockSplit(
        v0=SymmetricMatrix(b0.T @ mat @ b0),
        w=b0.T @ mat @ b1,
        v1=SymmetricMatrix(b1.T @ mat @ b1),
        basis=basis,
    )


def _rect_norm(w: np.ndarray) -> float:
    # Largest singular value via the Gram matrix of the thinner side.
    gram = w @ w.T if w.shape[0] <= w.shape[1] else w.T @ w
    top = float(eigh(SymmetricMatrix(gram)).eigenvalues[-1])
    return math.sqrt(max(top, 0.0))


def psd_block_bounds(v: SymmetricMatrix, q: Projector) -> tuple[float, float, float]:
    """The chain 2||W|| <= ||V|| <= 2*max(||V0||, ||V1||), valid for PSD V.

    Returns the triple (2||W||, ||V||, 2*max(||V0||, ||V1||)); V failing the
    PSD test (tol 1e-10) raises, since indefinite V can break the left
    inequality.
    """
    if not is_psd(v, PSD_TOL):
        raise ValueError("V must be positive semidefinite")
    split = block_split(v, q)
    return (
        2.0 * _rect_norm(split.w),
        operator_norm(v),
        2.0 * max(operator_norm(split.v0), operator_norm(split.v1)),
    )


def compression_2x2(v: SymmetricMatrix, f: np.ndarray, g: np.ndarray) -> SymmetricMatrix:
    """Compression of V onto span{f, g} for an orthonormal pair (f, g):
    [[<f,Vf>, <f,Vg>], [<g,Vf>, <g,Vg>]].

    Inputs are validated, not silently projected: non-unit or non-orthogonal
    vectors raise. Over all pairs with f in Ran Q and g in its complement, the
    norms of these 2x2 compressions exhaust ||V|| from below.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != (v.dim,) or g.shape != (v.dim,):
        raise ValueError("dimension mismatch")
    if abs(np.linalg.norm(f) - 1.0) > ORTHO_TOL or abs(np.linalg.norm(g) - 1.0) > ORTHO_TOL:
        raise ValueError("f and g must be unit vectors")
    if abs(float(f @ g)) > ORTHO_TOL:
        raise ValueError("f and g must be orthogonal")
    vf = v.entries @ f
    vg = v.entries @ g
    return SymmetricMatrix([[f @ vf, f @ vg], [g @ vf, g @ vg]])
