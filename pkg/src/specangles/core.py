"""Dense real-symmetric substrate: matrices, spectra, projectors, interval sets.

Everything downstream (angles, bounds, campaigns) is built on the four value
types here. All of them are immutable and safe to share; every operation is a
pure function of its inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from ._jacobi import jacobi_sweeps

MAX_SWEEPS = 100
EIGH_TOL_FACTOR = 1e-13
MEMBERSHIP_TOL_FACTOR = 1e-8

Selection = Union["IntervalSet", Sequence[int]]


class ConvergenceError(RuntimeError):
    """Iteration cap reached before the convergence criterion."""


class AmbiguousBoundaryError(ValueError):
    """A point sits within tolerance of a set boundary it does not belong to."""


def membership_tol(scale: float) -> float:
    """Default scale-aware membership tolerance, 1e-8 * (1 + scale)."""
    return MEMBERSHIP_TOL_FACTOR * (1.0 + abs(scale))


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    """Real symmetric matrix; symmetrized as (M + M^T)/2 at construction, so
    entries[i, j] == entries[j, i] holds exactly."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError("entries must form a nonempty square matrix")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        arr = (arr + arr.T) / 2.0
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int) -> "SymmetricMatrix":
        return cls(np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "SymmetricMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def diagonal(cls, values: Iterable[float]) -> "SymmetricMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=float)))

    def scaled(self, factor: float) -> "SymmetricMatrix":
        return SymmetricMatrix(self.entries * float(factor))

    def __add__(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return SymmetricMatrix(self.entries + other.entries)

    def __sub__(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return SymmetricMatrix(self.entries - other.entries)

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "rows": self.entries.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "SymmetricMatrix":
        obj = json.loads(text)
        rows = np.asarray(obj["rows"], dtype=float)
        if rows.shape != (obj["dim"], obj["dim"]):
            raise ValueError("rows do not match declared dim")
        return cls(rows)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues ascending; eigenvector column k pairs with eigenvalue k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> SymmetricMatrix:
        q = self.eigenvectors
        return SymmetricMatrix((q * self.eigenvalues) @ q.T)


def eigh(m: SymmetricMatrix) -> SpectralDecomposition:
    """Full eigendecomposition by cyclic Jacobi with threshold sweeps.

    Converged when the off-diagonal Frobenius norm drops below
    1e-13 * (1 + ||M||_F); hard cap of 100 sweeps. Ordering is ascending with
    ties left in stable (original index) order, and each eigenvector's
    largest-magnitude component is made positive, so identical input gives
    identical output.
    """
    a = np.array(m.entries, dtype=float, order="C")
    n = a.shape[0]
    vec = np.eye(n)
    fro = float(np.sqrt(np.sum(a * a)))
    tol = EIGH_TOL_FACTOR * (1.0 + fro)
    _, off = jacobi_sweeps(a, vec, tol, MAX_SWEEPS)
    if off > tol:
        raise ConvergenceError(
            f"no convergence in {MAX_SWEEPS} sweeps: off-diagonal residual "
            f"{off:.3e} above tolerance {tol:.3e}"
        )
    w = np.diagonal(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    vec = vec[:, order]
    lead = np.argmax(np.abs(vec), axis=0)
    signs = np.where(vec[lead, np.arange(n)] < 0.0, -1.0, 1.0)
    vec = vec * signs
    w.setflags(write=False)
    vec.setflags(write=False)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=vec)


def operator_norm(m: SymmetricMatrix) -> float:
    """Spectral norm, i.e. max |eigenvalue|."""
    w = eigh(m).eigenvalues
    return float(max(abs(w[0]), abs(w[-1])))


def is_psd(m: SymmetricMatrix, tol: float) -> bool:
    """True iff the minimal eigenvalue is >= -tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return float(eigh(m).eigenvalues[0]) >= -tol


@dataclass(frozen=True, eq=False)
class IntervalSet:
    """Finite union of closed intervals [lo, hi] (points allowed), kept sorted
    and disjoint: overlapping or touching intervals merge at construction."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pairs = []
        for lo, hi in self.intervals:
            lo = float(lo)
            hi = float(hi)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("interval endpoints must be finite")
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] has lo > hi")
            pairs.append((lo, hi))
        pairs.sort()
        merged: list[tuple[float, float]] = []
        for lo, hi in pairs:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def from_points(cls, values: Iterable[float]) -> "IntervalSet":
        return cls(tuple((float(v), float(v)) for v in values))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def _require_nonempty(self):
        if self.is_empty:
            raise ValueError("empty interval set")

    @property
    def inf(self) -> float:
        self._require_nonempty()
        return self.intervals[0][0]

    @property
    def sup(self) -> float:
        self._require_nonempty()
        return self.intervals[-1][1]

    def hull(self) -> "IntervalSet":
        self._require_nonempty()
        return IntervalSet(((self.inf, self.sup),))

    def distance_to_point(self, x: float) -> float:
        self._require_nonempty()
        best = math.inf
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return 0.0
            best = min(best, lo - x if x < lo else x - hi)
        return best

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.distance_to_point(x) <= tol

    def signed_margin(self, x: float) -> float:
        """Depth inside the set (nonnegative) or minus the distance outside."""
        self._require_nonempty()
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return min(x - lo, hi - x)
        return -self.distance_to_point(x)

    def to_json(self) -> str:
        return json.dumps([[lo, hi] for lo, hi in self.intervals])

    @classmethod
    def from_json(cls, text: str) -> "IntervalSet":
        return cls(tuple((float(lo), float(hi)) for lo, hi in json.loads(text)))


def shift_set(s: IntervalSet, t: float) -> IntervalSet:
    """One-sided enlargement S + [0, t]: each [lo, hi] becomes [lo, hi + t]."""
    if t < 0:
        raise ValueError("shift amount must be nonnegative")
    return IntervalSet(tuple((lo, hi + t) for lo, hi in s.intervals))


def set_distance(s1: IntervalSet, s2: IntervalSet) -> float:
    """Distance between two nonempty closed sets; 0 when they overlap."""
    s1._require_nonempty()
    s2._require_nonempty()
    best = math.inf
    for lo1, hi1 in s1.intervals:
        for lo2, hi2 in s2.intervals:
            best = min(best, max(lo2 - hi1, lo1 - hi2, 0.0))
    return best


def classify_points(
    points: Iterable[float], s1: IntervalSet, s2: IntervalSet, tol: float
) -> list[str]:
    """Label each point "first"/"second" by the set within `tol` of it, or
    "outside" when neither is. The two sets must be disjoint with positive
    distance; a point within tol of both raises (impossible once the set gap
    exceeds 2*tol)."""
    if set_distance(s1, s2) <= 0.0:
        raise ValueError("sets must be disjoint with positive distance")
    labels = []
    for x in points:
        near1 = s1.distance_to_point(x) <= tol
        near2 = s2.distance_to_point(x) <= tol
        if near1 and near2:
            raise AmbiguousBoundaryError(f"point {x!r} within tolerance of both sets")
        labels.append("first" if near1 else "second" if near2 else "outside")
    return labels


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector with its rank; idempotency and trace are validated
    at construction (residuals 1e-9 / 1e-8)."""

    matrix: SymmetricMatrix
    rank: int

    def __post_init__(self):
        p = self.matrix.entries
        if not 0 <= self.rank <= self.matrix.dim:
            raise ValueError("rank out of range")
        residual = float(np.max(np.abs(p @ p - p)))
        if residual > 1e-9:
            raise ValueError(f"not idempotent: residual {residual:.3e}")
        trace_gap = abs(float(np.trace(p)) - self.rank)
        if trace_gap > 1e-8:
            raise ValueError(f"trace off rank by {trace_gap:.3e}")

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def complement(self) -> "Projector":
        return Projector(
            SymmetricMatrix(np.eye(self.dim) - self.matrix.entries),
            self.dim - self.rank,
        )


def spectral_projector(dec: SpectralDecomposition, selection: Selection) -> Projector:
    """Projector onto the span of the selected eigenvectors.

    `selection` is either an index set or an IntervalSet; with an IntervalSet,
    every eigenvalue must be unambiguously inside or outside (an eigenvalue
    within membership tolerance of a boundary, but not inside, raises). Built
    as a sum of outer products over the index set, so degenerate clusters are
    handled exactly regardless of basis rotation within the cluster.
    """
    w = dec.eigenvalues
    if isinstance(selection, IntervalSet):
        radius = max(abs(float(w[0])), abs(float(w[-1])))
        tol = membership_tol(radius)
        idx = []
        for k, lam in enumerate(w):
            lam = float(lam)
            if selection.contains(lam):
                idx.append(k)
            elif selection.distance_to_point(lam) <= tol:
                raise AmbiguousBoundaryError(
                    f"eigenvalue {lam!r} within tolerance {tol:.3e} of a "
                    "selection boundary but not inside"
                )
    else:
        idx = sorted(int(k) for k in selection)
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate indices in selection")
        if idx and (idx[0] < 0 or idx[-1] >= dec.dim):
            raise ValueError("selection index out of range")
    cols = dec.eigenvectors[:, idx]
    p = cols @ cols.T
    return Projector(SymmetricMatrix(p), rank=len(idx))
