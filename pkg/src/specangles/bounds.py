"""Closed-form perturbation bounds for spectral subspaces of real symmetric
matrices under positive-semidefinite perturbations.

Setting: A symmetric with spectrum split into components sigma and Sigma at
distance d > 0, perturbed along the path A + tV with V >= 0 and ||V|| < d.
The subspace tracked is the one belonging to omega_t, the part of
spec(A + tV) trapped in the one-sided enlargement sigma + [0, t*||V||].
This module provides the enclosure and gap-persistence facts, the angle
bounds (favorable-geometry, sin-2-theta, arcsin corollary, generic N, log
integral), the piecewise bound function N with its switchover root kappa,
and the critical constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    IntervalSet,
    Projector,
    SpectralDecomposition,
    SymmetricMatrix,
    classify_points,
    eigh,
    is_psd,
    membership_tol,
    operator_norm,
    set_distance,
    shift_set,
    spectral_projector,
)

PSD_TOL = 1e-10

# Critical ratios: a semidefinite perturbation admits the generic bound up to
# ||V||/d < c_crit_sem = 1 - (1 - sqrt(3)/pi)^3; the bound function N lives on
# [0, c_crit] with c_crit = c_crit_sem / 2. The log-integral bound stays below
# pi/2 exactly while ||V||/d < 2*sinh(1)/e.
C_CRIT_SEM = 1.0 - (1.0 - math.sqrt(3.0) / math.pi) ** 3
C_CRIT = C_CRIT_SEM / 2.0
LOG_THRESHOLD = 2.0 * math.sinh(1.0) / math.e

# Breakpoints of N's first three pieces; the fourth starts at kappa.
N_BREAK_1 = 4.0 / (math.pi**2 + 4.0)
N_BREAK_2 = 4.0 * (math.pi**2 - 2.0) / math.pi**4
KAPPA_SUP = 2.0 * (math.pi - 1.0) / math.pi**2

CONVEX_SEPARATED = "convex-separated"
INTERLEAVED = "interleaved"


class NoBoundKnownError(ValueError):
    """Raised in the regime where no angle bound is known (it is an open
    problem whether one holds there); nothing is fabricated."""


def _asin_guarded(arg: float, slack: float = 1e-12) -> float:
    # Absorb 1-ulp overshoot of arguments that are exactly 1 in exact math.
    if 1.0 < arg <= 1.0 + slack:
        arg = 1.0
    if -1.0 - slack <= arg < -1.0:
        arg = -1.0
    return math.asin(arg)


@dataclass(frozen=True, eq=False)
class PerturbationInstance:
    """A perturbation problem: base matrix, PSD perturbation, and the index
    set singling out the tracked spectral component sigma of A. The derived
    fields (spectra as point sets, gap d, ||V||, hull geometry) are computed
    once in build()."""

    a: SymmetricMatrix
    v: SymmetricMatrix
    sigma_indices: tuple[int, ...]
    label: str
    dec_a: SpectralDecomposition
    sigma: IntervalSet
    big_sigma: IntervalSet
    d: float
    v_norm: float
    geometry: str

    @classmethod
    def build(
        cls,
        a: SymmetricMatrix,
        v: SymmetricMatrix,
        sigma_indices,
        label: str = "",
    ) -> "PerturbationInstance":
        if a.dim != v.dim:
            raise ValueError("dimension mismatch between A and V")
        idx = tuple(sorted(int(k) for k in sigma_indices))
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate sigma indices")
        if not idx or len(idx) >= a.dim:
            raise ValueError("sigma must be a nonempty proper subset of the spectrum")
        if idx[0] < 0 or idx[-1] >= a.dim:
            raise ValueError("sigma index out of range")
        if not is_psd(v, PSD_TOL):
            raise ValueError("V must be positive semidefinite")
        dec = eigh(a)
        v_norm = 0.0 if not np.any(v.entries) else operator_norm(v)
        w = dec.eigenvalues
        in_sigma = np.zeros(a.dim, dtype=bool)
        in_sigma[list(idx)] = True
        sigma = IntervalSet.from_points(w[in_sigma])
        big_sigma = IntervalSet.from_points(w[~in_sigma])
        d = set_distance(sigma, big_sigma)
        if d <= 0.0:
            raise ValueError("sigma and Sigma must be separated by a positive gap")
        geometry = (
            CONVEX_SEPARATED if convexity_condition(sigma, big_sigma) else INTERLEAVED
        )
        return cls(
            a=a,
            v=v,
            sigma_indices=idx,
            label=label,
            dec_a=dec,
            sigma=sigma,
            big_sigma=big_sigma,
            d=d,
            v_norm=v_norm,
            geometry=geometry,
        )

    def perturbed(self, t: float) -> SymmetricMatrix:
        return self.a + self.v.scaled(t)


@dataclass(frozen=True, eq=False)
class OmegaComponent:
    """The tracked spectral component of A + tV: indices into its ascending
    spectrum, the associated projector P_t, and the enclosure interval set
    sigma + [0, t*||V||] that traps it."""

    t: float
    omega_indices: tuple[int, ...]
    projector: Projector
    enclosure: IntervalSet


@dataclass(frozen=True, eq=False)
class EnclosureReport:
    """Per-eigenvalue signed containment margins of spec(A+tV) in
    spec(A) + [0, t*||V||]; positive means inside with room, negative means
    outside by that distance."""

    t: float
    eigenvalues: np.ndarray
    margins: np.ndarray
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.all(self.margins >= -self.tol))

    @property
    def worst_margin(self) -> float:
        return float(np.min(self.margins))


@dataclass(frozen=True)
class BoundConstants:
    c_crit: float
    c_crit_sem: float
    log_threshold: float
    kappa: float


@dataclass(frozen=True)
class LogBound:
    """Value of the log-integral bound plus the flag telling whether the
    hypothesis ratio keeps it strictly below pi/2."""

    value: float
    below_half_pi: bool


def enclosure_check(
    inst: PerturbationInstance, t: float, tol: float = 1e-8, dec: SpectralDecomposition | None = None
) -> EnclosureReport:
    """Check spec(A+tV) against the one-sided enlargement spec(A)+[0, t*||V||]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if dec is None:
        dec = eigh(inst.perturbed(t))
    allowed = shift_set(
        IntervalSet.from_points(inst.dec_a.eigenvalues), t * inst.v_norm
    )
    w = dec.eigenvalues
    margins = np.array([allowed.signed_margin(float(x)) for x in w])
    return EnclosureReport(t=t, eigenvalues=w, margins=margins, tol=tol)


def gap_persistence(a: float, b: float, v_norm: float) -> IntervalSet:
    """The part (a + ||V||, b) of a spectral gap (a, b) guaranteed to stay in
    the resolvent set; empty once the shift can close the gap."""
    if not a < b:
        raise ValueError("need a < b")
    if v_norm < 0:
        raise ValueError("v_norm must be nonnegative")
    if v_norm >= b - a:
        return IntervalSet(())
    return IntervalSet(((a + v_norm, b),))


def omega_component(
    inst: PerturbationInstance, t: float, dec: SpectralDecomposition | None = None
) -> OmegaComponent:
    """Classify spec(A+tV) into the tracked component and the rest.

    Eigenvalues are assigned by nearest-shifted-set classification against
    sigma + [0, t*||V||] versus Sigma + [0, t*||V||]; those two sets are
    disjoint with gap >= d - t*||V||, so the assignment is unambiguous under
    the gap non-closing hypothesis. The component must keep exactly rank(sigma)
    eigenvalues; anything else raises.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t * inst.v_norm >= inst.d:
        raise ValueError("gap non-closing hypothesis t*||V|| < d violated")
    if dec is None:
        dec = eigh(inst.perturbed(t))
    shift = t * inst.v_norm
    lower = shift_set(inst.sigma, shift)
    upper = shift_set(inst.big_sigma, shift)
    w = dec.eigenvalues
    radius = max(abs(float(w[0])), abs(float(w[-1])))
    labels = classify_points(w, lower, upper, membership_tol(radius))
    if "outside" in labels:
        stray = float(w[labels.index("outside")])
        raise ValueError(f"eigenvalue {stray!r} escaped the spectral enclosure")
    idx = tuple(k for k, lab in enumerate(labels) if lab == "first")
    if len(idx) != len(inst.sigma_indices):
        raise ValueError(
            f"component changed size: {len(idx)} eigenvalues tracked, "
            f"expected {len(inst.sigma_indices)}"
        )
    return OmegaComponent(
        t=t,
        omega_indices=idx,
        projector=spectral_projector(dec, idx),
        enclosure=lower,
    )


def continuity_modulus(v_norm: float, d: float, s: float, t: float) -> float:
    """Norm bound (pi/2)*(t-s)*||V||/(d - t*||V||) on ||P_s - P_t||, s <= t."""
    if not 0.0 <= s <= t <= 1.0:
        raise ValueError("need 0 <= s <= t <= 1")
    if v_norm < 0 or d <= 0:
        raise ValueError("need v_norm >= 0 and d > 0")
    if t * v_norm >= d:
        raise ValueError("gap non-closing hypothesis t*||V|| < d violated")
    return (math.pi / 2.0) * (t - s) * v_norm / (d - t * v_norm)


def convexity_condition(sigma: IntervalSet, big_sigma: IntervalSet) -> bool:
    """Favorable geometry: conv(sigma) avoids Sigma, or sigma avoids
    conv(Sigma)."""
    if set_distance(sigma, big_sigma) <= 0.0:
        raise ValueError("sets must be disjoint with positive distance")
    return (
        set_distance(sigma.hull(), big_sigma) > 0.0
        or set_distance(sigma, big_sigma.hull()) > 0.0
    )


def bound_favorable(v_norm: float, d: float) -> float:
    """Sharp angle bound (1/2)*arcsin(||V||/d) under the convex-hull
    condition; always below pi/4."""
    if d <= 0 or not 0.0 <= v_norm < d:
        raise ValueError("hypothesis 0 <= ||V|| < d violated")
    return 0.5 * math.asin(v_norm / d)


def bound_sin2theta(v_norm: float, d: float, convex: bool) -> float:
    """Bound on ||sin 2*Theta||: (pi/2)*||V||/d in general, ||V||/d under the
    convex-hull condition."""
    if d <= 0 or v_norm < 0:
        raise ValueError("need d > 0 and ||V|| >= 0")
    ratio = v_norm / d
    return ratio if convex else (math.pi / 2.0) * ratio


def bound_corollary(v_norm: float, d: float) -> float:
    """Angle bound (1/2)*arcsin(pi*||V||/(2d)), valid while ||V|| <= 2d/pi."""
    if d <= 0 or v_norm < 0:
        raise ValueError("need d > 0 and ||V|| >= 0")
    arg = math.pi * v_norm / (2.0 * d)
    if arg > 1.0 + 1e-12:
        raise ValueError("hypothesis ||V|| <= 2d/pi violated")
    return 0.5 * _asin_guarded(arg)


def N_eval(x: float, kappa: float) -> float:
    """The piecewise bound function N on [0, c_crit].

    Pieces, in order, with breakpoints 4/(pi^2+4), 4(pi^2-2)/pi^4, kappa:
      (1/2)*arcsin(pi*x)
      arcsin(sqrt((2*pi^2*x - 4)/(pi^2 - 4)))
      arcsin((pi/2)*(1 - sqrt(1 - 2x)))
      (3/2)*arcsin((pi/2)*(1 - cbrt(1 - 2x)))
    Continuous and nondecreasing, reaching pi/2 exactly at the right endpoint.
    """
    if not 0.0 <= x <= C_CRIT:
        raise ValueError(f"x={x!r} outside the domain [0, {C_CRIT!r}]")
    if x <= N_BREAK_1:
        return 0.5 * _asin_guarded(math.pi * x)
    if x < N_BREAK_2:
        return _asin_guarded(
            math.sqrt((2.0 * math.pi**2 * x - 4.0) / (math.pi**2 - 4.0))
        )
    if x <= kappa:
        return _asin_guarded((math.pi / 2.0) * (1.0 - math.sqrt(1.0 - 2.0 * x)))
    return 1.5 * _asin_guarded(
        (math.pi / 2.0) * (1.0 - (1.0 - 2.0 * x) ** (1.0 / 3.0))
    )


def _kappa_equation(k: float) -> float:
    return math.asin((math.pi / 2.0) * (1.0 - math.sqrt(1.0 - 2.0 * k))) - 1.5 * math.asin(
        (math.pi / 2.0) * (1.0 - (1.0 - 2.0 * k) ** (1.0 / 3.0))
    )


def kappa_solve() -> float:
    """Switchover point between N's third and fourth pieces: the unique root
    in (0, 2(pi-1)/pi^2] of

        arcsin((pi/2)(1 - sqrt(1-2k))) = (3/2) arcsin((pi/2)(1 - cbrt(1-2k)))

    found by bisection, then residual-checked below 1e-13.
    """
    lo, hi = 1e-4, KAPPA_SUP
    f_lo, f_hi = _kappa_equation(lo), _kappa_equation(hi)
    if not f_lo < 0.0 < f_hi:
        raise ValueError("no sign change on the bisection bracket")
    while hi - lo > 1e-16:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _kappa_equation(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    kappa = 0.5 * (lo + hi)
    residual = abs(_kappa_equation(kappa))
    if residual > 1e-13:
        raise ValueError(f"bisection stalled with residual {residual:.3e}")
    return kappa


@lru_cache(maxsize=1)
def constants() -> BoundConstants:
    """The four critical constants, computed once and cached."""
    return BoundConstants(
        c_crit=C_CRIT,
        c_crit_sem=C_CRIT_SEM,
        log_threshold=LOG_THRESHOLD,
        kappa=kappa_solve(),
    )


def bound_generic(v_norm: float, d: float) -> float:
    """Angle bound N(||V||/(2d)) for arbitrary spectral geometry, proved for
    ||V|| < c_crit_sem * d. Beyond that ratio no bound is known (open
    problem), so NoBoundKnownError is raised rather than a fabricated value.
    """
    if d <= 0 or v_norm < 0:
        raise ValueError("need d > 0 and ||V|| >= 0")
    if v_norm >= C_CRIT_SEM * d:
        raise NoBoundKnownError(
            f"no angle bound is known for ||V||/d = {v_norm / d!r} >= "
            f"c_crit_sem = {C_CRIT_SEM!r}"
        )
    return N_eval(v_norm / (2.0 * d), constants().kappa)


def bound_log(v_norm: float, d: float) -> LogBound:
    """Log-integral angle bound (pi/4)*log(d/(d-||V||)); the flag records
    whether ||V||/d < 2*sinh(1)/e, exactly the regime where the value stays
    below pi/2."""
    if d <= 0 or not 0.0 <= v_norm < d:
        raise ValueError("hypothesis 0 <= ||V|| < d violated")
    return LogBound(
        value=(math.pi / 4.0) * math.log(d / (d - v_norm)),
        below_half_pi=v_norm / d < LOG_THRESHOLD,
    )


def truncate_digits(x: float, digits: int) -> str:
    """Decimal rendering truncated toward zero, matching how the critical
    constants are conventionally printed (0.45483996... prints as 0.4548399,
    never rounded up)."""
    if digits < 1:
        raise ValueError("digits must be positive")
    scaled = math.trunc(abs(x) * 10**digits)
    sign = "-" if x < 0 else ""
    return f"{sign}{scaled // 10**digits}.{scaled % 10**digits:0{digits}d}"
