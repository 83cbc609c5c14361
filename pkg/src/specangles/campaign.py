"""Randomized verification campaigns.

A campaign config declares how many trials to run and the generator axes
(plans, dimensions, perturbation ratios, seeds); the runner builds each
instance, walks the path projectors over the t grid {0, 1/4, 1/2, 3/4, 1},
measures angles, and emits one row per (instance, bound) with the signed
margin bound - measured. Margins at or above -tol pass. Identical configs
produce byte-identical reports; timing lives on the trial report only, never
in rows, so serialized reports are directly comparable.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass
from typing import Iterable, Iterator

from .bounds import (
    C_CRIT_SEM,
    CONVEX_SEPARATED,
    PerturbationInstance,
    bound_corollary,
    bound_favorable,
    bound_generic,
    bound_log,
    bound_sin2theta,
    continuity_modulus,
    enclosure_check,
    omega_component,
)
from .core import eigh
from .geometry import angle_report, sin_two_theta_norm
from .instances import (
    DOUBLY_INTERLEAVED,
    SpecPlan,
    convex_plan,
    interleaved_plan,
    random_instance,
    rank_one_instance,
    sharpness_pair,
)

T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
PLAN_NAMES = (CONVEX_SEPARATED, DOUBLY_INTERLEAVED, "sharpness", "rank-one")
DEFAULT_TOL = 1e-8

ROW_FIELDS = ("instance_id", "t", "theta", "bound_name", "bound_value", "margin", "pass")


class ConfigError(ValueError):
    """Campaign config rejected: unknown key, bad type, or bad value."""


@dataclass(frozen=True)
class CampaignConfig:
    trials: int
    ns: tuple[int, ...]
    plans: tuple[str, ...]
    v_ratios: tuple[float, ...]
    seeds: tuple[int, ...]
    tolerances: dict[str, float]

    @classmethod
    def from_dict(cls, raw: dict) -> "CampaignConfig":
        known = {"trials", "n", "plans", "v_ratios", "seeds", "seed_base", "tolerances"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        trials = raw.get("trials", 0)
        if not isinstance(trials, int) or trials < 0:
            raise ConfigError("trials must be a nonnegative integer")
        ns_raw = raw.get("n", [8])
        ns = tuple(ns_raw) if isinstance(ns_raw, list) else (ns_raw,)
        if not ns or not all(isinstance(n, int) and n >= 2 for n in ns):
            raise ConfigError("n must be an integer >= 2 or a nonempty list of them")
        plans = tuple(raw.get("plans", [CONVEX_SEPARATED]))
        if not plans or any(p not in PLAN_NAMES for p in plans):
            raise ConfigError(f"plans must be a nonempty subset of {PLAN_NAMES}")
        v_ratios = tuple(float(v) for v in raw.get("v_ratios", [0.5]))
        if not v_ratios or not all(0.0 <= v < 1.0 for v in v_ratios):
            raise ConfigError("v_ratios must be a nonempty list inside [0, 1)")
        if "seeds" in raw and "seed_base" in raw:
            raise ConfigError("give either seeds or seed_base, not both")
        if "seeds" in raw:
            seeds = tuple(raw["seeds"])
            if len(seeds) != trials or not all(isinstance(s, int) for s in seeds):
                raise ConfigError("seeds must list exactly one integer per trial")
        else:
            base = raw.get("seed_base", 1)
            if not isinstance(base, int):
                raise ConfigError("seed_base must be an integer")
            seeds = tuple(base + k for k in range(trials))
        tol_raw = raw.get("tolerances", {})
        if not isinstance(tol_raw, dict):
            raise ConfigError("tolerances must be a mapping")
        allowed = {"default", "enclosure", "sin2theta", "corollary", "favorable",
                   "generic", "log", "continuity", "rank-one"}
        bad = set(tol_raw) - allowed
        if bad:
            raise ConfigError(f"unknown tolerance keys: {sorted(bad)}")
        tolerances = {k: float(v) for k, v in tol_raw.items()}
        if any(t < 0 for t in tolerances.values()):
            raise ConfigError("tolerances must be nonnegative")
        return cls(
            trials=trials,
            ns=ns,
            plans=plans,
            v_ratios=v_ratios,
            seeds=seeds,
            tolerances=tolerances,
        )

    @classmethod
    def from_json_file(cls, path: str) -> "CampaignConfig":
        with open(path, "r", encoding="utf-8") as handle:
            try:
                raw = json.load(handle)
            except json.JSONDecodeError as err:
                raise ConfigError(f"{path}:{err.lineno}: {err.msg}") from err
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(raw)

    def tol_for(self, bound_name: str) -> float:
        return self.tolerances.get(
            bound_name, self.tolerances.get("default", DEFAULT_TOL)
        )


@dataclass(frozen=True)
class BoundRow:
    instance_id: str
    t: float
    theta: float
    bound_name: str
    bound_value: float
    margin: float
    passed: bool

    def to_mapping(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "t": self.t,
            "theta": self.theta,
            "bound_name": self.bound_name,
            "bound_value": self.bound_value,
            "margin": self.margin,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class TrialReport:
    seed: int
    instance_id: str
    n: int
    geometry: str
    d: float
    v_norm: float
    theta: float
    rows: tuple[BoundRow, ...]
    elapsed_s: float

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


def _plan_for(name: str, n: int) -> SpecPlan:
    if name == DOUBLY_INTERLEAVED:
        return interleaved_plan(n)
    return convex_plan(n)


def _build_instance(name: str, n: int, v_ratio: float, seed: int) -> PerturbationInstance:
    if name == "sharpness":
        return sharpness_pair(v_ratio)
    if name == "rank-one":
        return rank_one_instance(n, convex_plan(n), v_ratio, seed)
    return random_instance(n, _plan_for(name, n), v_ratio, seed)


def _measure_trial(
    config: CampaignConfig, name: str, inst: PerturbationInstance, seed: int
) -> TrialReport:
    started = time.perf_counter()
    decs = {
        t: inst.dec_a if t == 0.0 else eigh(inst.perturbed(t)) for t in T_GRID
    }
    projectors = {
        t: omega_component(inst, t, dec=decs[t]).projector for t in T_GRID
    }
    theta = float(angle_report(projectors[0.0], projectors[1.0]).max_angle)
    rows: list[BoundRow] = []

    def add(bound_name: str, t: float, bound_value: float, margin: float):
        # numpy scalars sneak in via array indexing; rows must hold built-in
        # floats so repr/json serialization stays portable
        rows.append(
            BoundRow(
                instance_id=inst.label,
                t=float(t),
                theta=theta,
                bound_name=bound_name,
                bound_value=float(bound_value),
                margin=float(margin),
                passed=bool(margin >= -config.tol_for(bound_name)),
            )
        )

    for t in T_GRID:
        report = enclosure_check(inst, t, dec=decs[t])
        add("enclosure", t, 0.0, report.worst_margin)

    convex = inst.geometry == CONVEX_SEPARATED
    measured_sin2 = sin_two_theta_norm(projectors[0.0], projectors[1.0])
    value = bound_sin2theta(inst.v_norm, inst.d, convex)
    add("sin2theta", 1.0, value, value - measured_sin2)

    if inst.v_norm <= 2.0 * inst.d / math.pi:
        value = bound_corollary(inst.v_norm, inst.d)
        add("corollary", 1.0, value, value - theta)
    if convex and inst.v_norm < inst.d:
        value = bound_favorable(inst.v_norm, inst.d)
        add("favorable", 1.0, value, value - theta)
    if inst.v_norm < C_CRIT_SEM * inst.d:
        value = bound_generic(inst.v_norm, inst.d)
        add("generic", 1.0, value, value - theta)
    if inst.v_norm < inst.d:
        value = bound_log(inst.v_norm, inst.d).value
        add("log", 1.0, value, value - theta)

    worst = math.inf
    for i, s in enumerate(T_GRID):
        for t in T_GRID[i + 1 :]:
            modulus = continuity_modulus(inst.v_norm, inst.d, s, t)
            gap = angle_report(projectors[s], projectors[t]).sines[0]
            worst = min(worst, modulus - gap)
    add("continuity", 1.0, continuity_modulus(inst.v_norm, inst.d, 0.0, 1.0), worst)

    if name == "rank-one":
        value = inst.v_norm / inst.d
        measured = angle_report(projectors[0.0], projectors[1.0]).sines[0]
        add("rank-one", 1.0, value, value - measured)

    rows.sort(key=lambda row: (row.bound_name, row.t))
    return TrialReport(
        seed=seed,
        instance_id=inst.label,
        n=inst.a.dim,
        geometry=inst.geometry,
        d=inst.d,
        v_norm=inst.v_norm,
        theta=theta,
        rows=tuple(rows),
        elapsed_s=time.perf_counter() - started,
    )


def run_campaign(config: CampaignConfig) -> Iterator[TrialReport]:
    """Run every trial and yield reports in ascending seed order."""
    pending = []
    for k in range(config.trials):
        seed = config.seeds[k]
        name = config.plans[k % len(config.plans)]
        block = k // len(config.plans)
        v_ratio = config.v_ratios[block % len(config.v_ratios)]
        n = config.ns[(block // len(config.v_ratios)) % len(config.ns)]
        pending.append((seed, name, n, v_ratio))
    pending.sort(key=lambda item: item[0])
    for seed, name, n, v_ratio in pending:
        inst = _build_instance(name, n, v_ratio, seed)
        yield _measure_trial(config, name, inst, seed)


def rows_of(reports: Iterable[TrialReport]) -> Iterator[BoundRow]:
    for report in reports:
        yield from report.rows


def rows_jsonl(reports: Iterable[TrialReport]) -> str:
    lines = [json.dumps(row.to_mapping()) for row in rows_of(reports)]
    return "\n".join(lines) + ("\n" if lines else "")


def rows_csv(reports: Iterable[TrialReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for row in rows_of(reports):
        mapping = row.to_mapping()
        writer.writerow(
            [
                mapping["instance_id"],
                repr(mapping["t"]),
                repr(mapping["theta"]),
                mapping["bound_name"],
                repr(mapping["bound_value"]),
                repr(mapping["margin"]),
                "true" if mapping["pass"] else "false",
            ]
        )
    return buffer.getvalue()
