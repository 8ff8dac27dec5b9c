"""Patient physiology and the advanced life support clock.

One tick is one second. The patient only distinguishes flow (someone is doing
CPR this tick) from no flow; compression/ventilation ratios are a property of
the agents' plans.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum

RHYTHM_CHECK_INTERVAL = 120
DRUGS = ("adrenaline", "amiodarone")


class Rhythm(str, Enum):
    VF = "vf"
    ASYSTOLE = "asystole"
    ROSC = "rosc"
    DECEASED = "deceased"

    @property
    def absorbing(self) -> bool:
        return self in (Rhythm.ROSC, Rhythm.DECEASED)

    @property
    def shockable(self) -> bool:
        return self is Rhythm.VF


class AbsorbingState(RuntimeError):
    pass


class NonShockable(RuntimeError):
    pass


class SafetyViolation(RuntimeError):
    def __init__(self, kind: str = "shock_during_compressions"):
        super().__init__(kind)
        self.kind = kind


class UnknownDrug(ValueError):
    pass


@dataclass(frozen=True)
class PatientState:
    rhythm: Rhythm = Rhythm.VF
    shocks_given: int = 0
    adrenaline_mg: float = 0.0
    amiodarone_given: bool = False
    no_flow_ticks: int = 0
    elapsed_ticks: int = 0
    compressions_active: bool = False
    rhythm_checks: int = 0
    eligible_for_termination: bool = False
    intubated: bool = False

    @property
    def no_flow_fraction(self) -> float:
        return self.no_flow_ticks / self.elapsed_ticks if self.elapsed_ticks else 0.0

    def to_dict(self) -> dict:
        return {
            "rhythm": self.rhythm.value,
            "shocks_given": self.shocks_given,
            "adrenaline_mg": self.adrenaline_mg,
            "amiodarone_given": self.amiodarone_given,
            "no_flow_ticks": self.no_flow_ticks,
            "elapsed_ticks": self.elapsed_ticks,
            "compressions_active": self.compressions_active,
            "rhythm_checks": self.rhythm_checks,
            "eligible_for_termination": self.eligible_for_termination,
            "intubated": self.intubated,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PatientState":
        d = dict(d)
        if "rhythm" in d:
            d["rhythm"] = Rhythm(d["rhythm"])
        return cls(**d)


@dataclass(frozen=True)
class OutcomeModel:
    p_rosc_base: float = 0.02
    shock_bonus_per_shock: float = 0.01
    adrenaline_bonus: float = 0.03
    no_flow_severity: float = 2.0
    futility_after: int = 6

    def __post_init__(self):
        if self.futility_after < 1:
            raise ValueError("futility_after must be >= 1")
        if self.no_flow_severity < 0:
            raise ValueError("no_flow_severity must be >= 0")

    def no_flow_penalty(self, no_flow_fraction: float) -> float:
        return clamp01(1.0 - no_flow_fraction) ** self.no_flow_severity


def clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def tick_patient(s: PatientState, compressions_active: bool) -> PatientState:
    if s.rhythm.absorbing:
        raise AbsorbingState(s.rhythm.value)
    return replace(
        s,
        elapsed_ticks=s.elapsed_ticks + 1,
        no_flow_ticks=s.no_flow_ticks + (0 if compressions_active else 1),
        compressions_active=compressions_active,
    )


def apply_shock(s: PatientState, compressions_active: bool | None = None) -> PatientState:
    """Deliver one shock. ``compressions_active`` overrides the stored flag with the live one."""
    active = s.compressions_active if compressions_active is None else compressions_active
    if not s.rhythm.shockable:
        raise NonShockable(s.rhythm.value)
    if active:
        raise SafetyViolation("shock_during_compressions")
    return replace(s, shocks_given=s.shocks_given + 1)


def administer_drug(s: PatientState, drug: str, dose_mg: float) -> PatientState:
    if drug == "adrenaline":
        return replace(s, adrenaline_mg=s.adrenaline_mg + dose_mg)
    if drug == "amiodarone":
        return replace(s, amiodarone_given=True)
    raise UnknownDrug(drug)


def rosc_probability(s: PatientState, model: OutcomeModel) -> float:
    p = model.p_rosc_base
    if s.rhythm.shockable:
        p += model.shock_bonus_per_shock * s.shocks_given
    if s.adrenaline_mg > 0:
        p += model.adrenaline_bonus
    return clamp01(clamp01(p) * model.no_flow_penalty(s.no_flow_fraction))


def rhythm_check(s: PatientState, model: OutcomeModel, rng: random.Random) -> Rhythm:
    if s.rhythm.absorbing:
        return s.rhythm
    p = rosc_probability(s, model)
    # always consume exactly one draw so paired runs stay aligned
    u = rng.random()
    return Rhythm.ROSC if u < p else s.rhythm


def record_rhythm_check(s: PatientState, result: Rhythm, model: OutcomeModel) -> PatientState:
    checks = s.rhythm_checks + 1
    return replace(
        s,
        rhythm=result,
        rhythm_checks=checks,
        eligible_for_termination=s.eligible_for_termination
        or (result is not Rhythm.ROSC and checks >= model.futility_after),
    )


def is_terminal(s: PatientState, leader_stop: bool = False) -> bool:
    return s.rhythm.absorbing or (s.eligible_for_termination and leader_stop)
