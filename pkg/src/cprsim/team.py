"""Roles, team composition and the capability matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping


class Role(str, Enum):
    PHYSICIAN = "physician"
    ASSISTANT = "assistant"
    CRITICAL_CARE_NURSE = "critical_care_nurse"
    CLINICAL_NURSE = "clinical_nurse"
    NURSE = "nurse"
    RESPIRATORY_THERAPIST = "respiratory_therapist"


DOMAIN_ACTIONS = frozenset(
    {
        "chest_compressions",
        "ventilate",
        "intubate",
        "defibrillate",
        "iv_cannulate",
        "inject_drug",
        "order_drug",
        "order_stop",
    }
)
LEADER_ONLY = frozenset({"order_drug", "order_stop"})



class Matrix(Mapping):
    """Read-only role -> actions table (picklable, unlike a mappingproxy)."""

    def __init__(self, table: Mapping[Role, frozenset[str]]):
        self._t = dict(table)

    def __getitem__(self, role: Role) -> frozenset[str]:
        return self._t[role]

    def __iter__(self) -> Iterator[Role]:
        return iter(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def __repr__(self) -> str:
        return f"Matrix({self._t!r})"


_ALL_ROLES = frozenset(Role)
_NURSES = frozenset({Role.NURSE, Role.CLINICAL_NURSE, Role.CRITICAL_CARE_NURSE})

DEFAULT_MATRIX: Mapping[Role, frozenset[str]] = Matrix(
    {
        role: frozenset(
            a
            for a, who in {
                "chest_compressions": _ALL_ROLES,
                "ventilate": _ALL_ROLES,
                "intubate": {Role.PHYSICIAN, Role.RESPIRATORY_THERAPIST},
                "defibrillate": _NURSES | {Role.PHYSICIAN},
                "iv_cannulate": _NURSES | {Role.PHYSICIAN},
                "inject_drug": _NURSES | {Role.PHYSICIAN},
                "order_drug": {Role.PHYSICIAN},
                "order_stop": {Role.PHYSICIAN},
            }.items()
            if role in who
        )
        for role in Role
    }
)


class UnknownAction(KeyError):
    pass


class TeamError(ValueError):
    pass


def can_perform(role: Role | str, action: str, matrix: Mapping[Role, frozenset[str]] = DEFAULT_MATRIX) -> bool:
    if action not in DOMAIN_ACTIONS:
        raise UnknownAction(action)
    return action in matrix.get(Role(role), frozenset())


@dataclass(frozen=True)
class Member:
    id: str
    role: Role


@dataclass(frozen=True)
class Team:
    members: tuple[Member, ...]
    matrix: Mapping[Role, frozenset[str]] = field(default=DEFAULT_MATRIX)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.members)

    def role_of(self, agent_id: str) -> Role:
        for m in self.members:
            if m.id == agent_id:
                return m.role
        raise KeyError(agent_id)

    def capabilities(self, agent_id: str) -> frozenset[str]:
        return self.matrix.get(self.role_of(agent_id), frozenset())

    @property
    def leader(self) -> str:
        for m in self.members:
            if m.role is Role.PHYSICIAN:
                return m.id
        raise TeamError("team has no physician")

    def uncovered(self) -> set[str]:
        covered: set[str] = set()
        for m in self.members:
            covered |= self.matrix.get(m.role, frozenset())
        return set(DOMAIN_ACTIONS) - covered

    def validate(self) -> None:
        ids = self.ids
        if len(set(ids)) != len(ids):
            raise TeamError("duplicate agent ids")
        if not self.members:
            raise TeamError("empty team")
        for role, actions in self.matrix.items():
            unknown = set(actions) - DOMAIN_ACTIONS
            if unknown:
                raise TeamError(f"unknown actions for {role.value}: {sorted(unknown)}")
            if role is not Role.PHYSICIAN and actions & LEADER_ONLY:
                raise TeamError(f"{role.value} may not hold leader-only actions")
        missing = self.uncovered()
        if missing:
            raise TeamError(f"actions without a capable member: {sorted(missing)}")


def make_matrix(overrides: Mapping[str, Iterable[str]] | None = None) -> Mapping[Role, frozenset[str]]:
    m = dict(DEFAULT_MATRIX)
    for role, actions in (overrides or {}).items():
        m[Role(role)] = frozenset(actions)
    return Matrix(m)


def default_team() -> Team:
    """Rapid-response team: physician (leader), assistant, critical care nurse,
    clinical nurse and respiratory therapist.

    The clinical nurse carries the agent id ``nurse``, the name ward teams
    use when calling on that member.
    """
    return Team(
        (
            Member("physician", Role.PHYSICIAN),
            Member("assistant", Role.ASSISTANT),
            Member("critical_care_nurse", Role.CRITICAL_CARE_NURSE),
            Member("nurse", Role.CLINICAL_NURSE),
            Member("respiratory_therapist", Role.RESPIRATORY_THERAPIST),
        )
    )
