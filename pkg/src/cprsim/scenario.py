"""Scenario configuration: loading, inheritance and validation.

A scenario is one JSON document. ``"base"`` names a shipped scenario (or a
path relative to the file) to inherit from; mappings merge recursively, plans
merge by goal text, and every other value replaces the inherited one.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .acl import ParseError, Term, parse_term
from .cognition import DesireRule, Implication, Plan, PlanError
from .patient import OutcomeModel, PatientState
from .protocols import ProtocolConfig, SBAR_FIELDS
from .team import DOMAIN_ACTIONS, Member, Role, Team, TeamError, make_matrix


class ConfigError(ValueError):
    def __init__(self, msg: str, path: str | None = None, line: int | None = None):
        where = ""
        if path:
            where = f"{path}:{line}: " if line else f"{path}: "
        super().__init__(where + msg)
        self.path = path
        self.line = line


SHIPPED = ("good", "bad", "shock_episode", "adrenaline_episode")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    team: Team
    plans: tuple[Plan, ...]
    rules: tuple[DesireRule, ...]
    implications: tuple[Implication, ...] = ()
    priorities: Mapping[str, int] = field(default_factory=dict)
    agent_priorities: Mapping[str, Mapping[str, int]] = field(default_factory=dict)
    act_capabilities: Mapping[str, str | None] = field(default_factory=dict)
    protocol: ProtocolConfig = ProtocolConfig()
    outcome: OutcomeModel = OutcomeModel()
    sbar: tuple[Term, Term, Term, Term] | None = None
    sbar_sender: str = "paramedic"
    initial_beliefs: Mapping[str, tuple[Term, ...]] = field(default_factory=dict)
    initial_patient: PatientState = PatientState()
    max_ticks: int = 1800
    snapshot_interval: int = 30
    checkback_goals: frozenset[str] = frozenset({"shock", "inject"})
    checkback_timeout: int = 10
    wait_timeout: int = 20
    repetition_window: int = 30
    raw: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def with_protocol(self, **changes) -> "ScenarioConfig":
        from dataclasses import replace

        raw = copy.deepcopy(dict(self.raw))
        raw.setdefault("protocol", {}).update(changes)
        return replace(self, protocol=replace(self.protocol, **changes), raw=raw)

    def replace(self, **changes) -> "ScenarioConfig":
        from dataclasses import replace

        return replace(self, **changes)


def _merge(base: Any, over: Any) -> Any:
    if isinstance(base, dict) and isinstance(over, dict):
        out = dict(base)
        for k, v in over.items():
            if k == "plans" and isinstance(v, list) and isinstance(out.get(k), list):
                by_goal = {p["goal"]: p for p in out[k]}
                order = [p["goal"] for p in out[k]]
                for p in v:
                    if p["goal"] not in by_goal:
                        order.append(p["goal"])
                    by_goal[p["goal"]] = p
                out[k] = [by_goal[g] for g in order]
            else:
                out[k] = _merge(out.get(k), v)
        return out
    return copy.deepcopy(over)


def _read_json(path: Path | None, text: str, label: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, label, e.lineno) from None
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object", label)
    return data


def shipped_text(name: str) -> str:
    return resources.files("cprsim").joinpath("scenarios").joinpath(f"{name}.json").read_text()


def _resolve(data: dict, origin: Path | None, label: str, depth: int = 0) -> dict:
    if depth > 8:
        raise ConfigError("scenario inheritance too deep", label)
    base_name = data.get("base")
    if not base_name:
        return data
    if base_name in SHIPPED:
        base = _read_json(None, shipped_text(base_name), base_name)
        base = _resolve(base, None, base_name, depth + 1)
    else:
        p = (origin.parent if origin else Path.cwd()) / base_name
        try:
            base = _read_json(p, p.read_text(), str(p))
        except OSError as e:
            raise ConfigError(f"cannot read base scenario: {e}", label) from None
        base = _resolve(base, p, str(p), depth + 1)
    merged = _merge(base, {k: v for k, v in data.items() if k != "base"})
    merged.pop("base", None)
    return merged


def load_scenario(source: str | Path | Mapping) -> ScenarioConfig:
    """Load a scenario from a shipped name, a JSON file path, or an already-parsed mapping."""
    if isinstance(source, Mapping):
        data = _resolve(copy.deepcopy(dict(source)), None, "<dict>")
        return from_dict(data, "<dict>")
    s = str(source)
    if s in SHIPPED:
        data = _read_json(None, shipped_text(s), s)
        return from_dict(_resolve(data, None, s), s)
    path = Path(s)
    text = path.read_text()  # OSError propagates: an I/O failure, not a bad config
    data = _read_json(path, text, s)
    return from_dict(_resolve(data, path, s), s)


def _terms(items, label: str) -> tuple[Term, ...]:
    out = []
    for t in items or ():
        try:
            out.append(parse_term(t, allow_vars=False))
        except ParseError as e:
            raise ConfigError(f"{t!r}: {e}", label) from None
    return tuple(out)


def from_dict(data: Mapping, label: str = "<dict>") -> ScenarioConfig:
    try:
        team_d = data.get("team", {})
        members = tuple(Member(m["id"], Role(m["role"])) for m in team_d.get("members", ()))
        team = Team(members, make_matrix(team_d.get("capabilities")))
        team.validate()
        ids = set(team.ids)

        plans = tuple(Plan.from_dict(p) for p in data.get("plans", ()))
        rules = tuple(DesireRule.from_dict(r) for r in data.get("desire_rules", ()))
        imps = tuple(Implication.from_dict(i) for i in data.get("implications", ()))
        for thing in (*plans, *rules):
            unknown = (thing.agents or frozenset()) - ids
            if unknown:
                raise ConfigError(f"unknown agents {sorted(unknown)}", label)

        # domain actions need their own capability unless mapped otherwise
        act_caps = {a: a for a in sorted(DOMAIN_ACTIONS)} | dict(data.get("act_capabilities", {}))
        bad = {a for a, cap in act_caps.items() if cap is not None and cap not in DOMAIN_ACTIONS}
        if bad:
            raise ConfigError(f"acts mapped to unknown capabilities: {sorted(bad)}", label)

        sbar = None
        if data.get("sbar"):
            sb = data["sbar"]
            missing = [f for f in SBAR_FIELDS if not sb.get(f)]
            if missing:
                raise ConfigError(f"sbar missing {missing[0]}", label)
            sbar = tuple(parse_term(sb[f], allow_vars=False) for f in SBAR_FIELDS)

        init_beliefs = {}
        for agent, items in data.get("initial_beliefs", {}).items():
            if agent not in ids:
                raise ConfigError(f"initial beliefs for unknown agent {agent!r}", label)
            init_beliefs[agent] = _terms(items, label)

        agent_prios = {a: dict(p) for a, p in data.get("agent_priorities", {}).items()}
        if set(agent_prios) - ids:
            raise ConfigError(f"priorities for unknown agents {sorted(set(agent_prios) - ids)}", label)

        cfg = ScenarioConfig(
            name=data.get("name", label),
            team=team,
            plans=plans,
            rules=rules,
            implications=imps,
            priorities=dict(data.get("priorities", {})),
            agent_priorities=agent_prios,
            act_capabilities=act_caps,
            protocol=ProtocolConfig(**data.get("protocol", {})),
            outcome=OutcomeModel(**data.get("outcome", {})),
            sbar=sbar,  # type: ignore[arg-type]
            sbar_sender=data.get("sbar_sender", "paramedic"),
            initial_beliefs=init_beliefs,
            initial_patient=PatientState.from_dict(data.get("initial_patient", {})),
            max_ticks=int(data.get("max_ticks", 1800)),
            snapshot_interval=int(data.get("snapshot_interval", 30)),
            checkback_goals=frozenset(data.get("checkback_goals", ("shock", "inject"))),
            checkback_timeout=int(data.get("checkback_timeout", 10)),
            wait_timeout=int(data.get("wait_timeout", 20)),
            repetition_window=int(data.get("repetition_window", 30)),
            raw=copy.deepcopy(dict(data)),
        )
    except ConfigError:
        raise
    except (TeamError, PlanError, ParseError, TypeError, KeyError, ValueError) as e:
        raise ConfigError(f"{type(e).__name__}: {e}", label) from None
    if cfg.max_ticks < 1 or cfg.snapshot_interval < 1 or cfg.checkback_timeout < 1:
        raise ConfigError("max_ticks, snapshot_interval and checkback_timeout must be positive", label)
    if cfg.sbar_sender in ids:
        raise ConfigError("sbar_sender must be outside the team", label)
    return cfg


def validate(source: str | Path | Mapping) -> ScenarioConfig:
    return load_scenario(source)
