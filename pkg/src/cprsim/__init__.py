"""Agent-based simulation of communication in a cardiopulmonary resuscitation team."""

from .acl import Message, Performative, Term, match, parse_message, parse_term, render_message, render_term, term
from .engine import EventLog, RunResult, Simulation, run_scenario
from .scenario import ConfigError, ScenarioConfig, load_scenario

__all__ = [
    "ConfigError",
    "EventLog",
    "Message",
    "Performative",
    "RunResult",
    "ScenarioConfig",
    "Simulation",
    "Term",
    "load_scenario",
    "match",
    "parse_message",
    "parse_term",
    "render_message",
    "render_term",
    "run_scenario",
    "term",
]
