"""Mutual situation awareness metrics, communication metrics and protocol deviations.

Everything here can be computed either from live minds or from a replayed
event log, so a transcript on disk is enough to re-derive a run's metrics.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .acl import Term, parse_message, parse_term, render_term

CPR_ACTS = frozenset({"chest_compressions", "ventilate"})
REPLY_PERFS = frozenset({"confirm", "agree"})

BeliefSet = frozenset  # of (proposition, polarity)


@lru_cache(maxsize=65536)
def _parsed(text: str):
    return parse_message(text)


def _msg(r: dict):
    m = _parsed(r["text"])
    return _Sent(r["id"], r["tick"], m.performative.value, m.sender, m.receiver, m.content)


@dataclass(frozen=True)
class _Sent:
    id: int
    tick: int
    performative: str
    sender: str
    receiver: str
    content: Term


@dataclass(frozen=True)
class MsaSnapshot:
    tick: int
    shared: frozenset
    union: frozenset
    score: float
    per_agent_missing: Mapping[str, frozenset]
    shared_intentions: frozenset = frozenset()
    contradictions: tuple = ()

    def to_row(self) -> dict:
        return {
            "tick": self.tick,
            "score": round(self.score, 6),
            "shared": len(self.shared),
            "union": len(self.union),
            "contradictions": len(self.contradictions),
            "missing": sum(len(v) for v in self.per_agent_missing.values()),
        }


def belief_set(mind) -> BeliefSet:
    return frozenset((p, b.polarity) for p, b in mind.beliefs.items())


def snapshot_sets(sets: Mapping[str, BeliefSet], tick: int, intentions: Mapping[str, Term | None] | None = None) -> MsaSnapshot:
    """Jaccard agreement of the agents' (proposition, polarity) sets."""
    agents = sorted(sets)
    if agents:
        union = frozenset().union(*sets.values())
        shared = frozenset.intersection(*(frozenset(sets[a]) for a in agents))
    else:
        union = shared = frozenset()
    score = 1.0 if not union else len(shared) / len(union)
    held: Counter = Counter()
    for a in agents:
        held.update(sets[a])
    missing = {}
    for a in agents:
        mine = sets[a]
        # held by at least two other agents but not by this one
        missing[a] = frozenset(x for x, n in held.items() if x not in mine and n >= 2)
    ints = intentions or {}
    goals = [ints.get(a) for a in agents]
    shared_int = frozenset(goals[0:1]) if goals and goals[0] is not None and all(g == goals[0] for g in goals) else frozenset()
    return MsaSnapshot(tick, shared, union, score, missing, shared_int, tuple(contradictions_in(sets)))


def snapshot(minds: Iterable, tick: int) -> MsaSnapshot:
    minds = list(minds)
    sets = {m.id: belief_set(m) for m in minds}
    ints = {m.id: (m.intention.goal if m.intention else None) for m in minds}
    snap = snapshot_sets(sets, tick, ints)
    if snap.contradictions:
        snap = replace(snap, contradictions=tuple(find_contradictions(minds)))
    return snap


@dataclass(frozen=True)
class Contradiction:
    proposition: Term
    holders_true: tuple[str, ...]
    holders_false: tuple[str, ...]
    first_tick: int | None = None


def contradictions_in(sets: Mapping[str, BeliefSet], ticks: Mapping[str, Mapping[Term, int]] | None = None) -> list[Contradiction]:
    """Propositions held true by some agents and false by others.

    ``ticks`` (agent -> proposition -> acquisition tick) dates each
    contradiction at the moment both sides were first present.
    """
    pos: dict[Term, list[str]] = defaultdict(list)
    neg: dict[Term, list[str]] = defaultdict(list)
    for a in sorted(sets):
        for prop, pol in sets[a]:
            (pos if pol else neg)[prop].append(a)
    out = []
    for p in pos:
        if p not in neg:
            continue
        first = None
        if ticks is not None:
            t_true = min(ticks[a][p] for a in pos[p])
            t_false = min(ticks[a][p] for a in neg[p])
            first = max(t_true, t_false)
        out.append(Contradiction(p, tuple(sorted(pos[p])), tuple(sorted(neg[p])), first))
    return sorted(out, key=lambda c: render_term(c.proposition))


def find_contradictions(minds: Iterable) -> list[Contradiction]:
    minds = list(minds)
    ticks = {m.id: {p: b.acquired_tick for p, b in m.beliefs.items()} for m in minds}
    return contradictions_in({m.id: belief_set(m) for m in minds}, ticks)


# -- event-log derived metrics -----------------------------------------------


def _records(log) -> Sequence[dict]:
    return log.records if hasattr(log, "records") else log


def _header(log) -> dict:
    for r in _records(log):
        if r["kind"] == "header":
            return r
    return {}


@dataclass(frozen=True)
class CommReport:
    total: int = 0
    by_performative: Mapping[str, int] = field(default_factory=dict)
    by_sender: Mapping[str, int] = field(default_factory=dict)
    repetitions: int = 0
    resends: int = 0
    confirmation_times: tuple[int, ...] = ()

    @property
    def mean_time_to_confirmation(self) -> float | None:
        if not self.confirmation_times:
            return None
        return sum(self.confirmation_times) / len(self.confirmation_times)


def comm_metrics(log, window: int | None = None, checkback_goals: Iterable[str] | None = None) -> CommReport:
    head = _header(log)
    if window is None:
        window = head.get("repetition_window", 30)
    goals = frozenset(checkback_goals if checkback_goals is not None else head.get("checkback_goals", ("shock", "inject")))
    by_perf: Counter = Counter()
    by_sender: Counter = Counter()
    last_seen: dict[tuple, int] = {}
    reps = resends = 0
    sent = []
    for r in _records(log):
        if r["kind"] != "message_sent":
            continue
        m = _msg(r)
        sent.append(m)
        by_perf[m.performative] += 1
        by_sender[m.sender] += 1
        if r.get("resend_of") is not None:
            resends += 1
        key = (m.sender, m.performative, m.content)
        prev = last_seen.get(key)
        if prev is not None and m.tick - prev <= window:
            reps += 1
        last_seen[key] = m.tick
    times = []
    for i, m in enumerate(sent):
        if m.performative != "request" or m.content.functor not in goals:
            continue
        actor = m.content.actor
        ready = Term("ready", (actor, m.content)) if isinstance(actor, str) else None
        for reply in sent[i + 1 :]:
            if (
                reply.performative in REPLY_PERFS
                and reply.receiver == m.sender
                and reply.sender == actor
                and (reply.content == m.content or reply.content == ready)
            ):
                times.append(reply.tick - m.tick)
                break
    return CommReport(len(sent), dict(sorted(by_perf.items())), dict(sorted(by_sender.items())), reps, resends, tuple(times))


@dataclass(frozen=True)
class Deviation:
    kind: str
    tick: int
    agent: str | None = None
    detail: str = ""


def _cpr_ratio_deviations(actions: list[dict], tolerance: int = 1) -> list[Deviation]:
    """Judge each uninterrupted compression/ventilation cycle against 30:2.

    A cycle is a run of compressions followed by ventilations and then more
    compressions on the very next tick. Any tick without CPR by the agent
    interrupts the cycle and it is not judged.
    """
    out = []
    by_agent: dict[str, list[tuple[int, str, int]]] = defaultdict(list)
    for r in actions:
        name = r["action"]
        if name in CPR_ACTS:
            by_agent[r["agent"]].append((r["tick"], name, int(r.get("count", 1))))
    for agent, seq in sorted(by_agent.items()):
        comps = vents = 0
        last_tick = None
        start = None
        for tick, name, n in seq:
            if last_tick is not None and tick != last_tick + 1:
                comps = vents = 0
                start = None
            if name == "chest_compressions":
                if vents:
                    if abs(comps - 30) > tolerance or vents != 2:
                        out.append(Deviation("RatioDrift", start if start is not None else tick, agent, f"{comps}:{vents}"))
                    comps = vents = 0
                    start = None
                if start is None:
                    start = tick
                comps += n
            else:
                vents += n
            last_tick = tick
    return out


def protocol_deviations(log, checkback_enabled: bool | None = None, checkback_goals: Iterable[str] | None = None) -> list[Deviation]:
    head = _header(log)
    if checkback_enabled is None:
        checkback_enabled = bool(head.get("protocol", {}).get("checkback_enabled", False))
    goals = frozenset(checkback_goals if checkback_goals is not None else head.get("checkback_goals", ("shock", "inject")))
    out: list[Deviation] = []
    shocks = 0
    cpr_ticks: dict[int, set[str]] = defaultdict(set)
    actions = []
    messages: dict[int, dict] = {}
    replies: list[dict] = []
    for r in _records(log):
        kind = r["kind"]
        if kind == "header":
            shocks = int(r.get("initial_patient", {}).get("shocks_given", 0))
        elif kind == "patient_change":
            if r["change"] == "shock":
                shocks += 1
            elif r["change"] == "drug":
                need = {"adrenaline": 3, "amiodarone": 4}.get(r["drug"], 0)
                if shocks < need:
                    out.append(Deviation("DrugTooEarly", r["tick"], r.get("agent"), r["drug"]))
        elif kind == "action":
            actions.append(r)
            if r["action"] in CPR_ACTS:
                cpr_ticks[r["tick"]].add(r["agent"])
            elif r["action"] == "defibrillate" and cpr_ticks.get(r["tick"]):
                out.append(Deviation("ShockDuringCompressions", r["tick"], r["agent"]))
            if checkback_enabled and r.get("origin_msg") is not None:
                req = messages.get(r["origin_msg"])
                if req is not None and _needs_confirmation(req, goals):
                    if not _confirmed(req, r["agent"], r["tick"], replies):
                        out.append(Deviation("ActionWithoutConfirmation", r["tick"], r["agent"], r["term"]))
        elif kind == "message_sent":
            m = _msg(r)
            messages[r["id"]] = {"msg": m, "resend_of": r.get("resend_of")}
            if m.performative in REPLY_PERFS:
                replies.append({"msg": m})
    out.extend(_cpr_ratio_deviations(actions))
    return sorted(out, key=lambda d: (d.tick, d.kind, d.agent or ""))


def _needs_confirmation(req: dict, goals: frozenset) -> bool:
    m = req["msg"]
    return m.performative == "request" and m.content.functor in goals


def _confirmed(req: dict, agent: str, tick: int, replies: list[dict]) -> bool:
    m = req["msg"]
    ready = Term("ready", (agent, m.content))
    for rep in replies:
        r = rep["msg"]
        if r.sender == agent and r.receiver == m.sender and r.tick <= tick and (r.content == m.content or r.content == ready):
            return True
    return False


def wrong_addressee_actions(log) -> int:
    return sum(1 for r in _records(log) if r["kind"] == "action" and r.get("misaddressed"))


def replay_no_flow(log) -> int:
    """No-flow ticks reconstructed from the log: elapsed ticks minus ticks with any CPR act."""
    elapsed = None
    start = start_elapsed = 0
    cpr = set()
    for r in _records(log):
        if r["kind"] == "header":
            start = int(r.get("initial_patient", {}).get("no_flow_ticks", 0))
            start_elapsed = int(r.get("initial_patient", {}).get("elapsed_ticks", 0))
        elif r["kind"] == "action" and r["action"] in CPR_ACTS:
            cpr.add(r["tick"])
        elif r["kind"] == "run_end":
            elapsed = int(r["patient"]["elapsed_ticks"])
    if elapsed is None:
        raise ValueError("log has no run_end record")
    return start + (elapsed - start_elapsed) - len(cpr)


def replay_belief_sets(log, upto_tick: int | None = None) -> dict[str, BeliefSet]:
    """Rebuild every agent's belief base from the mind journal records."""
    sets: dict[str, dict[Term, bool]] = defaultdict(dict)
    head = _header(log)
    for a in head.get("agents", ()):
        sets[a]
    for r in _records(log):
        if upto_tick is not None and r["tick"] > upto_tick:
            break
        if r["kind"] != "mind":
            continue
        if r["op"] == "believe":
            sets[r["agent"]][parse_term(r["term"], allow_vars=False)] = bool(r["polarity"])
        elif r["op"] == "retract":
            sets[r["agent"]].pop(parse_term(r["term"], allow_vars=False), None)
    return {a: frozenset(d.items()) for a, d in sets.items()}


def pairwise_agreement(sets: Mapping[str, BeliefSet]) -> float:
    """Mean pairwise Jaccard; reported alongside the whole-team score."""
    pairs = list(combinations(sorted(sets), 2))
    if not pairs:
        return 1.0
    tot = 0.0
    for a, b in pairs:
        u = sets[a] | sets[b]
        tot += 1.0 if not u else len(sets[a] & sets[b]) / len(u)
    return tot / len(pairs)
