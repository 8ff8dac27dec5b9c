"""Discrete-time simulation of a resuscitation team around one patient.

Tick order: deliver last tick's messages, fire checkback deadlines, let each
agent (roster order) deliberate and take one step, advance the patient, run
the two-minute rhythm check, then test for termination.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

from .acl import ALL, Message, Performative, Term, dose_value, evolve, render_term, term
from .cognition import AgentMind, NoApplicablePlan, Source, deliberate, interpret, perceive, step, update_desires
from .cognition import Action, current_desire, origin_of
from .msa import CommReport, Deviation, MsaSnapshot, comm_metrics, protocol_deviations, snapshot, wrong_addressee_actions
from .patient import (
    RHYTHM_CHECK_INTERVAL,
    NonShockable,
    PatientState,
    Rhythm,
    SafetyViolation,
    UnknownDrug,
    administer_drug,
    apply_shock,
    record_rhythm_check,
    rhythm_check,
    rosc_probability,
    tick_patient,
)
from .protocols import ConvState, ConversationTable, Delivery, ProtocolConfig, apply_noise, open_checkback, sbar_messages
from .scenario import ScenarioConfig, load_scenario

TRANSCRIPT_SCHEMA = "cprsim.transcript/1"


def stream(seed: int, *parts) -> random.Random:
    """An independent, reproducible random stream keyed by seed and labels."""
    return random.Random("|".join(str(p) for p in (seed, *parts)))


def deliver(m: Message, roster: Sequence[str], cfg: ProtocolConfig, rng: random.Random) -> list[Delivery]:
    """Expand ``all`` to the roster minus the sender and pass each copy through the channel."""
    if m.broadcast:
        to = [a for a in roster if a != m.sender]
    else:
        to = [m.receiver] if m.receiver in roster else []
    return apply_noise(m, to, cfg, rng)


class LogOrderError(ValueError):
    pass


@dataclass
class EventLog:
    records: list[dict] = field(default_factory=list)

    def append(self, tick: int, kind: str, **payload) -> dict:
        if self.records and tick < self.records[-1]["tick"]:
            raise LogOrderError(f"tick {tick} after {self.records[-1]['tick']}")
        rec = {"tick": tick, "kind": kind, **payload}
        self.records.append(rec)
        return rec

    def of_kind(self, kind: str) -> Iterator[dict]:
        return (r for r in self.records if r["kind"] == kind)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str) -> "EventLog":
        return cls([json.loads(line) for line in text.splitlines() if line.strip()])

    def __len__(self):
        return len(self.records)


@dataclass
class RunResult:
    scenario: str
    seed: int
    reason: str
    patient: PatientState
    log: EventLog
    snapshots: list[MsaSnapshot]
    comm: CommReport
    deviations: list[Deviation]
    wrong_addressee: int

    @property
    def outcome(self) -> str:
        return self.patient.rhythm.value

    def to_json(self) -> str:
        doc = {**self.summary(), "patient": self.patient.to_dict(), "msa": [s.to_row() for s in self.snapshots]}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def summary(self) -> dict:
        p = self.patient
        ttc = self.comm.mean_time_to_confirmation
        scores = [s.score for s in self.snapshots]
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "outcome": p.rhythm.value,
            "rosc": int(p.rhythm is Rhythm.ROSC),
            "reason": self.reason,
            "ticks": p.elapsed_ticks,
            "no_flow_ticks": p.no_flow_ticks,
            "no_flow_fraction": round(p.no_flow_fraction, 6),
            "shocks": p.shocks_given,
            "adrenaline_mg": p.adrenaline_mg,
            "amiodarone": int(p.amiodarone_given),
            "rhythm_checks": p.rhythm_checks,
            "messages": self.comm.total,
            "repetitions": self.comm.repetitions,
            "resends": self.comm.resends,
            "mean_time_to_confirmation": "" if ttc is None else round(ttc, 6),
            "msa_mean": round(sum(scores) / len(scores), 6) if scores else "",
            "max_contradictions": max((len(s.contradictions) for s in self.snapshots), default=0),
            "deviations": len(self.deviations),
            "wrong_addressee_actions": self.wrong_addressee,
        }


class Simulation:
    def __init__(self, cfg: ScenarioConfig, seed: int):
        self.cfg = cfg
        self.seed = int(seed)
        self.proto = cfg.protocol
        team = cfg.team
        self.roster = team.ids
        self.leader = team.leader
        self.minds: dict[str, AgentMind] = {}
        for aid in self.roster:
            self.minds[aid] = AgentMind(
                id=aid,
                role=team.role_of(aid).value,
                capabilities=team.capabilities(aid),
                leader=self.leader,
                plan_library=cfg.plans,
                rules=cfg.rules,
                implications=cfg.implications,
                priorities={**cfg.priorities, **cfg.agent_priorities.get(aid, {})},
                act_capabilities=cfg.act_capabilities,
                flags=self.proto.flags,
                wait_timeout=cfg.wait_timeout,
                p_skip_confirmation=self.proto.p_skip_confirmation,
                rng=stream(self.seed, "agent", aid),
            )
        self.patient = cfg.initial_patient
        self.log = EventLog()
        self.pending: list[Message] = []
        self.convs = ConversationTable()
        self.alias: dict[int, int] = {}
        self.next_id = 1
        self.occurrence: Counter = Counter()
        self.snapshots: list[MsaSnapshot] = []
        self.leader_stop = False
        self.cpr_now = False
        self.tick = 0

    # -- bookkeeping ---------------------------------------------------------

    def _flush_journals(self, tick: int):
        for aid in self.roster:
            for rec in self.minds[aid].drain_journal():
                self.log.append(tick, "mind", **rec)

    def _header(self):
        cfg = self.cfg
        self.log.append(
            0,
            "header",
            schema=TRANSCRIPT_SCHEMA,
            seed=self.seed,
            scenario=cfg.name,
            agents=list(self.roster),
            protocol=self.proto.to_dict(),
            checkback_goals=sorted(cfg.checkback_goals),
            repetition_window=cfg.repetition_window,
            initial_patient=cfg.initial_patient.to_dict(),
            max_ticks=cfg.max_ticks,
        )

    def emit(self, m: Message, tick: int, resend_of: int | None = None) -> Message:
        if m.performative is Performative.REQUEST and not self.proto.directed_requests and m.receiver != ALL:
            m = evolve(m, receiver=ALL)
        m = evolve(m, id=self.next_id, tick=tick)
        self.next_id += 1
        rec = {"id": m.id, "sender": m.sender, "receiver": m.receiver, "performative": m.performative.value, "text": m.text()}
        if resend_of is not None:
            rec["resend_of"] = resend_of
        self.log.append(tick, "message_sent", **rec)
        if m.sender in self.minds:
            self.minds[m.sender].sent[m.id] = m
        if (
            resend_of is None
            and self.proto.checkback_enabled
            and m.performative is Performative.REQUEST
            and m.content.functor in self.cfg.checkback_goals
        ):
            self.convs.open(open_checkback(m, self.cfg.checkback_timeout))
        if m.performative in (Performative.CONFIRM, Performative.AGREE, Performative.REFUSE):
            for conv in self.convs.on_message(m, tick):
                self.log.append(tick, "checkback", conversation=conv.id, state=conv.state.value)
        self.pending.append(m)
        return m

    # -- phases --------------------------------------------------------------

    def _deliver(self, tick: int):
        # messages emitted at tick t are heard at t+1, the opening handoff included
        batch = [m for m in self.pending if m.tick < tick]
        self.pending = [m for m in self.pending if m.tick >= tick]
        for m in batch:
            key = f"{m.sender}|{m.performative.value}|{render_term(m.content)}"
            occ = self.occurrence[key]
            self.occurrence[key] += 1
            rng = stream(self.seed, "noise", key, occ)
            for d in deliver(m, self.roster, self.proto, rng):
                rec = {"id": m.id, "to": d.to, "heard": d.heard, "ambiguous": d.clarity.ambiguous_addressee, "incomplete": d.clarity.incomplete_content}
                if not d.heard:
                    rec["reason"] = "not_heard"
                self.log.append(tick, "delivery", **rec)
                if not d.heard:
                    continue
                mind = self.minds[d.to]
                # clarity flags were already sampled by the channel, so they resolve with certainty
                im = interpret(mind, d.delivered, rng, 1.0, 1.0)
                perceive(mind, im, tick)
            self._flush_journals(tick)

    def _deadlines(self, tick: int):
        for conv, what in self.convs.due(tick):
            if what == "resend":
                copy = self.emit(Message(conv.request.performative, conv.initiator, conv.request.receiver, conv.request.content), tick, resend_of=conv.id)
                self.alias[copy.id] = conv.id
            else:
                self.log.append(tick, "checkback", conversation=conv.id, state=conv.state.value)

    def gate(self, mind: AgentMind, action: Term) -> bool:
        """With checkback on, acts serving a checkback-goal request wait for the loop to close."""
        if not self.proto.checkback_enabled:
            return True
        it = mind.intention
        d = current_desire(mind)
        if it is None or d is None or it.goal.functor not in self.cfg.checkback_goals:
            return True
        origin, _ = origin_of(mind)
        if origin is None:
            return True
        conv = self.convs.get(self.alias.get(origin, origin))
        if conv is None:
            return True
        if conv.state is ConvState.CONFIRMED and conv.responder == mind.id:
            return True
        if not it.gate_checked:
            it.gate_checked = True
            p = self.proto.p_skip_confirmation
            it.gate_open = p > 0 and mind.rng.random() < p
            if it.gate_open:
                mind.journal.append({"agent": mind.id, "op": "skip_checkback", "term": render_term(action)})
        return it.gate_open

    def _deliberate(self, mind: AgentMind, tick: int):
        while True:
            try:
                deliberate(mind, tick)
                return
            except NoApplicablePlan as e:
                best = min(mind.desires.values(), key=lambda d: d.order_key())
                mind.unplannable.add(best.goal)
                mind.desires.pop(best.goal, None)
                self.log.append(tick, "deviation", type="no_applicable_plan", agent=mind.id, detail=str(e))

    def _post(self, agent: str, prop: Term, tick: int):
        mind = self.minds[agent]
        mind.add_belief(prop, True, Source.OWN_ACTION, tick)
        update_desires(mind, tick)

    def _act(self, a: Action, tick: int):
        name = a.term.functor
        rec = {"agent": a.agent, "action": name, "term": render_term(a.term), "origin_msg": a.origin_msg, "misaddressed": a.misaddressed}
        if name == "chest_compressions":
            rec["count"] = 2
        elif name == "ventilate":
            rec["count"] = 1
        self.log.append(tick, "action", **rec)
        p = self.patient
        if name in ("chest_compressions", "ventilate"):
            self.cpr_now = True
        elif name == "defibrillate":
            try:
                self.patient = apply_shock(p, self.cpr_now)
                self.log.append(tick, "patient_change", change="shock", agent=a.agent, shocks_given=self.patient.shocks_given)
            except SafetyViolation as e:
                self.log.append(tick, "deviation", type=e.kind, agent=a.agent, detail=rec["term"])
            except NonShockable:
                self.log.append(tick, "deviation", type="non_shockable", agent=a.agent, detail=p.rhythm.value)
        elif name == "inject_drug" and len(a.term.args) == 3:
            _, drug, dose = a.term.args
            try:
                mg, _unit = dose_value(str(dose))
                self.patient = administer_drug(p, str(drug), mg)
                self.log.append(tick, "patient_change", change="drug", agent=a.agent, drug=str(drug), dose_mg=mg, shocks_given=p.shocks_given)
            except (UnknownDrug, ValueError) as e:
                self.log.append(tick, "deviation", type="unknown_drug", agent=a.agent, detail=str(e))
        elif name == "intubate":
            self.patient = replace(p, intubated=True)
            self.log.append(tick, "patient_change", change="intubated", agent=a.agent)
        elif name == "order_stop":
            if p.eligible_for_termination:
                self.leader_stop = True
            else:
                self.log.append(tick, "deviation", type="premature_stop", agent=a.agent)
        elif name == "assess_rhythm" and p.rhythm.shockable:
            self._post(a.agent, term("shockable_rhythm", "patient", str(p.rhythm_checks + 1)), tick)

    def _agents(self, tick: int):
        self.cpr_now = False
        for aid in self.roster:
            mind = self.minds[aid]
            if mind.dirty or mind.intention is None:
                self._deliberate(mind, tick)
            out = step(mind, tick, self.gate)
            self._flush_journals(tick)
            if isinstance(out, Message):
                self.emit(out, tick)
            elif isinstance(out, Action):
                self._act(out, tick)
                self._flush_journals(tick)

    def _rhythm_check(self, tick: int):
        j = self.patient.rhythm_checks
        p = rosc_probability(self.patient, self.cfg.outcome)
        result = rhythm_check(self.patient, self.cfg.outcome, stream(self.seed, "patient", "check", j))
        self.patient = record_rhythm_check(self.patient, result, self.cfg.outcome)
        self.log.append(tick, "patient_change", change="rhythm_check", check=j + 1, result=result.value, p_rosc=round(p, 12))
        if result is Rhythm.ROSC:
            return
        if self.patient.eligible_for_termination:
            self._post(self.leader, term("futile", "patient"), tick)
        elif result.shockable:
            self._post(self.leader, term("shockable_rhythm", "patient", str(self.patient.rhythm_checks + 1)), tick)
        self._flush_journals(tick)

    # -- driver --------------------------------------------------------------

    def start(self):
        self._header()
        cfg = self.cfg
        for aid, props in cfg.initial_beliefs.items():
            mind = self.minds[aid]
            for prop in props:
                mind.add_belief(prop, True, Source.INITIAL, 0)
            update_desires(mind, 0)
        self._flush_journals(0)
        if cfg.sbar is not None:
            for m in sbar_messages(*cfg.sbar, cfg=self.proto, sender=cfg.sbar_sender):
                self.emit(m, 0)

    def run(self) -> RunResult:
        self.start()
        reason = "max_ticks"
        for tick in range(self.cfg.max_ticks):
            self.tick = tick
            self._deliver(tick)
            self._deadlines(tick)
            self._agents(tick)
            self.patient = tick_patient(self.patient, self.cpr_now)
            if self.patient.elapsed_ticks % RHYTHM_CHECK_INTERVAL == 0:
                self._rhythm_check(tick)
            if tick % self.cfg.snapshot_interval == 0:
                self.snapshots.append(snapshot(self.minds.values(), tick))
            if self.patient.rhythm is Rhythm.ROSC:
                reason = "rosc"
            elif self.leader_stop:
                self.patient = replace(self.patient, rhythm=Rhythm.DECEASED)
                reason = "leader_stop"
            else:
                continue
            self.log.append(tick, "patient_change", change="terminal", rhythm=self.patient.rhythm.value)
            break
        self.log.append(self.tick, "run_end", reason=reason, patient=self.patient.to_dict())
        return RunResult(
            self.cfg.name,
            self.seed,
            reason,
            self.patient,
            self.log,
            self.snapshots,
            comm_metrics(self.log, self.cfg.repetition_window, self.cfg.checkback_goals),
            protocol_deviations(self.log, self.proto.checkback_enabled, self.cfg.checkback_goals),
            wrong_addressee_actions(self.log),
        )


def run_scenario(cfg: ScenarioConfig | str, seed: int = 0, **overrides) -> RunResult:
    if not isinstance(cfg, ScenarioConfig):
        cfg = load_scenario(cfg)
    if overrides:
        cfg = cfg.replace(**overrides)
    return Simulation(cfg, seed).run()
