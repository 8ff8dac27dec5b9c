"""Belief-desire-intention cycle layered on the three situation-awareness levels.

Perception (level 1) turns delivered messages into beliefs; comprehension
(level 2) regenerates desires from desire rules over the belief base;
projection (level 3) commits to the highest-priority desire and works through
a plan from the plan library, one costly step per tick.

Plan steps are written as text::

    act charge_defibrillator(?self)
    send query_if(physician, inject(?self, ?drug, ?dose))
    wait inject(?self, ?drug, ?dose) within 30
    pause 2
    note shocks_ordered(?k)
    answer
    send inform(all, shock(nurse, patient)) if callout

``?self`` and ``?leader`` are bound by the agent; every other variable must
appear in the plan's goal pattern. A trailing ``if FLAG`` / ``unless FLAG``
keeps the step only when the protocol flag is on / off.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping

from .acl import (
    ALL,
    Arg,
    Message,
    Performative,
    Term,
    _match,
    is_ground,
    match,
    parse_term,
    render_term,
    replace_atom,
    substitute,
    term,
    variables,
)

BUILTIN_VARS = frozenset({"?self", "?leader"})
OBLIGATIONS = frozenset({"asked", "asked_if", "unclear"})
DEFAULT_WAIT_TIMEOUT = 20


class Source(str, Enum):
    PERCEIVED_MESSAGE = "perceived_message"
    OWN_ACTION = "own_action"
    INITIAL = "initial"


class NoApplicablePlan(LookupError):
    pass


class CapabilityViolation(PermissionError):
    pass


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class Belief:
    proposition: Term
    polarity: bool
    source: Source
    acquired_tick: int


@dataclass(frozen=True)
class Desire:
    goal: Term
    priority: int
    origin: Term
    acquired_tick: int
    triggers: tuple[Term, ...] = ()

    def order_key(self):
        return (-self.priority, self.acquired_tick, render_term(self.goal))


# -- plans -------------------------------------------------------------------


@dataclass(frozen=True)
class Act:
    action: Term


@dataclass(frozen=True)
class Send:
    performative: Performative
    receiver: str
    content: Term


@dataclass(frozen=True)
class Wait:
    condition: Term
    timeout: int | None = None


@dataclass(frozen=True)
class Pause:
    ticks: int


@dataclass(frozen=True)
class Note:
    proposition: Term


@dataclass(frozen=True)
class Answer:
    pass


Step = Act | Send | Wait | Pause | Note | Answer


@dataclass(frozen=True)
class PlanStep:
    step: Step
    guard: tuple[str, bool] | None = None
    text: str = ""


def _step_terms(s: Step) -> list[Arg]:
    if isinstance(s, Act):
        return [s.action]
    if isinstance(s, Send):
        return [s.receiver, s.content]
    if isinstance(s, Wait):
        return [s.condition]
    if isinstance(s, Note):
        return [s.proposition]
    return []


def parse_step(text: str) -> PlanStep:
    body = text.strip()
    guard = None
    for kw, want in ((" if ", True), (" unless ", False)):
        if kw in body:
            body, flag = body.rsplit(kw, 1)
            guard = (flag.strip(), want)
            break
    verb, _, rest = body.strip().partition(" ")
    rest = rest.strip()
    try:
        if verb == "act":
            step: Step = Act(parse_term(rest))
        elif verb == "send":
            t = parse_term(rest)
            if len(t.args) != 2 or not isinstance(t.args[0], str) or not isinstance(t.args[1], Term):
                raise PlanError(f"send needs (receiver, term): {text!r}")
            step = Send(Performative(t.functor), t.args[0], t.args[1])
        elif verb == "wait":
            timeout = None
            if " within " in rest:
                rest, n = rest.rsplit(" within ", 1)
                timeout = int(n)
            step = Wait(parse_term(rest), timeout)
        elif verb == "pause":
            step = Pause(int(rest))
        elif verb == "note":
            step = Note(parse_term(rest))
        elif verb == "answer" and not rest:
            step = Answer()
        else:
            raise PlanError(f"unknown plan step {text!r}")
    except ValueError as e:
        if isinstance(e, PlanError):
            raise
        raise PlanError(f"bad plan step {text!r}: {e}") from e
    return PlanStep(step, guard, text.strip())


@dataclass(frozen=True)
class Plan:
    goal_pattern: Term
    steps: tuple[PlanStep, ...]
    repeat: bool = False
    agents: frozenset[str] | None = None

    def __post_init__(self):
        if not self.steps:
            raise PlanError(f"plan for {self.goal_pattern} has no steps")
        allowed = variables(self.goal_pattern) | BUILTIN_VARS
        for ps in self.steps:
            for t in _step_terms(ps.step):
                free = variables(t) - allowed
                if free:
                    raise PlanError(f"{ps.text!r} uses unbound {sorted(free)}")

    @classmethod
    def from_dict(cls, d: Mapping) -> "Plan":
        agents = d.get("agents")
        return cls(
            parse_term(d["goal"]),
            tuple(parse_step(s) for s in d["steps"]),
            bool(d.get("repeat", False)),
            frozenset(agents) if agents else None,
        )

    def applies_to(self, agent_id: str) -> bool:
        return self.agents is None or agent_id in self.agents


@dataclass(frozen=True)
class DesireRule:
    """``when`` beliefs all held (and no ``unless`` belief held) => desire ``goal``."""

    when: tuple[Term, ...]
    goal: Term
    unless: tuple[Term, ...] = ()
    priority: int | None = None
    agents: frozenset[str] | None = None

    @classmethod
    def from_dict(cls, d: Mapping) -> "DesireRule":
        agents = d.get("agents")
        return cls(
            tuple(parse_term(w) for w in d.get("when", ())),
            parse_term(d["desire"]),
            tuple(parse_term(u) for u in d.get("unless", ())),
            d.get("priority"),
            frozenset(agents) if agents else None,
        )


@dataclass(frozen=True)
class Implication:
    """Comprehension rule: hearing content matching ``source`` also yields belief ``target``."""

    source: Term
    target: Term

    @classmethod
    def from_dict(cls, d: Mapping) -> "Implication":
        return cls(parse_term(d["from"]), parse_term(d["to"]))


BUILTIN_RULES = (
    DesireRule((term("asked_if", "?s", "?p"),), term("answer", "?s", "?p")),
    DesireRule((term("unclear", "?m", "?s"),), term("clarify", "?m", "?s")),
)
BUILTIN_PLANS = (
    Plan(term("answer", "?s", "?p"), (PlanStep(Answer(), text="answer"),)),
    Plan(
        term("clarify", "?m", "?s"),
        (parse_step("send query_if(?s, unclear(?m, ?s))"),),
    ),
)
BUILTIN_PRIORITIES = {"answer": 9, "clarify": 8}


@dataclass
class Intention:
    goal: Term
    plan: tuple[Step, ...]
    repeat: bool = False
    program_counter: int = 0
    waited: int = 0
    skip_checked: bool = False
    gate_checked: bool = False
    gate_open: bool = False

    def reset_step(self):
        self.waited = 0
        self.skip_checked = False


@dataclass(frozen=True)
class Action:
    """A domain act emitted by an agent."""

    agent: str
    term: Term
    origin_msg: int | None = None
    misaddressed: bool = False

    @property
    def name(self) -> str:
        return self.term.functor


@dataclass
class BeliefDelta:
    added: list[Belief] = field(default_factory=list)
    replaced: list[Belief] = field(default_factory=list)
    removed: list[Term] = field(default_factory=list)
    desires: "DesireDelta | None" = None

    def __bool__(self):
        return bool(self.added or self.replaced or self.removed)


@dataclass
class DesireDelta:
    added: list[Desire] = field(default_factory=list)
    removed: list[Desire] = field(default_factory=list)

    def __bool__(self):
        return bool(self.added or self.removed)


@dataclass(frozen=True)
class InterpretedMessage:
    message: Message
    content: Term
    misaddressed: bool = False
    unclear: bool = False


class _Unchanged:
    def __repr__(self):
        return "Unchanged"


Unchanged = _Unchanged()


@dataclass
class AgentMind:
    id: str
    role: str
    capabilities: frozenset[str] = frozenset()
    leader: str = "physician"
    plan_library: tuple[Plan, ...] = ()
    rules: tuple[DesireRule, ...] = ()
    implications: tuple[Implication, ...] = ()
    priorities: Mapping[str, int] = field(default_factory=dict)
    act_capabilities: Mapping[str, str | None] = field(default_factory=dict)
    flags: Mapping[str, bool] = field(default_factory=dict)
    wait_timeout: int = DEFAULT_WAIT_TIMEOUT
    p_skip_confirmation: float = 0.0
    rng: random.Random = field(default_factory=lambda: random.Random(0))

    beliefs: dict[Term, Belief] = field(default_factory=dict)
    desires: dict[Term, Desire] = field(default_factory=dict)
    intention: Intention | None = None
    origin_msg: dict[Term, int] = field(default_factory=dict)
    misaddressed: set[Term] = field(default_factory=set)
    sent: dict[int, Message] = field(default_factory=dict)
    unplannable: set[Term] = field(default_factory=set)
    journal: list[dict] = field(default_factory=list)
    dirty: bool = True
    _by_functor: dict[str, set[Term]] = field(default_factory=dict)

    def __post_init__(self):
        rules = tuple(r for r in self.rules if r.agents is None or self.id in r.agents) + BUILTIN_RULES
        # ?self and ?leader never change for this agent, so bind them once
        bb = self.builtin_binding
        self.rules = tuple(
            DesireRule(
                tuple(substitute(w, bb) for w in r.when),  # type: ignore[misc]
                substitute(r.goal, bb),  # type: ignore[arg-type]
                tuple(substitute(u, bb) for u in r.unless),  # type: ignore[misc]
                r.priority,
                r.agents,
            )
            for r in rules
        )
        self.plan_library = tuple(p for p in self.plan_library if p.applies_to(self.id)) + BUILTIN_PLANS
        self.priorities = {**BUILTIN_PRIORITIES, **dict(self.priorities)}

    @property
    def builtin_binding(self) -> dict[str, Arg]:
        return {"?self": self.id, "?leader": self.leader}

    def believes(self, prop: Term, polarity: bool = True) -> bool:
        b = self.beliefs.get(prop)
        return b is not None and b.polarity == polarity

    def positive(self, functor: str) -> Iterable[Term]:
        return [p for p in self._by_functor.get(functor, ()) if self.beliefs[p].polarity]

    # -- belief base (single writer: the owning agent's cycle) ---------------

    def add_belief(self, prop: Term, polarity: bool, source: Source, tick: int, delta: BeliefDelta | None = None) -> bool:
        if not is_ground(prop):
            raise ValueError(f"belief must be ground: {prop}")
        old = self.beliefs.get(prop)
        if old is not None and old.polarity == polarity:
            return False
        b = Belief(prop, polarity, source, tick)
        self.beliefs[prop] = b
        self._by_functor.setdefault(prop.functor, set()).add(prop)
        if delta is not None:
            (delta.replaced if old is not None else delta.added).append(b)
        self.journal.append({"agent": self.id, "op": "believe", "term": render_term(prop), "polarity": polarity, "source": source.value})
        return True

    def retract(self, prop: Term, delta: BeliefDelta | None = None) -> bool:
        if prop not in self.beliefs:
            return False
        del self.beliefs[prop]
        self._by_functor[prop.functor].discard(prop)
        self.origin_msg.pop(prop, None)
        self.misaddressed.discard(prop)
        if delta is not None:
            delta.removed.append(prop)
        self.journal.append({"agent": self.id, "op": "retract", "term": render_term(prop)})
        return True

    def drain_journal(self) -> list[dict]:
        out, self.journal = self.journal, []
        return out


def _split_polarity(t: Term) -> tuple[Term, bool]:
    if t.functor == "not" and len(t.args) == 1 and isinstance(t.args[0], Term):
        return t.args[0], False
    return t, True


def _content_props(content: Term) -> list[Term]:
    if content.functor == "sbar" and len(content.args) == 4 and all(isinstance(a, Term) for a in content.args):
        return list(content.args)  # type: ignore[arg-type]
    return [content]


def interpret(
    mind: AgentMind,
    m: Message,
    rng: random.Random,
    p_misaddress: float,
    p_misread: float,
) -> InterpretedMessage:
    """Resolve a delivered message's clarity flags from the hearer's point of view.

    An ambiguously addressed broadcast that names another agent as actor is
    taken as addressed to the hearer with probability ``p_misaddress``; content
    flagged incomplete is not understood with probability ``p_misread``.
    """
    content = m.content
    misaddressed = unclear = False
    if m.clarity.ambiguous_addressee:
        draw = rng.random()
        actor = content.actor
        if (
            m.receiver == ALL
            and isinstance(actor, str)
            and actor not in (mind.id, ALL, "patient")
            and not actor[0].isdigit()
            and draw < p_misaddress
        ):
            content = replace_atom(content, actor, mind.id)  # type: ignore[assignment]
            misaddressed = True
    if m.clarity.incomplete_content:
        unclear = rng.random() < p_misread
    return InterpretedMessage(m, content, misaddressed, unclear)


def perceive(mind: AgentMind, delivered: Message | InterpretedMessage, tick: int) -> BeliefDelta:
    im = delivered if isinstance(delivered, InterpretedMessage) else InterpretedMessage(delivered, delivered.content)
    m = im.message
    delta = BeliefDelta()
    src = Source.PERCEIVED_MESSAGE
    if im.unclear:
        mind.add_belief(term("unclear", str(m.id), m.sender), True, src, tick, delta)
    else:
        perf = m.performative
        c = im.content
        if perf in (Performative.INFORM, Performative.CONFIRM):
            for p in _content_props(c):
                prop, pol = _split_polarity(p)
                mind.add_belief(prop, pol, src, tick, delta)
            _apply_implications(mind, c, tick, delta)
        elif perf is Performative.REQUEST:
            prop = term("asked", m.sender, c)
            if mind.add_belief(prop, True, src, tick, delta):
                mind.origin_msg[prop] = m.id
                if im.misaddressed:
                    mind.misaddressed.add(prop)
            _apply_implications(mind, c, tick, delta)
        elif perf is Performative.QUERY_IF:
            mind.add_belief(term("asked_if", m.sender, c), True, src, tick, delta)
        elif perf is Performative.AGREE:
            mind.add_belief(term("agreed", m.sender, c), True, src, tick, delta)
        elif perf is Performative.REFUSE:
            mind.add_belief(term("refused", m.sender, c), True, src, tick, delta)
    delta.desires = update_desires(mind, tick) if delta else DesireDelta()
    return delta


def _apply_implications(mind: AgentMind, content: Term, tick: int, delta: BeliefDelta):
    for imp in mind.implications:
        b = match(imp.source, content)
        if b is not None:
            t = substitute(imp.target, b)
            if isinstance(t, Term) and is_ground(t):
                mind.add_belief(t, True, Source.PERCEIVED_MESSAGE, tick, delta)


def _solve(mind: AgentMind, patterns: tuple[Term, ...], binding: dict) -> Iterable[dict]:
    if not patterns:
        yield binding
        return
    first, rest = patterns[0], patterns[1:]
    pat = substitute(first, binding)
    if isinstance(pat, Term) and is_ground(pat):
        if mind.believes(pat):
            yield from _solve(mind, rest, binding)
        return
    for prop in sorted(mind.positive(first.functor), key=render_term):
        b = dict(binding)
        if _match(pat, prop, b):
            yield from _solve(mind, rest, b)


def wanted_desires(mind: AgentMind) -> dict[Term, tuple[int, Term, tuple[Term, ...]]]:
    wanted: dict[Term, tuple[int, Term, tuple[Term, ...]]] = {}
    index = mind._by_functor
    for rule in mind.rules:
        if any(not index.get(w.functor) for w in rule.when):
            continue
        for b in _solve(mind, rule.when, {}):
            if any(next(_solve(mind, (u,), b), None) is not None for u in rule.unless):
                continue
            goal = substitute(rule.goal, b)
            if not isinstance(goal, Term) or not is_ground(goal) or goal in mind.unplannable:
                continue
            triggers = tuple(substitute(w, b) for w in rule.when)
            prio = rule.priority if rule.priority is not None else mind.priorities.get(goal.functor, 1)
            origin = triggers[0] if triggers else goal
            if goal not in wanted or prio > wanted[goal][0]:
                wanted[goal] = (prio, origin, triggers)  # type: ignore[assignment]
    return wanted


def update_desires(mind: AgentMind, tick: int, wanted: dict | None = None) -> DesireDelta:
    if wanted is None:
        wanted = wanted_desires(mind)
    delta = DesireDelta()
    for goal in sorted(set(mind.desires) - set(wanted), key=render_term):
        d = mind.desires.pop(goal)
        delta.removed.append(d)
        mind.journal.append({"agent": mind.id, "op": "drop_desire", "term": render_term(goal)})
    for goal in sorted(set(wanted) - set(mind.desires), key=render_term):
        prio, origin, triggers = wanted[goal]
        d = Desire(goal, prio, origin, tick, triggers)
        mind.desires[goal] = d
        delta.added.append(d)
        mind.journal.append({"agent": mind.id, "op": "desire", "term": render_term(goal), "priority": prio})
    if delta:
        mind.dirty = True
    return delta


def find_plan(mind: AgentMind, goal: Term) -> tuple[Plan, dict] | None:
    for plan in mind.plan_library:
        b = match(plan.goal_pattern, goal, mind.builtin_binding)
        if b is not None:
            return plan, b
    return None


def instantiate(mind: AgentMind, plan: Plan, binding: dict) -> tuple[Step, ...]:
    steps: list[Step] = []
    for ps in plan.steps:
        if ps.guard is not None and bool(mind.flags.get(ps.guard[0], False)) != ps.guard[1]:
            continue
        s = ps.step
        if isinstance(s, Act):
            s = Act(substitute(s.action, binding))  # type: ignore[arg-type]
        elif isinstance(s, Send):
            s = Send(s.performative, substitute(s.receiver, binding), substitute(s.content, binding))  # type: ignore[arg-type]
        elif isinstance(s, Wait):
            s = Wait(substitute(s.condition, binding), s.timeout)  # type: ignore[arg-type]
        elif isinstance(s, Note):
            s = Note(substitute(s.proposition, binding))  # type: ignore[arg-type]
        steps.append(s)
    return tuple(steps)


def _drop_intention(mind: AgentMind, reason: str):
    if mind.intention is not None:
        mind.journal.append({"agent": mind.id, "op": "drop_intention", "term": render_term(mind.intention.goal), "reason": reason})
        mind.intention = None
        mind.dirty = True


def deliberate(mind: AgentMind, tick: int) -> Intention | _Unchanged | None:
    """Commit to the maximal desire; a running intention yields only to a strictly higher priority."""
    mind.dirty = False
    cur = mind.intention
    if cur is not None and cur.goal not in mind.desires:
        _drop_intention(mind, "desire_retracted")
        cur = None
    if not mind.desires:
        return None if cur is None else Unchanged
    best = min(mind.desires.values(), key=Desire.order_key)
    if cur is not None:
        if best.priority <= mind.desires[cur.goal].priority:
            return Unchanged
        _drop_intention(mind, "preempted")
    found = find_plan(mind, best.goal)
    if found is None:
        raise NoApplicablePlan(render_term(best.goal))
    plan, binding = found
    steps = instantiate(mind, plan, binding)
    if not steps:
        raise NoApplicablePlan(render_term(best.goal))
    mind.intention = Intention(best.goal, steps, plan.repeat)
    mind.journal.append({"agent": mind.id, "op": "intend", "term": render_term(best.goal)})
    return mind.intention


def current_desire(mind: AgentMind) -> Desire | None:
    return mind.desires.get(mind.intention.goal) if mind.intention else None


def _finish(mind: AgentMind, tick: int, op: str):
    """Close the current intention and discharge the beliefs that triggered it."""
    d = current_desire(mind)
    goal = mind.intention.goal if mind.intention else None
    mind.journal.append({"agent": mind.id, "op": op, "term": render_term(goal) if goal else ""})
    mind.intention = None
    mind.dirty = True
    if d is not None:
        if not d.triggers:
            mind.desires.pop(d.goal, None)
    wanted = None
    if d is not None:
        triggers = d.triggers
        # several rules may yield the same goal; discharge each of them
        while triggers:
            for t in triggers:
                mind.retract(t)
            wanted = wanted_desires(mind)
            again = wanted.get(d.goal)
            triggers = again[2] if again else ()
    update_desires(mind, tick, wanted)


def _answer(mind: AgentMind, goal: Term, tick: int) -> Message:
    asker, prop = goal.args
    assert isinstance(asker, str) and isinstance(prop, Term)
    if prop.functor == "unclear" and len(prop.args) == 2 and prop.args[1] == mind.id:
        original = mind.sent.get(int(prop.args[0]))  # type: ignore[arg-type]
        if original is not None:
            return Message(original.performative, mind.id, asker, original.content, tick=tick)
    if _holds(mind, prop):
        return Message(Performative.CONFIRM, mind.id, asker, prop, tick=tick)
    # unknown or false: refuse
    return Message(Performative.REFUSE, mind.id, asker, prop, tick=tick)


def _holds(mind: AgentMind, prop: Term) -> bool:
    if mind.believes(prop) or mind.believes(term("ordered", prop)):
        return True
    if prop.functor == "ready" and len(prop.args) == 2 and prop.args[0] == mind.id:
        goal = prop.args[1]
        return goal in mind.desires
    return False


def origin_of(mind: AgentMind) -> tuple[int | None, bool]:
    d = current_desire(mind)
    if d is None:
        return None, False
    return mind.origin_msg.get(d.origin), d.origin in mind.misaddressed


GateFn = Callable[[AgentMind, Term], bool]


def step(mind: AgentMind, tick: int, gate: GateFn | None = None) -> Action | Message | None:
    """Advance the current plan; returns a domain action, a message draft, or None (idle).

    Notes and satisfied waits are bookkeeping and do not consume the tick.
    """
    it = mind.intention
    while it is not None:
        if it.program_counter >= len(it.plan):
            if it.repeat:
                it.program_counter = 0
            else:
                _finish(mind, tick, "complete")
                return None
        s = it.plan[it.program_counter]
        if isinstance(s, Note):
            mind.add_belief(s.proposition, True, Source.OWN_ACTION, tick)
            update_desires(mind, tick)
            _advance(it)
            continue
        if isinstance(s, Wait):
            if mind.believes(s.condition):
                mind.retract(s.condition)
                update_desires(mind, tick)
                _advance(it)
                continue
            if not it.skip_checked:
                it.skip_checked = True
                if mind.p_skip_confirmation > 0 and mind.rng.random() < mind.p_skip_confirmation:
                    mind.journal.append({"agent": mind.id, "op": "skip_wait", "term": render_term(s.condition)})
                    _advance(it)
                    continue
            it.waited += 1
            if it.waited > (s.timeout if s.timeout is not None else mind.wait_timeout):
                _finish(mind, tick, "timeout")
            return None
        if isinstance(s, Pause):
            it.waited += 1
            if it.waited >= s.ticks:
                _advance(it)
                _maybe_complete(mind, tick)
            return None
        if isinstance(s, Act):
            cap = mind.act_capabilities.get(s.action.functor)
            if cap is not None and cap not in mind.capabilities:
                return _refuse(mind, tick, s.action)
            if gate is not None and not gate(mind, s.action):
                it.waited += 1
                if it.waited > mind.wait_timeout:
                    _finish(mind, tick, "timeout")
                return None
            origin, mis = origin_of(mind)
            _advance(it)
            _maybe_complete(mind, tick)
            return Action(mind.id, s.action, origin, mis)
        if isinstance(s, Send):
            msg = Message(s.performative, mind.id, s.receiver, s.content, tick=tick)
            _advance(it)
            _maybe_complete(mind, tick)
            return msg
        if isinstance(s, Answer):
            msg = _answer(mind, it.goal, tick)
            _advance(it)
            _maybe_complete(mind, tick)
            return msg
        raise PlanError(f"unknown step {s!r}")
    return None


def _advance(it: Intention):
    it.program_counter += 1
    it.reset_step()


def _maybe_complete(mind: AgentMind, tick: int):
    it = mind.intention
    if it is not None and it.program_counter >= len(it.plan) and not it.repeat:
        _finish(mind, tick, "complete")


def _refuse(mind: AgentMind, tick: int, action: Term) -> Message | None:
    d = current_desire(mind)
    mind.journal.append({"agent": mind.id, "op": "capability_violation", "term": render_term(action)})
    requester = None
    if d is not None and d.origin.functor == "asked" and isinstance(d.origin.args[0], str):
        requester = d.origin.args[0]
    goal = mind.intention.goal if mind.intention else action
    _finish(mind, tick, "refused")
    if requester and requester != mind.id:
        return Message(Performative.REFUSE, mind.id, requester, goal, tick=tick)
    return None
