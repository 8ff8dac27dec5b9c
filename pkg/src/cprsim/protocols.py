"""Communication techniques (checkback, call-out, SBAR handoff) and the channel noise model."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .acl import ALL, ClarityFlags, Message, Performative, Term, evolve, term


class ProtocolDisabled(RuntimeError):
    pass


class MissingField(ValueError):
    def __init__(self, name: str):
        super().__init__(f"SBAR handoff is missing {name}")
        self.field = name


@dataclass(frozen=True)
class ProtocolConfig:
    checkback_enabled: bool = True
    callout_enabled: bool = True
    sbar_on_handoff: bool = True
    directed_requests: bool = True
    p_misaddress: float = 0.0
    p_misread: float = 0.0
    p_skip_confirmation: float = 0.0
    p_not_heard: float = 0.0

    def __post_init__(self):
        for name in ("p_misaddress", "p_misread", "p_skip_confirmation", "p_not_heard"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "checkback": self.checkback_enabled,
            "callout": self.callout_enabled,
            "sbar": self.sbar_on_handoff,
            "directed": self.directed_requests,
        }

    @property
    def noiseless(self) -> bool:
        return self.p_misaddress == self.p_misread == self.p_skip_confirmation == self.p_not_heard == 0.0

    def to_dict(self) -> dict:
        return asdict(self)


# -- checkback ---------------------------------------------------------------


class ConvState(str, Enum):
    SENT = "sent"
    CONFIRMED = "confirmed"
    REFUSED = "refused"
    TIMED_OUT = "timed_out"


@dataclass
class Conversation:
    id: int
    initiator: str
    responder: str
    request: Message
    deadline_tick: int
    timeout: int = 10
    state: ConvState = ConvState.SENT
    resent: bool = False
    opened_tick: int = 0
    closed_tick: int | None = None

    def accepts(self, reply: Message) -> bool:
        """A reply closes the loop when the responder echoes the content (or readiness for it)."""
        if reply.sender != self.responder or reply.receiver != self.initiator:
            return False
        c = self.request.content
        return reply.content == c or reply.content == term("ready", self.responder, c)

    def on_reply(self, reply: Message, tick: int) -> bool:
        if self.state is not ConvState.SENT or not self.accepts(reply):
            return False
        if reply.performative in (Performative.CONFIRM, Performative.AGREE):
            self.state = ConvState.CONFIRMED
        elif reply.performative is Performative.REFUSE:
            self.state = ConvState.REFUSED
        else:
            return False
        self.closed_tick = tick
        return True

    def on_tick(self, tick: int) -> str | None:
        """Returns ``"resend"`` once at the first deadline, ``"timeout"`` at the second."""
        if self.state is not ConvState.SENT or tick < self.deadline_tick:
            return None
        if not self.resent:
            self.resent = True
            self.deadline_tick = tick + self.timeout
            return "resend"
        self.state = ConvState.TIMED_OUT
        self.closed_tick = tick
        return "timeout"


def responder_of(request: Message) -> str:
    actor = request.content.actor
    if request.receiver == ALL and isinstance(actor, str) and actor != ALL:
        return actor
    return request.receiver


def open_checkback(request: Message, deadline: int, cfg: ProtocolConfig | None = None) -> Conversation:
    if cfg is not None and not cfg.checkback_enabled:
        raise ProtocolDisabled("checkback")
    if request.performative not in (Performative.REQUEST, Performative.QUERY_IF):
        raise ValueError("checkback opens on request or query_if")
    return Conversation(
        id=request.id,
        initiator=request.sender,
        responder=responder_of(request),
        request=request,
        deadline_tick=request.tick + deadline,
        timeout=deadline,
        opened_tick=request.tick,
    )


@dataclass
class ConversationTable:
    by_id: dict[int, Conversation] = field(default_factory=dict)

    def open(self, conv: Conversation) -> None:
        self.by_id[conv.id] = conv

    def get(self, conv_id: int | None) -> Conversation | None:
        return None if conv_id is None else self.by_id.get(conv_id)

    def on_message(self, m: Message, tick: int) -> list[Conversation]:
        closed = []
        for conv in self.by_id.values():
            if conv.on_reply(m, tick):
                closed.append(conv)
        return closed

    def due(self, tick: int) -> list[tuple[Conversation, str]]:
        out = []
        for cid in sorted(self.by_id):
            conv = self.by_id[cid]
            what = conv.on_tick(tick)
            if what:
                out.append((conv, what))
        return out


# -- call-out and SBAR -------------------------------------------------------


def emit_callout(sender: str, proposition: Term, cfg: ProtocolConfig, tick: int = 0) -> Message:
    if not cfg.callout_enabled:
        raise ProtocolDisabled("callout")
    return Message(Performative.INFORM, sender, ALL, proposition, tick=tick)


SBAR_FIELDS = ("situation", "background", "assessment", "recommendation")


def _check_sbar(parts: Sequence[Term | None]):
    for name, part in zip(SBAR_FIELDS, parts):
        if part is None or (isinstance(part, Term) and not part.functor):
            raise MissingField(name)
        if not isinstance(part, Term):
            raise MissingField(name)


def build_sbar(
    situation: Term | None,
    background: Term | None,
    assessment: Term | None,
    recommendation: Term | None,
    sender: str = "paramedic",
    receiver: str = ALL,
    tick: int = 0,
) -> Message:
    parts = (situation, background, assessment, recommendation)
    _check_sbar(parts)
    return Message(Performative.INFORM, sender, receiver, Term("sbar", tuple(parts)), tick=tick)  # type: ignore[arg-type]


def sbar_messages(
    situation: Term | None,
    background: Term | None,
    assessment: Term | None,
    recommendation: Term | None,
    cfg: ProtocolConfig,
    sender: str = "paramedic",
    receiver: str = ALL,
    tick: int = 0,
) -> list[Message]:
    """The opening handoff: one structured message, or four loose informs without SBAR."""
    parts = (situation, background, assessment, recommendation)
    if cfg.sbar_on_handoff:
        return [build_sbar(*parts, sender=sender, receiver=receiver, tick=tick)]
    _check_sbar(parts)
    return [Message(Performative.INFORM, sender, receiver, p, tick=tick) for p in parts]  # type: ignore[arg-type]


# -- channel noise -----------------------------------------------------------


@dataclass(frozen=True)
class Delivery:
    message: Message
    to: str
    heard: bool
    clarity: ClarityFlags = ClarityFlags()

    @property
    def delivered(self) -> Message:
        return evolve(self.message, clarity=self.clarity)


def ambiguity_eligible(m: Message, addressee: str) -> bool:
    if m.performative is not Performative.REQUEST or m.receiver != ALL:
        return False
    actor = m.content.actor
    return isinstance(actor, str) and actor not in (ALL, addressee, "patient")


def apply_noise(m: Message, addressees: Iterable[str], cfg: ProtocolConfig, rng: random.Random) -> list[Delivery]:
    """One delivery per addressee; three draws each (heard, misaddress, misread) in a fixed order."""
    out = []
    for who in addressees:
        u_heard, u_addr, u_read = rng.random(), rng.random(), rng.random()
        if u_heard < cfg.p_not_heard:
            out.append(Delivery(m, who, False))
            continue
        flags = ClarityFlags(
            ambiguous_addressee=m.clarity.ambiguous_addressee
            or (ambiguity_eligible(m, who) and u_addr < cfg.p_misaddress),
            incomplete_content=m.clarity.incomplete_content or u_read < cfg.p_misread,
        )
        out.append(Delivery(m, who, True, flags))
    return out
