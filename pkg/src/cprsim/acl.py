"""Speech-act message language: term trees, performatives, parse/render, matching.

Messages have the textual form ``performative(sender, receiver, term)`` where
``term`` is a nested proposition such as ``ready(nurse, shock(nurse, patient))``.
Atoms are identifiers (agent ids, ``all``, ``patient``, drug names), numeric
values with an optional unit (``1mg``) or, in patterns only, variables (``?who``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

MAX_DEPTH = 8
ALL = "all"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NUMBER = re.compile(r"[0-9]+(?:\.[0-9]+)?[A-Za-z]*\Z")
_VAR = re.compile(r"\?[A-Za-z_][A-Za-z0-9_]*\Z")


class Performative(str, Enum):
    INFORM = "inform"
    REQUEST = "request"
    QUERY_IF = "query_if"
    CONFIRM = "confirm"
    AGREE = "agree"
    REFUSE = "refuse"


Atom = str
Arg = Union["Term", Atom]


def is_var(x: object) -> bool:
    return isinstance(x, str) and x.startswith("?")


def valid_atom(x: str) -> bool:
    return bool(_IDENT.match(x) or _NUMBER.match(x) or _VAR.match(x))


@dataclass(frozen=True)
class Term:
    functor: str
    args: tuple[Arg, ...] = ()

    def __post_init__(self):
        if not _IDENT.match(self.functor):
            raise ValueError(f"bad functor {self.functor!r}")
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        for a in self.args:
            if isinstance(a, str):
                if not valid_atom(a):
                    raise ValueError(f"bad atom {a!r}")
            elif not isinstance(a, Term):
                raise TypeError(f"term argument must be Term or str, got {type(a).__name__}")

    def __hash__(self) -> int:
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.functor, self.args))
            object.__setattr__(self, "_hash", h)
            return h

    def __str__(self) -> str:
        return render_term(self)

    @property
    def depth(self) -> int:
        return term_depth(self)

    @property
    def actor(self) -> Arg | None:
        """First argument, by convention the agent expected to carry out an action term."""
        return self.args[0] if self.args else None


def _raw(functor: str, args: tuple) -> Term:
    # for terms assembled from already validated parts
    t = object.__new__(Term)
    object.__setattr__(t, "functor", functor)
    object.__setattr__(t, "args", args)
    return t


def term(functor: str, *args: Arg) -> Term:
    return Term(functor, tuple(args))


def term_depth(t: Arg) -> int:
    if isinstance(t, str):
        return 1
    return 1 + max((term_depth(a) for a in t.args), default=0)


def render_term(t: Arg) -> str:
    if isinstance(t, str):
        return t
    d = t.__dict__
    if "_text" not in d:
        object.__setattr__(t, "_text", f"{t.functor}({', '.join(render_term(a) for a in t.args)})")
    return d["_text"]


def _vars(t: Arg) -> frozenset[str]:
    if isinstance(t, str):
        return frozenset((t,)) if t.startswith("?") else frozenset()
    d = t.__dict__
    if "_vars" not in d:
        out: frozenset[str] = frozenset()
        for a in t.args:
            out |= _vars(a)
        object.__setattr__(t, "_vars", out)
    return d["_vars"]


def variables(t: Arg) -> set[str]:
    return set(_vars(t))


def is_ground(t: Arg) -> bool:
    return not _vars(t)


@dataclass(frozen=True)
class ClarityFlags:
    ambiguous_addressee: bool = False
    incomplete_content: bool = False

    @property
    def well_formed(self) -> bool:
        return not (self.ambiguous_addressee or self.incomplete_content)


@dataclass(frozen=True)
class Message:
    performative: Performative
    sender: str
    receiver: str
    content: Term
    id: int = field(default=0, compare=False)
    tick: int = field(default=0, compare=False)
    clarity: ClarityFlags = ClarityFlags()

    def __post_init__(self):
        if not isinstance(self.performative, Performative):
            object.__setattr__(self, "performative", Performative(self.performative))
        for who in (self.sender, self.receiver):
            if not _IDENT.match(who):
                raise ValueError(f"bad agent id {who!r}")
        if self.receiver != ALL and self.sender == self.receiver:
            raise ValueError("sender and receiver must differ")
        if not isinstance(self.content, Term):
            raise TypeError("message content must be a Term")
        if term_depth(self.content) > MAX_DEPTH:
            raise ValueError("content nested too deeply")
        if self.tick < 0:
            raise ValueError("tick must be >= 0")

    @property
    def broadcast(self) -> bool:
        return self.receiver == ALL

    def text(self) -> str:
        return render_message(self)


def evolve(m: Message, **changes) -> Message:
    """Copy ``m`` with trusted field changes (ids, ticks, clarity flags) without re-validation."""
    out = object.__new__(Message)
    out.__dict__.update(m.__dict__)
    out.__dict__.update(changes)
    return out


def render_message(m: Message) -> str:
    return f"{m.performative.value}({m.sender}, {m.receiver}, {render_term(m.content)})"


# -- parsing -----------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, offset: int, expected: frozenset[str] | set[str], text: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        got = text[offset : offset + 10] if offset < len(text) else "end of input"
        super().__init__(f"at offset {offset}: expected one of {sorted(self.expected)}, got {got!r}")


class UnknownPerformative(ParseError):
    def __init__(self, name: str, offset: int = 0):
        self.name = name
        ValueError.__init__(self, f"unknown performative {name!r}")
        self.offset = offset
        self.expected = frozenset(p.value for p in Performative)


_TOKEN = re.compile(r"\s*(?:(?P<word>\??[A-Za-z0-9_.]+)|(?P<punct>[(),]))")


class _Parser:
    def __init__(self, text: str, allow_vars: bool):
        self.text = text
        self.pos = 0
        self.allow_vars = allow_vars

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> tuple[str, str, int] | None:
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            return None
        start = m.start("word") if m.group("word") else m.start("punct")
        if m.group("word") is not None:
            return ("word", m.group("word"), start)
        return ("punct", m.group("punct"), start)

    def fail(self, expected) -> ParseError:
        self._skip()
        return ParseError(self.pos, expected, self.text)

    def word(self, what: str) -> tuple[str, int]:
        tok = self.peek()
        if tok is None or tok[0] != "word":
            raise self.fail({what})
        _, value, start = tok
        if value.startswith("?"):
            ok = self.allow_vars and _VAR.match(value)
        else:
            ok = _IDENT.match(value) or _NUMBER.match(value)
        if not ok:
            self.pos = start
            raise ParseError(start, {what}, self.text)
        self.pos = start + len(value)
        return value, start

    def punct(self, ch: str):
        tok = self.peek()
        if tok is None or tok[1] != ch:
            raise self.fail({ch})
        self.pos = tok[2] + 1

    def term_or_atom(self, depth: int) -> Arg:
        value, start = self.word("identifier")
        tok = self.peek()
        if tok is not None and tok[1] == "(":
            if not _IDENT.match(value):
                raise ParseError(start, {"identifier"}, self.text)
            if depth + 1 > MAX_DEPTH:
                raise ParseError(start, {"shallower term"}, self.text)
            self.punct("(")
            args: list[Arg] = []
            tok = self.peek()
            if tok is not None and tok[1] == ")":
                self.punct(")")
                return Term(value, ())
            while True:
                args.append(self.term_or_atom(depth + 1))
                tok = self.peek()
                if tok is not None and tok[1] == ",":
                    self.punct(",")
                    continue
                if tok is None or tok[1] != ")":
                    raise self.fail({",", ")"})
                self.punct(")")
                return Term(value, tuple(args))
        if depth + 1 > MAX_DEPTH:
            raise ParseError(start, {"shallower term"}, self.text)
        return value

    def end(self):
        self._skip()
        if self.pos != len(self.text):
            raise ParseError(self.pos, {"end of input"}, self.text)


def parse_term(text: str, allow_vars: bool = True) -> Term:
    p = _Parser(text, allow_vars)
    t = p.term_or_atom(0)
    if not isinstance(t, Term):
        raise ParseError(0, {"("}, text)
    p.end()
    return t


def parse_arg(text: str, allow_vars: bool = True) -> Arg:
    p = _Parser(text, allow_vars)
    t = p.term_or_atom(0)
    p.end()
    return t


def parse_message(text: str, id: int = 0, tick: int = 0) -> Message:
    """Parse ``performative(sender, receiver, term)``; whitespace between tokens is ignored."""
    if not isinstance(text, str):
        raise TypeError("text must be str")
    p = _Parser(text, allow_vars=False)
    name, start = p.word("performative")
    try:
        perf = Performative(name)
    except ValueError:
        raise UnknownPerformative(name, start) from None
    p.punct("(")
    sender, s_at = p.word("sender")
    p.punct(",")
    receiver, r_at = p.word("receiver")
    p.punct(",")
    content = p.term_or_atom(0)
    if not isinstance(content, Term):
        raise ParseError(p.pos, {"("}, text)
    p.punct(")")
    p.end()
    for who, at in ((sender, s_at), (receiver, r_at)):
        if not _IDENT.match(who):
            raise ParseError(at, {"agent id"}, text)
    if receiver != ALL and sender == receiver:
        raise ParseError(r_at, {"receiver different from sender"}, text)
    return Message(perf, sender, receiver, content, id=id, tick=tick)


# -- matching ----------------------------------------------------------------


class VariableInGround(ValueError):
    pass


Binding = dict[str, Arg]


def match(pattern: Arg, ground: Arg, binding: Binding | None = None) -> Binding | None:
    """Return the substitution making ``pattern`` equal ``ground``, or None.

    ``binding`` seeds the substitution (e.g. ``{"?self": "nurse"}``); it is not mutated.
    """
    if not is_ground(ground):
        raise VariableInGround(render_term(ground))
    out = dict(binding) if binding else {}
    return out if _match(pattern, ground, out) else None


def _match(p: Arg, g: Arg, b: Binding) -> bool:
    if isinstance(p, str):
        if p.startswith("?"):
            if p in b:
                return b[p] == g
            b[p] = g
            return True
        return p == g
    if isinstance(g, str) or p.functor != g.functor or len(p.args) != len(g.args):
        return False
    return all(_match(pa, ga, b) for pa, ga in zip(p.args, g.args))


def substitute(t: Arg, binding: Binding) -> Arg:
    if isinstance(t, str):
        return binding.get(t, t) if t.startswith("?") else t
    if not t.args or not _vars(t):
        return t
    return _raw(t.functor, tuple(substitute(a, binding) for a in t.args))


def replace_atom(t: Arg, old: str, new: str) -> Arg:
    if not valid_atom(new):
        raise ValueError(f"bad atom {new!r}")
    return _replace(t, old, new)


def _replace(t: Arg, old: str, new: str) -> Arg:
    if isinstance(t, str):
        return new if t == old else t
    return _raw(t.functor, tuple(_replace(a, old, new) for a in t.args))


def dose_value(atom: str) -> tuple[float, str]:
    """Split a dose atom like ``1mg`` into ``(1.0, "mg")``."""
    m = re.match(r"([0-9]+(?:\.[0-9]+)?)([A-Za-z]*)\Z", atom)
    if not m:
        raise ValueError(f"not a dose: {atom!r}")
    return float(m.group(1)), m.group(2)
