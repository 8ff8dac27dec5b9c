from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cprsim.acl import (
    ALL,
    MAX_DEPTH,
    ClarityFlags,
    Message,
    ParseError,
    Performative,
    Term,
    UnknownPerformative,
    VariableInGround,
    dose_value,
    evolve,
    match,
    parse_message,
    parse_term,
    render_message,
    render_term,
    substitute,
    term,
)

# a well-run defibrillation exchange, one message per row
GOOD_ROWS = [
    "inform(physician, all, fibrillation(patient))",
    "request(physician, critical_care_nurse, shock(critical_care_nurse, patient))",
    "query_if(physician, nurse, ready(nurse, shock(nurse, patient)))",
    "confirm(nurse, physician, ready(nurse, shock(nurse, patient)))",
    "request(physician, critical_care_nurse, stopChestCompressions(critical_care_nurse, patient))",
    "inform(physician, all, shock(nurse, patient))",
    "request(physician, all, move(all))",
]

# a poorly run exchange: well-formed terms whose defects live in the clarity flags
BAD_ROWS = [
    ("request(physician, all, shock(nurse, patient))", ClarityFlags(ambiguous_addressee=True)),
    ("request(physician, critical_care_nurse, compress(critical_care_nurse, patient))", ClarityFlags(incomplete_content=True)),
    ("inform(physician, critical_care_nurse, charging(defibrillator))", ClarityFlags(ambiguous_addressee=True)),
    ("request(physician, critical_care_nurse, compress(critical_care_nurse, patient))", ClarityFlags()),
    ("request(physician, all, move(all))", ClarityFlags()),
    ("inform(physician, all, caution(all))", ClarityFlags(incomplete_content=True)),
    ("request(physician, all, compress(all, patient))", ClarityFlags(ambiguous_addressee=True)),
]


def test_parse_inform_broadcast():
    m = parse_message("inform(physician, all, fibrillation(patient))")
    assert m.performative is Performative.INFORM
    assert (m.sender, m.receiver) == ("physician", ALL)
    assert m.content == term("fibrillation", "patient")
    assert m.clarity.well_formed


def test_parse_confirm_nested_depth_three():
    m = parse_message("confirm(nurse, physician, ready(nurse, shock(nurse, patient)))")
    assert m.content.depth == 3
    assert m.content == term("ready", "nurse", term("shock", "nurse", "patient"))


def test_parse_whitespace_insensitive():
    a = parse_message("inform ( physician ,all,fibrillation (patient) )")
    assert a == parse_message("inform(physician, all, fibrillation(patient))")


def test_render_move_all():
    m = Message(Performative.REQUEST, "physician", ALL, term("move", ALL))
    assert render_message(m) == "request(physician, all, move(all))"


@pytest.mark.parametrize("text", GOOD_ROWS)
def test_good_rows_round_trip(text):
    m = parse_message(text)
    assert render_message(m) == text
    assert parse_message(render_message(m)) == m


@pytest.mark.parametrize("text,flags", BAD_ROWS)
def test_bad_rows_carry_flags(text, flags):
    m = evolve(parse_message(text), clarity=flags)
    assert m.text() == text
    assert m.clarity == flags
    if flags != ClarityFlags():
        assert not m.clarity.well_formed


def test_fixture_count():
    assert len(GOOD_ROWS) + len(BAD_ROWS) == 14


def test_empty_input_fails_at_zero():
    with pytest.raises(ParseError) as e:
        parse_message("")
    assert e.value.offset == 0
    assert "performative" in e.value.expected


@pytest.mark.parametrize(
    "text,offset",
    [
        ("inform(", 7),
        ("inform(physician", 16),
        ("inform(physician, all, f(", 25),
        ("inform(physician, all, f(a)", 27),
        ("inform(physician, all, f(a)) x", 29),
    ],
)
def test_malformed_offsets(text, offset):
    with pytest.raises(ParseError) as e:
        parse_message(text)
    assert e.value.offset == offset
    assert e.value.expected


def test_unknown_performative():
    with pytest.raises(UnknownPerformative):
        parse_message("propose(physician, nurse, shock(nurse, patient))")


def test_message_rejects_variables():
    with pytest.raises(ParseError):
        parse_message("request(physician, nurse, shock(?x, patient))")


def test_message_invariants():
    with pytest.raises(ValueError):
        Message(Performative.INFORM, "nurse", "nurse", term("a"))
    with pytest.raises(ValueError):
        Message(Performative.INFORM, "nurse", ALL, term("a"), tick=-1)
    deep: Term | str = "x"
    for _ in range(MAX_DEPTH):
        deep = term("f", deep)
    with pytest.raises(ValueError):
        Message(Performative.INFORM, "nurse", ALL, deep)  # type: ignore[arg-type]


def test_term_invariants():
    with pytest.raises(ValueError):
        Term("", ())
    with pytest.raises(ValueError):
        Term("f", ("bad atom",))


def test_dose_atoms():
    assert dose_value("1mg") == (1.0, "mg")
    assert dose_value("300mg") == (300.0, "mg")
    assert parse_term("inject(nurse, adrenaline, 1mg)").args[2] == "1mg"


# -- generators ---------------------------------------------------------------

ATOMS = ["physician", "nurse", "critical_care_nurse", "patient", "all", "adrenaline", "1mg", "300mg", "x1"]
FUNCTORS = ["shock", "ready", "inject", "move", "fibrillation", "stopChestCompressions", "f", "g"]
AGENTS = ["physician", "assistant", "critical_care_nurse", "nurse", "respiratory_therapist"]


def terms(max_depth=4, atoms=ATOMS):
    leaves = st.sampled_from(atoms)
    return st.recursive(
        st.builds(lambda f: term(f), st.sampled_from(FUNCTORS)),
        lambda inner: st.builds(
            lambda f, args: Term(f, tuple(args)),
            st.sampled_from(FUNCTORS),
            st.lists(st.one_of(leaves, inner), min_size=1, max_size=3),
        ),
        max_leaves=8,
    ).filter(lambda t: t.depth <= max_depth)


@st.composite
def messages(draw):
    sender = draw(st.sampled_from(AGENTS))
    receiver = draw(st.sampled_from([a for a in AGENTS if a != sender] + [ALL]))
    return Message(draw(st.sampled_from(list(Performative))), sender, receiver, draw(terms()))


@given(messages())
def test_round_trip_property(m):
    assert parse_message(render_message(m)) == m


@given(st.text(max_size=60))
def test_parser_total(text):
    try:
        parse_message(text)
    except ParseError as e:
        assert 0 <= e.offset <= len(text)


@given(st.text(alphabet="inform(physcan,l )qury_fdt?0123456789", max_size=60))
def test_parser_total_near_grammar(text):
    try:
        parse_message(text)
    except ParseError as e:
        assert 0 <= e.offset <= len(text)


def _random_term(rng: random.Random, depth: int) -> Term:
    n = rng.randint(0, 3) if depth > 1 else 0
    args = []
    for _ in range(n):
        if rng.random() < 0.5:
            args.append(rng.choice(ATOMS))
        else:
            args.append(_random_term(rng, depth - 1))
    return Term(rng.choice(FUNCTORS), tuple(args))


def test_render_injective_on_random_corpus():
    rng = random.Random(7)
    seen: dict[str, Message] = {}
    for _ in range(10_000):
        sender = rng.choice(AGENTS)
        receiver = rng.choice([a for a in AGENTS if a != sender] + [ALL])
        m = Message(rng.choice(list(Performative)), sender, receiver, _random_term(rng, 4))
        text = render_message(m)
        if text in seen:
            assert seen[text] == m
        seen[text] = m
    assert len(seen) > 5000


# -- matching -------------------------------------------------------------------


def test_match_binds_agent():
    b = match(parse_term("inject(?who, adrenaline, 1mg)"), parse_term("inject(nurse, adrenaline, 1mg)"))
    assert b == {"?who": "nurse"}


def test_match_ground_identity():
    assert match(term("f", "a"), term("f", "a")) == {}


def test_match_repeated_variable_conflict():
    assert match(term("f", "?x", "?x"), term("f", "a", "b")) is None


def test_match_rejects_variable_in_ground():
    with pytest.raises(VariableInGround):
        match(term("f", "?x"), term("f", "?y"))


def test_match_does_not_mutate_seed():
    seed = {"?self": "nurse"}
    assert match(term("f", "?self", "?x"), term("f", "nurse", "a"), seed) == {"?self": "nurse", "?x": "a"}
    assert seed == {"?self": "nurse"}


def _subterms(t):
    yield t
    if isinstance(t, Term):
        for a in t.args:
            yield from _subterms(a)


def _oracle(pattern, ground):
    """Every binding must map a variable to some subterm of the ground term; try them all."""
    vs = sorted({x for x in _subterms(pattern) if isinstance(x, str) and x.startswith("?")})
    cands = list({render_term(s): s for s in _subterms(ground)}.values())
    found = []
    for combo in itertools.product(cands, repeat=len(vs)):
        b = dict(zip(vs, combo))
        if substitute(pattern, b) == ground:
            found.append(b)
    return found


SMALL_ATOMS = ["a", "b", "?x", "?y"]


@settings(max_examples=400)
@given(terms(max_depth=3, atoms=SMALL_ATOMS), terms(max_depth=3, atoms=["a", "b"]))
def test_match_agrees_with_brute_force(pattern, ground):
    expected = _oracle(pattern, ground)
    got = match(pattern, ground)
    if not expected:
        assert got is None
    else:
        assert len(expected) == 1
        assert got == expected[0]


@settings(max_examples=300)
@given(terms(max_depth=3, atoms=["a", "b"]), st.data())
def test_match_finds_generalizations(ground, data):
    # replace some atoms by variables; the generalization must match back
    pattern = ground
    for i, sub in enumerate(["a", "b"]):
        if data.draw(st.booleans()):
            from cprsim.acl import replace_atom

            pattern = replace_atom(pattern, sub, f"?v{i}")
    b = match(pattern, ground)
    assert b is not None
    assert substitute(pattern, b) == ground
