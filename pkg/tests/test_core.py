import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agx.classification import classify
from agx.core import (
    Automaton,
    act_epword,
    apply_group_word,
    apply_state,
    decode_letter,
    encode_letter,
    inverse_automaton,
    minimize,
    minimize_with_map,
    power_alphabet,
    subautomaton,
    symmetric_closure,
    trivial_automaton,
    validate_automaton,
)
from agx.errors import (
    InvalidAutomaton,
    InvalidOutputRow,
    InvalidTransition,
    LetterOutOfRange,
    OverflowAlphabet,
)
from agx.families import build
from agx.words import EPWord, GroupWord, all_words

from conftest import FAMILY_TAGS, peg_word, sym_word


def as_int(w):
    """Binary word, least significant digit first."""
    return sum(x << i for i, x in enumerate(w))


# validation


def test_validate_adding_machine(adding):
    rep = validate_automaton(adding)
    assert rep.invertible and rep.trivial_state == "e" and rep.n_states == 2
    assert rep.minimal


def test_validate_rejects_non_permutation():
    bad = Automaton(2, ("s",), ((0, 0),), ((0, 0),))
    with pytest.raises(InvalidOutputRow) as exc:
        validate_automaton(bad)
    assert exc.value.state == "s"


def test_validate_rejects_dangling_transition():
    bad = Automaton(2, ("s",), ((1, 0),), ((0, 3),))
    with pytest.raises(InvalidTransition) as exc:
        validate_automaton(bad)
    assert (exc.value.state, exc.value.letter) == ("s", 1)


def test_validate_hanoi4(hanoi4):
    rep = validate_automaton(hanoi4)
    assert rep.n_states == 7 and rep.trivial_state == "e"


def test_alphabet_needs_two_letters():
    with pytest.raises(InvalidAutomaton):
        Automaton(1, ("e",), ((0,),), ((0,),))


def test_trivial_detection_is_behavioral():
    # the trivial state is named "z" and not flagged in the input
    a = Automaton.from_rows(2, {"a": ((1, 0), ("z", "a")), "z": ((0, 1), ("z", "z"))})
    assert a.identity is None
    assert validate_automaton(a).trivial_state == "z"
    assert minimize(a).identity == 1


# minimization


def test_minimize_merges_copies_of_identity():
    a = Automaton.from_rows(2, {
        "a": ((1, 0), ("e1", "a")),
        "e1": ((0, 1), ("e2", "e1")),
        "e2": ((0, 1), ("e1", "e2")),
    })
    m = minimize(a)
    assert m.names == ("a", "e1") and m.identity == 1


def test_minimize_adding_unchanged(adding):
    assert minimize(adding) == adding


def test_minimize_power_alphabet_keeps_two_states(adding):
    m = minimize(power_alphabet(adding, 2))
    assert len(m) == 2 and m.q == 4


@pytest.mark.parametrize("tag", FAMILY_TAGS)
def test_minimize_idempotent_and_action_preserving(tag):
    a = build(tag)
    union = symmetric_closure(a).automaton
    # add a redundant duplicate of every state to make minimization do work
    n = len(union)
    dup = Automaton(union.q, union.names + tuple(x + "'" for x in union.names),
                    union.out + union.out, union.trans + tuple(tuple(t + n for t in r) for r in union.trans))
    m, cls = minimize_with_map(dup)
    assert minimize(m) == m
    assert len(m) == n
    for length in range(6 if union.q == 2 else 4):
        for w in all_words(union.q, length):
            for s in range(len(dup)):
                img, rest = apply_state(dup, s, w)
                img2, rest2 = apply_state(m, cls[s], w)
                assert img == img2 and cls[rest] == rest2


# inverses


def test_inverse_of_adding_machine(adding):
    inv = inverse_automaton(adding)
    assert set(inv.names) == {"a", "e", "a^-1"}
    ai = inv.index("a^-1")
    # a^-1 subtracts one: 1w -> 0w and 0w -> 1 a^-1(w)
    assert apply_state(inv, ai, (1, 0, 1)) == ((0, 0, 1), inv.identity)
    assert apply_state(inv, ai, (0, 1)) == ((1, 0), inv.identity)
    assert apply_state(inv, ai, (0, 0, 0))[0] == (1, 1, 1)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_hanoi_inverse_is_itself(k):
    h = build(f"hanoi:{k}")
    assert inverse_automaton(h) == h
    sym = symmetric_closure(h)
    assert sym.automaton == h
    assert all(sym.inverse[s] == s for s in range(len(h)))


def test_trivial_automaton_inverse():
    t = trivial_automaton()
    assert inverse_automaton(t) == t
    assert symmetric_closure(t).automaton == t


def test_symmetric_closure_adding(adding):
    sym = symmetric_closure(adding)
    assert sym.automaton.names == ("a", "e", "a^-1")
    a, ai = sym.mapping[(0, 1)], sym.mapping[(0, -1)]
    assert a != ai and sym.inverse[a] == ai and sym.inverse[ai] == a
    assert sym.resolve(GroupWord.parse("a,-a,e")) == (a, ai, sym.automaton.identity)


@pytest.mark.parametrize("tag", FAMILY_TAGS)
def test_symmetric_closure_is_symmetric_and_closed(tag):
    sym = symmetric_closure(build(tag))
    m = sym.automaton
    for s in range(len(m)):
        assert sym.inverse[sym.inverse[s]] == s
        for w in all_words(m.q, 3):
            img, _ = apply_state(m, s, w)
            assert apply_state(m, sym.inverse[s], img)[0] == w


# power alphabet


def test_letter_encoding_little_endian():
    assert encode_letter((1, 0), 2) == 1
    assert encode_letter((0, 1), 2) == 2
    assert decode_letter(5, 3, 2) == (2, 1)


def test_power_alphabet_one_is_identity(adding):
    assert power_alphabet(adding, 1) == adding


def test_power_alphabet_two_adding(adding):
    p = power_alphabet(adding, 2)
    a, e = p.index("a"), p.index("e")
    c00, c10, c11 = encode_letter((0, 0), 2), encode_letter((1, 0), 2), encode_letter((1, 1), 2)
    assert p.out[a][c00] == c10 and p.trans[a][c00] == e
    assert p.out[a][c11] == c00 and p.trans[a][c11] == a


@pytest.mark.parametrize("tag", FAMILY_TAGS)
@pytest.mark.parametrize("n", [2, 3])
def test_power_alphabet_matches_action(tag, n):
    a = build(tag)
    if a.q ** n > 64:
        pytest.skip("large alphabet")
    p = power_alphabet(a, n)
    for s in range(len(a)):
        for w in all_words(a.q, 2 * n):
            img, rest = apply_state(a, s, w)
            pw = [encode_letter(w[i:i + n], a.q) for i in range(0, 2 * n, n)]
            pimg, prest = apply_state(p, s, pw)
            assert [decode_letter(c, a.q, n) for c in pimg] == [img[:n], img[n:]]
            assert prest == rest


def test_power_alphabet_keeps_degree(omega0):
    assert classify(omega0).degree == 1
    assert classify(power_alphabet(omega0, 2)).degree == 1


def test_power_alphabet_cap():
    with pytest.raises(OverflowAlphabet):
        power_alphabet(build("hanoi:8"), 5)


# actions


def test_apply_state_adding(adding):
    e = adding.index("e")
    assert apply_state(adding, "a", (0, 1, 1)) == ((1, 1, 1), e)
    assert apply_state(adding, "a", (1, 1, 1)) == ((0, 0, 0), adding.index("a"))


def test_apply_state_adds_one(adding):
    for n in range(1, 7):
        for w in all_words(2, n):
            img, _ = apply_state(adding, "a", w)
            assert as_int(img) == (as_int(w) + 1) % 2 ** n


def test_apply_state_hanoi(hanoi3):
    assert apply_state(hanoi3, "a12", peg_word("122")) == (peg_word("222"), hanoi3.identity)


def test_apply_state_letter_range(adding):
    with pytest.raises(LetterOutOfRange):
        apply_state(adding, "a", (0, 2))


def test_apply_group_word_adding(adding):
    a, e = adding.index("a"), adding.index("e")
    # (aa)(1w) = 1 a(w); the right factor reads 1 and the left one reads 0
    assert apply_group_word(adding, (a, a), (1,)) == ((1,), (e, a))
    assert apply_group_word(adding, (), (0, 1, 1)) == ((0, 1, 1), ())


def test_apply_group_word_hanoi(hanoi4):
    g = (hanoi4.index("a12"), hanoi4.index("a34"))
    e = hanoi4.identity
    assert apply_group_word(hanoi4, g, peg_word("13")) == (peg_word("24"), (e, e))


def test_act_epword_examples(adding, omega0):
    assert act_epword(adding, (0,), EPWord((), (1,))) == EPWord((), (0,))
    ainv = sym_word(adding, "a^-1")
    assert act_epword(symmetric_closure(adding).automaton, ainv, EPWord((), (0,))) == EPWord((), (1,))
    a1 = (omega0.index("a_1"),)
    # a_1(01w) = 01 a(w) and a((01)^inf) = 11(01)^inf
    assert act_epword(omega0, a1, EPWord((0, 1), (0, 1))) == EPWord((0, 1, 1, 1), (0, 1))


def test_act_epword_empty_word(adding):
    w = EPWord((1,), (0, 1))
    assert act_epword(adding, (), w) == w


# invariants


def _small_words(a, max_len):
    for n in range(max_len + 1):
        yield from all_words(a.q, n)


@pytest.mark.parametrize("tag", ["adding", "omega:0", "omega:01", "hanoi:3", "nonpoly_b"])
def test_round_trip_and_length(tag):
    sym = symmetric_closure(build(tag))
    m = sym.automaton
    max_len = 8 if m.q == 2 else 6
    for s in range(len(m)):
        for w in _small_words(m, max_len):
            img, _ = apply_state(m, s, w)
            assert len(img) == len(w)
            assert apply_state(m, sym.inverse[s], img)[0] == w


@pytest.mark.parametrize("tag", FAMILY_TAGS)
def test_cocycle_splitting(tag):
    sym = symmetric_closure(build(tag))
    m = sym.automaton
    gens = sym.generators()
    for g in itertools.product(gens, repeat=2):
        for w in all_words(m.q, 4 if m.q == 2 else 3):
            img, induced = apply_group_word(m, g, w)
            for k in range(len(w) + 1):
                img1, ind1 = apply_group_word(m, g, w[:k])
                img2, ind2 = apply_group_word(m, ind1, w[k:])
                assert img1 + img2 == img and ind2 == induced


ep_words = st.builds(
    EPWord,
    st.lists(st.integers(0, 1), max_size=6).map(tuple),
    st.lists(st.integers(0, 1), min_size=1, max_size=4).map(tuple),
)


@settings(max_examples=60, deadline=None)
@given(w=ep_words, g=st.lists(st.sampled_from(["a", "a^-1", "a_1", "a_1^-1"]), max_size=5))
def test_act_epword_agrees_with_prefixes(w, g):
    a = build("omega:0")
    m = symmetric_closure(a).automaton
    word = tuple(m.names.index(n) for n in g)
    image = act_epword(m, word, w)
    for length in (0, 1, 7, 33, 64):
        assert image.prefix(length) == apply_group_word(m, word, w.prefix(length))[0]


@given(u=st.lists(st.integers(0, 2), max_size=5).map(tuple),
       v=st.lists(st.integers(0, 2), min_size=1, max_size=4).map(tuple))
def test_ep_canonicalization(u, v):
    assert EPWord(u, v) == EPWord(u + v, v + v)
    assert EPWord(u, v) == EPWord(u, v * 3)
    c = EPWord(u, v)
    assert c.prefix(40) == (u + v * 40)[:40]


@given(u1=st.lists(st.integers(0, 1), max_size=4).map(tuple),
       v1=st.lists(st.integers(0, 1), min_size=1, max_size=3).map(tuple),
       u2=st.lists(st.integers(0, 1), max_size=4).map(tuple),
       v2=st.lists(st.integers(0, 1), min_size=1, max_size=3).map(tuple))
def test_ep_equality_is_pointwise(u1, v1, u2, v2):
    # two eventually periodic words agree everywhere iff they agree on a
    # prefix covering both preperiods plus a common period
    n = max(len(u1), len(u2)) + len(v1) * len(v2)
    same = (u1 + v1 * n)[:n] == (u2 + v2 * n)[:n]
    assert (EPWord(u1, v1) == EPWord(u2, v2)) == same


def test_ep_canonical_form_examples():
    w = EPWord((0, 1, 0, 1), (0, 1, 0, 1))
    assert (w.pre, w.per) == ((), (0, 1))
    w = EPWord((1, 1, 0), (1, 0))
    assert (w.pre, w.per) == ((1,), (1, 0))
    assert str(EPWord.parse("0(10)^inf")) == "(01)^inf"
    assert str(EPWord.parse("01(10)^inf")) == "01(10)^inf"


# subautomata and documents


def test_subautomaton_requires_closure(bauto):
    sub = subautomaton(bauto, ["b", "b^-1", "b^2", "b^-2", "e"])
    assert len(sub) == 5 and sub.names[sub.identity] == "e"
    with pytest.raises(InvalidTransition):
        subautomaton(bauto, ["c", "e"])


@pytest.mark.parametrize("tag", FAMILY_TAGS)
def test_document_round_trip(tag):
    a = build(tag)
    again = Automaton.loads(json.dumps(a.to_document()))
    assert again == a and minimize(again) == minimize(a)


def test_document_rejects_unknown_fields(adding):
    doc = adding.to_document()
    doc["comment"] = "x"
    with pytest.raises(InvalidAutomaton, match="unknown"):
        Automaton.from_document(doc)
    doc = adding.to_document()
    doc["transitions"]["a"]["extra"] = 1
    with pytest.raises(InvalidAutomaton):
        Automaton.from_document(doc)


def test_document_malformed_json_reports_location():
    with pytest.raises(InvalidAutomaton, match="line 1"):
        Automaton.loads('{"alphabet_size": 2,')
