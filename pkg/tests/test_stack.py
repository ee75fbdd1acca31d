import pytest
from hypothesis import given, strategies as st

from lffkit.engine import enumerate_reachable, words_up_to
from lffkit.errors import AlphabetError, ParseError, SearchBoundExceeded
from lffkit.specfile import parse_spec, parse_spec_text
from lffkit.stack import (
    DEAD,
    Rule,
    StackElem,
    StackMachine,
    config_behavior,
    dpda_member,
    dpda_trace,
    npda_layers,
    npda_member,
    StackPredicate,
    pred_apply,
    stack_apply,
    validate_machine,
)

from oracles import anbn_ref, dyck_ref, even_palindrome_ref, fixture

ANBN = parse_spec(fixture("anbn.stack"))
DYCK = parse_spec(fixture("dyck.stack"))
PAL = parse_spec(fixture("palindrome.stack-nd"))


def test_stack_apply_reads_only_the_top():
    e = StackElem(2, short={("A",): ("p", ())}, full={("A", "B"): ("q", ("C",))})
    assert stack_apply(e, ("A", "B", "Z", "Z")) == ("q", ("C", "Z", "Z"))
    assert stack_apply(e, ("A",)) == ("p", ())
    assert stack_apply(e, ("B", "B")) == (DEAD, ("B", "B"))


def test_predicate_defaults_to_false():
    p = StackPredicate(1, full={("Z",): True})
    assert pred_apply(p, ("Z", "A")) and not pred_apply(p, ("A", "Z")) and not pred_apply(p, ())


def test_trace_length_and_dead_state():
    trace = dpda_trace(ANBN, ("a", "b", "b"))
    assert len(trace) == 4
    assert trace[2] == ("q", ("Z",))
    assert trace[3][0] == DEAD


def test_fixture_examples():
    assert dpda_member(ANBN, "aabb")
    assert not dpda_member(ANBN, "abab")
    assert dpda_member(ANBN, "")
    assert dpda_member(DYCK, "(()())")
    assert not dpda_member(DYCK, ")(")
    assert npda_member(PAL, "abba")
    assert not npda_member(PAL, "abab")


def test_initial_stack_override():
    assert dpda_member(ANBN, "b", initial=("A", "Z"))


def test_letters_are_checked():
    with pytest.raises(AlphabetError):
        dpda_member(ANBN, "c")


def test_configuration_bound():
    with pytest.raises(SearchBoundExceeded):
        npda_layers(PAL, "aaaaaaaa", max_configs=2)


@pytest.mark.parametrize("m, ref", [(ANBN, anbn_ref), (DYCK, dyck_ref)], ids=["anbn", "dyck"])
def test_deterministic_machines_match_references(m, ref):
    for w in words_up_to(m.alphabet, 10):
        assert dpda_member(m, w) == ref(w), w


def test_palindromes_match_reference():
    for w in words_up_to(PAL.alphabet, 8):
        assert npda_member(PAL, w) == even_palindrome_ref(w), w


@given(st.lists(st.sampled_from("ab"), max_size=8))
def test_reversal_doubles_are_palindromes(half):
    assert npda_member(PAL, half + half[::-1])


def test_configuration_behavior_grows_without_bound():
    r = enumerate_reachable(config_behavior(ANBN), ANBN.initial_config(), 40)
    assert not r.complete


def test_validation_reports_problems():
    m = parse_spec_text(
        "machine stack\nstates p\ninput a\nstack Z\nk 1\nstart p Z\n"
        "trans p a Z -> p ZZ\ntrans p a Z -> p \"\"\ntrans p a ZZ -> r Z\naccept p ZZ\n"
    )
    diags = validate_machine(m)
    text = "\n".join(diags)
    assert "nondeterministic choice" in text
    assert "undeclared state 'r'" in text
    assert "reads 2 stack cells" in text
    assert "accept predicate reads 2" in text
    bad = StackMachine(("p",), ("a",), ("Z",), 1, (Rule("p", "a", ("Z",), "p", ("Y",)),), (), "p", ("Z",))
    assert any("undeclared stack symbol 'Y'" in d for d in validate_machine(bad))
    assert validate_machine(ANBN) == [] and validate_machine(PAL) == []


def test_parser_rejects_undeclared_stack_symbols():
    with pytest.raises(ParseError):
        parse_spec_text("machine stack\nstates p\ninput a\nstack Z\nk 1\nstart p Z\ntrans p a Z -> p Y\n")
