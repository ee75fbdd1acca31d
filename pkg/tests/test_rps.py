import pytest
from hypothesis import given, settings, strategies as st

from lffkit.errors import ParseError, PreconditionError, SchemeError
from lffkit.rps import (
    CUT,
    Scheme,
    Signature,
    Term,
    format_term,
    parse_term,
    render_tree,
    rps_unfold,
    rps_validate,
    tree_prefix_eq,
    truncate,
)
from lffkit.specfile import parse_spec, parse_spec_text

from oracles import fixture

PHI = parse_spec(fixture("phi.rps"))


def scheme(text):
    return parse_spec_text("rps\n" + text)


def test_parse_and_format_terms():
    t = parse_term("+(z, phi(×(⋆, z)))")
    assert t.head == "+" and t.args[0] == Term("z")
    assert format_term(t) == "+(z, phi(×(⋆, z)))"
    assert parse_term("⋆()") == Term("⋆")
    with pytest.raises(ParseError):
        parse_term("+(z,")
    with pytest.raises(ParseError):
        parse_term("f(x) y")


def test_depth_zero_shows_the_root_only():
    assert format_term(rps_unfold(PHI, parse_term("phi(z)"), 0).root) == "+(..., ...)"


def test_depth_two():
    t = rps_unfold(PHI, parse_term("phi(z)"), 2).root
    assert format_term(t) == "+(z, +(×(..., ...), +(..., ...)))"


def test_render_tree_indents_children():
    t = rps_unfold(PHI, parse_term("phi(z)"), 1).root
    assert render_tree(t) == "+\n  z\n  +\n    ...\n    ..."


def test_mutual_recursion_fixture():
    s = parse_spec(fixture("mutual.rps"))
    assert rps_validate(s) == []
    t = rps_unfold(s, parse_term("psi(c)"), 3).root
    assert format_term(t) == "f(c, g(f(g(...), g(...))))"


def test_given_roots_are_left_alone():
    t = rps_unfold(PHI, parse_term("×(⋆, z)"), 3).root
    assert t == parse_term("×(⋆, z)")


def test_unguarded_scheme_is_rejected():
    s = scheme("givens f/1\ndefs psi/1\npsi(x) = psi(x)\n")
    assert any("unguarded" in d for d in rps_validate(s))
    with pytest.raises(SchemeError):
        rps_unfold(s, parse_term("psi(x)"), 2)


def test_unguarded_through_a_projection():
    s = scheme("givens f/1\ndefs phi/1 id/1\nphi(z) = id(phi(z))\nid(y) = y\n")
    assert any("unguarded" in d for d in rps_validate(s))


def test_guarded_through_a_projection():
    s = scheme("givens f/1\ndefs phi/1 id/1\nphi(z) = id(f(phi(z)))\nid(y) = y\n")
    assert rps_validate(s) == []
    assert format_term(rps_unfold(s, parse_term("phi(c)"), 2).root) == "f(f(f(...)))"


def test_arity_errors():
    s = scheme("givens f/2\ndefs g/1\ng(x) = f(x)\n")
    assert any("arity 2" in d for d in rps_validate(s))


def test_prefix_comparison_needs_enough_depth():
    t2 = rps_unfold(PHI, parse_term("phi(z)"), 2)
    t4 = rps_unfold(PHI, parse_term("phi(z)"), 4)
    assert tree_prefix_eq(t2, t4, 2)
    with pytest.raises(PreconditionError):
        tree_prefix_eq(t2, t4, 3)


@settings(max_examples=20, deadline=None)
@given(d=st.integers(0, 6), e=st.integers(0, 6))
def test_truncation_coherence(d, e):
    lo, hi = sorted((d, e))
    small = rps_unfold(PHI, parse_term("phi(z)"), lo)
    big = rps_unfold(PHI, parse_term("phi(z)"), hi)
    assert truncate(big.root, lo) == small.root


def depth(t):
    return 0 if not t.args else 1 + max(depth(a) for a in t.args)


@given(d=st.integers(0, 7))
def test_prefix_has_the_requested_depth(d):
    t = rps_unfold(PHI, parse_term("phi(z)"), d).root
    assert depth(t) == d + 1
    assert truncate(t, d) == t
