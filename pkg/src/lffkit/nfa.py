"""Nondeterministic finite automata and their subset construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .engine import DetBehavior, EquivVerdict, bounded_bisim, run_word
from .errors import AlphabetError


@dataclass(frozen=True)
class Nfa:
    states: tuple
    alphabet: tuple
    trans: dict  # (state, letter) -> frozenset of states; missing means empty
    accepting: frozenset
    start: Optional[str] = None

    def successors(self, q, a):
        return self.trans.get((q, a), frozenset())

    def subset(self, qs: Iterable[str]) -> frozenset:
        qs = frozenset(qs)
        unknown = qs - set(self.states)
        if unknown:
            raise AlphabetError(f"unknown NFA states {sorted(unknown)}")
        return qs


def show_subset(S) -> str:
    return "{" + ",".join(sorted(S)) + "}"


def nfa_determinize(n: Nfa) -> DetBehavior:
    """Subset construction: states are frozensets of NFA states."""

    def output(S):
        return not S.isdisjoint(n.accepting)

    def step(S, a):
        out = set()
        for q in S:
            out |= n.successors(q, a)
        return frozenset(out)

    return DetBehavior(
        alphabet=n.alphabet,
        output=output,
        step=step,
        kind="bool",
        key=lambda S: S,
        show=show_subset,
        show_output=lambda v: "true" if v else "false",
    )


def nfa_accepts(n: Nfa, q0: str, w) -> bool:
    return run_word(nfa_determinize(n), n.subset([q0]), w)


def union_normal_form(S: frozenset, relation) -> frozenset:
    """Saturate ``S`` with the rewriting rules X -> X u Y for each related (X, Y)."""
    changed = True
    while changed:
        changed = False
        for A, B in relation:
            if A <= S and not B <= S:
                S = S | B
                changed = True
            if B <= S and not A <= S:
                S = S | A
                changed = True
    return S


def union_congruence(relation, pair) -> bool:
    """Closure hook: is ``pair`` in the union-congruence closure of ``relation``?"""
    X, Y = pair
    return union_normal_form(X, relation) == union_normal_form(Y, relation)


def nfa_equiv_hkc(n: Nfa, S1, S2) -> EquivVerdict:
    """Exact language equivalence of two subset states (bisimulation up to congruence)."""
    b = nfa_determinize(n)
    return bounded_bisim(b, n.subset(S1), b, n.subset(S2), None, closure=union_congruence)


def nfa_disjoint_union(n1: Nfa, n2: Nfa, tags=("1", "2")):
    """Combine two NFAs over the same alphabet; states are renamed ``tag.q``."""
    if set(n1.alphabet) != set(n2.alphabet):
        raise AlphabetError("NFAs have different input alphabets")

    def ren(tag, q):
        return f"{tag}.{q}"

    states, trans, accepting = [], {}, set()
    for tag, n in zip(tags, (n1, n2)):
        states += [ren(tag, q) for q in n.states]
        for (q, a), targets in n.trans.items():
            trans[(ren(tag, q), a)] = frozenset(ren(tag, t) for t in targets)
        accepting |= {ren(tag, q) for q in n.accepting}
    alphabet = tuple(sorted(set(n1.alphabet)))
    combined = Nfa(tuple(states), alphabet, trans, frozenset(accepting))
    return combined, (lambda q: ren(tags[0], q)), (lambda q: ren(tags[1], q))
