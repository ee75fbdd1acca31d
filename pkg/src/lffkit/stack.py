"""Real-time stack machines over the stack monad.

A machine reads one input letter per transition.  Each transition looks at
the topmost ``k`` stack cells (or at the whole stack when it is shorter than
``k``), moves to a new state and rewrites the cells it looked at.  Stacks
are tuples with the top at index 0.

Missing transitions of a deterministic machine go to an implicit dead state
that rejects everything and never touches the stack.  In the
nondeterministic variant a missing transition simply has no successors.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .engine import DetBehavior
from .errors import AlphabetError, PreconditionError, SearchBoundExceeded

DEAD = "#dead"


@dataclass(frozen=True)
class StackElem:
    """A k-bounded stack action; values are (state, replacement) pairs."""

    k: int
    short: dict = field(default_factory=dict)  # stacks shorter than k
    full: dict = field(default_factory=dict)  # top segments of length k

    def __call__(self, stack):
        return stack_apply(self, stack)


@dataclass(frozen=True)
class StackPredicate:
    k: int
    short: dict = field(default_factory=dict)
    full: dict = field(default_factory=dict)

    def __call__(self, stack):
        return pred_apply(self, stack)


def stack_apply(e: StackElem, stack):
    """Apply a stack action: only the top ``k`` cells are read and rewritten."""
    stack = tuple(stack)
    if len(stack) >= e.k:
        top, rest = stack[:e.k], stack[e.k:]
        if top not in e.full:
            return DEAD, stack
        q, v = e.full[top]
        return q, tuple(v) + rest
    if stack not in e.short:
        return DEAD, stack
    q, v = e.short[stack]
    return q, tuple(v)


def pred_apply(p: StackPredicate, stack) -> bool:
    stack = tuple(stack)
    if len(stack) >= p.k:
        return p.full.get(stack[:p.k], False)
    return p.short.get(stack, False)


@dataclass(frozen=True)
class Rule:
    state: str
    letter: str
    top: tuple
    target: str
    push: tuple
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class Accept:
    state: str
    top: tuple
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class StackMachine:
    states: tuple
    alphabet: tuple
    gamma: tuple
    k: int
    rules: tuple
    accepts: tuple
    start: str
    initial: tuple
    deterministic: bool = True

    @cached_property
    def _tables(self):
        tables = defaultdict(lambda: (defaultdict(list), defaultdict(list)))
        for r in self.rules:
            short, full = tables[(r.state, r.letter)]
            target = full if len(r.top) == self.k else short
            if (r.target, r.push) not in target[r.top]:
                target[r.top].append((r.target, r.push))
        return tables

    def delta(self, q, a) -> StackElem:
        """The deterministic action for (q, a); the first rule wins on conflicts."""
        short, full = self._tables.get((q, a), ({}, {}))
        return StackElem(
            self.k,
            {w: opts[0] for w, opts in short.items()},
            {w: opts[0] for w, opts in full.items()},
        )

    def delta_nd(self, q, a, stack):
        """All (state, stack) successors of a configuration in the nondeterministic reading."""
        stack = tuple(stack)
        short, full = self._tables.get((q, a), ({}, {}))
        if len(stack) >= self.k:
            top, rest = stack[:self.k], stack[self.k:]
            return {(t, v + rest) for t, v in full.get(top, ())}
        return {(t, v) for t, v in short.get(stack, ())}

    @cached_property
    def _outs(self):
        outs = {}
        for acc in self.accepts:
            p = outs.setdefault(acc.state, StackPredicate(self.k))
            (p.full if len(acc.top) == self.k else p.short)[acc.top] = True
        return outs

    def out(self, q) -> StackPredicate:
        return self._outs.get(q, StackPredicate(self.k))

    def initial_config(self, initial=None):
        return (self.start, tuple(self.initial if initial is None else initial))

    def max_push(self):
        return max((len(r.push) for r in self.rules), default=0)


def _check_letters(m, w):
    for a in w:
        if a not in m.alphabet:
            raise AlphabetError(f"letter {a!r} is not in the input alphabet {list(m.alphabet)}")


def dpda_trace(m: StackMachine, w, initial=None):
    """Configurations visited while reading ``w``: exactly ``len(w) + 1`` of them."""
    q, stack = m.initial_config(initial)
    trace = [(q, stack)]
    for a in w:
        if q == DEAD:
            trace.append((q, stack))
            continue
        q, stack = stack_apply(m.delta(q, a), stack)
        trace.append((q, stack))
    return trace


def dpda_member(m: StackMachine, w, initial=None) -> bool:
    _check_letters(m, w)
    q, stack = dpda_trace(m, w, initial)[-1]
    return q != DEAD and pred_apply(m.out(q), stack)


def npda_layers(m: StackMachine, w, max_configs=100_000, initial=None):
    """Breadth-first configuration sets, one layer per input letter."""
    if max_configs < 1:
        raise PreconditionError("max_configs must be >= 1")
    layer = {m.initial_config(initial)}
    layers = [layer]
    for i, a in enumerate(w):
        nxt = set()
        for q, stack in layer:
            nxt |= m.delta_nd(q, a, stack)
            if len(nxt) > max_configs:
                raise SearchBoundExceeded(
                    f"more than {max_configs} configurations after {i + 1} letters"
                )
        layer = nxt
        layers.append(layer)
    return layers


def npda_member(m: StackMachine, w, max_configs=100_000, initial=None) -> bool:
    _check_letters(m, w)
    final = npda_layers(m, w, max_configs, initial)[-1]
    return any(pred_apply(m.out(q), stack) for q, stack in final)


def show_config(c):
    q, stack = c
    return f"{q}:{''.join(stack) if all(len(s) == 1 for s in stack) else ','.join(stack)}"


def config_behavior(m: StackMachine) -> DetBehavior:
    """The determinized machine evaluated on concrete configurations (q, stack)."""
    if not m.deterministic:
        return nd_config_behavior(m)

    def output(c):
        q, stack = c
        return q != DEAD and pred_apply(m.out(q), stack)

    def step(c, a):
        q, stack = c
        if q == DEAD:
            return c
        return stack_apply(m.delta(q, a), stack)

    return DetBehavior(m.alphabet, output, step, "bool", show=show_config,
                       show_output=_show_bool)


def nd_config_behavior(m: StackMachine) -> DetBehavior:
    """Configuration sets of a nondeterministic machine as a deterministic behavior."""

    def output(cs):
        return any(pred_apply(m.out(q), stack) for q, stack in cs)

    def step(cs, a):
        nxt = set()
        for q, stack in cs:
            nxt |= m.delta_nd(q, a, stack)
        return frozenset(nxt)

    def show(cs):
        return "{" + ", ".join(sorted(show_config(c) for c in cs)) + "}"

    return DetBehavior(m.alphabet, output, step, "bool", show=show, show_output=_show_bool)


def _show_bool(v):
    return "true" if v else "false"


def validate_machine(m: StackMachine) -> list:
    """Diagnostics for undeclared symbols, k violations and determinism conflicts."""
    diags = []
    states, sigma, gamma = set(m.states), set(m.alphabet), set(m.gamma)

    def where(line):
        return f"line {line}: " if line is not None else ""

    def stack_symbols(word, line, what):
        for g in word:
            if g not in gamma:
                diags.append(f"{where(line)}undeclared stack symbol {g!r} in {what}")

    if m.k < 0:
        diags.append(f"k must be >= 0, got {m.k}")
    if m.start not in states:
        diags.append(f"start state {m.start!r} is not declared")
    stack_symbols(m.initial, None, "initial stack")
    seen = {}
    for r in m.rules:
        for q in (r.state, r.target):
            if q not in states:
                diags.append(f"{where(r.line)}undeclared state {q!r}")
        if r.letter not in sigma:
            diags.append(f"{where(r.line)}undeclared input letter {r.letter!r}")
        stack_symbols(r.top, r.line, "transition prefix")
        stack_symbols(r.push, r.line, "transition rewrite")
        if len(r.top) > m.k:
            diags.append(
                f"{where(r.line)}transition reads {len(r.top)} stack cells but k = {m.k}"
            )
        key = (r.state, r.letter, r.top)
        if m.deterministic and key in seen and seen[key] != (r.target, r.push):
            prefix = "".join(r.top) or '""'
            diags.append(
                f"{where(r.line)}nondeterministic choice for state {r.state!r}, "
                f"letter {r.letter!r}, prefix {prefix} in a deterministic machine"
            )
        seen.setdefault(key, (r.target, r.push))
    for acc in m.accepts:
        if acc.state not in states:
            diags.append(f"{where(acc.line)}undeclared state {acc.state!r} in accept")
        stack_symbols(acc.top, acc.line, "accept predicate")
        if len(acc.top) > m.k:
            diags.append(
                f"{where(acc.line)}accept predicate reads {len(acc.top)} stack cells but k = {m.k}"
            )
    return diags
