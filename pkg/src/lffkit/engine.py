"""Deterministic behaviors and the generic algorithms that run on them.

Every determinized machine in lffkit (subset automata, stack machine
configurations, weighted grammar states) is exposed as a
:class:`DetBehavior`: an output map and a per-letter step map on some
state space.  Nothing here materializes the state space; states are
produced lazily and compared through their canonical ``key``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping, Optional

from .errors import AlphabetError, OutputKindMismatch, PreconditionError, ResolutionError


def _identity(x):
    return x


@dataclass(frozen=True, eq=False)
class DetBehavior:
    """A Moore-style deterministic system over a finite alphabet.

    ``kind`` names the output type (``bool``, ``nat``, ...) so that only
    comparable behaviors are compared.  ``key`` maps a state to a hashable
    canonical form and ``show`` renders it for listings.
    """

    alphabet: tuple
    output: Callable[[Any], Any]
    step: Callable[[Any, str], Any]
    kind: str
    key: Callable[[Any], Hashable] = _identity
    show: Callable[[Any], str] = str
    show_output: Callable[[Any], str] = str

    def letters(self):
        """Input letters in lexicographic order (the witness order)."""
        return tuple(sorted(self.alphabet))


def check_word(b: DetBehavior, w):
    for a in w:
        if a not in b.alphabet:
            raise AlphabetError(f"letter {a!r} is not in the input alphabet {list(b.alphabet)}")
    return tuple(w)


def step_word(b: DetBehavior, q, w):
    for a in check_word(b, w):
        q = b.step(q, a)
    return q


def run_word(b: DetBehavior, q0, w):
    """Observe the state reached from ``q0`` after reading ``w``."""
    return b.output(step_word(b, q0, w))


def words_up_to(alphabet, n):
    """All words of length <= n in shortlex order."""
    letters = sorted(alphabet)
    for k in range(n + 1):
        yield from itertools.product(letters, repeat=k)


def outputs_up_to(b: DetBehavior, q0, n) -> dict:
    """Map every word of length <= n to its output, sharing prefixes."""
    table = {(): b.output(q0)}
    layer = [((), q0)]
    for _ in range(n):
        nxt = []
        for w, q in layer:
            for a in b.letters():
                q2 = b.step(q, a)
                table[w + (a,)] = b.output(q2)
                nxt.append((w + (a,), q2))
        layer = nxt
    return table


@dataclass
class Reachable:
    states: list
    complete: bool

    def __len__(self):
        return len(self.states)


def enumerate_reachable(b: DetBehavior, q0, max_states: int) -> Reachable:
    """Breadth-first closure of ``{q0}`` under ``step``, capped at ``max_states``.

    ``complete`` is true iff the closure was exhausted within the cap.
    States are returned sorted by their printed form.
    """
    if max_states < 1:
        raise PreconditionError("max_states must be >= 1")
    seen = {b.key(q0): q0}
    queue = deque([q0])
    complete = True
    while queue:
        q = queue.popleft()
        for a in b.letters():
            q2 = b.step(q, a)
            k = b.key(q2)
            if k in seen:
                continue
            if len(seen) >= max_states:
                complete = False
                queue.clear()
                break
            seen[k] = q2
            queue.append(q2)
    states = sorted(seen.values(), key=b.show)
    return Reachable(states, complete)


@dataclass
class EquivVerdict:
    """Outcome of a bisimulation search.

    ``equivalent`` with ``exhausted`` set means the explored relation is a
    bisimulation (up to the closure), hence exact equivalence; otherwise
    outputs agree on all words of length <= ``depth``.
    """

    equivalent: bool
    depth: Optional[int] = None
    witness: Optional[tuple] = None
    relation: list = field(default_factory=list)
    exhausted: bool = False

    @property
    def exact(self):
        return self.equivalent and self.exhausted


# closure(relation, pair) -> True when pair is already implied by relation.
ClosureHook = Callable[[list, tuple], bool]


def _check_compatible(b1: DetBehavior, b2: DetBehavior):
    if b1.kind != b2.kind:
        raise OutputKindMismatch(f"cannot compare {b1.kind} outputs with {b2.kind} outputs")
    if set(b1.alphabet) != set(b2.alphabet):
        raise AlphabetError(f"input alphabets differ: {sorted(b1.alphabet)} vs {sorted(b2.alphabet)}")


def _pair_bfs(b1, q1, b2, q2, depth, closure):
    relation = []
    seen = {(b1.key(q1), b2.key(q2))}
    queue = deque([(q1, q2, ())])
    exhausted = True
    letters = b1.letters()
    while queue:
        s1, s2, w = queue.popleft()
        if closure is not None and closure(relation, (s1, s2)):
            continue
        if b1.output(s1) != b2.output(s2):
            return EquivVerdict(False, depth, w, relation, False)
        relation.append((s1, s2))
        if depth is not None and len(w) >= depth:
            exhausted = False
            continue
        for a in letters:
            t1, t2 = b1.step(s1, a), b2.step(s2, a)
            k = (b1.key(t1), b2.key(t2))
            if k in seen:
                continue
            seen.add(k)
            queue.append((t1, t2, w + (a,)))
    return EquivVerdict(True, depth, None, relation, exhausted)


def bounded_bisim(b1: DetBehavior, q1, b2: DetBehavior, q2,
                  depth: Optional[int], closure: Optional[ClosureHook] = None) -> EquivVerdict:
    """Breadth-first search for a bisimulation (up to ``closure``) between two states.

    ``depth=None`` removes the depth bound; this terminates only when the
    reachable pair space, or its quotient by the closure, is finite.
    A returned witness is shortest, and lexicographically least among the
    shortest ones.
    """
    _check_compatible(b1, b2)
    if depth is not None and depth < 0:
        raise PreconditionError("depth must be >= 0")
    verdict = _pair_bfs(b1, q1, b2, q2, depth, closure)
    if not verdict.equivalent and closure is not None:
        # Skipping pairs can hide a shorter witness; rerun plainly within its length.
        plain = _pair_bfs(b1, q1, b2, q2, len(verdict.witness), None)
        verdict.witness = plain.witness
    return verdict


# -- flat equations ---------------------------------------------------------


@dataclass(frozen=True)
class Guarded:
    out: Any
    succ: Mapping[str, str]


@dataclass(frozen=True)
class Imported:
    handle: str


@dataclass
class FlatEquation:
    """A finite system assigning each variable a guarded step or an import."""

    alphabet: tuple
    kind: str
    equations: dict  # variable -> Guarded | Imported, in declaration order

    def variables(self):
        return list(self.equations)

    def validate(self):
        problems = []
        for x, rhs in self.equations.items():
            if isinstance(rhs, Guarded):
                missing = [a for a in self.alphabet if a not in rhs.succ]
                if missing:
                    problems.append(f"{x}: no successor for {missing}")
                for a, y in rhs.succ.items():
                    if a not in self.alphabet:
                        problems.append(f"{x}: unknown letter {a!r}")
                    if y not in self.equations:
                        problems.append(f"{x}: successor {y!r} is not a variable")
        return problems


def solve_flat_equation(e: FlatEquation, imports: Optional[DetBehavior] = None,
                        q_imports: Optional[Mapping[str, Any]] = None) -> DetBehavior:
    """The solution of ``e`` as a behavior on variables plus imported states.

    States are ``("var", x)`` for variables and ``("ext", q)`` for states of
    ``imports``.  An imported variable observes and steps exactly like its
    handle's state.
    """
    q_imports = dict(q_imports or {})
    problems = e.validate()
    if problems:
        raise ResolutionError("; ".join(problems))
    for x, rhs in e.equations.items():
        if isinstance(rhs, Imported):
            if imports is None:
                raise ResolutionError(f"{x} imports {rhs.handle!r} but no import behavior was supplied")
            if rhs.handle not in q_imports:
                raise ResolutionError(f"{x} imports unknown handle {rhs.handle!r}")
    if imports is not None:
        _check_compatible_kind(e, imports)

    def origin(state):
        tag, v = state
        if tag == "ext":
            return v
        rhs = e.equations[v]
        return q_imports[rhs.handle] if isinstance(rhs, Imported) else None

    def output(state):
        q = origin(state)
        if q is not None:
            return imports.output(q)
        return e.equations[state[1]].out

    def step(state, a):
        q = origin(state)
        if q is not None:
            return ("ext", imports.step(q, a))
        return ("var", e.equations[state[1]].succ[a])

    def key(state):
        tag, v = state
        return (tag, imports.key(v)) if tag == "ext" else state

    def show(state):
        tag, v = state
        return f"<{imports.show(v)}>" if tag == "ext" else v

    return DetBehavior(
        alphabet=tuple(e.alphabet),
        output=output,
        step=step,
        kind=e.kind,
        key=key,
        show=show,
        show_output=imports.show_output if imports is not None else str,
    )


def _check_compatible_kind(e: FlatEquation, imports: DetBehavior):
    if e.kind != imports.kind:
        raise OutputKindMismatch(f"equation outputs are {e.kind} but imports produce {imports.kind}")
    if set(e.alphabet) != set(imports.alphabet):
        raise AlphabetError("equation and import alphabets differ")


@dataclass
class SolutionCheck:
    states: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def check_solution(e: FlatEquation, sol: DetBehavior, imports: Optional[DetBehavior],
                   q_imports: Optional[Mapping[str, Any]], depth: int) -> SolutionCheck:
    """Verify the solution square at every state reachable within ``depth`` letters.

    For a guarded variable the solution must emit its declared output and
    step to its declared successors; for an imported variable (and every
    imported state) it must agree with the import behavior.
    """
    q_imports = dict(q_imports or {})
    failures = []
    seen = set()
    layer = []
    for x in e.variables():
        s = ("var", x)
        if sol.key(s) not in seen:
            seen.add(sol.key(s))
            layer.append(s)
    explored = 0
    for level in range(depth + 1):
        nxt = []
        for s in layer:
            explored += 1
            failures.extend(_check_state(e, sol, imports, q_imports, s))
            if level == depth:
                continue
            for a in sol.letters():
                t = sol.step(s, a)
                if sol.key(t) not in seen:
                    seen.add(sol.key(t))
                    nxt.append(t)
        layer = nxt
    return SolutionCheck(explored, failures)


def _check_state(e, sol, imports, q_imports, s):
    tag, v = s
    rhs = e.equations.get(v) if tag == "var" else None
    if isinstance(rhs, Guarded):
        want_out = rhs.out
        want = {a: ("var", rhs.succ[a]) for a in e.alphabet}
    else:
        q = q_imports[rhs.handle] if isinstance(rhs, Imported) else v
        want_out = imports.output(q)
        want = {a: ("ext", imports.step(q, a)) for a in e.alphabet}
    bad = []
    if sol.output(s) != want_out:
        bad.append(f"{sol.show(s)}: output {sol.output(s)!r} != {want_out!r}")
    for a in e.alphabet:
        if sol.key(sol.step(s, a)) != sol.key(want[a]):
            bad.append(f"{sol.show(s)}: step on {a!r} disagrees")
    return bad
