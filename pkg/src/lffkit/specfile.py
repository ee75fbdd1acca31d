"""Line-oriented text formats for machines, grammars, schemes and equation systems.

Every file starts with a header line naming its kind; ``#`` starts a comment.
:func:`parse_spec` returns the typed artifact and :func:`render_spec` writes
it back in canonical form, so that parsing the rendering gives an equal
artifact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .engine import FlatEquation, Guarded, Imported
from .errors import AlphabetError, ConfigError, LffError, ParseError
from .nfa import Nfa, nfa_determinize, show_subset
from .poly import PolyRing, format_poly, parse_poly
from .rps import Scheme, Signature, Term, format_term, parse_term, rps_validate
from .semiring import make_semiring
from .stack import Accept, Rule, StackMachine, config_behavior, validate_machine
from .wcfg import WeightedGrammar, behavior, start_state

HEADERS = {
    "machine nfa": "nfa",
    "machine stack": "stack",
    "machine stack-nd": "stack-nd",
    "grammar": "grammar",
    "rps": "rps",
    "eqsys": "eqsys",
}


@dataclass
class EqSystem:
    """A flat equation system plus the import handles it refers to."""

    equation: FlatEquation
    handles: dict = field(default_factory=dict)  # handle -> state text in the import spec


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_spec(path) -> object:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read spec file: {exc.strerror}", path=str(path)) from None
    try:
        return parse_spec_text(text)
    except ParseError as exc:
        raise ParseError(exc.message, exc.line, str(path)) from None


def parse_spec_text(text: str) -> object:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty spec file")
    no, header = lines[0]
    kind = HEADERS.get(" ".join(header.split()))
    if kind is None:
        raise ParseError(f"unknown header {header!r}", no)
    body = lines[1:]
    try:
        if kind == "nfa":
            return _parse_nfa(body)
        if kind in ("stack", "stack-nd"):
            return _parse_stack(body, deterministic=kind == "stack")
        if kind == "grammar":
            return _parse_grammar(body)
        if kind == "rps":
            return _parse_rps(body)
        return _parse_eqsys(body)
    except ParseError:
        raise
    except LffError as exc:
        raise ParseError(str(exc), no) from None


def spec_kind(artifact) -> str:
    if isinstance(artifact, Nfa):
        return "nfa"
    if isinstance(artifact, StackMachine):
        return "stack" if artifact.deterministic else "stack-nd"
    if isinstance(artifact, WeightedGrammar):
        return "grammar"
    if isinstance(artifact, Scheme):
        return "rps"
    if isinstance(artifact, EqSystem):
        return "eqsys"
    raise TypeError(f"not a spec artifact: {artifact!r}")


def _split(line):
    key, _, rest = line.partition(" ")
    return key, rest.strip()


def _once(seen, key, no):
    if key in seen:
        raise ParseError(f"duplicate {key!r} line", no)
    seen.add(key)


def _require(seen, keys, no=None):
    for k in keys:
        if k not in seen:
            raise ParseError(f"missing {k!r} line", no)


# -- words over stack symbols ---------------------------------------------


def parse_symbol_word(text, symbols, no=None, what="stack symbol"):
    """``""`` is empty; commas separate symbols; otherwise one symbol per character."""
    text = text.strip()
    if text in ('""', "''", "eps"):
        return ()
    if "," in text or any(len(s) > 1 for s in symbols):
        parts = tuple(p.strip() for p in text.split(",") if p.strip())
    else:
        parts = tuple(text)
    for p in parts:
        if p not in symbols:
            raise ParseError(f"undeclared {what} {p!r}", no)
    return parts


def format_symbol_word(word, symbols=None):
    if not word:
        return '""'
    if any(len(s) > 1 for s in (symbols or word)):
        return ",".join(word)
    return "".join(word)


# -- nfa ------------------------------------------------------------------


def _parse_nfa(body):
    seen = set()
    states, alphabet, accepting, start = (), (), set(), None
    trans = {}
    for no, line in body:
        key, rest = _split(line)
        if key == "states":
            _once(seen, key, no)
            states = tuple(rest.split())
        elif key == "input":
            _once(seen, key, no)
            alphabet = tuple(rest.split())
        elif key == "trans":
            _require(seen, ("states", "input"), no)
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise ParseError("expected 'trans q a -> q1 q2 ...'", no)
            parts = lhs.split()
            if len(parts) != 2:
                raise ParseError("expected 'trans q a -> q1 q2 ...'", no)
            q, a = parts
            targets = rhs.split()
            for s in [q] + targets:
                if s not in states:
                    raise ParseError(f"undeclared state {s!r}", no)
            if a not in alphabet:
                raise ParseError(f"undeclared input letter {a!r}", no)
            trans[(q, a)] = trans.get((q, a), frozenset()) | frozenset(targets)
        elif key == "accept":
            _require(seen, ("states",), no)
            for s in rest.split():
                if s not in states:
                    raise ParseError(f"undeclared state {s!r}", no)
                accepting.add(s)
        elif key == "start":
            _once(seen, key, no)
            _require(seen, ("states",), no)
            if rest not in states:
                raise ParseError(f"undeclared start state {rest!r}", no)
            start = rest
        else:
            raise ParseError(f"unknown nfa directive {key!r}", no)
    _require(seen, ("states", "input"))
    trans = {qa: ts for qa, ts in trans.items() if ts}
    return Nfa(states, alphabet, trans, frozenset(accepting), start)


def _render_nfa(n: Nfa):
    out = ["machine nfa", "states " + " ".join(n.states), "input " + " ".join(n.alphabet)]
    for q in n.states:
        for a in n.alphabet:
            targets = n.trans.get((q, a))
            if targets:
                out.append(f"trans {q} {a} -> " + " ".join(sorted(targets)))
    if n.accepting:
        out.append("accept " + " ".join(q for q in n.states if q in n.accepting))
    if n.start is not None:
        out.append(f"start {n.start}")
    return out


# -- stack machines ---------------------------------------------------------


def _parse_stack(body, deterministic):
    seen = set()
    states, alphabet, gamma, k = (), (), (), None
    start, initial = None, None
    rules, accepts = [], []
    for no, line in body:
        key, rest = _split(line)
        if key == "states":
            _once(seen, key, no)
            states = tuple(rest.split())
        elif key == "input":
            _once(seen, key, no)
            alphabet = tuple(rest.split())
        elif key == "stack":
            _once(seen, key, no)
            gamma = tuple(rest.split())
        elif key == "k":
            _once(seen, key, no)
            try:
                k = int(rest)
            except ValueError:
                raise ParseError(f"k must be an integer, got {rest!r}", no) from None
        elif key == "start":
            _once(seen, key, no)
            _require(seen, ("stack",), no)
            parts = rest.split(None, 1)
            if len(parts) != 2:
                raise ParseError("expected 'start q <initial stack>'", no)
            start = parts[0]
            initial = parse_symbol_word(parts[1], gamma, no)
        elif key == "trans":
            _require(seen, ("stack",), no)
            lhs, arrow, rhs = rest.partition("->")
            lparts, rparts = lhs.split(), rhs.split()
            if not arrow or len(lparts) != 3 or len(rparts) != 2:
                raise ParseError("expected 'trans q a w -> q2 v'", no)
            q, a, w = lparts
            q2, v = rparts
            rules.append(Rule(q, a, parse_symbol_word(w, gamma, no),
                              q2, parse_symbol_word(v, gamma, no), no))
        elif key == "accept":
            _require(seen, ("stack",), no)
            parts = rest.split()
            if len(parts) not in (1, 2):
                raise ParseError("expected 'accept q [w]'", no)
            top = parse_symbol_word(parts[1], gamma, no) if len(parts) == 2 else ()
            accepts.append(Accept(parts[0], top, no))
        else:
            raise ParseError(f"unknown stack directive {key!r}", no)
    _require(seen, ("states", "input", "stack", "k", "start"))
    return StackMachine(states, alphabet, gamma, k, tuple(rules), tuple(accepts),
                        start, initial, deterministic)


def _render_stack(m: StackMachine):
    g = m.gamma
    out = [
        "machine stack" if m.deterministic else "machine stack-nd",
        "states " + " ".join(m.states),
        "input " + " ".join(m.alphabet),
        "stack " + " ".join(m.gamma),
        f"k {m.k}",
        f"start {m.start} {format_symbol_word(m.initial, g)}",
    ]
    for r in m.rules:
        out.append(f"trans {r.state} {r.letter} {format_symbol_word(r.top, g)} -> "
                   f"{r.target} {format_symbol_word(r.push, g)}")
    for acc in m.accepts:
        out.append(f"accept {acc.state} {format_symbol_word(acc.top, g)}")
    return out


# -- grammars ---------------------------------------------------------------


def _parse_grammar(body):
    seen = set()
    S, nts, alphabet = None, (), ()
    start_text, out, steps = None, {}, {}
    ring = None
    for no, line in body:
        key, rest = _split(line)
        if key == "semiring":
            _once(seen, key, no)
            try:
                S = make_semiring(rest)
            except ConfigError as exc:
                raise ParseError(str(exc), no) from None
        elif key == "nonterminals":
            _once(seen, key, no)
            nts = tuple(rest.split())
        elif key == "input":
            _once(seen, key, no)
            alphabet = tuple(rest.split())
        elif key in ("start", "out", "step"):
            _require(seen, ("semiring", "nonterminals", "input"), no)
            if ring is None:
                try:
                    ring = PolyRing(S, nts)
                except AlphabetError as exc:
                    raise ParseError(str(exc), no) from None
            if key == "start":
                _once(seen, key, no)
                start_text = (rest, no)
            elif key == "out":
                lhs, eq, rhs = rest.partition("=")
                x = lhs.strip()
                if not eq or x not in nts:
                    raise ParseError(f"expected 'out X = <value>' with X declared, got {rest!r}", no)
                try:
                    out[x] = S.add(out.get(x, S.zero), S.parse(rhs))
                except ConfigError as exc:
                    raise ParseError(str(exc), no) from None
            else:
                lhs, eq, rhs = rest.partition("=")
                parts = lhs.split()
                if not eq or len(parts) != 2:
                    raise ParseError(f"expected 'step X a = <poly>', got {rest!r}", no)
                x, a = parts
                if x not in nts:
                    raise ParseError(f"undeclared nonterminal {x!r}", no)
                if a not in alphabet:
                    raise ParseError(f"undeclared input letter {a!r}", no)
                p = parse_poly(ring, rhs, no)
                steps[(x, a)] = steps[(x, a)] + p if (x, a) in steps else p
        else:
            raise ParseError(f"unknown grammar directive {key!r}", no)
    _require(seen, ("semiring", "nonterminals", "input"))
    if not nts:
        raise ParseError("a grammar needs at least one nonterminal")
    if ring is None:
        ring = PolyRing(S, nts)
    start = parse_poly(ring, start_text[0], start_text[1]) if start_text else None
    return WeightedGrammar(S, nts, alphabet, out, steps, start)


def _render_grammar(g: WeightedGrammar):
    S = g.semiring
    lines = [
        "grammar",
        f"semiring {S.name}",
        "nonterminals " + " ".join(g.nonterminals),
        "input " + " ".join(g.alphabet),
        f"start {format_poly(g.start)}",
    ]
    for x in g.nonterminals:
        if g.o(x) != S.zero:
            lines.append(f"out {x} = {S.format(g.o(x))}")
    for x in g.nonterminals:
        for a in g.alphabet:
            p = g.d(x, a)
            if not p.is_zero():
                lines.append(f"step {x} {a} = {format_poly(p)}")
    return lines


# -- recursive program schemes ----------------------------------------------


def _parse_arities(rest, no):
    out = {}
    for item in rest.split():
        name, slash, n = item.rpartition("/")
        if not slash or not name or not n.isdigit():
            raise ParseError(f"expected name/arity, got {item!r}", no)
        out[name] = int(n)
    return out


def _parse_rps(body):
    seen = set()
    givens, defined, defs, lines = {}, {}, {}, {}
    for no, line in body:
        key, rest = _split(line)
        if key == "givens" and "=" not in line:
            _once(seen, key, no)
            givens = _parse_arities(rest, no)
        elif key == "defs" and "=" not in line:
            _once(seen, key, no)
            defined = _parse_arities(rest, no)
        else:
            lhs, eq, rhs = line.partition("=")
            if not eq:
                raise ParseError(f"expected 'name(vars) = term', got {line!r}", no)
            head = parse_term(lhs)
            if any(a.args for a in head.args):
                raise ParseError("parameters must be plain variables", no)
            if head.head in defs:
                raise ParseError(f"{head.head!r} is defined twice", no)
            defs[head.head] = (tuple(a.head for a in head.args), parse_term(rhs))
            lines[head.head] = no
    return Scheme(Signature(givens, defined), defs, lines)


def _render_rps(s: Scheme):
    sig = s.signature
    out = [
        "rps",
        "givens " + " ".join(f"{n}/{a}" for n, a in sig.givens.items()),
        "defs " + " ".join(f"{n}/{a}" for n, a in sig.defined.items()),
    ]
    for name, (params, body) in s.defs.items():
        out.append(f"{format_term(Term(name, tuple(Term(p) for p in params)))} = {format_term(body)}")
    return out


# -- flat equation systems ----------------------------------------------------


def _parse_eqsys(body):
    seen = set()
    S, alphabet = None, ()
    handles, eqs = {}, {}
    for no, line in body:
        key, rest = _split(line)
        if key == "output":
            _once(seen, key, no)
            try:
                S = make_semiring(rest)
            except ConfigError as exc:
                raise ParseError(str(exc), no) from None
        elif key == "input":
            _once(seen, key, no)
            alphabet = tuple(rest.split())
        elif key == "handle":
            name, eq, state = rest.partition("=")
            name = name.strip()
            if not eq or not name or not state.strip():
                raise ParseError("expected 'handle h = <state>'", no)
            handles[name] = state.strip()
        else:
            _require(seen, ("output", "input"), no)
            lhs, eq, rhs = line.partition("=")
            x = lhs.strip()
            if not eq or not x or " " in x:
                raise ParseError(f"expected 'x = ...', got {line!r}", no)
            if x in eqs:
                raise ParseError(f"variable {x!r} defined twice", no)
            rhs = rhs.strip()
            if rhs.startswith("import"):
                h = rhs[len("import"):].strip()
                if not h:
                    raise ParseError("expected 'x = import h'", no)
                eqs[x] = (Imported(h), no)
                continue
            parts = [p.strip() for p in rhs.split(";")]
            try:
                o = S.parse(parts[0])
            except ConfigError as exc:
                raise ParseError(str(exc), no) from None
            succ = {}
            for p in parts[1:]:
                a, arrow, y = p.partition("->")
                a, y = a.strip(), y.strip()
                if not arrow or not a or not y:
                    raise ParseError(f"expected 'a -> y', got {p!r}", no)
                if a not in alphabet:
                    raise ParseError(f"undeclared input letter {a!r}", no)
                succ[a] = y
            missing = [a for a in alphabet if a not in succ]
            if missing:
                raise ParseError(f"{x}: no successor for {missing}", no)
            eqs[x] = (Guarded(o, succ), no)
    _require(seen, ("output", "input"))
    for x, (rhs, no) in eqs.items():
        if isinstance(rhs, Guarded):
            for y in rhs.succ.values():
                if y not in eqs:
                    raise ParseError(f"undeclared variable {y!r}", no)
        elif rhs.handle not in handles:
            raise ParseError(f"dangling import {rhs.handle!r}", no)
    equation = FlatEquation(alphabet, S.name, {x: rhs for x, (rhs, _) in eqs.items()})
    return EqSystem(equation, handles)


def _render_eqsys(s: EqSystem):
    e = s.equation
    S = make_semiring(e.kind)
    out = ["eqsys", f"output {e.kind}", "input " + " ".join(e.alphabet)]
    for h, text in s.handles.items():
        out.append(f"handle {h} = {text}")
    for x, rhs in e.equations.items():
        if isinstance(rhs, Imported):
            out.append(f"{x} = import {rhs.handle}")
        else:
            succ = " ; ".join(f"{a} -> {rhs.succ[a]}" for a in e.alphabet)
            out.append(f"{x} = {S.format(rhs.out)} ; {succ}" if succ else f"{x} = {S.format(rhs.out)}")
    return out


_RENDERERS = {
    "nfa": _render_nfa,
    "stack": _render_stack,
    "stack-nd": _render_stack,
    "grammar": _render_grammar,
    "rps": _render_rps,
    "eqsys": _render_eqsys,
}


def render_spec(artifact) -> str:
    return "\n".join(_RENDERERS[spec_kind(artifact)](artifact)) + "\n"


def validate_spec(artifact) -> list:
    """Static diagnostics for any artifact (empty list when clean)."""
    if isinstance(artifact, StackMachine):
        return validate_machine(artifact)
    if isinstance(artifact, Scheme):
        return rps_validate(artifact)
    if isinstance(artifact, EqSystem):
        return artifact.equation.validate()
    return []


def parse_state(artifact, text: Optional[str], mode: str = "hat", initial=None):
    """Read a state of the behavior of ``artifact`` from its textual form.

    ``None`` or ``-`` selects the artifact's start state.  NFA states are
    ``q`` or ``{q1,q2}``; stack configurations are ``q`` or ``q:stack``;
    grammar states are polynomials.
    """
    if text is not None and text.strip() in ("", "-"):
        text = None
    if isinstance(artifact, Nfa):
        if text is None:
            if artifact.start is None:
                raise ConfigError("the NFA has no start state; give one explicitly")
            return frozenset([artifact.start])
        inner = text.strip().strip("{}")
        names = [t for t in inner.replace(",", " ").split()]
        return artifact.subset(names)
    if isinstance(artifact, StackMachine):
        if text is None:
            config = artifact.initial_config(initial)
        else:
            q, colon, st = text.strip().partition(":")
            if q not in artifact.states:
                raise ConfigError(f"unknown state {q!r}")
            if colon:
                stack = parse_symbol_word(st, artifact.gamma) if st else ()
            else:
                stack = artifact.initial_config(initial)[1]
            config = (q, stack)
        return config if artifact.deterministic else frozenset([config])
    if isinstance(artifact, WeightedGrammar):
        if text is None:
            return start_state(artifact, mode)
        ring = artifact.sharp_ring if mode == "sharp" else artifact.ring
        try:
            return parse_poly(ring, text)
        except ParseError as exc:
            raise ConfigError(exc.message) from None
    raise ConfigError(f"{spec_kind(artifact)} specs have no states")


def behavior_of(artifact, mode: str = "hat"):
    if isinstance(artifact, Nfa):
        return nfa_determinize(artifact)
    if isinstance(artifact, StackMachine):
        return config_behavior(artifact)
    if isinstance(artifact, WeightedGrammar):
        return behavior(artifact, mode)
    raise ConfigError(f"{spec_kind(artifact)} specs do not define a behavior")


__all__ = [
    "EqSystem",
    "behavior_of",
    "format_symbol_word",
    "parse_spec",
    "parse_spec_text",
    "parse_state",
    "parse_symbol_word",
    "render_spec",
    "show_subset",
    "spec_kind",
    "validate_spec",
]
