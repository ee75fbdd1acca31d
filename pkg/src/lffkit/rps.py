"""Recursive program schemes and the unfolding of their solutions.

A scheme defines new operation symbols by mutually recursive equations over
a signature of givens.  Its solution assigns each defined symbol a possibly
infinite tree over the givens; :func:`rps_unfold` computes the prefix of
that tree down to a requested depth, cutting everything below with
:data:`CUT`.

Depth counts tree levels from the root (level 0): nodes on levels ``0..d``
carry their label and every child position on level ``d + 1`` holds a cut.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError, PreconditionError, SchemeError


@dataclass(frozen=True)
class Term:
    head: str
    args: tuple = ()

    def __str__(self):
        return format_term(self)


CUT = Term("⊥")


@dataclass
class Signature:
    givens: dict  # name -> arity
    defined: dict  # name -> arity

    def arity(self, name):
        if name in self.givens:
            return self.givens[name]
        return self.defined.get(name)


@dataclass
class Scheme:
    signature: Signature
    defs: dict  # defined name -> (params tuple, body Term)
    lines: dict = field(default_factory=dict, compare=False)  # defined name -> source line


@dataclass(frozen=True)
class TreePrefix:
    root: Term
    depth: int

    def __str__(self):
        return format_term(self.root)


# -- term syntax ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([(),])|([^\s(),=]+))")


def tokenize(text):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} in term {text!r}")
        toks.append(m.group(1) or m.group(2))
        pos = m.end()
    return toks


def parse_term(text: str) -> Term:
    """Prefix notation: ``+(z, phi(×(⋆, z)))``; constants may omit ``()``."""
    toks = tokenize(text)
    if not toks:
        raise ParseError("empty term")
    term, i = _parse(toks, 0, text)
    if i != len(toks):
        raise ParseError(f"trailing input {' '.join(toks[i:])!r} in term {text!r}")
    return term


def _parse(toks, i, text):
    if i >= len(toks) or toks[i] in "(),":
        raise ParseError(f"expected a symbol in term {text!r}")
    head = toks[i]
    i += 1
    if i < len(toks) and toks[i] == "(":
        i += 1
        args = []
        if i < len(toks) and toks[i] == ")":
            return Term(head, ()), i + 1
        while True:
            arg, i = _parse(toks, i, text)
            args.append(arg)
            if i >= len(toks):
                raise ParseError(f"unbalanced parentheses in term {text!r}")
            if toks[i] == ",":
                i += 1
                continue
            if toks[i] == ")":
                return Term(head, tuple(args)), i + 1
            raise ParseError(f"expected ',' or ')' in term {text!r}")
    return Term(head), i


def format_term(t: Term, cut="...") -> str:
    if t == CUT:
        return cut
    if not t.args:
        return t.head
    return f"{t.head}({', '.join(format_term(a, cut) for a in t.args)})"


def render_tree(t: Term, indent="  ", cut="...") -> str:
    """One node per line, children indented under their parent."""
    lines = []

    def walk(node, level):
        lines.append(indent * level + (cut if node == CUT else node.head))
        for a in node.args:
            walk(a, level + 1)

    walk(t, 0)
    return "\n".join(lines)


# -- validation -------------------------------------------------------------


def _check_term(sig: Signature, t: Term, params, where, diags):
    n = sig.arity(t.head)
    if n is None:
        if params is not None and t.head not in params:
            diags.append(f"{where}: unknown symbol {t.head!r}")
        elif t.args:
            diags.append(f"{where}: variable {t.head!r} applied to arguments")
    elif n != len(t.args):
        diags.append(f"{where}: {t.head!r} has arity {n} but is applied to {len(t.args)} argument(s)")
    for a in t.args:
        _check_term(sig, a, params, where, diags)


def _projections(scheme: Scheme):
    """For each defined symbol, the argument positions its unfolding may expose as head."""
    proj = {f: set() for f in scheme.defs}

    def projs(t, params):
        if t.head in params and not t.args:
            return {params.index(t.head)}
        if t.head in scheme.defs:
            out = set()
            for j in proj[t.head]:
                if j < len(t.args):
                    out |= projs(t.args[j], params)
            return out
        return set()

    changed = True
    while changed:
        changed = False
        for f, (params, body) in scheme.defs.items():
            new = projs(body, params)
            if not new <= proj[f]:
                proj[f] |= new
                changed = True
    return proj


def head_dependencies(scheme: Scheme, t: Term, proj=None) -> set:
    """Defined symbols that may have to be unfolded before ``t`` shows a head."""
    if proj is None:
        proj = _projections(scheme)
    if t.head not in scheme.defs:
        return set()
    deps = {t.head}
    for j in proj[t.head]:
        if j < len(t.args):
            deps |= head_dependencies(scheme, t.args[j], proj)
    return deps


def _head_cycle(scheme: Scheme):
    proj = _projections(scheme)
    graph = {f: head_dependencies(scheme, body, proj) for f, (_, body) in scheme.defs.items()}
    state = {}

    def visit(f, path):
        state[f] = "active"
        for g in sorted(graph[f]):
            if state.get(g) == "active":
                return path[path.index(g):] + [g] if g in path else [f, g]
            if g not in state:
                found = visit(g, path + [g])
                if found:
                    return found
        state[f] = "done"
        return None

    for f in sorted(graph):
        if f not in state:
            found = visit(f, [f])
            if found:
                return found
    return None


def rps_validate(scheme: Scheme) -> list:
    """Arity and guardedness diagnostics; empty iff the scheme is well formed."""
    sig = scheme.signature
    diags = []
    for name in sorted(set(sig.givens) & set(sig.defined)):
        diags.append(f"{name!r} is declared both as a given and as a defined symbol")
    for name, n in list(sig.givens.items()) + list(sig.defined.items()):
        if n < 0:
            diags.append(f"{name!r} has negative arity")
        if name == CUT.head:
            diags.append(f"{name!r} is reserved")
    for name in sig.defined:
        if name not in scheme.defs:
            diags.append(f"{name!r} is declared but has no definition")
    for name, (params, body) in scheme.defs.items():
        where = f"line {scheme.lines[name]}" if name in scheme.lines else name
        if name not in sig.defined:
            diags.append(f"{where}: {name!r} is defined but not declared")
            continue
        if len(params) != sig.defined[name]:
            diags.append(f"{where}: {name!r} has arity {sig.defined[name]} but {len(params)} parameter(s)")
        if len(set(params)) != len(params):
            diags.append(f"{where}: repeated parameter in {name!r}")
        for p in params:
            if sig.arity(p) is not None:
                diags.append(f"{where}: parameter {p!r} clashes with a symbol")
        _check_term(sig, body, tuple(params), where, diags)
    if not diags:
        cycle = _head_cycle(scheme)
        if cycle:
            diags.append(
                "unguarded recursion: " + " -> ".join(cycle)
                + " can unfold forever without producing a given symbol"
            )
    return diags


# -- unfolding --------------------------------------------------------------


def substitute(t: Term, env: dict) -> Term:
    if not t.args and t.head in env:
        return env[t.head]
    if not t.args:
        return t
    return Term(t.head, tuple(substitute(a, env) for a in t.args))


def head_normalize(scheme: Scheme, t: Term, fuel=10_000) -> Term:
    """Unfold defined symbols at the root until a given or a variable shows."""
    for _ in range(fuel):
        if t.head not in scheme.defs:
            return t
        params, body = scheme.defs[t.head]
        t = substitute(body, dict(zip(params, t.args)))
    raise SchemeError([f"no head symbol after {fuel} unfoldings"])


def rps_unfold(scheme: Scheme, root: Term, d: int) -> TreePrefix:
    """The depth-``d`` prefix of the solution tree of ``root``."""
    if d < 0:
        raise PreconditionError("depth must be >= 0")
    diags = rps_validate(scheme)
    sig = scheme.signature
    _check_term(sig, root, None, "root", diags)
    if diags:
        raise SchemeError(diags)
    proj = _projections(scheme)
    for f in head_dependencies(scheme, root, proj):
        if f not in scheme.defs:
            raise SchemeError([f"root uses undefined symbol {f!r}"])

    def expand(t, level):
        t = head_normalize(scheme, t)
        if not t.args:
            return t
        if level == d:
            return Term(t.head, tuple(CUT for _ in t.args))
        return Term(t.head, tuple(expand(a, level + 1) for a in t.args))

    return TreePrefix(expand(root, 0), d)


def truncate(t: Term, d: int, level: int = 0) -> Term:
    """Replace every node below level ``d`` by a cut."""
    if t == CUT or not t.args:
        return t
    if level == d:
        return Term(t.head, tuple(CUT for _ in t.args))
    return Term(t.head, tuple(truncate(a, d, level + 1) for a in t.args))


def tree_prefix_eq(t1: TreePrefix, t2: TreePrefix, d: int) -> bool:
    if t1.depth < d or t2.depth < d:
        raise PreconditionError(f"prefixes of depth {t1.depth} and {t2.depth} cannot be compared at depth {d}")
    return truncate(t1.root, d) == truncate(t2.root, d)
