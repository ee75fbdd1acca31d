"""Weighted context-free grammars as coalgebras X -> S x S<X>^Sigma.

A grammar gives each nonterminal x an output weight ``out[x]`` (the weight
of x -> eps) and, for each letter a, a polynomial ``delta[x, a]`` over the
nonterminals (the weighted right-hand sides following a).  Two
determinizations are provided:

* :func:`hat_behavior` extends the grammar to words of nonterminals by the
  usual product rule and then linearly to polynomials over X;
* :func:`sharp_behavior` evaluates polynomials over X + Sigma structurally
  in the lifted Moore algebra, terminals acting as pointings.  Its states
  are kept as shared expressions (:class:`LazySharp`); :class:`SharpEvaluator`
  is the same map computed on multiplied-out polynomials.

Both assign the same weighted language to a start polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import DetBehavior, check_word, run_word
from .errors import AlphabetError
from .moore import (
    MooreElem,
    SAlgebra,
    fuse,
    moore_add,
    moore_mul,
    moore_one,
    moore_pointing,
    moore_scale,
    moore_zero,
    poly_algebra,
)
from .poly import EPS, Poly, PolyRing, disjoint_union, format_poly, poly_add, poly_embed, poly_mul, poly_scale
from .semiring import Semiring


@dataclass(eq=False)
class WeightedGrammar:
    semiring: Semiring
    nonterminals: tuple
    alphabet: tuple
    out: dict  # nonterminal -> weight; missing means zero
    delta: dict  # (nonterminal, letter) -> Poly over nonterminals; missing means zero
    start: Optional[Poly] = None
    _hat_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        clash = set(self.nonterminals) & set(self.alphabet)
        if clash:
            raise AlphabetError(f"nonterminals and input letters overlap: {sorted(clash)}")
        self.ring = PolyRing(self.semiring, self.nonterminals)
        self.sharp_ring = disjoint_union(self.ring, self.alphabet)
        for (x, a), p in self.delta.items():
            if x not in self.ring or a not in self.alphabet:
                raise AlphabetError(f"step defined for unknown pair ({x}, {a})")
            if p.ring != self.ring:
                raise AlphabetError(f"step {x} {a} is not a polynomial over the nonterminals")
        if self.start is None:
            self.start = self.ring.unit(self.nonterminals[0])

    def o(self, x):
        return self.out.get(x, self.semiring.zero)

    def d(self, x, a):
        p = self.delta.get((x, a))
        return p if p is not None else self.ring.zero()

    def __eq__(self, other):
        return (
            isinstance(other, WeightedGrammar)
            and self.semiring == other.semiring
            and self.nonterminals == other.nonterminals
            and self.alphabet == other.alphabet
            and {x: v for x, v in self.out.items() if v != self.semiring.zero}
            == {x: v for x, v in other.out.items() if v != other.semiring.zero}
            and {k: p for k, p in self.delta.items() if not p.is_zero()}
            == {k: p for k, p in other.delta.items() if not p.is_zero()}
            and self.start == other.start
        )


def hat_extend_word(g: WeightedGrammar, u):
    """Output and derivatives of a word of nonterminals.

    eps has output 1 and zero derivatives; for ``x u`` the output is
    ``o(x) o(u)`` and the a-derivative is ``delta(x, a) * u + o(x) . deriv(u, a)``.
    Results are memoized per grammar.
    """
    u = g.ring.check_word(u)
    cache = g._hat_cache
    if u in cache:
        return cache[u]
    S = g.semiring
    if not u:
        result = (S.one, {a: g.ring.zero() for a in g.alphabet})
    else:
        x, rest = u[0], u[1:]
        rest_out, rest_deriv = hat_extend_word(g, rest)
        tail = g.ring.monomial(rest)
        ox = g.o(x)
        result = (
            S.mul(ox, rest_out),
            {a: poly_add(poly_mul(g.d(x, a), tail), poly_scale(ox, rest_deriv[a])) for a in g.alphabet},
        )
    cache[u] = result
    return result


def hat_output(g: WeightedGrammar, p: Poly):
    S = g.semiring
    total = S.zero
    for u, c in p.terms():
        total = S.add(total, S.mul(c, hat_extend_word(g, u)[0]))
    return total


def hat_step(g: WeightedGrammar, p: Poly, a):
    total = g.ring.zero()
    for u, c in p.terms():
        total = poly_add(total, poly_scale(c, hat_extend_word(g, u)[1][a]))
    return total


def hat_behavior(g: WeightedGrammar) -> DetBehavior:
    """The linear extension of the grammar to S<X>."""
    return DetBehavior(
        alphabet=g.alphabet,
        output=lambda p: hat_output(g, p),
        step=lambda p, a: hat_step(g, p, a),
        kind=g.semiring.name,
        show=format_poly,
        show_output=g.semiring.format,
    )


class SharpEvaluator:
    """Evaluates polynomials over X + Sigma in the lifted Moore algebra.

    Base cases: a nonterminal x becomes (o(x), a |-> delta(x, a)) with the
    derivative embedded into S<X + Sigma>; a terminal becomes its pointing.
    Products of monomials are memoized by suffix.
    """

    def __init__(self, g: WeightedGrammar):
        self.g = g
        self.A: SAlgebra = poly_algebra(g.sharp_ring, g.alphabet)
        self._words = {EPS: moore_one(self.A)}
        self._base = {}
        for x in g.nonterminals:
            self._base[x] = MooreElem(
                g.o(x), tuple(poly_embed(g.d(x, a), g.sharp_ring) for a in g.alphabet)
            )
        for a in g.alphabet:
            self._base[a] = moore_pointing(a, self.A)
        self._states = {}

    def word(self, w) -> MooreElem:
        w = tuple(w)
        m = self._words.get(w)
        if m is None:
            m = moore_mul(self._base[w[0]], self.word(w[1:]), self.A)
            self._words[w] = m
        return m

    def __call__(self, p: Poly) -> MooreElem:
        total = self._states.get(p)
        if total is None:
            total = moore_zero(self.A)
            for w, c in p.terms():
                total = moore_add(total, moore_scale(c, self.word(w), self.A), self.A)
            self._states[p] = total
        return total


class Expr:
    """A node of a shared expression denoting an element of S<X + Sigma>.

    Sharp states grow roughly quadratically per letter when multiplied out,
    so :class:`LazySharp` keeps them as hash-consed expressions and computes
    outputs and derivatives node by node.
    """

    __slots__ = ("op", "a", "b", "out", "steps", "poly", "__weakref__")

    def __init__(self, op, a=None, b=None):
        self.op, self.a, self.b = op, a, b
        self.out = _UNSET
        self.steps = {}
        self.poly = None

    def __repr__(self):
        return f"Expr({self.op})"


_UNSET = object()


class LazySharp:
    """The sharp coalgebra on expressions.

    Rules, per node: sums and scalings are linear; a product steps by
    ``d1 * [c(b)] + i(o1) * d2``, where ``[c(b)]`` is built with
    :func:`fuse` over the expression algebra; a nonterminal steps to its
    right-hand side and a terminal is the pointing.  Multiplying by a zero
    output is skipped without evaluating the other factor.
    """

    def __init__(self, g: WeightedGrammar):
        self.g = g
        S = g.semiring
        self.S = S
        self._intern = {}
        self.zero = self._node("zero")
        self.one = self._node("one")
        self._word_cache = {EPS: self.one}
        self._from_poly = {}
        self.A = SAlgebra(
            semiring=S,
            sigma=g.alphabet,
            add=self.add,
            zero=self.zero,
            scale=self.scale,
            mul=self.mul,
            one=self.one,
            point=self.atom,
            name="expr",
        )

    def _node(self, op, a=None, b=None):
        key = (op, a, b)
        n = self._intern.get(key)
        if n is None:
            n = self._intern[key] = Expr(op, a, b)
        return n

    # -- constructors (with the semiring identities for 0 and 1) ----------

    def atom(self, z):
        return self._node("atom", z)

    def add(self, x, y):
        if x is self.zero:
            return y
        if y is self.zero:
            return x
        return self._node("add", x, y)

    def scale(self, s, x):
        S = self.S
        if S.is_zero(s) or x is self.zero:
            return self.zero
        if s == S.one:
            return x
        if x.op == "scale":
            return self.scale(S.mul(s, x.a), x.b)
        return self._node("scale", s, x)

    def mul(self, x, y):
        if x is self.zero or y is self.zero:
            return self.zero
        if x is self.one:
            return y
        if y is self.one:
            return x
        return self._node("mul", x, y)

    def fuse_node(self, x):
        return self.zero if x is self.zero else self._node("fuse", x)

    def word(self, w):
        n = self._word_cache.get(w)
        if n is None:
            n = self._word_cache[w] = self.mul(self.atom(w[0]), self.word(w[1:]))
        return n

    def lift(self, p: Poly) -> Expr:
        n = self._from_poly.get(p)
        if n is None:
            n = self.zero
            for w, c in p.terms():
                n = self.add(n, self.scale(c, self.word(w)))
            self._from_poly[p] = n
        return n

    # -- the coalgebra structure ------------------------------------------

    def output(self, x: Expr):
        if x.out is _UNSET:
            x.out = self._output(x)
        return x.out

    def _output(self, x):
        S, op = self.S, x.op
        if op == "zero":
            return S.zero
        if op == "one":
            return S.one
        if op == "atom":
            return self.g.o(x.a) if x.a in self.g.ring else S.zero
        if op == "add":
            return S.add(self.output(x.a), self.output(x.b))
        if op == "scale":
            return S.mul(x.a, self.output(x.b))
        if op == "mul":
            left = self.output(x.a)
            return S.zero if S.is_zero(left) else S.mul(left, self.output(x.b))
        return self.output(self.expand_fuse(x.a))

    def step(self, x: Expr, sigma) -> Expr:
        n = x.steps.get(sigma)
        if n is None:
            n = x.steps[sigma] = self._step(x, sigma)
        return n

    def _step(self, x, sigma):
        op = x.op
        if op in ("zero", "one"):
            return self.zero
        if op == "atom":
            if x.a in self.g.ring:
                return self.lift(poly_embed(self.g.d(x.a, sigma), self.g.sharp_ring))
            return self.one if x.a == sigma else self.zero
        if op == "add":
            return self.add(self.step(x.a, sigma), self.step(x.b, sigma))
        if op == "scale":
            return self.scale(x.a, self.step(x.b, sigma))
        if op == "mul":
            lead = self.output(x.a)
            tail = self.zero if self.S.is_zero(lead) else self.scale(lead, self.step(x.b, sigma))
            return self.add(self.mul(self.step(x.a, sigma), self.fuse_node(x.b)), tail)
        return self.step(self.expand_fuse(x.a), sigma)

    def observe(self, x: Expr) -> MooreElem:
        """The one-step observation c(x) = (o(x), sigma |-> step(x, sigma))."""
        return MooreElem(self.output(x), tuple(self.step(x, a) for a in self.g.alphabet))

    def expand_fuse(self, x: Expr) -> Expr:
        return fuse(self.observe(x), self.A)

    # -- back to polynomials ------------------------------------------------

    def to_poly(self, x: Expr) -> Poly:
        """Multiply out; the size can be very large for deep states."""
        if x.poly is None:
            ring, op = self.g.sharp_ring, x.op
            if op == "zero":
                p = ring.zero()
            elif op == "one":
                p = ring.one()
            elif op == "atom":
                p = ring.unit(x.a)
            elif op == "add":
                p = poly_add(self.to_poly(x.a), self.to_poly(x.b))
            elif op == "scale":
                p = poly_scale(x.a, self.to_poly(x.b))
            elif op == "mul":
                p = poly_mul(self.to_poly(x.a), self.to_poly(x.b))
            else:
                p = self.to_poly(self.expand_fuse(x.a))
            x.poly = p
        return x.poly

    def coerce(self, state) -> Expr:
        return self.lift(state) if isinstance(state, Poly) else state


def sharp_behavior(g: WeightedGrammar, lazy: Optional[LazySharp] = None) -> DetBehavior:
    """Generalized powerset construction on S<X + Sigma>.

    States may be given as polynomials over ``X + Sigma``; successors are
    :class:`Expr` nodes that denote polynomials and are multiplied out only
    for ``key`` and ``show``.  Pass ``lazy`` to share node tables.
    """
    lazy = lazy or LazySharp(g)

    def as_poly(q):
        return q if isinstance(q, Poly) else lazy.to_poly(q)

    return DetBehavior(
        alphabet=g.alphabet,
        output=lambda q: lazy.output(lazy.coerce(q)),
        step=lambda q, a: lazy.step(lazy.coerce(q), a),
        kind=g.semiring.name,
        key=as_poly,
        show=lambda q: format_poly(as_poly(q)),
        show_output=g.semiring.format,
    )


def behavior(g: WeightedGrammar, mode: str) -> DetBehavior:
    if mode == "hat":
        return hat_behavior(g)
    if mode == "sharp":
        return sharp_behavior(g)
    raise ValueError(f"unknown mode {mode!r} (expected hat or sharp)")


def start_state(g: WeightedGrammar, mode: str, p: Optional[Poly] = None) -> Poly:
    p = g.start if p is None else p
    return poly_embed(p, g.sharp_ring) if mode == "sharp" else p


def coeff(g: WeightedGrammar, w, mode: str = "hat"):
    """The weight of the input word ``w`` in the series of ``g.start``."""
    b = behavior(g, mode)
    return run_word(b, start_state(g, mode), check_word(b, w))
