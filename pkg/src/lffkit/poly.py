"""Noncommutative polynomials with coefficients in a commutative semiring.

A polynomial is a finitely supported map from words over a variable
alphabet to semiring values.  Words are tuples of variable names; the empty
tuple is the empty word, printed ``eps``.  Polynomials are immutable and
always kept in normal form (no zero coefficients).
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import AlphabetError, ParseError, SemiringMismatch
from .semiring import Semiring

EPS = ()


def word_key(word):
    """Length-lexicographic sort key for words."""
    return (len(word), word)


class PolyRing:
    """The polynomial semiring S<X> for a fixed semiring and alphabet."""

    __slots__ = ("semiring", "alphabet", "_letters")

    def __init__(self, semiring: Semiring, alphabet: Iterable[str]):
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise AlphabetError(f"duplicate variable in alphabet {alphabet}")
        if "eps" in alphabet:
            raise AlphabetError("'eps' is reserved for the empty word")
        self.semiring = semiring
        self.alphabet = alphabet
        self._letters = frozenset(alphabet)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.semiring == other.semiring
            and self._letters == other._letters
        )

    def __hash__(self):
        return hash((self.semiring, self._letters))

    def __repr__(self):
        return f"PolyRing({self.semiring.name}, {list(self.alphabet)})"

    def __contains__(self, letter):
        return letter in self._letters

    def check_word(self, word):
        for x in word:
            if x not in self._letters:
                raise AlphabetError(f"{x!r} is not in the alphabet {list(self.alphabet)}")
        return tuple(word)

    def poly(self, terms: Mapping | Iterable = ()) -> "Poly":
        """Build a normalized polynomial from ``{word: coeff}`` or pairs."""
        S = self.semiring
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc = {}
        for word, c in items:
            word = self.check_word(word)
            S.check(c)
            acc[word] = S.add(acc[word], c) if word in acc else c
        return Poly(self, {w: c for w, c in acc.items() if not S.is_zero(c)})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {EPS: self.semiring.one})

    def unit(self, x: str) -> "Poly":
        """The monomial 1*x (the unit of the polynomial monad)."""
        self.check_word((x,))
        return Poly(self, {(x,): self.semiring.one})

    def monomial(self, word, coeff=None) -> "Poly":
        if coeff is None:
            coeff = self.semiring.one
        return self.poly({tuple(word): coeff})

    def const(self, s) -> "Poly":
        """The image of a scalar, s * eps."""
        return self.monomial(EPS, s)

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)


class Poly:
    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        # Callers guarantee normal form; use PolyRing.poly for raw data.
        self.ring = ring
        self._terms = terms
        self._hash = None

    @property
    def semiring(self) -> Semiring:
        return self.ring.semiring

    def terms(self):
        """(word, coeff) pairs in length-lexicographic word order."""
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]))

    def support(self):
        return frozenset(self._terms)

    def __getitem__(self, word):
        return self._terms.get(tuple(word), self.semiring.zero)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms())

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)

    def __add__(self, other):
        return poly_add(self, other)

    def __mul__(self, other):
        return poly_mul(self, other)


def _same_ring(p: Poly, q: Poly):
    if p.semiring != q.semiring:
        raise SemiringMismatch(f"cannot combine {p.semiring.name} and {q.semiring.name} polynomials")
    if p.ring != q.ring:
        raise AlphabetError(f"alphabet mismatch: {p.ring} vs {q.ring}")


def poly_zero(ring: PolyRing) -> Poly:
    return ring.zero()


def poly_unit(ring: PolyRing, x: str) -> Poly:
    return ring.unit(x)


def poly_add(p: Poly, q: Poly) -> Poly:
    _same_ring(p, q)
    S = p.semiring
    acc = dict(p._terms)
    for w, c in q._terms.items():
        if w in acc:
            s = S.add(acc[w], c)
            if S.is_zero(s):
                del acc[w]
            else:
                acc[w] = s
        else:
            acc[w] = c
    return Poly(p.ring, acc)


def poly_sum(ring: PolyRing, ps: Iterable[Poly]) -> Poly:
    total = ring.zero()
    for p in ps:
        total = poly_add(total, p)
    return total


def poly_scale(s, p: Poly) -> Poly:
    S = p.semiring
    S.check(s)
    acc = {}
    for w, c in p._terms.items():
        v = S.mul(s, c)
        if not S.is_zero(v):
            acc[w] = v
    return Poly(p.ring, acc)


def poly_mul(p: Poly, q: Poly) -> Poly:
    _same_ring(p, q)
    S = p.semiring
    acc = {}
    for u, a in p._terms.items():
        for v, b in q._terms.items():
            w = u + v
            c = S.mul(a, b)
            acc[w] = S.add(acc[w], c) if w in acc else c
    return Poly(p.ring, {w: c for w, c in acc.items() if not S.is_zero(c)})


def poly_subst(p: Poly, f: Mapping[str, Poly], target: PolyRing | None = None) -> Poly:
    """Kleisli extension: replace each variable x by the polynomial f[x]."""
    if target is None:
        rings = {id(v.ring): v.ring for v in f.values()}
        if not rings:
            raise AlphabetError("cannot infer target ring from an empty substitution")
        target = next(iter(rings.values()))
    S = p.semiring
    if target.semiring != S:
        raise SemiringMismatch("substitution changes the semiring")
    total = target.zero()
    for word, c in p._terms.items():
        prod = target.one()
        for x in word:
            if x not in f:
                raise AlphabetError(f"substitution undefined on {x!r}")
            image = f[x]
            _same_ring(prod, image)
            prod = poly_mul(prod, image)
        total = poly_add(total, poly_scale(c, prod))
    return total


def poly_embed(p: Poly, target: PolyRing) -> Poly:
    """Left injection S<X> -> S<X+Y>: the same polynomial over a bigger alphabet.

    ``target`` must contain every letter of the source alphabet.  Letters of
    the source alphabet are reused verbatim, so the injection is the identity
    on words and therefore injective on supports.
    """
    if target.semiring != p.semiring:
        raise SemiringMismatch("embedding changes the semiring")
    missing = [x for x in p.ring.alphabet if x not in target]
    if missing:
        raise AlphabetError(f"target alphabet lacks {missing}")
    return Poly(target, dict(p._terms))


def disjoint_union(left: PolyRing, extra: Iterable[str]) -> PolyRing:
    """The ring over ``left.alphabet + extra``; rejects name collisions."""
    extra = tuple(extra)
    clash = sorted(set(left.alphabet) & set(extra))
    if clash:
        raise AlphabetError(f"alphabets are not disjoint: {clash}")
    return PolyRing(left.semiring, left.alphabet + extra)


def format_word(word, sep=" "):
    return sep.join(word) if word else "eps"


def format_poly(p: Poly) -> str:
    """Canonical text: ``2 a b + eps``; unit coefficients are omitted."""
    if p.is_zero():
        return "0"
    S = p.semiring
    parts = []
    for w, c in p.terms():
        if c == S.one:
            parts.append(format_word(w))
        else:
            parts.append(f"{S.format(c)} {format_word(w)}")
    return " + ".join(parts)


def parse_poly(ring: PolyRing, text: str, line=None) -> Poly:
    """Inverse of :func:`format_poly`.

    Each summand is an optional coefficient followed by variables (or
    ``eps``); a lone coefficient means that multiple of the empty word, and
    a lone ``0`` is the zero polynomial.
    """
    S = ring.semiring
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial", line)
    pairs = []
    for chunk in text.split("+"):
        toks = chunk.split()
        if not toks:
            raise ParseError(f"empty summand in {text!r}", line)
        coeff = S.one
        if toks[0] not in ring:
            try:
                coeff = S.parse_value(toks[0])
                toks = toks[1:]
            except ValueError:
                if toks[0] != "eps":
                    raise ParseError(f"undeclared variable {toks[0]!r}", line) from None
        if toks == ["eps"] or not toks:
            word = EPS
        else:
            for t in toks:
                if t not in ring:
                    raise ParseError(f"undeclared variable {t!r}", line)
            word = tuple(toks)
        pairs.append((word, coeff))
    return ring.poly(pairs)
