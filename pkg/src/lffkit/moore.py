"""S-algebras and the lifting of the Moore functor S x (-)^Sigma to them.

An :class:`SAlgebra` is a plain record of operations, so carriers can be
assembled at runtime: polynomials over ``X + Sigma``, the semiring itself,
or the lifted algebra on :class:`MooreElem` values (which is again an
SAlgebra, see :func:`lifted_algebra`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .errors import AlphabetError
from .poly import PolyRing, disjoint_union, poly_add, poly_mul, poly_scale
from .semiring import Semiring


@dataclass(frozen=True, eq=False)
class SAlgebra:
    """An associative S-algebra with a pointing ``point: Sigma -> carrier``."""

    semiring: Semiring
    sigma: tuple
    add: Callable[[Any, Any], Any]
    zero: Any
    scale: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    one: Any
    point: Callable[[str], Any]
    eq: Callable[[Any, Any], bool] = field(default=lambda x, y: x == y)
    name: str = "A"

    def embed(self, s):
        """The algebra morphism S -> A, s |-> s.1."""
        return self.scale(s, self.one)

    def sum(self, xs):
        total = self.zero
        for x in xs:
            total = self.add(total, x)
        return total


def poly_algebra(ring: PolyRing, sigma) -> SAlgebra:
    """S<X + Sigma> with pointing tau |-> 1*tau.

    ``ring`` may be over X alone (Sigma is then adjoined) or already over
    ``X + Sigma``.
    """
    sigma = tuple(sigma)
    if not all(t in ring for t in sigma):
        ring = disjoint_union(ring, sigma)
    return SAlgebra(
        semiring=ring.semiring,
        sigma=sigma,
        add=poly_add,
        zero=ring.zero(),
        scale=poly_scale,
        mul=poly_mul,
        one=ring.one(),
        point=ring.unit,
        name=f"poly{list(ring.alphabet)}",
    )


def scalar_algebra(S: Semiring, sigma, pointing: Mapping) -> SAlgebra:
    """S viewed as an S-algebra over itself, with an arbitrary pointing."""
    return SAlgebra(
        semiring=S,
        sigma=tuple(sigma),
        add=S.add,
        zero=S.zero,
        scale=S.mul,
        mul=S.mul,
        one=S.one,
        point=lambda t: pointing[t],
        name=f"scalar[{S.name}]",
    )


@dataclass(frozen=True)
class MooreElem:
    """An element (o, delta) of S x A^Sigma; ``deriv`` is ordered like Sigma."""

    out: Any
    deriv: tuple

    def at(self, A: SAlgebra, sigma):
        try:
            return self.deriv[A.sigma.index(sigma)]
        except ValueError:
            raise AlphabetError(f"{sigma!r} is not an input letter") from None

    def as_dict(self, A: SAlgebra):
        return dict(zip(A.sigma, self.deriv))


def moore_elem(A: SAlgebra, out, deriv: Mapping | Callable) -> MooreElem:
    """Build a MooreElem; letters missing from a mapping default to zero."""
    if callable(deriv):
        values = tuple(deriv(t) for t in A.sigma)
    else:
        unknown = set(deriv) - set(A.sigma)
        if unknown:
            raise AlphabetError(f"unknown letters {sorted(unknown)}")
        values = tuple(deriv.get(t, A.zero) for t in A.sigma)
    return MooreElem(A.semiring.check(out), values)


def fuse(m: MooreElem, A: SAlgebra):
    """Collapse (o, delta) to i(o) + sum_tau point(tau) * delta(tau)."""
    total = A.embed(m.out)
    for tau, d in zip(A.sigma, m.deriv):
        total = A.add(total, A.mul(A.point(tau), d))
    return total


def moore_zero(A: SAlgebra) -> MooreElem:
    return MooreElem(A.semiring.zero, tuple(A.zero for _ in A.sigma))


def moore_add(m1: MooreElem, m2: MooreElem, A: SAlgebra) -> MooreElem:
    return MooreElem(
        A.semiring.add(m1.out, m2.out),
        tuple(A.add(d1, d2) for d1, d2 in zip(m1.deriv, m2.deriv)),
    )


def moore_scale(s, m: MooreElem, A: SAlgebra) -> MooreElem:
    return MooreElem(A.semiring.mul(s, m.out), tuple(A.scale(s, d) for d in m.deriv))


def moore_one(A: SAlgebra) -> MooreElem:
    return MooreElem(A.semiring.one, tuple(A.zero for _ in A.sigma))


def moore_mul(m1: MooreElem, m2: MooreElem, A: SAlgebra) -> MooreElem:
    """(o1 o2, sigma |-> d1(sigma) * [m2] + i(o1) * d2(sigma))."""
    fused = fuse(m2, A)
    lead = A.embed(m1.out)
    return MooreElem(
        A.semiring.mul(m1.out, m2.out),
        tuple(
            A.add(A.mul(d1, fused), A.mul(lead, d2))
            for d1, d2 in zip(m1.deriv, m2.deriv)
        ),
    )


def moore_pointing(sigma, A: SAlgebra) -> MooreElem:
    if sigma not in A.sigma:
        raise AlphabetError(f"{sigma!r} is not an input letter")
    return MooreElem(
        A.semiring.zero,
        tuple(A.one if t == sigma else A.zero for t in A.sigma),
    )


def moore_eq(m1: MooreElem, m2: MooreElem, A: SAlgebra) -> bool:
    return m1.out == m2.out and all(A.eq(x, y) for x, y in zip(m1.deriv, m2.deriv))


def lifted_algebra(A: SAlgebra) -> SAlgebra:
    """The S-algebra structure on S x A^Sigma, with MooreElem carrier."""
    return SAlgebra(
        semiring=A.semiring,
        sigma=A.sigma,
        add=lambda m1, m2: moore_add(m1, m2, A),
        zero=moore_zero(A),
        scale=lambda s, m: moore_scale(s, m, A),
        mul=lambda m1, m2: moore_mul(m1, m2, A),
        one=moore_one(A),
        point=lambda t: moore_pointing(t, A),
        eq=lambda m1, m2: moore_eq(m1, m2, A),
        name=f"H({A.name})",
    )
