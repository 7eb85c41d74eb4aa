"""Truncated graded-commutative polynomial rings over exact rationals.

Everything downstream (Chern classes, Chow classes, tower levels) is a
polynomial in a :class:`RingModel`: a fixed tuple of graded generators, a top
degree beyond which every term is discarded, an ordered list of monomial
rewrite rules, and optionally a designated point-class monomial used for
integration.

Conventions that the rest of the package relies on:

* Monomials are exponent tuples over the declared generators.  The monomial
  order is graded-lex over declaration order (earlier generator = bigger), so
  a rule's left-hand side must be strictly maximal among the monomials of its
  right-hand side; ``add_rule`` enforces this, which makes every rule set
  terminating.
* Reduction picks the first rule in declaration order whose lhs divides the
  monomial.  An iteration cap (default 10000, env ``NODAL_ENUM_MAX_REWRITE``)
  guards against misconfigured rule sets.
* All multiplication is ordinary commutative multiplication; the classes
  modelled here behave evenly, there is no sign rule.
* Coefficients are :class:`fractions.Fraction` throughout; no floats.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

DEFAULT_MAX_REWRITE = 10_000
MAX_REWRITE_ENV = "NODAL_ENUM_MAX_REWRITE"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RingError(Exception):
    pass


class ModelMismatchError(RingError):
    """Operands belong to different ring models."""


class RewriteLimitError(RingError):
    """Rule application exceeded the iteration cap; rule set misconfigured."""


class IncompleteRelationsError(RingError):
    """A top-degree monomial other than the point class survived reduction."""


def _rewrite_cap() -> int:
    raw = os.environ.get(MAX_REWRITE_ENV)
    if raw is None:
        return DEFAULT_MAX_REWRITE
    try:
        return int(raw)
    except ValueError:
        raise RingError(f"{MAX_REWRITE_ENV} must be an integer, got {raw!r}")


class GradedVar:
    __slots__ = ("name", "degree")

    def __init__(self, name: str, degree: int = 1):
        if degree < 1:
            raise ValueError(f"generator {name!r} must have degree >= 1")
        self.name = name
        self.degree = degree

    def __repr__(self) -> str:
        return f"GradedVar({self.name!r}, {self.degree})"


class RingModel:
    """A presented truncated graded ring.

    Build order matters: declare all rules with :meth:`add_rule` before
    constructing the classes that live in the ring, since polynomials are
    normalized eagerly and are not revisited when rules are added later.
    """

    def __init__(self, variables: Iterable[GradedVar], dim: int,
                 point_class: Monomial | None = None):
        self.vars: tuple[GradedVar, ...] = tuple(variables)
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        self.dim = dim
        self._index = {v.name: i for i, v in enumerate(self.vars)}
        self._degrees = tuple(v.degree for v in self.vars)
        self.rules: list[tuple[Monomial, dict[Monomial, Fraction]]] = []
        self.point_class = point_class
        self._nf: dict[Monomial, dict[Monomial, Fraction]] = {}
        self._nvars = len(self.vars)

    # -- monomial helpers -------------------------------------------------

    def index(self, name: str) -> int:
        return self._index[name]

    def degree(self, mono: Monomial) -> int:
        degs = self._degrees
        return sum(e * degs[i] for i, e in enumerate(mono) if e)

    def monomial(self, exps: Mapping[str, int]) -> Monomial:
        vec = [0] * self._nvars
        for name, e in exps.items():
            vec[self._index[name]] = e
        return tuple(vec)

    def _unit_monomial(self) -> Monomial:
        return (0,) * self._nvars

    # -- polynomial constructors ------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return self.zero()
        return Poly(self, {self._unit_monomial(): c})

    def var(self, name: str) -> "Poly":
        mono = self.monomial({name: 1})
        if self.degree(mono) > self.dim:
            return self.zero()
        return self.poly({mono: _ONE})

    def poly(self, terms: Mapping[Monomial, Scalar]) -> "Poly":
        """Normalize an explicit terms mapping into a Poly."""
        raw = {m: Fraction(c) for m, c in terms.items() if c}
        return Poly(self, self.normalize_terms(raw))

    # -- rules and reduction ----------------------------------------------

    def add_rule(self, lhs: "Poly", rhs: Union["Poly", Scalar]) -> None:
        """Declare lhs -> rhs.

        lhs must be a single monomial with coefficient 1; rhs must be
        homogeneous of the same degree, with every monomial strictly smaller
        than lhs in graded-lex order (this is what makes reduction
        terminate).  Rule priority is declaration order.

        A zero lhs is taken to mean the intended monomial exceeded the
        model's degree bound (truncation already enforces such rules), so
        the declaration is skipped as vacuous.
        """
        if not isinstance(lhs, Poly) or lhs.ring is not self:
            raise ModelMismatchError("rule lhs must be a Poly of this ring")
        if lhs.is_zero:
            return
        if len(lhs.terms) != 1:
            raise ValueError("rule lhs must be a single monomial")
        (lmono, lcoeff), = lhs.terms.items()
        if lcoeff != 1:
            raise ValueError("rule lhs must have coefficient 1")
        ldeg = self.degree(lmono)
        if ldeg == 0:
            raise ValueError("rule lhs must have positive degree")
        if isinstance(rhs, Poly):
            if rhs.ring is not self:
                raise ModelMismatchError("rule rhs lives in a different ring")
            rterms = dict(rhs.terms)
        else:
            c = Fraction(rhs)
            if c:
                raise ValueError("scalar rhs must be 0 for a graded rule")
            rterms = {}
        for rmono in rterms:
            if self.degree(rmono) != ldeg:
                raise ValueError("rule is not degree-homogeneous")
            if not (ldeg, lmono) > (ldeg, rmono):
                raise ValueError(
                    "rule lhs is not graded-lex maximal over its rhs; "
                    "rule set would not be terminating")
        self.rules.append((lmono, rterms))
        self._nf.clear()

    def _reduce_once(self, mono: Monomial) -> dict[Monomial, Fraction] | None:
        for lhs, rhs in self.rules:
            for m, l in zip(mono, lhs):
                if m < l:
                    break
            else:
                quot = tuple(m - l for m, l in zip(mono, lhs))
                return {
                    tuple(q + r for q, r in zip(quot, rmono)): c
                    for rmono, c in rhs.items()
                }
        return None

    def _nf_of(self, mono: Monomial) -> dict[Monomial, Fraction]:
        cached = self._nf.get(mono)
        if cached is not None:
            return cached
        budget = _rewrite_cap()
        acc: dict[Monomial, Fraction] = {}
        stack: list[tuple[Monomial, Fraction]] = [(mono, _ONE)]
        while stack:
            m, c = stack.pop()
            if m is not mono:
                hit = self._nf.get(m)
                if hit is not None:
                    for mm, cc in hit.items():
                        acc[mm] = acc.get(mm, _ZERO) + c * cc
                    continue
            red = self._reduce_once(m)
            if red is None:
                acc[m] = acc.get(m, _ZERO) + c
                continue
            budget -= 1
            if budget < 0:
                raise RewriteLimitError(
                    f"rewrite iteration cap exhausted while reducing a "
                    f"degree-{self.degree(mono)} monomial; raise "
                    f"{MAX_REWRITE_ENV} or fix the rule set")
            for mm, cc in red.items():
                stack.append((mm, c * cc))
        acc = {m: c for m, c in acc.items() if c}
        self._nf[mono] = acc
        return acc

    def normalize_terms(self, terms: Mapping[Monomial, Fraction]
                        ) -> dict[Monomial, Fraction]:
        """Fixpoint of rule application plus truncation beyond self.dim."""
        acc: dict[Monomial, Fraction] = {}
        dim = self.dim
        for mono, coeff in terms.items():
            if not coeff or self.degree(mono) > dim:
                continue
            for m, c in self._nf_of(mono).items():
                acc[m] = acc.get(m, _ZERO) + coeff * c
        return {m: c for m, c in acc.items() if c}

    # -- integration -------------------------------------------------------

    def integrate(self, p: "Poly") -> Fraction:
        """Coefficient of the point class; degree-dim strays are an error."""
        if self.point_class is None:
            raise RingError("model has no point class")
        if p.ring is not self:
            raise ModelMismatchError("integrating a foreign class")
        for mono in p.terms:
            if mono != self.point_class and self.degree(mono) == self.dim:
                raise IncompleteRelationsError(
                    f"top-degree monomial {self.render_monomial(mono)} did "
                    f"not reduce into the point class")
        return p.terms.get(self.point_class, _ZERO)

    # -- rendering ----------------------------------------------------------

    def render_monomial(self, mono: Monomial) -> str:
        factors = []
        for v, e in zip(self.vars, mono):
            if e == 1:
                factors.append(v.name)
            elif e > 1:
                factors.append(f"{v.name}^{e}")
        return "*".join(factors) if factors else "1"


class Poly:
    """An element of a RingModel, stored in normal form.

    Instances are immutable in use; arithmetic returns fresh objects and
    results are always normalized against the owning model's rules.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingModel, terms: dict[Monomial, Fraction]):
        self.ring = ring
        self.terms = terms

    # -- basics -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, _ZERO)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring._unit_monomial(), _ZERO)

    def homogeneous_part(self, d: int) -> "Poly":
        ring = self.ring
        return Poly(ring, {m: c for m, c in self.terms.items()
                           if ring.degree(m) == d})

    def max_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.degree(m) for m in self.terms)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise ModelMismatchError("operands from different ring models")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # both operands are normal forms, so the sum is one too
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m, _ZERO) + c
            if v:
                out[m] = v
            elif m in out:
                del out[m]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {m: c * v for m, v in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ring = self.ring
        dim = ring.dim
        deg = ring.degree
        raw: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            d1 = deg(m1)
            for m2, c2 in o.terms.items():
                if d1 + deg(m2) > dim:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                raw[m] = raw.get(m, _ZERO) + c1 * c2
        return Poly(ring, ring.normalize_terms(raw))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not defined here")
        out = self.ring.one()
        base = self
        n = k
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    __hash__ = None  # mutable-ish container; equality is structural

    # -- rendering -------------------------------------------------------------

    def render(self) -> str:
        """Canonical text form "c1*m1 + c2*m2 + ..." in graded-lex order."""
        if not self.terms:
            return "0"
        ring = self.ring
        pieces = []
        for mono in sorted(self.terms, key=lambda m: (ring.degree(m), m)):
            c = self.terms[mono]
            mtext = ring.render_monomial(mono)
            if mtext == "1":
                pieces.append(str(c))
            else:
                pieces.append(f"{c}*{mtext}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Poly({self.render()})"
