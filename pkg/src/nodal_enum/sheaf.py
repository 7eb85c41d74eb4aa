"""Formal sheaves: (virtual rank, total Chern class) pairs.

A :class:`FormalSheaf` carries an integer rank (possibly negative for virtual
differences) and a total Chern class with constant term 1, stored in normal
form in its owning ring.  The operations here are the standard splitting-
principle calculus: Whitney sum and difference, dual, line-bundle twist,
symmetric powers of rank-2 sheaves, and bundles of jets (principal parts)
along a rank-2 relative cotangent.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .ring import Poly, RingModel, ModelMismatchError

_SYM_CACHE: dict[int, list[dict[tuple[int, int], Fraction]]] = {}


class SheafError(Exception):
    pass


def _binom(n: int, k: int) -> int:
    # binomial coefficient extended to negative upper index
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    return (-1) ** k * math.comb(k - n - 1, k)


class FormalSheaf:
    __slots__ = ("rank", "chern")

    def __init__(self, rank: int, chern: Poly):
        if chern.constant_term() != 1:
            raise SheafError("total Chern class must have constant term 1")
        self.rank = rank
        self.chern = chern

    @property
    def ring(self) -> RingModel:
        return self.chern.ring

    def chern_part(self, i: int) -> Poly:
        return self.chern.homogeneous_part(i)

    def c1(self) -> Poly:
        return self.chern_part(1)

    def __repr__(self) -> str:
        return f"FormalSheaf(rank={self.rank}, chern={self.chern.render()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSheaf):
            return NotImplemented
        return self.rank == other.rank and self.chern == other.chern

    __hash__ = None


def trivial(ring: RingModel, rank: int = 1) -> FormalSheaf:
    return FormalSheaf(rank, ring.one())


def line(c1: Poly) -> FormalSheaf:
    _check_degree_one(c1)
    return FormalSheaf(1, c1.ring.one() + c1)


def _check_degree_one(l: Poly) -> None:
    for mono in l.terms:
        if l.ring.degree(mono) != 1:
            raise SheafError("twist class must be homogeneous of degree 1")


def _same_ring(a: FormalSheaf, b: FormalSheaf) -> None:
    if a.ring is not b.ring:
        raise ModelMismatchError("sheaves live on different models")


def whitney_sum(a: FormalSheaf, b: FormalSheaf) -> FormalSheaf:
    _same_ring(a, b)
    return FormalSheaf(a.rank + b.rank, a.chern * b.chern)


def inverse_series(p: Poly) -> Poly:
    """Multiplicative inverse of a class with constant term 1, truncated."""
    if p.constant_term() != 1:
        raise SheafError("only classes with constant term 1 are invertible")
    minus_n = p.ring.one() - p
    inv = p.ring.one()
    power = minus_n
    while not power.is_zero:
        inv = inv + power
        power = power * minus_n
    return inv


def difference(a: FormalSheaf, b: FormalSheaf) -> FormalSheaf:
    _same_ring(a, b)
    return FormalSheaf(a.rank - b.rank, a.chern * inverse_series(b.chern))


def dual(a: FormalSheaf) -> FormalSheaf:
    ring = a.ring
    flipped = {m: (c if ring.degree(m) % 2 == 0 else -c)
               for m, c in a.chern.terms.items()}
    return FormalSheaf(a.rank, Poly(ring, flipped))


def tensor_line(a: FormalSheaf, l: Poly) -> FormalSheaf:
    """Twist by a line bundle with first Chern class l.

    c_i(A (x) L) = sum_j binom(rank-j, i-j) c_j(A) l^(i-j); the twist keeps
    the rank.  Negative virtual ranks are rejected: decompose the virtual
    sheaf first, the binomial bookkeeping below assumes rank >= 0.
    """
    if a.rank < 0:
        raise SheafError("cannot twist a negative-rank virtual sheaf")
    if l.ring is not a.ring:
        raise ModelMismatchError("twist class lives in a different ring")
    _check_degree_one(l)
    ring = a.ring
    if l.is_zero:
        return FormalSheaf(a.rank, a.chern)
    total = ring.zero()
    lpow = ring.one()
    # organize as sum_j c_j(A) * sum_p binom(rank-j, p) l^p
    parts = [a.chern.homogeneous_part(j) for j in range(ring.dim + 1)]
    lpows = [ring.one()]
    for _ in range(ring.dim):
        lpow = lpows[-1] * l
        if lpow.is_zero:
            break
        lpows.append(lpow)
    for j, cj in enumerate(parts):
        if cj.is_zero:
            continue
        series = ring.zero()
        for p, lp in enumerate(lpows):
            if j + p > ring.dim:
                break
            b = _binom(a.rank - j, p)
            if b:
                series = series + lp * b
        total = total + cj * series
    return FormalSheaf(a.rank, total)


# -- symmetric powers of rank-2 sheaves -------------------------------------

def _expand_e_monomial(p: int, q: int) -> dict[tuple[int, int], Fraction]:
    # e1^p e2^q written out in the splitting roots a, b
    out: dict[tuple[int, int], Fraction] = {}
    for t in range(p + 1):
        out[(t + q, p - t + q)] = Fraction(math.comb(p, t))
    return out


def _symmetrize(terms: dict[tuple[int, int], Fraction]
                ) -> dict[tuple[int, int], Fraction]:
    """Rewrite a symmetric polynomial in two roots via e1, e2 exponents."""
    work = {k: v for k, v in terms.items() if v}
    out: dict[tuple[int, int], Fraction] = {}
    while work:
        (a, b) = max(work)
        c = work[(a, b)]
        if a < b:
            raise SheafError("polynomial is not symmetric in the roots")
        p, q = a - b, b
        out[(p, q)] = out.get((p, q), Fraction(0)) + c
        for mono, cc in _expand_e_monomial(p, q).items():
            v = work.get(mono, Fraction(0)) - c * cc
            if v:
                work[mono] = v
            elif mono in work:
                del work[mono]
    return out


def _sym_rank2_table(k: int) -> list[dict[tuple[int, int], Fraction]]:
    """Chern classes of Sym^k of a rank-2 sheaf as polynomials in (c1, c2).

    Entry d of the returned list holds c_d as a map (c1 exponent, c2
    exponent) -> coefficient.  Derived once per k from the splitting roots
    {i*a + (k-i)*b : i = 0..k} and cached.
    """
    cached = _SYM_CACHE.get(k)
    if cached is not None:
        return cached
    # product over the k+1 roots, expanded in the two splitting roots a, b
    prod: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    for i in range(k + 1):
        nxt: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in prod.items():
            nxt[(a, b)] = nxt.get((a, b), Fraction(0)) + c
            if i:
                key = (a + 1, b)
                nxt[key] = nxt.get(key, Fraction(0)) + c * i
            if k - i:
                key = (a, b + 1)
                nxt[key] = nxt.get(key, Fraction(0)) + c * (k - i)
        prod = {m: c for m, c in nxt.items() if c}
    by_degree: list[dict[tuple[int, int], Fraction]] = []
    for d in range(k + 2):
        part = {m: c for m, c in prod.items() if m[0] + m[1] == d}
        by_degree.append(_symmetrize(part))
    _SYM_CACHE[k] = by_degree
    return by_degree


def sym_rank2(a: FormalSheaf, k: int) -> FormalSheaf:
    """k-th symmetric power of a rank-2 sheaf; result has rank k+1."""
    if a.rank != 2:
        raise SheafError("sym_rank2 expects a rank-2 sheaf")
    if k < 0:
        raise ValueError("negative symmetric power")
    ring = a.ring
    if k == 0:
        return trivial(ring, 1)
    c1 = a.chern_part(1)
    c2 = a.chern_part(2)
    table = _sym_rank2_table(k)
    c1pows = [ring.one()]
    c2pows = [ring.one()]
    total = ring.zero()
    for d, entry in enumerate(table):
        for (p, q), coeff in entry.items():
            if p + 2 * q > ring.dim:
                continue
            while len(c1pows) <= p:
                c1pows.append(c1pows[-1] * c1)
            while len(c2pows) <= q:
                c2pows.append(c2pows[-1] * c2)
            total = total + c1pows[p] * c2pows[q] * coeff
    return FormalSheaf(k + 1, total)


def jets(order: int, omega: FormalSheaf, lam: FormalSheaf) -> FormalSheaf:
    """Principal parts of lam of the given order along a rank-2 cotangent.

    Filtration pieces are sym_rank2(omega, i) (x) lam for i = 0..order, so
    the total Chern class is the product of the pieces' classes and the rank
    is binom(order+2, 2).
    """
    if omega.rank != 2:
        raise SheafError("jets expects a rank-2 relative cotangent")
    if lam.rank != 1:
        raise SheafError("jets expects a line bundle to differentiate")
    _same_ring(omega, lam)
    l = lam.c1()
    ring = omega.ring
    chern = ring.one()
    for i in range(order + 1):
        piece = tensor_line(sym_rank2(omega, i), l)
        chern = chern * piece.chern
    return FormalSheaf(math.comb(order + 2, 2), chern)


def top_chern(a: FormalSheaf) -> Poly:
    if a.rank < 0:
        raise SheafError("top Chern class needs a nonnegative rank")
    return a.chern.homogeneous_part(a.rank)
