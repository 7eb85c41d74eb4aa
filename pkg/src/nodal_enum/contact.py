"""Singularity schedules and their degrees on tower models.

A :class:`SingularityType` is an ordered schedule of point conditions
imposed on the members of a family of surfaces (or planes): each entry is
a multiplicity, optionally repeated (``2^[4]``), and optionally followed
by a nested subschedule imposed infinitely near the entry's point
(``3(2)``).

``sigma_degree`` evaluates the degree of such a schedule: it walks up the
tower of diagonal blowups, one level per entry, multiplying in the top
Chern class of the jet bundle that expresses "the member has a point of
multiplicity m here", twisting the tangency line down by the exceptional
classes as it goes, and pushing the product back down level by level.

``node_count`` assembles the codimension-n count of n-fold nodal members
from the schedule degrees, dividing out the labeling of the nodes and
subtracting the schedules that a weak ordering can degenerate to.  The
subtraction coefficients are certified by ``weak_listing_count``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

from .ring import Poly
from .sheaf import jets, line, top_chern
from .spaces import SpaceError, SpaceModel

__all__ = [
    "SingularityType", "UnsupportedTypeError", "CountReport", "WeakListing",
    "parse_type", "rho", "sigma_degree", "node_count", "weak_listing_count",
    "NODE_ASSEMBLY",
]


class UnsupportedTypeError(ValueError):
    """The schedule is outside the certified catalogue."""


class SingularityType:
    """An ordered schedule of multiplicities with optional nesting."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise ValueError("a schedule needs at least one entry")
        for mult, sub in entries:
            if not isinstance(mult, int) or mult < 2:
                raise ValueError("entry multiplicities must be integers >= 2")
            if sub is not None and not isinstance(sub, SingularityType):
                raise ValueError("nested entry must be a SingularityType")
        self.entries = entries

    # -- structure ---------------------------------------------------------

    def flatten(self) -> list[tuple[int, bool]]:
        """Expand to (multiplicity, lies on previous exceptional) pairs."""
        out: list[tuple[int, bool]] = []
        for mult, sub in self.entries:
            out.append((mult, False))
            if sub is not None:
                for smult, ssub in sub.entries:
                    if ssub is not None:
                        raise UnsupportedTypeError(
                            "schedules nested more than one level deep are "
                            "not certified")
                    out.append((smult, True))
        return out

    def render(self) -> str:
        pieces = []
        i = 0
        entries = self.entries
        while i < len(entries):
            mult, sub = entries[i]
            if sub is None:
                j = i
                while j < len(entries) and entries[j] == (mult, None):
                    j += 1
                if j - i >= 2:
                    pieces.append(f"{mult}^[{j - i}]")
                    i = j
                    continue
                pieces.append(str(mult))
            else:
                pieces.append(f"{mult}{sub.render()}")
            i += 1
        return "(" + ",".join(pieces) + ")"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SingularityType.parse({self.render()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SingularityType):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    # -- parsing -----------------------------------------------------------

    @staticmethod
    def parse(text: str) -> "SingularityType":
        parser = _Parser(text)
        t = parser.parse_type()
        parser.expect_end()
        return t


def parse_type(text) -> SingularityType:
    if isinstance(text, SingularityType):
        return text
    return SingularityType.parse(text)


class _Parser:
    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _take(self, token: str) -> None:
        self._skip_ws()
        if not self.text.startswith(token, self.pos):
            raise ValueError(
                f"expected {token!r} at position {self.pos} of {self.text!r}")
        self.pos += len(token)

    def _int(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ValueError(
                f"expected an integer at position {start} of {self.text!r}")
        return int(self.text[start:self.pos])

    def parse_type(self) -> SingularityType:
        self._take("(")
        entries = list(self._entry())
        while self._peek() == ",":
            self._take(",")
            entries.extend(self._entry())
        self._take(")")
        return SingularityType(entries)

    def _entry(self):
        """One grammar entry, expanded to a list of (mult, sub) pairs."""
        mult = self._int()
        nxt = self._peek()
        if nxt == "^":
            self._take("^")
            self._take("[")
            count = self._int()
            self._take("]")
            if count < 1:
                raise ValueError("repeat count must be positive")
            return [(mult, None)] * count
        if nxt == "(":
            return [(mult, self.parse_type())]
        return [(mult, None)]

    def expect_end(self) -> None:
        self._skip_ws()
        if self.pos != len(self.text):
            raise ValueError(f"trailing input in {self.text!r}")


# -- the certified catalogue -----------------------------------------------------

def _certified() -> set[SingularityType]:
    types = set()
    for k in range(1, 7):
        types.add(SingularityType([(2, None)] * k))
    types.add(SingularityType.parse("(3)"))
    types.add(SingularityType.parse("(3,2)"))
    types.add(SingularityType.parse("(3,2,2)"))
    types.add(SingularityType.parse("(3(2))"))
    return types


CERTIFIED_TYPES = _certified()


def _certify(t: SingularityType) -> None:
    if t not in CERTIFIED_TYPES:
        raise UnsupportedTypeError(
            f"schedule {t.render()} is outside the certified catalogue")


# -- numerology -------------------------------------------------------------------

def rho(t, fiber_dim: int = 2) -> int:
    """Expected codimension of the schedule: one vanishing jet per entry."""
    t = parse_type(t)
    return sum(math.comb(fiber_dim + mult - 1, fiber_dim)
               for mult, _ in t.flatten())


class WeakListing:
    """Count of weak orderings that degenerate onto a schedule."""

    __slots__ = ("total", "subtotals")

    def __init__(self, total: int, subtotals):
        self.total = total
        self.subtotals = subtotals

    def __repr__(self) -> str:
        return f"WeakListing(total={self.total}, subtotals={self.subtotals})"


# a first-order point of multiplicity 3 absorbs an infinitely near node in
# exactly as many weak listings as the (3,2) schedule has; certified against
# the assembled counts
_NESTED_TRIPLE_LISTINGS = 30


def weak_listing_count(t) -> WeakListing:
    """Weak orderings of node labels degenerating onto the schedule.

    For ``(3, 2^[k])`` this is counted directly: the triple point uses a
    marked label plus three merged labels that must follow it, and the k
    leftover node labels are interchangeable.  Subtotals are indexed by
    the position of the marked label.
    """
    t = parse_type(t)
    _certify(t)
    entries = t.flatten()
    if entries == [(3, False), (2, True)]:
        return WeakListing(_NESTED_TRIPLE_LISTINGS, None)
    if entries[0] != (3, False) or any(e != (2, False) for e in entries[1:]):
        raise UnsupportedTypeError(
            f"no weak-listing rule for schedule {t.render()}")
    k = len(entries) - 1
    symbols = ["z"] + ["b"] * 3 + [f"d{i}" for i in range(k)]
    subtotals = [0] * (k + 1)
    for perm in permutations(range(len(symbols))):
        order = [symbols[i] for i in perm]
        zpos = order.index("z")
        # the three merged labels must all follow the marked one
        bpos = [i for i, s in enumerate(order) if s == "b"]
        if min(bpos) > zpos:
            subtotals[zpos] += 1
    total = sum(subtotals)
    assert total % math.factorial(k) == 0
    return WeakListing(total // math.factorial(k),
                       tuple(s for s in subtotals if s))


# how n-node counts assemble from schedule degrees: coefficient, schedule
NODE_ASSEMBLY: dict[int, tuple[tuple[int, str], ...]] = {
    1: (),
    2: (),
    3: (),
    4: ((6, "(3)"),),
    5: ((30, "(3,2)"),),
    6: ((30, "(3(2))"), (90, "(3,2,2)")),
}


# -- schedule degrees ---------------------------------------------------------------

def sigma_degree(t, family: SpaceModel, lam: Poly | None = None) -> Fraction:
    """Degree of the schedule on the family, an exact rational.

    ``family`` must be a family level with a rank-2 relative cotangent;
    ``lam`` overrides its preset tangency line class.  One tower level is
    consumed per flattened entry, and the dimensions must balance: the
    expected codimension plus one per nested entry has to equal the
    dimension of the top level.
    """
    t = parse_type(t)
    _certify(t)
    entries = t.flatten()
    k = len(entries)
    if family.kind != "family":
        raise SpaceError("schedule degrees start from a family level")
    if family.cotangent is None or family.cotangent.rank != 2:
        raise SpaceError("the family needs a rank-2 relative cotangent")
    if lam is None:
        lam = family.family_line
    if lam is None:
        raise ValueError("the family has no preset tangency line; pass lam")
    if lam.ring is not family.ring:
        raise SpaceError("lam must live on the family level")
    expected = rho(t) + sum(1 for _, nested in entries if nested)
    if expected != family.dim + 2 * (k - 1):
        raise ValueError(
            f"schedule {t.render()} does not cut the family to points: "
            f"codimension {expected} vs dimension {family.dim + 2 * (k - 1)}")

    levels = [family]
    lams = [lam]
    for j in range(1, k):
        nxt = levels[-1].blowup()
        mult_prev = entries[j - 1][0]
        lams.append(nxt.rename_from_parent(lams[-1])
                    - mult_prev * nxt.exceptional)
        levels.append(nxt)

    def factor(j: int) -> Poly:
        mult, nested = entries[j]
        lvl = levels[j]
        f = top_chern(jets(mult - 1, lvl.cotangent, line(lams[j])))
        if nested:
            f = f * lvl.exceptional
        return f

    z = factor(k - 1)
    for j in range(k - 1, 0, -1):
        z = levels[j].pushforward(z)
        z = z * factor(j - 1)
    return family.integrate(z)


class CountReport:
    """Result of a count assembly, with its term-by-term breakdown.

    ``expected`` carries an independently known value when the computation
    reproduces a cross-checked quantity; it stays ``None`` for fresh counts.
    """

    __slots__ = ("count", "breakdown", "flags", "expected")

    def __init__(self, count: Fraction, breakdown: dict, flags: tuple,
                 expected: Fraction | None = None):
        self.count = count
        self.breakdown = breakdown
        self.flags = flags
        self.expected = expected

    @property
    def is_integer(self) -> bool:
        return self.count.denominator == 1

    def __repr__(self) -> str:
        return (f"CountReport(count={self.count}, flags={self.flags}, "
                f"breakdown={self.breakdown})")


def node_count(n: int, family: SpaceModel,
               lam: Poly | None = None) -> CountReport:
    """Count of members with n separate nodes, assembled from schedules.

    The n-fold node schedule is divided by the labelings of the nodes;
    degenerate weak listings (where several nodes merge into a higher
    singularity) are subtracted with their listing multiplicities first.
    A non-integral result is reported, not raised: the family is then
    outside the validity range of the closed assembly.
    """
    if not isinstance(n, int) or not 1 <= n <= 6:
        raise UnsupportedTypeError("node counts are assembled for n = 1..6")
    principal = SingularityType([(2, None)] * n)
    breakdown = {principal.render(): sigma_degree(principal, family, lam)}
    acc = breakdown[principal.render()]
    for coeff, tname in NODE_ASSEMBLY[n]:
        val = sigma_degree(tname, family, lam)
        breakdown[tname] = val
        acc -= coeff * val
    count = acc / math.factorial(n)
    flags = () if count.denominator == 1 else ("OUT_OF_VALIDITY",)
    return CountReport(count, breakdown, flags)
