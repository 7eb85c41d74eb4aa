"""Tower models: universal families and their diagonal blowups.

A :class:`SpaceModel` wraps a :class:`~nodal_enum.ring.RingModel` with the
geometry needed by the singularity calculus: which generators are
*relative* (they live along the current fiber direction), how those
generators duplicate when the fiber square is blown up along the relative
diagonal, the rank-2 relative cotangent used to build jet bundles, and how
classes push down one level.

Level kinds
-----------
``base``
    A parameter space only (projective space, the variety of planes in
    4-space, ...); the bottom of every tower.
``family``
    A fiber bundle over the previous level: the universal divisor of a
    linear system on a surface, or the universal plane.  Pushing forward
    extracts the coefficient of the relative point class.
``blowup``
    The blowup of the fiber square of the previous level along its
    relative diagonal.  New generators: the exceptional class (declared
    first, so it dominates the monomial order) and fresh copies of the
    previous level's relative generators.

Pushing a blowup level down splits by the exceptional exponent: linear
terms die, square terms restrict to the diagonal with a sign, and
exceptional-free terms push through the fiber square by flat base change,
which recurses into the parent level.  Results are memoized per monomial,
so towers are meant to be built once and shared across computations.
"""
from __future__ import annotations

from fractions import Fraction

from .ring import GradedVar, Monomial, Poly, RingError, RingModel
from .sheaf import (FormalSheaf, difference, dual, line, tensor_line,
                    trivial, whitney_sum)

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SpaceError(RingError):
    """A tower level was used outside its contract."""


def _raw(ring: RingModel, terms) -> Poly:
    """Build a Poly without normalizing (rule installation only)."""
    return Poly(ring, {m: Fraction(c) for m, c in terms.items() if c})


class SpaceModel:
    """One level of a tower; see the module docstring for the kinds."""

    __slots__ = ("ring", "kind", "parent", "level", "rel_names", "copy_meta",
                 "rel_rules", "cotangent", "fiber_point", "family_line",
                 "sheaves", "_push_memo", "_child", "_pull2_pos",
                 "_parent_pos")

    def __init__(self, ring: RingModel, kind: str,
                 parent: "SpaceModel | None" = None):
        if kind not in ("base", "family", "blowup"):
            raise ValueError(f"unknown level kind {kind!r}")
        if kind == "base" and parent is not None:
            raise ValueError("a base level cannot have a parent")
        if kind != "base" and parent is None:
            raise ValueError(f"a {kind} level needs a parent")
        self.ring = ring
        self.kind = kind
        self.parent = parent
        self.level = 0 if parent is None else parent.level + 1
        self.rel_names: tuple[str, ...] = ()
        self.copy_meta: dict[str, tuple] = {}
        self.rel_rules: list[tuple[Monomial, dict[Monomial, Fraction]]] = []
        self.cotangent: FormalSheaf | None = None
        self.fiber_point: Monomial | None = None
        self.family_line: Poly | None = None
        self.sheaves: dict[str, FormalSheaf] = {}
        self._push_memo: dict[Monomial, dict[Monomial, Fraction]] = {}
        self._child: SpaceModel | None = None
        self._pull2_pos: list[int | None] | None = None
        self._parent_pos: list[int | None] | None = None

    # -- conveniences -------------------------------------------------------

    @property
    def n_rel(self) -> int:
        return len(self.rel_names)

    @property
    def dim(self) -> int:
        return self.ring.dim

    def var(self, name: str) -> Poly:
        return self.ring.var(name)

    def integrate(self, p: Poly) -> Fraction:
        return self.ring.integrate(p)

    @property
    def exceptional(self) -> Poly:
        if self.kind != "blowup":
            raise SpaceError("only blowup levels carry an exceptional class")
        return self.ring.var(self.rel_names[0])

    def __repr__(self) -> str:
        return (f"SpaceModel(kind={self.kind!r}, level={self.level}, "
                f"dim={self.ring.dim})")

    # -- transfer maps --------------------------------------------------------

    def lift(self, p: Poly) -> Poly:
        """Pull a class back from the parent level (flat pullback)."""
        if self.parent is None:
            raise SpaceError("the base level has no parent to lift from")
        if p.ring is not self.parent.ring:
            raise SpaceError("lift expects a class on the parent level")
        pad = (0,) * self.n_rel
        return Poly(self.ring, {pad + m: c for m, c in p.terms.items()})

    def rename_from_parent(self, p: Poly) -> Poly:
        """Pull back along the second projection of the fiber square.

        Relative generators of the parent map to their fresh copies;
        everything shared with the level below maps to itself.
        """
        if self.kind != "blowup":
            raise SpaceError("fresh copies exist only on blowup levels")
        if p.ring is not self.parent.ring:
            raise SpaceError("rename expects a class on the parent level")
        pos = self._pull2_pos
        nv = len(self.ring.vars)
        out: dict[Monomial, Fraction] = {}
        for mono, c in p.terms.items():
            vec = [0] * nv
            for i, e in enumerate(mono):
                if not e:
                    continue
                j = pos[i]
                if j is None:
                    raise SpaceError(
                        "class involves a relative generator without a "
                        "fresh copy; it should have normalized away")
                vec[j] += e
            m2 = tuple(vec)
            out[m2] = out.get(m2, _ZERO) + c
        return Poly(self.ring, {m: c for m, c in out.items() if c})

    # -- pushforward -----------------------------------------------------------

    def pushforward(self, p: Poly) -> Poly:
        """Push a class down one level (integration along the new fiber)."""
        if self.kind == "base":
            raise SpaceError("the base level has nothing below it")
        if p.ring is not self.ring:
            raise SpaceError("pushforward expects a class on this level")
        out: dict[Monomial, Fraction] = {}
        for mono, c in p.terms.items():
            for m2, c2 in self._push_mono(mono).items():
                v = out.get(m2, _ZERO) + c * c2
                if v:
                    out[m2] = v
                elif m2 in out:
                    del out[m2]
        return Poly(self.parent.ring, out)

    def _push_mono(self, mono: Monomial) -> dict[Monomial, Fraction]:
        hit = self._push_memo.get(mono)
        if hit is not None:
            return hit
        if self.kind == "family":
            n = self.n_rel
            if mono[:n] == self.fiber_point[:n]:
                res = {mono[n:]: _ONE}
            else:
                res = {}
        else:
            res = self._push_blowup_mono(mono)
        self._push_memo[mono] = res
        return res

    def _push_blowup_mono(self, mono: Monomial) -> dict[Monomial, Fraction]:
        ep = mono[0]
        if ep == 1:
            # the exceptional maps to the codimension-2 diagonal
            return {}
        parent = self.parent
        pring = parent.ring
        ppos = self._parent_pos
        n_new = self.n_rel
        if ep == 2:
            # restrict the cofactor to the diagonal, with the blowup sign
            vec = [0] * len(pring.vars)
            for j in range(1, len(mono)):
                e = mono[j]
                if e:
                    vec[ppos[j]] += e
            return pring.normalize_terms({tuple(vec): Fraction(-1)})
        if ep != 0:
            raise SpaceError("exceptional exponent escaped its rewrite rule")
        # exceptional-free: flat base change through the fiber square
        fresh_vec = [0] * len(pring.vars)
        any_fresh = False
        for j in range(1, n_new):
            e = mono[j]
            if e:
                fresh_vec[ppos[j]] += e
                any_fresh = True
        if not any_fresh:
            return {}
        inner = parent.pushforward(Poly(pring, {tuple(fresh_vec): _ONE}))
        if inner.is_zero:
            return {}
        tail = Poly(pring, {mono[n_new:]: _ONE})
        return (tail * parent.lift(inner)).terms

    # -- the next tower level ----------------------------------------------------

    def blowup(self) -> "SpaceModel":
        """Blow up the relative diagonal of this level's fiber square.

        The child level is cached, so repeated calls share rings and
        pushforward memos.
        """
        if self._child is not None:
            return self._child
        if self.kind == "base":
            raise SpaceError("cannot blow up the base level")
        if self.cotangent is None or self.cotangent.rank != 2:
            raise SpaceError("tower levels need a rank-2 relative cotangent")
        level = self.level + 1
        e_name = f"e1_{level}"
        fresh: list[tuple[GradedVar, int, tuple]] = []
        for i, name in enumerate(self.rel_names):
            meta = self.copy_meta.get(name)
            if meta is None:
                continue
            if meta[0] == "copy":
                nname = f"{meta[1]}{level}"
                nmeta = meta
            else:  # ("exc", generation, birth level)
                _, gen, birth = meta
                nname = f"e{gen + 1}_{birth}"
                nmeta = ("exc", gen + 1, birth)
            fresh.append((GradedVar(nname, self.ring.vars[i].degree),
                          i, nmeta))
        n_new = 1 + len(fresh)
        nv1 = len(self.ring.vars)
        vars2 = ([GradedVar(e_name, 1)] + [g for g, _, _ in fresh]
                 + list(self.ring.vars))
        ring2 = RingModel(vars2, self.ring.dim + 2)
        nv2 = len(vars2)
        # where each parent generator goes under the second projection
        pull2: list[int | None] = [n_new + i for i in range(nv1)]
        for k, (_, i, _) in enumerate(fresh):
            pull2[i] = 1 + k
        for i, name in enumerate(self.rel_names):
            if name not in self.copy_meta:
                pull2[i] = None
        # where each child generator goes on the diagonal / first factor
        parent_pos: list[int | None] = [None] * nv2
        for k, (_, i, _) in enumerate(fresh):
            parent_pos[1 + k] = i
        for i in range(nv1):
            parent_pos[n_new + i] = i

        pad = (0,) * n_new
        for lmono, rterms in self.ring.rules:
            ring2.add_rule(
                _raw(ring2, {pad + lmono: 1}),
                _raw(ring2, {pad + m: c for m, c in rterms.items()}))

        def remap(mono: Monomial) -> Monomial:
            vec = [0] * nv2
            for i, e in enumerate(mono):
                if e:
                    j = pull2[i]
                    if j is None:
                        raise SpaceError("relative rule mentions a generator "
                                         "without a fresh copy")
                    vec[j] += e
            return tuple(vec)

        child_rel_rules: list[tuple[Monomial, dict[Monomial, Fraction]]] = []
        for lmono, rterms in self.rel_rules:
            l2 = remap(lmono)
            r2: dict[Monomial, Fraction] = {}
            for m, c in rterms.items():
                m2 = remap(m)
                r2[m2] = r2.get(m2, _ZERO) + c
            ring2.add_rule(_raw(ring2, {l2: 1}), _raw(ring2, r2))
            child_rel_rules.append((l2, r2))

        child = SpaceModel(ring2, "blowup", parent=self)
        child._pull2_pos = pull2
        child._parent_pos = parent_pos

        # exceptional relation: the twisted cotangent of the new level is
        # an honest rank-2 bundle, so its cube class must vanish
        e = ring2.var(e_name)
        wt = FormalSheaf(2, child.rename_from_parent(self.cotangent.chern))
        om = difference(whitney_sum(tensor_line(wt, e), line(-e)),
                        trivial(ring2, 1))
        z = om.chern.homogeneous_part(3)
        e3 = ring2.monomial({e_name: 3})
        if z.coefficient(e3) != -1:
            raise SpaceError("exceptional relation is not monic in the "
                             "exceptional class")
        ring2.add_rule(_raw(ring2, {e3: 1}), z + _raw(ring2, {e3: 1}))
        child_rel_rules.append((e3, dict((z + _raw(ring2, {e3: 1})).terms)))
        if not Poly(ring2, ring2.normalize_terms(z.terms)).is_zero:
            raise SpaceError("exceptional relation is not self-consistent")
        child.cotangent = FormalSheaf(
            2, ring2.one() + om.chern.homogeneous_part(1)
            + om.chern.homogeneous_part(2))

        child.rel_names = (e_name,) + tuple(g.name for g, _, _ in fresh)
        child.copy_meta = {e_name: ("exc", 1, level)}
        for g, _, meta in fresh:
            child.copy_meta[g.name] = meta
        child.rel_rules = child_rel_rules
        self._child = child
        return child


# -- level constructors ---------------------------------------------------------


def blowup_level(model: SpaceModel) -> SpaceModel:
    """Functional alias for :meth:`SpaceModel.blowup`."""
    return model.blowup()


def pushforward_level(model: SpaceModel, cls: Poly) -> Poly:
    """Functional alias for :meth:`SpaceModel.pushforward`."""
    return model.pushforward(cls)


def projective_space_base(name: str, n: int) -> SpaceModel:
    """Projective n-space as a bottom level.

    The defining relation is installed even though truncation subsumes it
    inside this ring: towers built on top inherit the rule list, and there
    the relation is live.
    """
    if n < 1:
        raise SpaceError("need a positive-dimensional parameter space")
    ring = RingModel([GradedVar(name, 1)], n, point_class=(n,))
    ring.add_rule(_raw(ring, {(n + 1,): 1}), ring.zero())
    return SpaceModel(ring, "base")


def base_surface_model(n: int, d, k1, k2, c2) -> SpaceModel:
    """The universal divisor of an n-dimensional linear system on a surface.

    The surface enters only through its intersection numbers: ``d`` the
    self-intersection of the polarization, ``k1`` canonical times
    polarization, ``k2`` canonical squared, and ``c2`` the Euler number.
    Returns the family level; its parent is the projective space of the
    system.
    """
    if n < 1:
        raise SpaceError("the linear system must be at least a pencil")
    base = projective_space_base("t", n)
    vars2 = [GradedVar("ks", 1), GradedVar("hs", 1), GradedVar("c2s", 2),
             GradedVar("us", 2), GradedVar("t", 1)]
    ring2 = RingModel(vars2, n + 2, point_class=(0, 0, 0, 1, n))
    mk = ring2.monomial
    us = mk({"us": 1})
    fiber_rules = [
        (mk({"c2s": 1}), {us: Fraction(c2)}),
        (mk({"hs": 2}), {us: Fraction(d)}),
        (mk({"hs": 1, "ks": 1}), {us: Fraction(k1)}),
        (mk({"ks": 2}), {us: Fraction(k2)}),
        (mk({"us": 1, "hs": 1}), {}),
        (mk({"us": 1, "ks": 1}), {}),
        (mk({"us": 2}), {}),
    ]
    for lmono, rterms in fiber_rules:
        ring2.add_rule(_raw(ring2, {lmono: 1}), _raw(ring2, rterms))
    ring2.add_rule(_raw(ring2, {mk({"t": n + 1}): 1}), ring2.zero())
    fam = SpaceModel(ring2, "family", parent=base)
    fam.rel_names = ("ks", "hs", "c2s", "us")
    fam.copy_meta = {"ks": ("copy", "ks"), "hs": ("copy", "hs"),
                     "us": ("copy", "us")}
    # the Euler-number rule is not copied: it has no fresh generator, and
    # stored classes have already normalized it away
    fam.rel_rules = [(l, dict(r)) for l, r in fiber_rules[1:]]
    fam.fiber_point = us
    fam.cotangent = FormalSheaf(2, ring2.poly({
        ring2.monomial({}): _ONE,
        mk({"ks": 1}): _ONE,
        mk({"c2s": 1}): _ONE,
    }))
    fam.family_line = ring2.var("hs") + ring2.var("t")
    return fam


def projective_bundle(base: SpaceModel, q: FormalSheaf,
                      name: str) -> SpaceModel:
    """Relative Proj of the rank-r sheaf ``q`` over a level.

    The new degree-1 generator is the hyperplane class of the fibers; its
    r-th power rewrites through the Chern classes of ``q``, and the
    relative cotangent comes from the fiberwise Euler sequence (twist the
    dual of ``q`` down by the hyperplane and drop a trivial summand).
    """
    if q.ring is not base.ring:
        raise SpaceError("bundle data must live on the base level")
    r = q.rank
    if r < 2:
        raise SpaceError("need rank at least 2 to projectivize")
    ring1 = base.ring
    point = None
    if ring1.point_class is not None:
        point = (r - 1,) + ring1.point_class
    ring2 = RingModel([GradedVar(name, 1)] + list(ring1.vars),
                      ring1.dim + r - 1, point_class=point)
    for lmono, rterms in ring1.rules:
        ring2.add_rule(
            _raw(ring2, {(0,) + lmono: 1}),
            _raw(ring2, {(0,) + m: c for m, c in rterms.items()}))

    def lift0(p: Poly) -> Poly:
        return Poly(ring2, {(0,) + m: c for m, c in p.terms.items()})

    y = ring2.var(name)
    rhs = ring2.zero()
    for i in range(1, r + 1):
        ci = q.chern_part(i)
        if not ci.is_zero:
            rhs = rhs - lift0(ci) * y ** (r - i)
    yr = ring2.monomial({name: r})
    ring2.add_rule(_raw(ring2, {yr: 1}), rhs)

    fam = SpaceModel(ring2, "family", parent=base)
    fam.rel_names = (name,)
    fam.copy_meta = {name: ("copy", name)}
    fam.rel_rules = [(yr, dict(rhs.terms))]
    fam.fiber_point = ring2.monomial({name: r - 1})
    qdl = FormalSheaf(r, lift0(dual(q).chern))
    om = difference(tensor_line(qdl, -y), trivial(ring2, 1))
    if not om.chern.homogeneous_part(r).is_zero:
        raise SpaceError("fiber relation is inconsistent with the Euler "
                         "sequence")
    fam.cotangent = FormalSheaf(r - 1, om.chern)
    return fam


def grassmannian_planes_p4() -> SpaceModel:
    """The variety of planes in projective 4-space (dimension 6).

    Generators are the Chern classes of the rank-3 sheaf of fiberwise
    linear forms (the "quotient"); the complementary rank-2 "sub" sheaf is
    attached as well.  The two vanishing rules above the top degree are
    installed for the benefit of towers built on this base.
    """
    ring = RingModel([GradedVar("q3", 3), GradedVar("q1", 1),
                      GradedVar("q2", 2)], 6, point_class=(0, 0, 3))
    mk = ring.monomial
    rules = [
        (mk({"q3": 1}), {mk({"q1": 1, "q2": 1}): Fraction(2),
                         mk({"q1": 3}): Fraction(-1)}),
        (mk({"q1": 4}), {mk({"q2": 2}): _ONE,
                         mk({"q1": 2, "q2": 1}): _ONE}),
        (mk({"q1": 3, "q2": 1}), {mk({"q1": 1, "q2": 2}): Fraction(3, 2)}),
        (mk({"q1": 2, "q2": 2}), {mk({"q2": 3}): Fraction(2)}),
        (mk({"q1": 1, "q2": 3}), {}),
        (mk({"q2": 4}), {}),
    ]
    for lmono, rterms in rules:
        ring.add_rule(_raw(ring, {lmono: 1}), _raw(ring, rterms))
    model = SpaceModel(ring, "base")
    q1 = ring.var("q1")
    q2 = ring.var("q2")
    quotient = FormalSheaf(3, ring.poly({
        ring.monomial({}): _ONE,
        mk({"q1": 1}): _ONE,
        mk({"q2": 1}): _ONE,
        mk({"q3": 1}): _ONE,
    }))
    sub = FormalSheaf(2, ring.one() - q1 + (q1 * q1 - q2))
    model.sheaves = {"quotient": quotient, "sub": sub}
    return model


def incidence_flag(g2: SpaceModel, name: str = "m") -> SpaceModel:
    """Pairs (plane, hyperplane inside it) over the planes variety.

    Projectivizes the dual of the rank-3 quotient, so the new generator is
    the class of the marked line of forms.  Exposes that line and the
    residual rank-2 sheaf, whose top class vanishes identically.
    """
    quotient = g2.sheaves["quotient"]
    fam = projective_bundle(g2, dual(quotient), name)
    m = fam.ring.var(name)
    marked = line(m)
    lifted = FormalSheaf(quotient.rank, fam.lift(quotient.chern))
    residual = difference(lifted, marked)
    if not residual.chern.homogeneous_part(3).is_zero:
        raise SpaceError("residual sheaf of the flag is not rank 2")
    fam.sheaves = {"quotient": lifted, "line": marked, "residual": residual}
    return fam


def planes_through_line_model() -> SpaceModel:
    """Universal plane restricted to planes through a fixed line.

    The base is the plane's 2-parameter space; the fiberwise forms sheaf
    restricts with total class 1 + x, and the family is its dual
    projectivization.  The tangency line for a degree-5 hypersurface
    section is preset.
    """
    base = projective_space_base("x", 2)
    x = base.ring.var("x")
    forms = FormalSheaf(3, base.ring.one() + x)
    fam = projective_bundle(base, dual(forms), "y")
    xl = fam.ring.var("x")
    fam.family_line = 4 * fam.ring.var("y") + xl
    fam.sheaves = {"quotient": FormalSheaf(3, fam.ring.one() + xl),
                   "line": line(xl)}
    base.sheaves = {"quotient": forms}
    return fam
