"""Constructions producing new algebras: subalgebras, filter quotients of products, the
representation over ``Z``, reducts, neat reducts, dilations and padded algebras."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import (FiniteSA, FnAlgebra, FnElement, assignments, fn_dimension_set,
                   fn_star, full_fsa, variable_fn, zero_elements, zero_set)
from .errors import IntegrityError, PreconditionError, UsageError
from .substitution import gamma_hom_image, is_gamma_homomorphism, subst_in_order


# -- subalgebras ---------------------------------------------------------------------------

def generate_subalgebra(A, gens):
    """Least subset containing ``gens`` and every ``v_k``, closed under all operations.

    Returns ``(subalgebra, inclusion)`` with ``inclusion[i]`` the id in ``A`` of the
    subalgebra's element ``i``; the carrier keeps ``A``'s ordering.
    """
    n = A.size
    seeds = sorted({int(g) for g in gens} | set(A.v))
    for g in seeds:
        if not 0 <= g < n:
            raise UsageError(f"generator {g} out of range (size {n})")
    closed = np.zeros(n, dtype=np.bool_)
    members = np.empty(max(n, 1), dtype=np.int64)
    for i, g in enumerate(seeds):
        closed[g] = True
        members[i] = g
    if seeds:
        _kernels.close_under(np.ascontiguousarray(A.star), closed, members, len(seeds), 0)
    carrier = np.flatnonzero(closed)
    return induced(A, carrier), tuple(int(x) for x in carrier)


def induced(A, carrier):
    """The algebra on ``carrier`` (ascending ids of ``A``), which must be closed."""
    carrier = np.asarray(carrier, dtype=np.int64)
    pos = np.full(A.size, -1, dtype=np.int64)
    pos[carrier] = np.arange(len(carrier))
    star = A.star[:, carrier][:, :, carrier]
    new = pos[star.astype(np.int64)]
    if (new < 0).any():
        k, i, j = np.argwhere(new < 0)[0]
        raise IntegrityError(f"not closed: {carrier[i]} *_{k} {carrier[j]} = {int(star[k, i, j])} leaves the carrier")
    v = [int(pos[x]) for x in A.v]
    if min(v, default=0) < 0:
        raise IntegrityError("the carrier misses some v_k")
    return FiniteSA(A.dimension, len(carrier), v, new)


# -- filters and reduced products -------------------------------------------------------------

@dataclass(frozen=True)
class FilterSpec:
    """A family of subsets of ``I = {0, .., index_size-1}``."""

    index_size: int
    sets: frozenset

    def __post_init__(self):
        sets = frozenset(frozenset(int(i) for i in s) for s in self.sets)
        for s in sets:
            for i in s:
                if not 0 <= i < self.index_size:
                    raise UsageError(f"index {i} outside I = range({self.index_size})")
        object.__setattr__(self, "sets", sets)

    @property
    def universe(self):
        return frozenset(range(self.index_size))

    @property
    def proper(self):
        return frozenset() not in self.sets

    def __contains__(self, s):
        return frozenset(s) in self.sets

    def kernel(self):
        """Intersection of all members; a valid filter on a finite set is generated by it."""
        out = self.universe
        for s in self.sets:
            out &= s
        return out

    @classmethod
    def generated_by(cls, index_size, generator):
        """The principal filter of all supersets of ``generator``."""
        g = frozenset(generator)
        rest = [i for i in range(index_size) if i not in g]
        sets = set()
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                sets.add(g | frozenset(extra))
        return cls(index_size, frozenset(sets))

    @classmethod
    def trivial(cls, index_size):
        return cls(index_size, frozenset([frozenset(range(index_size))]))

    @classmethod
    def principal(cls, index_size, j):
        if not 0 <= j < index_size:
            raise UsageError(f"index {j} outside I = range({index_size})")
        return cls.generated_by(index_size, {j})

    def to_json(self):
        return {"index_size": self.index_size, "sets": sorted(sorted(s) for s in self.sets)}


@dataclass(frozen=True)
class FilterIssue:
    kind: str
    detail: str


def validate_filter(F):
    """Issues with ``F`` as a proper filter; an empty list means it is one."""
    issues = []
    I = F.universe
    if I not in F.sets:
        issues.append(FilterIssue("missing-universe", f"I = {sorted(I)} is not a member"))
    for s in sorted(F.sets, key=lambda s: (len(s), sorted(s))):
        for i in sorted(I - s):
            if s | {i} not in F.sets:
                issues.append(FilterIssue("not-upward-closed", f"{sorted(s)} is a member but {sorted(s | {i})} is not"))
                break
    members = sorted(F.sets, key=lambda s: (len(s), sorted(s)))
    for s, t in itertools.combinations(members, 2):
        if s & t not in F.sets:
            issues.append(FilterIssue("not-intersection-closed", f"{sorted(s)} & {sorted(t)} = {sorted(s & t)} is not a member"))
    if not F.proper:
        issues.append(FilterIssue("improper", "the empty set is a member"))
    return issues


def equivalent(F, x, y):
    """``x ~ y`` iff the coordinates where they agree form a member of ``F``."""
    return frozenset(i for i in range(len(x)) if x[i] == y[i]) in F.sets


@dataclass
class QuotientMap:
    """Classes of product tuples modulo a filter.

    Class ids follow the lexicographic order of ``representatives`` (each the least tuple
    of its class).
    """

    sizes: tuple
    kernel: tuple
    representatives: tuple = field(repr=False)

    def class_of(self, t):
        if len(t) != len(self.sizes):
            raise UsageError("tuple length does not match the number of factors")
        cid = 0
        for i in self.kernel:
            cid = cid * self.sizes[i] + t[i]
        return cid

    def __len__(self):
        return len(self.representatives)


def reduced_product(algebras, F, allow_improper=False, verify=False):
    """``prod A_i / F`` for a filter ``F`` on the finite index set of factors.

    On a finite index set a filter is generated by its kernel ``K``, so two tuples are
    equivalent iff they agree on ``K``; classes are indexed by their restriction to ``K``.
    With ``verify=True`` every operation is recomputed from the greatest representative
    of each class as well and compared.
    """
    algebras = list(algebras)
    if not algebras:
        raise UsageError("need at least one factor")
    alpha = algebras[0].dimension
    if any(A.dimension != alpha for A in algebras):
        raise UsageError("factors have different dimensions")
    if F.index_size != len(algebras):
        raise UsageError(f"filter lives on {F.index_size} indices, there are {len(algebras)} factors")
    issues = [i for i in validate_filter(F) if i.kind != "improper"]
    if issues:
        raise UsageError(f"not a filter: {issues[0].detail}")
    if not F.proper and not allow_improper:
        raise UsageError("improper filter: the quotient collapses to one point (pass allow_improper=True)")
    sizes = tuple(A.size for A in algebras)
    kernel = tuple(sorted(F.kernel())) if F.proper else ()
    ranges = [range(sizes[i]) if i in kernel else range(1) for i in range(len(sizes))]
    reps = tuple(itertools.product(*ranges))
    qmap = QuotientMap(sizes, kernel, reps)
    n = len(reps)
    star = np.empty((alpha, n, n), dtype=np.int64)
    for k in range(alpha):
        for ca, ra in enumerate(reps):
            for cb, rb in enumerate(reps):
                t = tuple(A.op(ra[i], rb[i], k) for i, A in enumerate(algebras))
                star[k, ca, cb] = qmap.class_of(t)
    v = [qmap.class_of(tuple(A.v[k] for A in algebras)) for k in range(alpha)]
    if verify:
        top = [tuple(r[i] if i in kernel else sizes[i] - 1 for i in range(len(sizes))) for r in reps]
        for k in range(alpha):
            for ca in range(n):
                for cb in range(n):
                    t = tuple(A.op(top[ca][i], top[cb][i], k) for i, A in enumerate(algebras))
                    if qmap.class_of(t) != star[k, ca, cb]:
                        raise IntegrityError(f"operation {k} not well defined on classes {ca}, {cb}")
    return FiniteSA(alpha, n, v, star), qmap


# -- representation over Z ---------------------------------------------------------------------

@dataclass
class Representation:
    status: str                      # "embedding" | "not-injective" | "empty-base"
    base: tuple = ()                 # ids of Z, ascending; base point i is base[i]
    images: tuple = ()               # FnElement per element of A
    homomorphism: object = None
    collision: tuple | None = None

    def to_json(self):
        return {"status": self.status, "base": list(self.base),
                "map": [list(f.table) for f in self.images],
                "collision": list(self.collision) if self.collision else None}


def representation_via_Z(A, check=True):
    """``a -> (s -> s *_(alpha) a)`` on ``Z^alpha``.

    For finite alpha the family of finite index sets has a greatest member, alpha
    itself, so the filter used to glue the maps ``phi_G`` together is principal there,
    the quotient of ``prod Z(G)`` is a copy of ``Z``, and the glued map is ``phi_alpha``.
    :func:`representation_literal` builds the quotient explicitly for comparison.
    """
    if check:
        from .predicates import check_axioms
        if check_axioms(A, max_violations=1):
            raise PreconditionError("not an SA (see check_axioms)")
    full = frozenset(range(A.dimension))
    base = zero_elements(A)
    if not base:
        return Representation("empty-base")
    images = tuple(gamma_hom_image(A, full, a, base) for a in range(A.size))
    target = full_fsa(A.dimension, len(base), lazy=True)
    hom = is_gamma_homomorphism(images, A, target, full)
    seen = {}
    collision = None
    for a, f in enumerate(images):
        if f.table in seen:
            collision = (seen[f.table], a)
            break
        seen[f.table] = a
    status = "embedding" if collision is None and hom.holds else "not-injective"
    if not hom.holds:
        raise IntegrityError(f"phi_alpha is not a homomorphism: {hom.violations[0]}")
    return Representation(status, base, images, hom, collision)


def representation_literal(A, max_product=1 << 16):
    """The glued representation built literally from ``prod <Z(G) : G subset of alpha>``.

    Returns ``(class_value, images)``: ``class_value[X]`` is the alpha-coordinate shared by
    the members of class ``X`` (a bijection onto ``Z``), and ``images[a]`` is the table of
    ``phi(a)`` on ``U^alpha`` with ``U`` the list of classes, class ``X`` in position ``X``.
    """
    alpha = A.dimension
    if alpha > 2:
        raise UsageError("the literal construction is only provided for dimension <= 2")
    J = [frozenset(k for k in range(alpha) if m >> k & 1) for m in range(1 << alpha)]
    top = J.index(frozenset(range(alpha)))
    up = {i: frozenset(j for j, G in enumerate(J) if G >= S) for i, S in enumerate(J)}
    family = set()
    for r in range(len(J) + 1):
        for Q in itertools.combinations(range(len(J)), r):
            Q = frozenset(Q)
            if any(Q >= up[i] for i in range(len(J))):
                family.add(Q)
    F = FilterSpec(len(J), frozenset(family))
    issues = validate_filter(F)
    if issues:
        raise IntegrityError(f"glueing family is not a proper filter: {issues[0].detail}")
    factors = [sorted(zero_set(A, G)) for G in J]
    total = 1
    for f in factors:
        total *= len(f)
    if total == 0:
        raise PreconditionError("some Z(G) is empty")
    if total > max_product:
        raise UsageError(f"product of the Z(G) has {total} tuples (limit {max_product})")
    W = list(itertools.product(*factors))
    classes = []
    for w in W:
        for cl in classes:
            if equivalent(F, cl[0], w):
                cl.append(w)
                break
        else:
            classes.append([w])
    Z = zero_elements(A)

    def choose(cl):
        consts = [f for f in cl if len(set(f)) == 1 and f[0] in Z]
        if len(consts) > 1:
            raise IntegrityError("more than one constant tuple in a class")
        return consts[0] if consts else min(cl)

    chosen = [choose(cl) for cl in classes]
    class_value = [c[top] for c in chosen]
    if sorted(class_value) != list(Z):
        raise IntegrityError("classes do not correspond one-to-one with Z")

    def class_index(w):
        for i, cl in enumerate(classes):
            if equivalent(F, cl[0], w):
                return i
        raise IntegrityError(f"{w} lies in no class")

    orders = [sorted(G) for G in J]
    images = []
    for a in range(A.size):
        table = []
        for s in assignments(alpha, len(classes)):
            w = tuple(subst_in_order(A, tuple(chosen[s[lam]][gi] for lam in range(alpha)), orders[gi], a)
                      for gi in range(len(J)))
            table.append(class_index(w))
        images.append(tuple(table))
    return class_value, images


# -- reducts, neat reducts, dilations, pads ----------------------------------------------------------

def reduct(A, beta, verify=False):
    """Same carrier, operations and constants below ``beta``.  Returns ``(algebra, map)``."""
    if not 0 <= beta <= A.dimension:
        raise UsageError(f"beta = {beta} must lie in [0, {A.dimension}]")
    B = FiniteSA(beta, A.size, A.v[:beta], A.star[:beta])
    if verify:
        from .predicates import check_axioms
        if not check_axioms(A, max_violations=1) and check_axioms(B, max_violations=1):
            raise IntegrityError("reduct of an SA fails the axioms")
    return B, tuple(range(A.size))


def neat_reduct(A, beta):
    """Elements with ``Delta x`` inside ``beta``, with the operations below ``beta``.

    Returns ``(algebra, map)`` where ``map[i]`` is the id in ``A`` of element ``i``.
    """
    if not 0 <= beta <= A.dimension:
        raise UsageError(f"beta = {beta} must lie in [0, {A.dimension}]")
    outside = ~((1 << beta) - 1)
    carrier = np.flatnonzero((A.delta_masks & outside) == 0)
    keep = np.zeros(A.size, dtype=bool)
    keep[carrier] = True
    for k in range(beta):
        block = A.star[k][np.ix_(carrier, carrier)]
        bad = ~keep[block]
        if bad.any():
            i, j = np.argwhere(bad)[0]
            x, y = int(carrier[i]), int(carrier[j])
            raise IntegrityError(
                f"{x} *_{k} {y} = {int(block[i, j])} has dimension set outside {beta}; the input is not an SA")
    pos = np.full(A.size, -1, dtype=np.int64)
    pos[carrier] = np.arange(len(carrier))
    star = pos[A.star[:beta][:, carrier][:, :, carrier].astype(np.int64)]
    v = [int(pos[A.v[k]]) for k in range(beta)]
    return FiniteSA(beta, len(carrier), v, star), tuple(int(x) for x in carrier)


def neat_reduct_of_full(dimension, base_size, beta):
    """Neat reduct of the full FSA of ``dimension`` without enumerating it.

    Its members are the functions depending on coordinates below ``beta`` only, i.e. the
    cylinders over ``F_beta(U)``; operations are computed on the cylinders themselves.
    Returns ``(algebra, canonical_ids)``.
    """
    if not 0 <= beta <= dimension:
        raise UsageError(f"beta = {beta} must lie in [0, {dimension}]")
    extra = dimension - beta
    cylinders = [dilate_element(f, extra) for f in full_fsa(beta, base_size).elements]
    cylinders.sort(key=lambda f: f.canonical_id)
    index = {f.table: i for i, f in enumerate(cylinders)}
    n = len(cylinders)
    star = np.empty((beta, n, n), dtype=np.int64)
    for k in range(beta):
        for i, f in enumerate(cylinders):
            for j, g in enumerate(cylinders):
                h = fn_star(f, g, k)
                if h.table not in index:
                    raise IntegrityError(f"cylinders not closed at {i} *_{k} {j}")
                star[k, i, j] = index[h.table]
    v = [index[variable_fn(k, dimension, base_size).table] for k in range(beta)]
    return FiniteSA(beta, n, v, star), tuple(f.canonical_id for f in cylinders)


@dataclass
class Dilation:
    images: tuple
    target: FnAlgebra
    homomorphism: bool
    injective: bool
    delta_ok: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.homomorphism and self.injective and self.delta_ok


def dilate_element(f, extra):
    """The cylinder ``s -> f(s restricted to alpha)`` in dimension ``alpha + extra``."""
    # little-endian ranks: the added coordinates are the high digits
    return FnElement(f.dimension + extra, f.base_size, f.table * f.base_size ** extra)


def dilate(afn, extra):
    """Map each element of ``afn`` to its cylinder in the full FSA of dimension alpha + extra
    and check that the result is an embedding into that algebra's alpha-neat reduct."""
    if extra < 0:
        raise UsageError("extra dimensions must be >= 0")
    alpha, u = afn.dimension, afn.base_size
    elements = afn.elements
    images = tuple(dilate_element(f, extra) for f in elements)
    target = full_fsa(alpha + extra, u, lazy=True)
    failures = []
    index = {f.table: i for i, f in enumerate(elements)}
    hom = True
    for k in range(alpha):
        if dilate_element(variable_fn(k, alpha, u), extra) != variable_fn(k, alpha + extra, u):
            hom = False
            failures.append({"kind": "constant", "kappa": k})
        for i, f in enumerate(elements):
            for j, g in enumerate(elements):
                h = fn_star(f, g, k)
                if h.table not in index:
                    raise IntegrityError(f"source not closed at {i} *_{k} {j}")
                if images[index[h.table]] != fn_star(images[i], images[j], k):
                    hom = False
                    failures.append({"kind": "operation", "kappa": k, "a": i, "b": j})
    injective = len({f.table for f in images}) == len(images)
    delta_ok = True
    for i, f in enumerate(images):
        d = fn_dimension_set(f)
        if any(k >= alpha for k in d):
            delta_ok = False
            failures.append({"kind": "dimension", "element": i, "delta": sorted(d)})
    return Dilation(images, target, hom, injective, delta_ok, failures)


def pad_algebra(B, gamma, v_choice):
    """Extend ``B`` (dimension beta) to dimension ``gamma``: every new operation is the right
    projection ``x *_l y = y`` and the new constants are ``v_choice``.  Not an SA in general."""
    beta = B.dimension
    if gamma < beta:
        raise UsageError(f"gamma = {gamma} is below the dimension {beta}")
    v_choice = tuple(int(x) for x in v_choice)
    if len(v_choice) != gamma - beta:
        raise UsageError(f"need {gamma - beta} new constants, got {len(v_choice)}")
    n = B.size
    proj = np.broadcast_to(np.arange(n), (gamma - beta, n, n))
    star = np.concatenate([B.star.astype(np.int64), proj.astype(np.int64)], axis=0)
    return FiniteSA(gamma, n, B.v + v_choice, star)


__all__ = [
    "generate_subalgebra", "induced", "FilterSpec", "FilterIssue", "validate_filter", "equivalent",
    "QuotientMap", "reduced_product", "Representation", "representation_via_Z", "representation_literal",
    "reduct", "neat_reduct", "neat_reduct_of_full", "Dilation", "dilate_element", "dilate", "pad_algebra",
]
