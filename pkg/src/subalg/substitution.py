"""Generalized substitutions ``s *_(G) a``, their laws, and the map ``phi_G``."""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field

import numpy as np

from .core import (FiniteSA, FnElement, assignments, dimset, full_fsa, mask_of,
                   zero_set)
from .errors import PreconditionError, UsageError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubstContext:
    """An algebra, a substituent tuple ``s`` and an index set ``gamma``.

    Construction enforces ``s_l in Z(gamma)`` for every ``l``.
    """

    algebra: FiniteSA
    s: tuple
    gamma: frozenset

    def __post_init__(self):
        A = self.algebra
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        object.__setattr__(self, "gamma", dimset(self.gamma, A.dimension))
        if len(self.s) != A.dimension:
            raise UsageError(f"s has length {len(self.s)}, expected {A.dimension}")
        g = mask_of(self.gamma)
        for lam, x in enumerate(self.s):
            if not 0 <= x < A.size:
                raise UsageError(f"s[{lam}] = {x} out of range")
            if int(A.delta_masks[x]) & g:
                raise PreconditionError(f"s[{lam}] = {x} is not in Z({sorted(self.gamma)})")

    @property
    def order(self):
        return tuple(sorted(self.gamma))


def _fold(A, s, order, a):
    tab = A.tables
    for k in order:
        a = tab[k][s[k]][a]
    return a


def generalized_subst(ctx, a):
    """Apply ``s_k *_k`` for k in gamma, innermost first in ascending k; empty gamma is the identity."""
    if not 0 <= a < ctx.algebra.size:
        raise UsageError(f"element {a} out of range")
    return _fold(ctx.algebra, ctx.s, ctx.order, a)


def subst(A, s, gamma, a):
    return generalized_subst(SubstContext(A, s, gamma), a)


def subst_in_order(A, s, order, a):
    """Fold in an explicit listing of the index set (no hypothesis check)."""
    return _fold(A, s, tuple(order), a)


def subst_vector(A, s, gamma):
    """``[s *_(gamma) a for a in A]`` as an array."""
    vec = np.arange(A.size)
    for k in sorted(gamma):
        vec = A.star[k][s[k]][vec]
    return vec


@dataclass
class LawReport:
    law: str
    status: str = "pass"
    counterexample: dict | None = None
    cases_checked: int = 0

    def to_json(self):
        return {"law": self.law, "status": self.status, "counterexample": self.counterexample,
                "cases_checked": self.cases_checked}


LAWS = ("order-independence", "peel-off", "dimension-bound", "point-update", "distribution")


def _subsets(alpha):
    return [frozenset(k for k in range(alpha) if m >> k & 1) for m in range(1 << alpha)]


class _Budget:
    """Exhaustive below ``budget`` cases; seeded uniform sampling above it."""

    def __init__(self, budget, seed):
        self.budget = budget
        self.seed = seed
        self.rng = random.Random(seed)

    def cases(self, pools):
        total = 1
        for p in pools:
            total *= len(p)
        if self.budget is None or total <= self.budget:
            return itertools.product(*pools)
        log.info("sampling %d of %d cases (seed %s)", self.budget, total, self.seed)
        return (tuple(self.rng.choice(p) for p in pools) for _ in range(self.budget))


def check_subst_laws(A, budget=None, seed=0, require_sa=True, laws=LAWS):
    """Check the order-independence and the four substitution laws on ``A``.

    Cases are enumerated exhaustively (or sampled with ``seed`` once a family exceeds
    ``budget``).  Each report keeps the first counterexample met in enumeration order.
    """
    if require_sa:
        from .predicates import check_axioms
        if check_axioms(A, max_violations=1):
            raise PreconditionError("not an SA (see check_axioms); pass require_sa=False to force")
    alpha = A.dimension
    deltas = [int(m) for m in A.delta_masks]
    tab = A.tables
    subsets = _subsets(alpha)
    zs = {g: sorted(zero_set(A, g)) for g in subsets}
    elems = list(range(A.size))
    pick = _Budget(budget, seed)
    reports = {name: LawReport(name) for name in laws}

    def fold(s, order, a):
        for k in order:
            a = tab[k][s[k]][a]
        return a

    def record(name, ok, bindings):
        rep = reports[name]
        rep.cases_checked += 1
        if not ok and rep.counterexample is None:
            rep.status = "fail"
            rep.counterexample = bindings

    for gamma in subsets:
        order = sorted(gamma)
        z = zs[gamma]
        s_pool = list(itertools.product(z, repeat=alpha))
        gm = mask_of(gamma)
        if "order-independence" in reports and len(gamma) >= 2:
            perms = list(itertools.permutations(order))[1:]
            for s, a in pick.cases([s_pool, elems]):
                ref = fold(s, order, a)
                for p in perms:
                    got = fold(s, p, a)
                    record("order-independence", got == ref,
                           {"gamma": order, "order": list(p), "s": list(s), "a": a, "ascending": ref, "permuted": got})
        if "peel-off" in reports:
            for kappa in order:
                rest = [k for k in order if k != kappa]
                for s, a in pick.cases([s_pool, elems]):
                    lhs = fold(s, order, a)
                    rhs = fold(s, rest, tab[kappa][s[kappa]][a])
                    record("peel-off", lhs == rhs,
                           {"gamma": order, "kappa": kappa, "s": list(s), "a": a, "lhs": lhs, "rhs": rhs})
        if "dimension-bound" in reports:
            for s, a in pick.cases([s_pool, elems]):
                r = fold(s, order, a)
                bound = (deltas[a] & ~gm)
                for k in order:
                    bound |= deltas[s[k]]
                record("dimension-bound", deltas[r] & ~bound == 0,
                       {"gamma": order, "s": list(s), "a": a, "result": r,
                        "delta_result": _bits(deltas[r]), "bound": _bits(bound)})
        if "point-update" in reports:
            for kappa in order:
                rest = [k for k in order if k != kappa]
                for s, x, a in pick.cases([s_pool, z, elems]):
                    s2 = s[:kappa] + (x,) + s[kappa + 1:]
                    lhs = fold(s2, order, a)
                    rhs = tab[kappa][x][fold(s, rest, a)]
                    record("point-update", lhs == rhs,
                           {"gamma": order, "kappa": kappa, "s": list(s), "x": x, "a": a, "lhs": lhs, "rhs": rhs})
    if "distribution" in reports:
        for gamma in subsets:
            for sigma in subsets:
                for kappa in range(alpha):
                    if kappa in sigma:
                        continue
                    pool = list(itertools.product(zs[gamma | sigma | {kappa}], repeat=alpha))
                    both = sorted(gamma & sigma)
                    g_only = sorted(gamma - sigma)
                    s_only = sorted(sigma - gamma)
                    go, so = sorted(gamma), sorted(sigma)
                    for s, a, b in pick.cases([pool, elems, elems]):
                        lhs = tab[kappa][fold(s, go, a)][fold(s, so, b)]
                        rhs = fold(s, both, tab[kappa][fold(s, g_only, a)][fold(s, s_only, b)])
                        record("distribution", lhs == rhs,
                               {"gamma": go, "sigma": so, "kappa": kappa, "s": list(s), "a": a, "b": b,
                                "lhs": lhs, "rhs": rhs})
    return [reports[name] for name in laws]


def _bits(mask):
    return [k for k in range(mask.bit_length()) if mask >> k & 1]


def gamma_hom_base(A, gamma):
    """``Z(gamma)`` in ascending id order; position i is base point i of the image algebra."""
    return tuple(sorted(zero_set(A, gamma)))


def gamma_hom_image(A, gamma, a, base=None):
    """``phi_gamma(a)``: the function ``s -> s *_(gamma) a`` on ``Z(gamma)^alpha``.

    Base points are the positions of ``Z(gamma)``'s ids in ascending order.
    """
    gamma = dimset(gamma, A.dimension)
    if base is None:
        base = gamma_hom_base(A, gamma)
    if not base:
        raise PreconditionError(f"Z({sorted(gamma)}) is empty; phi_gamma has no base")
    pos = {x: i for i, x in enumerate(base)}
    order = sorted(gamma)
    table = []
    for point in assignments(A.dimension, len(base)):
        s = tuple(base[i] for i in point)
        r = _fold(A, s, order, a)
        if r not in pos:
            raise PreconditionError(f"s *_(gamma) a = {r} escapes Z(gamma) at s = {s}; the input is not an SA")
        table.append(pos[r])
    return FnElement(A.dimension, len(base), table)


def gamma_hom(A, gamma):
    """``phi_gamma`` on every element, with its target, the lazy full FSA over ``Z(gamma)``."""
    gamma = dimset(gamma, A.dimension)
    base = gamma_hom_base(A, gamma)
    images = tuple(gamma_hom_image(A, gamma, a, base) for a in range(A.size))
    return images, full_fsa(A.dimension, len(base), lazy=True)


@dataclass
class HomReport:
    holds: bool
    violations: list = field(default_factory=list)
    cases_checked: int = 0

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"holds": self.holds, "violations": self.violations, "cases_checked": self.cases_checked}


def is_gamma_homomorphism(phi, A, target, gamma, max_violations=100):
    """Check ``phi(a *_k b) = phi(a) *'_k phi(b)`` and ``phi(v_k) = v'_k`` for every k in gamma.

    ``target`` is a :class:`FiniteSA` (``phi`` maps ids to ids) or a :class:`FnAlgebra`
    (``phi`` maps ids to :class:`FnElement`).
    """
    gamma = sorted(dimset(gamma, A.dimension))
    phi = list(phi)
    if len(phi) != A.size:
        raise UsageError(f"phi has {len(phi)} entries for an algebra of size {A.size}")
    op, var = target.op, target.var
    violations = []
    checked = 0
    for k in gamma:
        checked += 1
        if phi[A.v[k]] != var(k):
            violations.append({"kind": "constant", "kappa": k})
    for k in gamma:
        tab = A.star[k]
        for a in range(A.size):
            for b in range(A.size):
                checked += 1
                lhs = phi[int(tab[a, b])]
                rhs = op(phi[a], phi[b], k)
                if lhs != rhs and len(violations) < max_violations:
                    violations.append({"kind": "operation", "kappa": k, "a": a, "b": b})
    return HomReport(not violations, violations, checked)
