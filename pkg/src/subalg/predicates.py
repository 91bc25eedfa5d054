"""Decision procedures: the SA axiom schema, distinguished and strongly distinguished
elements, local finiteness and the dimension reserve."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import mask_of, set_of_mask, zero_elements

DEFAULT_MAX_VIOLATIONS = 100
# n**3 * alpha above which check_axioms switches to the generator method
EXHAUSTIVE_LIMIT = 1 << 27

AXIOM_TEXT = {
    1: "x *k v_k = x",
    2: "x *k v_l = v_l  (k != l)",
    3: "v_k *k x = x",
    4: "x *l (v_l *k z) = x *l (x *k z)  when l not in Delta x",
    5: "(x *k y) *k z = x *k (y *k z)",
    6: "x *k (y *l z) = (x *k y) *l (x *k z)  when l not in Delta x, k != l",
}


@dataclass(frozen=True)
class AxiomViolation:
    axiom: int
    kappa: int
    lam: int | None = None
    x: int | None = None
    y: int | None = None
    z: int | None = None
    lhs: int | None = None
    rhs: int | None = None

    @property
    def indices(self):
        return tuple(i for i in (self.kappa, self.lam) if i is not None)

    def reproduce(self, A):
        """Re-evaluate the instance in ``A``; True iff it is a genuine failure."""
        lhs, rhs, applies = evaluate_instance(A, self.axiom, self.kappa, self.lam, self.x, self.y, self.z)
        return applies and lhs != rhs

    def to_json(self):
        return {"axiom": self.axiom, "kappa": self.kappa, "lambda": self.lam,
                "witnesses": {k: getattr(self, k) for k in ("x", "y", "z") if getattr(self, k) is not None},
                "lhs": self.lhs, "rhs": self.rhs}

    def __str__(self):
        idx = f"k={self.kappa}" + (f", l={self.lam}" if self.lam is not None else "")
        w = ", ".join(f"{k}={getattr(self, k)}" for k in ("x", "y", "z") if getattr(self, k) is not None)
        return f"axiom ({self.axiom}) [{idx}] fails at {w}: {self.lhs} != {self.rhs}"


def evaluate_instance(A, axiom, kappa, lam=None, x=None, y=None, z=None):
    """Both sides of one axiom instance, plus whether its hypothesis holds."""
    op = A.op
    v = A.v
    if axiom == 1:
        return op(x, v[kappa], kappa), x, True
    if axiom == 2:
        return op(x, v[lam], kappa), v[lam], kappa != lam
    if axiom == 3:
        return op(v[kappa], x, kappa), x, True
    if axiom == 4:
        applies = not (int(A.delta_masks[x]) >> lam & 1)
        return op(x, op(v[lam], z, kappa), lam), op(x, op(x, z, kappa), lam), applies
    if axiom == 5:
        return op(op(x, y, kappa), z, kappa), op(x, op(y, z, kappa), kappa), True
    if axiom == 6:
        applies = kappa != lam and not (int(A.delta_masks[x]) >> lam & 1)
        return op(x, op(y, z, lam), kappa), op(op(x, y, kappa), op(x, z, kappa), lam), applies
    raise ValueError(f"no axiom ({axiom})")


def _free_of(A, lam):
    """Elements x with lam not in Delta x."""
    return np.flatnonzero((A.delta_masks >> lam & 1) == 0)


def _simple_axioms(A):
    S, v, n, alpha = A.star, A.v, A.size, A.dimension
    ar = np.arange(n)
    for k in range(alpha):
        col = S[k][:, v[k]]
        for x in np.flatnonzero(col != ar):
            yield AxiomViolation(1, k, x=int(x), lhs=int(col[x]), rhs=int(x))
    for k in range(alpha):
        for lam in range(alpha):
            if lam == k:
                continue
            col = S[k][:, v[lam]]
            for x in np.flatnonzero(col != v[lam]):
                yield AxiomViolation(2, k, lam, x=int(x), lhs=int(col[x]), rhs=v[lam])
    for k in range(alpha):
        row = S[k][v[k]]
        for x in np.flatnonzero(row != ar):
            yield AxiomViolation(3, k, x=int(x), lhs=int(row[x]), rhs=int(x))
    for k in range(alpha):
        for lam in range(alpha):
            Tk, Tl = S[k], S[lam]
            inner = Tk[v[lam]]
            for x in _free_of(A, lam):
                lhs = Tl[x][inner]
                rhs = Tl[x][Tk[x]]
                for z in np.flatnonzero(lhs != rhs):
                    yield AxiomViolation(4, k, lam, x=int(x), z=int(z), lhs=int(lhs[z]), rhs=int(rhs[z]))


def _exhaustive_axioms(A):
    yield from _simple_axioms(A)
    S, alpha = A.star, A.dimension
    for k in range(alpha):
        T = S[k]
        for x in range(A.size):
            lhs = T[T[x]]            # [y, z] -> (x y) z
            rhs = T[x][T]            # [y, z] -> x (y z)
            for y, z in np.argwhere(lhs != rhs):
                yield AxiomViolation(5, k, x=x, y=int(y), z=int(z), lhs=int(lhs[y, z]), rhs=int(rhs[y, z]))
    for k in range(alpha):
        for lam in range(alpha):
            if lam == k:
                continue
            Tk, Tl = S[k], S[lam]
            for x in _free_of(A, lam):
                row = Tk[x]
                lhs = row[Tl]                       # x *k (y *l z)
                rhs = Tl[np.ix_(row, row)]          # (x *k y) *l (x *k z)
                for y, z in np.argwhere(lhs != rhs):
                    yield AxiomViolation(6, k, lam, x=int(x), y=int(y), z=int(z),
                                         lhs=int(lhs[y, z]), rhs=int(rhs[y, z]))


def magma_generators(T):
    """A generating set of the magma ``(A, T)``, greedily, widest rows first."""
    n = T.shape[0]
    T = np.ascontiguousarray(T)
    sizes = _kernels.row_image_sizes(T)
    order = np.lexsort((np.arange(n), -sizes))
    closed = np.zeros(n, dtype=np.bool_)
    members = np.empty(n, dtype=np.int64)
    count = 0
    gens = []
    T3 = T[None]
    for g in order:
        if closed[g]:
            continue
        gens.append(int(g))
        closed[g] = True
        members[count] = g
        count = _kernels.close_under(T3, closed, members, count + 1, count)
        if count == n:
            break
    return gens


def _generator_axioms(A, cap):
    """Axioms (5) and (6) restricted to generators of each operation.

    For a fixed middle argument y, "(x y) z = x (y z) for all x, z" is preserved by
    products of such y, so checking y over generators of (A, *_k) decides axiom (5).
    Given (5) for *_l, the y satisfying axiom (6) for a fixed x likewise form a
    sub-magma of (A, *_l).  Any failure reported is genuine; once something fails the
    list may be incomplete, but an empty result is exact.
    """
    yield from _simple_axioms(A)
    S, alpha = A.star, A.dimension
    gens = [magma_generators(S[k]) for k in range(alpha)]
    buf = np.empty((cap, 2), dtype=np.int64)
    for k in range(alpha):
        T = np.ascontiguousarray(S[k])
        for y in gens[k]:
            c = _kernels.assoc_middle_failures(T, y, buf, cap)
            for x, z in buf[:min(c, cap)]:
                x, z = int(x), int(z)
                yield AxiomViolation(5, k, x=x, y=y, z=z, lhs=int(T[T[x, y], z]), rhs=int(T[x, T[y, z]]))
    for k in range(alpha):
        for lam in range(alpha):
            if lam == k:
                continue
            Tk, Tl = np.ascontiguousarray(S[k]), np.ascontiguousarray(S[lam])
            ys = np.array(gens[lam], dtype=np.int64)
            for x in _free_of(A, lam):
                x = int(x)
                c = _kernels.distributivity_failures(Tk, Tl, x, ys, buf, cap)
                for y, z in buf[:min(c, cap)]:
                    y, z = int(y), int(z)
                    yield AxiomViolation(6, k, lam, x=x, y=y, z=z, lhs=int(Tk[x, Tl[y, z]]),
                                         rhs=int(Tl[Tk[x, y], Tk[x, z]]))


def check_axioms(A, max_violations=DEFAULT_MAX_VIOLATIONS, method="auto"):
    """All axiom violations of ``A`` (up to ``max_violations``); empty iff ``A`` is an SA.

    ``method`` is ``"exhaustive"`` (every instance, in order axiom, k, l, x, y, z),
    ``"generators"`` (see :func:`_generator_axioms`), or ``"auto"``, which picks the
    exhaustive sweep while ``n**3 * alpha`` stays under ``EXHAUSTIVE_LIMIT``.
    """
    if method == "auto":
        method = "exhaustive" if A.size ** 3 * max(A.dimension, 1) <= EXHAUSTIVE_LIMIT else "generators"
    if method == "exhaustive":
        gen = _exhaustive_axioms(A)
    elif method == "generators":
        gen = _generator_axioms(A, max(max_violations, 1))
    else:
        raise ValueError(f"unknown method {method!r}")
    return list(itertools.islice(gen, max_violations))


def is_locally_finite(A):
    # every dimension set is a subset of the finite index set
    return True


@dataclass
class DistinctionReport:
    holds: bool
    witnesses: dict = field(default_factory=dict)
    failure: tuple | None = None

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"holds": self.holds, "failure": list(self.failure) if self.failure else None,
                "witnesses": [[list(k), list(w) if isinstance(w, tuple) else w]
                              for k, w in sorted(self.witnesses.items())]}


def is_distinguished(A):
    """Every pair x != y is told apart at every index k by some zero-dimensional c.

    Witnesses map ``(k, x, y)`` (x < y) to the least such ``c``.
    """
    Z = np.array(zero_elements(A), dtype=np.int64)
    n = A.size
    witnesses = {}
    for k in range(A.dimension):
        R = A.star[k][Z].astype(np.int64) if len(Z) else np.zeros((0, n), dtype=np.int64)
        for x in range(n - 1):
            diff = R[:, x:x + 1] != R[:, x + 1:]
            has = diff.any(axis=0)
            if not has.all():
                y = x + 1 + int(np.flatnonzero(~has)[0])
                return DistinctionReport(False, witnesses, (k, x, y))
            first = diff.argmax(axis=0)
            for j, c in enumerate(first):
                witnesses[(k, x, x + 1 + j)] = int(Z[c])
    return DistinctionReport(True, witnesses)


def _subst_vectors(A, t):
    """For each Sigma (by bitmask), ``[t *_(Sigma) a for a in A]``."""
    S = A.star
    out = []
    for mask in range(1 << A.dimension):
        vec = np.arange(A.size)
        for k in range(A.dimension):
            if mask >> k & 1:
                vec = S[k][t[k]][vec]
        out.append(vec)
    return out


def is_strongly_distinguished(A):
    """Every pair a != b has one t in Z^alpha with ``t *_(S) a != t *_(S) b`` for *every* S.

    Witnesses map ``(a, b)`` (a < b) to the lexicographically least such ``t``.
    """
    n = A.size
    Z = zero_elements(A)
    open_ = np.triu(np.ones((n, n), dtype=bool), 1)
    witnesses = {}
    if n > 1:
        for t in itertools.product(Z, repeat=A.dimension):
            sep = open_.copy()
            for vec in _subst_vectors(A, t):
                sep &= vec[:, None] != vec[None, :]
            for a, b in np.argwhere(sep):
                witnesses[(int(a), int(b))] = t
            open_ &= ~sep
            if not open_.any():
                break
    if open_.any():
        a, b = np.argwhere(open_)[0]
        return DistinctionReport(False, witnesses, (int(a), int(b)))
    return DistinctionReport(True, witnesses)


def dimension_reserve(A, X):
    """The indices used by no element of ``X``: ``alpha - U{Delta x : x in X}``."""
    used = 0
    for x in X:
        used |= int(A.delta_masks[x])
    return set_of_mask(mask_of(range(A.dimension)) & ~used, A.dimension)


def is_dimension_complemented(A):
    """Always ``(False, note)``: a finite index set leaves no infinite reserve."""
    return False, (f"dimension {A.dimension} is finite, so no reserve alpha - U{{Delta x}} can be infinite")
