"""Backtracking search for embeddings, bounded representability and neat embeddings."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import (FiniteSA, FnAlgebra, FnElement, as_finite_sa, fn_dimension_set,
                   full_fsa, full_size, mask_of)
from .errors import CapacityError, PreconditionError, UsageError

# full FSAs up to this many elements are tabulated before searching into them
TABULATE_LIMIT = 4096
DEFAULT_BUDGET = 1 << 20


@dataclass
class EmbeddingWitness:
    map: tuple
    target: dict
    verified: bool = False

    def to_json(self):
        return {"map": list(self.map), "target": self.target, "verified": self.verified}


class _TableTarget:
    def __init__(self, B):
        self.size = B.size
        self.v = B.v
        self.tab = B.tables
        self.masks = [int(m) for m in B.delta_masks]

    def op(self, a, b, k):
        return self.tab[k][a][b]

    def mask(self, y):
        return self.masks[y]


class _LazyFullTarget:
    """A full FSA addressed by canonical ids; operations computed on demand."""

    def __init__(self, dimension, base_size):
        self.dimension = dimension
        self.base_size = base_size
        self.size = full_size(dimension, base_size)
        self.v = tuple(FnAlgebra(dimension, base_size, full=True).var(k).canonical_id for k in range(dimension))
        self._el = lru_cache(maxsize=1 << 16)(lambda i: FnElement.from_id(i, dimension, base_size))
        self._mask = lru_cache(maxsize=1 << 16)(lambda i: mask_of(fn_dimension_set(self._el(i))))
        self._op = lru_cache(maxsize=1 << 18)(self._compute)

    def _compute(self, a, b, k):
        from .core import fn_star
        return fn_star(self._el(a), self._el(b), k).canonical_id

    def op(self, a, b, k):
        return self._op(a, b, k)

    def mask(self, y):
        return self._mask(y)


@lru_cache(maxsize=16)
def _tabulated_full(dimension, base_size):
    return as_finite_sa(full_fsa(dimension, base_size))


def _target_for(B, budget):
    if isinstance(B, FiniteSA):
        return _TableTarget(B), {"kind": "algebra", "dimension": B.dimension, "size": B.size}
    if isinstance(B, FnAlgebra):
        if not B.full:
            B = as_finite_sa(B)
            return _TableTarget(B), {"kind": "algebra", "dimension": B.dimension, "size": B.size}
        desc = {"kind": "full_fsa", "dimension": B.dimension, "base_size": B.base_size}
        n = B.size
        if n <= TABULATE_LIMIT:
            return _TableTarget(_tabulated_full(B.dimension, B.base_size)), desc
        if n > budget:
            raise CapacityError(f"target has {n} elements, search budget is {budget}", required=n, bound=budget)
        return _LazyFullTarget(B.dimension, B.base_size), desc
    raise TypeError(f"cannot search into {type(B).__name__}")


def _search(A, tgt):
    """Depth-first search over injective homomorphisms, least unassigned element first.

    Assigning ``x -> y`` forces ``a *_k x -> h(a) *_k y`` (and symmetrically) for every
    assigned ``a``; candidates must satisfy ``Delta x subset of Delta y``.  Candidates are
    tried in ascending order, so the first solution is the lexicographically least.
    """
    n, alpha = A.size, A.dimension
    tab = A.tables
    amask = [int(m) for m in A.delta_masks]
    h = [-1] * n
    used = {}
    assigned = []

    def push(x, y, trail):
        stack = [(x, y)]
        while stack:
            x, y = stack.pop()
            if h[x] == y:
                continue
            if h[x] != -1 or y in used:
                return False
            if amask[x] & ~tgt.mask(y):
                return False
            h[x] = y
            used[y] = x
            trail.append(x)
            assigned.append(x)
            for a in assigned:
                ha = h[a]
                for k in range(alpha):
                    stack.append((tab[k][a][x], tgt.op(ha, y, k)))
                    stack.append((tab[k][x][a], tgt.op(y, ha, k)))
        return True

    def undo(trail):
        for x in reversed(trail):
            del used[h[x]]
            h[x] = -1
            assigned.pop()

    trail0 = []
    ok = True
    for k in range(alpha):
        if not push(A.v[k], tgt.v[k], trail0):
            ok = False
            break
    if not ok:
        return
    if n > tgt.size:
        return

    def dfs():
        try:
            x = h.index(-1)
        except ValueError:
            yield tuple(h)
            return
        for y in range(tgt.size):
            if y in used or amask[x] & ~tgt.mask(y):
                continue
            trail = []
            if push(x, y, trail):
                yield from dfs()
            undo(trail)

    yield from dfs()


def verify_embedding(A, B, phi):
    """Exhaustive re-check that ``phi`` is an injective homomorphism ``A -> B``."""
    tgt = B if isinstance(B, (_TableTarget, _LazyFullTarget)) else _target_for(B, DEFAULT_BUDGET)[0]
    if len(phi) != A.size or len(set(phi)) != len(phi):
        return False
    if any(phi[A.v[k]] != tgt.v[k] for k in range(A.dimension)):
        return False
    tab = A.tables
    for k in range(A.dimension):
        for a in range(A.size):
            for b in range(A.size):
                if phi[tab[k][a][b]] != tgt.op(phi[a], phi[b], k):
                    return False
    return True


def find_embedding(A, B, budget=DEFAULT_BUDGET):
    """Lexicographically least injective homomorphism ``A -> B``, or ``None`` if there is none.

    ``B`` is a :class:`FiniteSA` or a :class:`FnAlgebra`; a full one is addressed by
    canonical ids (large ones lazily, up to ``budget`` elements).
    """
    if A.dimension != B.dimension:
        raise UsageError(f"dimension mismatch: {A.dimension} vs {B.dimension}")
    tgt, desc = _target_for(B, budget)
    for phi in _search(A, tgt):
        return EmbeddingWitness(phi, desc, verify_embedding(A, tgt, phi))
    return None


@dataclass
class Representability:
    status: str                 # "witness" | "unknown"
    base_size: int | None = None
    route: str | None = None    # "Z" | "search"
    witness: EmbeddingWitness | None = None
    tried: tuple = ()

    def to_json(self):
        return {"status": self.status, "base_size": self.base_size, "route": self.route,
                "witness": self.witness.to_json() if self.witness else None, "tried": list(self.tried)}


def is_representable_up_to(A, max_base, budget=DEFAULT_BUDGET, check=True):
    """Look for an embedding of ``A`` into a full FSA over at most ``max_base`` points.

    The representation over ``Z`` is tried first; then full FSAs over 1, 2, ...,
    ``max_base`` points are searched.  ``unknown`` means only that nothing was found
    within the bound.
    """
    from .constructions import representation_via_Z
    from .predicates import check_axioms
    if check and check_axioms(A, max_violations=1):
        raise PreconditionError("not an SA (see check_axioms)")
    rep = representation_via_Z(A, check=False)
    if rep.status == "embedding" and len(rep.base) <= max_base:
        u = len(rep.base)
        phi = tuple(f.canonical_id for f in rep.images)
        desc = {"kind": "full_fsa", "dimension": A.dimension, "base_size": u}
        if full_size(A.dimension, u) <= TABULATE_LIMIT:
            tgt = _TableTarget(_tabulated_full(A.dimension, u))
        else:
            tgt = _LazyFullTarget(A.dimension, u)
        return Representability("witness", u, "Z", EmbeddingWitness(phi, desc, verify_embedding(A, tgt, phi)))
    tried = []
    for u in range(1, max_base + 1):
        size = full_size(A.dimension, u)
        if size < A.size:
            tried.append(u)
            continue
        w = find_embedding(A, full_fsa(A.dimension, u, lazy=True), budget=budget)
        tried.append(u)
        if w is not None:
            return Representability("witness", u, "search", w, tuple(tried))
    return Representability("unknown", tried=tuple(tried))


def find_neat_embedding(B, A, beta=None, budget=DEFAULT_BUDGET):
    """Embed ``B`` (dimension beta) into the beta-neat reduct of ``A``.

    ``A`` is a :class:`FiniteSA` or a full :class:`FnAlgebra`.  The witness maps into
    ``A``'s ids (canonical ids for a full FnAlgebra).
    """
    from .constructions import neat_reduct, neat_reduct_of_full
    beta = B.dimension if beta is None else beta
    if beta != B.dimension:
        raise UsageError(f"B has dimension {B.dimension}, not {beta}")
    if A.dimension < beta:
        raise UsageError(f"A has dimension {A.dimension} < {beta}")
    if isinstance(A, FnAlgebra):
        if not A.full:
            A = as_finite_sa(A)
        else:
            N, back = neat_reduct_of_full(A.dimension, A.base_size, beta)
            desc = {"kind": "full_fsa", "dimension": A.dimension, "base_size": A.base_size, "neat": beta}
            w = find_embedding(B, N, budget)
            if w is None:
                return None
            return EmbeddingWitness(tuple(back[i] for i in w.map), desc, w.verified)
    N, back = neat_reduct(A, beta)
    w = find_embedding(B, N, budget)
    if w is None:
        return None
    desc = {"kind": "algebra", "dimension": A.dimension, "size": A.size, "neat": beta}
    return EmbeddingWitness(tuple(back[i] for i in w.map), desc, w.verified)
