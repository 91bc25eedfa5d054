"""Finite substitution algebras, function algebras over a finite base, and dimension sets.

Two representations live here:

* :class:`FiniteSA` -- an abstract algebra given by explicit operation tables.
  Element ids are ``0..n-1``, ``star[k][a][b]`` is ``a *_k b`` and ``v[k]`` is the
  distinguished constant ``v_k``.
* :class:`FnAlgebra` -- a set of functions ``U^alpha -> U`` (each a :class:`FnElement`)
  with ``(f *_k g)(s) = g(s<k, f(s)>)``.

Assignments ``s in U^alpha`` are tuples ranked little-endian, ``rank(s) = sum s_l * u**l``,
and a function is stored as its output table in rank order.  The canonical id of a
function is its table read as a base-``u`` numeral, least significant digit first; the
full function algebra lists its elements in ascending canonical id, so there the
element id *is* the canonical id.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapacityError, IntegrityError, UsageError

DEFAULT_BOUND = 65_536
# alpha * n * n cells; full_fsa(2, 3) needs 7.7e8
TABLE_CELL_BOUND = 1 << 30


def rank(s, base_size):
    r = 0
    for lam in reversed(range(len(s))):
        r = r * base_size + s[lam]
    return r


def unrank(r, dimension, base_size):
    out = []
    for _ in range(dimension):
        r, digit = divmod(r, base_size)
        out.append(digit)
    return tuple(out)


def assignments(dimension, base_size):
    """All of ``U^alpha`` in ascending rank order."""
    for p in itertools.product(range(base_size), repeat=dimension):
        yield p[::-1]


def update_assignment(s, kappa, x, base_size=None):
    """Return ``s<kappa, x>``: ``s`` with coordinate ``kappa`` replaced by ``x``."""
    if not 0 <= kappa < len(s):
        raise UsageError(f"index {kappa} out of range for an assignment of length {len(s)}")
    if x < 0 or (base_size is not None and x >= base_size):
        raise UsageError(f"base element {x} out of range (|U| = {base_size})")
    return s[:kappa] + (x,) + s[kappa + 1:]


@dataclass(frozen=True)
class FnElement:
    """A function ``U^alpha -> U`` stored as its output table in rank order."""

    dimension: int
    base_size: int
    table: tuple

    def __post_init__(self):
        if self.base_size < 1 or self.dimension < 0:
            raise UsageError("need base_size >= 1 and dimension >= 0")
        object.__setattr__(self, "table", tuple(int(t) for t in self.table))
        if len(self.table) != self.base_size ** self.dimension:
            raise UsageError(
                f"table has {len(self.table)} entries, expected {self.base_size ** self.dimension}"
            )
        for r, t in enumerate(self.table):
            if not 0 <= t < self.base_size:
                raise UsageError(f"table[{r}] = {t} is not a base element (|U| = {self.base_size})")

    def __call__(self, s):
        if len(s) != self.dimension:
            raise UsageError(f"assignment of length {len(s)} for a function of dimension {self.dimension}")
        return self.table[rank(s, self.base_size)]

    @property
    def canonical_id(self):
        ident = 0
        for t in reversed(self.table):
            ident = ident * self.base_size + t
        return ident

    @classmethod
    def from_id(cls, ident, dimension, base_size):
        m = base_size ** dimension
        if not 0 <= ident < base_size ** m:
            raise UsageError(f"canonical id {ident} out of range")
        return cls(dimension, base_size, unrank(ident, m, base_size))

    def __repr__(self):
        return f"FnElement(dim={self.dimension}, u={self.base_size}, table={list(self.table)})"


def variable_fn(kappa, dimension, base_size):
    """The projection ``V_kappa(s) = s_kappa``."""
    if not 0 <= kappa < dimension:
        raise UsageError(f"index {kappa} out of range for dimension {dimension}")
    m = base_size ** dimension
    return FnElement(dimension, base_size, tuple((r // base_size ** kappa) % base_size for r in range(m)))


def constant_fn(x, dimension, base_size):
    return FnElement(dimension, base_size, (x,) * base_size ** dimension)


def _update_rank_table(dimension, base_size, kappa):
    # upd[r, x] = rank(s_r<kappa, x>)
    m = base_size ** dimension
    r = np.arange(m, dtype=np.int64)
    place = base_size ** kappa
    digit = (r // place) % base_size
    return r[:, None] - digit[:, None] * place + np.arange(base_size, dtype=np.int64)[None, :] * place


def fn_star(f, g, kappa):
    """``(f *_kappa g)(s) = g(s<kappa, f(s)>)``."""
    if (f.dimension, f.base_size) != (g.dimension, g.base_size):
        raise UsageError("operands live over different (dimension, base)")
    if not 0 <= kappa < f.dimension:
        raise UsageError(f"index {kappa} out of range for dimension {f.dimension}")
    u = f.base_size
    place = u ** kappa
    out = []
    for r, fx in enumerate(f.table):
        digit = (r // place) % u
        out.append(g.table[r + (fx - digit) * place])
    return FnElement(f.dimension, u, tuple(out))


def fn_dimension_set(f):
    """Coordinates ``f`` depends on.

    Inside a *full* function algebra this is exactly the dimension set: constant
    functions are members, and ``c_w *_k f`` is ``f`` with coordinate ``k`` pinned to ``w``.
    """
    u = f.base_size
    out = set()
    for kappa in range(f.dimension):
        place = u ** kappa
        for r, fx in enumerate(f.table):
            digit = (r // place) % u
            if any(f.table[r + (w - digit) * place] != fx for w in range(u)):
                out.add(kappa)
                break
    return frozenset(out)


def full_size(dimension, base_size):
    return base_size ** (base_size ** dimension)


class FnAlgebra:
    """A set of functions ``U^alpha -> U`` closed under the induced operations.

    A full algebra may be *lazy*: elements are then produced on demand from their
    canonical ids and nothing of size ``|U|^(|U|^alpha)`` is ever built.
    """

    def __init__(self, dimension, base_size, elements=None, full=False):
        if dimension < 0 or base_size < 1:
            raise UsageError("need dimension >= 0 and base_size >= 1")
        self.dimension = dimension
        self.base_size = base_size
        self.full = bool(full)
        if elements is None:
            if not full:
                raise UsageError("a non-full FnAlgebra needs an explicit element list")
            self._elements = None
            self._index = None
        else:
            elements = tuple(elements)
            for f in elements:
                if (f.dimension, f.base_size) != (dimension, base_size):
                    raise UsageError(f"{f!r} does not live over (dimension={dimension}, base={base_size})")
            if full:
                ids = [f.canonical_id for f in elements]
                if ids != list(range(full_size(dimension, base_size))):
                    raise UsageError("a full FnAlgebra must list every function in ascending canonical id")
            self._elements = elements
            self._index = {f.table: i for i, f in enumerate(elements)}
            if len(self._index) != len(elements):
                raise UsageError("duplicate elements")

    @property
    def size(self):
        if self._elements is None:
            return full_size(self.dimension, self.base_size)
        return len(self._elements)

    def __len__(self):
        return self.size

    @property
    def lazy(self):
        return self._elements is None

    def element(self, i):
        if self._elements is None:
            return FnElement.from_id(i, self.dimension, self.base_size)
        return self._elements[i]

    def index(self, f):
        """Element id of ``f``; ``KeyError`` if it is not a member."""
        if (f.dimension, f.base_size) != (self.dimension, self.base_size):
            raise KeyError(f)
        if self._elements is None:
            return f.canonical_id
        return self._index[f.table]

    def __contains__(self, f):
        try:
            self.index(f)
        except KeyError:
            return False
        return True

    def var(self, kappa):
        return variable_fn(kappa, self.dimension, self.base_size)

    def op(self, f, g, kappa):
        return fn_star(f, g, kappa)

    def materialize(self, bound=DEFAULT_BOUND):
        if self._elements is not None:
            return self._elements
        need = self.size
        if need > bound:
            raise CapacityError(
                f"full FSA of dimension {self.dimension} over {self.base_size} points has {need} elements "
                f"(bound {bound})", required=need, bound=bound)
        return tuple(FnElement.from_id(i, self.dimension, self.base_size) for i in range(need))

    @property
    def elements(self):
        return self.materialize()

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, FnAlgebra):
            return NotImplemented
        if (self.dimension, self.base_size, self.full) != (other.dimension, other.base_size, other.full):
            return False
        if self.full:
            return True
        return self._elements == other._elements

    def __repr__(self):
        return f"FnAlgebra(dimension={self.dimension}, base_size={self.base_size}, size={self.size}, full={self.full})"


def full_fsa(dimension, base_size, bound=DEFAULT_BOUND, lazy=False):
    """The full function substitution algebra ``F_alpha(U)``.

    With ``lazy=True`` no enumeration happens and the bound is not applied.
    """
    if dimension < 0 or base_size < 1:
        raise UsageError("need dimension >= 0 and base_size >= 1")
    if lazy:
        return FnAlgebra(dimension, base_size, None, full=True)
    need = full_size(dimension, base_size)
    if need > bound:
        raise CapacityError(
            f"full_fsa({dimension}, {base_size}) needs {need} elements, bound is {bound}",
            required=need, bound=bound)
    return FnAlgebra(dimension, base_size, FnAlgebra(dimension, base_size, full=True).materialize(bound), full=True)


def _id_dtype(n):
    if n <= 1 << 8:
        return np.uint8
    if n <= 1 << 16:
        return np.uint16
    if n <= 1 << 31:
        return np.int32
    return np.int64


def as_finite_sa(afn, bound=DEFAULT_BOUND, cell_bound=TABLE_CELL_BOUND):
    """Tabulate every operation of a function algebra; element ids are list positions."""
    elements = afn.materialize(bound)
    n = len(elements)
    alpha, u = afn.dimension, afn.base_size
    if alpha * n * n > cell_bound:
        raise CapacityError(f"operation tables need {alpha * n * n} cells (bound {cell_bound})",
                            required=alpha * n * n, bound=cell_bound)
    v = []
    for kappa in range(alpha):
        try:
            v.append(afn.index(variable_fn(kappa, alpha, u)))
        except KeyError:
            raise IntegrityError(f"V_{kappa} is not an element") from None
    m = u ** alpha
    dtype = _id_dtype(n)
    star = np.empty((alpha, n, n), dtype=dtype)
    if n == 0 or alpha == 0:
        return FiniteSA(alpha, n, v, star)
    if u ** m >= 1 << 62:
        _fill_tables_slow(afn, elements, star)
        return FiniteSA(alpha, n, v, star)

    G = np.array([f.table for f in elements], dtype=np.int64).reshape(n, m)
    pw = u ** np.arange(m, dtype=np.int64)
    ids = G @ pw
    if not afn.full:
        order = np.argsort(ids, kind="stable")
        sorted_ids = ids[order]
    # partial[r, c, g] = table_g[c] * u**r
    partial = np.ascontiguousarray((G.T[None, :, :] * pw[:, None, None]))
    ranks = np.arange(m)
    for kappa in range(alpha):
        upd = _update_rank_table(alpha, u, kappa)
        for f in range(n):
            cols = upd[ranks, G[f]]
            acc = partial[0, cols[0]].copy()
            for r in range(1, m):
                acc += partial[r, cols[r]]
            if afn.full:
                star[kappa, f] = acc
                continue
            pos = np.searchsorted(sorted_ids, acc)
            pos = np.minimum(pos, n - 1)
            hit = sorted_ids[pos] == acc
            if not hit.all():
                g = int(np.flatnonzero(~hit)[0])
                raise IntegrityError(f"not closed: element {f} *_{kappa} element {g} is not a member")
            star[kappa, f] = order[pos]
    return FiniteSA(alpha, n, v, star)


def _fill_tables_slow(afn, elements, star):
    for kappa in range(afn.dimension):
        for i, f in enumerate(elements):
            for j, g in enumerate(elements):
                try:
                    star[kappa, i, j] = afn.index(fn_star(f, g, kappa))
                except KeyError:
                    raise IntegrityError(f"not closed: element {i} *_{kappa} element {j} is not a member") from None


class FiniteSA:
    """An algebra ``<A, *_k, v_k>_{k<alpha}`` given by operation tables.

    Nothing about the axioms is assumed; :func:`subalg.predicates.check_axioms`
    decides them.  Tables are read-only numpy arrays of shape ``(alpha, n, n)``.
    """

    def __init__(self, dimension, size, v, star):
        if dimension < 0 or size < 0:
            raise UsageError("dimension and size must be non-negative")
        v = tuple(int(x) for x in v)
        if len(v) != dimension:
            raise UsageError(f"v has {len(v)} entries, expected {dimension}")
        for kappa, x in enumerate(v):
            if not 0 <= x < size:
                raise UsageError(f"v[{kappa}] = {x} out of range (size {size})")
        arr = np.asarray(star)
        if arr.size == 0:
            arr = np.zeros((dimension, size, size), dtype=_id_dtype(size))
        if arr.shape != (dimension, size, size):
            raise UsageError(f"star has shape {arr.shape}, expected {(dimension, size, size)}")
        if arr.size and (int(arr.min()) < 0 or int(arr.max()) >= size):
            bad = np.argwhere((arr < 0) | (arr >= size))[0]
            raise UsageError(f"star[{bad[0]}][{bad[1]}][{bad[2]}] = {int(arr[tuple(bad)])} out of range (size {size})")
        dtype = _id_dtype(size)
        if arr.dtype != dtype:
            arr = arr.astype(dtype)
        elif arr.flags.writeable:
            arr = arr.copy()
        arr.flags.writeable = False
        self.dimension = dimension
        self.size = size
        self.v = v
        self.star = arr

    def __len__(self):
        return self.size

    def op(self, a, b, kappa):
        return int(self.star[kappa, a, b])

    def var(self, kappa):
        return self.v[kappa]

    @cached_property
    def tables(self):
        """Nested Python lists of the tables; for desk-scale inner loops only."""
        return self.star.tolist()

    @cached_property
    def delta_masks(self):
        """Bitmask of the dimension set of every element."""
        n = self.size
        masks = np.zeros(n, dtype=np.int64)
        ar = np.arange(n)
        chunk = max(1, (1 << 24) // max(n, 1))
        for kappa in range(self.dimension):
            T = self.star[kappa]
            moved = np.zeros(n, dtype=bool)
            for lo in range(0, n, chunk):
                moved |= (T[lo:lo + chunk] != ar[None, :]).any(axis=0)
            masks[moved] |= 1 << kappa
        masks.flags.writeable = False
        return masks

    def with_cell(self, kappa, a, b, value):
        """Copy with one table entry overwritten."""
        star = np.array(self.star)
        star[kappa, a, b] = value
        return FiniteSA(self.dimension, self.size, self.v, star)

    def __eq__(self, other):
        if not isinstance(other, FiniteSA):
            return NotImplemented
        return (self.dimension, self.size, self.v) == (other.dimension, other.size, other.v) and bool(
            np.array_equal(self.star, other.star))

    def __hash__(self):
        return hash((self.dimension, self.size, self.v, self.star.tobytes()))

    def __repr__(self):
        return f"FiniteSA(dimension={self.dimension}, size={self.size}, v={list(self.v)})"


def one_point_sa(dimension):
    """The trivial algebra with a single element."""
    return FiniteSA(dimension, 1, (0,) * dimension, np.zeros((dimension, 1, 1), dtype=np.uint8))


def star(A, a, b, kappa):
    """``a *_kappa b`` in ``A``."""
    if not 0 <= kappa < A.dimension:
        raise UsageError(f"index {kappa} out of range for dimension {A.dimension}")
    if not (0 <= a < A.size and 0 <= b < A.size):
        raise UsageError(f"element out of range (size {A.size})")
    return A.op(a, b, kappa)


def dimset(gamma, dimension):
    """Validate a set of indices below ``dimension``."""
    out = frozenset(int(k) for k in gamma)
    for k in out:
        if not 0 <= k < dimension:
            raise UsageError(f"index {k} not below dimension {dimension}")
    return out


def mask_of(gamma):
    m = 0
    for k in gamma:
        m |= 1 << k
    return m


def set_of_mask(mask, dimension):
    return frozenset(k for k in range(dimension) if mask >> k & 1)


def dimension_set(A, x):
    """``{k : a *_k x != x for some a}``, by exhaustion over ``A``."""
    if not 0 <= x < A.size:
        raise UsageError(f"element {x} out of range (size {A.size})")
    return set_of_mask(int(A.delta_masks[x]), A.dimension)


def zero_set(A, gamma):
    """Elements whose dimension set misses every index of ``gamma``."""
    g = mask_of(dimset(gamma, A.dimension))
    return frozenset(int(x) for x in np.flatnonzero((A.delta_masks & g) == 0))


def zero_elements(A):
    """``Z``: the zero-dimensional elements, ascending."""
    return tuple(int(x) for x in np.flatnonzero(A.delta_masks == 0))
