"""Compiled inner loops for tables too large for exhaustive numpy sweeps."""
import numba
import numpy as np


@numba.njit(cache=True)
def close_under(star, closed, members, count, processed):
    """Extend ``members[:count]`` to its closure under every table in ``star``.

    ``members[:processed]`` must already be closed among themselves.  Returns the new count.
    """
    alpha = star.shape[0]
    i = processed
    while i < count:
        e = members[i]
        for j in range(i + 1):
            h = members[j]
            for k in range(alpha):
                p = star[k, e, h]
                if not closed[p]:
                    closed[p] = True
                    members[count] = p
                    count += 1
                p = star[k, h, e]
                if not closed[p]:
                    closed[p] = True
                    members[count] = p
                    count += 1
        i += 1
    return count


@numba.njit(cache=True)
def row_image_sizes(T):
    n = T.shape[0]
    out = np.zeros(n, dtype=np.int64)
    seen = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        c = 0
        for z in range(n):
            p = T[x, z]
            if seen[p] != x:
                seen[p] = x
                c += 1
        out[x] = c
    return out


@numba.njit(cache=True)
def assoc_middle_failures(T, y, out, cap):
    """Record ``(x, z)`` with ``(x y) z != x (y z)``; returns how many were stored."""
    n = T.shape[0]
    c = 0
    for x in range(n):
        xy = T[x, y]
        for z in range(n):
            if T[xy, z] != T[x, T[y, z]]:
                if c < cap:
                    out[c, 0] = x
                    out[c, 1] = z
                c += 1
                if c >= cap:
                    return c
    return c


@numba.njit(cache=True)
def distributivity_failures(Tk, Tl, x, ys, out, cap):
    """Record ``(y, z)``, ``y`` from ``ys``, with ``x *k (y *l z) != (x *k y) *l (x *k z)``."""
    n = Tk.shape[0]
    c = 0
    for i in range(ys.shape[0]):
        y = ys[i]
        xy = Tk[x, y]
        for z in range(n):
            if Tk[x, Tl[y, z]] != Tl[xy, Tk[x, z]]:
                if c < cap:
                    out[c, 0] = y
                    out[c, 1] = z
                c += 1
                if c >= cap:
                    return c
    return c
