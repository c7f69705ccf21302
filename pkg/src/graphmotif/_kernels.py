"""Deletion-vector table kernels for the tree DP.

A table is a flat ``uint8`` array over vectors ``lam`` with
``0 <= lam[d] <= limits[d]``, linearized mixed-radix with ``strides[0] == 1``.
When two vectors add without exceeding ``limits`` in any coordinate, their
linear indices add too, which is what every kernel below relies on.

Two interchangeable backends exist.  ``numba`` compiles the loops; ``numpy``
vectorizes per table and loops over vertices in Python.  Pick one with the
``GRAPHMOTIF_BACKEND`` environment variable (default ``numba``, silently
downgraded to ``numpy`` when numba is not importable).
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def resolve_backend(name: str | None = None) -> str:
    name = (name or os.environ.get("GRAPHMOTIF_BACKEND") or "numba").lower()
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


class TableLayout:
    """Index arithmetic for tables with per-coordinate upper bounds ``limits``."""

    def __init__(self, limits):
        self.limits = np.asarray(limits, dtype=np.int64).reshape(-1)
        radices = self.limits + 1
        self.j = len(self.limits)
        self.size = int(np.prod(radices)) if self.j else 1
        self.strides = np.ones(self.j, dtype=np.int64)
        for d in range(1, self.j):
            self.strides[d] = self.strides[d - 1] * radices[d - 1]
        if self.j:
            grid = np.unravel_index(np.arange(self.size), tuple(radices), order="F")
            self.coords = np.stack(grid, axis=1).astype(np.int64)
        else:
            self.coords = np.zeros((1, 0), dtype=np.int64)

    def linear(self, vec) -> int:
        """Linear index of ``vec``, or -1 if it leaves the box."""
        vec = np.asarray(vec, dtype=np.int64)
        if (vec < 0).any() or (vec > self.limits).any():
            return -1
        return int(vec @ self.strides)

    def vector(self, lin: int) -> tuple:
        return tuple(int(x) for x in self.coords[lin])

    def unit(self) -> np.ndarray:
        t = np.zeros(self.size, dtype=np.uint8)
        t[0] = 1
        return t


# ---------------------------------------------------------------------------
# numpy backend

def combine_np(prev, child, can_drop, drop_lin, drop_vec, coords, limits):
    """One child step: returns ``(table, split_work)``."""
    out = np.zeros_like(prev)
    pa = np.flatnonzero(prev)
    if not len(pa):
        return out, 0
    room = limits[None, :] - coords[pa]
    if can_drop:
        ok = (room >= drop_vec[None, :]).all(axis=1)
        out[pa[ok] + drop_lin] = 1
    cb = np.flatnonzero(child)
    work = 0
    if len(cb):
        fits = (coords[cb][None, :, :] <= room[:, None, :]).all(axis=2)
        ai, bi = np.nonzero(fits)
        out[pa[ai] + cb[bi]] = 1
        work = len(ai)
    return out, work


def dp_pass_np(post, child_ptr, child_idx, can_drop, drop_lin, drop_vec, coords, limits, D, P):
    unit = np.zeros(D.shape[1], dtype=np.uint8)
    unit[0] = 1
    max_work = 0
    total = 0
    for v in post:
        start, end = child_ptr[v], child_ptr[v + 1]
        if start == end:
            D[v, 0] = 1
            continue
        prev = unit
        for ci in range(start, end):
            u = child_idx[ci]
            P[u], w = combine_np(prev, D[u], can_drop[u], drop_lin[u], drop_vec[u], coords, limits)
            prev = P[u]
            total += w
            max_work = max(max_work, w)
        D[v] = prev
    return max_work, total


def reconstruct_np(root, lam, child_ptr, child_idx, can_drop, drop_lin, drop_vec, coords, D, P, selected):
    unit = np.zeros(D.shape[1], dtype=np.uint8)
    unit[0] = 1
    stack = [(root, lam)]
    while stack:
        v, lam = stack.pop()
        selected[v] = 1
        start, end = child_ptr[v], child_ptr[v + 1]
        for ci in range(end - 1, start - 1, -1):
            u = child_idx[ci]
            prev = unit if ci == start else P[child_idx[ci - 1]]
            if can_drop[u] and (coords[lam] >= drop_vec[u]).all() and prev[lam - drop_lin[u]]:
                lam -= drop_lin[u]
                continue
            cand = np.flatnonzero(D[u])
            cand = cand[(coords[cand] <= coords[lam][None, :]).all(axis=1)]
            cand = cand[prev[lam - cand] != 0]
            if not len(cand):
                return False
            b = int(cand[0])
            stack.append((u, b))
            lam -= b
        if lam != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# numba backend

if HAVE_NUMBA:

    @njit(cache=True)
    def _combine_nb(prev, child, can_drop, drop_lin, drop_vec, coords, limits, out, nz):
        size = prev.shape[0]
        j = limits.shape[0]
        cnt = 0
        for b in range(size):
            if child[b]:
                nz[cnt] = b
                cnt += 1
        work = 0
        for a in range(size):
            if not prev[a]:
                continue
            if can_drop:
                ok = True
                for d in range(j):
                    if coords[a, d] + drop_vec[d] > limits[d]:
                        ok = False
                        break
                if ok:
                    out[a + drop_lin] = 1
            for t in range(cnt):
                b = nz[t]
                ok = True
                for d in range(j):
                    if coords[a, d] + coords[b, d] > limits[d]:
                        ok = False
                        break
                if ok:
                    work += 1
                    out[a + b] = 1
        return work

    @njit(cache=True)
    def combine_nb(prev, child, can_drop, drop_lin, drop_vec, coords, limits):
        out = np.zeros_like(prev)
        nz = np.empty(prev.shape[0], dtype=np.int64)
        w = _combine_nb(prev, child, can_drop, drop_lin, drop_vec, coords, limits, out, nz)
        return out, w

    @njit(cache=True)
    def dp_pass_nb(post, child_ptr, child_idx, can_drop, drop_lin, drop_vec, coords, limits, D, P):
        size = D.shape[1]
        unit = np.zeros(size, dtype=np.uint8)
        unit[0] = 1
        nz = np.empty(size, dtype=np.int64)
        max_work = 0
        total = 0
        for t in range(post.shape[0]):
            v = post[t]
            start = child_ptr[v]
            end = child_ptr[v + 1]
            if start == end:
                D[v, 0] = 1
                continue
            for ci in range(start, end):
                u = child_idx[ci]
                if ci == start:
                    prev = unit
                else:
                    prev = P[child_idx[ci - 1]]
                w = _combine_nb(prev, D[u], can_drop[u], drop_lin[u], drop_vec[u], coords, limits, P[u], nz)
                total += w
                if w > max_work:
                    max_work = w
            D[v, :] = P[child_idx[end - 1]]
        return max_work, total

    @njit(cache=True)
    def reconstruct_nb(root, lam, child_ptr, child_idx, can_drop, drop_lin, drop_vec, coords, D, P, selected):
        n = D.shape[0]
        size = D.shape[1]
        j = coords.shape[1]
        unit = np.zeros(size, dtype=np.uint8)
        unit[0] = 1
        stack_v = np.empty(n, dtype=np.int64)
        stack_l = np.empty(n, dtype=np.int64)
        top = 0
        stack_v[0] = root
        stack_l[0] = lam
        top = 1
        while top > 0:
            top -= 1
            v = stack_v[top]
            lam = stack_l[top]
            selected[v] = 1
            start = child_ptr[v]
            end = child_ptr[v + 1]
            for ci in range(end - 1, start - 1, -1):
                u = child_idx[ci]
                if ci == start:
                    prev = unit
                else:
                    prev = P[child_idx[ci - 1]]
                if can_drop[u]:
                    ok = True
                    for d in range(j):
                        if coords[lam, d] < drop_vec[u, d]:
                            ok = False
                            break
                    if ok and prev[lam - drop_lin[u]]:
                        lam -= drop_lin[u]
                        continue
                found = -1
                for b in range(size):
                    if not D[u, b]:
                        continue
                    ok = True
                    for d in range(j):
                        if coords[b, d] > coords[lam, d]:
                            ok = False
                            break
                    if ok and prev[lam - b]:
                        found = b
                        break
                if found < 0:
                    return False
                stack_v[top] = u
                stack_l[top] = found
                top += 1
                lam -= found
            if lam != 0:
                return False
        return True


def combine(prev, child, can_drop, drop_lin, drop_vec, coords, limits, backend=None):
    if resolve_backend(backend) == "numba":
        return combine_nb(prev, child, bool(can_drop), int(drop_lin), drop_vec, coords, limits)
    return combine_np(prev, child, can_drop, drop_lin, drop_vec, coords, limits)


def dp_pass(*args, backend=None):
    if resolve_backend(backend) == "numba":
        return dp_pass_nb(*args)
    return dp_pass_np(*args)


def reconstruct(*args, backend=None):
    if resolve_backend(backend) == "numba":
        return reconstruct_nb(*args)
    return reconstruct_np(*args)
