"""Hot loops of the exact checkers, over integer-scaled operator stacks.

Every checker reduces to scanning products of small integer matrices (the
operators with their common denominator cleared). Each kernel has a numba
``@njit`` implementation and a pure-numpy one; both return the
lexicographically first failing index tuple so verdicts and witnesses never
depend on the backend.

Backend selection: environment variable ``JTSANKOV_BACKEND`` = ``numba`` |
``numpy``, read at call time. The default is ``numba`` when it imports. Object
arrays (Python ints too large for int64) always take the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

BACKEND_ENV = "JTSANKOV_BACKEND"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def active_backend() -> str:
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice == "numpy" or not HAVE_NUMBA:
        return "numpy"
    if choice in ("", "numba"):
        return "numba"
    raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {choice!r}")


def _use_numba(*arrays) -> bool:
    return active_backend() == "numba" and all(a.dtype == np.int64 for a in arrays)


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------


def _first_noncommuting_np(stack):
    n = stack.shape[0]
    for p in range(n):
        diff = np.matmul(stack[p], stack[p:]) - np.matmul(stack[p:], stack[p])
        nz = np.flatnonzero(diff)
        if nz.size:
            q, i, j = np.unravel_index(nz[0], diff.shape)
            return p, p + int(q), int(i), int(j), int(diff[q, i, j])
    return None


def _first_nonzero_product_np(left, right):
    for p in range(left.shape[0]):
        prod = np.matmul(left[p], right)
        nz = np.flatnonzero(prod)
        if nz.size:
            q, i, j = np.unravel_index(nz[0], prod.shape)
            return p, int(q), int(i), int(j), int(prod[q, i, j])
    return None


def _first_nonzero_symmetrized_np(stack, splits):
    for k in range(splits.shape[0]):
        a, b = splits[k, :, 0], splits[k, :, 1]
        lhs = np.matmul(stack[a], stack[b]) + np.matmul(stack[b], stack[a])
        total = lhs.sum(axis=0)
        nz = np.flatnonzero(total)
        if nz.size:
            i, j = np.unravel_index(nz[0], total.shape)
            return k, int(i), int(j), int(total[i, j])
    return None


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=False)
    def _first_noncommuting_nb(stack):
        n, m, _ = stack.shape
        for p in range(n):
            for q in range(p, n):
                for i in range(m):
                    for j in range(m):
                        acc = 0
                        for k in range(m):
                            acc += stack[p, i, k] * stack[q, k, j] - stack[q, i, k] * stack[p, k, j]
                        if acc != 0:
                            return p, q, i, j, acc
        return -1, -1, -1, -1, 0

    @numba.njit(cache=False)
    def _first_nonzero_product_nb(left, right):
        n1, m, _ = left.shape
        n2 = right.shape[0]
        for p in range(n1):
            for q in range(n2):
                for i in range(m):
                    for j in range(m):
                        acc = 0
                        for k in range(m):
                            acc += left[p, i, k] * right[q, k, j]
                        if acc != 0:
                            return p, q, i, j, acc
        return -1, -1, -1, -1, 0

    @numba.njit(cache=False)
    def _first_nonzero_symmetrized_nb(stack, splits):
        m = stack.shape[1]
        total = np.zeros((m, m), dtype=np.int64)
        for t in range(splits.shape[0]):
            total[:, :] = 0
            for s in range(splits.shape[1]):
                a = splits[t, s, 0]
                b = splits[t, s, 1]
                for i in range(m):
                    for j in range(m):
                        acc = 0
                        for k in range(m):
                            acc += stack[a, i, k] * stack[b, k, j] + stack[b, i, k] * stack[a, k, j]
                        total[i, j] += acc
            for i in range(m):
                for j in range(m):
                    if total[i, j] != 0:
                        return t, i, j, total[i, j]
        return -1, -1, -1, 0


# --------------------------------------------------------------------------
# public entry points
# --------------------------------------------------------------------------


def first_noncommuting(stack: np.ndarray):
    """First ``(p, q, i, j, value)`` with ``p <= q`` and ``[S_p, S_q][i, j] != 0``."""
    if stack.shape[0] == 0:
        return None
    if _use_numba(stack):
        p, q, i, j, v = _first_noncommuting_nb(stack)
        return None if p < 0 else (int(p), int(q), int(i), int(j), int(v))
    return _first_noncommuting_np(stack)


def first_nonzero_product(left: np.ndarray, right: np.ndarray):
    """First ``(p, q, i, j, value)`` with ``(L_p R_q)[i, j] != 0``."""
    if left.shape[0] == 0 or right.shape[0] == 0:
        return None
    if _use_numba(left, right):
        p, q, i, j, v = _first_nonzero_product_nb(left, right)
        return None if p < 0 else (int(p), int(q), int(i), int(j), int(v))
    return _first_nonzero_product_np(left, right)


def first_nonzero_symmetrized(stack: np.ndarray, splits: np.ndarray):
    """First ``(t, i, j, value)`` where ``sum_s {S_a S_b + S_b S_a}`` is nonzero.

    ``splits[t, s] = (a, b)`` lists the operator pairs summed for target ``t``.
    """
    if splits.shape[0] == 0 or stack.shape[0] == 0:
        return None
    if _use_numba(stack):
        t, i, j, v = _first_nonzero_symmetrized_nb(stack, splits.astype(np.int64))
        return None if t < 0 else (int(t), int(i), int(j), int(v))
    return _first_nonzero_symmetrized_np(stack, splits)
