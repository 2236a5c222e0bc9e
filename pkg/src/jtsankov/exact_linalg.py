"""Exact rational linear algebra over pseudo-Euclidean inner product spaces.

Scalars are :class:`fractions.Fraction`, which keeps every value reduced with a
positive denominator. Vectors and matrices are numpy arrays of ``dtype=object``
holding Fractions, so ``@``, ``+`` and slicing behave as usual while staying
exact.

Signatures follow the convention ``(p, q)`` = (#negative, #positive), so
``p == 0`` means Riemannian and ``p == 1`` Lorentzian. Many references use the
opposite order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateFormError, DependentVectorsError, FormatError, SymmetryError

Scalar = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?)(\d+)(?:/(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` with an optional leading sign.

    Both ASCII ``-`` and the Unicode minus sign are accepted. The denominator
    must be a positive integer as written.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(f"rational literal must be a string, got {text!r}")
    match = _RATIONAL_RE.match(text.replace("−", "-"))
    if match is None:
        raise FormatError(f"malformed rational literal {text!r}")
    sign, num, den = match.groups()
    den_value = int(den) if den is not None else 1
    if den_value == 0:
        raise FormatError(f"zero denominator in {text!r}")
    value = Fraction(int(num), den_value)
    return -value if sign == "-" else value


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_fractions(data) -> np.ndarray:
    """Convert nested sequences / arrays of numbers or literals to a Fraction array."""
    arr = np.array(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for idx, item in enumerate(flat_in):
        if isinstance(item, Fraction):
            flat_out[idx] = item
        elif isinstance(item, str):
            flat_out[idx] = parse_rational(item)
        elif isinstance(item, (int, np.integer)):
            flat_out[idx] = Fraction(int(item))
        else:
            # floats are accepted only when they are exactly representable
            frac = Fraction(item)
            flat_out[idx] = frac
    return out


def zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(dim: int) -> np.ndarray:
    out = zeros(dim, dim)
    for i in range(dim):
        out[i, i] = Fraction(1)
    return out


def basis_vector(dim: int, index: int) -> np.ndarray:
    out = zeros(dim)
    out[index] = Fraction(1)
    return out


def is_zero(arr: np.ndarray) -> bool:
    return not any(x != 0 for x in np.asarray(arr, dtype=object).reshape(-1))


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=object)
    arr.flags.writeable = False
    return arr


# --------------------------------------------------------------------------
# integer scaling (feeds the compiled kernels)
# --------------------------------------------------------------------------

_INT64_SAFE = 2**62


def common_denominator(arr: np.ndarray) -> int:
    den = 1
    for x in np.asarray(arr, dtype=object).reshape(-1):
        d = Fraction(x).denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    return den


def scaled_integers(arr: np.ndarray, den: int | None = None) -> tuple[np.ndarray, int]:
    """Return ``(ints, den)`` with ``arr == ints / den`` exactly.

    ``ints`` is an object array of Python ints; see :func:`product_safe_array`.
    """
    if den is None:
        den = common_denominator(arr)
    src = np.asarray(arr, dtype=object)
    out = np.empty(src.shape, dtype=object)
    flat_out = out.reshape(-1)
    for idx, x in enumerate(src.reshape(-1)):
        x = Fraction(x)
        flat_out[idx] = x.numerator * (den // x.denominator)
    return out, den


def max_abs(arr: np.ndarray) -> int:
    flat = np.asarray(arr).reshape(-1)
    if flat.size == 0:
        return 0
    return max(abs(int(x)) for x in flat)


def product_safe_array(ints: np.ndarray, terms: int) -> np.ndarray:
    """Cast a Python-int array to int64 if sums of ``terms`` pairwise products fit.

    Otherwise the array stays ``object`` (arbitrary precision), which the
    kernels handle on their numpy path, so results are exact either way.
    """
    bound = max_abs(ints)
    if bound * bound * max(terms, 1) < _INT64_SAFE:
        return np.asarray(ints, dtype=object).astype(np.int64)
    return np.asarray(ints, dtype=object)


# --------------------------------------------------------------------------
# elimination
# --------------------------------------------------------------------------


def _rows(matrix) -> list[list[Fraction]]:
    arr = as_fractions(matrix)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return [list(row) for row in arr]


def rref(matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form by exact Gauss-Jordan elimination.

    Only the first ``ncols`` columns are used for pivoting (default: all), which
    lets callers reduce an augmented matrix ``[M | b]``.
    Returns the reduced rows and the list of pivot columns.
    """
    if isinstance(matrix, list):
        rows = [[Fraction(x) for x in r] for r in matrix]
    else:
        rows = _rows(matrix)
    if not rows:
        return [], []
    width = len(rows[0])
    limit = width if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, width) if prow[j] != 0]
        for i in range(len(rows)):
            if i == r:
                continue
            factor = rows[i][c]
            if factor == 0:
                continue
            row = rows[i]
            for j in nz:
                row[j] -= factor * prow[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    arr = as_fractions(matrix)
    if arr.size == 0:
        return 0
    return len(rref(arr)[1])


def kernel_of(matrix, ncols: int | None = None) -> list[np.ndarray]:
    """Basis of the right null space ``{v : M v = 0}``.

    ``ncols`` is required when ``matrix`` has no rows.
    """
    arr = as_fractions(matrix)
    if arr.size == 0:
        n = ncols if ncols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
        return [basis_vector(n, i) for i in range(n)]
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    n = arr.shape[1]
    rows, pivots = rref(arr)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = zeros(n)
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][free]
        basis.append(v)
    return basis


@dataclass(frozen=True, eq=False)
class LinearSolution:
    """Outcome of :func:`solve_linear`.

    ``solution`` is a particular solution (free variables set to zero), a
    vector for a single right-hand side or an ``n x r`` matrix for several.
    When inconsistent, ``certificate`` is a row vector ``y`` with ``y M = 0``
    and ``y b != 0`` for the first offending right-hand side ``column``.
    """

    consistent: bool
    rank: int
    solution: np.ndarray | None
    certificate: np.ndarray | None = None
    column: int | None = None


def solve_linear(matrix, rhs) -> LinearSolution:
    """Solve ``M x = b`` exactly for one or several right-hand sides."""
    M = as_fractions(matrix)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    B = as_fractions(rhs)
    single = B.ndim == 1
    if single:
        B = B.reshape(-1, 1)
    nrows, ncols = M.shape
    if B.shape[0] != nrows:
        raise ValueError(f"rhs has {B.shape[0]} rows, matrix has {nrows}")
    nrhs = B.shape[1]
    aug = [list(M[i]) + list(B[i]) for i in range(nrows)]
    rows, pivots = rref(aug, ncols=ncols)
    rk = len(pivots)
    for r in range(rk, nrows):
        for k in range(nrhs):
            if rows[r][ncols + k] != 0:
                return _inconsistent(M, B, k, rk)
    X = zeros(ncols, nrhs)
    for r, pc in enumerate(pivots):
        for k in range(nrhs):
            X[pc, k] = rows[r][ncols + k]
    return LinearSolution(True, rk, X[:, 0] if single else X)


def _inconsistent(M: np.ndarray, B: np.ndarray, column: int, rk: int) -> LinearSolution:
    nrows, ncols = M.shape
    aug = [list(M[i]) + [B[i, column]] + list(identity(nrows)[i]) for i in range(nrows)]
    rows, _ = rref(aug, ncols=ncols)
    for row in rows:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            cert = as_fractions(row[ncols + 1 :])
            return LinearSolution(False, rk, None, cert, column)
    raise AssertionError("inconsistent system without certificate row")


def inverse(matrix) -> np.ndarray:
    M = as_fractions(matrix)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    result = solve_linear(M, identity(n))
    if not result.consistent or result.rank != n:
        raise DegenerateFormError("matrix is singular")
    return result.solution


class Echelon:
    """Incrementally maintained echelon basis for exact independence tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[list[Fraction]] = []
        self._pivots: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vector) -> list[Fraction]:
        v = [Fraction(x) for x in vector]
        for row, pc in zip(self._rows, self._pivots):
            f = v[pc]
            if f != 0:
                for j in range(pc, self.dim):
                    if row[j] != 0:
                        v[j] -= f * row[j]
        return v

    def add(self, vector) -> bool:
        """Insert ``vector``; return ``True`` when it raised the rank."""
        v = self.reduce(vector)
        pc = next((j for j, x in enumerate(v) if x != 0), None)
        if pc is None:
            return False
        lead = v[pc]
        v = [x / lead for x in v]
        for row in self._rows:
            f = row[pc]
            if f != 0:
                for j in range(pc, self.dim):
                    if v[j] != 0:
                        row[j] -= f * v[j]
        self._rows.append(v)
        self._pivots.append(pc)
        return True

    def contains(self, vector) -> bool:
        return all(x == 0 for x in self.reduce(vector))

    def basis(self) -> list[np.ndarray]:
        """Canonical reduced basis, ordered by pivot column."""
        order = sorted(range(len(self._rows)), key=lambda i: self._pivots[i])
        return [as_fractions(self._rows[i]) for i in order]


def extend_to_basis(independent: Sequence, candidates: Iterable) -> list[np.ndarray]:
    """Greedily pick candidates that extend ``independent`` (in the given order)."""
    independent = [as_fractions(v) for v in independent]
    dim = len(independent[0]) if independent else None
    candidates = [as_fractions(v) for v in candidates]
    if dim is None:
        dim = len(candidates[0]) if candidates else 0
    ech = Echelon(dim)
    for v in independent:
        if not ech.add(v):
            raise DependentVectorsError("input vectors are linearly dependent")
    return [c for c in candidates if ech.add(c)]


def complete_to_basis(independent: Sequence, dim: int) -> list[np.ndarray]:
    """Complement of ``independent`` from the standard basis, ascending index."""
    ech = Echelon(dim)
    for v in independent:
        if len(v) != dim:
            raise ValueError("vector length does not match dim")
        if not ech.add(v):
            raise DependentVectorsError("input vectors are linearly dependent")
    return [e for e in (basis_vector(dim, i) for i in range(dim)) if ech.add(e)]


# --------------------------------------------------------------------------
# inertia
# --------------------------------------------------------------------------


class Signature(NamedTuple):
    p: int  # negative inertia
    q: int  # positive inertia
    z: int  # nullity


def is_symmetric(matrix) -> bool:
    M = np.asarray(matrix, dtype=object)
    return M.ndim == 2 and M.shape[0] == M.shape[1] and bool(np.all(M == M.T))


def signature_of(gram) -> Signature:
    """Inertia of a symmetric matrix by exact congruence diagonalization.

    Uses a nonzero diagonal pivot when one exists; otherwise splits off a
    hyperbolic 2x2 block (which contributes one negative and one positive
    direction) through its Schur complement.
    """
    M = as_fractions(gram)
    if not is_symmetric(M):
        raise SymmetryError("signature_of requires a symmetric matrix")
    n = M.shape[0]
    work = {(i, j): M[i, j] for i in range(n) for j in range(n)}
    active = list(range(n))
    neg = pos = 0
    while active:
        piv = next((i for i in active if work[i, i] != 0), None)
        if piv is not None:
            d = work[piv, piv]
            if d < 0:
                neg += 1
            else:
                pos += 1
            active.remove(piv)
            col = {j: work[j, piv] for j in active}
            for j in active:
                if col[j] == 0:
                    continue
                for k in active:
                    if col[k] != 0:
                        work[j, k] -= col[j] * col[k] / d
            continue
        pair = next(
            ((i, j) for ii, i in enumerate(active) for j in active[ii + 1 :] if work[i, j] != 0),
            None,
        )
        if pair is None:
            break
        i, j = pair
        b = work[i, j]
        neg += 1
        pos += 1
        active.remove(i)
        active.remove(j)
        # Schur complement of [[0, b], [b, 0]]: subtract (u_k v_l + v_k u_l) / b
        u = {k: work[k, i] for k in active}
        v = {k: work[k, j] for k in active}
        for k in active:
            for l in active:
                delta = u[k] * v[l] + v[k] * u[l]
                if delta != 0:
                    work[k, l] -= delta / b
    return Signature(neg, pos, n - neg - pos)


# --------------------------------------------------------------------------
# inner product spaces
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InnerProductSpace:
    """A real vector space with a non-degenerate symmetric bilinear form."""

    gram: np.ndarray

    def __post_init__(self):
        G = as_fractions(self.gram)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] == 0:
            raise ValueError("Gram matrix must be a non-empty square matrix")
        if not is_symmetric(G):
            raise SymmetryError("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", frozen(G))
        if self.signature.z != 0:
            raise DegenerateFormError(f"Gram matrix is degenerate (nullity {self.signature.z})")

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @cached_property
    def signature(self) -> Signature:
        return signature_of(self.gram)

    @cached_property
    def inverse_gram(self) -> np.ndarray:
        return frozen(inverse(self.gram))

    def inner(self, u, v) -> Fraction:
        return as_fractions(u) @ self.gram @ as_fractions(v)

    def lower(self, v) -> np.ndarray:
        return self.gram @ as_fractions(v)

    def __eq__(self, other) -> bool:
        return isinstance(other, InnerProductSpace) and np.array_equal(self.gram, other.gram)

    def __hash__(self) -> int:
        return hash(tuple(self.gram.reshape(-1)))

    @classmethod
    def diagonal(cls, p: int, q: int) -> "InnerProductSpace":
        """Standard form with ``p`` entries ``-1`` followed by ``q`` entries ``+1``."""
        G = identity(p + q)
        for i in range(p):
            G[i, i] = Fraction(-1)
        return cls(G)

    @classmethod
    def hyperbolic(cls, k: int) -> "InnerProductSpace":
        """Basis ``(e_1..e_k, ebar_1..ebar_k)`` with only ``<e_i, ebar_i> = 1``."""
        G = zeros(2 * k, 2 * k)
        for i in range(k):
            G[i, k + i] = G[k + i, i] = Fraction(1)
        return cls(G)


def direct_sum_gram(*grams) -> np.ndarray:
    sizes = [np.asarray(g).shape[0] for g in grams]
    out = zeros(sum(sizes), sum(sizes))
    offset = 0
    for g, s in zip(grams, sizes):
        out[offset : offset + s, offset : offset + s] = as_fractions(g)
        offset += s
    return out
