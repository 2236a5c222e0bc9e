"""Algebraic curvature tensors and the operators built from them.

Conventions (fixed once, used everywhere):

* ``<A(x,y) z, w> = A(x,y,z,w)`` defines the curvature operator.
* ``J(x) y = A(y,x) x``, so ``<J(x) y, w> = A(y,x,x,w)``.
* The reference tensor ``A_id(x,y,z,w) = <x,w><y,z> - <x,z><y,w>`` has
  constant sectional curvature ``+1``: on a Riemannian space ``J(x)``
  restricted to ``x^perp`` is ``<x,x>`` times the identity.

A matrix ``M`` acts on column vectors, ``(M v)_i = sum_j M[i, j] v_j``. With
``L[z, w] = <M z, w>`` this gives ``M = G^{-1} L^T``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import CurvatureSymmetryError, OrbitConflictError
from .exact_linalg import (
    InnerProductSpace,
    as_fractions,
    frozen,
    parse_rational,
    scaled_integers,
    zeros,
)

# --------------------------------------------------------------------------
# index symmetries
# --------------------------------------------------------------------------


def z2_orbit(i: int, j: int, k: int, l: int) -> list[tuple[tuple[int, int, int, int], int]]:
    """The eight ``(index, sign)`` images under the first-pair, second-pair and pair swaps."""
    out = []
    for (a, b), s1 in (((i, j), 1), ((j, i), -1)):
        for (c, d), s2 in (((k, l), 1), ((l, k), -1)):
            out.append(((a, b, c, d), s1 * s2))
            out.append(((c, d, a, b), s1 * s2))
    return out


def canonical_representative(index: tuple[int, int, int, int]) -> tuple[tuple[int, int, int, int], int]:
    """Lexicographically least orbit member and the sign relating it to ``index``."""
    return min(z2_orbit(*index))


def _swap_first(A):
    return np.einsum("jikl->ijkl", A)


def _swap_second(A):
    return np.einsum("ijlk->ijkl", A)


def _swap_pairs(A):
    return np.einsum("klij->ijkl", A)


def cyclic_sum(A: np.ndarray) -> np.ndarray:
    """``A(x,y,z,.) + A(y,z,x,.) + A(z,x,y,.)`` as a component array."""
    return A + np.einsum("jkil->ijkl", A) + np.einsum("kijl->ijkl", A)


def bianchi_project(A: np.ndarray) -> np.ndarray:
    """Project onto the kernel of the cyclic sum: ``A - cyclic_sum(A) / 3``.

    For arrays skew in the first pair whose cyclic sum is totally skew (pair
    symmetric tensors, or generalized operators) this is idempotent and fixes
    every array that already satisfies the first Bianchi identity.
    """
    A = as_fractions(A)
    return A - cyclic_sum(A) / 3


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryReport:
    valid: bool
    identity: str | None = None
    indices: tuple[int, int, int, int] | None = None
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return "all curvature symmetries hold"
        return f"{self.identity} violated at {self.indices} (residual {self.value})"


_IDENTITIES = (
    ("skew-first-pair", lambda A: A + _swap_first(A)),
    ("pair-symmetry", lambda A: A - _swap_pairs(A)),
    ("first-bianchi", cyclic_sum),
    ("skew-second-pair", lambda A: A + _swap_second(A)),
)


def _first_nonzero(residual: np.ndarray):
    nz = np.flatnonzero(residual)
    if nz.size == 0:
        return None
    idx = tuple(int(v) for v in np.unravel_index(nz[0], residual.shape))
    return idx, residual[idx]


def validate_symmetries(A) -> SymmetryReport:
    """Check all four identity families; report the first violation found."""
    comps = A.components if isinstance(A, CurvatureTensor) else as_fractions(A)
    for name, residual_of in _IDENTITIES:
        hit = _first_nonzero(residual_of(comps))
        if hit is not None:
            return SymmetryReport(False, name, hit[0], Fraction(hit[1]))
    return SymmetryReport(True)


# --------------------------------------------------------------------------
# tensors
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """Algebraic curvature tensor on an inner product space (dense ``m^4`` storage)."""

    space: InnerProductSpace
    components: np.ndarray

    def __post_init__(self):
        comps = as_fractions(self.components)
        m = self.space.dim
        if comps.shape != (m, m, m, m):
            raise ValueError(f"components must have shape {(m,) * 4}, got {comps.shape}")
        report = validate_symmetries(comps)
        if not report:
            raise CurvatureSymmetryError(report.describe(), report)
        object.__setattr__(self, "components", frozen(comps))

    @property
    def dim(self) -> int:
        return self.space.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CurvatureTensor)
            and self.space == other.space
            and np.array_equal(self.components, other.components)
        )

    __hash__ = None

    def __call__(self, x, y, z, w) -> Fraction:
        return np.einsum("ijkl,i,j,k,l->", self.components, *(as_fractions(v) for v in (x, y, z, w)))

    def scaled(self, factor) -> "CurvatureTensor":
        return CurvatureTensor(self.space, self.components * Fraction(factor))

    def __add__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        if self.space != other.space:
            raise ValueError("tensors live on different spaces")
        return CurvatureTensor(self.space, self.components + other.components)

    def is_zero(self) -> bool:
        return not np.flatnonzero(self.components).size

    def pullback(self, basis_change) -> "CurvatureTensor":
        """Express the tensor in the basis given by the columns of ``basis_change``."""
        P = as_fractions(basis_change)
        gram = P.T @ self.space.gram @ P
        comps = self.components
        for _ in range(4):
            # contract the leading axis and append the new index at the end
            comps = np.tensordot(comps, P, axes=([0], [0]))
        return CurvatureTensor(InnerProductSpace(gram), comps)

    def nonzero_orbits(self) -> list[tuple[tuple[int, int, int, int], Fraction]]:
        """One ``(representative, value)`` per nonzero symmetry orbit, sorted."""
        seen = {}
        for idx in zip(*np.nonzero(self.components)):
            idx = tuple(int(v) for v in idx)
            rep, sign = canonical_representative(idx)
            if rep not in seen:
                seen[rep] = self.components[rep]
        return sorted(seen.items())

    @cached_property
    def _integer_form(self) -> tuple[np.ndarray, int]:
        return scaled_integers(self.components)

    @cached_property
    def jacobi_table(self) -> "PolarizedJacobiTable":
        A_int, dA = self._integer_form
        Gi_int, dG = scaled_integers(self.space.inverse_gram)
        lowered = A_int + np.einsum("zbaw->zabw", A_int)  # twice the polarized lowered form
        raised = np.tensordot(Gi_int, lowered, axes=([1], [3]))  # (i, z, a, b)
        numer = np.ascontiguousarray(np.einsum("izab->abiz", raised))
        return PolarizedJacobiTable(self.space, frozen(numer), 2 * dA * dG)

    @cached_property
    def skew_operators(self) -> tuple[np.ndarray, int]:
        """Numerators of ``A(e_a, e_b)`` for all ``a, b`` as ``(m, m, m, m)``, and their denominator."""
        A_int, dA = self._integer_form
        Gi_int, dG = scaled_integers(self.space.inverse_gram)
        raised = np.tensordot(Gi_int, A_int, axes=([1], [3]))  # (i, a, b, z)
        numer = np.ascontiguousarray(np.einsum("iabz->abiz", raised))
        return frozen(numer), dA * dG

    def as_generalized_operator(self) -> "GeneralizedCurvatureOperator":
        raised = np.tensordot(self.components, self.space.inverse_gram, axes=([3], [1]))
        return GeneralizedCurvatureOperator(self.space.dim, raised)


def reference_components(space: InnerProductSpace) -> np.ndarray:
    """Components of ``A_id(x,y,z,w) = <x,w><y,z> - <x,z><y,w>``."""
    G = space.gram
    return np.einsum("il,jk->ijkl", G, G) - np.einsum("ik,jl->ijkl", G, G)


def tensor_from_components(
    space: InnerProductSpace,
    entries: Iterable[tuple],
    mode: str = "generate",
) -> CurvatureTensor:
    """Assemble a tensor from ``(i, j, k, l, value)`` records.

    ``generate`` propagates each record over its symmetry orbit and rejects
    conflicting assignments; ``verbatim`` installs records as given (absent
    entries are zero). Either way the result must pass validation.
    """
    m = space.dim
    comps = zeros(m, m, m, m)
    if mode == "verbatim":
        for i, j, k, l, value in entries:
            comps[i, j, k, l] = parse_rational(value)
        return CurvatureTensor(space, comps)
    if mode != "generate":
        raise ValueError(f"unknown mode {mode!r}")
    assigned: dict[tuple[int, int, int, int], Fraction] = {}
    for i, j, k, l, value in entries:
        for idx in (i, j, k, l):
            if not 0 <= idx < m:
                raise IndexError(f"index {idx} out of range for dimension {m}")
        value = parse_rational(value)
        for idx, sign in z2_orbit(i, j, k, l):
            prev = assigned.get(idx)
            if prev is not None and prev != sign * value:
                raise OrbitConflictError(
                    f"entry {(i, j, k, l)}={value} forces {idx}={sign * value}, already {prev}"
                )
            assigned[idx] = sign * value
    for idx, value in assigned.items():
        comps[idx] = value
    return CurvatureTensor(space, comps)


# --------------------------------------------------------------------------
# operators
# --------------------------------------------------------------------------


def _raise_last(space: InnerProductSpace, lowered: np.ndarray) -> np.ndarray:
    """Endomorphism ``M`` with ``<M z, w> = lowered[z, w]``."""
    return space.inverse_gram @ lowered.T


def curvature_operator(A: CurvatureTensor, x, y) -> np.ndarray:
    """Matrix of ``A(x, y)``: ``<A(x,y) z, w> = A(x,y,z,w)``."""
    lowered = np.einsum("ijzw,i,j->zw", A.components, as_fractions(x), as_fractions(y))
    return _raise_last(A.space, lowered)


def jacobi(A: CurvatureTensor, x) -> np.ndarray:
    """Matrix of ``J(x): y -> A(y, x) x``."""
    x = as_fractions(x)
    lowered = np.einsum("yabw,a,b->yw", A.components, x, x)
    return _raise_last(A.space, lowered)


@dataclass(frozen=True, eq=False)
class PolarizedJacobiTable:
    """``J(e_a, e_b) = numerators[a, b] / denominator`` for every basis pair.

    ``J(x, y) z = (A(z, x) y + A(z, y) x) / 2``; the table is symmetric in
    ``(a, b)`` and its diagonal is the Jacobi operator of each basis vector.
    """

    space: InnerProductSpace
    numerators: np.ndarray
    denominator: int

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def table(self) -> np.ndarray:
        out = np.empty(self.numerators.shape, dtype=object)
        flat = out.reshape(-1)
        d = self.denominator
        for idx, n in enumerate(self.numerators.reshape(-1)):
            flat[idx] = Fraction(int(n), d)
        return frozen(out)

    def __getitem__(self, ab: tuple[int, int]) -> np.ndarray:
        a, b = ab
        return self.table[a, b]

    def operator(self, x, y) -> np.ndarray:
        """``J(x, y)`` for arbitrary vectors, by bilinear expansion of the table."""
        xi, dx = scaled_integers(as_fractions(x))
        yi, dy = scaled_integers(as_fractions(y))
        numer = np.einsum("a,b,abij->ij", xi, yi, self.numerators)
        scale = Fraction(1, dx * dy * self.denominator)
        return np.array([[Fraction(int(v)) * scale for v in row] for row in numer], dtype=object)

    def jacobi(self, x) -> np.ndarray:
        return self.operator(x, x)

    def pairs(self) -> list[tuple[int, int]]:
        m = self.dim
        return [(a, b) for a in range(m) for b in range(a, m)]

    def pair_stack(self) -> np.ndarray:
        """Numerators of ``J(e_a, e_b)`` for ``a <= b`` in lexicographic order, shape ``(n, m, m)``."""
        m = self.dim
        idx_a, idx_b = np.triu_indices(m)
        return np.ascontiguousarray(self.numerators[idx_a, idx_b])


def polarized_jacobi_table(A: CurvatureTensor) -> PolarizedJacobiTable:
    return A.jacobi_table


# --------------------------------------------------------------------------
# generalized curvature operators
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeneralizedCurvatureOperator:
    """``C(e_i, e_j) e_k = sum_l components[i, j, k, l] e_l``.

    Only the torsion-free symmetries are required: skew in ``(i, j)`` and the
    cyclic identity ``C(x,y)z + C(y,z)x + C(z,x)y = 0``. No metric is involved.
    """

    dim: int
    components: np.ndarray

    def __post_init__(self):
        comps = as_fractions(self.components)
        m = self.dim
        if comps.shape != (m, m, m, m):
            raise ValueError(f"components must have shape {(m,) * 4}")
        for name, residual in (("skew-first-pair", comps + _swap_first(comps)), ("first-bianchi", cyclic_sum(comps))):
            hit = _first_nonzero(residual)
            if hit is not None:
                report = SymmetryReport(False, name, hit[0], Fraction(hit[1]))
                raise CurvatureSymmetryError(report.describe(), report)
        object.__setattr__(self, "components", frozen(comps))

    def apply(self, x, y, z) -> np.ndarray:
        return np.einsum("ijkl,i,j,k->l", self.components, as_fractions(x), as_fractions(y), as_fractions(z))


def jacobi_of_generalized(C: GeneralizedCurvatureOperator, x) -> np.ndarray:
    """Matrix of ``J_C(x): y -> C(y, x) x``."""
    x = as_fractions(x)
    return np.einsum("yabl,a,b->ly", C.components, x, x)


def random_generalized_operator(dim: int, seed: int, entries: int = 12) -> GeneralizedCurvatureOperator:
    """A generalized operator that is generally not induced by any metric tensor."""
    rng = np.random.default_rng(seed)
    raw = zeros(dim, dim, dim, dim)
    for _ in range(entries):
        i, j, k, l = (int(v) for v in rng.integers(0, dim, size=4))
        if i == j:
            continue
        value = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3)))
        raw[i, j, k, l] += value
        raw[j, i, k, l] -= value
    return GeneralizedCurvatureOperator(dim, bianchi_project(raw))


def index_tuples(m: int, n: int = 4):
    return itertools.product(range(m), repeat=n)
