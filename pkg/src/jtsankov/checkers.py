"""Exact decision procedures for the commutativity and nilpotency conditions.

Why basis checks are complete: ``J(x) = sum_{a,b} x_a x_b J(e_a, e_b)`` and the
polarized operators ``J(e_a, e_b)`` (``a <= b``) are exactly the coefficients
of this quadratic map. ``J(x)J(y) - J(y)J(x)`` (or ``J(x)J(y)``) is therefore a
polynomial whose coefficients are, up to positive multiplicities, the
commutators (products) of table entries, and it vanishes identically iff they
all do. The same holds for the bilinear curvature operator ``A(x, y)``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import kernels
from .curvature import CurvatureTensor, curvature_operator, jacobi, reference_components
from .errors import InternalConsistencyError, SearchExhaustedError
from .exact_linalg import (
    as_fractions,
    basis_vector,
    kernel_of,
    product_safe_array,
    scaled_integers,
    zeros,
)

JACOBI_TSANKOV = "jacobi-tsankov"
TWO_STEP_JACOBI = "2step-jacobi-nilpotent"
JACOBI_SQUARE_ZERO = "jacobi-square-zero"
ORTHOGONAL_JT = "orthogonally-jacobi-tsankov"
SKEW_TSANKOV = "skew-tsankov"
TWO_STEP_SKEW = "2step-skew-nilpotent"
CONSTANT_CURVATURE = "constant-sectional-curvature"

ALL_PROPERTIES = (
    TWO_STEP_SKEW,
    SKEW_TSANKOV,
    TWO_STEP_JACOBI,
    JACOBI_TSANKOV,
    ORTHOGONAL_JT,
    JACOBI_SQUARE_ZERO,
    CONSTANT_CURVATURE,
)


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of one checker.

    A failing verdict always carries a ``witness`` whose recorded ``value`` is
    the exact nonzero quantity exhibiting the failure.
    """

    name: str
    holds: bool
    witness: dict[str, Any] | None = None
    certificate: Any = None
    seconds: float = field(default=0.0, compare=False)

    def __bool__(self) -> bool:
        return self.holds


def _timed(fn):
    def wrapper(A, *args, **kwargs):
        start = time.perf_counter()
        verdict = fn(A, *args, **kwargs)
        return PropertyVerdict(
            verdict.name, verdict.holds, verdict.witness, verdict.certificate, time.perf_counter() - start
        )

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _pair_index(m: int, a: int, b: int) -> int:
    if a > b:
        a, b = b, a
    return a * m - a * (a - 1) // 2 + (b - a)


def _jacobi_stack(A: CurvatureTensor, terms: int):
    table = A.jacobi_table
    return table.pairs(), product_safe_array(table.pair_stack(), terms), table.denominator


def _skew_stack(A: CurvatureTensor, terms: int):
    numer, den = A.skew_operators
    m = A.dim
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    if not pairs:
        return pairs, np.zeros((0, m, m), dtype=np.int64), den
    ia, ib = zip(*pairs)
    stack = np.ascontiguousarray(numer[list(ia), list(ib)])
    return pairs, product_safe_array(stack, terms), den


# --------------------------------------------------------------------------
# Jacobi operator conditions
# --------------------------------------------------------------------------


@_timed
def is_jacobi_tsankov(A: CurvatureTensor) -> PropertyVerdict:
    """``J(x)J(y) = J(y)J(x)`` for all ``x, y``."""
    pairs, stack, den = _jacobi_stack(A, 2 * A.dim)
    hit = kernels.first_noncommuting(stack)
    if hit is None:
        return PropertyVerdict(JACOBI_TSANKOV, True)
    p, q, i, j, v = hit
    witness = {"kind": "commutator", "pairs": (pairs[p], pairs[q]), "entry": (i, j), "value": Fraction(v, den * den)}
    return PropertyVerdict(JACOBI_TSANKOV, False, witness)


@_timed
def is_2step_jacobi_nilpotent(A: CurvatureTensor) -> PropertyVerdict:
    """``J(x)J(y) = 0`` for all ``x, y``."""
    pairs, stack, den = _jacobi_stack(A, A.dim)
    hit = kernels.first_nonzero_product(stack, stack)
    if hit is None:
        return PropertyVerdict(TWO_STEP_JACOBI, True)
    p, q, i, j, v = hit
    witness = {"kind": "product", "pairs": (pairs[p], pairs[q]), "entry": (i, j), "value": Fraction(v, den * den)}
    return PropertyVerdict(TWO_STEP_JACOBI, False, witness)


def square_splits(m: int) -> tuple[list[tuple[int, int, int, int]], np.ndarray]:
    """Sorted 4-multisets of indices and, for each, its three pair splittings as pair indices."""
    quads = list(itertools.combinations_with_replacement(range(m), 4))
    splits = np.empty((len(quads), 3, 2), dtype=np.int64)
    for t, (a, b, c, d) in enumerate(quads):
        for s, ((p, q), (r, u)) in enumerate((((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c)))):
            splits[t, s, 0] = _pair_index(m, p, q)
            splits[t, s, 1] = _pair_index(m, r, u)
    return quads, splits


@_timed
def jacobi_square_zero(A: CurvatureTensor) -> PropertyVerdict:
    """``J(x)^2 = 0`` as a polynomial identity in ``x``.

    Every coefficient of ``J(x)^2`` is a positive multiple of
    ``sum over the 3 splittings {pq|rs} of J_pq J_rs + J_rs J_pq``.
    """
    m = A.dim
    _, stack, den = _jacobi_stack(A, 6 * m)
    quads, splits = square_splits(m)
    hit = kernels.first_nonzero_symmetrized(stack, splits)
    if hit is None:
        return PropertyVerdict(JACOBI_SQUARE_ZERO, True)
    t, i, j, v = hit
    witness = {"kind": "symmetrized-square", "indices": quads[t], "entry": (i, j), "value": Fraction(v, den * den)}
    return PropertyVerdict(JACOBI_SQUARE_ZERO, False, witness)


# --------------------------------------------------------------------------
# skew-curvature conditions
# --------------------------------------------------------------------------


@_timed
def is_skew_tsankov(A: CurvatureTensor) -> PropertyVerdict:
    """``A(x1,x2) A(x3,x4) = A(x3,x4) A(x1,x2)`` for all inputs."""
    pairs, stack, den = _skew_stack(A, 2 * A.dim)
    hit = kernels.first_noncommuting(stack)
    if hit is None:
        return PropertyVerdict(SKEW_TSANKOV, True)
    p, q, i, j, v = hit
    witness = {"kind": "skew-commutator", "pairs": (pairs[p], pairs[q]), "entry": (i, j), "value": Fraction(v, den * den)}
    return PropertyVerdict(SKEW_TSANKOV, False, witness)


@_timed
def is_2step_skew_nilpotent(A: CurvatureTensor) -> PropertyVerdict:
    """``A(x1,x2) A(x3,x4) = 0`` for all inputs."""
    pairs, stack, den = _skew_stack(A, A.dim)
    hit = kernels.first_nonzero_product(stack, stack)
    if hit is None:
        return PropertyVerdict(TWO_STEP_SKEW, True)
    p, q, i, j, v = hit
    witness = {"kind": "skew-product", "pairs": (pairs[p], pairs[q]), "entry": (i, j), "value": Fraction(v, den * den)}
    return PropertyVerdict(TWO_STEP_SKEW, False, witness)


# --------------------------------------------------------------------------
# orthogonal Jacobi-Tsankov
# --------------------------------------------------------------------------


def _commutator_polynomial(A: CurvatureTensor):
    """Integer coefficients of ``F(x,y) = J(x)J(y) - J(y)J(x)`` (scaled by ``den**2``).

    Keys are ``((a, b), (c, d))`` with ``a <= b``, ``c <= d`` naming the monomial
    ``x_a x_b y_c y_d``; values are flattened ``m*m`` coefficient vectors.
    """
    table = A.jacobi_table
    m = A.dim
    pairs = table.pairs()
    stack = product_safe_array(table.pair_stack(), 2 * m)
    poly = {}
    for p, (a, b) in enumerate(pairs):
        left = np.matmul(stack[p], stack)
        right = np.matmul(stack, stack[p])
        mult_ab = 1 if a == b else 2
        for q, (c, d) in enumerate(pairs):
            diff = (left[q] - right[q]).reshape(-1)
            if np.any(diff != 0):
                mult = mult_ab * (1 if c == d else 2)
                poly[(a, b), (c, d)] = np.array([int(v) * mult for v in diff], dtype=object)
    return poly, table.denominator


def _divide_by_form(poly: dict, q_int: np.ndarray):
    """Divide by ``q(x, y) = sum q[a, c] x_a y_c``; return ``(quotient, remainder)``.

    Single-divisor polynomial division: the remainder vanishes iff the
    polynomial is a multiple of ``q``. The leading monomial is an entry
    ``x_a0 y_c0`` of ``q``; each reduction strictly lowers the combined
    multiplicity of ``x_a0`` and ``y_c0``.
    """
    m = q_int.shape[0]
    support = [(a, c) for a in range(m) for c in range(m) if q_int[a, c] != 0]
    a0, c0 = min(support, key=lambda ac: (abs(q_int[ac]) != 1, ac))
    lead = int(q_int[a0, c0])
    poly = {k: v.copy() for k, v in poly.items()}
    quotient: dict[tuple[int, int], np.ndarray] = {}

    def weight(key):
        (a, b), (c, d) = key
        return (a == a0) + (b == a0) + (c == c0) + (d == c0)

    def reducible(key):
        (a, b), (c, d) = key
        return a0 in (a, b) and c0 in (c, d)

    for w in (4, 3, 2):
        for key in sorted(k for k in list(poly) if weight(k) == w and reducible(k)):
            coef = poly.pop(key)
            if not any(x != 0 for x in coef):
                continue
            (a, b), (c, d) = key
            rest_x = b if a == a0 else a
            rest_y = d if c == c0 else c
            factor = coef * lead if abs(lead) == 1 else coef * Fraction(1, lead)
            quotient[rest_x, rest_y] = quotient.get((rest_x, rest_y), 0) + factor
            for a1, c1 in support:
                if (a1, c1) == (a0, c0):
                    continue
                mono = (tuple(sorted((rest_x, a1))), tuple(sorted((rest_y, c1))))
                poly[mono] = poly.get(mono, 0) - factor * int(q_int[a1, c1])
    remainder = {k: v for k, v in poly.items() if any(x != 0 for x in np.atleast_1d(v))}
    return quotient, remainder


def _candidate_directions(m: int, seed: int = 0):
    for a in range(m):
        yield basis_vector(m, a)
    for t in (1, -1, 2, -2, 3):
        for a in range(m):
            for b in range(m):
                if a != b:
                    v = basis_vector(m, a)
                    v[b] = Fraction(t)
                    yield v
    rng = np.random.default_rng(seed)
    for _ in range(200):
        yield as_fractions(rng.integers(-3, 4, size=m))


def _orthogonal_witness(A: CurvatureTensor, seed: int = 0):
    """Search an orthogonal rational pair with ``[J(x), J(y)] != 0``.

    For a fixed ``x`` the commutator is quadratic in ``y``; if it vanishes at
    every ``v_i`` and ``v_i + v_j`` of a basis of ``x^perp`` it vanishes on all
    of ``x^perp``. Bad ``x`` form a proper algebraic subset when the
    divisibility test failed, so the candidate scan terminates quickly.
    """
    table = A.jacobi_table
    m = A.dim
    for x in _candidate_directions(m, seed):
        if not any(v != 0 for v in x):
            continue
        Jx = table.jacobi(x)
        perp = kernel_of(A.space.lower(x).reshape(1, -1))
        trials = list(perp) + [perp[i] + perp[j] for i in range(len(perp)) for j in range(i + 1, len(perp))]
        for y in trials:
            Jy = table.jacobi(y)
            comm = Jx @ Jy - Jy @ Jx
            nz = np.flatnonzero(comm)
            if nz.size:
                i, j = np.unravel_index(nz[0], comm.shape)
                return {"kind": "orthogonal-pair", "x": x, "y": y, "entry": (int(i), int(j)), "value": comm[i, j]}
    raise SearchExhaustedError("no orthogonal witness pair found among candidates")


@_timed
def is_orthogonally_jacobi_tsankov(A: CurvatureTensor, seed: int = 0) -> PropertyVerdict:
    """``J(x)J(y) = J(y)J(x)`` whenever ``<x, y> = 0``.

    Decided as divisibility of the commutator polynomial by ``<x, y>``; the
    quotient ``G(x, y) = sum x_b y_d G[b, d]`` is returned as the certificate,
    with ``J(x)J(y) - J(y)J(x) = <x,y> G(x,y)`` identically.
    """
    m = A.dim
    poly, den = _commutator_polynomial(A)
    q_int, dg = scaled_integers(A.space.gram)
    quotient, remainder = _divide_by_form(poly, q_int) if poly else ({}, {})
    if remainder:
        return PropertyVerdict(ORTHOGONAL_JT, False, _orthogonal_witness(A, seed))
    G = zeros(m, m, m, m)
    scale = Fraction(dg, den * den)
    for (b, d), coef in quotient.items():
        G[b, d] = np.array([Fraction(x) * scale for x in coef], dtype=object).reshape(m, m)
    return PropertyVerdict(ORTHOGONAL_JT, True, certificate=G)


# --------------------------------------------------------------------------
# constant curvature and the implication audit
# --------------------------------------------------------------------------


def constant_sectional_curvature(A: CurvatureTensor) -> Fraction | None:
    """``c`` with ``A = c * A_id`` exactly, or ``None``."""
    ref = reference_components(A.space)
    nz = np.flatnonzero(ref)
    if nz.size == 0:
        return Fraction(0) if A.is_zero() else None
    idx = np.unravel_index(nz[0], ref.shape)
    c = Fraction(A.components[idx]) / ref[idx]
    return c if np.array_equal(A.components, ref * c) else None


@_timed
def _constant_curvature_verdict(A: CurvatureTensor) -> PropertyVerdict:
    c = constant_sectional_curvature(A)
    if c is not None:
        return PropertyVerdict(CONSTANT_CURVATURE, True, certificate=c)
    return PropertyVerdict(CONSTANT_CURVATURE, False, {"kind": "not-constant"})


CHECKERS = {
    TWO_STEP_SKEW: is_2step_skew_nilpotent,
    SKEW_TSANKOV: is_skew_tsankov,
    TWO_STEP_JACOBI: is_2step_jacobi_nilpotent,
    JACOBI_TSANKOV: is_jacobi_tsankov,
    ORTHOGONAL_JT: is_orthogonally_jacobi_tsankov,
    JACOBI_SQUARE_ZERO: jacobi_square_zero,
    CONSTANT_CURVATURE: _constant_curvature_verdict,
}

# (premise, conclusion): a violation would be a bug, not a counterexample
IMPLICATIONS = (
    (TWO_STEP_JACOBI, JACOBI_TSANKOV),
    (JACOBI_TSANKOV, ORTHOGONAL_JT),
    (TWO_STEP_SKEW, TWO_STEP_JACOBI),
    (TWO_STEP_SKEW, SKEW_TSANKOV),
    (JACOBI_TSANKOV, JACOBI_SQUARE_ZERO),
)


def run_checks(A: CurvatureTensor, names=ALL_PROPERTIES, seed: int = 0) -> list[PropertyVerdict]:
    """Run the named checkers in order; ``seed`` drives the orthogonal witness search."""
    unknown = [n for n in names if n not in CHECKERS]
    if unknown:
        raise KeyError(f"unknown properties: {unknown}")
    return [CHECKERS[name](A, seed=seed) if name == ORTHOGONAL_JT else CHECKERS[name](A) for name in names]


def implication_audit(A: CurvatureTensor, seed: int = 0) -> list[PropertyVerdict]:
    """Evaluate every checker and enforce the known implications between them."""
    verdicts = run_checks(A, seed=seed)
    by_name = {v.name: v.holds for v in verdicts}
    for premise, conclusion in IMPLICATIONS:
        if by_name[premise] and not by_name[conclusion]:
            raise InternalConsistencyError(f"{premise} holds but {conclusion} fails")
    if by_name[JACOBI_TSANKOV] and A.space.signature.p <= 1 and not A.is_zero():
        raise InternalConsistencyError("nonzero Jacobi-Tsankov tensor in Riemannian/Lorentzian signature")
    return verdicts


# --------------------------------------------------------------------------
# witness re-evaluation from scratch
# --------------------------------------------------------------------------


def _polarized_direct(A: CurvatureTensor, a: int, b: int) -> np.ndarray:
    m = A.dim
    ea, eb = basis_vector(m, a), basis_vector(m, b)
    return (jacobi(A, ea + eb) - jacobi(A, ea) - jacobi(A, eb)) / 2


def recheck(A: CurvatureTensor, verdict: PropertyVerdict) -> bool:
    """Re-evaluate a verdict's witness or certificate without the cached table."""
    m = A.dim
    if verdict.holds:
        if verdict.name == ORTHOGONAL_JT and verdict.certificate is not None:
            return _recheck_quotient(A, verdict.certificate)
        if verdict.name == CONSTANT_CURVATURE:
            return np.array_equal(A.components, reference_components(A.space) * verdict.certificate)
        return True
    w = verdict.witness or {}
    kind = w.get("kind")
    i, j = w.get("entry", (0, 0))
    if kind in ("commutator", "product"):
        (a, b), (c, d) = w["pairs"]
        P, Q = _polarized_direct(A, a, b), _polarized_direct(A, c, d)
        val = (P @ Q - Q @ P)[i, j] if kind == "commutator" else (P @ Q)[i, j]
        return val != 0 and val == w["value"]
    if kind in ("skew-commutator", "skew-product"):
        (a, b), (c, d) = w["pairs"]
        P = curvature_operator(A, basis_vector(m, a), basis_vector(m, b))
        Q = curvature_operator(A, basis_vector(m, c), basis_vector(m, d))
        val = (P @ Q - Q @ P)[i, j] if kind == "skew-commutator" else (P @ Q)[i, j]
        return val != 0 and val == w["value"]
    if kind == "symmetrized-square":
        a, b, c, d = w["indices"]
        total = zeros(m, m)
        for (p, q), (r, s) in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            P, Q = _polarized_direct(A, p, q), _polarized_direct(A, r, s)
            total = total + P @ Q + Q @ P
        return total[i, j] != 0 and total[i, j] == w["value"]
    if kind == "orthogonal-pair":
        x, y = w["x"], w["y"]
        if A.space.inner(x, y) != 0:
            return False
        Jx, Jy = jacobi(A, x), jacobi(A, y)
        val = (Jx @ Jy - Jy @ Jx)[i, j]
        return val != 0 and val == w["value"]
    if kind == "not-constant":
        return constant_sectional_curvature(A) is None
    return False


def _recheck_quotient(A: CurvatureTensor, G: np.ndarray, samples: int = 5, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    m = A.dim
    for _ in range(samples):
        x = as_fractions(rng.integers(-3, 4, size=m))
        y = as_fractions(rng.integers(-3, 4, size=m))
        Jx, Jy = jacobi(A, x), jacobi(A, y)
        lhs = Jx @ Jy - Jy @ Jx
        rhs = A.space.inner(x, y) * np.einsum("b,d,bdij->ij", x, y, G)
        if not np.array_equal(lhs, rhs):
            return False
    return True
