"""Structure of Jacobi-Tsankov and 2-step Jacobi nilpotent tensors.

Two constructive results live here:

* a 14-vector independent set built from any Jacobi-Tsankov tensor with
  ``J(x)J(y) != 0``, which certifies ``dim V >= 14``;
* the splitting of a 2-step Jacobi nilpotent tensor into a hyperbolic dual
  extension ``(W + Wbar, A_W + 0)`` plus a flat orthogonal factor ``T``.

The Jacobi image ``span{J(v1) v2}`` equals ``span{J(e_a, e_b) e_c}`` because
``J(v1) v2 = sum_{a,b,c} (v1)_a (v1)_b (v2)_c J(e_a, e_b) e_c`` and conversely
``J(e_a, e_b) = (J(e_a + e_b) - J(e_a) - J(e_b)) / 2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .checkers import is_2step_jacobi_nilpotent, is_jacobi_tsankov
from .curvature import CurvatureTensor
from .errors import InternalConsistencyError, PreconditionError, SearchExhaustedError
from .exact_linalg import (
    Echelon,
    InnerProductSpace,
    as_fractions,
    basis_vector,
    complete_to_basis,
    extend_to_basis,
    inverse,
    is_zero,
    kernel_of,
    rank,
    zeros,
)

# --------------------------------------------------------------------------
# image and kernel of the Jacobi operators
# --------------------------------------------------------------------------


def jacobi_image_span(A: CurvatureTensor) -> list[np.ndarray]:
    """Reduced basis of ``span{J(v1) v2 : v1, v2 in V}``."""
    table = A.jacobi_table
    m = A.dim
    ech = Echelon(m)
    for a, b in table.pairs():
        op = table[a, b]
        for c in range(m):
            ech.add(op[:, c])
            if len(ech) == m:
                return ech.basis()
    return ech.basis()


def jacobi_common_kernel(A: CurvatureTensor) -> list[np.ndarray]:
    """Basis of ``U = {v : J(v1) v = 0 for all v1}``."""
    table = A.jacobi_table
    m = A.dim
    rows = np.concatenate([table[a, b] for a, b in table.pairs()], axis=0)
    return kernel_of(rows, ncols=m)


# --------------------------------------------------------------------------
# decomposition of 2-step nilpotent tensors
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    """``V = (W + Wbar) + T`` with ``<w_i, wbar_j> = delta_ij`` and ``W, Wbar`` isotropic.

    ``certificate`` has columns ``w_1..w_k, wbar_1..wbar_k, t_1..t_l``; pulling
    the tensor back along it yields ``A_W + 0`` on the first ``k`` slots and
    zero elsewhere.
    """

    w_basis: list[np.ndarray]
    wbar_basis: list[np.ndarray]
    t_basis: list[np.ndarray]
    a_w_components: np.ndarray
    certificate: np.ndarray

    @property
    def k(self) -> int:
        return len(self.w_basis)

    @property
    def flat_dim(self) -> int:
        return len(self.t_basis)

    def t_gram(self, space: InnerProductSpace) -> np.ndarray:
        T = self.certificate[:, 2 * self.k :]
        return T.T @ space.gram @ T

    def check(self, A: CurvatureTensor) -> list[str]:
        """Re-verify every invariant against ``A``; return a list of failures."""
        G = A.space.gram
        k, m = self.k, A.dim
        problems = []
        P = self.certificate
        if P.shape != (m, m) or rank(P) != m:
            return ["certificate is not an invertible basis change"]
        gram = P.T @ G @ P
        W, Wb, T = slice(0, k), slice(k, 2 * k), slice(2 * k, m)
        if not is_zero(gram[W, W]):
            problems.append("W is not totally isotropic")
        if not is_zero(gram[Wb, Wb]):
            problems.append("Wbar is not totally isotropic")
        if not np.array_equal(gram[W, Wb], np.eye(k, dtype=int).astype(object)):
            problems.append("<w_i, wbar_j> != delta_ij")
        if not is_zero(gram[: 2 * k, T]):
            problems.append("T is not orthogonal to W + Wbar")
        if m - 2 * k and rank(gram[T, T]) != m - 2 * k:
            problems.append("inner product restricted to T is degenerate")
        pulled = A.pullback(P).components
        expected = zeros(m, m, m, m)
        expected[:k, :k, :k, :k] = self.a_w_components
        if not np.array_equal(pulled, expected):
            problems.append("pulled-back tensor is not A_W + 0")
        return problems


def _fail(step: str, detail: str):
    raise InternalConsistencyError(f"decompose_2step step {step}: {detail}")


def decompose_2step(A: CurvatureTensor) -> DecompositionResult:
    """Split a 2-step Jacobi nilpotent tensor into dual-extension and flat parts.

    Steps: ``Wbar`` = Jacobi image, ``U`` = common kernel (``Wbar <= U``); a
    greedy complement ``W1`` of ``U``; the dual system
    ``<wt_i, wbar_j> = delta_ij`` in ``W1``; the isotropic correction
    ``w_i = wt_i - 1/2 sum_j <wt_i, wt_j> wbar_j``; an extension of ``Wbar`` to
    ``U`` corrected by ``u_i = ut_i - sum_j <w_j, ut_i> wbar_j``.
    """
    verdict = is_2step_jacobi_nilpotent(A)
    if not verdict.holds:
        raise PreconditionError("tensor is not 2-step Jacobi nilpotent", verdict)
    space = A.space
    m = A.dim

    wbar = jacobi_image_span(A)
    U = jacobi_common_kernel(A)
    u_ech = Echelon(m)
    for u in U:
        u_ech.add(u)
    for v in wbar:
        if not u_ech.contains(v):
            _fail("1", "Jacobi image is not contained in the common kernel")
    k = len(wbar)

    W1 = complete_to_basis(U, m)
    if len(W1) != k:
        _fail("3", f"complement of U has dimension {len(W1)}, Jacobi image has {k}")
    pairing = np.array([[space.inner(b, v) for v in wbar] for b in W1], dtype=object).reshape(k, k)
    try:
        coeffs = inverse(pairing) if k else zeros(0, 0)
    except Exception:
        _fail("3", "pairing between W1 and the Jacobi image is singular")
    # wt_i = sum_c coeffs[c, i] b_c  so that  <wt_i, wbar_j> = (coeffs^T pairing)[i, j] = delta_ij
    w_tilde = [sum((coeffs[c, i] * W1[c] for c in range(k)), zeros(m)) for i in range(k)]

    w = []
    for i in range(k):
        corr = sum((space.inner(w_tilde[i], w_tilde[j]) * wbar[j] for j in range(k)), zeros(m))
        w.append(w_tilde[i] - corr / 2)

    u_tilde = extend_to_basis(wbar, U) if U else []
    t = []
    for ut in u_tilde:
        corr = sum((space.inner(w[j], ut) * wbar[j] for j in range(k)), zeros(m))
        t.append(ut - corr)

    columns = w + wbar + t
    P = np.array([list(c) for c in columns], dtype=object).T if columns else zeros(m, 0)
    if P.shape != (m, m):
        _fail("5", f"assembled basis has {P.shape[1]} vectors, expected {m}")
    a_w = A.pullback(P).components[:k, :k, :k, :k] if k else zeros(0, 0, 0, 0)
    result = DecompositionResult(w, wbar, t, a_w, P)
    problems = result.check(A)
    if problems:
        _fail("6", "; ".join(problems))
    return result


def reassemble(result: DecompositionResult, t_gram) -> CurvatureTensor:
    """Build ``dual_extension(A_W) + (T, 0)`` in the decomposition basis."""
    from .constructions import direct_sum, dual_extension

    flat = None
    if result.flat_dim:
        flat = CurvatureTensor(InnerProductSpace(t_gram), zeros(*(result.flat_dim,) * 4))
    if result.k == 0:
        return flat
    ext = dual_extension(result.a_w_components)
    return ext if flat is None else direct_sum(ext, flat)


# --------------------------------------------------------------------------
# relations for Jacobi-Tsankov tensors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationsReport:
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def verify_relations_table(A: CurvatureTensor, x, y) -> RelationsReport:
    """The six identities forced by ``J(x + s y)^2 = 0`` and commutativity."""
    table = A.jacobi_table
    Jx, Jy, Jxy = table.jacobi(x), table.jacobi(y), table.operator(x, y)
    checks = {
        "Jx^2 = 0": is_zero(Jx @ Jx),
        "Jy^2 = 0": is_zero(Jy @ Jy),
        "JxJy = JyJx": np.array_equal(Jx @ Jy, Jy @ Jx),
        "JxJxy = JxyJx = 0": is_zero(Jx @ Jxy) and is_zero(Jxy @ Jx),
        "JyJxy = JxyJy = 0": is_zero(Jy @ Jxy) and is_zero(Jxy @ Jy),
        "Jxy^2 = -1/2 JxJy": np.array_equal(Jxy @ Jxy, -(Jx @ Jy) / 2),
    }
    return RelationsReport(tuple(name for name, ok in checks.items() if not ok))


def mean_pairing_identities(A: CurvatureTensor, x, y, w) -> tuple[tuple[Fraction, Fraction, Fraction], bool]:
    """``<J(x)J(y)w, w>``, ``<J(y)J(w)x, x>``, ``<J(w)J(x)y, y>`` and whether they agree."""
    table = A.jacobi_table
    x, y, w = (as_fractions(v) for v in (x, y, w))
    Jx, Jy, Jw = table.jacobi(x), table.jacobi(y), table.jacobi(w)
    inner = A.space.inner
    values = (inner(Jx @ Jy @ w, w), inner(Jy @ Jw @ x, x), inner(Jw @ Jx @ y, y))
    return values, values[0] == values[1] == values[2]


# --------------------------------------------------------------------------
# the 14-vector witness
# --------------------------------------------------------------------------

WITNESS_LABELS = ("w", "x", "y", "e2", "e3", "e4", "e5", "f2", "f3", "f4", "f5", "g2", "g3", "g4")


@dataclass(frozen=True, eq=False)
class WitnessSet:
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    pairing: Fraction
    e: tuple[np.ndarray, ...]  # e2..e5
    f: tuple[np.ndarray, ...]  # f2..f5
    g: tuple[np.ndarray, ...]  # g2..g5; g5 is excluded from the independent set
    independence_rank: int

    def independent_set(self) -> list[np.ndarray]:
        return [self.w, self.x, self.y, *self.e, *self.f, *self.g[:3]]

    def labelled(self) -> dict[str, np.ndarray]:
        out = dict(zip(WITNESS_LABELS, self.independent_set()))
        out["g5"] = self.g[3]
        return out


_SCAN_STEPS = (0, 1, -1, 2)


def _scan_vectors(m: int):
    for t in _SCAN_STEPS:
        for a in range(m):
            for b in range(m) if t else (a,):
                if t and a == b:
                    continue
                v = basis_vector(m, a)
                v[b] += Fraction(t)
                yield v


def _find_product_pair(A: CurvatureTensor):
    table = A.jacobi_table
    m = A.dim
    cache = {}
    candidates = list(_scan_vectors(m))
    for x in candidates:
        Jx = cache.setdefault(tuple(x), table.jacobi(x))
        if is_zero(Jx):
            continue
        for y in candidates:
            Jy = cache.setdefault(tuple(y), table.jacobi(y))
            if not is_zero(Jx @ Jy):
                return x, y
    return None


def _find_pairing_vector(A: CurvatureTensor, product: np.ndarray):
    m = A.dim
    inner = A.space.inner
    basis = [basis_vector(m, i) for i in range(m)]
    for v in basis:
        if inner(product @ v, v) != 0:
            return v
    # perturbation: p(s) = <w, P w> + 2 s <P w, f> + s^2 <P f, f> with <P w, f> != 0
    w0 = next(v for v in basis if not is_zero(product @ v))
    e2 = product @ w0
    f = next(v for v in basis if inner(e2, v) != 0)
    for s in (1, -1, 2, -2, 3):
        cand = w0 + s * f
        if inner(product @ cand, cand) != 0:
            return cand
    raise InternalConsistencyError("quadratic perturbation vanished at five points")


def lemma31_witness(A: CurvatureTensor) -> WitnessSet | None:
    """Build the 14 independent vectors, or ``None`` when ``A`` is 2-step nilpotent.

    Raises :class:`SearchExhaustedError` if the bounded scan for ``(x, y)``
    finds no pair with ``J(x)J(y) != 0`` although one exists.
    """
    jt = is_jacobi_tsankov(A)
    if not jt.holds:
        raise PreconditionError("tensor is not Jacobi-Tsankov", jt)
    if is_2step_jacobi_nilpotent(A).holds:
        return None
    found = _find_product_pair(A)
    if found is None:
        raise SearchExhaustedError("no (x, y) with J(x)J(y) != 0 among scanned combinations")
    x, y = found
    table = A.jacobi_table
    Jx, Jy = table.jacobi(x), table.jacobi(y)
    w = _find_pairing_vector(A, Jx @ Jy)
    Jw = table.jacobi(w)
    Jxy, Jyw, Jwx = table.operator(x, y), table.operator(y, w), table.operator(w, x)
    e = (Jx @ Jy @ w, Jx @ w, Jy @ w, Jxy @ w)
    f = (Jy @ Jw @ x, Jy @ x, Jw @ x, Jyw @ x)
    g = (Jw @ Jx @ y, Jw @ y, Jx @ y, Jwx @ y)
    pairing = A.space.inner(e[0], w)
    ws = WitnessSet(x, y, w, pairing, e, f, g, 0)
    r = rank(np.array([list(v) for v in ws.independent_set()], dtype=object))
    ws = WitnessSet(x, y, w, pairing, e, f, g, r)
    if pairing == 0 or r != 14 or not is_zero(e[3] + f[3] + g[3]):
        raise InternalConsistencyError(
            f"witness invariants failed: pairing={pairing}, rank={r}, e5+f5+g5 zero={is_zero(e[3] + f[3] + g[3])}"
        )
    return ws


def all_index_pairs(m: int):
    return itertools.combinations_with_replacement(range(m), 2)
