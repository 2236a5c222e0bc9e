"""Explicit algebraic curvature tensors.

Includes the skew and symmetric rank-two constructions, a Clifford family on
R^(4,4), the 8-dimensional tensor with nilpotent but non-commuting Jacobi
operators, the 14-dimensional Jacobi-Tsankov tensor that is not 2-step
nilpotent, hyperbolic dual extensions, constant curvature references and
seeded random tensors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curvature import (
    CurvatureTensor,
    bianchi_project,
    reference_components,
    tensor_from_components,
    validate_symmetries,
    z2_orbit,
)
from .errors import CurvatureSymmetryError, NotSelfAdjointError, NotSkewError, SearchExhaustedError
from .exact_linalg import (
    InnerProductSpace,
    as_fractions,
    basis_vector,
    direct_sum_gram,
    frozen,
    identity,
    is_zero,
    rank,
    zeros,
)

# --------------------------------------------------------------------------
# rank-two constructions
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SkewEndomorphism:
    space: InnerProductSpace
    matrix: np.ndarray

    def __post_init__(self):
        phi = as_fractions(self.matrix)
        lowered = self.space.gram @ phi
        if not np.array_equal(lowered.T, -lowered):
            raise NotSkewError("endomorphism is not skew-adjoint for this inner product")
        object.__setattr__(self, "matrix", frozen(phi))


def _pairing(space: InnerProductSpace, op) -> np.ndarray:
    """``B[a, b] = <op e_a, e_b>``."""
    return as_fractions(op).T @ space.gram


def a_from_skew(phi: SkewEndomorphism) -> CurvatureTensor:
    """``<phi y,z><phi x,w> - <phi x,z><phi y,w> - 2<phi x,y><phi z,w>``.

    Its Jacobi operator is ``J(x) y = 3 <y, phi x> phi x`` under this
    package's convention ``<J(x) y, w> = A(y, x, x, w)``.
    """
    if not isinstance(phi, SkewEndomorphism):
        raise TypeError("a_from_skew expects a SkewEndomorphism")
    B = _pairing(phi.space, phi.matrix)
    comps = (
        np.einsum("jk,il->ijkl", B, B)
        - np.einsum("ik,jl->ijkl", B, B)
        - 2 * np.einsum("ij,kl->ijkl", B, B)
    )
    return CurvatureTensor(phi.space, comps)


def a_from_symmetric(space: InnerProductSpace, S) -> CurvatureTensor:
    """Gauss-equation tensor ``<Sy,z><Sx,w> - <Sx,z><Sy,w>`` of a self-adjoint ``S``."""
    S = as_fractions(S)
    lowered = space.gram @ S
    if not np.array_equal(lowered.T, lowered):
        raise NotSelfAdjointError("shape operator is not self-adjoint")
    B = _pairing(space, S)
    comps = np.einsum("jk,il->ijkl", B, B) - np.einsum("ik,jl->ijkl", B, B)
    return CurvatureTensor(space, comps)


def gauss_tensor(spectrum) -> CurvatureTensor:
    """Hypersurface curvature for a diagonal shape operator in Euclidean space."""
    spectrum = [Fraction(v) for v in as_fractions(list(spectrum))]
    m = len(spectrum)
    S = zeros(m, m)
    for i, lam in enumerate(spectrum):
        S[i, i] = lam
    return a_from_symmetric(InnerProductSpace(identity(m)), S)


def constant_curvature(c, space: InnerProductSpace) -> CurvatureTensor:
    return CurvatureTensor(space, reference_components(space) * Fraction(c))


# --------------------------------------------------------------------------
# the Clifford example on R^(4,4)
# --------------------------------------------------------------------------

_I2 = np.eye(2, dtype=np.int64)
_SX = np.array([[0, 1], [1, 0]], dtype=np.int64)
_SZ = np.array([[1, 0], [0, -1]], dtype=np.int64)
_EPS = np.array([[0, 1], [-1, 0]], dtype=np.int64)


def _kron(*factors) -> np.ndarray:
    out = np.array([[1]], dtype=np.int64)
    for f in factors:
        out = np.kron(out, f)
    return out


# Generators act as signed permutations; squares +1, +1, -1, -1.
CLIFFORD_GENERATORS = (
    _kron(_I2, _I2, _SX),
    _kron(_I2, _I2, _SZ),
    _kron(_I2, _SX, _EPS),
    _kron(_I2, _SZ, _EPS),
)

# Four hyperbolic pairs, signature (4, 4); every generator is skew for it.
CLIFFORD_GRAM = np.array(
    [
        [0, 0, 0, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, -1],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, -1, 0, 0, 0, 0, 0],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True, eq=False)
class CliffordFamily:
    space: InnerProductSpace
    generators: tuple[SkewEndomorphism, ...]

    def relations(self) -> dict[str, bool]:
        """The ten defining relations, each evaluated exactly."""
        e = [g.matrix for g in self.generators]
        one = identity(self.space.dim)
        squares = (one, one, -one, -one)
        out = {}
        for i in range(4):
            out[f"e{i + 1}^2"] = np.array_equal(e[i] @ e[i], squares[i])
        for i in range(4):
            for j in range(i + 1, 4):
                out[f"e{i + 1}e{j + 1}+e{j + 1}e{i + 1}"] = is_zero(e[i] @ e[j] + e[j] @ e[i])
        return out


def clifford_family_44() -> CliffordFamily:
    space = InnerProductSpace(as_fractions(CLIFFORD_GRAM))
    gens = tuple(SkewEndomorphism(space, as_fractions(g)) for g in CLIFFORD_GENERATORS)
    return CliffordFamily(space, gens)


def lemma22_phis() -> tuple[SkewEndomorphism, SkewEndomorphism]:
    """``phi_1 = e_1 + e_3`` and ``phi_2 = e_2 + e_4``."""
    fam = clifford_family_44()
    e = [g.matrix for g in fam.generators]
    return SkewEndomorphism(fam.space, e[0] + e[2]), SkewEndomorphism(fam.space, e[1] + e[3])


def lemma22_tensor() -> CurvatureTensor:
    """``-(A_phi1 + A_phi2) / 3``: ``J(x)^2 = 0`` for all ``x`` but not Jacobi-Tsankov."""
    phi1, phi2 = lemma22_phis()
    return (a_from_skew(phi1) + a_from_skew(phi2)).scaled(Fraction(-1, 3))


def lemma22_witness():
    """``(x1, x2, y)`` with ``J(x1)J(x2)y != 0 = J(x2)J(x1)y``.

    Scan the standard basis for ``x1`` with ``phi2 phi1 x1 != 0``, set
    ``y = phi1 x1``, then scan for ``x2`` with ``<phi1 x1, phi2 x2> != 0``.
    """
    phi1, phi2 = lemma22_phis()
    space = phi1.space
    m = space.dim
    p1, p2 = phi1.matrix, phi2.matrix
    basis = [basis_vector(m, i) for i in range(m)]
    x1 = next(v for v in basis if not is_zero(p2 @ p1 @ v))
    y = p1 @ x1
    x2 = next(v for v in basis if space.inner(p1 @ x1, p2 @ v) != 0)
    return x1, x2, y


# --------------------------------------------------------------------------
# the 14-dimensional example
# --------------------------------------------------------------------------

LEMMA32_LABELS = (
    "e1", "e2", "e3", "e4",
    "ebar1", "ebar2", "ebar3", "ebar4",
    "etilde1", "etilde2", "etilde3", "etilde4",
    "f1", "f2",
)  # fmt: skip


def lemma32_space() -> InnerProductSpace:
    idx = {name: i for i, name in enumerate(LEMMA32_LABELS)}
    G = zeros(14, 14)
    for prefix in ("e", "ebar", "etilde"):
        for a, b in ((1, 2), (3, 4)):
            i, j = idx[f"{prefix}{a}"], idx[f"{prefix}{b}"]
            G[i, j] = G[j, i] = Fraction(1)
    f1, f2 = idx["f1"], idx["f2"]
    G[f1, f1] = G[f2, f2] = Fraction(-1, 2)
    G[f1, f2] = G[f2, f1] = Fraction(1, 4)
    return InnerProductSpace(G)


LEMMA32_COMPONENTS = (
    ("e1", "etilde1", "etilde1", "e3", "1"),
    ("e1", "ebar1", "ebar1", "e4", "1"),
    ("ebar1", "e1", "e1", "ebar3", "1"),
    ("ebar1", "etilde1", "etilde1", "ebar4", "1"),
    ("etilde1", "e1", "e1", "etilde3", "1"),
    ("etilde1", "ebar1", "ebar1", "etilde4", "1"),
    ("e1", "ebar1", "etilde1", "f1", "-1/2"),
    ("e1", "etilde1", "ebar1", "f1", "-1/2"),
    ("ebar1", "etilde1", "e1", "f2", "-1/2"),
    ("ebar1", "e1", "etilde1", "f2", "-1/2"),
)


def lemma32_tensor() -> CurvatureTensor:
    """Jacobi-Tsankov, signature (8, 6), not 2-step Jacobi nilpotent."""
    idx = {name: i for i, name in enumerate(LEMMA32_LABELS)}
    entries = [(idx[a], idx[b], idx[c], idx[d], v) for a, b, c, d, v in LEMMA32_COMPONENTS]
    return tensor_from_components(lemma32_space(), entries, mode="generate")


# --------------------------------------------------------------------------
# dual extensions and direct sums
# --------------------------------------------------------------------------


def dual_extension(A_W) -> CurvatureTensor:
    """``A_W + 0`` on ``W + Wbar`` with only ``<e_i, ebar_j> = delta_ij`` nonzero.

    ``A_W`` is a bare ``(k, k, k, k)`` component array; ``W`` carries no
    inner product of its own. Basis order is ``(e_1..e_k, ebar_1..ebar_k)``.
    """
    A_W = as_fractions(A_W)
    k = A_W.shape[0]
    report = validate_symmetries(A_W)
    if not report:
        raise CurvatureSymmetryError(f"A_W: {report.describe()}", report)
    comps = zeros(2 * k, 2 * k, 2 * k, 2 * k)
    comps[:k, :k, :k, :k] = A_W
    return CurvatureTensor(InnerProductSpace.hyperbolic(k), comps)


def direct_sum(first: CurvatureTensor, second: CurvatureTensor) -> CurvatureTensor:
    m1, m2 = first.dim, second.dim
    n = m1 + m2
    comps = zeros(n, n, n, n)
    comps[:m1, :m1, :m1, :m1] = first.components
    comps[m1:, m1:, m1:, m1:] = second.components
    space = InnerProductSpace(direct_sum_gram(first.space.gram, second.space.gram))
    return CurvatureTensor(space, comps)


def flat_factor(p: int, q: int) -> CurvatureTensor:
    space = InnerProductSpace.diagonal(p, q)
    return CurvatureTensor(space, zeros(*(space.dim,) * 4))


# --------------------------------------------------------------------------
# random tensors
# --------------------------------------------------------------------------


def orbit_representatives(dim: int) -> list[tuple[int, int, int, int]]:
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    return [(*p, *q) for n, p in enumerate(pairs) for q in pairs[n:]]


def random_curvature_components(seed: int, dim: int, orbit_count: int | None = None) -> np.ndarray:
    """Seeded random curvature components on a bare ``dim``-space.

    Random rational values are placed on ``orbit_count`` symmetry orbits
    (default: all), then projected onto the first Bianchi identity.
    """
    rng = np.random.default_rng(seed)
    reps = orbit_representatives(dim)
    if orbit_count is not None and orbit_count < len(reps):
        chosen = sorted(int(v) for v in rng.choice(len(reps), size=orbit_count, replace=False))
        reps = [reps[i] for i in chosen]
    raw = zeros(dim, dim, dim, dim)
    for rep in reps:
        value = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3)))
        for idx, sign in z2_orbit(*rep):
            raw[idx] = sign * value
    return bianchi_project(raw)


def random_tensor(seed: int, space: InnerProductSpace, orbit_count: int | None = None) -> CurvatureTensor:
    return CurvatureTensor(space, random_curvature_components(seed, space.dim, orbit_count))


def _image_rank(A_W: np.ndarray) -> int:
    # J(x) y pairs with e_l through A_W(y, x, x, e_l); the polarized
    # coefficient vectors span the Jacobi image inside Wbar
    k = A_W.shape[0]
    sym = A_W + np.swapaxes(A_W, 1, 2)
    return rank(sym.reshape(k**3, k))


def defn18_tensor(k: int, seed: int) -> CurvatureTensor:
    """Dual extension of a seeded random generic ``A_W`` on a ``k``-dimensional ``W``.

    Generic means the Jacobi image fills the whole ``Wbar`` factor, so the
    extension decomposes back with ``dim W = k``. Draws failing this are
    replaced by the next draw from the same seeded stream.
    """
    if k < 2:
        raise ValueError("curvature tensors on a space of dimension < 2 vanish")
    for attempt in range(64):
        comps = random_curvature_components(seed * 64 + attempt, k)
        if _image_rank(comps) == k:
            return dual_extension(comps)
    raise SearchExhaustedError(f"no generic A_W found for k={k}, seed={seed}")
