"""Exact curvature of polynomial pseudo-Riemannian metrics at rational points.

Derivatives are taken on the polynomial entries; Christoffel symbols and the
curvature tensor are then assembled from exact rationals at each point, so no
rational-function inversion is needed.

Sign: components are ``R(d_i, d_j, d_k, d_l) = <R(d_i, d_j) d_k, d_l>`` with
``R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]``. In this
convention ``R(e1, e2, e2, e1)`` is the sectional curvature of an orthonormal
pair, matching the reference tensor of constant curvature ``+1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .checkers import PropertyVerdict, is_2step_jacobi_nilpotent, is_2step_skew_nilpotent
from .curvature import CurvatureTensor, validate_symmetries
from .errors import DegenerateFormError, FormatError, SymmetryError
from .exact_linalg import InnerProductSpace, Signature, as_fractions, format_rational, parse_rational, zeros

Exponents = tuple[int, ...]


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MultivariatePolynomial:
    """Sparse polynomial in ``nvars`` variables with rational coefficients."""

    nvars: int
    terms: Mapping[Exponents, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, coeff in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {self.nvars} variables")
            coeff = Fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
        object.__setattr__(self, "terms", {e: c for e, c in sorted(clean.items()) if c})

    @classmethod
    def zero(cls, nvars: int) -> "MultivariatePolynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> "MultivariatePolynomial":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def monomial(cls, nvars: int, exponents: Sequence[int], coeff=1) -> "MultivariatePolynomial":
        return cls(nvars, {tuple(exponents): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def depends_on(self, var: int) -> bool:
        return any(e[var] for e in self.terms)

    def __add__(self, other: "MultivariatePolynomial") -> "MultivariatePolynomial":
        merged = dict(self.terms)
        for e, c in other.terms.items():
            merged[e] = merged.get(e, Fraction(0)) + c
        return MultivariatePolynomial(self.nvars, merged)

    def __neg__(self) -> "MultivariatePolynomial":
        return MultivariatePolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "MultivariatePolynomial":
        if not isinstance(other, MultivariatePolynomial):
            other = MultivariatePolynomial.constant(self.nvars, other)
        out: dict[Exponents, Fraction] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultivariatePolynomial(self.nvars, out)

    __rmul__ = __mul__

    def derivative(self, var: int) -> "MultivariatePolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                lowered = list(e)
                lowered[var] -= 1
                out[tuple(lowered)] = c * e[var]
        return MultivariatePolynomial(self.nvars, out)

    def embed(self, nvars: int, offset: int = 0) -> "MultivariatePolynomial":
        """Same polynomial in a larger variable set, occupying slots ``offset..``."""
        out = {}
        for e, c in self.terms.items():
            full = [0] * nvars
            full[offset : offset + self.nvars] = e
            out[tuple(full)] = c
        return MultivariatePolynomial(nvars, out)

    def shifted(self, shift: Sequence) -> "MultivariatePolynomial":
        """``q(x) = self(x + shift)``."""
        shift = [Fraction(s) for s in shift]
        result = MultivariatePolynomial.zero(self.nvars)
        for e, c in self.terms.items():
            term = MultivariatePolynomial.constant(self.nvars, c)
            for var, power in enumerate(e):
                linear = MultivariatePolynomial(
                    self.nvars, {tuple(int(i == var) for i in range(self.nvars)): 1, (0,) * self.nvars: shift[var]}
                )
                for _ in range(power):
                    term = term * linear
            result = result + term
        return result

    def __call__(self, point: Sequence) -> Fraction:
        point = [Fraction(v) for v in point]
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, power in zip(point, e):
                if power:
                    term *= v**power
            total += term
        return total

    def to_records(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": format_rational(c)} for e, c in self.terms.items()]

    @classmethod
    def from_records(cls, nvars: int, records) -> "MultivariatePolynomial":
        terms: dict[Exponents, Fraction] = {}
        for rec in records:
            try:
                e = tuple(int(v) for v in rec["exponents"])
                c = parse_rational(rec["coeff"])
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"bad polynomial term {rec!r}: {exc}") from exc
            if len(e) != nvars:
                raise FormatError(f"exponent list {list(e)} should have length {nvars}")
            terms[e] = terms.get(e, Fraction(0)) + c
        return cls(nvars, terms)


def random_polynomial(rng: np.random.Generator, nvars: int, max_degree: int, density: float = 0.4):
    """Random polynomial with small integer and half-integer coefficients."""
    terms = {}
    for exps in itertools.product(range(max_degree + 1), repeat=nvars):
        if sum(exps) <= max_degree and rng.random() < density:
            terms[exps] = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3)))
    return MultivariatePolynomial(nvars, terms)


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolynomialMetric:
    """Symmetric grid of polynomials ``g_ij(x)`` on coordinates ``x_0..x_{n-1}``."""

    gram_polys: tuple[tuple[MultivariatePolynomial, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(row) for row in self.gram_polys)
        n = len(grid)
        for i, row in enumerate(grid):
            if len(row) != n:
                raise FormatError("metric grid is not square")
            for j, entry in enumerate(row):
                if entry.nvars != n:
                    raise FormatError(f"entry ({i},{j}) uses {entry.nvars} variables, expected {n}")
        for i, j in itertools.combinations(range(n), 2):
            if grid[i][j] != grid[j][i]:
                raise SymmetryError(f"metric entries ({i},{j}) and ({j},{i}) differ")
        object.__setattr__(self, "gram_polys", grid)

    @property
    def dim(self) -> int:
        return len(self.gram_polys)

    def gram_at(self, point) -> np.ndarray:
        point = _point(point, self.dim)
        return as_fractions([[g(point) for g in row] for row in self.gram_polys])

    def space_at(self, point) -> InnerProductSpace:
        try:
            return InnerProductSpace(self.gram_at(point))
        except DegenerateFormError as exc:
            raise DegenerateFormError(f"metric is degenerate at {list(point)}") from exc

    def shifted(self, shift) -> "PolynomialMetric":
        return PolynomialMetric(tuple(tuple(g.shifted(shift) for g in row) for row in self.gram_polys))

    def first_derivatives(self, point) -> np.ndarray:
        """``D[a, i, j] = d_a g_ij`` at ``point``."""
        n = self.dim
        point = _point(point, n)
        D = zeros(n, n, n)
        for a, i, j in itertools.product(range(n), repeat=3):
            D[a, i, j] = self.gram_polys[i][j].derivative(a)(point)
        return D

    def second_derivatives(self, point) -> np.ndarray:
        """``H[a, b, i, j] = d_a d_b g_ij`` at ``point``."""
        n = self.dim
        point = _point(point, n)
        H = zeros(n, n, n, n)
        for i, j in itertools.product(range(n), repeat=2):
            g = self.gram_polys[i][j]
            if g.degree < 2:
                continue
            for a in range(n):
                ga = g.derivative(a)
                for b in range(a, n):
                    H[a, b, i, j] = H[b, a, i, j] = ga.derivative(b)(point)
        return H


def _point(point, n: int) -> list[Fraction]:
    coords = [Fraction(v) for v in point]
    if len(coords) != n:
        raise ValueError(f"point has {len(coords)} coordinates, metric has dimension {n}")
    return coords


def psi_metric(p: int, psi) -> PolynomialMetric:
    """Block metric ``[[psi(x), I], [I, 0]]`` on ``(x_1..x_p, y_1..y_p)``.

    ``psi`` is a ``p x p`` grid of polynomials in either ``p`` variables (the
    ``x`` coordinates) or ``2p`` variables with no ``y`` dependence.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    grid = [list(row) for row in psi]
    if len(grid) != p or any(len(row) != p for row in grid):
        raise FormatError(f"psi must be a {p}x{p} grid")
    n = 2 * p
    full = [[MultivariatePolynomial.zero(n) for _ in range(n)] for _ in range(n)]
    for i, j in itertools.product(range(p), repeat=2):
        entry = grid[i][j]
        if entry.nvars == p:
            entry = entry.embed(n)
        elif entry.nvars != n:
            raise FormatError(f"psi entry ({i},{j}) has {entry.nvars} variables")
        if any(entry.depends_on(v) for v in range(p, n)):
            raise FormatError(f"psi entry ({i},{j}) depends on a y coordinate")
        full[i][j] = entry
    for i in range(p):
        full[i][p + i] = full[p + i][i] = MultivariatePolynomial.constant(n, 1)
    return PolynomialMetric(tuple(tuple(row) for row in full))


def random_psi(p: int, seed: int, max_degree: int = 3) -> list[list[MultivariatePolynomial]]:
    rng = np.random.default_rng(seed)
    grid = [[MultivariatePolynomial.zero(p)] * p for _ in range(p)]
    for i in range(p):
        for j in range(i, p):
            grid[i][j] = grid[j][i] = random_polynomial(rng, p, max_degree)
    return grid


def random_points(dim: int, seed: int, count: int = 5, bound: int = 3) -> list[list[Fraction]]:
    rng = np.random.default_rng(seed)
    return [[Fraction(int(rng.integers(-2 * bound, 2 * bound + 1)), 2) for _ in range(dim)] for _ in range(count)]


# --------------------------------------------------------------------------
# curvature
# --------------------------------------------------------------------------


def _christoffel_from(D: np.ndarray) -> np.ndarray:
    # Gamma[i, j, k] = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij)
    return (D + np.transpose(D, (1, 0, 2)) - np.transpose(D, (1, 2, 0))) / 2


def christoffel_first(metric: PolynomialMetric, point) -> np.ndarray:
    """Christoffel symbols of the first kind ``Gamma_{ij,k}`` at ``point``."""
    metric.space_at(point)
    return _christoffel_from(metric.first_derivatives(point))


def curvature_at(metric: PolynomialMetric, point) -> CurvatureTensor:
    """Lowered Riemann tensor at ``point``, as a curvature tensor on the tangent space there."""
    space = metric.space_at(point)
    gamma = _christoffel_from(metric.first_derivatives(point))
    H = metric.second_derivatives(point)
    ginv = space.inverse_gram
    # second-derivative block: 1/2 (d_i d_k g_jl - d_i d_l g_jk - d_j d_k g_il + d_j d_l g_ik)
    second = (
        np.einsum("ikjl->ijkl", H)
        - np.einsum("iljk->ijkl", H)
        - np.einsum("jkil->ijkl", H)
        + np.einsum("jlik->ijkl", H)
    ) / 2
    # Gamma.Gamma block: g^{mn} (Gamma_{ik,m} Gamma_{jl,n} - Gamma_{jk,m} Gamma_{il,n})
    raised = np.einsum("ikm,mn->ikn", gamma, ginv)
    quad = np.einsum("ikn,jln->ijkl", raised, gamma) - np.einsum("jkn,iln->ijkl", raised, gamma)
    return CurvatureTensor(space, second + quad)


# --------------------------------------------------------------------------
# the neutral-signature family
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PointReport:
    point: tuple[Fraction, ...]
    signature: Signature
    symmetries_valid: bool
    jacobi_nilpotent: PropertyVerdict
    skew_nilpotent: PropertyVerdict
    nonzero_orbits: int
    x_block_only: bool

    @property
    def passed(self) -> bool:
        p = len(self.point) // 2
        return (
            self.symmetries_valid
            and self.jacobi_nilpotent.holds
            and self.skew_nilpotent.holds
            and self.signature == Signature(p, p, 0)
            and self.x_block_only
        )


@dataclass(frozen=True, eq=False)
class NeutralFamilyReport:
    p: int
    points: tuple[PointReport, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.points)

    @property
    def nonflat_points(self) -> int:
        return sum(1 for r in self.points if r.nonzero_orbits)


def verify_thm_1_10(p: int, psi, points) -> NeutralFamilyReport:
    """Check symmetries, both 2-step nilpotencies and neutral signature at each point."""
    metric = psi_metric(p, psi)
    reports = []
    for point in points:
        coords = tuple(_point(point, 2 * p))
        A = curvature_at(metric, coords)
        comps = A.components
        outside = comps.copy()
        outside[:p, :p, :p, :p] = 0
        reports.append(
            PointReport(
                point=coords,
                signature=A.space.signature,
                symmetries_valid=bool(validate_symmetries(comps)),
                jacobi_nilpotent=is_2step_jacobi_nilpotent(A),
                skew_nilpotent=is_2step_skew_nilpotent(A),
                nonzero_orbits=len(A.nonzero_orbits()),
                x_block_only=not np.flatnonzero(outside).size,
            )
        )
    return NeutralFamilyReport(p, tuple(reports))
