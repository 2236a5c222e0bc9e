"""Named tensors shared across the test modules."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from jtsankov.catalog import build_example, corpus_identifiers
from jtsankov.constructions import (
    SkewEndomorphism,
    a_from_skew,
    a_from_symmetric,
    constant_curvature,
    defn18_tensor,
    direct_sum,
    flat_factor,
    gauss_tensor,
    random_tensor,
)
from jtsankov.exact_linalg import InnerProductSpace, as_fractions


def _skew_on_13():
    space = InnerProductSpace.diagonal(1, 3)
    return SkewEndomorphism(space, as_fractions([[0, 1, 0, 0], [1, 0, 2, 0], [0, -2, 0, 1], [0, 0, -1, 0]]))


def _symmetric_on_22():
    space = InnerProductSpace.diagonal(2, 2)
    # self-adjoint for diag(-1,-1,1,1): G S symmetric
    S = as_fractions([[1, 2, 0, 1], [2, 0, 1, 0], [0, -1, 3, 1], [-1, 0, 1, 0]])
    return space, S


def small_fixtures() -> dict:
    """Every fixture with dimension at most 6, keyed by a readable label."""
    space, S = _symmetric_on_22()
    out = {
        "zero (1,3)": flat_factor(1, 3),
        "defn-1.8 k=2": defn18_tensor(2, 0),
        "defn-1.8 k=3": defn18_tensor(3, 1),
        "defn-1.8 k=2 + flat (1,1)": direct_sum(defn18_tensor(2, 3), flat_factor(1, 1)),
        "const c=1 (0,3)": constant_curvature(1, InnerProductSpace.diagonal(0, 3)),
        "const c=-2 (1,2)": constant_curvature(-2, InnerProductSpace.diagonal(1, 2)),
        "const c=5/3 (2,2)": constant_curvature(Fraction(5, 3), InnerProductSpace.diagonal(2, 2)),
        "gauss (1,2,0)": gauss_tensor([1, 2, 0]),
        "gauss (1,1,0)": gauss_tensor([1, 1, 0]),
        "gauss (2,2,1)": gauss_tensor([2, 2, 1]),
        "gauss (1,2,3,0)": gauss_tensor([1, 2, 3, 0]),
        "skew-rank-two (1,3)": a_from_skew(_skew_on_13()),
        "symmetric (2,2)": a_from_symmetric(space, S),
        "random (0,4)": random_tensor(1, InnerProductSpace.diagonal(0, 4)),
        "random (2,3)": random_tensor(2, InnerProductSpace.diagonal(2, 3)),
        "random hyperbolic 2": random_tensor(3, InnerProductSpace.hyperbolic(2)),
        "random sparse (3,3)": random_tensor(4, InnerProductSpace.diagonal(3, 3), orbit_count=4),
    }
    return out


def random_change_of_basis(rng: np.random.Generator, m: int) -> np.ndarray:
    """A random invertible rational matrix (unit upper times unit lower, plus a diagonal scale)."""
    upper = np.triu(rng.integers(-2, 3, size=(m, m)), 1) + np.eye(m, dtype=int)
    lower = np.tril(rng.integers(-2, 3, size=(m, m)), -1) + np.eye(m, dtype=int)
    scale = np.diag([Fraction(int(v), 2) for v in rng.choice([-2, -1, 1, 2, 3], size=m)])
    return as_fractions(upper) @ as_fractions(lower) @ np.array(scale, dtype=object)


ZERO_SIGNATURES = {3: (0, 3), 4: (2, 2), 5: (1, 4), 6: (3, 3), 7: (2, 5), 8: (4, 4)}
RANDOM_SIGNATURES = ((0, 3), (1, 2), (0, 4), (1, 3), (2, 2), (0, 5), (2, 3), (1, 5), (3, 3), (2, 4))


def zero_tensors() -> dict:
    return {f"zero dim {m}": flat_factor(*sig) for m, sig in ZERO_SIGNATURES.items()}


def random_corpus() -> dict:
    """Bianchi-projected random tensors, one per signature and two sparsities."""
    out = {}
    for n, (p, q) in enumerate(RANDOM_SIGNATURES):
        space = InnerProductSpace.diagonal(p, q)
        out[f"random ({p},{q}) dense"] = random_tensor(100 + n, space)
        out[f"random ({p},{q}) sparse"] = random_tensor(200 + n, space, orbit_count=3)
    return out


def full_corpus() -> dict:
    """Catalog examples, zero tensors, random tensors and the small fixtures."""
    out = {ident: build_example(ident).tensor for ident in corpus_identifiers()}
    out.update(zero_tensors())
    out.update(random_corpus())
    out.update(small_fixtures())
    return out
