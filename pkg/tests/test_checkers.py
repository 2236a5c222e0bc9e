import zlib
from fractions import Fraction

import numpy as np
import pytest

from fixtures import random_change_of_basis, small_fixtures
from jtsankov.checkers import (
    ALL_PROPERTIES,
    CONSTANT_CURVATURE,
    IMPLICATIONS,
    JACOBI_SQUARE_ZERO,
    JACOBI_TSANKOV,
    ORTHOGONAL_JT,
    SKEW_TSANKOV,
    TWO_STEP_JACOBI,
    TWO_STEP_SKEW,
    constant_sectional_curvature,
    implication_audit,
    is_2step_jacobi_nilpotent,
    is_2step_skew_nilpotent,
    is_jacobi_tsankov,
    is_orthogonally_jacobi_tsankov,
    is_skew_tsankov,
    jacobi_square_zero,
    recheck,
    run_checks,
)
from jtsankov.constructions import constant_curvature, defn18_tensor, flat_factor, gauss_tensor, lemma22_tensor, lemma32_tensor
from jtsankov.curvature import jacobi
from jtsankov.errors import InternalConsistencyError
from jtsankov.exact_linalg import InnerProductSpace, as_fractions

FIXTURES = small_fixtures()


@pytest.fixture(scope="module")
def l32():
    return lemma32_tensor()


@pytest.fixture(scope="module")
def l22():
    return lemma22_tensor()


def profile(A, seed=0):
    return {v.name: v.holds for v in run_checks(A, seed=seed)}


# --------------------------------------------------------------------------
# named verdicts
# --------------------------------------------------------------------------


def test_zero_tensor_satisfies_everything():
    A = flat_factor(2, 2)
    assert all(profile(A).values())
    assert constant_sectional_curvature(A) == 0


def test_fourteen_dimensional_example(l32):
    assert is_jacobi_tsankov(l32)
    assert not is_2step_jacobi_nilpotent(l32)
    assert jacobi_square_zero(l32)
    assert constant_sectional_curvature(l32) is None


def test_clifford_example_is_square_zero_but_not_tsankov(l22):
    assert jacobi_square_zero(l22)
    verdict = is_jacobi_tsankov(l22)
    assert not verdict and verdict.witness["value"] != 0
    assert not is_2step_skew_nilpotent(l22)


@pytest.mark.parametrize("k,seed", [(2, 0), (3, 1), (4, 2)])
def test_dual_extension_is_nilpotent(k, seed):
    A = defn18_tensor(k, seed)
    p = profile(A)
    for name in (TWO_STEP_SKEW, SKEW_TSANKOV, TWO_STEP_JACOBI, JACOBI_TSANKOV, ORTHOGONAL_JT, JACOBI_SQUARE_ZERO):
        assert p[name], name


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("c", [1, -2, Fraction(5, 3)])
def test_riemannian_constant_curvature(m, c):
    A = constant_curvature(c, InnerProductSpace.diagonal(0, m))
    assert is_orthogonally_jacobi_tsankov(A)
    assert constant_sectional_curvature(A) == c
    if m >= 3:
        assert not jacobi_square_zero(A)
        assert not is_skew_tsankov(A)


def test_three_times_reference():
    assert constant_sectional_curvature(constant_curvature(3, InnerProductSpace.diagonal(1, 3))) == 3


def test_gauss_spectra():
    assert is_orthogonally_jacobi_tsankov(gauss_tensor([0, 0, 0, 5]))
    assert is_orthogonally_jacobi_tsankov(gauss_tensor([2, 2, 2]))
    failing = is_orthogonally_jacobi_tsankov(gauss_tensor([1, 2, 0, 0]))
    assert not failing
    space = InnerProductSpace.diagonal(0, 4)
    x, y = failing.witness["x"], failing.witness["y"]
    assert space.inner(x, y) == 0
    A = gauss_tensor([1, 2, 0, 0])
    Jx, Jy = jacobi(A, x), jacobi(A, y)
    assert np.any(Jx @ Jy - Jy @ Jx)


def test_run_checks_rejects_unknown_name():
    with pytest.raises(KeyError):
        run_checks(flat_factor(0, 2), names=["not-a-property"])


# --------------------------------------------------------------------------
# witnesses and certificates
# --------------------------------------------------------------------------


@pytest.mark.parametrize("name", list(FIXTURES))
def test_every_verdict_rechecks_from_scratch(name):
    A = FIXTURES[name]
    for verdict in run_checks(A):
        assert recheck(A, verdict), verdict.name
        if not verdict.holds:
            assert verdict.witness is not None and verdict.witness["kind"]
            if verdict.witness["kind"] != "not-constant":
                assert verdict.witness["value"] != 0


def test_large_fixture_witnesses_recheck(l22, l32):
    for A in (l22, l32):
        for verdict in run_checks(A):
            assert recheck(A, verdict)


@pytest.mark.parametrize("name", [n for n in FIXTURES if n.startswith(("const", "defn", "zero"))])
def test_orthogonal_certificate_is_the_exact_quotient(name):
    A = FIXTURES[name]
    verdict = is_orthogonally_jacobi_tsankov(A)
    assert verdict
    G = verdict.certificate
    rng = np.random.default_rng(1)
    for _ in range(10):
        x = as_fractions([Fraction(int(v), 2) for v in rng.integers(-6, 7, size=A.dim)])
        y = as_fractions([Fraction(int(v), 2) for v in rng.integers(-6, 7, size=A.dim)])
        Jx, Jy = jacobi(A, x), jacobi(A, y)
        assert np.array_equal(Jx @ Jy - Jy @ Jx, A.space.inner(x, y) * np.einsum("b,d,bdij->ij", x, y, G))


def test_tampered_witness_fails_recheck(l22):
    verdict = is_jacobi_tsankov(l22)
    witness = dict(verdict.witness, value=verdict.witness["value"] + 1)
    forged = type(verdict)(verdict.name, False, witness)
    assert not recheck(l22, forged)


# --------------------------------------------------------------------------
# invariance
# --------------------------------------------------------------------------


@pytest.mark.parametrize("name", list(FIXTURES))
@pytest.mark.parametrize("factor", [2, -3])
def test_verdicts_survive_scaling(name, factor):
    A = FIXTURES[name]
    scaled = A.scaled(factor)
    assert profile(scaled) == profile(A)


@pytest.mark.parametrize("name", [n for n, A in FIXTURES.items() if A.dim <= 5])
def test_verdicts_survive_change_of_basis(name):
    A = FIXTURES[name]
    base = profile(A)
    rng = np.random.default_rng(zlib.crc32(name.encode()))
    for _ in range(5):
        P = random_change_of_basis(rng, A.dim)
        assert profile(A.pullback(P)) == base


# --------------------------------------------------------------------------
# audit
# --------------------------------------------------------------------------


@pytest.mark.parametrize("name", list(FIXTURES))
def test_audit_respects_implications(name):
    verdicts = implication_audit(FIXTURES[name])
    assert [v.name for v in verdicts] == list(ALL_PROPERTIES)
    holds = {v.name: v.holds for v in verdicts}
    for premise, conclusion in IMPLICATIONS:
        assert not holds[premise] or holds[conclusion]


def test_audit_profiles_of_named_examples(l22, l32):
    p32 = {v.name: v.holds for v in implication_audit(l32)}
    assert p32[JACOBI_TSANKOV] and not p32[TWO_STEP_JACOBI]
    p22 = {v.name: v.holds for v in implication_audit(l22)}
    assert p22[JACOBI_SQUARE_ZERO] and not p22[JACOBI_TSANKOV]
    assert not p22[CONSTANT_CURVATURE]


def test_audit_flags_impossible_profiles(monkeypatch):
    from jtsankov import checkers

    def broken(A):
        return checkers.PropertyVerdict(JACOBI_TSANKOV, False, {"kind": "commutator"})

    monkeypatch.setitem(checkers.CHECKERS, JACOBI_TSANKOV, broken)
    with pytest.raises(InternalConsistencyError):
        implication_audit(defn18_tensor(2, 0))


def test_nonzero_tsankov_in_riemannian_signature_is_a_bug(monkeypatch):
    from jtsankov import checkers

    def lenient(A):
        return checkers.PropertyVerdict(JACOBI_TSANKOV, True)

    monkeypatch.setitem(checkers.CHECKERS, JACOBI_TSANKOV, lenient)
    A = constant_curvature(1, InnerProductSpace.diagonal(0, 3))
    with pytest.raises(InternalConsistencyError):
        implication_audit(A)


def test_seed_only_moves_the_orthogonal_witness():
    A = gauss_tensor([1, 2, 0])
    for seed in (0, 1, 7):
        p = profile(A, seed=seed)
        assert p == profile(A)
        verdict = is_orthogonally_jacobi_tsankov(A, seed=seed)
        assert recheck(A, verdict)
