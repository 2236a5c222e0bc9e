"""Named examples addressable by identifier, each with its expected profile.

Identifiers:

* ``lemma-2.2``: the 8-dimensional Clifford tensor with ``J(x)^2 = 0`` that is
  not Jacobi-Tsankov;
* ``lemma-3.2``: the 14-dimensional Jacobi-Tsankov tensor that is not 2-step
  nilpotent;
* ``defn-1.8:k=<n>:seed=<s>``: hyperbolic dual extension of a random ``A_W``;
* ``const-curv:c=<a/b>:sig=<p>,<q>``: ``c`` times the reference tensor;
* ``gauss:spectrum=<l1>,<l2>,...``: Gauss-equation tensor of a diagonal
  shape operator on Euclidean space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .checkers import (
    CONSTANT_CURVATURE,
    JACOBI_SQUARE_ZERO,
    JACOBI_TSANKOV,
    ORTHOGONAL_JT,
    SKEW_TSANKOV,
    TWO_STEP_JACOBI,
    TWO_STEP_SKEW,
)
from .constructions import (
    clifford_family_44,
    constant_curvature,
    defn18_tensor,
    gauss_tensor,
    lemma22_phis,
    lemma22_tensor,
    lemma22_witness,
    lemma32_tensor,
)
from .curvature import CurvatureTensor
from .errors import FormatError
from .exact_linalg import InnerProductSpace, Signature, is_zero, parse_rational

NILPOTENT_PROFILE = {
    TWO_STEP_JACOBI: True,
    JACOBI_TSANKOV: True,
    JACOBI_SQUARE_ZERO: True,
    ORTHOGONAL_JT: True,
    SKEW_TSANKOV: True,
    TWO_STEP_SKEW: True,
}


@dataclass(frozen=True)
class ExtraCheck:
    label: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True, eq=False)
class Example:
    identifier: str
    tensor: CurvatureTensor
    expected: dict[str, bool]
    signature: Signature | None = None
    constant: Fraction | None = None
    extras: Callable[[CurvatureTensor], list[ExtraCheck]] | None = field(default=None, repr=False)

    def extra_checks(self) -> list[ExtraCheck]:
        return self.extras(self.tensor) if self.extras else []


class UnknownExampleError(FormatError):
    pass


# --------------------------------------------------------------------------
# per-example extra checks
# --------------------------------------------------------------------------


def _lemma22_extras(A: CurvatureTensor) -> list[ExtraCheck]:
    out = [ExtraCheck(f"clifford {name}", ok) for name, ok in clifford_family_44().relations().items()]
    phi1, phi2 = (p.matrix for p in lemma22_phis())
    out += [
        ExtraCheck("phi1 phi2 != 0", not is_zero(phi1 @ phi2)),
        ExtraCheck("phi1^2 = 0", is_zero(phi1 @ phi1)),
        ExtraCheck("phi2^2 = 0", is_zero(phi2 @ phi2)),
        ExtraCheck("phi1 phi2 + phi2 phi1 = 0", is_zero(phi1 @ phi2 + phi2 @ phi1)),
    ]
    x1, x2, y = lemma22_witness()
    J1, J2 = A.jacobi_table.jacobi(x1), A.jacobi_table.jacobi(x2)
    forward, backward = J1 @ J2 @ y, J2 @ J1 @ y
    out.append(
        ExtraCheck(
            "J(x1)J(x2)y != 0 = J(x2)J(x1)y",
            not is_zero(forward) and is_zero(backward),
            f"x1={_vec(x1)} x2={_vec(x2)} y={_vec(y)}",
        )
    )
    return out


def _defn18_extras(k: int) -> Callable[[CurvatureTensor], list[ExtraCheck]]:
    def run(A: CurvatureTensor) -> list[ExtraCheck]:
        from .structure import decompose_2step, reassemble

        result = decompose_2step(A)
        rebuilt = reassemble(result, result.t_gram(A.space))
        return [
            ExtraCheck("dim W recovered", result.k == k, f"dim W = {result.k}"),
            ExtraCheck("dim T = 0", result.flat_dim == 0, f"dim T = {result.flat_dim}"),
            ExtraCheck("invariants re-verified", not result.check(A)),
            ExtraCheck("reassembly matches under certificate", rebuilt == A.pullback(result.certificate)),
        ]

    return run


def _vec(v) -> str:
    return "[" + ", ".join(str(Fraction(c)) for c in v) + "]"


# --------------------------------------------------------------------------
# identifier parsing
# --------------------------------------------------------------------------

_FIELD = re.compile(r"^([a-z]+)=(.+)$")


def _fields(identifier: str, parts: list[str], required: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for part in parts:
        m = _FIELD.match(part)
        if not m:
            raise UnknownExampleError(f"malformed field {part!r} in {identifier!r}")
        out[m.group(1)] = m.group(2)
    missing = [r for r in required if r not in out]
    extra = [k for k in out if k not in required]
    if missing or extra:
        raise UnknownExampleError(
            f"{identifier!r}: expected fields {', '.join(required)}; missing {missing or 'none'}, unexpected {extra or 'none'}"
        )
    return out


def _int(identifier: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UnknownExampleError(f"{identifier!r}: {text!r} is not an integer") from None


def _rationals(identifier: str, text: str) -> list[Fraction]:
    try:
        return [parse_rational(t) for t in text.split(",")]
    except ValueError as exc:
        raise UnknownExampleError(f"{identifier!r}: {exc}") from None


def gauss_expectation(spectrum) -> bool:
    """Orthogonal Jacobi-Tsankov iff the spectrum is constant or has a single nonzero entry."""
    spectrum = list(spectrum)
    nonzero = sum(1 for v in spectrum if v)
    return len(spectrum) <= 2 or len(set(spectrum)) == 1 or nonzero <= 1


def build_example(identifier: str) -> Example:
    head, *parts = identifier.strip().split(":")
    if head == "lemma-3.2" and not parts:
        return Example(
            identifier,
            lemma32_tensor(),
            {JACOBI_TSANKOV: True, TWO_STEP_JACOBI: False, JACOBI_SQUARE_ZERO: True, ORTHOGONAL_JT: True},
            signature=Signature(8, 6, 0),
        )
    if head == "lemma-2.2" and not parts:
        return Example(
            identifier,
            lemma22_tensor(),
            {JACOBI_SQUARE_ZERO: True, JACOBI_TSANKOV: False, TWO_STEP_JACOBI: False},
            signature=Signature(4, 4, 0),
            extras=_lemma22_extras,
        )
    if head == "defn-1.8":
        f = _fields(identifier, parts, ("k", "seed"))
        k, seed = _int(identifier, f["k"]), _int(identifier, f["seed"])
        if k < 2:
            raise UnknownExampleError(f"{identifier!r}: k must be at least 2")
        return Example(
            identifier,
            defn18_tensor(k, seed),
            dict(NILPOTENT_PROFILE),
            signature=Signature(k, k, 0),
            extras=_defn18_extras(k),
        )
    if head == "const-curv":
        f = _fields(identifier, parts, ("c", "sig"))
        (c,) = _rationals(identifier, f["c"])
        sig = [_int(identifier, s) for s in f["sig"].split(",")]
        if len(sig) != 2 or min(sig) < 0 or sum(sig) < 2:
            raise UnknownExampleError(f"{identifier!r}: sig must be p,q with p+q >= 2")
        p, q = sig
        nonflat = c != 0
        return Example(
            identifier,
            constant_curvature(c, InnerProductSpace.diagonal(p, q)),
            {
                ORTHOGONAL_JT: True,
                JACOBI_TSANKOV: not nonflat,
                TWO_STEP_JACOBI: not nonflat,
                JACOBI_SQUARE_ZERO: not nonflat,
                CONSTANT_CURVATURE: True,
            },
            signature=Signature(p, q, 0),
            constant=c,
        )
    if head == "gauss":
        f = _fields(identifier, parts, ("spectrum",))
        spectrum = _rationals(identifier, f["spectrum"])
        if len(spectrum) < 2:
            raise UnknownExampleError(f"{identifier!r}: spectrum needs at least two eigenvalues")
        return Example(
            identifier,
            gauss_tensor(spectrum),
            {ORTHOGONAL_JT: gauss_expectation(spectrum)},
            signature=Signature(0, len(spectrum), 0),
        )
    raise UnknownExampleError(f"unknown example identifier {identifier!r}")


def profile_mismatches(example: Example, verdicts) -> list[str]:
    by_name = {v.name: v.holds for v in verdicts}
    problems = [
        f"{name}: expected {'holds' if want else 'fails'}, got {'holds' if by_name[name] else 'fails'}"
        for name, want in example.expected.items()
        if by_name.get(name) != want
    ]
    if example.signature is not None and example.tensor.space.signature != example.signature:
        problems.append(f"signature: expected {tuple(example.signature)}, got {tuple(example.tensor.space.signature)}")
    if example.constant is not None:
        from .checkers import constant_sectional_curvature

        got = constant_sectional_curvature(example.tensor)
        if got != example.constant:
            problems.append(f"constant curvature: expected {example.constant}, got {got}")
    return problems


def corpus_identifiers(seeds: int = 5) -> list[str]:
    """Identifiers of the standard fixture corpus (excluding random and zero tensors)."""
    ids = ["lemma-2.2", "lemma-3.2"]
    ids += [f"defn-1.8:k={k}:seed={s}" for k in (2, 3, 4) for s in range(seeds)]
    ids += [f"const-curv:c={c}:sig={p},{q}" for c in ("1", "-2", "5/3", "0") for p, q in ((0, 3), (0, 4), (1, 2), (2, 2))]
    for m in (3, 4, 5):
        ids += [
            "gauss:spectrum=" + ",".join(["2"] * m),
            "gauss:spectrum=" + ",".join(["0"] * (m - 1) + ["3"]),
            "gauss:spectrum=" + ",".join(["1", "2"] + ["0"] * (m - 2)),
        ]
    return ids
