"""JSON tensor and metric files.

Tensor file::

    {"dim": 4,
     "gram": [["1", "0", ...], ...],
     "components": [{"i": 0, "j": 1, "k": 1, "l": 0, "value": "1"}, ...],
     "mode": "verbatim"}            # optional; default "generate"

In ``generate`` mode each record fixes a whole symmetry orbit; in
``verbatim`` mode records are installed as given and unlisted entries are
zero. Exports always use ``generate`` mode with one record per nonzero orbit,
keyed by the lexicographically least index, so serialization is canonical.

Metric file::

    {"p": 2, "psi": [{"i": 0, "j": 0, "poly": [{"exponents": [0, 2], "coeff": "1"}]}]}
    {"dim": 2, "gram_polys": [{"i": ..., "j": ..., "poly": [...]}, ...]}

Unlisted metric entries are zero; an ``(i, j)`` record also fills ``(j, i)``
unless that entry is listed separately, in which case both must agree.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .curvature import CurvatureTensor, tensor_from_components
from .errors import FormatError, SymmetryError
from .exact_linalg import InnerProductSpace, format_rational, parse_rational
from .metric import MultivariatePolynomial, PolynomialMetric, psi_metric


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _require(doc: dict, key: str, kind, source: str):
    if not isinstance(doc, dict):
        raise FormatError(f"{source}: top level must be an object")
    if key not in doc:
        raise FormatError(f"{source}: missing field '{key}'")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise FormatError(f"{source}: field '{key}' has the wrong type ({type(value).__name__})")
    return value


def _rational(value, where: str):
    try:
        return parse_rational(value)
    except FormatError as exc:
        raise FormatError(f"{where}: {exc}") from None


def _index(record: dict, key: str, bound: int, where: str) -> int:
    if key not in record:
        raise FormatError(f"{where}: missing field '{key}'")
    value = record[key]
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < bound:
        raise FormatError(f"{where}.{key}: index {value!r} outside 0..{bound - 1}")
    return value


# --------------------------------------------------------------------------
# tensors
# --------------------------------------------------------------------------


def parse_tensor(text: str, source: str = "<tensor>") -> CurvatureTensor:
    doc = _load_json(text, source)
    dim = _require(doc, "dim", int, source)
    if dim < 1:
        raise FormatError(f"{source}: dim must be positive")
    gram = _require(doc, "gram", list, source)
    if len(gram) == dim * dim and all(not isinstance(v, list) for v in gram):
        gram = [gram[r * dim : (r + 1) * dim] for r in range(dim)]
    if len(gram) != dim or any(not isinstance(row, list) or len(row) != dim for row in gram):
        raise FormatError(f"{source}: gram must be {dim} rows of {dim} entries")
    gram = [[_rational(v, f"{source}: gram[{r}][{c}]") for c, v in enumerate(row)] for r, row in enumerate(gram)]
    mode = doc.get("mode", "generate")
    if mode not in ("generate", "verbatim"):
        raise FormatError(f"{source}: field 'mode' must be 'generate' or 'verbatim', got {mode!r}")
    records = _require(doc, "components", list, source)
    entries = []
    for n, rec in enumerate(records):
        where = f"{source}: components[{n}]"
        if not isinstance(rec, dict):
            raise FormatError(f"{where}: expected an object")
        idx = tuple(_index(rec, key, dim, where) for key in "ijkl")
        if "value" not in rec:
            raise FormatError(f"{where}: missing field 'value'")
        entries.append((*idx, _rational(rec["value"], f"{where}.value")))
    unknown = sorted(set(doc) - {"dim", "gram", "components", "mode"})
    if unknown:
        raise FormatError(f"{source}: unknown field(s) {', '.join(unknown)}")
    space = InnerProductSpace(gram)
    return tensor_from_components(space, entries, mode=mode)


def tensor_document(A: CurvatureTensor) -> dict:
    return {
        "dim": A.dim,
        "gram": [[format_rational(v) for v in row] for row in A.space.gram],
        "components": [
            {"i": i, "j": j, "k": k, "l": l, "value": format_rational(value)}
            for (i, j, k, l), value in A.nonzero_orbits()
        ],
    }


def serialize_tensor(A: CurvatureTensor) -> str:
    return canonical_json(tensor_document(A))


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def read_tensor(path) -> CurvatureTensor:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_tensor(text, str(path))


def write_tensor(A: CurvatureTensor, path) -> str:
    text = serialize_tensor(A)
    Path(path).write_text(text, encoding="utf-8")
    return text


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------


def _poly_grid(records: list, n: int, nvars: int, source: str, field_name: str):
    grid: dict[tuple[int, int], MultivariatePolynomial] = {}
    for count, rec in enumerate(records):
        where = f"{source}: {field_name}[{count}]"
        if not isinstance(rec, dict):
            raise FormatError(f"{where}: expected an object")
        i, j = _index(rec, "i", n, where), _index(rec, "j", n, where)
        if not isinstance(rec.get("poly"), list):
            raise FormatError(f"{where}: field 'poly' must be a list of terms")
        try:
            poly = MultivariatePolynomial.from_records(nvars, rec["poly"])
        except FormatError as exc:
            raise FormatError(f"{where}.poly: {exc}") from None
        if (i, j) in grid:
            raise FormatError(f"{where}: entry ({i},{j}) listed twice")
        grid[(i, j)] = poly
    full = [[MultivariatePolynomial.zero(nvars)] * n for _ in range(n)]
    for (i, j), poly in grid.items():
        other = grid.get((j, i))
        if other is not None and other != poly:
            raise SymmetryError(f"{source}: entries ({i},{j}) and ({j},{i}) differ")
        full[i][j] = full[j][i] = poly
    return full


def parse_metric(text: str, source: str = "<metric>") -> PolynomialMetric:
    doc = _load_json(text, source)
    if isinstance(doc, dict) and "p" in doc:
        p = _require(doc, "p", int, source)
        if p < 2:
            raise FormatError(f"{source}: p must be at least 2")
        psi = _poly_grid(_require(doc, "psi", list, source), p, p, source, "psi")
        return psi_metric(p, psi)
    n = _require(doc, "dim", int, source)
    if n < 1:
        raise FormatError(f"{source}: dim must be positive")
    grid = _poly_grid(_require(doc, "gram_polys", list, source), n, n, source, "gram_polys")
    return PolynomialMetric(tuple(tuple(row) for row in grid))


def read_metric(path) -> PolynomialMetric:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_metric(text, str(path))


def psi_document(p: int, psi) -> dict:
    records = []
    for i in range(p):
        for j in range(i, p):
            if not psi[i][j].is_zero():
                records.append({"i": i, "j": j, "poly": psi[i][j].to_records()})
    return {"p": p, "psi": records}


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


__all__ = [
    "canonical_json",
    "digest",
    "parse_metric",
    "parse_tensor",
    "psi_document",
    "read_metric",
    "read_tensor",
    "serialize_tensor",
    "tensor_document",
    "write_tensor",
]
