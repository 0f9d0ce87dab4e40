"""JSON file formats for forms and Gram matrices.

Form files:
    {"n": 2, "d": 4, "basis": "rescaled" | "monomial",
     "terms": [{"alpha": [4, 0], "coeff": 1.0}, ...]}
Exponent vectors absent from "terms" are zero; monomial-basis files are
converted to the rescaled basis on load.

Gram files:
    {"n": 2, "d": 4, "order": "graded-lex", "rows": [[...], ...]}
The multi-index order is pinned to the package's canonical graded-lex
order; symmetry is validated on load.
"""

from __future__ import annotations

import json

import numpy as np

from .forms import Form, monomial_from_rescaled, multi_index_table, \
    rescaled_from_monomial
from .sos import GramMatrix

__all__ = ["form_to_dict", "form_from_dict", "load_form", "save_form",
           "gram_to_dict", "gram_from_dict", "load_gram", "save_gram"]

_ORDER = "graded-lex"


def form_to_dict(f: Form, basis: str = "rescaled") -> dict:
    if basis == "rescaled":
        coeffs = f.coeffs
    elif basis == "monomial":
        coeffs = monomial_from_rescaled(f)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    table = f.table
    terms = [{"alpha": list(map(int, table.indices[i])), "coeff": float(c)}
             for i, c in enumerate(coeffs) if c != 0.0]
    return {"n": f.n, "d": f.d, "basis": basis, "terms": terms}


def form_from_dict(obj: dict) -> Form:
    try:
        n, d, basis = int(obj["n"]), int(obj["d"]), obj["basis"]
        terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed form object: {exc}") from exc
    if basis not in ("rescaled", "monomial"):
        raise ValueError(f"unknown basis {basis!r}")
    table = multi_index_table(n, d)
    coeffs = np.zeros(table.size)
    for term in terms:
        alpha = tuple(int(a) for a in term["alpha"])
        if len(alpha) != n or sum(alpha) != d or min(alpha, default=0) < 0:
            raise ValueError(f"exponent vector {alpha} does not have degree {d}")
        coeffs[table.index_of(alpha)] += float(term["coeff"])
    if basis == "monomial":
        return rescaled_from_monomial(n, d, coeffs)
    return Form(n, d, coeffs)


def gram_to_dict(G: GramMatrix) -> dict:
    return {"n": G.n, "d": G.d, "order": _ORDER,
            "rows": [[float(x) for x in row] for row in G.entries]}


def gram_from_dict(obj: dict) -> GramMatrix:
    try:
        n, d = int(obj["n"]), int(obj["d"])
        order = obj.get("order", _ORDER)
        rows = obj["rows"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed Gram object: {exc}") from exc
    if order != _ORDER:
        raise ValueError(f"unsupported multi-index order {order!r}")
    return GramMatrix(n, d, np.array(rows, dtype=float))


def load_form(path) -> Form:
    with open(path) as fh:
        return form_from_dict(json.load(fh))


def save_form(f: Form, path, basis: str = "rescaled") -> None:
    with open(path, "w") as fh:
        json.dump(form_to_dict(f, basis), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_gram(path) -> GramMatrix:
    with open(path) as fh:
        return gram_from_dict(json.load(fh))


def save_gram(G: GramMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(gram_to_dict(G), fh, indent=2, sort_keys=True)
        fh.write("\n")
