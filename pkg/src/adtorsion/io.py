"""JSON file formats for cell systems, representations and homology bases.

Complex numbers are written as ``[re, im]`` pairs.  Words are lists of
``[generator, exponent]`` pairs and group-ring entries are lists of
``[coefficient, word]`` terms.  Homology bases are stored per degree as a
list of columns.
"""

from __future__ import annotations

import json

import numpy as np

from .cellsys import CellSystem
from .errors import ParseError, ValidationError
from .liealg import Representation
from .linalg import DEFAULT_TOL, Tolerance


def _word_out(w):
    return [[g, e] for g, e in w]


def _word_in(w):
    return tuple((int(g), int(e)) for g, e in w)


def cellsystem_to_dict(cs: CellSystem) -> dict:
    return {
        "dim": cs.dim,
        "alphabet_size": cs.alphabet_size,
        "cells": list(cs.cells),
        "relators": [_word_out(w) for w in cs.relators],
        "boundaries": [
            [[[[c, _word_out(w)] for c, w in e] for e in row] for row in m] for m in cs.boundaries
        ],
        "marks": {name: [[q, i] for q, i in ids] for name, ids in cs.marks.items()},
    }


def cellsystem_from_dict(data: dict) -> CellSystem:
    try:
        bds = [
            [[[(int(c), _word_in(w)) for c, w in e] for e in row] for row in m]
            for m in data["boundaries"]
        ]
        return CellSystem(
            int(data["dim"]),
            int(data["alphabet_size"]),
            tuple(int(c) for c in data["cells"]),
            bds,
            tuple(_word_in(w) for w in data.get("relators", [])),
            {k: [(int(q), int(i)) for q, i in v] for k, v in data.get("marks", {}).items()},
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad cell system: {exc!r}") from None


def _c_out(z):
    z = complex(z)
    return [z.real, z.imag]


def _c_in(pair):
    if isinstance(pair, (int, float)):
        return complex(pair)
    re, im = pair
    return complex(float(re), float(im))


def representation_to_dict(rep: Representation) -> dict:
    return {
        "n": rep.n,
        "alphabet_size": rep.alphabet_size,
        "images": [[[_c_out(z) for z in row] for row in m] for m in rep.images],
    }


def representation_from_dict(data: dict, tol: Tolerance = DEFAULT_TOL) -> Representation:
    try:
        n = int(data["n"])
        images = [np.array([[_c_in(z) for z in row] for row in m], dtype=complex).reshape(n, n) for m in data["images"]]
        if "alphabet_size" in data and int(data["alphabet_size"]) != len(images):
            raise ParseError(f"alphabet_size {data['alphabet_size']} but {len(images)} images")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad representation: {exc!r}") from None
    return Representation(n, tuple(images), tol)


def bases_to_dict(bases) -> dict:
    return {"bases": [[[_c_out(z) for z in col] for col in np.asarray(m).T] for m in bases]}


def bases_from_dict(data: dict, dims) -> list:
    """Read per-degree column lists; ``dims`` gives the chain group dimensions."""
    try:
        raw = data["bases"]
        out = []
        for p, n in enumerate(dims):
            cols = raw[p] if p < len(raw) else []
            m = np.zeros((n, len(cols)), dtype=complex)
            for j, col in enumerate(cols):
                if len(col) != n:
                    raise ParseError(f"degree {p} column {j} has length {len(col)}, expected {n}")
                m[:, j] = [_c_in(z) for z in col]
            out.append(m)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad bases file: {exc!r}") from None
    return out


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def dumps(data) -> str:
    return json.dumps(data, indent=1)
