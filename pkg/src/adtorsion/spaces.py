"""Built-in cell models.

Every model keeps its basepoint as 0-cell 0.  Models meant for gluing carry
a mark ``"disk"``: a bigon ``v, w, c, c', f`` with ``dc = dc' = w - v`` and
``df = c' - c``, created from the basepoint by two elementary expansions.
Solid tori and punctured closed manifolds are represented by spines plus
such a disk; torsion only sees the simple homotopy type.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .cellsys import (
    ONE,
    ZERO,
    CellSystem,
    elementary_expand,
    gr,
    gr_neg,
    power,
    remove_top_cell,
    union_along,
)
from .errors import BadIdentification, BadParams, NoThreeCell, UnknownRecipe


def point() -> CellSystem:
    return CellSystem(0, 0, (1,), (), (), {"base": [(0, 0)]})


def circle() -> CellSystem:
    """One vertex v, one edge e with d e = (t - 1) v."""
    return CellSystem(1, 1, (1, 1), [[[gr([(1, ((0, 1),)), (-1, ())])]]], (), {"base": [(0, 0)]})


def wedge(k: int = 2) -> CellSystem:
    if k < 1:
        raise BadParams("a wedge needs at least one circle")
    row = [gr([(1, ((g, 1),)), (-1, ())]) for g in range(k)]
    return CellSystem(1, k, (1, k), [[row]], (), {"base": [(0, 0)]})


def add_marked_disk(cs: CellSystem, vertex: int = 0, name: str = "disk") -> CellSystem:
    """Attach a bigon at ``vertex`` by two elementary expansions and mark it."""
    v = vertex
    w = cs.count(0)
    attach0 = [gr_neg(ONE) if i == v else ZERO for i in range(cs.count(0))]
    cs = elementary_expand(cs, 0, attach0)
    c = cs.count(1) - 1
    attach1 = [gr_neg(ONE) if j == c else ZERO for j in range(cs.count(1))]
    cs = elementary_expand(cs, 1, attach1)
    c2 = cs.count(1) - 1
    f = cs.count(2) - 1
    marks = dict(cs.marks)
    marks[name] = [(0, v), (0, w), (1, c), (1, c2), (2, f)]
    return cs.with_marks(marks)


def disk() -> CellSystem:
    return add_marked_disk(point())


def sphere2() -> CellSystem:
    """Two vertices, two edges v0 -> v1 and two faces glued along them."""
    e = ONE
    d1 = [[gr_neg(e), gr_neg(e)], [e, e]]
    d2 = [[e, gr_neg(e)], [gr_neg(e), e]]
    return CellSystem(2, 0, (2, 2, 2), [d1, d2], (), {"base": [(0, 0)]})


def sphere3() -> CellSystem:
    """S^3 as one 0-cell and one 3-cell."""
    return CellSystem(3, 0, (1, 0, 0, 1), [[[]], [], []], (), {"base": [(0, 0)]})


def solid_torus() -> CellSystem:
    return add_marked_disk(circle())


def inverse_mod(q: int, p: int) -> int:
    return pow(q, -1, p)


def lens(p: int, q: int) -> CellSystem:
    """L(p, q): one cell per dimension, relator t^p.

    d1 = t - 1, d2 = 1 + t + ... + t^(p-1), d3 = t^qbar - 1 with
    q * qbar = 1 mod p.
    """
    if p < 2 or gcd(p, q) != 1:
        raise BadParams(f"lens({p}, {q}) needs p >= 2 and gcd(p, q) = 1")
    qbar = inverse_mod(q % p, p)
    d1 = [[gr([(1, power(0, 1)), (-1, ())])]]
    d2 = [[gr([(1, power(0, k)) for k in range(p)])]]
    d3 = [[gr([(1, power(0, qbar)), (-1, ())])]]
    return CellSystem(3, 1, (1, 1, 1, 1), [d1, d2, d3], (power(0, p),), {"base": [(0, 0)]})


def torus2() -> CellSystem:
    """T^2 with relator a b a^-1 b^-1; needs commuting images."""
    a, b = (0, 1), (1, 1)
    d1 = [[gr([(1, (a,)), (-1, ())]), gr([(1, (b,)), (-1, ())])]]
    # right Fox derivatives of a b a^-1 b^-1
    da = gr([(1, ((1, 1), (0, -1), (1, -1))), (-1, ((0, -1), (1, -1)))])
    db = gr([(1, ((0, -1), (1, -1))), (-1, ((1, -1),))])
    d2 = [[da], [db]]
    return CellSystem(2, 2, (1, 2, 1), [d1, d2], ((a, b, (0, -1), (1, -1)),), {"base": [(0, 0)]})


def puncture(n: CellSystem, index: int = 0) -> CellSystem:
    """N* : delete the 3-cell ``index`` and add a marked boundary disk at the basepoint."""
    if n.dim != 3 or n.count(3) == 0:
        raise NoThreeCell("puncturing needs a 3-cell")
    return add_marked_disk(remove_top_cell(n, index))


def disk_sum(m: CellSystem, nstar: CellSystem, mark: str = "disk"):
    """M glued to N* along their marked disks; returns ``(X, Inclusions)``."""
    for cs, label in ((m, "first"), (nstar, "second")):
        if mark not in cs.marks:
            raise BadIdentification(f"{label} summand has no marked disk {mark!r}")
    return union_along(m, nstar, mark, mark)


def connected_sum(m: CellSystem, n: CellSystem, mark: str = "disk"):
    """M # N realized as M glued to N* along a disk.

    M must carry a marked boundary disk; that the boundary of M is not a
    sphere is assumed, not checked.
    """
    if mark not in m.marks:
        raise BadIdentification(f"M has no marked disk {mark!r}")
    return disk_sum(m, puncture(n), mark)


def disk_standard_basis(cs: CellSystem, d: int, mark: str = "disk") -> list:
    """Degree-0 basis: the d coordinate vectors on the disk's basepoint block.

    These are the image of the geometric basis of a point under the
    inclusion of the basepoint, projected to H_0.  Other degrees are empty.
    """
    ids = cs.marks[mark] if mark in cs.marks else [(0, 0)]
    v = next(i for q, i in ids if q == 0)
    out = [np.zeros((d * cs.count(p), 0), dtype=complex) for p in range(cs.dim + 1)]
    h0 = np.zeros((d * cs.count(0), d), dtype=complex)
    h0[d * v:d * (v + 1), :] = np.eye(d)
    out[0] = h0
    return out


@dataclass(frozen=True)
class SpaceRecipe:
    name: str
    params: tuple = ()


_RECIPES = {
    "point": (point, 0),
    "circle": (circle, 0),
    "wedge": (wedge, 1),
    "disk": (disk, 0),
    "sphere2": (sphere2, 0),
    "sphere3": (sphere3, 0),
    "solid_torus": (solid_torus, 0),
    "lens": (lens, 2),
    "torus2": (torus2, 0),
}

RECIPE_NAMES = tuple(_RECIPES)


def recipe_arity(name: str) -> int:
    if name not in _RECIPES:
        raise UnknownRecipe(f"unknown recipe {name!r}; known: {', '.join(RECIPE_NAMES)}")
    return _RECIPES[name][1]


def make_space(recipe) -> CellSystem:
    if isinstance(recipe, str):
        recipe = SpaceRecipe(recipe)
    fn, arity = _RECIPES.get(recipe.name, (None, None))
    if fn is None:
        raise UnknownRecipe(f"unknown recipe {recipe.name!r}; known: {', '.join(RECIPE_NAMES)}")
    if len(recipe.params) != arity:
        raise BadParams(f"{recipe.name} takes {arity} parameters, got {len(recipe.params)}")
    return fn(*(int(x) for x in recipe.params))
