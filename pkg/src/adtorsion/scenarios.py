"""Random complexes, representations and the gluing scenarios.

Also the coordinate changes that transport homology bases along the
operations torsion is invariant under.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cellsys import CellSystem, elementary_expand, gr, relift, union_along
from .errors import BadParams, ValidationError
from .liealg import KILLING_SCALE, Representation, adjoint_matrix, random_sl, root_of_unity_image
from .linalg import DEFAULT_TOL, Tolerance, eq_up_to_sign
from .spaces import SpaceRecipe, circle, connected_sum, disk_standard_basis, disk_sum, make_space, solid_torus
from .torsion import MVBases, default_bases, mv_problem, normalize_bases_via_mv, randomize_bases, verify_multiplicativity

MAX_CELLS = 6


def random_word(rng, alphabet: int, max_len: int = 2) -> tuple:
    if alphabet == 0:
        return ()
    n = int(rng.integers(0, max_len + 1))
    return tuple((int(rng.integers(alphabet)), int(rng.choice([-1, 1]))) for _ in range(n))


def random_element(rng, alphabet: int, density: float = 0.5) -> tuple:
    if rng.random() > density:
        return ()
    terms = [(int(rng.choice([-2, -1, 1, 2])), random_word(rng, alphabet)) for _ in range(int(rng.integers(1, 3)))]
    return gr(terms)


def commuting_pair(rng) -> tuple:
    p = random_sl(2, rng)
    pinv = np.linalg.inv(p)
    a, b = (rng.normal(size=2) + 1j * rng.normal(size=2))
    a, b = np.exp(0.5 * a), np.exp(0.5 * b)
    return p @ np.diag([a, 1 / a]) @ pinv, p @ np.diag([b, 1 / b]) @ pinv


def random_rep(cs_kind: str, rng, params=()) -> Representation:
    if cs_kind in ("circle", "solid_torus"):
        return Representation(2, (random_sl(2, rng),))
    if cs_kind == "wedge":
        return Representation(2, tuple(random_sl(2, rng) for _ in range(params[0])))
    if cs_kind == "torus2":
        return Representation(2, commuting_pair(rng))
    if cs_kind == "lens":
        p = params[0]
        u = random_sl(2, rng)
        return Representation(2, (u @ root_of_unity_image(p) @ np.linalg.inv(u),))
    return Representation(2, ())


def random_cell_system(rng, max_dim: int = 3):
    """A random valid complex (dim <= 3, <= 6 cells per degree) with a representation.

    A base model is grown by random elementary expansions with random
    attaching data and then some cells are relifted by random words.
    """
    kind = str(rng.choice(["point", "circle", "wedge", "torus2", "lens"]))
    params: tuple = ()
    if kind == "wedge":
        params = (int(rng.integers(2, 4)),)
    elif kind == "lens":
        p = int(rng.integers(3, 6))
        q = int(rng.choice([q for q in range(1, p) if np.gcd(q, p) == 1]))
        params = (p, q)
    cs = make_space(SpaceRecipe(kind, params))
    rep = random_rep(kind, rng, params)
    for _ in range(int(rng.integers(1, 5))):
        p = int(rng.integers(0, min(cs.dim, max_dim - 1) + 1))
        if cs.count(p) + 1 > MAX_CELLS or cs.count(p + 1) + 1 > MAX_CELLS:
            continue
        attach = [random_element(rng, cs.alphabet_size) for _ in range(cs.count(p))]
        cs = elementary_expand(cs, p, attach)
    for _ in range(int(rng.integers(0, 3))):
        p = int(rng.integers(0, cs.dim + 1))
        if cs.count(p):
            cs = relift(cs, p, int(rng.integers(cs.count(p))), random_word(rng, cs.alphabet_size))
    return cs, rep


# ------------------------------------------------------ basis transport


def pad_after_expand(h, p: int, d: int) -> list:
    """Transport bases along an expansion at degree p (new cells are last)."""
    out = [np.array(m) for m in h]
    for q in (p, p + 1):
        if q < len(out):
            out[q] = np.vstack([out[q], np.zeros((d, out[q].shape[1]))])
        else:
            out.append(np.zeros((d, 0), dtype=complex))
    return out


def blockdiag_apply(h, mats_per_degree) -> list:
    return [m @ hp for m, hp in zip(mats_per_degree, h)]


def conjugation_coords(cs: CellSystem, u, basis) -> list:
    """Coordinate change induced by conjugating the representation by u."""
    ad_u = adjoint_matrix(u, np.stack(basis))
    return [np.kron(np.eye(cs.count(p)), ad_u) for p in range(cs.dim + 1)]


def lie_basis_coords(cs: CellSystem, old_basis, new_basis) -> list:
    """Coordinate change between two B-orthonormal bases of sl_n."""
    t = np.array([[KILLING_SCALE * np.trace(a @ b) for b in new_basis] for a in old_basis])
    return [np.kron(np.eye(cs.count(p)), t.T) for p in range(cs.dim + 1)]


def relift_coords(cs: CellSystem, rep: Representation, basis, p: int, j: int, word) -> list:
    """Transport for ``relift(cs, p, j, word)``: block j of degree p gets Ad(word)^-1."""
    out = [np.eye(len(basis) * cs.count(q), dtype=complex) for q in range(cs.dim + 1)]
    d = len(basis)
    ad = adjoint_matrix(rep.evaluate(word), np.stack(basis))
    out[p][d * j:d * (j + 1), d * j:d * (j + 1)] = np.linalg.inv(ad)
    return out


# ------------------------------------------------------------ scenarios


def mv_scenario(name: str, rng):
    """``wedge``: two circles glued at a point; ``disk-sum``: two solid tori along a disk."""
    if name == "wedge":
        x, inc = union_along(circle(), circle(), "base")
    elif name == "disk-sum":
        x, inc = disk_sum(solid_torus(), solid_torus())
    else:
        raise BadParams(f"unknown Mayer-Vietoris scenario {name!r}")
    rep = Representation(2, tuple(random_sl(2, rng) for _ in range(x.alphabet_size)))
    return x, inc, rep


def rep_for_recipe(recipe: SpaceRecipe, rng, root_power: int = 1) -> Representation:
    """Generic SL_2 images, except lens spaces get diag(z, 1/z) with z = exp(2 pi i k / p)."""
    cs = make_space(recipe)
    if recipe.name == "lens":
        return Representation(2, (root_of_unity_image(int(recipe.params[0]), root_power),))
    if recipe.name == "torus2":
        return Representation(2, commuting_pair(rng))
    if cs.relators:
        raise ValidationError(f"no default representation for {recipe.name}")
    return Representation(2, tuple(random_sl(2, rng) for _ in range(cs.alphabet_size)))


@dataclass(frozen=True)
class ConnectedSumCheck:
    t_sum: complex
    t_m: complex
    t_nstar: complex
    t_disk: complex
    corrective_before: complex
    corrective_after: complex
    ok: bool


def check_connected_sum(m_recipe: SpaceRecipe, n_recipe: SpaceRecipe, rng, root_power: int = 1,
                        tol: Tolerance = DEFAULT_TOL, randomize: bool = False) -> ConnectedSumCheck:
    """Build M # N, normalize bases through the Mayer-Vietoris sequence and compare."""
    m = make_space(m_recipe)
    n = make_space(n_recipe)
    x, inc = connected_sum(m, n)
    rep = rep_for_recipe(m_recipe, rng).concat(rep_for_recipe(n_recipe, rng, root_power))
    prob = mv_problem(x, inc, rep)
    bases = default_bases(prob, tol)
    if randomize:
        bases = MVBases(*(randomize_bases(prob.complex(s), bases.get(s), rng, tol) for s in ("x", "x1", "x2")), bases.y)
    bases.y = disk_standard_basis(inc.y, prob.y.d)
    new, report = normalize_bases_via_mv(prob, bases, tol=tol)
    chk = report.check
    product = chk.t_x1.value * chk.t_x2.value
    ok = report.corrective_is_one and eq_up_to_sign(chk.t_x.value, product, tol) and eq_up_to_sign(chk.t_y.value, 1.0, tol)
    return ConnectedSumCheck(chk.t_x.value, chk.t_x1.value, chk.t_x2.value, chk.t_y.value,
                             report.corrective_before, report.corrective_after, ok)


def check_mv(x, inc, rep, rng=None, tol: Tolerance = DEFAULT_TOL):
    prob = mv_problem(x, inc, rep)
    bases = default_bases(prob, tol)
    if rng is not None:
        bases = MVBases(*(randomize_bases(prob.complex(s), bases.get(s), rng, tol) for s in ("x", "x1", "x2", "y")))
    return verify_multiplicativity(prob, bases, tol)


__all__ = [
    "random_cell_system",
    "random_rep",
    "mv_scenario",
    "check_mv",
    "check_connected_sum",
    "rep_for_recipe",
    "pad_after_expand",
    "conjugation_coords",
    "lie_basis_coords",
    "relift_coords",
    "blockdiag_apply",
]
