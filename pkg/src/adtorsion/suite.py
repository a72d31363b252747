"""Seeded property suite behind the ``suite`` command.

Each property runs a fixed number of randomized cases and raises
``AssertionError`` on the first violation.  The summary lists pass counts
in a fixed order and contains no timings, so equal seeds print identical
text.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import io, liealg, linalg
from .cellsys import elementary_expand, relift, twist, validate_boundary
from .errors import TorsionError
from .liealg import Representation, adjoint_data, adjoint_of_word, killing_form, random_sl
from .linalg import Tolerance, eq_up_to_sign
from .scenarios import (
    blockdiag_apply,
    check_connected_sum,
    check_mv,
    conjugation_coords,
    lie_basis_coords,
    mv_scenario,
    pad_after_expand,
    random_cell_system,
    random_element,
    random_word,
    relift_coords,
    rep_for_recipe,
)
from .spaces import RECIPE_NAMES, SpaceRecipe, add_marked_disk, disk_sum, make_space, puncture, solid_torus
from .torsion import homology_basis, homology_dims, reidemeister_torsion

TOL = Tolerance()
PROP_TOL = Tolerance(pivot_eps=1e-9, compare_rel=1e-7)


def _random_cmatrix(rng, r, c):
    return rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))


def _twisted(rng):
    cs, rep = random_cell_system(rng)
    ad = adjoint_data(rep)
    return cs, rep, ad, twist(cs, rep, ad)


# ---------------------------------------------------------------- properties


def prop_kernel_image(rng, make):
    r, c, k = (int(x) for x in rng.integers(1, 8, size=3))
    m = _random_cmatrix(rng, r, k) @ _random_cmatrix(rng, k, c)
    ker = linalg.kernel_basis(m)
    img = linalg.image_basis(m)
    assert linalg.max_abs(m @ ker) <= 1e-9 * max(1.0, linalg.max_abs(m)) * c
    assert linalg.rank(img) + ker.shape[1] == c


def prop_det_multiplicative(rng, make):
    n = int(rng.integers(1, 31))
    a, b = _random_cmatrix(rng, n, n), _random_cmatrix(rng, n, n)
    lhs, rhs = linalg.det(a @ b), linalg.det(a) * linalg.det(b)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def prop_orthonormal_basis(rng, make):
    n = int(rng.integers(2, 5))
    for basis in (liealg.orthonormal_basis(n), liealg.random_orthonormal_basis(n, rng)):
        gram = np.array([[killing_form(a, b) for b in basis] for a in basis])
        assert np.abs(gram - np.eye(len(basis))).max() <= 1e-10


def prop_adjoint_word(rng, make):
    n = int(rng.integers(2, 4))
    rep = Representation(n, tuple(random_sl(n, rng) for _ in range(2)))
    ad = adjoint_data(rep)
    w1, w2 = random_word(rng, 2, 8), random_word(rng, 2, 8)
    a1, a2, a12 = (adjoint_of_word(rep, ad, w) for w in (w1, w2, w1 + w2))
    assert np.abs(a12 - a1 @ a2).max() <= 1e-10 * max(1.0, np.abs(a12).max())
    # det of a unimodular matrix loses digits in proportion to its Hadamard bound
    assert abs(np.linalg.det(a12) - 1) <= 1e-12 * np.prod(np.linalg.norm(a12, axis=0))
    # B-orthonormal coordinates: preserving B means being complex orthogonal
    assert np.abs(a12.T @ a12 - np.eye(ad.d)).max() <= 1e-8 * max(1.0, np.abs(a12).max()) ** 2


def prop_recipes_are_complexes(rng, make):
    for name in RECIPE_NAMES:
        params = {"wedge": (2,), "lens": (5, 2)}.get(name, ())
        recipe = SpaceRecipe(name, params)
        cs = make(recipe)
        rep = rep_for_recipe(recipe, rng)
        ad = adjoint_data(rep)
        validate_boundary(twist(cs, rep, ad), Tolerance(pivot_eps=1e-12))


def prop_choice_independence(rng, make):
    cs, rep, ad, cc = _twisted(rng)
    h = homology_basis(cc)
    t0 = reidemeister_torsion(cc, h)
    for _ in range(3):
        assert t0.equals(reidemeister_torsion(cc, h, rng=rng), PROP_TOL)


def prop_scaling_covariance(rng, make):
    cs, rep, ad, cc = _twisted(rng)
    h = homology_basis(cc)
    degs = [p for p, m in enumerate(h) if m.shape[1]]
    if not degs:
        return
    p = int(rng.choice(degs))
    lam = complex(rng.choice([2, 1j, 1 + 1j]))
    h2 = [np.array(m) for m in h]
    h2[p][:, 0] *= lam
    expected = reidemeister_torsion(cc, h).value * lam ** (-1 if p % 2 == 0 else 1)
    assert eq_up_to_sign(reidemeister_torsion(cc, h2).value, expected, Tolerance(compare_rel=1e-9))


def prop_conjugation(rng, make):
    cs, rep, ad, cc = _twisted(rng)
    h = homology_basis(cc)
    u = random_sl(2, rng)
    rep2 = rep.conjugate(u)
    cc2 = twist(cs, rep2, adjoint_data(rep2, ad.basis))
    h2 = blockdiag_apply(h, conjugation_coords(cs, u, ad.basis))
    assert reidemeister_torsion(cc, h).equals(reidemeister_torsion(cc2, h2), PROP_TOL)


def prop_lie_basis_independence(rng, make):
    cs, rep, ad, cc = _twisted(rng)
    h = homology_basis(cc)
    basis2 = liealg.random_orthonormal_basis(rep.n, rng)
    cc2 = twist(cs, rep, adjoint_data(rep, basis2))
    h2 = blockdiag_apply(h, lie_basis_coords(cs, ad.basis, basis2))
    assert reidemeister_torsion(cc, h).equals(reidemeister_torsion(cc2, h2), PROP_TOL)


def prop_lift_independence(rng, make):
    cs, rep, ad, cc = _twisted(rng)
    h = homology_basis(cc)
    p = int(rng.integers(0, cs.dim + 1))
    if not cs.count(p) or not cs.alphabet_size:
        return
    j = int(rng.integers(cs.count(p)))
    w = random_word(rng, cs.alphabet_size, 3)
    cs2 = relift(cs, p, j, w)
    cc2 = twist(cs2, rep, ad)
    h2 = blockdiag_apply(h, relift_coords(cs, rep, ad.basis, p, j, w))
    assert reidemeister_torsion(cc, h).equals(reidemeister_torsion(cc2, h2), PROP_TOL)


def prop_expansion(rng, make):
    cs, rep, ad, cc = _twisted(rng)
    h = homology_basis(cc)
    p = int(rng.integers(0, min(cs.dim, 2) + 1))
    cs2 = elementary_expand(cs, p, [random_element(rng, cs.alphabet_size) for _ in range(cs.count(p))])
    cc2 = twist(cs2, rep, ad)
    assert homology_dims(cc2) == homology_dims(cc) + [0] * (cc2.top - cc.top)
    h2 = pad_after_expand(h, p, ad.d)
    assert reidemeister_torsion(cc, h).equals(reidemeister_torsion(cc2, h2), PROP_TOL)


def prop_mayer_vietoris(rng, make):
    for name in ("wedge", "disk-sum"):
        x, inc, rep = mv_scenario(name, rng)
        assert check_mv(x, inc, rep, rng).ok, name


def prop_connected_sum(rng, make):
    p = int(rng.choice([3, 5, 7]))
    res = check_connected_sum(SpaceRecipe("solid_torus"), SpaceRecipe("lens", (p, 1)), rng)
    assert res.ok


def prop_disk_sum_associative(rng, make):
    # a fresh disk on each partial sum keeps the gluing disks disjoint
    a, b, c = solid_torus(), puncture(make(SpaceRecipe("lens", (3, 1)))), solid_torus()
    left = disk_sum(add_marked_disk(disk_sum(a, b)[0]), c)[0]
    right = disk_sum(a, add_marked_disk(disk_sum(b, c)[0]))[0]
    rep = Representation(2, (random_sl(2, rng), liealg.root_of_unity_image(3), random_sl(2, rng)))
    ad = adjoint_data(rep)
    assert left.cells == right.cells
    assert homology_dims(twist(left, rep, ad)) == homology_dims(twist(right, rep, ad))


def prop_roundtrip(rng, make):
    for name in RECIPE_NAMES:
        params = {"wedge": (3,), "lens": (7, 3)}.get(name, ())
        cs = make(SpaceRecipe(name, params))
        assert io.cellsystem_from_dict(io.cellsystem_to_dict(cs)) == cs


@dataclass(frozen=True)
class Property:
    name: str
    fn: object
    cases: int


PROPERTIES = (
    Property("linalg.kernel_image", prop_kernel_image, 20),
    Property("linalg.det_multiplicative", prop_det_multiplicative, 10),
    Property("liealg.orthonormal_basis", prop_orthonormal_basis, 5),
    Property("liealg.adjoint_word", prop_adjoint_word, 20),
    Property("spaces.recipes_are_complexes", prop_recipes_are_complexes, 3),
    Property("torsion.choice_independence", prop_choice_independence, 10),
    Property("torsion.scaling_covariance", prop_scaling_covariance, 10),
    Property("torsion.conjugation_invariance", prop_conjugation, 10),
    Property("torsion.lie_basis_independence", prop_lie_basis_independence, 10),
    Property("cellsys.lift_independence", prop_lift_independence, 10),
    Property("cellsys.expansion_invariance", prop_expansion, 10),
    Property("torsion.mayer_vietoris", prop_mayer_vietoris, 5),
    Property("spaces.connected_sum", prop_connected_sum, 3),
    Property("spaces.disk_sum_associative", prop_disk_sum_associative, 2),
    Property("cli.roundtrip", prop_roundtrip, 1),
)


@dataclass(frozen=True)
class SuiteResult:
    lines: tuple
    first_failure: str | None

    @property
    def ok(self) -> bool:
        return self.first_failure is None

    def summary(self) -> str:
        return "\n".join(self.lines) + "\n"


def run_suite(seed: int = 0, make=make_space, properties=PROPERTIES) -> SuiteResult:
    """Run every property with a per-property generator derived from ``seed``."""
    lines = [f"seed {seed}"]
    first = None
    for idx, prop in enumerate(properties):
        rng = np.random.default_rng([seed, idx])
        passed = 0
        err = None
        for _ in range(prop.cases):
            try:
                prop.fn(rng, make)
                passed += 1
            except (AssertionError, TorsionError, np.linalg.LinAlgError) as exc:
                err = err or f"{type(exc).__name__}: {exc}".rstrip(": ")
        status = "PASS" if passed == prop.cases else "FAIL"
        line = f"{status} {prop.name}: {passed}/{prop.cases}"
        if err:
            line += f" ({err})"
        lines.append(line)
        if status == "FAIL" and first is None:
            first = prop.name
    lines.append("all properties passed" if first is None else f"first failure: {first}")
    return SuiteResult(tuple(lines), first)
