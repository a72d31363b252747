"""Acceptance criteria, one test per criterion.

Each criterion returns ``(ok, detail)``; the line ``PASS|FAIL <k> ...`` is
recorded for the pytest terminal summary and printed when this file is run
as a script (``python3 tests/test_acceptance.py``).
"""

from __future__ import annotations

import sys
import time

import numpy as np
import pytest

from adtorsion.cellsys import NumericChainComplex, elementary_expand, twist
from adtorsion.errors import DegenerateAssembly
from adtorsion.liealg import Representation, adjoint_data, random_sl
from adtorsion.linalg import Tolerance, eq_up_to_sign, rel_gap_up_to_sign
from adtorsion.scenarios import (
    blockdiag_apply,
    check_connected_sum,
    conjugation_coords,
    mv_scenario,
    pad_after_expand,
    random_cell_system,
    random_element,
)
from adtorsion.spaces import SpaceRecipe, disk_standard_basis, make_space
from adtorsion.torsion import (
    MVBases,
    check_exact,
    default_bases,
    homology_basis,
    mv_problem,
    mv_sequence,
    randomize_bases,
    reidemeister_torsion,
    torsion_acyclic,
    verify_multiplicativity,
)


def rel(r: float) -> Tolerance:
    return Tolerance(pivot_eps=1e-9, compare_rel=r)


def unit_disk(rng, shape):
    r = np.sqrt(rng.random(shape))
    return r * np.exp(2j * np.pi * rng.random(shape))


def _twisted(rng):
    cs, rep = random_cell_system(rng)
    ad = adjoint_data(rep)
    return cs, rep, ad, twist(cs, rep, ad)


def random_exact_complex(rng, length=None):
    """Exact complex with random change of basis in every degree.

    C_p splits as (boundaries of rank r_{p+1}) + (complement of rank r_p);
    d_p sends the complement of C_p onto the boundary block of C_{p-1}.
    """
    length = length or int(rng.integers(2, 5))
    ranks = [0] + [int(x) for x in rng.integers(1, 4, size=length - 1)] + [0]
    dims = [ranks[p + 1] + ranks[p] for p in range(length)]
    g = [unit_disk(rng, (n, n)) + 2 * np.eye(n) for n in dims]
    bds = []
    for p in range(1, length):
        e = np.zeros((dims[p - 1], dims[p]), dtype=complex)
        e[:ranks[p], ranks[p + 1]:] = np.eye(ranks[p])
        bds.append(g[p - 1] @ e @ np.linalg.inv(g[p]))
    return NumericChainComplex(1, tuple(dims), tuple(bds))


# ------------------------------------------------------------------ criteria


def criterion_1(seed=1):
    rng = np.random.default_rng(seed)
    worst, done = 0.0, 0
    while done < 200:
        k = int(rng.integers(1, 25))
        dmat = unit_disk(rng, (k, k))
        oracle = np.linalg.det(dmat)
        if abs(oracle) < 1e-6:
            continue
        cc = NumericChainComplex(1, (k, k), (dmat,))
        t = reidemeister_torsion(cc).value
        worst = max(worst, rel_gap_up_to_sign(t, 1 / oracle))
        done += 1
    return worst <= 1e-9, f"200 cases, worst relative gap {worst:.2e}"


def criterion_2(seed=2, wanted=50, draws=20000):
    """Circle with empty bases against det(Ad_A - I)^-1.

    Admissible samples need Ad_A - I well conditioned (cond < 1e6).
    """
    rng = np.random.default_rng(seed)
    cs = make_space("circle")
    admissible, best_cond = [], np.inf
    for _ in range(draws):
        a = random_sl(2, rng)
        ad = adjoint_data(Representation(2, (a,)))
        cond = np.linalg.cond(ad.ad_images[0] - np.eye(3))
        best_cond = min(best_cond, cond)
        if cond < 1e6:
            admissible.append((a, ad))
            if len(admissible) == wanted:
                break
    if len(admissible) < wanted:
        return False, (f"only {len(admissible)}/{wanted} admissible samples in {draws} draws; "
                       f"smallest cond(Ad_A - I) = {best_cond:.2e} (Ad_A always fixes A - tr(A)/2 I)")
    worst = 0.0
    for a, ad in admissible:
        try:
            t = reidemeister_torsion(twist(cs, Representation(2, (a,)), ad)).value
        except DegenerateAssembly as exc:
            return False, f"DegenerateAssembly: {exc}"
        worst = max(worst, rel_gap_up_to_sign(t, 1 / np.linalg.det(ad.ad_images[0] - np.eye(3))))
    return worst <= 1e-8, f"worst relative gap {worst:.2e}"


def criterion_3(seed=3):
    rng = np.random.default_rng(seed)
    cs = make_space("disk")
    values = []
    for n in (2, 3):
        rep = Representation(n, ())
        cc = twist(cs, rep, adjoint_data(rep))
        h = disk_standard_basis(cs, n * n - 1)
        values.append(reidemeister_torsion(cc, h).value)
        # also through random boundary bases and sections
        values += [reidemeister_torsion(cc, h, rng=rng).value for _ in range(3)]
    worst = max(min(abs(t - 1), abs(t + 1)) for t in values)
    return worst <= 1e-9, f"{len(values)} evaluations, max |T -+ 1| = {worst:.2e}"


def criterion_4(seed=4):
    rng = np.random.default_rng(seed)
    tol = rel(1e-7)
    worst = 0.0
    for _ in range(50):
        cs, rep, ad, cc = _twisted(rng)
        h = homology_basis(cc)
        t0 = reidemeister_torsion(cc, h).value
        for _ in range(5):
            worst = max(worst, rel_gap_up_to_sign(reidemeister_torsion(cc, h, tol, rng=rng).value, t0))
    return worst <= 1e-7, f"50 complexes x 5 re-choices, worst relative gap {worst:.2e}"


def criterion_5(seed=5):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        cs, rep, ad, cc = _twisted(rng)
        h = homology_basis(cc)
        u = random_sl(2, rng)
        rep2 = rep.conjugate(u)
        cc2 = twist(cs, rep2, adjoint_data(rep2, ad.basis))
        h2 = blockdiag_apply(h, conjugation_coords(cs, u, ad.basis))
        worst = max(worst, rel_gap_up_to_sign(reidemeister_torsion(cc, h).value, reidemeister_torsion(cc2, h2).value))
    return worst <= 1e-7, f"25 cases, worst relative gap {worst:.2e}"


def criterion_6(seed=6):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        cs, rep, ad, cc = _twisted(rng)
        h = homology_basis(cc)
        p = int(rng.integers(0, min(cs.dim, 2) + 1))
        cs2 = elementary_expand(cs, p, [random_element(rng, cs.alphabet_size) for _ in range(cs.count(p))])
        cc2 = twist(cs2, rep, ad)
        t2 = reidemeister_torsion(cc2, pad_after_expand(h, p, ad.d)).value
        worst = max(worst, rel_gap_up_to_sign(reidemeister_torsion(cc, h).value, t2))
    return worst <= 1e-7, f"25 cases, worst relative gap {worst:.2e}"


def criterion_7(seed=7):
    rng = np.random.default_rng(seed)
    tol = rel(1e-6)
    worst, parts = 0.0, []
    for name in ("wedge", "disk-sum"):
        for _ in range(10):
            x, inc, rep = mv_scenario(name, rng)
            prob = mv_problem(x, inc, rep)
            base = default_bases(prob, tol)
            bases = MVBases(*(randomize_bases(prob.complex(s), base.get(s), rng, tol) for s in ("x", "x1", "x2", "y")))
            check_exact(mv_sequence(prob, bases, tol, check=False).complex, tol)
            r = verify_multiplicativity(prob, bases, tol)
            worst = max(worst, rel_gap_up_to_sign(r.lhs, r.rhs))
        parts.append(name)
    return worst <= 1e-6, f"{' and '.join(parts)}, 10 reps each, exact sequences, worst relative gap {worst:.2e}"


def criterion_8(seed=8):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        cc = random_exact_complex(rng)
        given = [unit_disk(rng, (n, n)) + 2 * np.eye(n) for n in cc.dims]
        a = torsion_acyclic(cc, given).value
        b = reidemeister_torsion(cc.transformed(given)).value
        worst = max(worst, rel_gap_up_to_sign(a, b))
    return worst <= 1e-8, f"25 cases, worst relative gap {worst:.2e}"


def criterion_9(seed=9):
    rng = np.random.default_rng(seed)
    tol = rel(1e-6)
    lines, ok = [], True
    for p in (3, 5, 7):
        res = check_connected_sum(SpaceRecipe("solid_torus"), SpaceRecipe("lens", (p, 1)), rng, tol=tol)
        gap = rel_gap_up_to_sign(res.t_sum, res.t_m * res.t_nstar)
        one = eq_up_to_sign(res.corrective_after, 1.0, tol)
        ok = ok and res.ok and gap <= 1e-6 and one
        lines.append(f"p={p}: gap {gap:.2e}, corrective {res.corrective_after:.6g}")
    return ok, "; ".join(lines)


def criterion_10(seed=10):
    rng = np.random.default_rng(seed)
    worst, count = 0.0, 0
    while count < 30:
        cs, rep, ad, cc = _twisted(rng)
        h = homology_basis(cc)
        degs = [p for p, m in enumerate(h) if m.shape[1]]
        if not degs:
            continue
        t0 = reidemeister_torsion(cc, h).value
        for lam in (2, 1j, 1 + 1j):
            p = int(rng.choice(degs))
            h2 = [np.array(m) for m in h]
            h2[p][:, int(rng.integers(h2[p].shape[1]))] *= lam
            expected = t0 * lam ** (1 if p % 2 else -1)
            worst = max(worst, rel_gap_up_to_sign(reidemeister_torsion(cc, h2).value, expected))
        count += 1
    return worst <= 1e-9, f"30 complexes x 3 scalars, worst relative gap {worst:.2e}"


CRITERIA = {
    1: ("two-term oracle", criterion_1),
    2: ("circle formula", criterion_2),
    3: ("disk value", criterion_3),
    4: ("choice independence", criterion_4),
    5: ("conjugation invariance", criterion_5),
    6: ("elementary expansion invariance", criterion_6),
    7: ("Mayer-Vietoris identity", criterion_7),
    8: ("corrective term", criterion_8),
    9: ("connected sum", criterion_9),
    10: ("basis-scaling covariance", criterion_10),
}


def run_criterion(k: int):
    name, fn = CRITERIA[k]
    ok, detail = fn()
    return ok, f"{'PASS' if ok else 'FAIL'} {k:2d} {name}: {detail}"


# criterion 2 asks for samples that do not exist: Ad_A - I is singular for
# every A in SL_2(C); see the decisions ledger
UNATTAINABLE = {2}


@pytest.mark.parametrize(
    "k",
    [pytest.param(k, marks=pytest.mark.xfail(strict=True, reason="Ad_A - I is always singular"))
     if k in UNATTAINABLE else k for k in CRITERIA],
)
def test_criterion(k, acceptance_log):
    ok, line = run_criterion(k)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    start = time.perf_counter()
    results = [run_criterion(k) for k in CRITERIA]
    for _, line in results:
        print(line)
    print(f"{sum(ok for ok, _ in results)}/{len(results)} criteria passed in {time.perf_counter() - start:.1f} s")
    sys.exit(0 if all(ok for ok, _ in results) else 1)
