import numpy as np
import pytest

from adtorsion.cellsys import NumericChainComplex, twist, union_along
from adtorsion.errors import (
    BasisDependentModBoundaries,
    BasisNotCycles,
    DegenerateAssembly,
    NotAcyclic,
    NotExact,
)
from adtorsion.liealg import Representation, adjoint_data, killing_form, random_sl
from adtorsion.linalg import eq_up_to_sign
from adtorsion.scenarios import mv_scenario
from adtorsion.spaces import circle, disk, disk_standard_basis, point, solid_torus
from adtorsion.torsion import (
    TorsionValue,
    check_exact,
    default_bases,
    homology_basis,
    mv_problem,
    mv_sequence,
    normalize_bases_via_mv,
    reidemeister_torsion,
    torsion_acyclic,
    verify_multiplicativity,
)


def circle_complex(a):
    rep = Representation(2, (a,))
    ad = adjoint_data(rep)
    return twist(circle(), rep, ad), ad


def test_torsion_value_rejects_zero_and_nan():
    with pytest.raises(Exception):
        TorsionValue(0)
    with pytest.raises(Exception):
        TorsionValue(complex("nan"))
    assert TorsionValue(2).equals(TorsionValue(-2))


def test_point_with_standard_basis():
    rep = Representation(2, ())
    cc = twist(point(), rep, adjoint_data(rep))
    assert reidemeister_torsion(cc, [np.eye(3)]).value == 1


def test_circle_empty_bases_is_degenerate():
    # Ad_A fixes A - tr(A)/2 I, so the circle is never acyclic
    cc, _ = circle_complex(np.array([[2, 1], [1, 1]]))
    with pytest.raises(DegenerateAssembly):
        reidemeister_torsion(cc)
    cc, _ = circle_complex(np.diag([2, 0.5]))
    with pytest.raises(DegenerateAssembly):
        reidemeister_torsion(cc)


def test_circle_with_fixed_vector_bases():
    # oracle: with h0 = h1 = the fixed vector F, the torsion is the inverse of
    # the product of (mu - 1) over the eigenvalues mu != 1 of Ad_A, which is
    # (l^2 - 1)(l^-2 - 1) = 4 - tr(A)^2
    rng = np.random.default_rng(11)
    for a in [np.array([[2, 1], [1, 1]])] + [random_sl(2, rng) for _ in range(10)]:
        cc, ad = circle_complex(a)
        f = np.array([killing_form(b, a - np.trace(a) / 2 * np.eye(2)) for b in ad.basis])[:, None]
        t = reidemeister_torsion(cc, [f, f])
        assert eq_up_to_sign(t.value, 1 / (4 - np.trace(a) ** 2))


def test_disk_value_is_one():
    rep = Representation(2, ())
    cs = disk()
    cc = twist(cs, rep, adjoint_data(rep))
    h = disk_standard_basis(cs, 3)
    assert abs(abs(reidemeister_torsion(cc, h).value) - 1) < 1e-12


def test_homology_lift_independence_and_scaling():
    rng = np.random.default_rng(12)
    cs = solid_torus()
    rep = Representation(2, (random_sl(2, rng),))
    cc = twist(cs, rep, adjoint_data(rep))
    h = homology_basis(cc)
    t = reidemeister_torsion(cc, h).value
    shifted = [np.array(m) for m in h]
    shifted[0] = shifted[0] + cc.boundary(1) @ rng.normal(size=(cc.dims[1], shifted[0].shape[1]))
    assert eq_up_to_sign(reidemeister_torsion(cc, shifted).value, t)
    for p in (0, 1):
        scaled = [np.array(m) for m in h]
        scaled[p][:, 0] *= 1 + 1j
        expected = t * (1 + 1j) ** (1 if p % 2 else -1)
        assert abs(reidemeister_torsion(cc, scaled).value - expected) <= 1e-9 * abs(expected)


def test_bad_homology_bases():
    cc, _ = circle_complex(random_sl(2, np.random.default_rng(13)))
    h = homology_basis(cc)
    with pytest.raises(BasisNotCycles):
        reidemeister_torsion(cc, [h[0], np.ones((3, 1))])
    with pytest.raises(BasisDependentModBoundaries):
        reidemeister_torsion(cc, [cc.boundary(1)[:, :1], h[1]])
    with pytest.raises(DegenerateAssembly):
        reidemeister_torsion(cc, [h[0], np.zeros((3, 0))])


def test_torsion_acyclic_examples():
    assert torsion_acyclic(NumericChainComplex(1, (4, 4), (np.eye(4),))).value == 1
    assert eq_up_to_sign(torsion_acyclic(NumericChainComplex(1, (1, 1), (np.array([[2.0]]),))).value, 0.5)
    with pytest.raises(NotAcyclic):
        torsion_acyclic(NumericChainComplex(1, (2, 2), (np.diag([1.0, 0.0]),)))


def test_torsion_acyclic_with_its_own_bases_is_one():
    rng = np.random.default_rng(14)
    d1 = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    d2 = np.linalg.svd(d1)[2].conj().T[:, 2:]  # kernel of d1
    cc = NumericChainComplex(1, (2, 3, 1), (d1, d2))
    check_exact(cc)
    # h'_p = b_p followed by sections, as torsion_acyclic builds them
    h0 = d1[:, :2]
    s1 = np.linalg.lstsq(d1, h0, rcond=None)[0]
    h1 = np.column_stack([d2, s1])
    h2 = np.linalg.lstsq(d2, d2, rcond=None)[0]
    given = [h0, h1, h2]
    assert eq_up_to_sign(torsion_acyclic(cc, given).value, 1)


def test_mv_on_points():
    x, inc = union_along(point(), point(), "base")
    rep = Representation(2, ())
    prob = mv_problem(x, inc, rep)
    bases = default_bases(prob)
    seq = mv_sequence(prob, bases)
    assert seq.complex.dims == (3, 6, 3)
    assert verify_multiplicativity(prob, bases).ok


def test_mv_disk_sum_dims_and_identity():
    x, inc, rep = mv_scenario("disk-sum", np.random.default_rng(15))
    prob = mv_problem(x, inc, rep)
    seq = mv_sequence(prob, default_bases(prob))
    # generic images fix one direction each, so H_0 is C for a solid torus
    # and 0 for the union, whose group is free on two generators
    assert seq.complex.dims[:3] == (0, 2, 3)
    assert seq.labels[:3] == ("H0(X)", "H0(X1)+H0(X2)", "H0(Y)")
    assert verify_multiplicativity(prob, default_bases(prob)).ok


def test_mv_corruption_is_not_exact():
    x, inc, rep = mv_scenario("wedge", np.random.default_rng(16))
    prob = mv_problem(x, inc, rep)
    cc = mv_sequence(prob, default_bases(prob)).complex
    k = next(p for p in range(1, cc.top + 1) if cc.boundary(p).size)
    bds = [np.array(m) for m in cc.boundaries]
    bds[k - 1][0, 0] += 1.0
    with pytest.raises(NotExact):
        check_exact(NumericChainComplex(1, cc.dims, tuple(bds)))


def test_mv_trivial_union():
    rng = np.random.default_rng(17)
    x, inc = union_along(circle(), point(), "base")
    rep = Representation(2, (random_sl(2, rng),))
    prob = mv_problem(x, inc, rep)
    assert verify_multiplicativity(prob, default_bases(prob)).ok


def test_normalize_is_idempotent_and_scale_free():
    x, inc, rep = mv_scenario("disk-sum", np.random.default_rng(18))
    prob = mv_problem(x, inc, rep)
    bases = default_bases(prob)
    new, report = normalize_bases_via_mv(prob, bases)
    assert report.ok and report.designated == ("x1", 0, 0)
    again, report2 = normalize_bases_via_mv(prob, new)
    assert report2.designated is None and report2.scale == 1
    assert all(np.array_equal(a, b) for a, b in zip(again.x1, new.x1))
    # pre-scaling the designated column is undone by the normalization
    pre = bases.copy()
    pre.x1[0] = np.array(pre.x1[0], dtype=complex)
    pre.x1[0][:, 0] *= 3 - 1j
    new2, _ = normalize_bases_via_mv(prob, pre)
    col, col2 = new.x1[0][:, 0], new2.x1[0][:, 0]
    assert np.allclose(col, col2) or np.allclose(col, -col2)
