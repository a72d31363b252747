import numpy as np
import pytest

from adtorsion.cellsys import (
    CellSystem,
    NumericChainComplex,
    elementary_expand,
    gr,
    gr_matmul,
    gr_mul,
    invert_word,
    reduce_word,
    relift,
    twist,
    union_along,
    validate_boundary,
)
from adtorsion.errors import (
    AlphabetMismatch,
    BadIdentification,
    DegreeOutOfRange,
    MalformedCellSystem,
    NotAChainComplex,
    RelatorViolated,
)
from adtorsion.liealg import Representation, adjoint_data, random_sl, root_of_unity_image
from adtorsion.linalg import Tolerance
from adtorsion.spaces import circle, lens, make_space, point, solid_torus
from adtorsion.torsion import homology_basis, homology_dims, reidemeister_torsion

TIGHT = Tolerance(pivot_eps=1e-12)


def generic(k, seed=0):
    rng = np.random.default_rng(seed)
    return Representation(2, tuple(random_sl(2, rng) for _ in range(k)))


def test_word_reduction_and_group_ring():
    assert reduce_word(((0, 1), (1, 1), (1, -1), (0, -1))) == ()
    w = ((0, 1), (1, -1))
    assert reduce_word(w + invert_word(w)) == ()
    t = ((0, 1),)
    a = gr([(1, t), (-1, ())])
    assert gr_mul(a, gr([(1, ())])) == a
    assert gr([(1, t), (-1, t)]) == ()
    # (t - 1)(t + 1) = t^2 - 1
    assert gr_mul(a, gr([(1, t), (1, ())])) == gr([(1, ((0, 1), (0, 1))), (-1, ())])
    assert gr_matmul([[a]], [[a]]) == [[gr_mul(a, a)]]


def test_point_twists_to_zero_complex():
    rep = Representation(2, ())
    cc = twist(point(), rep, adjoint_data(rep))
    assert cc.dims == (3,) and cc.boundaries == ()
    validate_boundary(cc)


def test_circle_boundary_is_ad_minus_identity():
    rep = generic(1)
    ad = adjoint_data(rep)
    cc = twist(circle(), rep, ad)
    assert np.allclose(cc.boundary(1), ad.ad_images[0] - np.eye(3))
    validate_boundary(cc)


def test_lens_is_a_complex():
    for q in (1, 2):
        rep = Representation(2, (root_of_unity_image(5),))
        validate_boundary(twist(lens(5, q), rep, adjoint_data(rep)), TIGHT)


def test_validate_boundary_detects_corruption():
    rep = generic(1, 3)
    ad = adjoint_data(rep)
    m = ad.ad_images[0]
    bad = NumericChainComplex(3, (3, 3, 3), (m - np.eye(3), m + np.eye(3)))
    report = validate_boundary(bad, raise_on_fail=False)
    assert not report.ok and report.worst_degree == 1
    with pytest.raises(NotAChainComplex):
        validate_boundary(bad)
    # a single-degree complex passes vacuously
    assert validate_boundary(NumericChainComplex(3, (3,), ())).ok


def test_twist_checks_alphabet_and_relators():
    with pytest.raises(AlphabetMismatch):
        twist(circle(), generic(2), adjoint_data(generic(2)))
    rep = generic(1)
    with pytest.raises(RelatorViolated):
        twist(lens(5, 1), rep, adjoint_data(rep))


def test_malformed_cell_systems():
    with pytest.raises(MalformedCellSystem):
        CellSystem(1, 1, (1,), [], ())
    with pytest.raises(MalformedCellSystem):
        CellSystem(1, 1, (1, 1), [[[gr([(1, ((3, 1),))])]]], ())
    with pytest.raises(MalformedCellSystem):
        CellSystem(0, 0, (1,), [], (), {"m": [(0, 4)]})


def test_expand_point():
    cs = elementary_expand(point(), 0, [()])
    assert cs.cells == (2, 1)
    rep = Representation(2, ())
    ad = adjoint_data(rep)
    cc0, cc1 = twist(point(), rep, ad), twist(cs, rep, ad)
    h1 = [np.vstack([np.eye(3), np.zeros((3, 3))]), np.zeros((3, 0))]
    assert reidemeister_torsion(cc0, [np.eye(3)]).equals(reidemeister_torsion(cc1, h1))


def test_expand_circle_keeps_homology():
    rep = generic(1, 5)
    ad = adjoint_data(rep)
    cs = elementary_expand(circle(), 1, [()])
    assert cs.cells == (1, 2, 1)
    assert homology_dims(twist(cs, rep, ad)) == homology_dims(twist(circle(), rep, ad)) + [0]


def test_expansions_in_disjoint_degrees_commute():
    cs = lens(3, 1)
    a = elementary_expand(elementary_expand(cs, 0, [()]), 2, [()])
    b = elementary_expand(elementary_expand(cs, 2, [()]), 0, [()])
    rep = Representation(2, (root_of_unity_image(3),))
    ad = adjoint_data(rep)
    assert a.cells == b.cells
    assert homology_dims(twist(a, rep, ad)) == homology_dims(twist(b, rep, ad))


def test_expand_out_of_range():
    with pytest.raises(DegreeOutOfRange):
        elementary_expand(circle(), 3, [])


def test_relift_keeps_complex_and_torsion_class():
    rep = generic(1, 6)
    ad = adjoint_data(rep)
    cs = relift(circle(), 0, 0, ((0, 1),))
    cc = twist(cs, rep, ad)
    validate_boundary(cc)
    assert homology_dims(cc) == homology_dims(twist(circle(), rep, ad))


def test_union_of_solid_tori():
    x, inc = union_along(solid_torus(), solid_torus(), "disk")
    assert x.alphabet_size == 2
    y = inc.y
    assert list(x.cells) == [a + b - c for a, b, c in zip(inc.x1.cells, inc.x2.cells, y.cells)]
    validate_boundary(twist(x, generic(2), adjoint_data(generic(2))))


def test_union_with_point_is_relabeling():
    x, _ = union_along(circle(), point(), "base")
    assert (x.cells, x.boundaries, x.alphabet_size) == (circle().cells, circle().boundaries, 1)


def test_bad_identifications():
    with pytest.raises(BadIdentification):
        union_along(circle().with_marks({"m": [(1, 0)]}), solid_torus().with_marks({"m": [(0, 0)]}), "m")
    with pytest.raises(BadIdentification):
        union_along(circle(), circle(), "nope")
    # the circle's loop has a non-trivial label
    with pytest.raises(BadIdentification):
        cs = circle().with_marks({"loop": [(0, 0), (1, 0)]})
        union_along(cs, cs, "loop")


def test_homology_basis_of_generic_circle():
    rep = generic(1, 9)
    cc = twist(circle(), rep, adjoint_data(rep))
    h = homology_basis(cc)
    assert [m.shape[1] for m in h] == [1, 1]
    assert homology_dims(twist(make_space("solid_torus"), rep, adjoint_data(rep))) == [1, 1, 0]
