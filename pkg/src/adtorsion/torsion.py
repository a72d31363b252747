"""Torsion of based chain complexes and the Mayer-Vietoris product formula.

For each degree p the new basis of C_p is ``b_p | h_p | s_p(b_{p-1})``:
a basis of the boundaries, cycle representatives of the homology basis and
chosen preimages of the boundaries one degree down.  Its determinant in the
standard (geometric) coordinates enters the torsion with exponent
``(-1)**(p+1)``.  Values are only meaningful up to sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cellsys import CellSystem, Inclusions, NumericChainComplex, twist
from .errors import (
    BasisDependentModBoundaries,
    BasisNotCycles,
    DegenerateAssembly,
    NoNonzeroHomology,
    NotAcyclic,
    NotExact,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_cmatrix,
    det,
    eq_up_to_sign,
    image_basis,
    kernel_basis,
    max_abs,
    rank,
    solve_columns_in_span,
)
from .liealg import Representation, adjoint_data


@dataclass(frozen=True)
class TorsionValue:
    """A nonzero complex number read modulo sign."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if v == 0 or not np.isfinite(v):
            raise DegenerateAssembly(f"torsion value {v!r} is not a unit")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value

    def __mul__(self, other):
        return TorsionValue(self.value * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return TorsionValue(self.value / complex(other))

    def __pow__(self, k):
        return TorsionValue(self.value ** k)

    def equals(self, other, tol: Tolerance = DEFAULT_TOL) -> bool:
        return eq_up_to_sign(self.value, complex(other), tol)


# ------------------------------------------------------------ homology bases


def _col_block(h, p: int, rows: int) -> np.ndarray:
    if h is None or p >= len(h) or h[p] is None:
        return np.zeros((rows, 0), dtype=complex)
    return as_cmatrix(h[p], rows=rows)


def empty_bases(cc: NumericChainComplex) -> list:
    return [np.zeros((n, 0), dtype=complex) for n in cc.dims]


def homology_dims(cc: NumericChainComplex, tol: Tolerance = DEFAULT_TOL) -> list:
    ranks = [rank(cc.boundary(p), tol) for p in range(cc.top + 2)]
    return [cc.dims[p] - ranks[p] - ranks[p + 1] for p in range(cc.top + 1)]


def homology_basis(cc: NumericChainComplex, tol: Tolerance = DEFAULT_TOL) -> list:
    """Deterministic homology bases: greedy kernel vectors independent mod boundaries."""
    out = []
    for p in range(cc.top + 1):
        chosen = image_basis(cc.boundary(p + 1), tol)
        nb = chosen.shape[1]
        current_rank = nb
        for z in kernel_basis(cc.boundary(p), tol).T:
            trial = np.column_stack([chosen, z])
            if rank(trial, tol) > current_rank:
                chosen = trial
                current_rank += 1
        out.append(chosen[:, nb:])
    return out


def randomize_bases(cc: NumericChainComplex, h, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL) -> list:
    """Another valid homology basis: random invertible recombination plus boundaries."""
    out = []
    for p in range(cc.top + 1):
        hp = _col_block(h, p, cc.dims[p])
        k = hp.shape[1]
        g = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k)) + 2 * np.eye(k)
        b = image_basis(cc.boundary(p + 1), tol)
        r = rng.normal(size=(b.shape[1], k)) + 1j * rng.normal(size=(b.shape[1], k))
        out.append(hp @ g + b @ r)
    return out


def _check_cycles(dp, hp, p, tol):
    if hp.shape[1] == 0 or dp.shape[0] == 0:
        return
    resid = max_abs(dp @ hp)
    scale = max(1.0, max_abs(dp)) * max(1.0, max_abs(hp)) * max(1, dp.shape[1])
    if resid > tol.pivot_eps * scale:
        raise BasisNotCycles(f"degree {p}: d h has max entry {resid:.3e}")


def _random_invertible(k, rng):
    return rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k)) + 2 * np.eye(k)


def _boundary_bases(cc, tol, rng):
    bs = []
    for p in range(cc.top + 1):
        b = image_basis(cc.boundary(p + 1), tol)
        if rng is not None and b.shape[1]:
            b = b @ _random_invertible(b.shape[1], rng)
        bs.append(b)
    return bs


def _sections(cc, p, b_prev, tol, rng):
    dp = cc.boundary(p)
    s = solve_columns_in_span(dp, b_prev, tol)
    if rng is not None and s.shape[1]:
        k = kernel_basis(dp, tol)
        if k.shape[1]:
            s = s + k @ (rng.normal(size=(k.shape[1], s.shape[1])) + 1j * rng.normal(size=(k.shape[1], s.shape[1])))
    return s


def _assembled_det(m, p, tol):
    if m.shape[0] != m.shape[1]:
        raise DegenerateAssembly(f"degree {p}: assembled basis has {m.shape[1]} vectors in dimension {m.shape[0]}")
    val = det(m)
    if m.shape[0] and abs(val) < tol.pivot_eps ** m.shape[0]:
        raise DegenerateAssembly(f"degree {p}: assembled basis is singular (|det| = {abs(val):.3e})")
    return val


def reidemeister_torsion(cc: NumericChainComplex, h=None, tol: Tolerance = DEFAULT_TOL, rng=None) -> TorsionValue:
    """Torsion of ``cc`` in its standard basis with homology bases ``h``.

    ``h[p]`` holds cycle representatives as columns; missing degrees are
    treated as empty.  Passing ``rng`` replaces the boundary bases and the
    section preimages by random alternatives, which must not change the
    result beyond sign.
    """
    bs = _boundary_bases(cc, tol, rng)
    value = 1.0 + 0.0j
    for p in range(cc.top + 1):
        hp = _col_block(h, p, cc.dims[p])
        _check_cycles(cc.boundary(p), hp, p, tol)
        bp = bs[p]
        if hp.shape[1] and rank(np.column_stack([bp, hp]), tol) < bp.shape[1] + hp.shape[1]:
            raise BasisDependentModBoundaries(f"degree {p}: homology columns are dependent modulo boundaries")
        b_prev = bs[p - 1] if p >= 1 else np.zeros((0, 0), dtype=complex)
        sp = _sections(cc, p, b_prev, tol, rng)
        m = np.column_stack([bp, hp, sp])
        v = _assembled_det(m, p, tol)
        value *= v if p % 2 else 1.0 / v
    return TorsionValue(value)


def torsion_acyclic(cc: NumericChainComplex, given_bases=None, tol: Tolerance = DEFAULT_TOL) -> TorsionValue:
    """Torsion of an exact complex whose chain groups carry ``given_bases``.

    Each factor is the determinant of ``b_p | s_p(b_{p-1})`` written in the
    given basis of C_p.  ``None`` means the standard basis.
    """
    ranks = [rank(cc.boundary(p), tol) for p in range(cc.top + 2)]
    for p in range(cc.top + 1):
        if ranks[p] + ranks[p + 1] != cc.dims[p]:
            raise NotAcyclic(p)
    bs = _boundary_bases(cc, tol, None)
    value = 1.0 + 0.0j
    for p in range(cc.top + 1):
        b_prev = bs[p - 1] if p >= 1 else np.zeros((0, 0), dtype=complex)
        hprime = np.column_stack([bs[p], _sections(cc, p, b_prev, tol, None)])
        if given_bases is not None and given_bases[p] is not None and cc.dims[p]:
            g = as_cmatrix(given_bases[p])
            hprime = np.linalg.solve(g, hprime)
        v = _assembled_det(hprime, p, tol)
        value *= v if p % 2 else 1.0 / v
    return TorsionValue(value)


# ------------------------------------------------------------ Mayer-Vietoris


def _selection(cell_map, target_cells: int, d: int) -> np.ndarray:
    """Block 0/1 matrix sending cell i of the source to cell ``cell_map[i]``."""
    m = np.zeros((d * target_cells, d * len(cell_map)), dtype=complex)
    eye = np.eye(d)
    for i, j in enumerate(cell_map):
        m[d * j:d * (j + 1), d * i:d * (i + 1)] = eye
    return m


@dataclass(frozen=True)
class MVProblem:
    """Twisted complexes of X = X1 u X2, X1, X2, Y = X1 n X2 and chain maps.

    ``i1[p]``, ``i2[p]``: Y -> X1, X2 and ``j1[p]``, ``j2[p]``: X1, X2 -> X
    in degree p, as matrices in the geometric coordinates.
    """

    x: NumericChainComplex
    x1: NumericChainComplex
    x2: NumericChainComplex
    y: NumericChainComplex
    i1: tuple
    i2: tuple
    j1: tuple
    j2: tuple

    @property
    def top(self) -> int:
        return max(self.x.top, self.x1.top, self.x2.top, self.y.top)

    def complex(self, side: str) -> NumericChainComplex:
        return getattr(self, side)


def mv_problem(x_cs: CellSystem, inc: Inclusions, rep: Representation, basis=None) -> MVProblem:
    """Twist a union from ``union_along`` by ``rep`` (a representation of X).

    The restrictions to X1 and X2 are the first and remaining letters.
    """
    k1 = inc.x1.alphabet_size
    rep1 = rep.restrict(0, k1)
    rep2 = rep.restrict(k1, rep.alphabet_size)
    rep_y = rep.restrict(0, 0)
    ad = adjoint_data(rep, basis)
    basis = ad.basis
    cx = twist(x_cs, rep, ad)
    c1 = twist(inc.x1, rep1, adjoint_data(rep1, basis))
    c2 = twist(inc.x2, rep2, adjoint_data(rep2, basis))
    cy = twist(inc.y, rep_y, adjoint_data(rep_y, basis))
    d = ad.d
    top = max(x_cs.dim, inc.x1.dim, inc.x2.dim, inc.y.dim)

    def maps(source_map, target_cs):
        out = []
        for p in range(top + 1):
            cm = source_map[p] if p < len(source_map) else ()
            out.append(_selection(cm, target_cs.count(p), d))
        return tuple(out)

    return MVProblem(
        cx, c1, c2, cy,
        i1=maps(inc.y_to_x1, inc.x1),
        i2=maps(inc.y_to_x2, inc.x2),
        j1=maps(inc.x1_to_x, x_cs),
        j2=maps(inc.x2_to_x, x_cs),
    )


@dataclass
class MVBases:
    x: list
    x1: list
    x2: list
    y: list

    def copy(self) -> MVBases:
        return MVBases(*[[np.array(m) for m in getattr(self, s)] for s in ("x", "x1", "x2", "y")])

    def get(self, side: str) -> list:
        return getattr(self, side)


def default_bases(prob: MVProblem, tol: Tolerance = DEFAULT_TOL) -> MVBases:
    return MVBases(*(homology_basis(prob.complex(s), tol) for s in ("x", "x1", "x2", "y")))


class _Coords:
    """Homology coordinates of cycles w.r.t. a chosen homology basis."""

    def __init__(self, cc, h, top, tol):
        self.cc, self.tol = cc, tol
        self.h = [_col_block(h, p, cc.dim(p)) for p in range(top + 1)]
        self.frames = []
        for p in range(top + 1):
            b = image_basis(cc.boundary(p + 1), tol) if p <= cc.top else np.zeros((0, 0))
            self.frames.append(np.column_stack([self.h[p], b]) if cc.dim(p) else np.zeros((0, self.h[p].shape[1])))

    def dim(self, p):
        return self.h[p].shape[1]

    def __call__(self, p, z):
        k = self.dim(p)
        if k == 0:
            return np.zeros((0, z.shape[1]), dtype=complex)
        c = solve_columns_in_span(self.frames[p], z, self.tol)[:k]
        # a coefficient whose term is below rounding level of z is zero
        hn = np.linalg.norm(self.h[p], axis=0)[:, None]
        zn = np.linalg.norm(z, axis=0)[None, :]
        c[np.abs(c) * hn <= self.tol.pivot_eps * zn] = 0
        return c


@dataclass(frozen=True)
class MVSequence:
    """The long exact sequence as an acyclic complex in homology coordinates.

    Index 3i holds H_i(X), 3i+1 holds H_i(X1) + H_i(X2), 3i+2 holds H_i(Y).
    """

    complex: NumericChainComplex
    labels: tuple


def _exactness_defect(cc: NumericChainComplex, tol: Tolerance):
    ranks = [rank(cc.boundary(p), tol) for p in range(cc.top + 2)]
    for k in range(cc.top + 1):
        a, b = cc.boundary(k), cc.boundary(k + 1)
        if a.size and b.size:
            comp = max_abs(a @ b) / max(1.0, max_abs(a) * max_abs(b))
            if comp > tol.pivot_eps * max(1, a.shape[1]):
                return k, f": composite map has entry {comp:.3e}"
        if ranks[k] + ranks[k + 1] != cc.dims[k]:
            return k, f": rank(in) = {ranks[k + 1]}, dim ker(out) = {cc.dims[k] - ranks[k]}"
    return None


def check_exact(cc: NumericChainComplex, tol: Tolerance = DEFAULT_TOL) -> None:
    bad = _exactness_defect(cc, tol)
    if bad is not None:
        raise NotExact(*bad)


def mv_sequence(prob: MVProblem, bases: MVBases, tol: Tolerance = DEFAULT_TOL, check: bool = True) -> MVSequence:
    top = prob.top
    cx = _Coords(prob.x, bases.x, top, tol)
    c1 = _Coords(prob.x1, bases.x1, top, tol)
    c2 = _Coords(prob.x2, bases.x2, top, tol)
    cy = _Coords(prob.y, bases.y, top, tol)

    dims, labels = [], []
    for i in range(top + 1):
        dims += [cx.dim(i), c1.dim(i) + c2.dim(i), cy.dim(i)]
        labels += [f"H{i}(X)", f"H{i}(X1)+H{i}(X2)", f"H{i}(Y)"]

    bds = []
    for k in range(1, 3 * top + 3):
        i, r = divmod(k, 3)
        if r == 2:
            # i1* + i2* : H_i(Y) -> H_i(X1) + H_i(X2)
            hy = cy.h[i]
            m = np.vstack([c1(i, prob.i1[i] @ hy), c2(i, prob.i2[i] @ hy)])
        elif r == 1:
            # j1* - j2* : H_i(X1) + H_i(X2) -> H_i(X)
            m = np.hstack([cx(i, prob.j1[i] @ c1.h[i]), cx(i, -(prob.j2[i] @ c2.h[i]))])
        else:
            # connecting map H_i(X) -> H_{i-1}(Y): lift through X1 where possible
            z = cx.h[i]
            a = prob.j1[i].T @ z
            only2 = prob.j2[i].T @ z - prob.i2[i] @ (prob.i1[i].T @ (prob.j1[i].T @ z))
            rest = z - prob.j1[i] @ a - prob.j2[i] @ only2
            if max_abs(rest) > tol.pivot_eps * max(1.0, max_abs(z)):
                raise NotExact(k, ": cycle does not lift to X1 + X2")
            d1 = prob.x1.boundary(i)
            da = d1 @ a
            da[np.abs(da) <= tol.pivot_eps * max_abs(d1) * np.abs(a).max(axis=0, initial=0)] = 0
            yv = prob.i1[i - 1].T @ da
            if max_abs(da - prob.i1[i - 1] @ yv) > tol.pivot_eps * max(1.0, max_abs(da)) * max(1, da.shape[0]):
                raise NotExact(k, ": boundary of the lift leaves the intersection")
            m = cy(i - 1, yv)
        bds.append(m.reshape(dims[k - 1], dims[k]))
    cc = NumericChainComplex(1, tuple(dims), tuple(bds))
    if check:
        check_exact(cc, tol)
    return MVSequence(cc, tuple(labels))


@dataclass(frozen=True)
class MVReport:
    t_x: TorsionValue
    t_x1: TorsionValue
    t_x2: TorsionValue
    t_y: TorsionValue
    t_h: TorsionValue
    lhs: complex
    rhs: complex
    ok: bool

    @property
    def ratio(self) -> complex:
        return self.lhs / self.rhs


def verify_multiplicativity(prob: MVProblem, bases: MVBases, tol: Tolerance = DEFAULT_TOL) -> MVReport:
    """Compare T(X1) T(X2) with T(X) T(Y) T(H_*)."""
    t = {s: reidemeister_torsion(prob.complex(s), bases.get(s), tol) for s in ("x", "x1", "x2", "y")}
    seq = mv_sequence(prob, bases, tol)
    t_h = torsion_acyclic(seq.complex, None, tol)
    lhs = t["x1"].value * t["x2"].value
    rhs = t["x"].value * t["y"].value * t_h.value
    return MVReport(t["x"], t["x1"], t["x2"], t["y"], t_h, lhs, rhs, eq_up_to_sign(lhs, rhs, tol))


_SEQ_OFFSET = {"x": 0, "x1": 1, "x2": 1, "y": 2}


@dataclass(frozen=True)
class NormalizationReport:
    designated: tuple | None
    scale: complex
    corrective_before: complex
    corrective_after: complex
    check: MVReport
    corrective_is_one: bool

    @property
    def ok(self) -> bool:
        return self.check.ok and self.corrective_is_one


def _first_nonzero(bases: MVBases):
    for side in ("x1", "x2"):
        for p, m in enumerate(bases.get(side)):
            if m.shape[1]:
                return side, p, 0
    return None


def normalize_bases_via_mv(prob: MVProblem, bases: MVBases, designated=None, tol: Tolerance = DEFAULT_TOL):
    """Rescale one homology basis vector so the corrective term becomes 1.

    ``designated`` is ``(side, degree, column)`` with side one of ``x``,
    ``x1``, ``x2``, ``y``; by default the first nonzero homology vector of X1,
    then X2, starting in degree 0.  Returns ``(new_bases, report)``.
    """
    c = complex(torsion_acyclic(mv_sequence(prob, bases, tol).complex, None, tol))
    out = bases.copy()
    scale = 1.0 + 0.0j
    if eq_up_to_sign(c, 1.0, tol):
        designated = None
    else:
        if designated is None:
            designated = _first_nonzero(bases)
            if designated is None:
                raise NoNonzeroHomology(f"corrective term is {c!r} but X1 and X2 have no homology to rescale")
        side, p, col = designated
        index = 3 * p + _SEQ_OFFSET[side]
        # scaling a vector at index k multiplies the corrective term by scale**((-1)**k)
        scale = c ** (-1 if index % 2 == 0 else 1)
        target = out.get(side)
        target[p] = np.array(target[p], dtype=complex)
        target[p][:, col] *= scale
    check = verify_multiplicativity(prob, out, tol)
    after = check.t_h.value
    return out, NormalizationReport(designated, scale, c, after, check, eq_up_to_sign(after, 1.0, tol))
