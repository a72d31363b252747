"""CW complexes with group-ring boundary data and their twisted chain complexes.

A boundary matrix ``boundaries[p-1]`` describes d_p : C_p -> C_{p-1} with
shape ``(cells[p-1], cells[p])``.  Entries are elements of the integral group
ring of the free group on the alphabet, written as tuples of
``(coefficient, word)`` terms with words being tuples of ``(generator,
exponent)`` pairs.  Chain groups are right modules, so d_p d_{p+1} = 0 means
the ordinary matrix product vanishes once every word is evaluated; twisting
replaces each entry by the block ``sum c * Ad(rho(w))``.

Lifts are implicit: the word in an entry records which translate of the
chosen lift of the face appears in the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .errors import (
    AlphabetMismatch,
    BadIdentification,
    DegreeOutOfRange,
    MalformedCellSystem,
    NotAChainComplex,
)
from .linalg import DEFAULT_TOL, Tolerance, max_abs
from .liealg import AdjointData, Representation, adjoint_of_word, validate_representation

# ---------------------------------------------------------------- group ring


def reduce_word(word) -> tuple:
    out: list = []
    for g, e in word:
        g, e = int(g), int(e)
        if e not in (1, -1):
            raise MalformedCellSystem(f"exponent {e} is not +-1")
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert_word(word) -> tuple:
    return tuple((g, -e) for g, e in reversed(word))


def gr(terms) -> tuple:
    """Canonical group-ring element: reduced words, like terms merged, no zeros."""
    acc: dict = {}
    for c, w in terms:
        w = reduce_word(w)
        acc[w] = acc.get(w, 0) + int(c)
    return tuple(sorted((c, w) for w, c in acc.items() if c != 0))


ZERO = ()
ONE = ((1, ()),)


def gr_word(word, coef=1) -> tuple:
    return gr([(coef, word)])


def gr_add(*elems) -> tuple:
    return gr([t for e in elems for t in e])


def gr_neg(a) -> tuple:
    return tuple((-c, w) for c, w in a)


def gr_mul(a, b) -> tuple:
    return gr([(ca * cb, wa + wb) for ca, wa in a for cb, wb in b])


def gr_matmul(a, b) -> list:
    """Product of group-ring matrices given as lists of rows."""
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [
        [gr_add(*(gr_mul(a[i][k], b[k][j]) for k in range(inner))) for j in range(cols)]
        for i in range(rows)
    ]


def power(g: int, k: int) -> tuple:
    """Word t_g^k."""
    e = 1 if k >= 0 else -1
    return tuple((g, e) for _ in range(abs(k)))


def shift_word(word, offset: int) -> tuple:
    return tuple((g + offset, e) for g, e in word)


def shift_element(elem, offset: int) -> tuple:
    return tuple((c, shift_word(w, offset)) for c, w in elem)


# ---------------------------------------------------------------- CellSystem


def _freeze_matrix(m, rows: int, cols: int) -> tuple:
    m = list(m)
    if len(m) != rows or any(len(r) != cols for r in m):
        raise MalformedCellSystem(f"boundary matrix shape does not match cell counts ({rows}x{cols})")
    return tuple(tuple(gr(e) for e in r) for r in m)


@dataclass(frozen=True)
class CellSystem:
    dim: int
    alphabet_size: int
    cells: tuple
    boundaries: tuple
    relators: tuple = ()
    marks: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        if len(cells) != self.dim + 1 or any(c < 0 for c in cells):
            raise MalformedCellSystem(f"need {self.dim + 1} nonnegative cell counts, got {cells}")
        if len(self.boundaries) != self.dim:
            raise MalformedCellSystem(f"need {self.dim} boundary matrices, got {len(self.boundaries)}")
        bds = tuple(_freeze_matrix(self.boundaries[p - 1], cells[p - 1], cells[p]) for p in range(1, self.dim + 1))
        rels = tuple(reduce_word(w) for w in self.relators)
        marks = {}
        for name, ids in dict(self.marks).items():
            ids = tuple((int(q), int(i)) for q, i in ids)
            for q, i in ids:
                if not (0 <= q <= self.dim and 0 <= i < cells[q]):
                    raise MalformedCellSystem(f"mark {name!r} names a missing cell ({q}, {i})")
            marks[str(name)] = ids
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "boundaries", bds)
        object.__setattr__(self, "relators", rels)
        object.__setattr__(self, "marks", MappingProxyType(marks))
        for p, m in enumerate(bds, start=1):
            for r in m:
                for e in r:
                    for _, w in e:
                        for g, _ in w:
                            if not 0 <= g < self.alphabet_size:
                                raise MalformedCellSystem(f"letter {g} outside alphabet in d_{p}")
        for w in rels:
            for g, _ in w:
                if not 0 <= g < self.alphabet_size:
                    raise MalformedCellSystem(f"relator letter {g} outside alphabet")

    def boundary(self, p: int) -> tuple:
        """d_p as a tuple of rows; empty outside 1..dim."""
        if 1 <= p <= self.dim:
            return self.boundaries[p - 1]
        return ()

    def count(self, p: int) -> int:
        return self.cells[p] if 0 <= p <= self.dim else 0

    def with_marks(self, marks) -> CellSystem:
        return CellSystem(self.dim, self.alphabet_size, self.cells, self.boundaries, self.relators, marks)

    def __eq__(self, other):
        if not isinstance(other, CellSystem):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.alphabet_size == other.alphabet_size
            and self.cells == other.cells
            and self.boundaries == other.boundaries
            and self.relators == other.relators
            and dict(self.marks) == dict(other.marks)
        )

    def __hash__(self):
        return hash((self.dim, self.alphabet_size, self.cells, self.boundaries, self.relators))


def _mutable(cs: CellSystem) -> list:
    return [[list(r) for r in m] for m in cs.boundaries]


# ---------------------------------------------------------- numeric complexes


@dataclass(frozen=True)
class NumericChainComplex:
    """Finite complex of C-vector spaces; ``boundaries[p-1]`` is d_p."""

    d: int
    dims: tuple
    boundaries: tuple

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        bds = []
        for p, m in enumerate(self.boundaries, start=1):
            m = np.array(m, dtype=complex).reshape(dims[p - 1], dims[p])
            m.setflags(write=False)
            bds.append(m)
        if len(bds) != max(len(dims) - 1, 0):
            raise MalformedCellSystem("need one boundary map between consecutive chain groups")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "boundaries", tuple(bds))

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, p: int) -> int:
        return self.dims[p] if 0 <= p <= self.top else 0

    def boundary(self, p: int) -> np.ndarray:
        """d_p : C_p -> C_{p-1}, zero-sized at the ends."""
        if 1 <= p <= self.top:
            return self.boundaries[p - 1]
        return np.zeros((self.dim(p - 1), self.dim(p)), dtype=complex)

    def transformed(self, coords) -> NumericChainComplex:
        """Complex in new coordinates: ``coords[p]`` has columns = new basis of C_p."""
        inv = [np.linalg.solve(c, np.eye(c.shape[0])) if c.size else c for c in coords]
        bds = [inv[p - 1] @ self.boundary(p) @ coords[p] for p in range(1, self.top + 1)]
        return NumericChainComplex(self.d, self.dims, tuple(bds))


def twist(cs: CellSystem, rep: Representation, ad: AdjointData, check_relators: bool = True) -> NumericChainComplex:
    """Twisted complex C_*(K; g_Ad rho), coordinates ordered cell-major."""
    if rep.alphabet_size != cs.alphabet_size:
        raise AlphabetMismatch(f"representation has {rep.alphabet_size} letters, complex has {cs.alphabet_size}")
    if check_relators:
        validate_representation(rep, cs.relators)
    d = ad.d
    cache: dict = {}

    def block(elem):
        out = np.zeros((d, d), dtype=complex)
        for c, w in elem:
            if w not in cache:
                cache[w] = adjoint_of_word(rep, ad, w)
            out += c * cache[w]
        return out

    bds = []
    for p in range(1, cs.dim + 1):
        rows, cols = cs.cells[p - 1], cs.cells[p]
        m = np.zeros((d * rows, d * cols), dtype=complex)
        for i, row in enumerate(cs.boundary(p)):
            for j, e in enumerate(row):
                if e:
                    m[d * i:d * (i + 1), d * j:d * (j + 1)] = block(e)
        bds.append(m)
    return NumericChainComplex(d, tuple(d * c for c in cs.cells), tuple(bds))


@dataclass(frozen=True)
class BoundaryReport:
    max_norm: float
    worst_degree: int | None
    ok: bool


def validate_boundary(cc: NumericChainComplex, tol: Tolerance = DEFAULT_TOL, raise_on_fail: bool = True) -> BoundaryReport:
    worst, worst_p = 0.0, None
    for p in range(1, cc.top):
        a, b = cc.boundary(p), cc.boundary(p + 1)
        n = max_abs(a @ b) / max(1.0, max_abs(a) * max_abs(b))
        if worst_p is None or n > worst:
            worst, worst_p = n, p
    ok = worst <= tol.pivot_eps
    if not ok and raise_on_fail:
        raise NotAChainComplex(worst_p, worst)
    return BoundaryReport(worst, worst_p, ok)


# ------------------------------------------------------------ constructions


def elementary_expand(cs: CellSystem, p: int, attach) -> CellSystem:
    """Add a free p-cell e and a (p+1)-cell f with d f = e + attach.

    ``attach`` is a column of group-ring elements over the existing p-cells.
    The boundary of e is forced to ``-d_p(attach)`` so the result is again a
    chain complex; (e, f) can be collapsed back.
    """
    if not 0 <= p <= cs.dim:
        raise DegreeOutOfRange(f"cannot expand at degree {p} of a {cs.dim}-dimensional complex")
    attach = [gr(a) for a in attach]
    if len(attach) != cs.cells[p]:
        raise MalformedCellSystem(f"attach has {len(attach)} entries, expected {cs.cells[p]}")
    cells = list(cs.cells)
    bds = _mutable(cs)
    if p == cs.dim:
        cells.append(0)
        bds.append([[] for _ in range(cells[p])])
    # d_p gains the column of e
    if p >= 1:
        col = gr_matmul(cs.boundary(p), [[a] for a in attach])
        for i in range(cells[p - 1]):
            bds[p - 1][i].append(gr_neg(col[i][0]))
    # d_{p+1}: new row for e, new column for f
    dp1 = bds[p]
    for i in range(cells[p]):
        dp1[i].append(attach[i])
    dp1.append([ZERO] * cells[p + 1] + [ONE])
    # d_{p+2} gains a zero row for f
    if p + 2 <= len(bds):
        bds[p + 1].append([ZERO] * cells[p + 2])
    cells[p] += 1
    cells[p + 1] += 1
    return CellSystem(len(cells) - 1, cs.alphabet_size, tuple(cells), bds, cs.relators, cs.marks)


def relift(cs: CellSystem, p: int, j: int, word) -> CellSystem:
    """Replace the lift of cell (p, j) by its translate under ``word``.

    Column j of d_p is right-multiplied by ``word`` and row j of d_{p+1} is
    left-multiplied by its inverse.
    """
    u = gr_word(word)
    uinv = gr_word(invert_word(word))
    bds = _mutable(cs)
    if p >= 1:
        for row in bds[p - 1]:
            row[j] = gr_mul(row[j], u)
    if p + 1 <= cs.dim:
        bds[p][j] = [gr_mul(uinv, e) for e in bds[p][j]]
    return CellSystem(cs.dim, cs.alphabet_size, cs.cells, bds, cs.relators, cs.marks)


def remove_top_cell(cs: CellSystem, index: int = 0) -> CellSystem:
    """Delete one top-dimensional cell (nothing has it in its boundary)."""
    p = cs.dim
    cells = list(cs.cells)
    bds = _mutable(cs)
    for row in bds[p - 1]:
        del row[index]
    cells[p] -= 1
    marks = {}
    for name, ids in cs.marks.items():
        if (p, index) in ids:
            continue
        marks[name] = [(q, i - 1 if q == p and i > index else i) for q, i in ids]
    return CellSystem(cs.dim, cs.alphabet_size, tuple(cells), bds, cs.relators, marks)


def subcomplex(cs: CellSystem, ids, trivial_labels: bool = True) -> CellSystem:
    """Subcomplex on the listed ``(degree, index)`` cells, in list order.

    Fails if the boundary of a listed cell leaves the list or, with
    ``trivial_labels``, if any boundary word inside it is not the identity.
    """
    ids = list(ids)
    if len(set(ids)) != len(ids):
        raise BadIdentification("repeated cell in subcomplex")
    top = max((q for q, _ in ids), default=0)
    per_deg = [[i for q, i in ids if q == p] for p in range(top + 1)]
    pos = [{i: k for k, i in enumerate(lst)} for lst in per_deg]
    bds = []
    for p in range(1, top + 1):
        full = cs.boundary(p)
        m = [[ZERO] * len(per_deg[p]) for _ in per_deg[p - 1]]
        for k, j in enumerate(per_deg[p]):
            for i in range(cs.cells[p - 1]):
                e = full[i][j]
                if not e:
                    continue
                if i not in pos[p - 1]:
                    raise BadIdentification(f"boundary of cell ({p}, {j}) leaves the subcomplex")
                if trivial_labels and any(w for _, w in e):
                    raise BadIdentification(f"cell ({p}, {j}) has a non-trivial label inside the subcomplex")
                m[pos[p - 1][i]][k] = e
        bds.append(m)
    alphabet = 0 if trivial_labels else cs.alphabet_size
    return CellSystem(top, alphabet, tuple(len(x) for x in per_deg), bds, (), {})


@dataclass(frozen=True)
class Inclusions:
    """Cell-index maps for Y -> X1, Y -> X2, X1 -> X, X2 -> X, per degree."""

    x1: CellSystem
    x2: CellSystem
    y: CellSystem
    y_to_x1: tuple
    y_to_x2: tuple
    x1_to_x: tuple
    x2_to_x: tuple


def union_along(cs1: CellSystem, cs2: CellSystem, mark1: str, mark2: str | None = None):
    """Glue ``cs1`` and ``cs2`` along identified marked subcomplexes.

    The i-th cell of ``cs1.marks[mark1]`` is identified with the i-th cell of
    ``cs2.marks[mark2]``.  Both marked subcomplexes must be closed and carry
    identity labels, and the identification must respect boundaries.  The
    alphabet of the union is the disjoint union of the two alphabets, cells
    of ``cs1`` keep their indices and the remaining cells of ``cs2`` follow.

    Returns ``(X, Inclusions)``.
    """
    mark2 = mark1 if mark2 is None else mark2
    try:
        ids1 = list(cs1.marks[mark1])
        ids2 = list(cs2.marks[mark2])
    except KeyError as exc:
        raise BadIdentification(f"missing mark {exc.args[0]!r}") from None
    if len(ids1) != len(ids2):
        raise BadIdentification(f"marks have {len(ids1)} and {len(ids2)} cells")
    for (q1, _), (q2, _) in zip(ids1, ids2):
        if q1 != q2:
            raise BadIdentification(f"cannot identify a {q1}-cell with a {q2}-cell")
    y = subcomplex(cs1, ids1)
    y2 = subcomplex(cs2, ids2)
    if y.cells != y2.cells or y.boundaries != y2.boundaries:
        raise BadIdentification("identified cells have different boundaries")

    dim = max(cs1.dim, cs2.dim)
    k1 = cs1.alphabet_size
    top_y = y.dim
    per1 = [[i for q, i in ids1 if q == p] for p in range(top_y + 1)]
    per2 = [[i for q, i in ids2 if q == p] for p in range(top_y + 1)]

    cells = [cs1.count(p) for p in range(dim + 1)]
    x1_to_x = tuple(tuple(range(cs1.count(p))) for p in range(cs1.dim + 1))
    x2_to_x = []
    for p in range(cs2.dim + 1):
        glued = dict(zip(per2[p], per1[p])) if p <= top_y else {}
        m = []
        for i in range(cs2.cells[p]):
            if i in glued:
                m.append(glued[i])
            else:
                m.append(cells[p])
                cells[p] += 1
        x2_to_x.append(tuple(m))

    bds = [[[ZERO] * cells[p] for _ in range(cells[p - 1])] for p in range(1, dim + 1)]
    for p in range(1, cs1.dim + 1):
        for i, row in enumerate(cs1.boundary(p)):
            for j, e in enumerate(row):
                bds[p - 1][i][j] = e
    for p in range(1, cs2.dim + 1):
        for i, row in enumerate(cs2.boundary(p)):
            for j, e in enumerate(row):
                if p <= top_y and j in per2[p]:
                    continue
                if e:
                    bds[p - 1][x2_to_x[p - 1][i]][x2_to_x[p][j]] = shift_element(e, k1)

    relators = cs1.relators + tuple(shift_word(w, k1) for w in cs2.relators)
    marks = dict(cs1.marks)
    for name, lst in cs2.marks.items():
        if name == mark2:
            continue
        key = name if name not in marks else name + "_2"
        marks[key] = [(q, x2_to_x[q][i]) for q, i in lst]
    x = CellSystem(dim, k1 + cs2.alphabet_size, tuple(cells), bds, relators, marks)
    inc = Inclusions(
        x1=cs1,
        x2=cs2,
        y=y,
        y_to_x1=tuple(tuple(lst) for lst in per1),
        y_to_x2=tuple(tuple(lst) for lst in per2),
        x1_to_x=x1_to_x,
        x2_to_x=tuple(x2_to_x),
    )
    return x, inc
