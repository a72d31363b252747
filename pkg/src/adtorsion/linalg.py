"""Dense complex linear algebra with explicit tolerances.

Matrices are plain ``numpy`` arrays of dtype complex128.  Rank decisions are
made by full-pivot Gauss-Jordan elimination with an absolute threshold equal
to ``pivot_eps`` times the largest entry of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInSpan, NotSquare, ValidationError


@dataclass(frozen=True)
class Tolerance:
    pivot_eps: float = 1e-9
    compare_rel: float = 1e-6

    def __post_init__(self):
        if not (self.pivot_eps > 0 and self.compare_rel > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerance()


def as_cmatrix(m, rows=None, cols=None) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d complex array.

    Pass ``rows``/``cols`` to give an empty input a definite shape.
    """
    a = np.asarray(m, dtype=complex)
    if a.size == 0 and a.ndim != 2:
        a = np.zeros((rows or 0, cols or 0), dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValidationError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.abs(m).max()) if m.size else 0.0


def _gauss_jordan(m: np.ndarray, tol: Tolerance):
    """Full-pivot reduction.

    Returns ``(reduced, colperm, rank)`` where ``reduced[:rank]`` equals
    ``[I | F]`` in the permuted column order ``colperm``.
    """
    a = np.array(m, dtype=complex)
    nr, nc = a.shape
    perm = np.arange(nc)
    threshold = tol.pivot_eps * max_abs(a)
    rank = 0
    if threshold == 0.0:
        return a, perm, 0
    while rank < min(nr, nc):
        sub = np.abs(a[rank:, rank:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= threshold:
            break
        i += rank
        j += rank
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        if j != rank:
            a[:, [rank, j]] = a[:, [j, rank]]
            perm[[rank, j]] = perm[[j, rank]]
        a[rank] /= a[rank, rank]
        col = a[:, rank].copy()
        col[rank] = 0.0
        a -= np.outer(col, a[rank])
        rank += 1
    return a, perm, rank


def rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    m = as_cmatrix(m)
    if m.size == 0:
        return 0
    return _gauss_jordan(m, tol)[2]


def image_basis(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Columns of ``m`` selected by the pivots; they span the column space."""
    m = as_cmatrix(m)
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    _, perm, r = _gauss_jordan(m, tol)
    return m[:, np.sort(perm[:r])]


def kernel_basis(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Basis of the numerical null space, one column per free variable."""
    m = as_cmatrix(m)
    nr, nc = m.shape
    if nc == 0:
        return np.zeros((0, 0), dtype=complex)
    if nr == 0:
        return np.eye(nc, dtype=complex)
    a, perm, r = _gauss_jordan(m, tol)
    free = nc - r
    k = np.zeros((nc, free), dtype=complex)
    k[perm[:r], :] = -a[:r, r:]
    k[perm[r:], np.arange(free)] = 1.0
    return k


def solve_in_span(m, b, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Return some ``x`` with ``m @ x == b``; raise NotInSpan when none exists."""
    m = as_cmatrix(m)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.shape[0] != m.shape[0]:
        raise ValidationError(f"right-hand side has length {b.shape[0]}, expected {m.shape[0]}")
    if m.shape[1] == 0:
        x = np.zeros(0, dtype=complex)
    else:
        x = np.linalg.lstsq(m, b, rcond=None)[0]
    residual = float(np.linalg.norm(m @ x - b)) if b.size else 0.0
    if residual > tol.pivot_eps * (1.0 + float(np.linalg.norm(b))):
        raise NotInSpan(f"residual {residual:.3e} exceeds threshold")
    return x


def solve_columns_in_span(m, bs, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    m = as_cmatrix(m)
    bs = as_cmatrix(bs, rows=m.shape[0])
    out = np.zeros((m.shape[1], bs.shape[1]), dtype=complex)
    for j in range(bs.shape[1]):
        out[:, j] = solve_in_span(m, bs[:, j], tol)
    return out


def det(m) -> complex:
    """Determinant by partial-pivot elimination; the 0x0 determinant is 1."""
    a = np.array(as_cmatrix(m), dtype=complex)
    n, nc = a.shape
    if n != nc:
        raise NotSquare(f"determinant of a {n}x{nc} matrix")
    sign = 1.0
    prod = 1.0 + 0.0j
    for k in range(n):
        i = k + int(np.argmax(np.abs(a[k:, k])))
        if a[i, k] == 0:
            return 0j
        if i != k:
            a[[k, i]] = a[[i, k]]
            sign = -sign
        prod *= a[k, k]
        a[k + 1:, k:] -= np.outer(a[k + 1:, k] / a[k, k], a[k, k:])
    return complex(sign * prod)


def eq_up_to_sign(a: complex, b: complex, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Equality in C*/{+-1}."""
    a, b = complex(a), complex(b)
    gap = min(abs(a - b), abs(a + b))
    return gap <= tol.compare_rel * max(abs(a), abs(b), 1.0)


def rel_gap_up_to_sign(a: complex, b: complex) -> float:
    a, b = complex(a), complex(b)
    return min(abs(a - b), abs(a + b)) / max(abs(a), abs(b), 1.0)
