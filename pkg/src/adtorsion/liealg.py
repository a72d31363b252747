"""SL_n(C) representations and the adjoint action on sl_n(C).

The bilinear form on sl_n is fixed as ``B(X, Y) = 4 tr(XY)`` for every n.
Coordinates of a traceless matrix in a B-orthonormal basis ``a_1..a_d`` are
``B(X, a_k)``, so the adjoint matrix of ``A`` has entries
``B(a_i, A a_j A^{-1})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotUnimodular, RelatorViolated, SizeMismatch, UnknownLetter, ValidationError
from .linalg import DEFAULT_TOL, Tolerance

KILLING_SCALE = 4.0

Word = tuple  # tuple of (generator index, exponent in {+1, -1})


def killing_form(x, y) -> complex:
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.ndim != 2 or x.shape != y.shape or x.shape[0] != x.shape[1]:
        raise SizeMismatch(f"cannot pair matrices of shapes {x.shape} and {y.shape}")
    # tr(XY) without forming the product
    return complex(KILLING_SCALE * np.sum(x * y.T))


def gram_schmidt(mats) -> list[np.ndarray]:
    """Orthonormalize w.r.t. the symmetric (not Hermitian) form B.

    Norms are principal complex square roots.  Raises if a partially reduced
    vector is isotropic, since B-normalizing it is impossible.
    """
    out: list[np.ndarray] = []
    for m in mats:
        v = np.array(m, dtype=complex)
        for u in out:
            v = v - killing_form(v, u) * u
        q = killing_form(v, v)
        if abs(q) < 1e-10 * max(1.0, float(np.abs(v).max()) ** 2):
            raise ValidationError("isotropic vector met during Gram-Schmidt; reorder the input")
        out.append(v / np.sqrt(q))
    return out


def elementary_traceless(n: int) -> list[np.ndarray]:
    """Symmetric/antisymmetric off-diagonal pairs, then diagonal differences.

    Plain E_ij is B-isotropic, so the pairs E_ij +- E_ji are used instead.
    """
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[i, j] = s[j, i] = 1.0
            a = np.zeros((n, n), dtype=complex)
            a[i, j], a[j, i] = 1.0, -1.0
            mats += [s, a]
    for k in range(n - 1):
        h = np.zeros((n, n), dtype=complex)
        h[k, k], h[k + 1, k + 1] = 1.0, -1.0
        mats.append(h)
    return mats


def orthonormal_basis(n: int) -> list[np.ndarray]:
    if n < 2:
        raise ValidationError("sl_n needs n >= 2")
    # Cartan part first so n = 2 gives H, E+F, E-F up to scale
    mats = elementary_traceless(n)
    diag, off = mats[n * (n - 1):], mats[: n * (n - 1)]
    return gram_schmidt(diag + off)


def random_orthonormal_basis(n: int, rng: np.random.Generator) -> list[np.ndarray]:
    """A generic B-orthonormal basis, from Gram-Schmidt on random traceless matrices."""
    mats = []
    for _ in range(n * n - 1):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        mats.append(m - np.trace(m) / n * np.eye(n))
    return gram_schmidt(mats)


@dataclass(frozen=True)
class Representation:
    """Images of the generator alphabet in SL_n(C)."""

    n: int
    images: tuple
    tol: Tolerance = DEFAULT_TOL
    _inverses: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        imgs = tuple(np.array(m, dtype=complex) for m in self.images)
        for k, m in enumerate(imgs):
            if m.shape != (self.n, self.n):
                raise SizeMismatch(f"image of letter {k} has shape {m.shape}, expected {(self.n, self.n)}")
            if not np.all(np.isfinite(m)):
                raise ValidationError(f"image of letter {k} has non-finite entries")
            m.setflags(write=False)
        object.__setattr__(self, "images", imgs)
        eye = np.eye(self.n, dtype=complex)
        inv = []
        for k, m in enumerate(imgs):
            try:
                inv.append(np.linalg.solve(m, eye))
            except np.linalg.LinAlgError:
                raise NotUnimodular(k, 0j) from None
        object.__setattr__(self, "_inverses", tuple(inv))

    @property
    def alphabet_size(self) -> int:
        return len(self.images)

    def evaluate(self, word) -> np.ndarray:
        out = np.eye(self.n, dtype=complex)
        for g, e in word:
            if not 0 <= g < self.alphabet_size:
                raise UnknownLetter(f"letter {g} outside alphabet of size {self.alphabet_size}")
            out = out @ (self.images[g] if e > 0 else self._inverses[g])
        return out

    def conjugate(self, u) -> Representation:
        u = np.asarray(u, dtype=complex)
        uinv = np.linalg.solve(u, np.eye(self.n))
        return Representation(self.n, tuple(u @ m @ uinv for m in self.images), self.tol)

    def restrict(self, start: int, stop: int) -> Representation:
        return Representation(self.n, self.images[start:stop], self.tol)

    def concat(self, other: Representation) -> Representation:
        if other.n != self.n:
            raise SizeMismatch("representations of different rank")
        return Representation(self.n, self.images + other.images, self.tol)


@dataclass(frozen=True)
class ValidationReport:
    max_det_deviation: float
    max_relator_deviation: float


def validate_representation(rep: Representation, relators=(), allow_minus_identity=False) -> ValidationReport:
    """Check SL_n membership and that every relator maps to the identity.

    With ``allow_minus_identity`` a relator may also evaluate to ``-I``
    (a projective relation); by default only ``+I`` is accepted.
    """
    tol = rep.tol
    worst_det = 0.0
    for k, m in enumerate(rep.images):
        d = complex(np.linalg.det(m))
        worst_det = max(worst_det, abs(d - 1))
        if abs(d - 1) > tol.compare_rel:
            raise NotUnimodular(k, d)
    eye = np.eye(rep.n)
    worst_rel = 0.0
    for idx, w in enumerate(relators):
        val = rep.evaluate(w)
        scale = max(1.0, float(np.abs(val).max()))
        dev = float(np.abs(val - eye).max())
        if allow_minus_identity:
            dev = min(dev, float(np.abs(val + eye).max()))
        worst_rel = max(worst_rel, dev)
        if dev > tol.compare_rel * scale:
            raise RelatorViolated(idx, dev)
    return ValidationReport(worst_det, worst_rel)


@dataclass(frozen=True)
class AdjointData:
    d: int
    basis: tuple
    ad_images: tuple

    @property
    def stacked_basis(self) -> np.ndarray:
        return np.stack(self.basis)


def adjoint_matrix(a, basis) -> np.ndarray:
    """Matrix of X -> A X A^{-1} in the B-orthonormal ``basis``."""
    a = np.asarray(a, dtype=complex)
    basis = np.stack(basis) if not isinstance(basis, np.ndarray) else basis
    ainv = np.linalg.solve(a, np.eye(a.shape[0]))
    conj = a @ basis @ ainv
    # entry (i, j) = B(a_i, conj_j) = 4 tr(a_i conj_j)
    return KILLING_SCALE * np.einsum("ikl,jlk->ij", basis, conj)


def adjoint_data(rep: Representation, basis=None) -> AdjointData:
    if basis is None:
        basis = orthonormal_basis(rep.n)
    basis = tuple(np.asarray(b, dtype=complex) for b in basis)
    if len(basis) != rep.n * rep.n - 1:
        raise SizeMismatch(f"basis has {len(basis)} elements, expected {rep.n * rep.n - 1}")
    stacked = np.stack(basis)
    ads = tuple(adjoint_matrix(m, stacked) for m in rep.images)
    return AdjointData(len(basis), basis, ads)


def adjoint_of_word(rep: Representation, ad: AdjointData, word) -> np.ndarray:
    if not word:
        return np.eye(ad.d, dtype=complex)
    return adjoint_matrix(rep.evaluate(word), ad.stacked_basis)


def random_sl(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of SL_n(C): a complex Gaussian matrix rescaled to det 1."""
    while True:
        m = scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        d = np.linalg.det(m)
        if abs(d) > 1e-3:
            return m / d ** (1.0 / n)


def root_of_unity_image(p: int, k: int = 1) -> np.ndarray:
    z = np.exp(2j * np.pi * k / p)
    return np.diag([z, 1 / z])
