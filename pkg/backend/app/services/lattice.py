"""
Exact integer linear algebra.

Matrices are numpy arrays with ``dtype=object`` so every entry stays a Python
int. Vectors of a basis are the COLUMNS of a matrix.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from app.exceptions import LatticeError
from app.utils.exact import integer_determinant, inverse, rank

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]
IntMatrix = np.ndarray


@dataclass(frozen=True)
class LatticeBasis:
    """Basis of a sublattice of Z^n, stored as column vectors"""

    ambient: int
    vectors: Tuple[IntVector, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> IntMatrix:
        return int_matrix(self.vectors, self.ambient)


BasisLike = Union[LatticeBasis, IntMatrix, Sequence[Sequence[int]]]


def int_matrix(columns: Iterable[Sequence[int]], n: int) -> IntMatrix:
    """Assemble an n x k object matrix from k column vectors"""
    columns = [tuple(int(x) for x in c) for c in columns]
    for c in columns:
        if len(c) != n:
            raise LatticeError(f"vector {c} does not have length {n}")
    M = np.zeros((n, len(columns)), dtype=object)
    for j, c in enumerate(columns):
        M[:, j] = c
    return M


def columns_of(M: IntMatrix) -> List[IntVector]:
    return [tuple(int(x) for x in M[:, j]) for j in range(M.shape[1])]


def _as_matrix(B: BasisLike, n: int = None) -> IntMatrix:
    if isinstance(B, LatticeBasis):
        return B.matrix
    if isinstance(B, np.ndarray):
        return B.astype(object)
    if n is None:
        if not B:
            raise LatticeError("ambient dimension needed for an empty vector list")
        n = len(B[0])
    return int_matrix(B, n)


def _identity(n: int) -> IntMatrix:
    return np.eye(n, dtype=int).astype(object)


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries"""
    v = tuple(int(x) for x in v)
    g = gcd(*v) if v else 0
    if g == 0:
        raise LatticeError("zero vector has no primitive direction")
    return tuple(x // g for x in v)


def _exgcd(a: int, b: int) -> IntMatrix:
    """
    2x2 integer matrix E with det 1 and E @ [a, b] = [g, 0], g = gcd(a, b) >= 0.
    If a divides b, E[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign

    # Euclid on the column [b, a] augmented by the identity
    M = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1].copy()

    g = M[0, 0]
    E = M[:, 1:].copy()
    E[:, 0] *= a_sign
    E[:, 1] *= b_sign
    if g != 0:
        E[1] = [-b_sign * b // g, a_sign * a // g]
    else:
        E = _identity(2)
    return E


def _inv2(E: IntMatrix) -> IntMatrix:
    return np.array([[E[1, 1], -E[0, 1]], [-E[1, 0], E[0, 0]]], dtype=object)


def _column_hnf(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Column Hermite normal form by unimodular column operations.

    Returns (H, U, Uinv) with M @ U = H and U @ Uinv = I. H is lower
    triangular in echelon shape: pivots positive, zero columns last, and the
    entries left of a pivot in its row lie in [0, pivot).
    """
    H = np.array(M, dtype=object).copy()
    m, k = H.shape
    U, Uinv = _identity(k), _identity(k)

    p = 0
    for i in range(m):
        if p == k:
            break
        for j in range(p + 1, k):
            if H[i, j] == 0:
                continue
            E = _exgcd(H[i, p], H[i, j])
            H[:, [p, j]] = H[:, [p, j]] @ E.T
            U[:, [p, j]] = U[:, [p, j]] @ E.T
            Uinv[[p, j], :] = _inv2(E.T) @ Uinv[[p, j], :]
        pivot = H[i, p]
        if pivot == 0:
            continue
        if pivot < 0:
            H[:, p] *= -1
            U[:, p] *= -1
            Uinv[p, :] *= -1
            pivot = -pivot
        for c in range(p):
            q = H[i, c] // pivot
            if q:
                H[:, c] -= q * H[:, p]
                U[:, c] -= q * U[:, p]
                Uinv[p, :] += q * Uinv[c, :]
        p += 1
    return H, U, Uinv


def hermite_normal_form(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form: returns (H, U) with M @ U = H, U unimodular"""
    H, U, _ = _column_hnf(M)
    return H, U


def _smith(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    S = np.array(M, dtype=object).copy()
    m, k = S.shape
    U, V, Uinv = _identity(m), _identity(k), _identity(m)

    for t in range(min(m, k)):
        candidates = [
            (abs(S[i, j]), i, j)
            for i in range(t, m)
            for j in range(t, k)
            if S[i, j] != 0
        ]
        if not candidates:
            break
        _, i0, j0 = min(candidates)
        S[[t, i0], :] = S[[i0, t], :]
        U[[t, i0], :] = U[[i0, t], :]
        Uinv[:, [t, i0]] = Uinv[:, [i0, t]]
        S[:, [t, j0]] = S[:, [j0, t]]
        V[:, [t, j0]] = V[:, [j0, t]]

        while True:
            changed = False
            for i in range(t + 1, m):
                if S[i, t] != 0:
                    E = _exgcd(S[t, t], S[i, t])
                    S[[t, i], :] = E @ S[[t, i], :]
                    U[[t, i], :] = E @ U[[t, i], :]
                    Uinv[:, [t, i]] = Uinv[:, [t, i]] @ _inv2(E)
                    changed = True
            for j in range(t + 1, k):
                if S[t, j] != 0:
                    E = _exgcd(S[t, t], S[t, j])
                    S[:, [t, j]] = S[:, [t, j]] @ E.T
                    V[:, [t, j]] = V[:, [t, j]] @ E.T
                    changed = True
            if changed:
                continue

            # divisibility chain: fold an offending row into the pivot row
            offending = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, k)
                    if S[i, j] % S[t, t] != 0
                ),
                None,
            )
            if offending is None:
                break
            S[t, :] += S[offending, :]
            U[t, :] += U[offending, :]
            Uinv[:, offending] -= Uinv[:, t]

        if S[t, t] < 0:
            S[t, :] *= -1
            U[t, :] *= -1
            Uinv[:, t] *= -1

    return S, U, V, Uinv


def smith_normal_form(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (S, U, V) with U @ M @ V = S, d1 | d2 | ..."""
    S, U, V, _ = _smith(M)
    return S, U, V


def invariant_factors(M: IntMatrix) -> List[int]:
    S, _, _, _ = _smith(M)
    return [int(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]


def lattice_rank(M: IntMatrix) -> int:
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    return rank([list(row) for row in M])


def _canonical(columns: IntMatrix, n: int) -> LatticeBasis:
    if columns.shape[1] == 0:
        return LatticeBasis(n, ())
    H, _, _ = _column_hnf(columns)
    vectors = tuple(c for c in columns_of(H) if any(c))
    return LatticeBasis(n, vectors)


def saturate(dirs: Iterable[Sequence[int]], n: int) -> LatticeBasis:
    """Basis of span_R(dirs) ∩ Z^n, in column Hermite normal form"""
    M = int_matrix(dirs, n)
    if M.shape[1] == 0 or all(x == 0 for x in M.flat):
        return LatticeBasis(n, ())
    S, _, _, Uinv = _smith(M)
    r = sum(1 for i in range(min(S.shape)) if S[i, i] != 0)
    return _canonical(Uinv[:, :r], n)


def is_saturated(B: BasisLike, n: int = None) -> bool:
    M = _as_matrix(B, n)
    if M.shape[1] == 0:
        return True
    factors = invariant_factors(M)
    return len(factors) == M.shape[1] and all(d == 1 for d in factors)


def complete_to_unimodular(B: BasisLike, n: int = None) -> IntMatrix:
    """
    Extend a saturated basis to a matrix D in GL(n, Z) whose first columns
    are exactly the basis vectors.
    """
    M = _as_matrix(B, n)
    n, k = M.shape
    if k == 0:
        return _identity(n)

    # B^T U = [L | 0], so B = Uinv[:k]^T L^T
    H, _, Uinv = _column_hnf(M.T)
    L = H[:, :k]
    if any(x != 0 for x in H[:, k:].flat) or abs(integer_determinant(L.tolist())) != 1:
        raise LatticeError("basis not saturated; completion impossible")

    block = _identity(n)
    block[:k, :k] = L.T
    D = Uinv.T @ block
    assert (D[:, :k] == M).all()
    return D


def kernel_lattice(B: BasisLike, n: int = None) -> LatticeBasis:
    """Saturated basis of {xi in Z^n : B^T xi = 0}; each vector starts positive"""
    M = _as_matrix(B, n)
    n, k = M.shape
    if k == 0:
        return LatticeBasis(n, tuple(columns_of(_identity(n))))
    H, U, _ = _column_hnf(M.T)
    r = sum(1 for j in range(H.shape[1]) if any(x != 0 for x in H[:, j]))
    return _canonical(U[:, r:], n)


def minor(columns: Sequence[Sequence[int]], J: Sequence[int]) -> int:
    """Determinant of the rows J (1-based) of the matrix with the given columns"""
    if len(J) != len(columns):
        raise LatticeError(f"index set {tuple(J)} does not match {len(columns)} columns")
    rows = [[int(c[j - 1]) for c in columns] for j in J]
    return integer_determinant(rows)


def integer_inverse(D: IntMatrix) -> IntMatrix:
    rows = [list(r) for r in np.asarray(D, dtype=object)]
    inv = inverse(rows)
    if any(Fraction(x).denominator != 1 for row in inv for x in row):
        raise LatticeError("matrix is not unimodular")
    return np.array([[int(x) for x in row] for row in inv], dtype=object).reshape(
        len(rows), len(rows)
    )
