"""Dense exact linear algebra over a table-backed field (`arith.Fq`).

Matrices are tuples of tuples of element codes; vectors are tuples of codes.
Everything here is small (dimension <= ~30), so clarity beats speed.  A
separate vectorized routine handles nullspaces of integer matrices mod p,
which the invariant-form solver uses on prime-field coordinates.
"""

from __future__ import annotations

import numpy as np

from .arith import Fq

Mat = tuple[tuple[int, ...], ...]
Vec = tuple[int, ...]


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero(n: int, m: int | None = None) -> Mat:
    m = n if m is None else m
    return tuple((0,) * m for _ in range(n))


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A))


def mat_mul(F: Fq, A: Mat, B: Mat) -> Mat:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = 0
            for t in range(k):
                acc = F.add2(acc, F.mul2(Ai[t], B[t][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(F: Fq, A: Mat, v: Vec) -> Vec:
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            acc = F.add2(acc, F.mul2(a, x))
        out.append(acc)
    return tuple(out)


def mat_sub(F: Fq, A: Mat, B: Mat) -> Mat:
    return tuple(
        tuple(F.sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def scal_mul(F: Fq, c: int, A: Mat) -> Mat:
    return tuple(tuple(F.mul2(c, a) for a in row) for row in A)


def mat_pow(F: Fq, A: Mat, e: int) -> Mat:
    if e < 0:
        return mat_pow(F, mat_inv(F, A), -e)
    R = identity(len(A))
    while e:
        if e & 1:
            R = mat_mul(F, R, A)
        A = mat_mul(F, A, A)
        e >>= 1
    return R


def mat_inv(F: Fq, A: Mat) -> Mat:
    n = len(A)
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        c = F.inv(aug[col][col])
        aug[col] = [F.mul2(c, a) for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [
                    F.sub(a, F.mul2(f, b)) for a, b in zip(aug[r], aug[col])
                ]
    return tuple(tuple(row[n:]) for row in aug)


def det(F: Fq, A: Mat) -> int:
    n = len(A)
    M = [list(row) for row in A]
    d = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            d = int(F.neg[d])
        d = F.mul2(d, M[col][col])
        c = F.inv(M[col][col])
        for r in range(col + 1, n):
            if M[r][col]:
                f = F.mul2(c, M[r][col])
                M[r] = [F.sub(a, F.mul2(f, b)) for a, b in zip(M[r], M[col])]
    return d


def rref(F: Fq, A: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot column list."""
    M = [list(row) for row in A]
    n = len(M)
    m = len(M[0]) if n else 0
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        c = F.inv(M[r][col])
        M[r] = [F.mul2(c, a) for a in M[r]]
        for i in range(n):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [F.sub(a, F.mul2(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return tuple(tuple(row) for row in M), pivots


def rank(F: Fq, A: Mat) -> int:
    return len(rref(F, A)[1])


def nullspace(F: Fq, A: Mat) -> list[Vec]:
    """Basis of the right nullspace {v : Av = 0}."""
    if not A:
        return []
    m = len(A[0])
    R, pivots = rref(F, A)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * m
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = int(F.neg[R[r][fc]])
        basis.append(tuple(v))
    return basis


class Echelon:
    """Incremental row-echelon basis over F; used for spinning closures."""

    def __init__(self, F: Fq, width: int):
        self.F = F
        self.width = width
        self.rows: list[list[int]] = []
        self.pivot_cols: list[int] = []

    def reduce(self, v) -> list[int]:
        F = self.F
        v = list(v)
        for row, pc in zip(self.rows, self.pivot_cols):
            if v[pc]:
                f = v[pc]
                v = [F.sub(a, F.mul2(f, b)) for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        """Insert v; returns True if it enlarged the span."""
        v = self.reduce(v)
        pc = next((i for i, a in enumerate(v) if a), None)
        if pc is None:
            return False
        c = self.F.inv(v[pc])
        v = [self.F.mul2(c, a) for a in v]
        self.rows.append(v)
        self.pivot_cols.append(pc)
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def fp_nullspace(p: int, M: np.ndarray) -> np.ndarray:
    """Right-nullspace basis of an integer matrix mod p (rows = vectors)."""
    M = np.array(M, dtype=np.int64) % p
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if M[i, col] % p:
                piv = i
                break
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, col]), -1, p)) % p
        mask = (M[:, col] != 0) & (np.arange(nrows) != r)
        M[mask] = (M[mask] - np.outer(M[mask, col], M[r])) % p
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-M[i, fc]) % p
    return basis
