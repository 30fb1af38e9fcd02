# springerlab/services/finite_field.py

"""
Finite fields F_{p^k} with p^k <= 81, exact linear algebra over F_p, and
bit-packed F_2 vectors.

Field elements are plain ints 0..q-1: the base-p digits of an element are the
coefficients (low degree first) of its polynomial representative modulo the
defining polynomial. Addition and multiplication go through precomputed
q x q tables so that numpy fancy indexing vectorises every operation.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from springerlab.services.errors import DomainMismatchError

logger = logging.getLogger(__name__)

# Conway polynomials, coefficients low degree first, monic.
CONWAY: Dict[Tuple[int, int], Tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}

MAX_ORDER = 81


# ==========================================================
# Fields
# ==========================================================

class GF:
    """The field with q = p^k elements, as add/mul/log tables."""

    def __init__(self, p: int, k: int = 1):
        q = p**k
        if q > MAX_ORDER and k > 1:
            raise DomainMismatchError(f"F_{p}^{k} is larger than the supported {MAX_ORDER}")
        if k > 1 and (p, k) not in CONWAY:
            raise DomainMismatchError(f"No defining polynomial shipped for F_{p}^{k}")
        self.p, self.k, self.q = p, k, q
        self.poly = CONWAY.get((p, k), (0, 1))
        self._digits = np.array(
            [[(a // p**i) % p for i in range(k)] for a in range(q)], dtype=np.int64
        )
        self._weights = np.array([p**i for i in range(k)], dtype=np.int64)
        # x^m reduced, for m < 2k - 1
        self._reduce = self._power_table()
        self.add = (
            (self._digits[:, None, :] + self._digits[None, :, :]) % p
        ) @ self._weights
        self.neg = ((-self._digits) % p) @ self._weights
        self.sub = self.add[:, self.neg]
        self.mul = self._mul_table()
        self._build_logs()
        logger.debug("Built F_%d (p=%d, k=%d), generator %d", q, p, k, self.generator)

    def __repr__(self):
        return f"GF({self.p}, {self.k})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    # ---------------- construction ----------------

    def _power_table(self) -> np.ndarray:
        p, k = self.p, self.k
        size = max(2 * k - 1, 1)
        out = np.zeros((size, k), dtype=np.int64)
        cur = np.zeros(k, dtype=np.int64)
        cur[0] = 1
        for m in range(size):
            out[m] = cur
            top = cur[k - 1]
            shifted = np.concatenate([[0], cur[:-1]])
            cur = (shifted - top * np.array(self.poly[:k], dtype=np.int64)) % p
        return out

    def _reduce_digits(self, raw: np.ndarray) -> np.ndarray:
        """raw[..., m] are coefficients of x^m for m < 2k-1; returns (..., k) digits."""
        return (raw @ self._reduce) % self.p

    def _mul_table(self) -> np.ndarray:
        k = self.k
        d = self._digits
        raw = np.zeros((self.q, self.q, max(2 * k - 1, 1)), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                raw[:, :, i + j] += d[:, None, i] * d[None, :, j]
        return self._reduce_digits(raw) @ self._weights

    def _build_logs(self):
        q = self.q
        for g in range(1, q):
            seen = []
            x = 1
            for _ in range(q - 1):
                seen.append(x)
                x = int(self.mul[x, g])
            if x == 1 and len(set(seen)) == q - 1:
                break
        else:
            raise DomainMismatchError(f"{self!r}: defining polynomial is not irreducible")
        self.generator = g
        self.exp = np.array(seen, dtype=np.int64)
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(q - 1)
        # Zech logarithms: g^zech[n] = 1 + g^n, -1 where 1 + g^n = 0
        self.zech = self.log[self.add[1, self.exp]]
        self.inv = np.zeros(q, dtype=np.int64)
        self.inv[self.exp] = self.exp[(-np.arange(q - 1)) % (q - 1)]

    # ---------------- scalars ----------------

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> List[int]:
        return list(range(self.q))

    def units(self) -> List[int]:
        return [int(x) for x in self.exp]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return int(n) % self.p

    def power(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if n == 0 else 0
        return int(self.exp[(int(self.log[a]) * n) % (self.q - 1)])

    def frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    def sqrt(self, a: int) -> Optional[int]:
        for x in range(self.q):
            if self.mul[x, x] == a:
                return x
        return None

    def resolve(self, value) -> int:
        """Field element from an int or one of the names 'eta' (a square root of -1) / 'gen'."""
        if isinstance(value, str):
            if value == "eta":
                root = self.sqrt(self.neg[1])
                if root is None:
                    raise DomainMismatchError(f"-1 is not a square in F_{self.q}")
                return root
            if value == "-eta":
                return int(self.neg[self.resolve("eta")])
            if value == "gen":
                return self.generator
            return self.from_int(int(value))
        return self.from_int(value)

    def to_int(self, a: int) -> int:
        """Symmetric lift of a prime-field element."""
        if a >= self.p:
            raise DomainMismatchError(f"{a} is not in the prime field of F_{self.q}")
        return a if a <= self.p // 2 else a - self.p

    # ---------------- matrices ----------------

    def encode(self, M) -> np.ndarray:
        """Integer array -> array of field codes in the prime subfield."""
        return np.mod(np.asarray(M, dtype=np.int64), self.p)

    def scale(self, c: int, M: np.ndarray) -> np.ndarray:
        return self.mul[c, M]

    def mat_add(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return self.add[A, B]

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def mat_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Product of code matrices, through k^2 integer matmuls on digit layers."""
        if self.k == 1:
            return (A @ B) % self.p
        k = self.k
        da = self._digits[A]
        db = self._digits[B]
        raw = np.zeros(A.shape[:-1] + B.shape[1:] + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                raw[..., i + j] += da[..., i] @ db[..., j]
        return self._reduce_digits(raw % self.p) @ self._weights

    def mat_inv(self, A: np.ndarray) -> np.ndarray:
        n = A.shape[0]
        M = np.concatenate([A.copy(), self.identity(n)], axis=1)
        for col in range(n):
            pivots = np.nonzero(M[col:, col])[0]
            if not len(pivots):
                raise DomainMismatchError("matrix is singular")
            r = col + int(pivots[0])
            if r != col:
                M[[col, r]] = M[[r, col]]
            M[col] = self.mul[self.inv[M[col, col]], M[col]]
            factors = M[:, col].copy()
            factors[col] = 0
            rows = np.nonzero(factors)[0]
            if len(rows):
                M[rows] = self.sub[M[rows], self.mul[factors[rows][:, None], M[col][None, :]]]
        return M[:, n:]

    def mat_apply(self, M: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Apply M to a batch of row vectors V (shape (B, n))."""
        return self.mat_mul(V, M.T)


@lru_cache(maxsize=None)
def get_field(q: int) -> GF:
    for p in (2, 3, 5, 7, 11, 13):
        k, r = 0, q
        while r % p == 0:
            r //= p
            k += 1
        if r == 1 and k:
            return GF(p, k)
    raise DomainMismatchError(f"{q} is not a supported prime power")


# ==========================================================
# Linear algebra over F_p (p prime)
# ==========================================================

def row_reduce_mod_p(M, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns over F_p."""
    A = np.mod(np.array(M, dtype=np.int64), p)
    rows, cols = A.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if not len(nz):
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        f = A[:, c].copy()
        f[r] = 0
        A = (A - np.outer(f, A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_mod_p(M, p: int) -> int:
    if np.size(M) == 0:
        return 0
    return len(row_reduce_mod_p(M, p)[1])


def nullspace_mod_p(M, p: int) -> np.ndarray:
    """Basis of {v : M v = 0} over F_p, one vector per row."""
    A, pivots = row_reduce_mod_p(M, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


# ==========================================================
# Bit-packed F_2 vectors
# ==========================================================

def pack_bits(V: np.ndarray) -> np.ndarray:
    """Rows of a 0/1 matrix (width <= 64) -> uint64 words, column j at bit j."""
    V = np.asarray(V, dtype=np.uint64) & np.uint64(1)
    weights = np.left_shift(np.uint64(1), np.arange(V.shape[-1], dtype=np.uint64))
    return np.bitwise_or.reduce(V * weights, axis=-1)


def unpack_bits(words: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width, dtype=np.uint64)
    return ((np.asarray(words, dtype=np.uint64)[..., None] >> shifts) & np.uint64(1)).astype(np.int64)


def packed_columns(M: np.ndarray) -> List[Tuple[int, np.uint64]]:
    """(column index, packed column) for the nonzero columns of a 0/1 matrix."""
    out = []
    for c in range(M.shape[1]):
        col = np.asarray(M[:, c]) % 2
        if col.any():
            out.append((c, pack_bits(col[None, :])[0]))
    return out


def packed_apply(words: np.ndarray, columns: Sequence[Tuple[int, np.uint64]]) -> np.ndarray:
    """N v for packed vectors v, given the packed nonzero columns of N."""
    acc = np.zeros_like(words)
    one = np.uint64(1)
    for c, col in columns:
        acc ^= ((words >> np.uint64(c)) & one) * col
    return acc
