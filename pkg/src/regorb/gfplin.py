"""Exact linear algebra over prime fields F_p.

Everything works on numpy int64 arrays holding canonical residues in
[0, p).  Vectors are rows and act on the right throughout the package,
so the kernel of a matrix here is the *left* kernel {x : x @ a == 0}.
Kernels and spans are always returned as canonical reduced-row-echelon
bases, which makes subspaces comparable by array equality.

For p == 2 a bit-packed elimination path (uint64 words) is used by
default; the unpacked generic path stays available behind the
``use_packed`` flag and both produce identical output.
"""

from __future__ import annotations

import numpy as np

PRIME_LIMIT = 1 << 16

# Fixed engine-wide default seed, recorded in every report that samples.
DEFAULT_SEED = 0x5EED0B17


class BudgetExceededError(RuntimeError):
    """An operation would exceed its declared resource budget."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"modulus must be prime, got {p!r}")
    if p > PRIME_LIMIT:
        raise ValueError(f"modulus {p} exceeds supported limit {PRIME_LIMIT}")
    return int(p)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0")
    return pow(a, p - 2, p)


def as_fp(a, p: int) -> np.ndarray:
    return np.asarray(np.mod(np.asarray(a, dtype=np.int64), p), dtype=np.int64)


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.int64)


def matmul(a, b, p: int) -> np.ndarray:
    """a @ b mod p, exact.

    Routed through float64 BLAS when every inner product is < 2^53,
    which holds for all dimensions this package touches; int64 einsum
    otherwise.
    """
    a = as_fp(a, p)
    b = as_fp(b, p)
    inner = a.shape[-1]
    if inner == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    if inner * (p - 1) * (p - 1) < (1 << 53):
        c = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(c, p).astype(np.int64)
    return np.mod(a @ b, p)


# ---------------------------------------------------------------- packed GF(2)


def _pack_rows(a: np.ndarray) -> np.ndarray:
    m, n = a.shape
    nbytes = -(-max(n, 1) // 8)
    nwords = -(-nbytes // 8)
    packed = np.packbits(a.astype(np.uint8), axis=1, bitorder="little")
    buf = np.zeros((m, nwords * 8), dtype=np.uint8)
    buf[:, :packed.shape[1]] = packed
    return buf.view(np.uint64)


def _unpack_rows(w: np.ndarray, n: int) -> np.ndarray:
    bits = np.unpackbits(w.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :n].astype(np.int64)


def _rref2(a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    m, n = a.shape
    if m == 0 or n == 0:
        return a.astype(np.int64).copy(), ()
    w = _pack_rows(a)
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        word, shift = col >> 6, col & 63
        colbits = (w[:, word] >> np.uint64(shift)) & np.uint64(1)
        nz = np.flatnonzero(colbits[row:])
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            w[[row, pr]] = w[[pr, row]]
            colbits[[row, pr]] = colbits[[pr, row]]
        hit = np.flatnonzero(colbits)
        hit = hit[hit != row]
        if hit.size:
            w[hit] ^= w[row]
        pivots.append(col)
        row += 1
    return _unpack_rows(w, n), tuple(pivots)


# --------------------------------------------------------------- generic rref


def rref(a, p: int, use_packed: bool | None = None) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    p = check_prime(p)
    a = np.atleast_2d(as_fp(a, p))
    if use_packed is None:
        use_packed = p == 2
    if p == 2 and use_packed:
        return _rref2(a)
    r = a.copy()
    m, n = r.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(r[row:, col])
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            r[[row, pr]] = r[[pr, row]]
        lead = int(r[row, col])
        if lead != 1:
            r[row] = r[row] * inv_mod(lead, p) % p
        hit = np.flatnonzero(r[:, col])
        hit = hit[hit != row]
        if hit.size:
            r[hit] = (r[hit] - np.outer(r[hit, col], r[row])) % p
        pivots.append(col)
        row += 1
    return r, tuple(pivots)


def rank(a, p: int, use_packed: bool | None = None) -> int:
    return len(rref(a, p, use_packed)[1])


def invert(a, p: int) -> np.ndarray:
    """Inverse of a square matrix; raises ValueError if singular."""
    a = np.atleast_2d(as_fp(a, p))
    d = a.shape[0]
    if a.shape != (d, d):
        raise ValueError("not square")
    aug = np.concatenate([a, identity(d)], axis=1)
    r, pivots = rref(aug, p, use_packed=False)
    if pivots != tuple(range(d)):
        raise ValueError("matrix not invertible")
    return r[:, d:]


def _right_null(a: np.ndarray, p: int, use_packed: bool | None) -> np.ndarray:
    """Canonical basis (rows) of {x : a @ x == 0}."""
    a = np.atleast_2d(as_fp(a, p))
    n = a.shape[1]
    r, pivots = rref(a, p, use_packed)
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for prow, pcol in enumerate(pivots):
            basis[i, pcol] = (-int(r[prow, fc])) % p
    # reduce again so the kernel basis itself is in canonical RREF form
    basis, _ = rref(basis, p, use_packed)
    return basis


def kernel(a, p: int, use_packed: bool | None = None) -> np.ndarray:
    """Canonical basis (rows) of the left kernel {x : x @ a == 0}."""
    a = np.atleast_2d(as_fp(a, p))
    return _right_null(a.T, p, use_packed)


def solve_in_span(basis, v, p: int) -> np.ndarray | None:
    """Coefficients c with c @ basis == v, or None if v is not in the span.

    Free coefficients are set to 0, so the answer is deterministic even
    for dependent spanning sets.
    """
    sols = solve_matrix_in_span(basis, np.atleast_2d(as_fp(v, p)), p)
    return None if sols is None else sols[0]


def solve_matrix_in_span(basis, m, p: int) -> np.ndarray | None:
    """Row-wise solve: X with X @ basis == m, or None if any row fails."""
    p = check_prime(p)
    basis = np.atleast_2d(as_fp(basis, p))
    m = np.atleast_2d(as_fp(m, p))
    k, n = basis.shape
    q = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("shape mismatch")
    aug = np.concatenate([basis.T, m.T], axis=1)  # n x (k + q)
    r, pivots = rref(aug, p)
    if any(c >= k for c in pivots):
        return None
    x = np.zeros((q, k), dtype=np.int64)
    for prow, pcol in enumerate(pivots):
        x[:, pcol] = r[prow, k:]
    return x


def subspace_vectors(basis, p: int, limit: int = 1 << 26) -> np.ndarray:
    """All p^k vectors spanned by the basis rows, in coefficient-lex order."""
    p = check_prime(p)
    basis = np.atleast_2d(as_fp(basis, p))
    k, n = basis.shape
    if p**k > limit:
        raise BudgetExceededError(f"subspace of size {p}^{k} exceeds limit {limit}")
    vecs = np.zeros((1, n), dtype=np.int64)
    for i in range(k):
        shifted = [(vecs + c * basis[i]) % p for c in range(p)]
        vecs = np.concatenate(shifted, axis=0)
    return vecs


def encode_vectors(vecs, p: int) -> np.ndarray:
    """Little-endian base-p index of each row: sum v_i * p^i."""
    vecs = np.atleast_2d(as_fp(vecs, p))
    d = vecs.shape[1]
    if d and p**d > (1 << 62):
        raise ValueError("vector space too large for int64 indices")
    powers = p ** np.arange(d, dtype=np.int64)
    return vecs @ powers


def decode_indices(idx, d: int, p: int) -> np.ndarray:
    idx = np.atleast_1d(np.asarray(idx, dtype=np.int64))
    out = np.zeros((idx.size, d), dtype=np.int64)
    rem = idx.copy()
    for i in range(d):
        out[:, i] = rem % p
        rem //= p
    return out
