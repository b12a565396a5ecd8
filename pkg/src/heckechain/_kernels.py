"""Dense mod-p kernels with a numba path and a pure-numpy fallback.

Set HECKECHAIN_PURE_NUMPY=1 to force the fallback; otherwise the numba path
is selected when numba imports cleanly. Arrays are int64 with entries reduced
into [0, p); callers must keep n * (p - 1)^2 below 2**63 so products cannot
overflow. benchmarks/bench_kernels.py times one path against the other.
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_PURE = os.environ.get("HECKECHAIN_PURE_NUMPY", "") not in ("", "0")

if not _FORCE_PURE:
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False
else:
    USING_NUMBA = False

KERNEL_PATH = "numba" if USING_NUMBA else "numpy"


def _modinv_int(a: int, p: int) -> int:
    return pow(a, p - 2, p)


# -- row reduction ----------------------------------------------------------


def _rref_mod_numpy(a: np.ndarray, p: int):
    rows, cols = a.shape
    piv = np.full(min(rows, cols), -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = _modinv_int(int(a[r, c]), p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - col[hit, None] * a[r][None, :]) % p
        piv[r] = c
        r += 1
        if r == rows:
            break
    return r, piv


if USING_NUMBA:

    @njit(cache=True)
    def _modinv_i64(a, p):  # pragma: no cover - compiled
        result = 1
        b = a % p
        e = p - 2
        while e:
            if e & 1:
                result = result * b % p
            b = b * b % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_mod_numba(a, p):  # pragma: no cover - compiled
        rows, cols = a.shape
        piv = np.full(min(rows, cols), -1, dtype=np.int64)
        r = 0
        for c in range(cols):
            pr = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[pr, j]
                    a[pr, j] = t
            inv = _modinv_i64(a[r, c], p)
            for j in range(cols):
                a[r, j] = a[r, j] * inv % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            piv[r] = c
            r += 1
            if r == rows:
                break
        return r, piv


def rref_mod(a: np.ndarray, p: int):
    """Reduced row echelon form in place; returns (rank, pivot columns)."""
    if a.dtype != np.int64:
        raise TypeError("rref_mod expects int64 input")
    if a.size and int(a.shape[1]) * (p - 1) * (p - 1) >= 2**63:
        raise OverflowError("modulus too large for int64 row reduction")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0, np.empty(0, dtype=np.int64)
    if USING_NUMBA:
        rank, piv = _rref_mod_numba(a, p)
    else:
        rank, piv = _rref_mod_numpy(a, p)
    return int(rank), piv[:rank].copy()


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] and int(a.shape[1]) * (p - 1) * (p - 1) >= 2**63:
        raise OverflowError("modulus too large for int64 matmul")
    return (a @ b) % p


# -- Hecke accumulation ------------------------------------------------------


def _binomial_table(k: int, ell: int) -> np.ndarray:
    kk = k - 2
    C = np.zeros((kk + 1, kk + 1), dtype=np.int64)
    for n in range(kk + 1):
        C[n, 0] = 1
        for m in range(1, n + 1):
            C[n, m] = (C[n - 1, m - 1] + C[n - 1, m]) % ell
    return C


def _hecke_accum_numpy(acc, mats, tbl, reps, k, N, ell):
    kk = k - 2
    w = k - 1
    C = _binomial_table(k, ell)
    idx = np.arange(kk + 1)
    u = reps[:, 0]
    v = reps[:, 1]
    for gi in range(mats.shape[0]):
        a, b, c, d = (int(x) for x in mats[gi])
        apow = np.array([pow(a % ell, int(i), ell) for i in idx], dtype=np.int64)
        bpow = np.array([pow(b % ell, int(i), ell) for i in idx], dtype=np.int64)
        cpow = np.array([pow(c % ell, int(i), ell) for i in idx], dtype=np.int64)
        dpow = np.array([pow(d % ell, int(i), ell) for i in idx], dtype=np.int64)
        B = np.zeros((kk + 1, kk + 1), dtype=np.int64)
        for i in range(kk + 1):
            urow = C[i, : i + 1] * apow[: i + 1] % ell * bpow[: i + 1][::-1] % ell
            vrow = (
                C[kk - i, : kk - i + 1]
                * cpow[: kk - i + 1]
                % ell
                * dpow[: kk - i + 1][::-1]
                % ell
            )
            B[i] = np.convolve(urow, vrow) % ell
        tu = (u * a + v * c) % N
        tv = (u * b + v * d) % N
        targets = tbl[tu, tv]
        for x in range(reps.shape[0]):
            t = int(targets[x])
            if t < 0:
                continue
            # column block x feeds row block t; B[i, j] couples source
            # exponent i to target exponent j
            acc[t * w : t * w + kk + 1, x * w : x * w + kk + 1] = (
                acc[t * w : t * w + kk + 1, x * w : x * w + kk + 1] + B.T
            ) % ell


if USING_NUMBA:

    @njit(cache=True)
    def _hecke_accum_numba(acc, mats, tbl, reps, k, N, ell, C):  # pragma: no cover
        kk = k - 2
        w = k - 1
        nP1 = reps.shape[0]
        apow = np.empty(kk + 1, np.int64)
        bpow = np.empty(kk + 1, np.int64)
        cpow = np.empty(kk + 1, np.int64)
        dpow = np.empty(kk + 1, np.int64)
        B = np.empty((kk + 1, kk + 1), np.int64)
        for gi in range(mats.shape[0]):
            a = mats[gi, 0]
            b = mats[gi, 1]
            c = mats[gi, 2]
            d = mats[gi, 3]
            am = a % ell
            bm = b % ell
            cm = c % ell
            dm = d % ell
            apow[0] = 1
            bpow[0] = 1
            cpow[0] = 1
            dpow[0] = 1
            for i in range(1, kk + 1):
                apow[i] = apow[i - 1] * am % ell
                bpow[i] = bpow[i - 1] * bm % ell
                cpow[i] = cpow[i - 1] * cm % ell
                dpow[i] = dpow[i - 1] * dm % ell
            for i in range(kk + 1):
                for j in range(kk + 1):
                    s = 0
                    lo = j - (kk - i)
                    if lo < 0:
                        lo = 0
                    hi = i if i < j else j
                    for m in range(lo, hi + 1):
                        s = (
                            s
                            + C[i, m]
                            * apow[m]
                            % ell
                            * bpow[i - m]
                            % ell
                            * (C[kk - i, j - m] * cpow[j - m] % ell * dpow[kk - i - j + m] % ell)
                        ) % ell
                    B[i, j] = s
            for x in range(nP1):
                tu = (reps[x, 0] * a + reps[x, 1] * c) % N
                tv = (reps[x, 0] * b + reps[x, 1] * d) % N
                t = tbl[tu, tv]
                if t < 0:
                    continue
                for i in range(kk + 1):
                    for j in range(kk + 1):
                        if B[i, j]:
                            acc[t * w + j, x * w + i] = (acc[t * w + j, x * w + i] + B[i, j]) % ell


def hecke_accum(acc, mats, tbl, reps, k, N, ell):
    """Accumulate the determinant-q matrix action on the symbol basis.

    acc is (n, n) with n = #reps * (k - 1), zeroed by the caller; mats holds
    rows (a, b, c, d); tbl maps a pair mod N to its basis slot or -1.
    """
    if USING_NUMBA:
        _hecke_accum_numba(acc, mats, tbl, reps, k, N, ell, _binomial_table(k, ell))
    else:
        _hecke_accum_numpy(acc, mats, tbl, reps, k, N, ell)


# -- quadratic-residue sieve scan --------------------------------------------


def _sieve_scan_numpy(x0, step, t_start, count, ells, qr_flat, qr_off):
    t = np.arange(t_start, t_start + count, dtype=np.int64)
    n = x0 + t * step
    ok = np.ones(n.shape[0], dtype=np.bool_)
    for idx in range(ells.shape[0]):
        l = int(ells[idx])
        r = n % l
        ok &= (r != 0) & (qr_flat[qr_off[idx] + r] != 0)
        if not ok.any():
            break
    return n[ok][:64]


if USING_NUMBA:

    @njit(cache=True)
    def _sieve_scan_numba(x0, step, t_start, count, ells, qr_flat, qr_off):  # pragma: no cover
        out = np.empty(64, np.int64)
        nf = 0
        for t in range(t_start, t_start + count):
            n = x0 + t * step
            ok = True
            for idx in range(ells.shape[0]):
                l = ells[idx]
                r = n % l
                if r == 0 or qr_flat[qr_off[idx] + r] == 0:
                    ok = False
                    break
            if ok:
                out[nf] = n
                nf += 1
                if nf == 64:
                    break
        return out[:nf]


def sieve_scan(x0, step, t_start, count, ells, qr_flat, qr_off):
    """Candidates n = x0 + t*step whose residue mod each ells[i] is a listed
    nonzero value in that prime's lookup slice; at most 64 per call."""
    if USING_NUMBA:
        hits = _sieve_scan_numba(
            np.int64(x0), np.int64(step), np.int64(t_start), np.int64(count), ells, qr_flat, qr_off
        )
    else:
        hits = _sieve_scan_numpy(x0, step, t_start, count, ells, qr_flat, qr_off)
    return [int(h) for h in hits]
