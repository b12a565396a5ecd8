"""Modular symbols for Gamma0(N) in even weight over a prime field.

Generators are monomial-times-coset pairs indexed by x * (k - 1) + i, where x
runs over the projective line mod N in lexicographic representative order and
i is the monomial exponent. The space is the quotient by the two- and
three-term relations; the cuspidal part is the kernel of the boundary map to
cusp classes, and Hecke operators act through determinant-q integer matrices.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, gcd

import numpy as np

from ._kernels import hecke_accum, matmul_mod
from .arith import DomainError, ext_gcd, inv_mod, is_prime
from .matrix import right_kernel, rref, solve_columns

MAX_WEIGHT = 12


class P1List:
    """Projective line over Z/N with canonical (lex-least) representatives."""

    def __init__(self, N: int):
        self.N = N
        if N == 1:
            self.reps = np.zeros((1, 2), dtype=np.int64)
            self.table = np.zeros((1, 1), dtype=np.int64)
            return
        units = [t for t in range(1, N) if gcd(t, N) == 1]
        table = np.full((N, N), -1, dtype=np.int64)
        reps: list[tuple[int, int]] = []
        for u in range(N):
            for v in range(N):
                if table[u, v] != -1 or gcd(gcd(u, v), N) != 1:
                    continue
                idx = len(reps)
                reps.append((u, v))
                for t in units:
                    table[t * u % N, t * v % N] = idx
        self.reps = np.array(reps, dtype=np.int64)
        self.table = table

    def __len__(self) -> int:
        return self.reps.shape[0]

    def index(self, u: int, v: int) -> int:
        return int(self.table[u % self.N, v % self.N])


def merel_matrices(n: int) -> list[tuple[int, int, int, int]]:
    """Integer matrices (a, b; c, d) of determinant n with a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, n + 1):
        for b in range(a):
            if b == 0:
                if n % a:
                    continue
                d = n // a
                out.extend((a, 0, c, d) for c in range(d))
            else:
                for d in range(1, (n - 1) // (a - b) + 1):
                    num = a * d - n
                    if num >= 0 and num % b == 0 and num // b < d:
                        out.append((a, b, num // b, d))
    return out


def _cusp_normalize(a: int, c: int) -> tuple[int, int]:
    if c == 0:
        return (1, 0)
    g = gcd(a, c)
    a //= g
    c //= g
    if c < 0:
        a, c = -a, -c
    return (a, c)


def _cusps_equivalent(N: int, c1: tuple[int, int], c2: tuple[int, int]) -> bool:
    p1, q1 = c1
    p2, q2 = c2
    g = gcd(q1 * q2, N)
    s1 = p1 if q1 == 0 else (0 if q1 == 1 else inv_mod(p1, q1))
    s2 = p2 if q2 == 0 else (0 if q2 == 1 else inv_mod(p2, q2))
    return (s1 * q2 - s2 * q1) % g == 0


def _lift_to_coprime(c: int, d: int, N: int) -> tuple[int, int]:
    """Representative of (c : d) with coprime integer entries."""
    if N == 1:
        return (0, 1)
    c %= N
    d %= N
    if c == 0:
        return (N, d)
    while gcd(c, d) != 1:
        d += N
    return (c, d)


def validate_space(N: int, k: int, ell: int) -> None:
    if N < 1:
        raise DomainError("level must be a positive integer")
    if k < 2 or k % 2:
        raise DomainError("weight must be even and at least 2")
    if k > MAX_WEIGHT:
        raise DomainError(f"weight above supported bound {MAX_WEIGHT}")
    if not is_prime(ell):
        raise DomainError("working characteristic must be prime")
    if N % ell == 0:
        raise DomainError("working characteristic divides level")
    if ell in (2, 3):
        raise DomainError("working characteristic must not divide 6")
    if ell < k - 1:
        raise DomainError(f"working characteristic too small for weight {k}")


class ModularSymbolSpace:
    """Weight-k modular symbols for Gamma0(N) with coefficients mod ell."""

    def __init__(self, N: int, k: int, ell: int):
        validate_space(N, k, ell)
        self.N = N
        self.k = k
        self.ell = ell
        self.p1 = P1List(N)
        self.n_symbols = len(self.p1) * (k - 1)
        self._hecke: dict[int, np.ndarray] = {}
        self._build_quotient()
        self._build_cuspidal()

    def __repr__(self) -> str:
        return f"ModularSymbolSpace(N={self.N}, k={self.k}, ell={self.ell})"

    # -- presentation -------------------------------------------------------

    def _build_quotient(self) -> None:
        k, ell = self.k, self.ell
        p1 = self.p1
        kk = k - 2
        w = k - 1
        D = self.n_symbols
        R = np.zeros((2 * D, D), dtype=np.int64)
        row = 0
        for x in range(len(p1)):
            c, d = (int(v) for v in p1.reps[x])
            xs = p1.index(d, -c)
            xt = p1.index(d, -c - d)
            xt2 = p1.index(-c - d, c)
            for i in range(w):
                R[row, x * w + i] += 1
                R[row, xs * w + (kk - i)] += (-1) ** i
                row += 1
                R[row, x * w + i] += 1
                for j in range(kk - i + 1):
                    R[row, xt * w + j] += (-1) ** (kk - j) * comb(kk - i, j)
                for j in range(i + 1):
                    R[row, xt2 * w + (kk - i + j)] += (-1) ** (kk - i + j) * comb(i, j)
                row += 1
        R %= ell
        Rr, _, piv = rref(R, ell)
        pivset = set(piv)
        free = [c for c in range(D) if c not in pivset]
        self.dim = len(free)
        lift = np.zeros((D, self.dim), dtype=np.int64)
        proj = np.zeros((self.dim, D), dtype=np.int64)
        for j, f in enumerate(free):
            lift[f, j] = 1
            proj[j, f] = 1
        for i, pc in enumerate(piv):
            for j, f in enumerate(free):
                proj[j, pc] = (-int(Rr[i, f])) % ell
        self._lift = lift
        self._proj = proj

    def _build_cuspidal(self) -> None:
        N, k, ell = self.N, self.k, self.ell
        kk = k - 2
        w = k - 1
        cusp_reps: list[tuple[int, int]] = []

        def cusp_class(a: int, c: int) -> int:
            cu = _cusp_normalize(a, c)
            for idx, rep in enumerate(cusp_reps):
                if _cusps_equivalent(N, rep, cu):
                    return idx
            cusp_reps.append(cu)
            return len(cusp_reps) - 1

        entries = []
        for x in range(len(self.p1)):
            c, d = (int(v) for v in self.p1.reps[x])
            cl, dl = _lift_to_coprime(c, d, N)
            _, s, t = ext_gcd(dl, cl)
            a, b = s, -t
            assert a * dl - b * cl == 1
            entries.append((cusp_class(a, cl), x * w + kk, 1))
            entries.append((cusp_class(b, dl), x * w, -1))
        self.cusp_classes = list(cusp_reps)
        boundary = np.zeros((len(cusp_reps), self.n_symbols), dtype=np.int64)
        for ci, col, val in entries:
            boundary[ci, col] += val
        boundary %= ell
        self._boundary = boundary
        delta = matmul_mod(boundary, self._lift, ell)
        self.cuspidal_basis = right_kernel(delta, ell)
        self.cuspidal_dim = self.cuspidal_basis.shape[1]

    # -- operators ----------------------------------------------------------

    def hecke_on_quotient(self, q: int) -> np.ndarray:
        if not is_prime(q):
            raise DomainError("hecke operators are indexed by primes")
        if self.N % q == 0:
            raise DomainError("hecke operator at a prime dividing the level")
        A = np.zeros((self.n_symbols, self.n_symbols), dtype=np.int64)
        mats = np.array(merel_matrices(q), dtype=np.int64)
        hecke_accum(A, mats, self.p1.table, self.p1.reps, self.k, self.N, self.ell)
        return matmul_mod(matmul_mod(self._proj, A, self.ell), self._lift, self.ell)

    def hecke_matrix(self, q: int) -> np.ndarray:
        """T_q restricted to the cuspidal subspace, in its basis."""
        if q not in self._hecke:
            M = self.hecke_on_quotient(q)
            image = matmul_mod(M, self.cuspidal_basis, self.ell)
            self._hecke[q] = solve_columns(self.cuspidal_basis, image, self.ell)
        return self._hecke[q]


@lru_cache(maxsize=64)
def symbol_space(N: int, k: int, ell: int) -> ModularSymbolSpace:
    return ModularSymbolSpace(N, k, ell)
