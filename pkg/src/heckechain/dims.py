"""Dimension formulas for cusp forms on Gamma0(N) in even weight.

Standard genus computation from the index and elliptic/cusp counts, plus the
new-subspace dimension obtained by Moebius-style inversion over divisors.
"""

from __future__ import annotations

from math import gcd

from .arith import DomainError, divisors, euler_phi, factorize, legendre


def index_mu(N: int) -> int:
    """Index of the congruence subgroup in the full modular group."""
    mu = N
    for p in factorize(N):
        mu = mu // p * (p + 1)
    return mu


def nu2(N: int) -> int:
    """Number of elliptic points of order 2."""
    if N % 4 == 0:
        return 0
    out = 1
    for p in factorize(N):
        if p == 2:
            continue
        out *= 1 + legendre(-1, p)
    return out


def nu3(N: int) -> int:
    """Number of elliptic points of order 3."""
    if N % 9 == 0:
        return 0
    out = 1
    for p in factorize(N):
        if p == 3:
            continue
        if p == 2:
            return 0
        out *= 1 + legendre(-3, p)
    return out


def nu_inf(N: int) -> int:
    """Number of cusps."""
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def genus(N: int) -> int:
    g2 = 12 + index_mu(N) - 3 * nu2(N) - 4 * nu3(N) - 6 * nu_inf(N)
    assert g2 % 12 == 0
    return g2 // 12


def dim_cusp_forms(N: int, k: int) -> int:
    """dim S_k(Gamma0(N)) for even k >= 2."""
    if N < 1 or k < 2 or k % 2:
        raise DomainError("level must be positive and weight even, at least 2")
    g = genus(N)
    if k == 2:
        return g
    return (
        (k - 1) * (g - 1)
        + (k // 2 - 1) * nu_inf(N)
        + nu2(N) * (k // 4)
        + nu3(N) * (k // 3)
    )


def _sigma0_inverse(n: int) -> int:
    # Dirichlet inverse of the divisor-count function, multiplicative with
    # values -2, 1, 0 at p, p^2, p^(e>=3).
    out = 1
    for _, e in factorize(n).items():
        if e == 1:
            out *= -2
        elif e == 2:
            out *= 1
        else:
            return 0
    return out


def dim_new(N: int, k: int) -> int:
    """Dimension of the new subspace of S_k(Gamma0(N))."""
    return sum(_sigma0_inverse(N // d) * dim_cusp_forms(d, k) for d in divisors(N))
