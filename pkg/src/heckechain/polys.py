"""Univariate polynomial arithmetic and factorization over finite fields.

Polynomials are tuples of field-element encodings, little endian, with no
trailing zeros; the zero polynomial is the empty tuple. Factorization runs
squarefree / distinct-degree / equal-degree splitting with a PRNG seeded from
the input, so factor order and the factors themselves are reproducible.
"""

from __future__ import annotations

import random

from .arith import DomainError
from .gf import FiniteField

Poly = tuple[int, ...]

X: Poly = (0, 1)


def trim(coeffs) -> Poly:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(f: Poly) -> int:
    return len(f) - 1  # zero polynomial gets -1


def constant(F: FiniteField, c: int) -> Poly:
    return (c,) if c else ()


def add(F: FiniteField, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    f = f + (0,) * (n - len(f))
    g = g + (0,) * (n - len(g))
    return trim(F.add(a, b) for a, b in zip(f, g))


def neg(F: FiniteField, f: Poly) -> Poly:
    return tuple(F.neg(a) for a in f)


def sub(F: FiniteField, f: Poly, g: Poly) -> Poly:
    return add(F, f, neg(F, g))


def mul(F: FiniteField, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(out)


def scale(F: FiniteField, c: int, f: Poly) -> Poly:
    if c == 0:
        return ()
    return trim(F.mul(c, a) for a in f)


def divmod_poly(F: FiniteField, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise DomainError("polynomial division by zero")
    if len(f) < len(g):
        return (), f
    rem = list(f)
    dg = degree(g)
    inv_lead = F.inv(g[-1])
    quo = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = F.mul(rem[i], inv_lead)
        if c:
            quo[i - dg] = c
            for j in range(dg + 1):
                rem[i - dg + j] = F.sub(rem[i - dg + j], F.mul(c, g[j]))
    return trim(quo), trim(rem[:dg])


def mod(F: FiniteField, f: Poly, g: Poly) -> Poly:
    return divmod_poly(F, f, g)[1]


def monic(F: FiniteField, f: Poly) -> Poly:
    if not f:
        return f
    return scale(F, F.inv(f[-1]), f)


def gcd(F: FiniteField, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, mod(F, f, g)
    return monic(F, f)


def pow_mod(F: FiniteField, f: Poly, e: int, m: Poly) -> Poly:
    result: Poly = (1,)
    f = mod(F, f, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, f), m)
        f = mod(F, mul(F, f, f), m)
        e >>= 1
    return result


def evaluate(F: FiniteField, f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F: FiniteField, f: Poly) -> Poly:
    return trim(F.scalar_mul(i, f[i]) for i in range(1, len(f)))


def is_irreducible(F: FiniteField, f: Poly) -> bool:
    d = degree(f)
    if d < 1:
        return False
    if d == 1:
        return True
    q = F.order
    xq = pow_mod(F, X, q**d, f)
    if sub(F, xq, X):
        return False
    for r in {r for r in range(2, d + 1) if d % r == 0 and _is_prime_small(r)}:
        g = gcd(F, sub(F, pow_mod(F, X, q ** (d // r), f), X), f)
        if degree(g) > 0:
            return False
    return True


def _is_prime_small(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


def _pth_root(F: FiniteField, a: int) -> int:
    # In F_{p^d} the p-th power map is a bijection with inverse x -> x^(p^(d-1)).
    return F.pow(a, F.order // F.p)


def _pth_root_poly(F: FiniteField, f: Poly) -> Poly:
    # Assumes f'(x) = 0, i.e. only exponents divisible by p occur.
    return trim(_pth_root(F, f[i]) for i in range(0, len(f), F.p))


def squarefree_decomposition(F: FiniteField, f: Poly) -> list[tuple[Poly, int]]:
    """Monic squarefree parts with multiplicities, char-p complete."""
    parts: dict[Poly, int] = {}

    def rec(f: Poly, e: int) -> None:
        df = derivative(F, f)
        if not df:
            rec(_pth_root_poly(F, f), e * F.p)
            return
        c = gcd(F, f, df)
        w = divmod_poly(F, f, c)[0]
        m = 1
        while degree(w) > 0:
            y = gcd(F, w, c)
            z = divmod_poly(F, w, y)[0]
            if degree(z) > 0:
                parts[z] = parts.get(z, 0) + e * m
            w = y
            c = divmod_poly(F, c, y)[0]
            m += 1
        if degree(c) > 0:
            rec(_pth_root_poly(F, c), e * F.p)

    g = monic(F, f)
    if degree(g) > 0:
        rec(g, 1)
    return sorted(parts.items(), key=lambda gm: (degree(gm[0]), gm[0]))


def distinct_degree(F: FiniteField, f: Poly) -> list[tuple[int, Poly]]:
    """Split squarefree monic f into products of irreducibles of equal degree."""
    out = []
    q = F.order
    h = X
    i = 0
    while degree(f) >= 2 * (i + 1):
        i += 1
        h = pow_mod(F, h, q, f)
        g = gcd(F, sub(F, h, X), f)
        if degree(g) > 0:
            out.append((i, g))
            f = divmod_poly(F, f, g)[0]
            h = mod(F, h, f)
    if degree(f) > 0:
        out.append((degree(f), f))
    return out


def _split_seed(F: FiniteField, f: Poly) -> int:
    h = 0xCBF29CE484222325
    for v in (F.p, F.degree, len(f), *f):
        h ^= v & 0xFFFFFFFFFFFFFFFF
        h = (h * 0x100000001B3) % (1 << 64)
    return h


def _random_poly(F: FiniteField, rng: random.Random, deg: int) -> Poly:
    return trim([rng.randrange(F.order) for _ in range(deg)] + [1])


def equal_degree_split(F: FiniteField, f: Poly, d: int) -> list[Poly]:
    """Factor squarefree monic f whose irreducible factors all have degree d."""
    n = degree(f)
    if n == d:
        return [f]
    rng = random.Random(_split_seed(F, f))
    q = F.order
    while True:
        a = _random_poly(F, rng, rng.randrange(1, n))
        if degree(a) < 1:
            continue
        g = gcd(F, a, f)
        if 0 < degree(g) < n:
            pass
        elif F.p == 2:
            # Trace map: g = a + a^2 + a^4 + ... over F_{2^m}, m = d * field degree.
            t = a
            g = a
            for _ in range(d * F.degree - 1):
                t = mod(F, mul(F, t, t), f)
                g = add(F, g, t)
            g = gcd(F, g, f)
        else:
            b = pow_mod(F, a, (q**d - 1) // 2, f)
            g = gcd(F, sub(F, b, (1,)), f)
        if 0 < degree(g) < n:
            h = divmod_poly(F, f, g)[0]
            return sorted(
                equal_degree_split(F, g, d) + equal_degree_split(F, h, d),
                key=lambda t: (degree(t), t),
            )


def factor(F: FiniteField, f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, canonically ordered."""
    if degree(f) < 1:
        raise DomainError("cannot factor a constant polynomial")
    result: dict[Poly, int] = {}
    for g, m in squarefree_decomposition(F, f):
        for d, h in distinct_degree(F, g):
            for irr in equal_degree_split(F, h, d):
                result[irr] = result.get(irr, 0) + m
    return sorted(result.items(), key=lambda gm: (degree(gm[0]), gm[0]))


def roots(F: FiniteField, f: Poly) -> list[int]:
    """Roots in F, sorted by encoding, ignoring multiplicity."""
    if degree(f) < 1:
        return []
    # Restrict to the part splitting in F before factoring.
    g = gcd(F, sub(F, pow_mod(F, X, F.order, f), X), f)
    out = []
    if degree(g) > 0:
        for irr, _ in factor(F, g):
            if degree(irr) == 1:
                out.append(F.neg(irr[0]))
    return sorted(set(out))


def embeddings(src: FiniteField, dst: FiniteField) -> list[list[int]]:
    """Images of the power basis of src under each embedding into dst.

    Embeddings are ordered by Frobenius twist of the canonical one, whose
    generator image is the smallest root of src's modulus in dst.
    """
    if dst.p != src.p or dst.degree % src.degree != 0:
        raise DomainError(
            f"no embedding of F_{src.p}^{src.degree} into F_{dst.p}^{dst.degree}"
        )
    if src.degree == 1:
        basis = [1]
        return [basis]
    mod_in_dst: Poly = tuple(c for c in src.modulus)
    rts = roots(dst, mod_in_dst)
    if not rts:
        raise AssertionError("modulus must split in the extension")
    g0 = rts[0]
    out = []
    g = g0
    for _ in range(src.degree):
        powers = [1]
        for _ in range(src.degree - 1):
            powers.append(dst.mul(powers[-1], g))
        out.append(powers)
        g = dst.pow(g, dst.p)
    return out


def apply_embedding(src: FiniteField, dst: FiniteField, basis_images: list[int], a: int) -> int:
    coeffs = src.decode(a)
    acc = 0
    for c, img in zip(coeffs, basis_images):
        if c:
            acc = dst.add(acc, dst.scalar_mul(c, img))
    return acc
