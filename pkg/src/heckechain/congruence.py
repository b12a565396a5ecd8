"""Certification of eigenvalue congruences between two orbits mod ell.

Two systems are congruent when some embedding of each into a common extension
field matches them at every comparison prime up to the cross-level bound.
The left embedding is pinned to the canonical one and the right one runs over
its Frobenius twists, so certification is deterministic; a refutation records
the first mismatch of the twist that survives longest.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from . import polys
from .arith import DomainError, primes_up_to
from .eigensystems import sturm_bound
from .gf import field


def cross_bound(N1: int, k1: int, N2: int, k2: int) -> int:
    """Comparison bound for systems at two different levels and weights."""
    return sturm_bound(lcm(N1, N2), max(k1, k2))


def weight_compatible(k1: int, k2: int, ell: int) -> bool:
    return k1 == k2 or (k1 - k2) % (ell - 1) == 0


@dataclass(frozen=True)
class CongruenceEdge:
    left: str
    right: str
    ell: int
    certified: bool
    bound: int
    witnesses: tuple[int, ...]
    first_mismatch: int | None


def comparison_primes(N1: int, k1: int, N2: int, k2: int, ell: int) -> list[int]:
    b = cross_bound(N1, k1, N2, k2)
    return [q for q in primes_up_to(b) if (N1 * N2) % q and q != ell]


def check_congruence(sys_a, sys_b, bound: int | None = None) -> CongruenceEdge:
    """Certify or refute a congruence between two systems at one
    characteristic. Systems expose N, k, ell, field, label, and a(q)."""
    if sys_a.ell != sys_b.ell:
        raise DomainError("congruence comparison requires a shared characteristic")
    ell = sys_a.ell
    if not weight_compatible(sys_a.k, sys_b.k, ell):
        raise DomainError(
            f"weights {sys_a.k} and {sys_b.k} are incompatible at {ell}: "
            f"their difference must vanish modulo {ell - 1}"
        )
    b = cross_bound(sys_a.N, sys_a.k, sys_b.N, sys_b.k) if bound is None else bound
    qs = [q for q in primes_up_to(b) if (sys_a.N * sys_b.N) % q and q != ell]
    if not qs:
        raise DomainError("no usable comparison primes below the bound")
    # Collect values first; lazy queries may enlarge the systems' fields.
    ta = {q: sys_a.a(q) for q in qs}
    tb = {q: sys_b.a(q) for q in qs}
    Ka, Kb = sys_a.field, sys_b.field
    K = field(ell, lcm(Ka.degree, Kb.degree))
    phi_a = polys.embeddings(Ka, K)[0]
    va = {q: polys.apply_embedding(Ka, K, phi_a, ta[q]) for q in qs}
    best_pos = -1
    best_q: int | None = None
    for images in polys.embeddings(Kb, K):
        mismatch = None
        pos = len(qs)
        for idx, q in enumerate(qs):
            if va[q] != polys.apply_embedding(Kb, K, images, tb[q]):
                mismatch = q
                pos = idx
                break
        if mismatch is None:
            return CongruenceEdge(
                left=sys_a.label, right=sys_b.label, ell=ell,
                certified=True, bound=b, witnesses=tuple(qs), first_mismatch=None,
            )
        if pos > best_pos:
            best_pos = pos
            best_q = mismatch
    return CongruenceEdge(
        left=sys_a.label, right=sys_b.label, ell=ell,
        certified=False, bound=b, witnesses=(), first_mismatch=best_q,
    )


def scan_congruences(systems_a, systems_b, ell: int) -> list[CongruenceEdge]:
    """Certified congruences between two orbit lists at one characteristic.

    Weight-incompatible inputs yield no edges rather than an error; a scan is
    a survey, not an assertion that a comparison must exist.
    """
    edges = []
    for sa in systems_a:
        for sb in systems_b:
            if sa is sb:
                continue
            if not weight_compatible(sa.k, sb.k, ell):
                continue
            edge = check_congruence(sa, sb)
            if edge.certified:
                edges.append(edge)
    return edges
