import numpy as np
import pytest

from heckechain import polys
from heckechain.arith import DomainError, primes_up_to
from heckechain.eigensystems import decompose, operator_primes, sturm_bound
from heckechain.modsym import symbol_space

# Integral eigenvalues of the unique newform orbits, for spot checks after
# reduction. Keys are primes q; the level-11 elliptic curve and the weight-12
# level-1 cusp form.
A_11A = {2: -2, 3: -1, 5: 1, 7: -2, 13: 4}
TAU = {2: -24, 3: 252, 5: 4830, 7: -16744, 11: 534612, 13: -577738}


def test_sturm_bound_values():
    assert sturm_bound(11, 2) == 2
    assert sturm_bound(1, 12) == 1
    assert sturm_bound(23, 2) == 4
    assert sturm_bound(37, 2) == 6
    # Multiplicative index for composite levels.
    assert sturm_bound(22, 2) == 6
    assert sturm_bound(30, 2) == 12


def test_operator_primes_skip_level_and_characteristic():
    assert operator_primes(11, 2, 5) == [2]
    assert operator_primes(23, 2, 3) == [2]
    assert operator_primes(22, 2, 7, bound=13) == [3, 5, 13]


@pytest.mark.parametrize("ell", [5, 7, 13])
def test_level_11_eigenvalues(ell):
    systems = decompose(11, 2, ell)
    assert len(systems) == 1
    s = systems[0]
    assert s.label == f"11.2.0"
    assert s.degree == 1 and s.multiplicity == 1 and not s.is_old
    for q, aq in A_11A.items():
        if q == ell:
            continue
        assert s.a(q) == aq % ell, (ell, q)


@pytest.mark.parametrize("ell", [11, 13, 17, 691])
def test_weight_12_eigenvalues(ell):
    systems = decompose(1, 12, ell)
    assert len(systems) == 1
    s = systems[0]
    assert s.degree == 1
    assert s.multiplicity == 1
    for q, tq in TAU.items():
        if q == ell:
            continue
        assert s.a(q) == tq % ell, (ell, q)


def test_weight_12_mod_691_is_eisenstein_like():
    # The classical congruence tau(q) = 1 + q^11 mod 691.
    s = decompose(1, 12, 691)[0]
    for q in primes_up_to(40):
        assert s.a(q) == (1 + q**11) % 691


def test_level_23_golden_ratio_orbit():
    systems = decompose(23, 2, 7)
    assert len(systems) == 1
    s = systems[0]
    assert s.degree == 2
    assert s.multiplicity == 1
    assert s.semisimple
    # a(2) generates F_49 with minimal polynomial x^2 + x - 1.
    assert s.min_poly(2) == (6, 1, 1)
    F = s.field
    a2 = s.a(2)
    assert polys.evaluate(F, (6, 1, 1), a2) == 0


def test_level_23_collapses_mod_5():
    # x^2 + x - 1 has discriminant 5: the conjugate pair collides.
    systems = decompose(23, 2, 5)
    assert len(systems) == 1
    s = systems[0]
    assert s.degree == 1
    assert s.multiplicity == 2
    assert not s.semisimple
    assert s.a(2) == 2


def test_old_orbit_marking_at_composite_level():
    systems = decompose(22, 2, 7)
    assert len(systems) == 1
    s = systems[0]
    assert s.is_old
    assert s.multiplicity == 2
    for q, aq in A_11A.items():
        if q in (2, 7, 11):
            continue
        assert s.a(q) == aq % 7


def test_labels_and_ordering_are_stable():
    systems = decompose(67, 2, 5)
    assert [s.index for s in systems] == list(range(len(systems)))
    degrees = [s.degree for s in systems]
    assert degrees == sorted(degrees)
    again = decompose(67, 2, 5)
    assert [s.label for s in again] == [s.label for s in systems]


def test_block_dimensions_cover_cuspidal_space():
    for N, k, ell in [(23, 2, 5), (37, 2, 5), (67, 2, 7), (33, 2, 7)]:
        sp = symbol_space(N, k, ell)
        systems = decompose(N, k, ell)
        assert sum(s.block_dim for s in systems) == sp.cuspidal_dim


def test_eigenvalue_preconditions():
    s = decompose(11, 2, 7)[0]
    with pytest.raises(DomainError, match="indexed by primes"):
        s.a(6)
    with pytest.raises(DomainError, match="dividing the level"):
        s.a(11)
    with pytest.raises(DomainError, match="working characteristic"):
        s.a(7)


def test_eigenvector_satisfies_hecke_equation():
    # The stored eigenvector must be a genuine simultaneous eigenvector.
    ell = 7
    sp = symbol_space(23, 2, ell)
    s = decompose(23, 2, ell)[0]
    F = s.field
    for q in (2, 3, 5, 13):
        aq = s.a(q)
        M = sp.hecke_matrix(q)
        v = s._V[0]
        Mv = [
            F.add(0, sum_vec(F, [F.scalar_mul(int(M[i, j]) % ell, v[j]) for j in range(len(v))]))
            for i in range(M.shape[0])
        ]
        expect = [F.mul(aq, x) for x in v]
        assert Mv == expect, q


def sum_vec(F, xs):
    acc = 0
    for x in xs:
        acc = F.add(acc, x)
    return acc


def test_min_poly_consistency_beyond_base_primes():
    s = decompose(23, 2, 7)[0]
    f = s.min_poly(13)
    assert polys.evaluate(s.field, tuple(c % 7 for c in f), s.a(13)) == 0
    assert polys.degree(f) in (1, 2)
