import random
from dataclasses import replace

import pytest

from heckechain.arith import DomainError, is_prime, primes_up_to
from heckechain.planner import (
    GoodDihedral,
    PrincipalSeries,
    Steinberg,
    Supercuspidal,
    SystemDescriptor,
    connect,
    measure,
    plan_to_safe_form,
)


def D(weight=2, conductor=None, **kw):
    return SystemDescriptor(weight=weight, conductor=conductor or {}, **kw)


DELTA_LIKE = D(weight=12)
MESSY = D(
    weight=4,
    conductor={
        2: Supercuspidal(char_order=3, wild=True),
        3: PrincipalSeries(char_order=12),
    },
    dihedral=True,
)


def test_validation_rejects_malformed_descriptors():
    with pytest.raises(DomainError, match="must be even and at least 2"):
        plan_to_safe_form(D(weight=3), 10)
    with pytest.raises(DomainError, match="is not prime"):
        plan_to_safe_form(D(conductor={4: Steinberg()}), 10)
    with pytest.raises(DomainError, match="trivial character must be omitted"):
        plan_to_safe_form(D(conductor={5: PrincipalSeries(char_order=1)}), 10)
    with pytest.raises(DomainError, match="carries a steinberg place"):
        plan_to_safe_form(D(conductor={5: Steinberg()}, dihedral=True), 10)
    with pytest.raises(DomainError, match="field degree 1"):
        plan_to_safe_form(D(field_degree=2), 10)


def test_plan_weight_12_unramified():
    plan = plan_to_safe_form(DELTA_LIKE, 10)
    assert [s.name for s in plan.steps] == [
        "to-parallel-weight-two",
        "add-good-dihedral",
        "final-weight-two-lift",
    ]
    assert (plan.pair.p, plan.pair.q) == (13, 2521)
    assert plan.aux == 17
    assert plan.final.weight == 2
    assert set(plan.final.conductor) == {2521, 17}
    assert isinstance(plan.final.conductor[17], Steinberg)
    gd = plan.final.conductor[2521]
    assert isinstance(gd, GoodDihedral) and gd.p == 13 and gd.bound == 10


def test_plan_steps_have_verdicts_and_strict_descent():
    for desc, bound in [(DELTA_LIKE, 10), (MESSY, 20)]:
        plan = plan_to_safe_form(desc, bound)
        m = measure(plan.start, bound)
        current = plan.start
        for step in plan.steps:
            assert step.verdict is not None
            assert step.verdict.theorem in (1, 2, 3, 4)
            assert step.verdict.applicable
            m_after = measure(step.after, bound)
            assert m_after < m
            m = m_after
            current = step.after
        assert current == plan.final
        assert measure(plan.final, bound) == tuple([0] * len(m))


def test_safe_form_replans_to_zero_steps():
    plan = plan_to_safe_form(DELTA_LIKE, 10)
    again = plan_to_safe_form(plan.final, 10)
    assert again.steps == ()
    assert again.final == plan.final


def test_messy_plan_normalizes_everything():
    plan = plan_to_safe_form(MESSY, 20)
    assert plan.final.weight == 2
    assert not plan.final.dihedral
    kinds = {type(t) for t in plan.final.conductor.values()}
    assert kinds <= {Steinberg, GoodDihedral}
    names = [s.name for s in plan.steps]
    assert names[0] == "make-non-dihedral"
    assert "add-good-dihedral" in names
    assert names[-1] == "final-weight-two-lift"


def test_dihedral_breaking_needs_room_below_bound():
    cramped = D(
        weight=4,
        conductor={
            2: Supercuspidal(char_order=3, wild=True),
            7: PrincipalSeries(char_order=12),
        },
        dihedral=True,
    )
    with pytest.raises(DomainError, match="no prime below bound 20 fits"):
        plan_to_safe_form(cramped, 20)


def test_bound_must_clear_conductor():
    desc = D(conductor={23: Steinberg()})
    with pytest.raises(DomainError, match="does not clear the conductor"):
        plan_to_safe_form(desc, 20)


def test_existing_good_dihedral_place_is_honoured():
    plan = plan_to_safe_form(DELTA_LIKE, 10)
    resumed = plan_to_safe_form(plan.final, 10)
    assert (resumed.pair.p, resumed.pair.q) == (13, 2521)
    with pytest.raises(DomainError, match="for bound 10, plan expects 12"):
        plan_to_safe_form(plan.final, 12)


def test_connect_shares_pair_and_aux():
    res = connect(DELTA_LIKE, MESSY, 20)
    assert res.left.final == res.right.final == res.final
    assert res.left.pair == res.right.pair == res.pair
    assert res.left.aux == res.right.aux == res.aux
    # The shared pair avoids every conductor prime of both sides.
    assert res.pair.p not in set(MESSY.conductor) | set(DELTA_LIKE.conductor)


def test_connect_determinism():
    a = connect(DELTA_LIKE, MESSY, 20)
    b = connect(DELTA_LIKE, MESSY, 20)
    assert a == b


def random_descriptor(rng):
    weight = rng.choice([2, 4, 6, 8, 10, 12])
    conductor = {}
    places = rng.sample([p for p in primes_up_to(100)], k=rng.randrange(0, 4))
    for q in places:
        kind = rng.randrange(3)
        if kind == 0:
            conductor[q] = Steinberg()
        elif kind == 1:
            wild = rng.random() < 0.3
            order = rng.randrange(1, 19)
            if order == 1 and not wild:
                order = 2
            conductor[q] = PrincipalSeries(char_order=order, wild=wild)
        else:
            wild = rng.random() < 0.3
            order = rng.randrange(1, 19)
            if order == 1 and not wild:
                order = 2
            conductor[q] = Supercuspidal(char_order=order, wild=wild)
    dihedral = rng.random() < 0.3 and not any(
        isinstance(t, Steinberg) for t in conductor.values()
    )
    return D(weight=weight, conductor=conductor, dihedral=dihedral)


def test_randomized_corpus_replays():
    rng = random.Random(20260817)
    for trial in range(20):
        desc = random_descriptor(rng)
        plan = plan_to_safe_form(desc, 101)
        current = desc
        m = measure(desc, 101)
        for step in plan.steps:
            assert step.verdict is not None and step.verdict.applicable
            m_new = measure(step.after, 101)
            assert m_new < m
            current, m = step.after, m_new
        assert current == plan.final
        # Replay: planning the final is a fixed point.
        assert plan_to_safe_form(plan.final, 101).steps == ()
