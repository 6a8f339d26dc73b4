import math

import numpy as np
import pytest

from matdisc import disc, linalg, model, schatten
from matdisc.errors import InvalidOrder, PreconditionViolated

from conftest import random_hermitian


def rademacher_hermitian(rng, d, n):
    mats = tuple(random_hermitian(rng, d) for _ in range(n))
    return model.HermitianInstance(d, mats, tuple(model.DiscreteRandomVariable.rademacher() for _ in range(n)))


def test_disc_p_single_matrix():
    inst = model.HermitianInstance(2, (np.diag([1.0, -1.0]),), (model.DiscreteRandomVariable.rademacher(),))
    assert schatten.disc_p(inst, 2.0) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_disc_p_constant_rvs_zero():
    inst = model.HermitianInstance(
        2,
        (np.diag([1.0, 2.0]), np.diag([0.5, -0.5])),
        (model.DiscreteRandomVariable.constant(0.2), model.DiscreteRandomVariable.constant(-1.0)),
    )
    assert schatten.disc_p(inst, 4.0) == pytest.approx(0.0, abs=1e-12)


def test_disc_p_golden_seeded_instance():
    # frozen from the 8-pattern enumeration oracle at seed 2024
    rng = np.random.default_rng(2024)
    inst = rademacher_hermitian(rng, 3, 3)
    assert schatten.disc_p(inst, 4.0) == pytest.approx(3.8731504565143293, abs=1e-10)


def test_disc_p_requires_p_at_least_two():
    inst = model.HermitianInstance(2, (np.eye(2),), (model.DiscreteRandomVariable.rademacher(),))
    with pytest.raises(InvalidOrder):
        schatten.disc_p(inst, 1.5)


def test_rademacher_p2_closed_form(rng):
    inst = rademacher_hermitian(rng, 3, 3)
    rep = schatten.khintchine_bounds(inst, 2.0)
    trace_total = sum(float(np.trace(m @ m).real) for m in inst.matrices)
    assert rep.bounds["rademacher_closed_form"] == pytest.approx(math.sqrt(trace_total), rel=1e-12)


def test_rademacher_mc_equals_closed_form_exactly(rng):
    inst = rademacher_hermitian(rng, 3, 4)
    for p in (2.0, 4.0, 6.0):
        rep = schatten.khintchine_bounds(inst, p)
        est, se = rep.bounds["general_khintchine"]
        assert se == 0.0
        assert est == pytest.approx(rep.bounds["rademacher_closed_form"], rel=1e-12)
        assert rep.disc_p <= rep.bounds["rademacher_closed_form"] + 1e-9


def test_general_rv_bounds(rng):
    mats = tuple(random_hermitian(rng, 3) for _ in range(4))
    rvs = tuple(model.DiscreteRandomVariable((-2.0, 1.5), (0.4, 0.6)) for _ in range(4))
    inst = model.HermitianInstance(3, mats, rvs)
    rep = schatten.khintchine_bounds(inst, 4.0, mc_samples=3000)
    est, se = rep.bounds["general_khintchine"]
    assert se > 0.0
    assert rep.disc_p <= est + 3.0 * se
    rep2 = schatten.khintchine_bounds(inst, 2.0, mc_samples=3000)
    assert rep2.disc_p <= rep2.bounds["frobenius_closed_form"] + 1e-9
    assert rep2.sigma_f_alternative is not None


def test_frobenius_closed_form_value(rng):
    mats = tuple(random_hermitian(rng, 3) for _ in range(3))
    rvs = tuple(model.DiscreteRandomVariable((-2.0, 2.0), (0.5, 0.5)) for _ in range(3))
    inst = model.HermitianInstance(3, mats, rvs)
    rep = schatten.khintchine_bounds(inst, 2.0, mc_samples=1000)
    total = sum((rv.variance * m) @ (rv.variance * m) for rv, m in zip(rvs, mats))
    assert rep.bounds["frobenius_closed_form"] == pytest.approx(
        math.sqrt(float(np.trace(total).real)), rel=1e-10
    )


def test_infinite_order_marks_bounds_inapplicable(rng):
    inst = rademacher_hermitian(rng, 2, 3)
    rep = schatten.khintchine_bounds(inst, np.inf)
    assert rep.bounds["general_khintchine"] is None
    assert rep.bounds["rademacher_closed_form"] is None
    assert rep.bounds["frobenius_closed_form"] is None
    assert rep.disc_p == pytest.approx(disc.disc_bruteforce(inst).value, abs=1e-12)


def test_mc_sample_floor():
    rng = np.random.default_rng(0)
    mats = (random_hermitian(rng, 2),)
    inst = model.HermitianInstance(2, mats, (model.DiscreteRandomVariable.bernoulli(0.4),))
    with pytest.raises(PreconditionViolated):
        schatten.khintchine_bounds(inst, 2.0, mc_samples=10)


def test_mc_determinism_across_threads(rng):
    mats = tuple(random_hermitian(rng, 3) for _ in range(3))
    rvs = tuple(model.DiscreteRandomVariable.bernoulli(0.3) for _ in range(3))
    inst = model.HermitianInstance(3, mats, rvs)
    a = schatten.khintchine_bounds(inst, 4.0, threads=1)
    b = schatten.khintchine_bounds(inst, 4.0, threads=4)
    assert a.bounds["general_khintchine"] == b.bounds["general_khintchine"]


def test_assignment_norm_nonincreasing_in_p(rng):
    inst = rademacher_hermitian(rng, 3, 3)
    signs = [1.0, -1.0, 1.0]
    dev = sum(s * m for s, m in zip(signs, inst.matrices))
    ps = [2.0, 3.0, 4.0, 8.0, np.inf]
    vals = [linalg.schatten_norm(dev, p) for p in ps]
    assert all(vals[i + 1] <= vals[i] + 1e-12 for i in range(len(vals) - 1))


def test_norm_sandwich_for_signed_sums(rng):
    inst = rademacher_hermitian(rng, 4, 3)
    dev = sum(m for m in inst.matrices)
    spec = linalg.schatten_norm(dev, np.inf)
    for p in (2.0, 4.0, 6.0):
        sp = linalg.schatten_norm(dev, p)
        assert spec - 1e-12 <= sp <= 4 ** (1.0 / p) * spec + 1e-12
