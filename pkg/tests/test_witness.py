import itertools
import math

import numpy as np
import pytest

from matdisc import disc, model, witness
from matdisc.errors import (
    DimensionMismatch,
    HypothesisNotMet,
    InvariantViolation,
    NotAboveRoots,
    NotPSD,
    WalkStepFailed,
)

from conftest import random_rank_one_instance


def unit_evaluator():
    return witness.QEvaluator([np.array([1.0])], [1.0])


def normalized_instance(rng, d, n):
    return model.normalize(random_rank_one_instance(rng, d, n))


def random_psd(rng, d):
    g = rng.normal(size=(d, d))
    return g @ g.T / d


# -- q_eval -----------------------------------------------------------------


def test_q_eval_base_case():
    qe = unit_evaluator()
    assert qe.q_eval(0, 2.0, [0.0]) == pytest.approx(4.0, abs=1e-14)


def test_q_eval_zero_shift_is_power():
    rng = np.random.default_rng(0)
    inst = normalized_instance(rng, 3, 2)
    qe = witness.QEvaluator.from_instance(inst)
    assert qe.q_eval(0, 1.7, np.zeros(qe.n)) == pytest.approx(1.7 ** (2 * 3), rel=1e-12)


def test_q_eval_one_variable_transform():
    qe = unit_evaluator()
    for x in (1.5, 2.0, 3.0):
        assert qe.q_eval(1, x, [0.0]) == pytest.approx(x * x - 1.0, rel=1e-12)


def test_q_eval_interpolation_matches_operator_route(rng):
    inst = normalized_instance(rng, 3, 4)
    qe = witness.QEvaluator.from_instance(inst)
    pa = qe.p_empty()
    pb = disc.expected_charpoly_operator(inst)
    scale = max(np.abs(pa).max(), np.abs(pb).max())
    assert np.abs(pa - pb).max() < 1e-8 * scale


def test_q_eval_operator_order_commutes(rng):
    # applying the per-variable rule in either order gives the same value
    inst = normalized_instance(rng, 2, 2)
    qe = witness.QEvaluator.from_instance(inst)
    x, z = 3.0, np.array([0.3, -0.2])

    def rule(f, i, at):
        hi, lo = at.copy(), at.copy()
        hi[i] += 1.0
        lo[i] -= 1.0
        return 2.0 * f(at) - (f(hi) + f(lo)) / 2.0

    f0 = lambda zz: qe.q_eval(0, x, zz)
    f_01 = rule(lambda a: rule(f0, 0, a), 1, z)
    f_10 = rule(lambda a: rule(f0, 1, a), 0, z)
    assert f_01 == pytest.approx(f_10, rel=1e-12)
    assert qe.q_eval(2, x, z) == pytest.approx(f_01, rel=1e-11)


def test_q_eval_matches_sign_pair_identity(rng):
    # independent identity: eliminating the first k variables equals the
    # average over sign vectors eta of det(B - sum eta_i W_i) det(B + ...)
    inst = normalized_instance(rng, 2, 3)
    qe = witness.QEvaluator.from_instance(inst)
    n, d = qe.n, qe.dim
    x, z = 2.5, np.array([-0.1, 0.2, 0.05][: qe.n])
    tw = qe.taus[:, None, None] * np.array([np.outer(v, v.conj()) for v in qe.vectors])
    base = x * np.eye(d) + np.tensordot(z, tw, axes=(0, 0))
    total = 0.0
    for eta in itertools.product([-1.0, 1.0], repeat=n):
        shift = np.tensordot(np.array(eta), tw, axes=(0, 0))
        total += np.linalg.det(base - shift).real * np.linalg.det(base + shift).real
    total /= 2.0**n
    assert qe.q_eval(n, x, z) == pytest.approx(total, rel=1e-10)


def test_qevaluator_validates_normalized_condition():
    with pytest.raises(InvariantViolation):
        witness.QEvaluator([np.array([math.sqrt(2.0)])], [1.0])


def test_from_instance_drops_constant_coordinates(rng):
    inst = normalized_instance(rng, 2, 2)
    widened = model.RankOneInstance(
        2,
        inst.vectors + (np.array([1.0, 0.0]),),
        inst.rvs + (model.DiscreteRandomVariable.constant(0.7),),
    )
    qe = witness.QEvaluator.from_instance(widened, validate=False)
    assert qe.n == 2


# -- barriers ---------------------------------------------------------------


def test_initial_barriers_bounded_by_deltas(rng):
    for _ in range(5):
        inst = normalized_instance(rng, int(rng.integers(2, 5)), int(rng.integers(2, 6)))
        qe = witness.QEvaluator.from_instance(inst)
        w0 = -qe.deltas
        for i in range(qe.n):
            val = witness.barrier(qe, 0, (3.0, w0), i, mode="analytic")
            assert val <= qe.deltas[i] + 1e-9


def test_barrier_analytic_fd_agreement(rng):
    inst = normalized_instance(rng, 3, 3)
    qe = witness.QEvaluator.from_instance(inst)
    w0 = -qe.deltas
    for i in range(qe.n):
        a = witness.barrier(qe, 0, (3.0, w0), i, mode="analytic")
        b = witness.barrier(qe, 0, (3.0, w0), i, mode="finite_difference")
        assert b == pytest.approx(a, rel=1e-6, abs=1e-9)


def test_barrier_monotone_along_shifts(rng):
    inst = normalized_instance(rng, 2, 3)
    qe = witness.QEvaluator.from_instance(inst)
    w0 = -qe.deltas
    for t in (0.1, 1.0, 10.0):
        for i in range(qe.n):
            assert witness.barrier(qe, 0, (3.0 + t, w0), i, mode="analytic") <= witness.barrier(
                qe, 0, (3.0, w0), i, mode="analytic"
            ) + 1e-12


def test_barrier_requires_point_above_roots():
    qe = unit_evaluator()
    with pytest.raises(NotAboveRoots):
        witness.barrier(qe, 0, (0.5, [-1.0]), 0, mode="analytic")


def test_analytic_mode_restricted_to_base():
    qe = unit_evaluator()
    with pytest.raises(ValueError):
        witness.barrier(qe, 1, (3.0, [0.0]), 0, mode="analytic")


# -- barrier walk -----------------------------------------------------------


def test_walk_trivial_instance():
    inst = model.RankOneInstance(1, (np.array([1.0]),), (model.DiscreteRandomVariable.rademacher(),))
    trace = witness.replay_barrier_walk(inst)
    assert trace.passed
    assert trace.p_empty_lambda_max == pytest.approx(1.0, abs=1e-9)
    assert trace.deltas == (1.0,)


def test_walk_seeded_instances(rng):
    for _ in range(6):
        inst = normalized_instance(rng, int(rng.integers(2, 5)), int(rng.integers(2, 7)))
        trace = witness.replay_barrier_walk(inst)
        assert trace.passed
        assert trace.p_empty_lambda_max <= 3.0 + 1e-9
        for b, dlt in zip(trace.initial_barriers, trace.deltas):
            assert b <= dlt + 1e-9
        assert all(0.0 < dlt <= 1.0 + 1e-9 for dlt in trace.deltas)


def test_walk_denormalized_fails_at_initial_point():
    inst = model.RankOneInstance(
        1, (np.array([math.sqrt(2.0)]),), (model.DiscreteRandomVariable.rademacher(),)
    )
    with pytest.raises(WalkStepFailed) as err:
        witness.replay_barrier_walk(inst)
    assert err.value.step == -1


def test_walk_skips_zero_variance_coordinates(rng):
    inst = normalized_instance(rng, 2, 2)
    widened = model.RankOneInstance(
        2,
        inst.vectors + (np.array([0.4, 0.1]),),
        inst.rvs + (model.DiscreteRandomVariable.constant(1.0),),
    )
    trace = witness.replay_barrier_walk(widened)
    assert trace.passed and len(trace.deltas) == 2


def test_walk_trace_serializes(rng):
    inst = normalized_instance(rng, 2, 3)
    doc = witness.replay_barrier_walk(inst).to_doc()
    assert doc["passed"] and len(doc["steps"]) == 3


# -- mixed discriminants ----------------------------------------------------


def test_mixed_discriminant_identity_matrices():
    for d in range(1, 6):
        assert witness.mixed_discriminant([np.eye(d)] * d) == pytest.approx(
            math.factorial(d), rel=1e-12
        )


def test_mixed_discriminant_two_dim_polarization():
    rng = np.random.default_rng(4)
    x, y = random_psd(rng, 2), random_psd(rng, 2)
    expect = np.linalg.det(x + y) - np.linalg.det(x) - np.linalg.det(y)
    assert witness.mixed_discriminant([x, y]) == pytest.approx(expect, rel=1e-12)


def test_mixed_discriminant_routes_agree(rng):
    for d in (2, 3, 4, 5):
        mats = [random_psd(rng, d) for _ in range(d)]
        a = witness.mixed_discriminant(mats)
        b = witness.mixed_discriminant_permanental(mats)
        assert abs(a - b) < 1e-9 * max(1.0, abs(a))


def test_mixed_discriminant_symmetry(rng):
    mats = [random_psd(rng, 3) for _ in range(3)]
    base = witness.mixed_discriminant(mats)
    for perm in itertools.permutations(range(3)):
        assert witness.mixed_discriminant([mats[i] for i in perm]) == pytest.approx(
            base, abs=1e-10 * max(1.0, abs(base))
        )


def test_mixed_discriminant_multilinear(rng):
    x, xp, y, z = (random_psd(rng, 3) for _ in range(4))
    a, b = 0.7, 1.3
    lhs = witness.mixed_discriminant([a * x + b * xp, y, z])
    rhs = a * witness.mixed_discriminant([x, y, z]) + b * witness.mixed_discriminant([xp, y, z])
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_mixed_discriminant_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        witness.mixed_discriminant([np.eye(3)] * 2)


def test_d_tilde_trace_identity(rng):
    for d in range(2, 7):
        x = random_psd(rng, d)
        assert witness.d_tilde([x]) == pytest.approx(float(np.trace(x)), abs=1e-10 * max(1.0, np.trace(x)))


def test_d_tilde_identity_value():
    for d in range(1, 6):
        assert witness.d_tilde([np.eye(d)]) == pytest.approx(d, rel=1e-12)


def test_d_tilde_pair_matches_padded_polarization(rng):
    d = 4
    x, y = random_psd(rng, d), random_psd(rng, d)
    direct = witness.mixed_discriminant([x, y, np.eye(d), np.eye(d)]) / math.factorial(2)
    assert witness.d_tilde([x, y]) == pytest.approx(direct, rel=1e-12)


def test_check_alexandrov_examples():
    lhs, rhs, ok = witness.check_alexandrov(np.eye(2), np.eye(2))
    assert (lhs, rhs, ok) == (pytest.approx(4.0), pytest.approx(2.0), True)
    lhs, rhs, ok = witness.check_alexandrov(np.eye(3), np.zeros((3, 3)))
    assert rhs == pytest.approx(0.0, abs=1e-12) and ok


def test_check_alexandrov_rejects_non_psd():
    with pytest.raises(NotPSD):
        witness.check_alexandrov(np.diag([1.0, -1.0]), np.eye(2))


def test_check_alexandrov_sweep(rng):
    for _ in range(60):
        d = int(rng.integers(2, 7))
        _, _, ok = witness.check_alexandrov(random_psd(rng, d), random_psd(rng, d))
        assert ok


def test_barrier_equals_normalized_mixed_discriminant(rng):
    # on a generated determinantal representation, the x-barrier equals the
    # padded mixed discriminant of the resolvent-compressed coefficient
    d = 4
    a, b = random_psd(rng, d), random_psd(rng, d) + 0.2 * np.eye(d)
    c = random_psd(rng, d)
    x0, y0 = 1.0, 2.0
    m = x0 * a + y0 * b + c
    root = np.linalg.cholesky(np.linalg.inv(m))
    a_hat = root.T @ a @ root
    dp = witness.DeterminantalPolynomial((a, b), c)
    assert dp.barrier(0, [x0, y0]) == pytest.approx(witness.d_tilde([a_hat]), rel=1e-9)


# -- quadratic and bivariate barrier lemmas ----------------------------------


def test_univariate_barrier_log_derivative():
    assert witness.univariate_barrier([0.0, 0.0, 1.0], 3.0) == pytest.approx(2.0 / 3.0)


def test_quadratic_barrier_examples():
    # x^2: f is identically zero
    assert witness.check_quadratic_barrier([0.0, 0.0, 1.0], [0.5, 1.0, 2.0])
    # (x-1)(x-2) and x^2 - 1
    assert witness.check_quadratic_barrier([2.0, -3.0, 1.0], [2.1, 3.0, 10.0])
    assert witness.check_quadratic_barrier([-1.0, 0.0, 1.0], [1.5, 2.0, 5.0])


def test_quadratic_barrier_requires_probes_above_roots():
    with pytest.raises(NotAboveRoots):
        witness.check_quadratic_barrier([2.0, -3.0, 1.0], [1.5, 3.0])


def test_quadratic_barrier_sweep(rng):
    for _ in range(50):
        r = np.sort(rng.uniform(-3, 3, size=2))
        lead = float(rng.uniform(0.2, 2.0))
        coeffs = lead * np.array([r[0] * r[1], -(r[0] + r[1]), 1.0])
        probes = r[1] + np.sort(rng.uniform(0.05, 8.0, size=8))
        assert witness.check_quadratic_barrier(coeffs, probes)


def test_determinantal_second_order_bound(rng):
    parts = tuple(random_psd(rng, 3) for _ in range(2))
    dp = witness.DeterminantalPolynomial(parts, np.eye(3))
    z = np.array([0.5, 1.0])
    for i in range(2):
        assert dp.second_ratio(i, z) <= dp.barrier(i, z) ** 2 + 1e-10


def test_bivariate_lemma_unit_shift(rng):
    for _ in range(20):
        d = int(rng.integers(2, 5))
        avec = rng.normal(size=d)
        a = np.outer(avec, avec)
        b = random_psd(rng, d) + 0.3 * np.eye(d)
        c = (lambda g: (g + g.T) / 2)(rng.normal(size=(d, d)))
        y0 = (abs(float(np.linalg.eigvalsh(c).min())) + 0.5) / float(np.linalg.eigvalsh(b).min())
        p = witness.DeterminantalBivariate(a, b, c)
        assert witness.check_bivariate_quadratic_lemma(p, (0.5, y0), 1.0)


def test_bivariate_lemma_fractional_shift_with_hypothesis():
    a = np.outer([0.3, 0.1], [0.3, 0.1])
    p = witness.DeterminantalBivariate(a, np.eye(2), np.zeros((2, 2)))
    # Phi^x = 2 * 0.1 = 0.2 <= 0.5 / 0.75
    assert witness.check_bivariate_quadratic_lemma(p, (0.0, 1.0), 0.5)


def test_bivariate_lemma_hypothesis_filter():
    a = np.outer([1.0, 0.0], [1.0, 0.0])
    p = witness.DeterminantalBivariate(a, np.eye(2), np.zeros((2, 2)))
    # Phi^x = 2 > 0.5 / 0.75
    with pytest.raises(HypothesisNotMet):
        witness.check_bivariate_quadratic_lemma(p, (0.0, 1.0), 0.5)


def test_bivariate_lemma_requires_rank_one():
    p = witness.DeterminantalBivariate(np.eye(2), np.eye(2), np.zeros((2, 2)))
    with pytest.raises(InvariantViolation):
        witness.check_bivariate_quadratic_lemma(p, (1.0, 1.0), 1.0)
