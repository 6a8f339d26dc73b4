import math

import numpy as np
import pytest

from matdisc import model


def faddeev_leverrier(mat):
    """Independent characteristic-polynomial oracle (trace recurrence).

    Returns ascending coefficients of det(xI - M).
    """
    m = np.asarray(mat, dtype=complex)
    d = m.shape[0]
    coeffs = np.zeros(d + 1, dtype=complex)
    coeffs[d] = 1.0
    mk = np.eye(d, dtype=complex)
    for k in range(1, d + 1):
        mk = m @ mk
        ck = -np.trace(mk) / k
        coeffs[d - k] = ck
        mk = mk + ck * np.eye(d)
    return np.real(coeffs)


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2.0


def random_unitary(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_rank_one_instance(rng, d, n, supports=(2, 3)):
    vectors = tuple((rng.normal(size=d) + 1j * rng.normal(size=d)) / math.sqrt(2.0) for _ in range(n))
    rvs = []
    for _ in range(n):
        size = int(rng.choice(supports))
        vals = np.sort(rng.uniform(-2.0, 2.0, size=size))
        while size > 1 and float(np.diff(vals).min()) < 0.1:
            vals = np.sort(rng.uniform(-2.0, 2.0, size=size))
        probs = np.clip(rng.dirichlet(np.full(size, 2.0)), 0.05, None)
        rvs.append(model.DiscreteRandomVariable(tuple(vals), tuple(probs / probs.sum())))
    return model.RankOneInstance(d, vectors, tuple(rvs))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
