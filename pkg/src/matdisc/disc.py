"""Discrepancy computation.

Four routes live here:

* exhaustive minimization over all sign assignments (the ground-truth oracle),
* expected characteristic polynomials of partial assignments, computed by
  enumeration over the remaining supports,
* the same top-level polynomial through the differential-operator route,
* the greedy solver that walks the interlacing family by always descending
  into a branch whose polynomial has the smallest largest root.

Plus the menu of named upper bounds and the subset-rounding wrapper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import numpy.polynomial.polynomial as npp

from . import linalg, model, rpoly
from ._util import map_chunks, resolve_threads
from .errors import (
    EnumerationTooLarge,
    InvalidOrder,
    InvariantViolation,
    NotRealRooted,
    PreconditionViolated,
)

ENUM_CAP = 2**24

NormKind = Union[str, Tuple[str, float]]


# ---------------------------------------------------------------------------
# Enumeration plumbing
# ---------------------------------------------------------------------------


def _family(inst):
    """Stacked coefficient matrices (n, d, d), means, padded supports/probs."""
    if isinstance(inst, model.RankOneInstance):
        terms = np.array([np.outer(v, v.conj()) for v in inst.vectors])
    else:
        terms = np.array(inst.matrices)
    means = np.array([rv.mean for rv in inst.rvs])
    sizes = np.array([len(rv.support) for rv in inst.rvs], dtype=np.int64)
    width = sizes.max()
    supp = np.zeros((inst.n, width))
    prob = np.zeros((inst.n, width))
    for j, rv in enumerate(inst.rvs):
        supp[j, : sizes[j]] = rv.support
        prob[j, : sizes[j]] = rv.probs
    return terms, means, sizes, supp, prob


def _strides(sizes: np.ndarray) -> np.ndarray:
    n = len(sizes)
    strides = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]
    return strides


def _digits(linear: np.ndarray, sizes, strides) -> np.ndarray:
    return (linear[:, None] // strides[None, :]) % sizes[None, :]


def _check_cap(total: int, cap: int) -> None:
    if total > cap:
        raise EnumerationTooLarge(int(total), int(cap))


def _norm_fn(norm_kind: NormKind):
    if norm_kind == "spectral":
        return lambda eigs: np.abs(eigs).max(axis=-1)
    if isinstance(norm_kind, tuple) and len(norm_kind) == 2 and norm_kind[0] == "schatten":
        p = float(norm_kind[1])
        if p == np.inf:
            return lambda eigs: np.abs(eigs).max(axis=-1)
        if p < 1:
            raise InvalidOrder(f"Schatten order must be >= 1, got {p}")
        return lambda eigs: np.sum(np.abs(eigs) ** p, axis=-1) ** (1.0 / p)
    raise ValueError(f"unknown norm kind {norm_kind!r}")


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscrepancyReport:
    """Exact discrepancy plus the assignment achieving it."""

    value: float
    argmin: model.SignAssignment
    sigma: float
    norm_kind: NormKind
    bound_checks: dict

    def to_doc(self) -> dict:
        nk = self.norm_kind if self.norm_kind == "spectral" else {"schatten": self.norm_kind[1]}
        return {
            "value": self.value,
            "argmin": {"indices": list(self.argmin.indices), "values": list(self.argmin.values)},
            "sigma": self.sigma,
            "norm_kind": nk,
            "bound_checks": {k: {"bound": b, "satisfied": s} for k, (b, s) in self.bound_checks.items()},
        }


def disc_bruteforce(
    inst: model.Instance,
    norm_kind: NormKind = "spectral",
    cap: int = ENUM_CAP,
    threads: Optional[int] = None,
) -> DiscrepancyReport:
    """Exact discrepancy by enumerating every assignment.

    Minimizes ``|| sum_j eps_j M_j - sum_j E[xi_j] M_j ||`` over the product
    of the supports; ties resolve to the lexicographically smallest tuple of
    support indices. Chunks reduce with a (value, index) minimum, so the
    result is independent of the thread schedule.
    """
    terms, means, sizes, supp, prob = _family(inst)
    strides = _strides(sizes)
    total = int(np.prod(sizes.astype(object)))
    _check_cap(total, cap)
    norm = _norm_fn(norm_kind)
    nthreads = resolve_threads(threads)

    def scan(start, stop):
        digits = _digits(np.arange(start, stop, dtype=np.int64), sizes, strides)
        # deviation coefficients eps_j - E[xi_j]
        coef = np.take_along_axis(supp[None, :, :], digits[:, :, None], axis=2)[:, :, 0] - means
        mats = np.tensordot(coef, terms, axes=(1, 0))
        vals = norm(np.linalg.eigvalsh(mats))
        k = int(np.argmin(vals))
        return float(vals[k]), start + k

    best_val, best_idx = math.inf, -1
    for val, idx in map_chunks(scan, total, nthreads):
        if val < best_val or (val == best_val and idx < best_idx):
            best_val, best_idx = val, idx
    digits = _digits(np.array([best_idx], dtype=np.int64), sizes, strides)[0]
    argmin = model.SignAssignment.from_indices(digits.tolist(), inst.rvs)

    sig = model.sigma(inst)
    checks: dict = {}
    if isinstance(inst, model.RankOneInstance) and norm_kind == "spectral":
        for name, bound in bound_menu(inst).items():
            if bound.applicable:
                checks[name] = (bound.value, best_val <= bound.value + 1e-9)
    return DiscrepancyReport(best_val, argmin, sig, norm_kind, checks)


# ---------------------------------------------------------------------------
# Expected characteristic polynomials
# ---------------------------------------------------------------------------


def _even_to_x(ycoeffs: np.ndarray) -> np.ndarray:
    """Coefficients in y = x^2 to the even polynomial in x."""
    out = np.zeros(2 * len(ycoeffs) - 1)
    out[::2] = ycoeffs
    return out


def _ypoly_from_eigs_batch(lam: np.ndarray) -> np.ndarray:
    """prod_j (y - lam_j^2) for each row of eigenvalues; ascending coeffs."""
    b, d = lam.shape
    r = lam * lam
    c = np.zeros((b, d + 1))
    c[:, 0] = 1.0
    for j in range(d):
        lower = c[:, : j + 1].copy()
        c[:, 1 : j + 2] = lower
        c[:, 0] = 0.0
        c[:, : j + 1] -= r[:, j : j + 1] * lower
    return c


def expected_charpoly(
    inst: model.RankOneInstance,
    prefix: Sequence[int] = (),
    cap: int = ENUM_CAP,
) -> np.ndarray:
    """Expected characteristic polynomial of a partial assignment.

    ``prefix`` pins the first ``k`` outcomes by support index. The result is
    the probability-weighted sum, over the product of the remaining supports,
    of ``det[x^2 I - M^2]`` where ``M = sum_i (E[xi_i] - eps_i) u_i u_i*``;
    each term is expanded through the mirror identity
    ``det[x^2 I - M^2] = det[xI - M] det[xI + M]``, i.e. from the spectrum of
    M as ``prod_j (x^2 - lam_j^2)``. Degree is exactly ``2 * dim``.
    """
    if not isinstance(inst, model.RankOneInstance):
        raise TypeError("expected_charpoly needs a rank-one instance")
    terms, means, sizes, supp, prob = _family(inst)
    k = len(prefix)
    if k > inst.n:
        raise InvariantViolation("prefix", "longer than the instance")
    for j, i in enumerate(prefix):
        if not 0 <= int(i) < sizes[j]:
            raise InvariantViolation("prefix", f"support index {i} out of range at {j}")
    d = inst.dim

    prefix_idx = np.array([int(i) for i in prefix], dtype=np.int64)
    pref_weight = float(np.prod(prob[np.arange(k), prefix_idx])) if k else 1.0
    fixed = np.zeros((d, d), dtype=complex)
    if k:
        c_pref = means[:k] - supp[np.arange(k), prefix_idx]
        fixed = np.tensordot(c_pref, terms[:k], axes=(0, 0))

    rest_sizes = sizes[k:]
    total = int(np.prod(rest_sizes.astype(object))) if k < inst.n else 1
    _check_cap(total, cap)

    acc = np.zeros(d + 1)
    if k == inst.n:
        lam = np.linalg.eigvalsh(fixed[None])
        acc = pref_weight * _ypoly_from_eigs_batch(lam)[0]
        return _even_to_x(acc)

    rest_strides = _strides(rest_sizes)
    rest_terms = terms[k:]
    rest_means = means[k:]
    rest_supp = supp[k:]
    rest_prob = prob[k:]

    def scan(start, stop):
        digits = _digits(np.arange(start, stop, dtype=np.int64), rest_sizes, rest_strides)
        vals = np.take_along_axis(rest_supp[None, :, :], digits[:, :, None], axis=2)[:, :, 0]
        ws = np.take_along_axis(rest_prob[None, :, :], digits[:, :, None], axis=2)[:, :, 0]
        coef = rest_means - vals
        mats = fixed[None] + np.tensordot(coef, rest_terms, axes=(1, 0))
        lam = np.linalg.eigvalsh(mats)
        polys = _ypoly_from_eigs_batch(lam)
        return (np.prod(ws, axis=1)[:, None] * polys).sum(axis=0)

    for part in map_chunks(scan, total, 1):
        acc += part
    return _even_to_x(pref_weight * acc)


OPERATOR_MAX_N = 14


def _monic_from_roots_batch(r: np.ndarray) -> np.ndarray:
    """prod_j (x - r_j) per row, ascending coefficients, shape (b, d+1)."""
    b, d = r.shape
    c = np.zeros((b, d + 1))
    c[:, 0] = 1.0
    for j in range(d):
        lower = c[:, : j + 1].copy()
        c[:, 1 : j + 2] = lower
        c[:, 0] = 0.0
        c[:, : j + 1] -= r[:, j : j + 1] * lower
    return c


def expected_charpoly_operator(inst: model.RankOneInstance, cap_n: int = OPERATOR_MAX_N) -> np.ndarray:
    """Top-level expected characteristic polynomial via the operator route.

    Applies ``prod_i (1 - (1/2) d^2/dz_i^2)`` at z = 0 to
    ``Q(x, z) = det[xI + sum_i z_i tau_i u_i u_i*]^2`` (``tau_i`` the standard
    deviation of the i-th variable). Each variable is eliminated by the exact
    three-point rule for quadratics, ``2 f(0) - (f(1) + f(-1)) / 2``; since the
    rule is linear it is applied to polynomial coefficient vectors, giving the
    weighted sum over the grid {-1, 0, 1}^n of ``det[xI + M_delta]^2``, each
    factor expanded exactly from the spectrum of its grid matrix.
    """
    if inst.n > cap_n:
        raise EnumerationTooLarge(3**inst.n, 3**cap_n)
    d, n = inst.dim, inst.n
    taus = np.array([math.sqrt(rv.variance) for rv in inst.rvs])
    w = np.array([np.outer(v, v.conj()) for v in inst.vectors])
    tw = taus[:, None, None] * w

    grid = np.stack(np.meshgrid(*([np.array([-1.0, 0.0, 1.0])] * n), indexing="ij"), axis=-1).reshape(-1, n)
    weights = np.prod(np.where(grid == 0.0, 2.0, -0.5), axis=1)

    acc = np.zeros(2 * d + 1)
    for start in range(0, len(grid), 16384):
        g = grid[start : start + 16384]
        shifts = np.tensordot(g, tw, axes=(1, 0))
        mu = np.linalg.eigvalsh(shifts)
        base = _monic_from_roots_batch(-mu)  # det[xI + M_delta]
        sq = np.zeros((len(g), 2 * d + 1))
        for i in range(d + 1):
            sq[:, i : i + d + 1] += base[:, i : i + 1] * base
        acc += weights[start : start + 16384] @ sq
    # Even in x exactly; the grid's sign symmetry cancels odd terms.
    acc[1::2] = 0.0
    return acc


# ---------------------------------------------------------------------------
# Greedy solver over the interlacing family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GreedyLevel:
    """One level of the greedy descent."""

    level: int
    branch_values: tuple
    branch_lambda_max: tuple
    chosen_index: int
    chosen_value: float
    chosen_lambda_max: float
    parent_lambda_max: float
    monotone_ok: bool
    branch_coeffs: tuple  # x-space coefficients per branch, for auditing


@dataclass(frozen=True)
class GreedyTrace:
    levels: tuple
    p_empty_lambda_max: float
    leaf_lambda_max: float
    final_value: float

    def to_doc(self) -> dict:
        return {
            "p_empty_lambda_max": self.p_empty_lambda_max,
            "leaf_lambda_max": self.leaf_lambda_max,
            "final_value": self.final_value,
            "levels": [
                {
                    "level": lv.level,
                    "branch_values": list(lv.branch_values),
                    "branch_lambda_max": list(lv.branch_lambda_max),
                    "chosen_index": lv.chosen_index,
                    "chosen_value": lv.chosen_value,
                    "chosen_lambda_max": lv.chosen_lambda_max,
                    "parent_lambda_max": lv.parent_lambda_max,
                    "monotone_ok": lv.monotone_ok,
                }
                for lv in self.levels
            ],
        }


GREEDY_MONOTONE_TOL = 1e-9


def _lambda_max_y(ycoeffs: np.ndarray, tol: float) -> float:
    """Largest root of the even polynomial q(x^2), from its y-space roots."""
    c = rpoly.trim(ycoeffs)
    if len(c) < 2 and c[0] == 0.0:
        raise NotRealRooted("degenerate partial polynomial (zero-probability branch?)")
    c, nzero = rpoly.deflate_zero_roots(c)
    if len(c) < 2:
        return 0.0
    r = npp.polyroots(c)
    scale = 1.0 + np.abs(np.real(r)).max()
    if np.abs(np.imag(r)).max() > tol * scale:
        raise NotRealRooted(f"partial polynomial has complex y-roots beyond tol {tol:.1e}")
    top = float(np.real(r).max())
    if nzero:
        top = max(top, 0.0)
    if top < -tol * scale:
        raise NotRealRooted("partial polynomial has a negative leading y-root")
    return math.sqrt(max(top, 0.0))


def _branch_polys(terms, means, sizes, supp, prob, prefix_idx, k, cap) -> np.ndarray:
    """y-space polynomials of every branch below a fixed prefix, shape (S_k, d+1)."""
    n = len(sizes)
    d = terms.shape[1]
    fixed = np.zeros((d, d), dtype=complex)
    pref_weight = 1.0
    if prefix_idx:
        pi = np.array(prefix_idx, dtype=np.int64)
        c_pref = means[:k] - supp[np.arange(k), pi]
        fixed = np.tensordot(c_pref, terms[:k], axes=(0, 0))
        pref_weight = float(np.prod(prob[np.arange(k), pi]))

    tail_sizes = sizes[k:]
    tail_strides = _strides(tail_sizes)
    total = int(np.prod(tail_sizes.astype(object)))
    _check_cap(total, cap)
    block = int(tail_strides[0])

    out = np.zeros((int(sizes[k]), d + 1))

    def scan(start, stop):
        digits = _digits(np.arange(start, stop, dtype=np.int64), tail_sizes, tail_strides)
        vals = np.take_along_axis(supp[k:][None, :, :], digits[:, :, None], axis=2)[:, :, 0]
        ws = np.take_along_axis(prob[k:][None, :, :], digits[:, :, None], axis=2)[:, :, 0]
        coef = means[k:] - vals
        mats = fixed[None] + np.tensordot(coef, terms[k:], axes=(1, 0))
        lam = np.linalg.eigvalsh(mats)
        polys = np.prod(ws, axis=1)[:, None] * _ypoly_from_eigs_batch(lam)
        part = np.zeros_like(out)
        branch = np.arange(start, stop) // block
        np.add.at(part, branch, polys)
        return part

    for part in map_chunks(scan, total, 1):
        out += part
    return pref_weight * out


def greedy_interlacing_solve(
    inst: model.RankOneInstance,
    root_tol: float = rpoly.REAL_ROOT_TOL,
    cap: int = ENUM_CAP,
) -> Tuple[model.SignAssignment, GreedyTrace]:
    """Descend the interlacing family, minimizing the largest branch root.

    At level k every outcome t in the k-th support gets its partial expected
    polynomial evaluated; the greedy fixes a minimizer of the largest root
    (ties go to the smallest support index). The final assignment's deviation
    norm equals the leaf polynomial's largest root, and every level records
    whether the chosen root stayed below the parent's (violations beyond
    1e-9 are flagged in the trace, not silently dropped).
    """
    if not isinstance(inst, model.RankOneInstance):
        raise TypeError("the greedy solver is rank-one only")
    terms, means, sizes, supp, prob = _family(inst)
    prefix: list = []
    levels = []
    parent_lam = None
    p_empty_lam = None
    for k in range(inst.n):
        polys = _branch_polys(terms, means, sizes, supp, prob, prefix, k, cap)
        if k == 0:
            p_empty_lam = _lambda_max_y(polys.sum(axis=0), root_tol)
            parent_lam = p_empty_lam
        lams = np.array([_lambda_max_y(polys[t], root_tol) for t in range(int(sizes[k]))])
        t = int(np.argmin(lams))
        monotone = bool(lams[t] <= parent_lam + GREEDY_MONOTONE_TOL)
        levels.append(
            GreedyLevel(
                level=k + 1,
                branch_values=tuple(float(supp[k, i]) for i in range(int(sizes[k]))),
                branch_lambda_max=tuple(float(x) for x in lams),
                chosen_index=t,
                chosen_value=float(supp[k, t]),
                chosen_lambda_max=float(lams[t]),
                parent_lambda_max=float(parent_lam),
                monotone_ok=monotone,
                branch_coeffs=tuple(tuple(_even_to_x(polys[i])) for i in range(int(sizes[k]))),
            )
        )
        prefix.append(t)
        parent_lam = float(lams[t])

    assignment = model.SignAssignment.from_indices(prefix, inst.rvs)
    coef = means - np.array(assignment.values)
    deviation = np.tensordot(coef, terms, axes=(0, 0))
    final_value = linalg.residual_norm(deviation)
    trace = GreedyTrace(tuple(levels), float(p_empty_lam), float(parent_lam), float(final_value))
    return assignment, trace


# ---------------------------------------------------------------------------
# Bound menu and subset rounding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    value: Optional[float]
    applicable: bool


FRAME_GATE_TOL = 1e-8


def bound_menu(inst: model.RankOneInstance) -> dict:
    """Named upper bounds with applicability flags.

    ``three_sigma`` and ``four_sigma`` always apply. ``mss`` applies to
    Rademacher families resolving the identity (within 1e-8), with
    delta = max_i ||u_i||^2. ``tight_frame`` applies to Rademacher families
    whose frame operator is a multiple of the identity.
    """
    sig = model.sigma(inst)
    out = {
        "three_sigma": Bound(3.0 * sig, True),
        "four_sigma": Bound(4.0 * sig, True),
    }
    rademacher = all(rv.is_rademacher() for rv in inst.rvs)
    gram = np.zeros((inst.dim, inst.dim), dtype=complex)
    for v in inst.vectors:
        gram += np.outer(v, v.conj())
    eye = np.eye(inst.dim)
    delta = max(float(np.vdot(v, v).real) for v in inst.vectors)

    if rademacher and linalg.residual_norm(gram - eye) <= FRAME_GATE_TOL:
        out["mss"] = Bound(2.0 * (math.sqrt(2.0 * delta) + delta), True)
    else:
        out["mss"] = Bound(None, False)

    frame_c = float(np.trace(gram).real) / inst.dim
    tight = linalg.residual_norm(gram - frame_c * eye) <= FRAME_GATE_TOL * max(1.0, frame_c)
    if rademacher and tight:
        out["tight_frame"] = Bound(math.sqrt(inst.n / inst.dim) * sig, True)
    else:
        out["tight_frame"] = Bound(None, False)
    return out


def lyapunov_round(vectors: Sequence, t: Sequence[float], cap: int = ENUM_CAP) -> tuple:
    """Round fractional weights t to a vertex subset S.

    Requires ``|| sum u_i u_i* || <= 1`` (up to 1e-9) and returns indices S
    with ``|| sum_{i in S} u_i u_i* - sum_i t_i u_i u_i* || <= 1.5 sqrt(eps)``
    where eps = max ||u_i||^2, via the greedy solver on {0,1}-valued
    variables with means t_i.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if len(vecs) != len(t):
        raise PreconditionViolated("weights", "need one t_i per vector")
    d = len(vecs[0])
    ts = [float(x) for x in t]
    if any(not 0.0 <= x <= 1.0 for x in ts):
        raise PreconditionViolated("t range", "every t_i must lie in [0, 1]")
    gram = np.zeros((d, d), dtype=complex)
    for v in vecs:
        gram += np.outer(v, v.conj())
    if linalg.residual_norm(gram) > 1.0 + 1e-9:
        raise PreconditionViolated("frame operator norm", "|| sum u u* || must be <= 1")
    eps = max(float(np.vdot(v, v).real) for v in vecs)

    rvs = tuple(model.DiscreteRandomVariable.bernoulli(x) for x in ts)
    inst = model.RankOneInstance(d, tuple(vecs), rvs)
    assignment, _ = greedy_interlacing_solve(inst, cap=cap)
    subset = tuple(i for i, val in enumerate(assignment.values) if val == 1.0)

    target = np.tensordot(np.array(ts), np.array([np.outer(v, v.conj()) for v in vecs]), axes=(0, 0))
    achieved = np.zeros_like(target)
    for i in subset:
        achieved += np.outer(vecs[i], vecs[i].conj())
    err = linalg.residual_norm(achieved - target)
    if err > 1.5 * math.sqrt(eps) + 1e-9:
        raise InvariantViolation("lyapunov bound", f"error {err:.3e} exceeds 1.5 sqrt({eps:.3e})")
    return subset
