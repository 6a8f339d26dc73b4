"""Numerical verification engine for the proof machinery.

Covers the multivariate barrier walk that certifies the largest root of the
top-level expected polynomial, barrier-function evaluation (analytic and
finite-difference), mixed discriminants with their padded normalization, and
the quadratic/bivariate barrier lemmas on generated determinantal families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.polynomial.polynomial as npp

from . import linalg, model, rpoly
from .errors import (
    DimensionMismatch,
    HypothesisNotMet,
    InvariantViolation,
    NotAboveRoots,
    NotPSD,
    WalkStepFailed,
)

NORMALIZED_TOL = 1e-9
PSD_SLACK = 1e-10

# Deterministic ray probe used by the above-the-roots certification.
PROBE_POINTS = 16
PROBE_STEP = 0.25

FD_STEP = 1e-5

_EVAL_BATCH = 1 << 18


class QEvaluator:
    """Evaluator for Q(x, z) = det[xI + sum_i z_i tau_i v_i v_i*]^2 and its
    partial transforms Q_k = prod_{i<=k} (1 - (1/2) d^2/dz_i^2) Q.

    Holds normalized vectors (deviation scale 1) and the per-coordinate
    standard deviations. Construction checks the normalized condition
    ``sum tau_i^2 (v_i v_i*)^2 <= I`` up to 1e-9 unless ``validate=False``.
    """

    def __init__(self, vectors: Sequence, taus: Sequence[float], validate: bool = True):
        self.vectors = tuple(np.asarray(v, dtype=complex).reshape(-1) for v in vectors)
        self.taus = np.asarray(taus, dtype=float)
        if len(self.vectors) != len(self.taus):
            raise DimensionMismatch("one tau per vector required")
        self.n = len(self.vectors)
        self.dim = len(self.vectors[0]) if self.n else 1
        if any(v.shape != (self.dim,) for v in self.vectors):
            raise DimensionMismatch("vectors of mixed dimension")
        if self.n:
            outer = np.array([np.outer(v, v.conj()) for v in self.vectors])
        else:
            outer = np.zeros((0, self.dim, self.dim), dtype=complex)
        norms_sq = np.array([float(np.vdot(v, v).real) for v in self.vectors])
        self._tw = self.taus[:, None, None] * outer
        self.deltas = self.taus * norms_sq
        if validate and self.n:
            # (v v*)^2 = |v|^2 v v*, so the normalized condition reduces to
            # one spectral norm of a weighted frame operator
            squared = np.tensordot(self.taus**2 * norms_sq, outer, axes=(0, 0))
            top = linalg.spectral_norm(squared)
            if top > 1.0 + NORMALIZED_TOL:
                raise InvariantViolation("normalized condition", f"|| sum tau^2 (vv*)^2 || = {top:.6f} > 1")
        self._grids: dict = {}

    @classmethod
    def from_instance(cls, inst: model.RankOneInstance, validate: bool = True) -> "QEvaluator":
        """Build from a normalized rank-one instance.

        Coordinates with zero variance (or zero vectors) contribute nothing
        to Q and would stall the shift walk at delta_i = 0, so they are
        dropped here.
        """
        pairs = [
            (v, math.sqrt(rv.variance))
            for v, rv in zip(inst.vectors, inst.rvs)
            if rv.variance > 0.0 and float(np.vdot(v, v).real) > 0.0
        ]
        return cls([p[0] for p in pairs], [p[1] for p in pairs], validate=validate)

    # -- evaluation --------------------------------------------------------

    def _grid(self, k: int):
        if k not in self._grids:
            if k == 0:
                self._grids[k] = (np.zeros((1, 0)), np.ones(1))
            else:
                pts = np.stack(
                    np.meshgrid(*([np.array([-1.0, 0.0, 1.0])] * k), indexing="ij"), axis=-1
                ).reshape(-1, k)
                weights = np.prod(np.where(pts == 0.0, 2.0, -0.5), axis=1)
                self._grids[k] = (pts, weights)
        return self._grids[k]

    def eval_many(self, k: int, xs, zs) -> np.ndarray:
        """Q_k at a batch of points; xs has shape (P,), zs has shape (P, n).

        Each applied variable is removed by the exact three-point rule
        ``2 f(z) - (f(z+1) + f(z-1)) / 2``, so Q_k at one point is a weighted
        sum of Q over the shifted grid ``z + {-1,0,1}^k``.
        """
        if not 0 <= k <= self.n:
            raise DimensionMismatch(f"k must be in [0, {self.n}]")
        xs = np.asarray(xs, dtype=float).reshape(-1)
        zs = np.asarray(zs, dtype=float).reshape(len(xs), self.n)
        grid, weights = self._grid(k)
        g = len(grid)
        eye = np.eye(self.dim, dtype=complex)
        if self.n:
            shift = np.tensordot(grid, self._tw[:k], axes=(1, 0)) if k else np.zeros((1, self.dim, self.dim), complex)
        else:
            shift = np.zeros((1, self.dim, self.dim), complex)
        out = np.empty(len(xs))
        step = max(1, _EVAL_BATCH // g)
        for s in range(0, len(xs), step):
            xb = xs[s : s + step]
            zb = zs[s : s + step]
            base = xb[:, None, None] * eye
            if self.n:
                base = base + np.tensordot(zb, self._tw, axes=(1, 0))
            mats = base[:, None, :, :] + shift[None, :, :, :]
            dets = np.linalg.det(mats.reshape(-1, self.dim, self.dim)).reshape(len(xb), g)
            q = dets.real**2 + dets.imag**2
            out[s : s + step] = q @ weights
        return out

    def q_eval(self, k: int, x: float, z) -> float:
        """Q_k at a single point (x, z)."""
        return float(self.eval_many(k, [x], [z])[0])

    def p_empty(self) -> np.ndarray:
        """Fully transformed polynomial Q_n(x, 0), interpolated from 2d+1
        Chebyshev nodes scaled to the coefficient-sum radius."""
        d = self.dim
        radius = 1.0 + float(np.sum(self.taus * np.array([np.vdot(v, v).real for v in self.vectors]))) if self.n else 1.0
        m = 2 * d + 1
        tnodes = np.cos((2 * np.arange(m) + 1) * np.pi / (2 * m))
        vals = self.eval_many(self.n, radius * tnodes, np.zeros((m, self.n)))
        fitted = npp.polyfit(tnodes, vals, 2 * d)
        return fitted / radius ** np.arange(2 * d + 1)


# ---------------------------------------------------------------------------
# Above-the-roots certification and barrier evaluation
# ---------------------------------------------------------------------------


def _ray_grid() -> np.ndarray:
    return PROBE_STEP * np.arange(PROBE_POINTS)


def certify_above_roots(qe: QEvaluator, k: int, x: float, z) -> None:
    """Certify that (x, z) lies above the roots of Q_k.

    For k = 0 the polynomial is a squared determinant, so probing its sign is
    vacuous; positive definiteness of the determinant argument is used
    instead, which is exact there. For k >= 1 the certification probes
    positivity on a deterministic 16-point grid along every coordinate ray
    and the all-ones ray (coordinate rays are quadratic, so their probe
    values come from an exact three-node fit). Raises
    :class:`NotAboveRoots` on failure.
    """
    z = np.asarray(z, dtype=float).reshape(qe.n)
    if k == 0:
        eye = np.eye(qe.dim, dtype=complex)
        m = x * eye
        if qe.n:
            m = m + np.tensordot(z, qe._tw, axes=(0, 0))
        if float(np.linalg.eigvalsh(m).min()) <= 0.0:
            raise NotAboveRoots(f"matrix at (x={x:.6g}) is not positive definite")
        return

    t = _ray_grid()
    span = t[-1]
    xs, zs, tags = [], [], []
    # three nodes per coordinate ray (Q_k is quadratic in each z_j)
    nodes = np.array([0.0, span / 2.0, span])
    for j in range(qe.n):
        for tv in nodes:
            zz = z.copy()
            zz[j] += tv
            xs.append(x)
            zs.append(zz)
    # raw probes along the x ray and the all-ones ray
    for tv in t:
        xs.append(x + tv)
        zs.append(z)
    for tv in t:
        xs.append(x + tv)
        zs.append(z + tv)
    vals = qe.eval_many(k, np.array(xs), np.array(zs))

    pos = 0
    for j in range(qe.n):
        f0, f1, f2 = vals[pos : pos + 3]
        pos += 3
        h = span / 2.0
        c1 = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
        c2 = (f0 - 2.0 * f1 + f2) / (2.0 * h * h)
        ray = f0 + c1 * t + c2 * t * t
        if ray.min() <= 0.0:
            raise NotAboveRoots(f"coordinate ray {j} has a nonpositive probe")
    for name in ("x", "all-ones"):
        ray = vals[pos : pos + PROBE_POINTS]
        pos += PROBE_POINTS
        if ray.min() <= 0.0:
            raise NotAboveRoots(f"{name} ray has a nonpositive probe")


def _barrier_analytic(qe: QEvaluator, x: float, z, i: int) -> float:
    """Barrier of Q itself from the trace form of the determinant derivative."""
    eye = np.eye(qe.dim, dtype=complex)
    m = x * eye + np.tensordot(np.asarray(z, float), qe._tw, axes=(0, 0))
    return 2.0 * float(np.trace(np.linalg.solve(m, qe._tw[i])).real)


def _barrier_fd_batch(qe: QEvaluator, k: int, x: float, z, dirs: Sequence[int]) -> np.ndarray:
    """Finite-difference barriers of Q_k at one point, several directions.

    Central differences with one Richardson level; the step follows
    ``1e-5 * (1 + |coordinate|)``. Exact up to roundoff since Q_k is
    quadratic in every coordinate.
    """
    z = np.asarray(z, dtype=float).reshape(qe.n)
    xs, zs = [x], [z]
    steps = []
    for i in dirs:
        h = FD_STEP * (1.0 + abs(z[i]))
        steps.append(h)
        for off in (h, -h, h / 2.0, -h / 2.0):
            zz = z.copy()
            zz[i] += off
            xs.append(x)
            zs.append(zz)
    vals = qe.eval_many(k, np.array(xs), np.array(zs))
    denom = vals[0]
    out = np.empty(len(dirs))
    for idx, (i, h) in enumerate(zip(dirs, steps)):
        fp, fm, fp2, fm2 = vals[1 + 4 * idx : 5 + 4 * idx]
        d1 = (fp - fm) / (2.0 * h)
        d2 = (fp2 - fm2) / h
        out[idx] = (4.0 * d2 - d1) / 3.0 / denom
    return out


def barrier(qe: QEvaluator, k: int, point: Tuple[float, Sequence[float]], i: int, mode: str = "analytic") -> float:
    """Barrier function of Q_k in direction i at (x, z).

    ``analytic`` mode applies only to k = 0, where the logarithmic derivative
    reduces to a trace of the resolvent; ``finite_difference`` works for any
    k. The point is certified above the roots first.
    """
    x, z = point
    certify_above_roots(qe, k, x, z)
    if mode == "analytic":
        if k != 0:
            raise ValueError("analytic barrier evaluation is available for k = 0 only")
        return _barrier_analytic(qe, x, z, i)
    if mode == "finite_difference":
        return float(_barrier_fd_batch(qe, k, x, z, [i])[0])
    raise ValueError(f"unknown barrier mode {mode!r}")


# ---------------------------------------------------------------------------
# Barrier walk replay
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WalkStep:
    step: int
    w: tuple
    above_roots: bool
    hypothesis_value: float
    hypothesis_bound: float
    barriers: dict  # direction -> barrier value of Q_{k+1} at (alpha, w_{k+1})
    monotone_ok: bool


@dataclass(frozen=True)
class BarrierWalkTrace:
    deltas: tuple
    initial_barriers: tuple
    steps: tuple
    p_empty_lambda_max: float
    passed: bool

    def to_doc(self) -> dict:
        return {
            "deltas": list(self.deltas),
            "initial_barriers": list(self.initial_barriers),
            "p_empty_lambda_max": self.p_empty_lambda_max,
            "passed": self.passed,
            "steps": [
                {
                    "step": s.step,
                    "w": list(s.w),
                    "above_roots": s.above_roots,
                    "hypothesis_value": s.hypothesis_value,
                    "hypothesis_bound": s.hypothesis_bound,
                    "barriers": {str(j): v for j, v in s.barriers.items()},
                    "monotone_ok": s.monotone_ok,
                }
                for s in self.steps
            ],
        }


WALK_ALPHA = 3.0
WALK_BARRIER_TOL = 1e-9
WALK_MONO_TOL = 1e-8
WALK_LAMBDA_TOL = 1e-9


def replay_barrier_walk(inst: model.RankOneInstance) -> BarrierWalkTrace:
    """Replay the shift walk certifying the top polynomial's largest root.

    Expects a normalized instance. Step by step it checks that the start
    point (3, -delta) is above the roots of Q with all barriers at most
    delta_i, that each shift of coordinate k keeps the new point above the
    roots of Q_{k+1}, and that the remaining barriers never increase. The
    first violated inequality raises :class:`WalkStepFailed`; success returns
    the full trace including the largest root of the final polynomial, which
    must be at most 3 + 1e-9.
    """
    qe = QEvaluator.from_instance(inst, validate=False)
    n = qe.n
    deltas = qe.deltas

    if n == 0:
        lam = _lambda_max_of_p_empty(inst)
        return BarrierWalkTrace((), (), (), lam, True)

    w0 = -deltas.copy()
    try:
        certify_above_roots(qe, 0, WALK_ALPHA, w0)
    except NotAboveRoots as exc:
        raise WalkStepFailed(-1, f"initial point not above roots: {exc}") from exc

    initial = np.array([_barrier_analytic(qe, WALK_ALPHA, w0, i) for i in range(n)])
    for i in range(n):
        if initial[i] > deltas[i] + WALK_BARRIER_TOL:
            raise WalkStepFailed(-1, f"initial barrier {i} is {initial[i]:.12f} > delta {deltas[i]:.12f}")

    prev = {i: float(initial[i]) for i in range(n)}
    w = w0.copy()
    steps = []
    for k in range(n):
        hyp_val, hyp_bound = prev[k], float(deltas[k])
        if hyp_val > hyp_bound + WALK_BARRIER_TOL:
            raise WalkStepFailed(k, f"step hypothesis failed: barrier {hyp_val:.12f} > delta {hyp_bound:.12f}")
        w_next = w.copy()
        w_next[k] = 0.0
        try:
            certify_above_roots(qe, k + 1, WALK_ALPHA, w_next)
        except NotAboveRoots as exc:
            raise WalkStepFailed(k, f"shifted point not above roots: {exc}") from exc
        dirs = list(range(k + 1, n))
        new = {}
        if dirs:
            vals = _barrier_fd_batch(qe, k + 1, WALK_ALPHA, w_next, dirs)
            for j, val in zip(dirs, vals):
                new[j] = float(val)
                if val > prev[j] + WALK_MONO_TOL:
                    raise WalkStepFailed(k, f"barrier {j} increased: {val:.12f} > {prev[j]:.12f}")
        steps.append(
            WalkStep(
                step=k,
                w=tuple(float(v) for v in w_next),
                above_roots=True,
                hypothesis_value=hyp_val,
                hypothesis_bound=hyp_bound,
                barriers=new,
                monotone_ok=True,
            )
        )
        prev.update(new)
        w = w_next

    lam = _lambda_max_of_p_empty(inst)
    if lam > WALK_ALPHA + WALK_LAMBDA_TOL:
        raise WalkStepFailed(n - 1, f"largest root {lam:.12f} exceeds {WALK_ALPHA}")
    return BarrierWalkTrace(
        tuple(float(d) for d in deltas),
        tuple(float(b) for b in initial),
        tuple(steps),
        lam,
        True,
    )


def _lambda_max_of_p_empty(inst: model.RankOneInstance) -> float:
    # The coefficient-exact operator route; the node-interpolated q_eval
    # polynomial carries enough noise near structural zero roots to disturb
    # a 1e-9 root comparison.
    from . import disc

    return rpoly.lambda_max(disc.expected_charpoly_operator(inst), tol=1e-6)


# ---------------------------------------------------------------------------
# Mixed discriminants
# ---------------------------------------------------------------------------


def _as_real_square(mats) -> list:
    out = [np.asarray(m, dtype=float) for m in mats]
    if not out:
        raise DimensionMismatch("need at least one matrix")
    d = out[0].shape[0]
    for m in out:
        if m.ndim != 2 or m.shape != (d, d):
            raise DimensionMismatch(f"expected {d}x{d} matrices")
    return out


def mixed_discriminant(mats: Sequence) -> float:
    """Mixed discriminant of d matrices of size d x d.

    Computed by the inclusion-exclusion polarization
    ``sum_S (-1)^(d - |S|) det(sum_{i in S} X_i)`` over the 2^d subsets.
    """
    xs = _as_real_square(mats)
    d = xs[0].shape[0]
    if len(xs) != d:
        raise DimensionMismatch(f"need exactly {d} matrices of size {d}x{d}, got {len(xs)}")
    sums = np.zeros((1 << d, d, d))
    for mask in range(1, 1 << d):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + xs[low.bit_length() - 1]
    dets = np.linalg.det(sums[1:])
    signs = np.array([(-1.0) ** (d - bin(mask).count("1")) for mask in range(1, 1 << d)])
    return float(signs @ dets)


def mixed_discriminant_permanental(mats: Sequence) -> float:
    """Column-substitution expansion of the mixed discriminant.

    Independent cross-check of the polarization route:
    ``sum over permutations s of det[col_1 of X_{s(1)} | ... | col_d of X_{s(d)}]``.
    Factorial cost; intended for d <= 5.
    """
    xs = _as_real_square(mats)
    d = xs[0].shape[0]
    if len(xs) != d:
        raise DimensionMismatch(f"need exactly {d} matrices, got {len(xs)}")
    total = 0.0
    cols = np.empty((d, d))
    for perm in permutations(range(d)):
        for j, pi in enumerate(perm):
            cols[:, j] = xs[pi][:, j]
        total += float(np.linalg.det(cols))
    return total


def d_tilde(mats: Sequence, dim: Optional[int] = None) -> float:
    """Identity-padded normalized mixed discriminant
    ``D(X_1..X_k, I, ..., I) / (d - k)!``; for k = 1 this equals the trace."""
    xs = _as_real_square(mats)
    d = xs[0].shape[0] if dim is None else int(dim)
    k = len(xs)
    if k > d or xs[0].shape[0] != d:
        raise DimensionMismatch(f"need at most {d} matrices of size {d}x{d}")
    padded = xs + [np.eye(d)] * (d - k)
    return mixed_discriminant(padded) / math.factorial(d - k)


def _require_psd(mat: np.ndarray, name: str) -> None:
    w = np.linalg.eigvalsh((mat + mat.T) / 2.0)
    scale = max(1.0, float(np.abs(mat).max()))
    if float(w.min()) < -PSD_SLACK * scale:
        raise NotPSD(f"{name} has eigenvalue {w.min():.3e}")


def check_alexandrov(x1, x2) -> Tuple[float, float, bool]:
    """Check ``Dtilde(X1) * Dtilde(X2) >= Dtilde(X1, X2)`` for PSD inputs.

    Returns (lhs, rhs, pass); pass allows 1e-9 * scale slack.
    """
    a, b = _as_real_square([x1, x2])
    d = a.shape[0]
    if d < 2:
        raise DimensionMismatch("the inequality needs dimension >= 2")
    _require_psd(a, "X1")
    _require_psd(b, "X2")
    lhs = d_tilde([a]) * d_tilde([b])
    rhs = d_tilde([a, b])
    scale = max(1.0, abs(lhs), abs(rhs))
    return lhs, rhs, lhs >= rhs - 1e-9 * scale


# ---------------------------------------------------------------------------
# Quadratic and bivariate barrier lemmas
# ---------------------------------------------------------------------------


def univariate_barrier(coeffs, x: float) -> float:
    """s'(x) / s(x) for a univariate polynomial."""
    c = rpoly.trim(coeffs)
    return float(npp.polyval(x, npp.polyder(c)) / npp.polyval(x, c))


def check_quadratic_barrier(coeffs, probes: Sequence[float], slack: float = 1e-9) -> bool:
    """Check that ``f(x) = x - 2 / (s'(x)/s(x))`` is nonincreasing above the
    roots of a real-rooted quadratic s with positive leading coefficient."""
    c = rpoly.trim(coeffs)
    if len(c) != 3 or c[2] <= 0:
        raise InvariantViolation("quadratic", "need degree 2 with positive leading coefficient")
    lam = rpoly.lambda_max(c)
    pts = sorted(float(p) for p in probes)
    if pts[0] <= lam:
        raise NotAboveRoots(f"probe {pts[0]} is not above the largest root {lam}")
    f = [p - 2.0 / univariate_barrier(c, p) for p in pts]
    return all(f[i + 1] <= f[i] + slack for i in range(len(f) - 1))


@dataclass(frozen=True)
class DeterminantalPolynomial:
    """det[B + sum_i z_i A_i] with PSD coefficient matrices A_i.

    The standard generated family for barrier property sweeps: every point
    where the matrix is positive definite is above the roots (translates only
    add PSD terms), and barriers reduce to resolvent traces.
    """

    psd_parts: tuple
    offset: np.ndarray

    def matrix(self, z) -> np.ndarray:
        m = np.array(self.offset, dtype=float)
        for zi, a in zip(np.asarray(z, float), self.psd_parts):
            m = m + zi * a
        return m

    def value(self, z) -> float:
        return float(np.linalg.det(self.matrix(z)))

    def is_above_roots(self, z) -> bool:
        return float(np.linalg.eigvalsh(self.matrix(z)).min()) > 0.0

    def barrier(self, i: int, z) -> float:
        m = self.matrix(z)
        return float(np.trace(np.linalg.solve(m, self.psd_parts[i])))

    def second_ratio(self, i: int, z) -> float:
        """(d^2/dz_i^2 p) / p, from the resolvent form."""
        m = self.matrix(z)
        x = np.linalg.solve(m, self.psd_parts[i])
        t = float(np.trace(x))
        return t * t - float(np.trace(x @ x))


@dataclass(frozen=True)
class DeterminantalBivariate:
    """p(x, y) = det[x A + y B + C]^2 with rank(A) <= 1, so p is quadratic
    in x. B is expected positive definite, which makes positive definiteness
    of the pencil an exact above-the-roots certificate."""

    a_part: np.ndarray
    b_part: np.ndarray
    c_part: np.ndarray

    def matrix(self, x: float, y: float) -> np.ndarray:
        return x * np.asarray(self.a_part, float) + y * np.asarray(self.b_part, float) + np.asarray(self.c_part, float)

    def det_value(self, x: float, y: float) -> float:
        return float(np.linalg.det(self.matrix(x, y)))

    def value(self, x: float, y: float) -> float:
        return self.det_value(x, y) ** 2

    def is_above_roots(self, x: float, y: float) -> bool:
        return float(np.linalg.eigvalsh((self.matrix(x, y) + self.matrix(x, y).T) / 2).min()) > 0.0

    def barrier_x(self, x: float, y: float) -> float:
        m = self.matrix(x, y)
        return 2.0 * float(np.trace(np.linalg.solve(m, self.a_part)))

    def barrier_y(self, x: float, y: float) -> float:
        m = self.matrix(x, y)
        return 2.0 * float(np.trace(np.linalg.solve(m, self.b_part)))


def check_bivariate_quadratic_lemma(
    p: DeterminantalBivariate,
    point: Tuple[float, float],
    delta: float,
    slack: float = 1e-8,
) -> bool:
    """Check the barrier transfer under ``1 - (1/2) d^2/dx^2`` with shift delta.

    Either delta = 1 (no barrier hypothesis), or delta in (0, 1) together
    with ``Phi^x(point) <= delta / (1 - delta^2)``. Unmet hypotheses raise
    :class:`HypothesisNotMet` (the case is skipped, not failed). Passing
    means the y-barrier of the transformed polynomial at (x0 + delta, y0) is
    at most the y-barrier of p at (x0, y0), with 1e-8 slack.

    Since p is quadratic in x, the transformed polynomial factors into the
    two unit x-shifts of the determinant, which gives exact values for both
    the certification and the y-barrier.
    """
    x0, y0 = point
    if not 0.0 < delta <= 1.0:
        raise InvariantViolation("delta", "must lie in (0, 1]")
    second = np.sort(np.linalg.eigvalsh((np.asarray(p.a_part) + np.asarray(p.a_part).T) / 2.0))
    if len(second) >= 2 and abs(second[-2]) > 1e-10 * max(1.0, abs(second[-1])):
        raise InvariantViolation("rank", "x coefficient matrix must have rank <= 1")
    if not p.is_above_roots(x0, y0):
        raise NotAboveRoots("base point is not above the roots")
    if delta < 1.0:
        phi_x = p.barrier_x(x0, y0)
        if phi_x > delta / (1.0 - delta**2):
            raise HypothesisNotMet(f"Phi^x = {phi_x:.6f} > {delta / (1 - delta**2):.6f}")

    # q(x, y) = (1 - (1/2) d^2/dx^2) p = g(x-1, y) g(x+1, y) for g = det[...]
    xq = x0 + delta
    m_minus = p.matrix(xq - 1.0, y0)
    m_plus = p.matrix(xq + 1.0, y0)
    if (
        float(np.linalg.eigvalsh((m_minus + m_minus.T) / 2).min()) <= 0.0
        or float(np.linalg.eigvalsh((m_plus + m_plus.T) / 2).min()) <= 0.0
    ):
        raise HypothesisNotMet("shifted point is not above the roots of the transformed polynomial")
    g_minus = float(np.linalg.det(m_minus))
    g_plus = float(np.linalg.det(m_plus))
    gy_minus = g_minus * float(np.trace(np.linalg.solve(m_minus, p.b_part)))
    gy_plus = g_plus * float(np.trace(np.linalg.solve(m_plus, p.b_part)))
    phi_q = (gy_minus * g_plus + g_minus * gy_plus) / (g_minus * g_plus)
    return phi_q <= p.barrier_y(x0, y0) + slack
