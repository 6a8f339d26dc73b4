"""Command-line front end: solvers, verification sweeps, reports.

Every verification suite is a plain function returning a report dict whose
rows carry (name, lhs, rhs, slack, pass); the acceptance tests call the same
functions. Identical configuration and seed produce byte-identical reports,
independent of the worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import disc, frames, linalg, model, rpoly, schatten, witness
from ._util import canonical_json, resolve_threads
from .errors import HypothesisNotMet, MatDiscError, WalkStepFailed

VERIFY_SUITES = ("thm13", "thm15", "prop16", "thm41", "alexandrov", "schatten", "lyapunov")


@dataclass
class RunConfig:
    command: str
    suite: Optional[str] = None
    instance: Optional[str] = None
    out: Optional[str] = None
    fmt: str = "json"
    seed: int = 0
    root_tol: float = rpoly.REAL_ROOT_TOL
    norm_tol: float = 1e-9
    threads: Optional[int] = None
    count: Optional[int] = None
    n: Optional[int] = None
    d: Optional[int] = None
    p: Optional[float] = None

    def __post_init__(self):
        if self.root_tol <= 0 or self.norm_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit value")


def _row(name: str, lhs: float, rhs: float) -> dict:
    lhs, rhs = float(lhs), float(rhs)
    return {"name": name, "lhs": lhs, "rhs": rhs, "slack": rhs - lhs, "pass": lhs <= rhs}


def _flag_row(name: str, ok: bool) -> dict:
    return {"name": name, "lhs": 0.0 if ok else 1.0, "rhs": 0.0, "slack": -1.0 if not ok else 0.0, "pass": bool(ok)}


def _finish(report: dict) -> dict:
    checks = report["checks"]
    report["total"] = len(checks)
    report["failed"] = sum(1 for c in checks if not c["pass"])
    report["pass"] = report["failed"] == 0
    return report


# ---------------------------------------------------------------------------
# Seeded generators
# ---------------------------------------------------------------------------


def random_rv(rng, size: int, low: float = -2.0, high: float = 2.0, min_gap: float = 0.1) -> model.DiscreteRandomVariable:
    vals = np.sort(rng.uniform(low, high, size=size))
    while size > 1 and float(np.diff(vals).min()) < min_gap:
        vals = np.sort(rng.uniform(low, high, size=size))
    probs = rng.dirichlet(np.full(size, 2.0))
    probs = np.clip(probs, 0.05, None)
    probs = probs / probs.sum()
    return model.DiscreteRandomVariable(tuple(vals), tuple(probs))


def random_rank_one(rng, d: int, n: int) -> model.RankOneInstance:
    vectors = tuple((rng.normal(size=d) + 1j * rng.normal(size=d)) / math.sqrt(2.0) for _ in range(n))
    rvs = tuple(random_rv(rng, int(rng.integers(2, 4))) for _ in range(n))
    return model.RankOneInstance(d, vectors, rvs)


def sweep_rank_one(seed: int, count: int, d_range=(2, 5), n_range=(2, 8)):
    """The seeded rank-one family used by the three-sigma and walk sweeps."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        d = int(rng.integers(d_range[0], d_range[1] + 1))
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        out.append(random_rank_one(rng, d, n))
    return out


def random_hermitian_matrix(rng, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2.0


def random_psd(rng, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d))
    return g @ g.T / d


def random_hermitian_instance(rng, d: int, n: int, rademacher: bool) -> model.HermitianInstance:
    mats = tuple(random_hermitian_matrix(rng, d) for _ in range(n))
    if rademacher:
        rvs = tuple(model.DiscreteRandomVariable.rademacher() for _ in range(n))
    else:
        # Two-point laws with variance >= 1: the regime where the stated
        # Frobenius bound (variance inside the square) is valid.
        rvs = []
        for _ in range(n):
            a = float(rng.uniform(-3.0, -1.5))
            b = float(rng.uniform(1.5, 3.0))
            pr = float(rng.uniform(0.3, 0.7))
            rvs.append(model.DiscreteRandomVariable((a, b), (1.0 - pr, pr)))
        rvs = tuple(rvs)
    return model.HermitianInstance(d, mats, rvs)


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def verify_thm13(seed: int = 0, count: int = 300, threads=None, root_tol: float = rpoly.REAL_ROOT_TOL, norm_tol: float = 1e-9) -> dict:
    """Brute force <= greedy <= 3 sigma on the seeded rank-one sweep, plus the
    per-level monotonicity and interlacing checks of every greedy trace."""
    report = {
        "command": "verify",
        "suite": "thm13",
        "seed": seed,
        "count": count,
        "root_tol": root_tol,
        "norm_tol": norm_tol,
        "checks": [],
    }
    rows = report["checks"]
    for i, inst in enumerate(sweep_rank_one(seed, count)):
        sig = model.sigma(inst)
        brute = disc.disc_bruteforce(inst, threads=threads)
        assignment, trace = disc.greedy_interlacing_solve(inst, root_tol=root_tol)
        rows.append(_row(f"i{i}.brute_le_greedy", brute.value, trace.final_value + 1e-12))
        rows.append(_row(f"i{i}.greedy_le_3sigma", trace.final_value, 3.0 * sig + norm_tol))
        rows.append(_row(f"i{i}.leaf_identity_gap", abs(trace.final_value - trace.leaf_lambda_max), norm_tol))
        worst = max(lv.chosen_lambda_max - lv.parent_lambda_max for lv in trace.levels)
        rows.append(_row(f"i{i}.level_monotone_gap", worst, norm_tol))
    return _finish(report)


def verify_interlacing(seed: int = 0, count: int = 300, root_tol: float = rpoly.REAL_ROOT_TOL) -> dict:
    """Real-rootedness and sampled common interlacing of every branch set
    along the greedy path of the seeded sweep."""
    report = {
        "command": "verify",
        "suite": "interlacing",
        "seed": seed,
        "count": count,
        "root_tol": root_tol,
        "real_rooted_tol": 1e-6,
        "checks": [],
    }
    rows = report["checks"]
    for i, inst in enumerate(sweep_rank_one(seed, count)):
        _, trace = disc.greedy_interlacing_solve(inst, root_tol=root_tol)
        rooted = all(
            rpoly.is_real_rooted(np.array(c), tol=1e-6) for lv in trace.levels for c in lv.branch_coeffs
        )
        rows.append(_flag_row(f"i{i}.branches_real_rooted", rooted))
        common = all(
            rpoly.has_common_interlacing([np.array(c) for c in lv.branch_coeffs], tol=1e-6)
            for lv in trace.levels
            if len(lv.branch_coeffs) > 1
        )
        rows.append(_flag_row(f"i{i}.common_interlacing", common))
    return _finish(report)


def verify_thm41(seed: int = 0, count: int = 300, norm_tol: float = 1e-9) -> dict:
    """Normalized sweep: largest root of the top polynomial at most 3, and a
    full barrier-walk replay on every instance."""
    report = {"command": "verify", "suite": "thm41", "seed": seed, "count": count, "norm_tol": norm_tol, "checks": []}
    rows = report["checks"]
    for i, raw in enumerate(sweep_rank_one(seed, count)):
        inst = model.normalize(raw)
        lam = rpoly.lambda_max(disc.expected_charpoly(inst), tol=1e-6)
        rows.append(_row(f"i{i}.lambda_p_empty", lam, 3.0 + norm_tol))
        try:
            trace = witness.replay_barrier_walk(inst)
            gap = max(
                (b - d for b, d in zip(trace.initial_barriers, trace.deltas)),
                default=0.0,
            )
            rows.append(_row(f"i{i}.initial_barrier_gap", gap, norm_tol))
            rows.append(_flag_row(f"i{i}.walk", trace.passed))
        except WalkStepFailed as exc:
            rows.append(_flag_row(f"i{i}.walk[{exc.reason}]", False))
    return _finish(report)


THM15_PAIRS = ((2, 3), (3, 4), (3, 5), (4, 7), (5, 9))


def verify_thm15(norm_tol: float = 1e-9) -> dict:
    """Exact pattern norms of harmonic unit-norm tight frames."""
    report = {"command": "verify", "suite": "thm15", "pairs": [list(p) for p in THM15_PAIRS], "checks": []}
    rows = report["checks"]
    for d, n in THM15_PAIRS:
        frame = frames.harmonic_untf(n, d)
        res = frames.verify_untf_disc(frame)
        analysis = frames.analyze_frame(frame)
        rows.append(_flag_row(f"d{d}n{n}.all_patterns_constant", res["all_patterns_constant"]))
        rows.append(_row(f"d{d}n{n}.disc_gap", abs(res["value"] - n / d), norm_tol))
        rows.append(
            _row(
                f"d{d}n{n}.sqrt_ratio_gap",
                abs(res["value"] - math.sqrt(n / d) * math.sqrt(analysis.sigma_sq)),
                norm_tol,
            )
        )
        if n == 2 * d - 1:
            ratio = res["value"] / math.sqrt(analysis.sigma_sq)
            rows.append(_row(f"d{d}n{n}.edge_ratio_gap", abs(ratio - math.sqrt(2.0 - 1.0 / d)), norm_tol))
    return _finish(report)


def verify_prop16(n: Optional[int] = None) -> dict:
    """Exact integer discrepancy of the diagonal family (zero tolerance)."""
    ns = [n] if n else [1, 2, 3, 4]
    report = {"command": "verify", "suite": "prop16", "n": ns, "checks": []}
    rows = report["checks"]
    for k in ns:
        res = frames.verify_lower_bound(k)
        rows.append(_flag_row(f"n{k}.disc_eq_n", res["disc"] == k))
        rows.append(_flag_row(f"n{k}.sigma_sq_eq_n", res["sigma_sq"] == k))
        rows.append(_row(f"n{k}.log_ratio_gap", abs(res["log_factor_ratio"] - 1.0), 1e-12))
    return _finish(report)


def verify_alexandrov(seed: int = 0, count: int = 500) -> dict:
    """Mixed-discriminant cross-checks and the barrier lemma sweeps."""
    rng = np.random.default_rng(seed)
    report = {"command": "verify", "suite": "alexandrov", "seed": seed, "count": count, "checks": []}
    rows = report["checks"]

    # polarization vs column-substitution expansion
    for i in range(100):
        d = int(rng.integers(2, 6))
        mats = [random_psd(rng, d) for _ in range(d)]
        a = witness.mixed_discriminant(mats)
        b = witness.mixed_discriminant_permanental(mats)
        rows.append(_row(f"mix{i}.route_gap", abs(a - b), 1e-9 * max(1.0, abs(a), abs(b))))

    # trace identity of the padded normalization
    for i in range(60):
        d = int(rng.integers(2, 7))
        x = random_psd(rng, d)
        rows.append(_row(f"trace{i}.gap", abs(witness.d_tilde([x]) - float(np.trace(x))), 1e-10 * max(1.0, abs(np.trace(x)))))

    # pairwise inequality
    for i in range(count):
        d = int(rng.integers(2, 7))
        lhs, rhs, ok = witness.check_alexandrov(random_psd(rng, d), random_psd(rng, d))
        rows.append(_row(f"pair{i}.rhs_minus_lhs", rhs - lhs, 1e-9 * max(1.0, abs(lhs), abs(rhs))))
    return _finish(report)


def verify_barrier_lemmas(seed: int = 0, count: int = 200) -> dict:
    """Quadratic barrier monotonicity, directional monotonicity, the
    second-order bound, and the bivariate transfer lemma (hypothesis-filtered)."""
    rng = np.random.default_rng(seed)
    report = {"command": "verify", "suite": "barrier_lemmas", "seed": seed, "count": count, "checks": []}
    rows = report["checks"]

    for i in range(count):
        r1, r2 = np.sort(rng.uniform(-3.0, 3.0, size=2))
        lead = float(rng.uniform(0.2, 3.0))
        s = lead * np.array([r1 * r2, -(r1 + r2), 1.0])
        probes = r2 + np.sort(rng.uniform(0.05, 10.0, size=8))
        rows.append(_flag_row(f"quad{i}.nonincreasing", witness.check_quadratic_barrier(s, probes)))

    skipped = 0
    for i in range(count):
        d = int(rng.integers(2, 5))
        m = int(rng.integers(1, 4))
        parts = tuple(random_psd(rng, d) for _ in range(m))
        offset = random_hermitian_matrix(rng, d).real
        base = sum(parts, np.zeros((d, d)))
        mu = abs(float(np.linalg.eigvalsh(offset).min())) / max(float(np.linalg.eigvalsh(base).min()), 1e-9) + 1.0
        z0 = np.full(m, mu)
        dp = witness.DeterminantalPolynomial(parts, offset)
        mono_ok, second_ok = True, True
        for t in (0.1, 1.0, 10.0):
            for j in range(m):
                step = np.zeros(m)
                step[j] = t
                if dp.barrier(j, z0 + step) > dp.barrier(j, z0) + 1e-9:
                    mono_ok = False
        for j in range(m):
            if dp.second_ratio(j, z0) > dp.barrier(j, z0) ** 2 + 1e-8:
                second_ok = False
        rows.append(_flag_row(f"det{i}.monotone", mono_ok))
        rows.append(_flag_row(f"det{i}.second_order", second_ok))

    for i in range(count):
        d = int(rng.integers(2, 5))
        a_vec = rng.normal(size=d)
        a = np.outer(a_vec, a_vec)
        b = random_psd(rng, d) + 0.3 * np.eye(d)
        c = random_hermitian_matrix(rng, d).real
        y0 = (abs(float(np.linalg.eigvalsh(c).min())) + 0.5) / float(np.linalg.eigvalsh(b).min())
        x0 = float(rng.uniform(0.0, 2.0))
        p = witness.DeterminantalBivariate(a, b, c)
        delta = 1.0 if i % 2 == 0 else float(rng.uniform(0.2, 0.9))
        try:
            ok = witness.check_bivariate_quadratic_lemma(p, (x0, y0), delta)
            rows.append(_flag_row(f"biv{i}.delta{delta:.3f}", ok))
        except HypothesisNotMet:
            skipped += 1
    report["bivariate_skipped"] = skipped
    return _finish(report)


def verify_schatten(seed: int = 0, count: int = 200, threads=None) -> dict:
    """Moment bounds against exact enumeration for Rademacher and
    variance-at-least-one families."""
    rng = np.random.default_rng(seed)
    report = {"command": "verify", "suite": "schatten", "seed": seed, "count": count, "checks": []}
    rows = report["checks"]
    for i in range(count):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(2, 7))
        inst = random_hermitian_instance(rng, d, n, rademacher=True)
        for p in (2.0, 4.0, 6.0):
            rep = schatten.khintchine_bounds(inst, p, threads=threads)
            bound = rep.bounds["rademacher_closed_form"]
            rows.append(_row(f"rad{i}.p{int(p)}", rep.disc_p, bound + 1e-9))
            est, se = rep.bounds["general_khintchine"]
            rows.append(_flag_row(f"rad{i}.p{int(p)}.stderr_zero", se == 0.0))
    for i in range(count):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(2, 7))
        inst = random_hermitian_instance(rng, d, n, rademacher=False)
        rep2 = schatten.khintchine_bounds(inst, 2.0, threads=threads)
        rows.append(_row(f"gen{i}.frobenius", rep2.disc_p, rep2.bounds["frobenius_closed_form"] + 1e-9))
        p = (2.0, 4.0, 6.0)[i % 3]
        rep = rep2 if p == 2.0 else schatten.khintchine_bounds(inst, p, threads=threads)
        est, se = rep.bounds["general_khintchine"]
        rows.append(_row(f"gen{i}.p{int(p)}.mc", rep.disc_p, est + 3.0 * se))
    return _finish(report)


def verify_lyapunov(seed: int = 0, count: int = 100, norm_tol: float = 1e-9) -> dict:
    """Subset rounding of fractional frame combinations."""
    rng = np.random.default_rng(seed)
    report = {"command": "verify", "suite": "lyapunov", "seed": seed, "count": count, "checks": []}
    rows = report["checks"]
    for i in range(count):
        d = int(rng.integers(2, 6))
        n = int(rng.integers(d, 2 * d + 2))
        frame = frames.harmonic_untf(n, d)
        vectors = [math.sqrt(d / n) * v for v in frame.vectors]
        t = rng.uniform(0.0, 1.0, size=n)
        eps = max(float(np.vdot(v, v).real) for v in vectors)
        subset = disc.lyapunov_round(vectors, t)
        outers = np.array([np.outer(v, v.conj()) for v in vectors])
        target = np.tensordot(t, outers, axes=(0, 0))
        got = outers[list(subset)].sum(axis=0) if subset else np.zeros_like(target)
        err = linalg.residual_norm(got - target)
        rows.append(_row(f"i{i}.rounding_error", err, 1.5 * math.sqrt(eps) + norm_tol))
    return _finish(report)


def verify_oracles(seed: int = 0, count: int = 100) -> dict:
    """Coefficientwise agreement of the enumeration and operator routes."""
    rng = np.random.default_rng(seed)
    report = {"command": "verify", "suite": "oracles", "seed": seed, "count": count, "checks": []}
    rows = report["checks"]
    for i in range(count):
        d = int(rng.integers(1, 5))
        n = int(rng.integers(1, 7))
        inst = random_rank_one(rng, d, n)
        pa = disc.expected_charpoly(inst)
        pb = disc.expected_charpoly_operator(inst)
        scale = max(float(np.abs(pa).max()), float(np.abs(pb).max()))
        rows.append(_row(f"i{i}.coeff_gap", float(np.abs(pa - pb).max()), 1e-8 * scale))
    return _finish(report)


def _verify_alexandrov_full(cfg: "RunConfig") -> dict:
    """Mixed discriminants plus the barrier lemma sweeps, one report."""
    a = verify_alexandrov(cfg.seed, cfg.count or 500)
    b = verify_barrier_lemmas(cfg.seed, min(cfg.count or 200, 200))
    merged = {
        "command": "verify",
        "suite": "alexandrov",
        "seed": cfg.seed,
        "checks": a["checks"] + b["checks"],
        "bivariate_skipped": b["bivariate_skipped"],
    }
    return _finish(merged)


_SUITE_FNS = {
    "thm13": lambda cfg: verify_thm13(cfg.seed, cfg.count or 300, cfg.threads, cfg.root_tol, cfg.norm_tol),
    "thm15": lambda cfg: verify_thm15(cfg.norm_tol),
    "prop16": lambda cfg: verify_prop16(cfg.n),
    "thm41": lambda cfg: verify_thm41(cfg.seed, cfg.count or 300, cfg.norm_tol),
    "alexandrov": _verify_alexandrov_full,
    "schatten": lambda cfg: verify_schatten(cfg.seed, cfg.count or 200, cfg.threads),
    "lyapunov": lambda cfg: verify_lyapunov(cfg.seed, cfg.count or 100, cfg.norm_tol),
}


# ---------------------------------------------------------------------------
# Non-verify commands
# ---------------------------------------------------------------------------


def run_solve(cfg: RunConfig) -> dict:
    inst = model.load_instance(cfg.instance)
    report = {"command": "solve", "instance": cfg.instance, "checks": []}
    brute = disc.disc_bruteforce(inst, threads=cfg.threads)
    report["bruteforce"] = brute.to_doc()
    if isinstance(inst, model.RankOneInstance):
        assignment, trace = disc.greedy_interlacing_solve(inst, root_tol=cfg.root_tol)
        report["greedy"] = {
            "assignment": {"indices": list(assignment.indices), "values": list(assignment.values)},
            "trace": trace.to_doc(),
        }
        report["checks"].append(_row("brute_le_greedy", brute.value, trace.final_value + 1e-12))
        for name, (bound, ok) in brute.bound_checks.items():
            report["checks"].append(_row(f"disc_le_{name}", brute.value, bound + cfg.norm_tol))
    return _finish(report)


def run_replay(cfg: RunConfig) -> dict:
    inst = model.load_instance(cfg.instance)
    if not isinstance(inst, model.RankOneInstance):
        raise MatDiscError("replay needs a rank-one instance")
    normalized = model.normalize(inst)
    report = {"command": "replay", "instance": cfg.instance, "checks": []}
    try:
        trace = witness.replay_barrier_walk(normalized)
        report["trace"] = trace.to_doc()
        report["checks"].append(_flag_row("walk", trace.passed))
        report["checks"].append(_row("lambda_p_empty", trace.p_empty_lambda_max, 3.0 + cfg.norm_tol))
    except WalkStepFailed as exc:
        report["trace"] = {"failed_step": exc.step, "reason": exc.reason}
        report["checks"].append(_flag_row(f"walk[{exc.reason}]", False))
    return _finish(report)


def run_frames_gen(cfg: RunConfig) -> dict:
    n = cfg.n or 3
    d = cfg.d or 2
    frame = frames.harmonic_untf(n, d)
    inst = frames.frame_to_instance(frame)
    if cfg.out:
        model.save_instance(inst, cfg.out)
    analysis = frames.analyze_frame(frame)
    report = {
        "command": "frames gen",
        "n": n,
        "d": d,
        "out": cfg.out,
        "frame_bound": analysis.frame_bound,
        "sigma_sq": analysis.sigma_sq,
        "checks": [
            _flag_row("tight", analysis.is_tight),
            _flag_row("unit_norm", analysis.is_unit_norm),
        ],
    }
    return _finish(report)


def run_bench(cfg: RunConfig) -> list:
    """Timing table rows; wall times are not part of the determinism contract."""
    rows = []
    rng = np.random.default_rng(cfg.seed)
    for n in (4, 6, 8):
        inst = random_rank_one(rng, 4, n)
        t0 = time.perf_counter()
        disc.disc_bruteforce(inst, threads=cfg.threads)
        t1 = time.perf_counter()
        disc.greedy_interlacing_solve(inst)
        t2 = time.perf_counter()
        witness.replay_barrier_walk(model.normalize(inst))
        t3 = time.perf_counter()
        rows.append({"task": "bruteforce", "n": n, "d": 4, "seconds": t1 - t0})
        rows.append({"task": "greedy", "n": n, "d": 4, "seconds": t2 - t1})
        rows.append({"task": "barrier_walk", "n": n, "d": 4, "seconds": t3 - t2})
    return rows


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def report_bytes(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return canonical_json(report).encode("utf-8")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "lhs", "rhs", "slack", "pass"])
    for row in report.get("checks", []):
        writer.writerow([row["name"], repr(row["lhs"]), repr(row["rhs"]), repr(row["slack"]), row["pass"]])
    return buf.getvalue().encode("utf-8")


def bench_bytes(rows: list) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["task", "n", "d", "seconds"])
    for row in rows:
        writer.writerow([row["task"], row["n"], row["d"], f"{row['seconds']:.6f}"])
    return buf.getvalue().encode("utf-8")


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    if cfg.threads is not None:
        resolve_threads(cfg.threads)
    if cfg.command == "verify":
        if cfg.suite not in _SUITE_FNS:
            raise ValueError(f"unknown suite {cfg.suite!r}")
        report = _SUITE_FNS[cfg.suite](cfg)
    elif cfg.command == "solve":
        report = run_solve(cfg)
    elif cfg.command == "replay":
        report = run_replay(cfg)
    elif cfg.command == "frames gen":
        # --out names the generated instance file; the report goes to stdout.
        report = run_frames_gen(cfg)
        sys.stdout.write(report_bytes(report, cfg.fmt).decode("utf-8"))
        return 0 if report["pass"] else 1
    elif cfg.command == "bench":
        rows = run_bench(cfg)
        payload = bench_bytes(rows)
        if cfg.out:
            with open(cfg.out, "wb") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload.decode("utf-8"))
        return 0
    else:
        raise ValueError(f"unknown command {cfg.command!r}")

    payload = report_bytes(report, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return 0 if report["pass"] else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matdisc", description="matrix discrepancy laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--root-tol", dest="root_tol", type=float, default=rpoly.REAL_ROOT_TOL)
        sp.add_argument("--norm-tol", dest="norm_tol", type=float, default=1e-9)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--count", type=int, default=None)
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--d", type=int, default=None)
        sp.add_argument("--p", type=float, default=None)

    sp = sub.add_parser("solve", help="brute force, greedy, and the bound menu on an instance file")
    sp.add_argument("--instance", required=True)
    common(sp)

    sp = sub.add_parser("verify", help="seeded verification suites")
    sp.add_argument("suite", choices=VERIFY_SUITES)
    common(sp)

    sp = sub.add_parser("replay", help="barrier walk trace for a normalized instance")
    sp.add_argument("--instance", required=True)
    common(sp)

    sp = sub.add_parser("frames", help="frame constructions")
    sp.add_argument("action", choices=("gen",))
    common(sp)

    sp = sub.add_parser("bench", help="timing table (CSV)")
    common(sp)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        command = ns.command
        if command == "frames":
            command = f"frames {ns.action}"
        cfg = RunConfig(
            command=command,
            suite=getattr(ns, "suite", None),
            instance=getattr(ns, "instance", None),
            out=ns.out,
            fmt=ns.fmt,
            seed=ns.seed,
            root_tol=ns.root_tol,
            norm_tol=ns.norm_tol,
            threads=ns.threads,
            count=ns.count,
            n=ns.n,
            d=ns.d,
            p=ns.p,
        )
        return run(cfg)
    except (MatDiscError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
