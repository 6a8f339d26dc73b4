"""Instance data model: finite-support random variables, matrix families,
the deviation scale sigma, normalization, and JSON persistence.

Instances are immutable after construction; their numpy arrays are marked
non-writeable so they can be shared across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import DegenerateSigma, InvariantViolation, ParseError

PROB_SUM_TOL = 1e-12
SIGMA_FLOOR = 1e-14


@dataclass(frozen=True)
class DiscreteRandomVariable:
    """Scalar law with finite support: strictly increasing atoms and their
    probabilities (nonnegative, summing to one within 1e-12)."""

    support: tuple
    probs: tuple

    def __post_init__(self):
        support = tuple(float(s) for s in self.support)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        if len(support) < 1:
            raise InvariantViolation("support", "must be nonempty")
        if len(support) != len(probs):
            raise InvariantViolation("probs", "length differs from support")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise InvariantViolation("support", "entries must be strictly increasing")
        if any(p < 0 for p in probs):
            raise InvariantViolation("probs", "negative probability")
        if abs(sum(probs) - 1.0) > PROB_SUM_TOL:
            raise InvariantViolation("probs", f"sum {sum(probs)!r} != 1")

    @property
    def mean(self) -> float:
        return float(sum(p * s for p, s in zip(self.probs, self.support)))

    @property
    def variance(self) -> float:
        m = self.mean
        return float(sum(p * (s - m) ** 2 for p, s in zip(self.probs, self.support)))

    @staticmethod
    def rademacher() -> "DiscreteRandomVariable":
        return DiscreteRandomVariable((-1.0, 1.0), (0.5, 0.5))

    @staticmethod
    def bernoulli(t: float) -> "DiscreteRandomVariable":
        """{0,1}-valued with mean t; collapses to a constant at t in {0, 1}."""
        if not 0.0 <= t <= 1.0:
            raise InvariantViolation("bernoulli mean", f"{t} outside [0, 1]")
        if t == 0.0:
            return DiscreteRandomVariable((0.0,), (1.0,))
        if t == 1.0:
            return DiscreteRandomVariable((1.0,), (1.0,))
        return DiscreteRandomVariable((0.0, 1.0), (1.0 - t, t))

    @staticmethod
    def constant(value: float) -> "DiscreteRandomVariable":
        return DiscreteRandomVariable((float(value),), (1.0,))

    def is_rademacher(self) -> bool:
        return self.support == (-1.0, 1.0) and self.probs == (0.5, 0.5)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class RankOneInstance:
    """Rank-one family u_i u_i* with one random variable per index."""

    dim: int
    vectors: tuple
    rvs: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise InvariantViolation("dim", "must be >= 1")
        vecs = tuple(_freeze(np.asarray(v, dtype=complex).reshape(-1)) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "rvs", tuple(self.rvs))
        if len(vecs) < 1:
            raise InvariantViolation("vectors", "need at least one vector")
        if any(v.shape != (self.dim,) for v in vecs):
            raise InvariantViolation("vectors", f"all vectors must have dim {self.dim}")
        if len(self.rvs) != len(vecs):
            raise InvariantViolation("rvs", "one random variable per vector required")

    @property
    def n(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class HermitianInstance:
    """General Hermitian family A_i with one random variable per index."""

    dim: int
    matrices: tuple
    rvs: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise InvariantViolation("dim", "must be >= 1")
        mats = tuple(_freeze(linalg.require_hermitian(m)) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "rvs", tuple(self.rvs))
        if len(mats) < 1:
            raise InvariantViolation("matrices", "need at least one matrix")
        if any(m.shape != (self.dim, self.dim) for m in mats):
            raise InvariantViolation("matrices", f"all matrices must be {self.dim}x{self.dim}")
        if len(self.rvs) != len(mats):
            raise InvariantViolation("rvs", "one random variable per matrix required")

    @property
    def n(self) -> int:
        return len(self.matrices)


Instance = Union[RankOneInstance, HermitianInstance]


@dataclass(frozen=True)
class SignAssignment:
    """One outcome per index, identified by position in each support."""

    indices: tuple
    values: tuple

    @staticmethod
    def from_indices(indices: Sequence[int], rvs: Sequence[DiscreteRandomVariable]):
        idx = tuple(int(i) for i in indices)
        if len(idx) != len(rvs):
            raise InvariantViolation("assignment", "length differs from instance size")
        for j, (i, rv) in enumerate(zip(idx, rvs)):
            if not 0 <= i < len(rv.support):
                raise InvariantViolation("assignment", f"index {i} out of range at position {j}")
        return SignAssignment(idx, tuple(rvs[j].support[i] for j, i in enumerate(idx)))


def squared_terms(inst: Instance) -> np.ndarray:
    """Stacked Var[xi_i] * M_i^2 terms, shape (n, d, d)."""
    var = np.array([rv.variance for rv in inst.rvs])
    if isinstance(inst, RankOneInstance):
        # (u u*)^2 = |u|^2 u u*
        outers = np.array([np.outer(v, v.conj()) for v in inst.vectors])
        sq = np.array([np.vdot(v, v).real for v in inst.vectors])[:, None, None] * outers
    else:
        sq = np.array([m @ m for m in inst.matrices])
    return var[:, None, None] * sq


def sigma(inst: Instance) -> float:
    """Deviation scale: sigma = || sum_i Var[xi_i] M_i^2 ||^(1/2)."""
    total = squared_terms(inst).sum(axis=0)
    return float(np.sqrt(linalg.spectral_norm(total)))


def normalize(inst: RankOneInstance) -> RankOneInstance:
    """Rescale vectors by 1/sqrt(sigma) so the output has sigma = 1.

    Raises :class:`DegenerateSigma` when sigma is numerically zero.
    """
    s = sigma(inst)
    scale = max(1.0, max(float(np.vdot(v, v).real) for v in inst.vectors))
    if s <= SIGMA_FLOOR * scale:
        raise DegenerateSigma(f"sigma = {s:.3e} is below the degeneracy floor")
    factor = 1.0 / np.sqrt(s)
    return RankOneInstance(inst.dim, tuple(factor * v for v in inst.vectors), inst.rvs)


def to_hermitian(inst: RankOneInstance) -> HermitianInstance:
    """Replace each vector by its rank-one outer product."""
    mats = tuple(np.outer(v, v.conj()) for v in inst.vectors)
    return HermitianInstance(inst.dim, mats, inst.rvs)


# ---------------------------------------------------------------------------
# JSON persistence.
#
# Canonical serialization: UTF-8, keys in schema order, numbers in Python's
# shortest round-trip decimal form, two-space indent, trailing newline.
# ---------------------------------------------------------------------------


def _complex_pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def dumps_instance(inst: Instance) -> str:
    doc: dict = {"dim": inst.dim}
    if isinstance(inst, RankOneInstance):
        doc["kind"] = "rank_one"
        doc["vectors"] = [[_complex_pair(z) for z in v] for v in inst.vectors]
    else:
        doc["kind"] = "hermitian"
        doc["matrices"] = [[[_complex_pair(z) for z in row] for row in m] for m in inst.matrices]
    doc["rvs"] = [{"support": list(rv.support), "probs": list(rv.probs)} for rv in inst.rvs]
    return json.dumps(doc, indent=2) + "\n"


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return _instance_from_doc(doc)


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instance(fh.read())


def _require(doc: dict, field: str):
    if field not in doc:
        raise ParseError(f"missing field {field!r}")
    return doc[field]


def _parse_complex(entry, where: str) -> complex:
    if not isinstance(entry, (list, tuple)) or len(entry) != 2:
        raise ParseError(f"{where}: complex values must be [re, im] pairs")
    return complex(float(entry[0]), float(entry[1]))


def _instance_from_doc(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    dim = _require(doc, "dim")
    kind = _require(doc, "kind")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"field 'dim': expected a positive integer, got {dim!r}")
    rvs_doc = _require(doc, "rvs")
    if not isinstance(rvs_doc, list):
        raise ParseError("field 'rvs': expected a list")
    rvs = []
    for j, rv in enumerate(rvs_doc):
        if not isinstance(rv, dict) or "support" not in rv or "probs" not in rv:
            raise ParseError(f"field 'rvs[{j}]': expected an object with 'support' and 'probs'")
        rvs.append(DiscreteRandomVariable(tuple(rv["support"]), tuple(rv["probs"])))
    if kind == "rank_one":
        vecs_doc = _require(doc, "vectors")
        vectors = [
            np.array([_parse_complex(z, f"vectors[{i}]") for z in vec], dtype=complex)
            for i, vec in enumerate(vecs_doc)
        ]
        return RankOneInstance(dim, tuple(vectors), tuple(rvs))
    if kind == "hermitian":
        mats_doc = _require(doc, "matrices")
        mats = []
        for i, m in enumerate(mats_doc):
            mats.append(
                np.array(
                    [[_parse_complex(z, f"matrices[{i}]") for z in row] for row in m],
                    dtype=complex,
                )
            )
        return HermitianInstance(dim, tuple(mats), tuple(rvs))
    raise ParseError(f"field 'kind': expected 'rank_one' or 'hermitian', got {kind!r}")
