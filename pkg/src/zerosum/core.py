"""Core types and the exploitability certificate for zero-sum matrix games.

A game is an n x n real matrix A: the row player receives A[i, j], the
column player -A[i, j]. For mixed strategies p (row) and q (column) the
exploitability certificate is

    row_regret = max_i (Aq)_i - p'Aq        (best row deviation)
    col_regret = p'Aq - min_j (p'A)_j       (best column deviation)
    exploit    = row_regret + col_regret

which is zero exactly at Nash equilibria. The normalized form divides by
2 * (max A - min A) and the scalar reward is 1 - normalized, so rewards
live in [0, 1] and are invariant under positive affine payoff changes.

All value types are immutable after construction; arrays are stored
read-only.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import exploit_terms
from .errors import ContractViolation, DegenerateMatrixError

SIMPLEX_SUM_TOL = 1e-9    # |sum - 1| allowed for a valid mixed strategy
PROJECT_MIN_MASS = 1e-12  # post-clamp mass below this cannot be renormalized


def canonical_json(obj) -> str:
    """Serialize with sorted keys and no whitespace; floats via repr."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_digest(obj) -> str:
    """Stable 16-hex-char content hash of a JSON-serializable object."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:16]


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class MatrixMeta:
    """Provenance carried by a payoff matrix."""

    seed: int | None = None
    distribution: str | None = None
    normalized: bool = False

    def to_json_dict(self) -> dict:
        d = {"normalized": self.normalized}
        if self.seed is not None:
            d["seed"] = self.seed
        if self.distribution is not None:
            d["distribution"] = self.distribution
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "MatrixMeta":
        return cls(
            seed=d.get("seed"),
            distribution=d.get("distribution"),
            normalized=bool(d.get("normalized", False)),
        )


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """Immutable n x n payoff matrix for the row player."""

    entries: np.ndarray
    meta: MatrixMeta = MatrixMeta()

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ContractViolation(f"payoff matrix must be square 2-D, got shape {arr.shape}")
        if arr.shape[0] < 2:
            raise ContractViolation("payoff matrix needs n >= 2")
        if not np.isfinite(arr).all():
            raise ContractViolation("payoff entries must be finite")
        arr = _frozen_array(arr)
        object.__setattr__(self, "entries", arr)
        if self.meta.normalized and self.span <= 0.0:
            raise ContractViolation("normalized matrix must have positive span")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def span(self) -> float:
        return float(self.entries.max() - self.entries.min())

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "entries": [list(row) for row in self.entries.tolist()],
            "meta": self.meta.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PayoffMatrix":
        return cls(
            entries=np.array(d["entries"], dtype=np.float64),
            meta=MatrixMeta.from_json_dict(d.get("meta", {})),
        )


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """Probability vector on the action simplex."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ContractViolation(f"strategy must be a nonempty vector, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ContractViolation("strategy weights must be finite")
        if (arr < 0.0).any():
            raise ContractViolation("strategy weights must be nonnegative")
        if abs(float(arr.sum()) - 1.0) > SIMPLEX_SUM_TOL:
            raise ContractViolation(f"strategy weights sum to {arr.sum()!r}, not 1")
        object.__setattr__(self, "probs", _frozen_array(arr))

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def one_hot(cls, n: int, index: int) -> "MixedStrategy":
        v = np.zeros(n)
        v[index] = 1.0
        return cls(v)


@dataclass(frozen=True, eq=False)
class StrategyPair:
    """Row and column mixed strategies proposed together."""

    row: MixedStrategy
    col: MixedStrategy

    def to_json_dict(self) -> dict:
        return {"row": self.row.probs.tolist(), "col": self.col.probs.tolist()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "StrategyPair":
        return cls(row=MixedStrategy(d["row"]), col=MixedStrategy(d["col"]))


@dataclass(frozen=True)
class ExploitReport:
    """Exploitability certificate for one (matrix, pair) evaluation."""

    row_regret: float
    col_regret: float
    exploit: float
    normalized: float
    reward: float
    value: float


def normalize_payoffs(matrix: PayoffMatrix) -> PayoffMatrix:
    """Rescale payoffs to A <- 2A / (max A - min A).

    A constant matrix has no scale to normalize, so entry (0, 0) is bumped
    by +1 first; the result has span 2 up to a few units of rounding.
    Provenance metadata is kept and the normalized flag set.
    """
    arr = np.array(matrix.entries)
    lo = arr.min()
    hi = arr.max()
    if hi == lo:
        arr[0, 0] += 1.0
        lo = arr.min()
        hi = arr.max()
    arr *= 2.0 / (hi - lo)
    return PayoffMatrix(arr, meta=replace(matrix.meta, normalized=True))


def exploitability(matrix: PayoffMatrix, pair: StrategyPair) -> ExploitReport:
    """Score a strategy pair against a game.

    Raises DegenerateMatrixError on a constant matrix (the normalized form
    divides by the payoff span; normalize_payoffs first) and
    ContractViolation on dimension mismatch.
    """
    n = matrix.n
    if pair.row.n != n or pair.col.n != n:
        raise ContractViolation(
            f"strategy lengths ({pair.row.n}, {pair.col.n}) do not match matrix size {n}"
        )
    span = matrix.span
    if span <= 0.0:
        raise DegenerateMatrixError(
            "exploitability of a constant matrix is undefined; apply normalize_payoffs first"
        )
    max_aq, min_pa, value = exploit_terms(matrix.entries, pair.row.probs, pair.col.probs)
    row_regret = max(0.0, max_aq - value)
    col_regret = max(0.0, value - min_pa)
    exploit = row_regret + col_regret
    normalized = exploit / (2.0 * span)
    return ExploitReport(
        row_regret=row_regret,
        col_regret=col_regret,
        exploit=exploit,
        normalized=normalized,
        reward=1.0 - normalized,
        value=value,
    )


def _check_permutation(perm, n: int) -> np.ndarray:
    arr = np.asarray(perm, dtype=np.int64)
    if arr.shape != (n,) or not np.array_equal(np.sort(arr), np.arange(n)):
        raise ContractViolation(f"not a permutation of range({n}): {perm!r}")
    return arr


def apply_permutation(matrix: PayoffMatrix, row_perm, col_perm) -> PayoffMatrix:
    """Relabel actions: result[i, j] = A[row_perm[i], col_perm[j]]."""
    rp = _check_permutation(row_perm, matrix.n)
    cp = _check_permutation(col_perm, matrix.n)
    return PayoffMatrix(matrix.entries[np.ix_(rp, cp)], meta=matrix.meta)


def permute_pair(pair: StrategyPair, row_perm, col_perm) -> StrategyPair:
    """Relabel a strategy pair consistently with apply_permutation."""
    rp = _check_permutation(row_perm, pair.row.n)
    cp = _check_permutation(col_perm, pair.col.n)
    return StrategyPair(
        row=MixedStrategy(pair.row.probs[rp]),
        col=MixedStrategy(pair.col.probs[cp]),
    )


def apply_affine(matrix: PayoffMatrix, scale: float, shift: float) -> PayoffMatrix:
    """Map payoffs to scale * A + shift with scale > 0.

    Positive affine maps preserve best responses, equilibria, and the
    normalized exploitability of any fixed pair.
    """
    if not (scale > 0.0) or not np.isfinite(scale) or not np.isfinite(shift):
        raise ContractViolation(f"affine map needs finite scale > 0, got ({scale}, {shift})")
    return PayoffMatrix(
        matrix.entries * scale + shift,
        meta=replace(matrix.meta, normalized=False),
    )


def project_to_simplex(weights) -> MixedStrategy | None:
    """Clamp negatives to zero and renormalize; None if nothing remains.

    Vectors that are already valid simplex points (nonnegative, sum within
    1e-9 of 1) are returned unchanged, making projection idempotent and
    serialize/parse round trips exact.
    """
    arr = np.asarray(weights, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1 or not np.isfinite(arr).all():
        return None
    if (arr >= 0.0).all() and abs(float(arr.sum()) - 1.0) <= SIMPLEX_SUM_TOL:
        return MixedStrategy(arr)
    clamped = np.maximum(arr, 0.0)
    mass = float(clamped.sum())
    if mass <= PROJECT_MIN_MASS:
        return None
    return MixedStrategy(clamped / mass)
