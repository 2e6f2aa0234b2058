"""Seeded game generation, evaluation sets, and padding constructions.

Determinism contract: every draw comes from a Philox stream keyed by a
documented splitmix64 child derivation (see rng.py).

- ``sample_game`` keys its stream with child_seed(spec.seed, dist_code, n)
  where dist_code is 1/2/3 for integer/gaussian/sparse.
- ``make_eval_set`` gives game i at size n the seed
  child_seed(eval_seed, n, i), so any single game can be regenerated alone
  via ``eval_game_spec``.
- Padding streams are keyed with child_seed(base.spec.seed, tag, target_n),
  tag 101 for dominated margins, 102 for random surrounds, and the draw
  order within each construction is fixed (see the function docstrings).

Draw rules per distribution (row-major fills):

- integer: entries uniform on {-9, ..., 9}.
- gaussian: standard normals via the package Box-Muller transform.
- sparse: a keep-mask (entry nonzero with probability sparse_density) is
  drawn first as one (n, n) uniform block, then one (n, n) block of values
  uniform on {-9..9} minus {0}; masked-off cells are exactly 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    MatrixMeta,
    MixedStrategy,
    PayoffMatrix,
    StrategyPair,
    content_digest,
    normalize_payoffs,
)
from .errors import ConstructionError, ContractViolation
from .rng import child_seed, generator
from .solver import CERT_TOL, raw_exploit, solve_zero_sum_lp

DISTRIBUTIONS = ("integer", "gaussian", "sparse")
_DIST_CODE = {"integer": 1, "gaussian": 2, "sparse": 3}
_DOMINATED_TAG = 101
_RANDOM_PAD_TAG = 102
PAD_MARGIN_MAX = 5  # dominated margins drawn integer-uniform from {1..5}


@dataclass(frozen=True)
class GameSpec:
    """Everything needed to regenerate one game."""

    n: int
    distribution: str = "integer"
    seed: int = 0
    normalize: bool = True
    sparse_density: float = 0.2

    def __post_init__(self):
        if not 2 <= self.n <= 64:
            raise ContractViolation(f"game size must be in [2, 64], got {self.n}")
        if self.distribution not in DISTRIBUTIONS:
            raise ContractViolation(
                f"unknown distribution {self.distribution!r}; choose from {DISTRIBUTIONS}"
            )
        if not 0 <= self.seed < 2 ** 64:
            raise ContractViolation("seed must fit in 64 bits")
        if not 0.0 < self.sparse_density <= 1.0:
            raise ContractViolation(
                f"sparse_density must be in (0, 1], got {self.sparse_density}"
            )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "distribution": self.distribution,
            "seed": self.seed,
            "normalize": self.normalize,
            "sparse_density": self.sparse_density,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GameSpec":
        return cls(
            n=d["n"],
            distribution=d["distribution"],
            seed=d["seed"],
            normalize=d.get("normalize", True),
            sparse_density=d.get("sparse_density", 0.2),
        )


DEFAULT_TEMPLATE = GameSpec(n=2, distribution="integer", seed=0)


@dataclass(frozen=True, eq=False)
class GameRecord:
    """A generated game: spec, raw draw, and the matrix agents are scored on."""

    spec: GameSpec
    matrix: PayoffMatrix
    raw: PayoffMatrix
    id: str

    @property
    def n(self) -> int:
        return self.spec.n

    def to_json_dict(self) -> dict:
        return {
            "schema": "gamerec/1",
            "id": self.id,
            "spec": self.spec.to_json_dict(),
            "matrix": self.matrix.to_json_dict(),
            "raw": self.raw.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GameRecord":
        if d.get("schema") != "gamerec/1":
            raise ContractViolation(f"expected schema gamerec/1, got {d.get('schema')!r}")
        spec = GameSpec.from_json_dict(d["spec"])
        matrix = PayoffMatrix.from_json_dict(d["matrix"])
        raw = PayoffMatrix.from_json_dict(d["raw"])
        if spec.normalize:
            expected = normalize_payoffs(raw)
            if not np.array_equal(expected.entries, matrix.entries):
                raise ContractViolation(f"record {d.get('id')}: matrix != normalize(raw)")
        return cls(spec=spec, matrix=matrix, raw=raw, id=d["id"])


def _draw_raw(spec: GameSpec) -> np.ndarray:
    rng = generator(child_seed(spec.seed, _DIST_CODE[spec.distribution], spec.n))
    n = spec.n
    if spec.distribution == "integer":
        return rng.integers(-9, 10, size=(n, n)).astype(np.float64)
    if spec.distribution == "gaussian":
        from .rng import standard_normal

        return standard_normal(rng, n * n).reshape(n, n)
    mask = rng.random((n, n)) < spec.sparse_density
    draws = rng.integers(0, 18, size=(n, n))
    values = np.where(draws < 9, draws - 9, draws - 8).astype(np.float64)
    return np.where(mask, values, 0.0)


def sample_game(spec: GameSpec) -> GameRecord:
    """Draw one game; identical spec gives an identical record."""
    raw_entries = _draw_raw(spec)
    meta = MatrixMeta(seed=spec.seed, distribution=spec.distribution, normalized=False)
    raw = PayoffMatrix(raw_entries, meta=meta)
    matrix = normalize_payoffs(raw) if spec.normalize else raw
    gid = content_digest(
        {"spec": spec.to_json_dict(), "raw": [list(r) for r in raw_entries.tolist()]}
    )
    return GameRecord(spec=spec, matrix=matrix, raw=raw, id=gid)


def eval_game_spec(template: GameSpec, n: int, eval_seed: int, index: int) -> GameSpec:
    """Spec of game `index` in the size-n eval set for eval_seed."""
    return replace(template, n=n, seed=child_seed(eval_seed, n, index))


def make_eval_set(
    n: int, count: int, template: GameSpec = DEFAULT_TEMPLATE, eval_seed: int = 0
) -> list[GameRecord]:
    """Generate `count` games at size n with per-game child seeds."""
    if count < 1:
        raise ContractViolation(f"count must be >= 1, got {count}")
    return [sample_game(eval_game_spec(template, n, eval_seed, i)) for i in range(count)]


@dataclass(frozen=True, eq=False)
class PaddedGameRecord:
    """A base game embedded in a larger matrix, with placement maps."""

    base: GameRecord
    padded: PayoffMatrix
    kind: str
    row_map: tuple[int, ...]
    col_map: tuple[int, ...]
    reference_pair: StrategyPair
    certificate: dict
    id: str

    @property
    def matrix(self) -> PayoffMatrix:
        return self.padded

    @property
    def n(self) -> int:
        return self.padded.n

    def to_json_dict(self) -> dict:
        return {
            "schema": "padrec/1",
            "id": self.id,
            "kind": self.kind,
            "base": self.base.to_json_dict(),
            "padded": self.padded.to_json_dict(),
            "row_map": list(self.row_map),
            "col_map": list(self.col_map),
            "reference_pair": self.reference_pair.to_json_dict(),
            "certificate": self.certificate,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PaddedGameRecord":
        if d.get("schema") != "padrec/1":
            raise ContractViolation(f"expected schema padrec/1, got {d.get('schema')!r}")
        return cls(
            base=GameRecord.from_json_dict(d["base"]),
            padded=PayoffMatrix.from_json_dict(d["padded"]),
            kind=d["kind"],
            row_map=tuple(d["row_map"]),
            col_map=tuple(d["col_map"]),
            reference_pair=StrategyPair.from_json_dict(d["reference_pair"]),
            certificate=d["certificate"],
            id=d["id"],
        )


def _zero_extend(pair: StrategyPair, row_map, col_map, n: int) -> StrategyPair:
    row = np.zeros(n)
    row[list(row_map)] = pair.row.probs
    col = np.zeros(n)
    col[list(col_map)] = pair.col.probs
    return StrategyPair(row=MixedStrategy(row), col=MixedStrategy(col))


def _padded_id(kind: str, base: GameRecord, padded: np.ndarray) -> str:
    return content_digest(
        {
            "kind": kind,
            "base": base.id,
            "padded": [list(r) for r in padded.tolist()],
        }
    )


def dominated_pad(
    base: GameRecord, target_n: int, shuffle: bool = False
) -> PaddedGameRecord:
    """Pad with strictly dominated actions; the equilibrium is preserved.

    New rows sit strictly below the base minimum (base_min - u) everywhere,
    including at new-column intersections; new columns sit strictly above
    the base maximum (base_max + u) on original rows; u is integer-uniform
    on {1..5} per entry. Draw order: the new-column block (k x (N-k)), then
    the new-row block ((N-k) x N), then, when shuffle is set, the row and
    column position permutations. Every record is re-verified: the
    zero-extended base equilibrium must certify on the padded game and the
    padded LP value must match the base LP value at 1e-8, else
    ConstructionError.
    """
    k = base.n
    if target_n <= k:
        raise ContractViolation(f"target size {target_n} must exceed base size {k}")
    rng = generator(child_seed(base.spec.seed, _DOMINATED_TAG, target_n))
    a = base.matrix.entries
    lo = float(a.min())
    hi = float(a.max())
    extra = target_n - k
    padded = np.empty((target_n, target_n))
    padded[:k, :k] = a
    padded[:k, k:] = hi + rng.integers(1, PAD_MARGIN_MAX + 1, size=(k, extra))
    padded[k:, :] = lo - rng.integers(1, PAD_MARGIN_MAX + 1, size=(extra, target_n))
    row_pos = np.arange(target_n)
    col_pos = np.arange(target_n)
    if shuffle:
        row_pos = rng.permutation(target_n)
        col_pos = rng.permutation(target_n)
        shuffled = np.empty_like(padded)
        shuffled[np.ix_(row_pos, col_pos)] = padded
        padded = shuffled
    row_map = tuple(int(x) for x in row_pos[:k])
    col_map = tuple(int(x) for x in col_pos[:k])

    base_eq = solve_zero_sum_lp(base.matrix)
    padded_matrix = PayoffMatrix(
        padded, meta=replace(base.matrix.meta, normalized=False)
    )
    reference = _zero_extend(base_eq.pair, row_map, col_map, target_n)
    resid = raw_exploit(padded_matrix, reference)
    padded_eq = solve_zero_sum_lp(padded_matrix)
    value_gap = abs(padded_eq.value - base_eq.value)
    if resid > CERT_TOL or value_gap > CERT_TOL:
        raise ConstructionError(
            f"dominated pad failed verification (exploit {resid:.3e}, "
            f"value gap {value_gap:.3e})",
            instance=padded,
        )
    certificate = {
        "base_value": base_eq.value,
        "padded_value": padded_eq.value,
        "reference_exploit": resid,
    }
    return PaddedGameRecord(
        base=base,
        padded=padded_matrix,
        kind="dominated",
        row_map=row_map,
        col_map=col_map,
        reference_pair=reference,
        certificate=certificate,
        id=_padded_id("dominated", base, padded),
    )


def random_pad(base: GameRecord, target_n: int) -> PaddedGameRecord:
    """Negative control: same base block, random surround, no preservation.

    The base block occupies the top-left k x k corner; every other entry is
    drawn from the base spec's distribution (one full (N, N) block is drawn
    and the corner overwritten, so the surround is a fixed function of the
    stream). The reference pair is still the zero-extended base equilibrium,
    but nothing certifies it here; its exploitability on the padded game is
    recorded in the certificate for inspection.
    """
    k = base.n
    if target_n <= k:
        raise ContractViolation(f"target size {target_n} must exceed base size {k}")
    surround_spec = replace(
        base.spec,
        n=target_n,
        seed=child_seed(base.spec.seed, _RANDOM_PAD_TAG, target_n),
        normalize=False,
    )
    padded = _draw_raw(surround_spec)
    padded[:k, :k] = base.matrix.entries
    padded_matrix = PayoffMatrix(
        padded, meta=replace(base.matrix.meta, normalized=False)
    )
    row_map = tuple(range(k))
    col_map = tuple(range(k))
    base_eq = solve_zero_sum_lp(base.matrix)
    reference = _zero_extend(base_eq.pair, row_map, col_map, target_n)
    certificate = {
        "base_value": base_eq.value,
        "reference_exploit": raw_exploit(padded_matrix, reference),
    }
    return PaddedGameRecord(
        base=base,
        padded=padded_matrix,
        kind="random",
        row_map=row_map,
        col_map=col_map,
        reference_pair=reference,
        certificate=certificate,
        id=_padded_id("random", base, padded),
    )
