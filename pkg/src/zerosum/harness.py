"""Best-of-k evaluation of agents on game sets, plus metric audits.

Every reward is recomputed from the response's raw text, so any persisted
run can be rescored bit-for-bit later. Invalid responses score 0 and are
flagged, never dropped: valid_rate and the success metrics move together.

success for a game means best valid reward STRICTLY exceeds 1 - tau.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .agents import parse_response
from .core import apply_affine, apply_permutation, exploitability, permute_pair
from .errors import ContractViolation
from .gen import GameSpec, dominated_pad, random_pad, sample_game
from .rng import child_seed, generator


def binomial_se(p: float, n: int) -> float:
    """Standard error of a proportion: sqrt(p(1-p)/n)."""
    if n <= 0:
        raise ContractViolation(f"sample count must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ContractViolation(f"proportion must be in [0, 1], got {p}")
    return math.sqrt(p * (1.0 - p) / n)


@dataclass(frozen=True)
class GameResult:
    """Scores for one game: k sampled responses, best-of aggregation."""

    game_id: str
    rewards: tuple[float, ...]
    invalid: tuple[bool, ...]
    raw_texts: tuple[str, ...]
    best_reward: float
    first_reward: float
    best_sample_index: int | None
    success: bool
    first_success: bool

    def to_json_dict(self) -> dict:
        return {
            "game_id": self.game_id,
            "rewards": list(self.rewards),
            "invalid": list(self.invalid),
            "raw_texts": list(self.raw_texts),
            "best_reward": self.best_reward,
            "first_reward": self.first_reward,
            "best_sample_index": self.best_sample_index,
            "success": self.success,
            "first_success": self.first_success,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GameResult":
        return cls(
            game_id=d["game_id"],
            rewards=tuple(float(x) for x in d["rewards"]),
            invalid=tuple(bool(x) for x in d["invalid"]),
            raw_texts=tuple(d["raw_texts"]),
            best_reward=float(d["best_reward"]),
            first_reward=float(d["first_reward"]),
            best_sample_index=d["best_sample_index"],
            success=bool(d["success"]),
            first_success=bool(d["first_success"]),
        )


@dataclass(frozen=True)
class EvalResult:
    """Aggregate metrics over a game set for one agent."""

    agent: str
    n: int
    count: int
    k: int
    tau: float
    s_at_tau: float
    pass_at_1: float
    valid_rate: float
    mean_best_reward: float
    se_s: float
    se_pass: float
    condition: str = ""
    distribution: str = ""
    games: tuple[GameResult, ...] = field(default_factory=tuple)

    def to_json_dict(self) -> dict:
        return {
            "schema": "evalres/1",
            "agent": self.agent,
            "n": self.n,
            "count": self.count,
            "k": self.k,
            "tau": self.tau,
            "s_at_tau": self.s_at_tau,
            "pass_at_1": self.pass_at_1,
            "valid_rate": self.valid_rate,
            "mean_best_reward": self.mean_best_reward,
            "se_s": self.se_s,
            "se_pass": self.se_pass,
            "condition": self.condition,
            "distribution": self.distribution,
            "games": [g.to_json_dict() for g in self.games],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "EvalResult":
        if d.get("schema") != "evalres/1":
            raise ContractViolation(f"unknown result schema {d.get('schema')!r}")
        return cls(
            agent=d["agent"],
            n=int(d["n"]),
            count=int(d["count"]),
            k=int(d["k"]),
            tau=float(d["tau"]),
            s_at_tau=float(d["s_at_tau"]),
            pass_at_1=float(d["pass_at_1"]),
            valid_rate=float(d["valid_rate"]),
            mean_best_reward=float(d["mean_best_reward"]),
            se_s=float(d["se_s"]),
            se_pass=float(d["se_pass"]),
            condition=d.get("condition", ""),
            distribution=d.get("distribution", ""),
            games=tuple(GameResult.from_json_dict(g) for g in d["games"]),
        )


def score_responses(game, responses, tau: float) -> GameResult:
    """Reward each response against the game; best-of over valid samples."""
    rewards = []
    invalid = []
    raw_texts = []
    for resp in responses:
        raw_texts.append(resp.raw_text)
        if resp.parsed is None:
            invalid.append(True)
            rewards.append(0.0)
        else:
            invalid.append(False)
            rewards.append(exploitability(game.matrix, resp.parsed).reward)
    best_reward = 0.0
    best_index = None
    for i, (r, bad) in enumerate(zip(rewards, invalid)):
        if not bad and (best_index is None or r > best_reward):
            best_reward = r
            best_index = i
    threshold = 1.0 - tau
    return GameResult(
        game_id=game.id,
        rewards=tuple(rewards),
        invalid=tuple(invalid),
        raw_texts=tuple(raw_texts),
        best_reward=best_reward,
        first_reward=rewards[0],
        best_sample_index=best_index,
        success=best_reward > threshold,
        first_success=rewards[0] > threshold,
    )


def _aggregate(agent_name, games, results, k, tau, condition, distribution) -> EvalResult:
    count = len(results)
    s_at = sum(1 for g in results if g.success) / count
    p_at = sum(1 for g in results if g.first_success) / count
    valid = sum(sum(0 if b else 1 for b in g.invalid) for g in results)
    valid_rate = valid / (count * k)
    mean_best = sum(g.best_reward for g in results) / count
    sizes = {g.n for g in games}
    n = sizes.pop() if len(sizes) == 1 else 0
    return EvalResult(
        agent=agent_name,
        n=n,
        count=count,
        k=k,
        tau=tau,
        s_at_tau=s_at,
        pass_at_1=p_at,
        valid_rate=valid_rate,
        mean_best_reward=mean_best,
        se_s=binomial_se(s_at, count),
        se_pass=binomial_se(p_at, count),
        condition=condition,
        distribution=distribution,
        games=tuple(results),
    )


def evaluate(
    agent,
    games,
    k: int = 4,
    tau: float = 0.10,
    jobs: int = 1,
    condition: str = "",
    distribution: str = "",
) -> EvalResult:
    """Best-of-k evaluation of one agent over a list of game records.

    jobs > 1 fans games out over a thread pool; results are collected in
    game order, so aggregation does not depend on completion order.
    """
    if not games:
        raise ContractViolation("cannot evaluate an empty game set")
    if k < 1:
        raise ContractViolation(f"sample count k must be >= 1, got {k}")
    if not 0.0 < tau < 1.0:
        raise ContractViolation(f"tau must be in (0, 1), got {tau}")

    def run_one(game):
        return score_responses(game, agent.propose(game, k), tau)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, games))
    else:
        results = [run_one(g) for g in games]
    return _aggregate(agent.name, games, results, k, tau, condition, distribution)


def rescore(result: EvalResult, games) -> EvalResult:
    """Recompute an EvalResult from its persisted raw texts alone.

    Parsing and scoring reuse the exact evaluation path, so the output
    matches the original run bit for bit.
    """
    by_id = {g.id: g for g in games}
    results = []
    for gr in result.games:
        game = by_id.get(gr.game_id)
        if game is None:
            raise ContractViolation(f"game {gr.game_id} not in the provided set")
        responses = [parse_response(t, game.n) for t in gr.raw_texts]
        results.append(score_responses(game, responses, result.tau))
    ordered_games = [by_id[gr.game_id] for gr in result.games]
    return _aggregate(
        result.agent, ordered_games, results, result.k, result.tau,
        result.condition, result.distribution,
    )


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of a metric-invariance audit over a game set."""

    kind: str
    trials: int
    invalid: int
    max_abs_diff: float
    mean_abs_diff: float
    per_size_max: dict
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_abs_diff <= self.tol

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "trials": self.trials,
            "invalid": self.invalid,
            "max_abs_diff": self.max_abs_diff,
            "mean_abs_diff": self.mean_abs_diff,
            "per_size_max": {str(k): v for k, v in sorted(self.per_size_max.items())},
            "tol": self.tol,
            "ok": self.ok,
        }


def _audit_pairs(agent, games):
    """(game, parsed pair) for each game the agent answers validly, plus skips."""
    usable = []
    invalid = 0
    for game in games:
        resp = agent.propose(game, 1)[0]
        if resp.parsed is None:
            invalid += 1
        else:
            usable.append((game, resp.parsed))
    return usable, invalid


def permutation_equivariance_audit(agent, games, seed: int = 0) -> InvarianceReport:
    """Reward is unchanged when game and strategies are jointly permuted.

    The sorted-accumulation scoring kernel makes this exact, so the audit
    tolerance is 0.0: any nonzero difference is a defect.
    """
    usable, invalid = _audit_pairs(agent, games)
    diffs = []
    per_size: dict[int, float] = {}
    for idx, (game, pair) in enumerate(usable):
        rng = generator(child_seed(seed, 7, idx))
        rp = rng.permutation(game.n)
        cp = rng.permutation(game.n)
        base = exploitability(game.matrix, pair).reward
        permuted = exploitability(
            apply_permutation(game.matrix, rp, cp), permute_pair(pair, rp, cp)
        ).reward
        d = abs(base - permuted)
        diffs.append(d)
        per_size[game.n] = max(per_size.get(game.n, 0.0), d)
    if not diffs:
        raise ContractViolation("no valid responses to audit")
    return InvarianceReport(
        kind="permutation",
        trials=len(diffs),
        invalid=invalid,
        max_abs_diff=max(diffs),
        mean_abs_diff=sum(diffs) / len(diffs),
        per_size_max=per_size,
        tol=0.0,
    )


def affine_invariance_audit(agent, games, seed: int = 0, tol: float = 1e-12) -> InvarianceReport:
    """Normalized reward is unchanged under payoffs A -> c*A + d, c > 0.

    Scales c in [0.5, 2] and shifts d in [-1, 1] are drawn per game and
    logged through the report; agreement is to rounding (default 1e-12),
    since the two computations divide by different spans.
    """
    usable, invalid = _audit_pairs(agent, games)
    diffs = []
    per_size: dict[int, float] = {}
    for idx, (game, pair) in enumerate(usable):
        rng = generator(child_seed(seed, 11, idx))
        c = 0.5 + 1.5 * rng.random()
        d = -1.0 + 2.0 * rng.random()
        base = exploitability(game.matrix, pair).reward
        scaled = exploitability(apply_affine(game.matrix, c, d), pair).reward
        diff = abs(base - scaled)
        diffs.append(diff)
        per_size[game.n] = max(per_size.get(game.n, 0.0), diff)
    if not diffs:
        raise ContractViolation("no valid responses to audit")
    return InvarianceReport(
        kind="affine",
        trials=len(diffs),
        invalid=invalid,
        max_abs_diff=max(diffs),
        mean_abs_diff=sum(diffs) / len(diffs),
        per_size_max=per_size,
        tol=tol,
    )


@dataclass(frozen=True)
class PaddingCliffReport:
    """s@tau curves over target sizes for three padding conditions."""

    base_n: int
    targets: tuple[int, ...]
    count: int
    k: int
    tau: float
    rows: tuple[dict, ...]

    def to_json_dict(self) -> dict:
        return {
            "schema": "padexp/1",
            "base_n": self.base_n,
            "targets": list(self.targets),
            "count": self.count,
            "k": self.k,
            "tau": self.tau,
            "rows": [dict(r) for r in self.rows],
        }

    def curve(self, condition: str) -> list[tuple[int, float]]:
        return [
            (r["n"], r["s_at_tau"]) for r in self.rows if r["condition"] == condition
        ]


def _cliff_row(condition: str, n: int, res: EvalResult) -> dict:
    return {
        "condition": condition,
        "n": n,
        "s_at_tau": res.s_at_tau,
        "pass_at_1": res.pass_at_1,
        "valid_rate": res.valid_rate,
        "mean_best_reward": res.mean_best_reward,
        "se": res.se_s,
    }


def padding_cliff_experiment(
    agent,
    base_n: int = 3,
    targets: tuple[int, ...] = (8, 12, 15, 20),
    count: int = 50,
    k: int = 4,
    tau: float = 0.10,
    seed: int = 0,
    jobs: int = 1,
) -> PaddingCliffReport:
    """Compare difficulty growth under three ways of reaching size n.

    dense:      fresh integer games drawn at the target size
    dominated:  base games padded with strictly dominated actions
                (equilibrium and value preserved by construction)
    random:     base games embedded in random payoffs (control)

    The shared base point at base_n starts all three curves.
    """
    if any(t <= base_n for t in targets):
        raise ContractViolation("every target size must exceed the base size")

    def draw(n, *parts):
        return sample_game(GameSpec(n=n, distribution="integer", seed=child_seed(seed, *parts)))

    bases = [draw(base_n, 1, i) for i in range(count)]
    base_res = evaluate(agent, bases, k=k, tau=tau, jobs=jobs,
                        condition="base", distribution="integer")
    rows = [
        _cliff_row(cond, base_n, base_res) for cond in ("dense", "dominated", "random")
    ]
    for t in targets:
        dense = [draw(t, 2, t, i) for i in range(count)]
        dom = [dominated_pad(b, t) for b in bases]
        rand = [random_pad(b, t) for b in bases]
        for cond, games in (("dense", dense), ("dominated", dom), ("random", rand)):
            res = evaluate(agent, games, k=k, tau=tau, jobs=jobs,
                           condition=cond, distribution="integer")
            rows.append(_cliff_row(cond, t, res))
    return PaddingCliffReport(
        base_n=base_n, targets=tuple(targets), count=count, k=k, tau=tau,
        rows=tuple(rows),
    )
