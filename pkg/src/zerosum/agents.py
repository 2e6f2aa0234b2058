"""Agents that propose strategy pairs, and the text interface around them.

An agent is anything with a ``name`` and ``propose(game, k) ->
list[AgentResponse]``. Built-in agents (uniform, maximin, oracle,
noisy_oracle, block solver) are deterministic given (game, seed) and emit
their pair through the same serialize -> parse path used for model output,
so every reward in the system is computed from raw text.

Parsing contract: the first JSON object literal in the text containing both
"row" and "col" keys is the candidate; failures are classified as one of
  malformed          no parseable object with the keys / non-numeric weights
  missing_field      an object had exactly one of the two keys
  length_mismatch    vector lengths differ from the game size
  degenerate_weights projection failed (nonpositive or non-finite mass)
Weights may be negative or unnormalized; they are clamped to zero and
renormalized (core.project_to_simplex).
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass

import numpy as np

from .core import StrategyPair, content_digest, project_to_simplex
from .errors import ConfigError, ContractViolation
from .rng import child_seed, generator
from .solver import maximin_pure, solve_zero_sum_lp, uniform_pair

PARSE_ERRORS = ("malformed", "missing_field", "length_mismatch", "degenerate_weights")


@dataclass(frozen=True)
class AgentResponse:
    """One proposed answer: raw text plus its parse outcome."""

    raw_text: str
    parsed: StrategyPair | None
    parse_error: str | None
    latency: float = 0.0

    def __post_init__(self):
        if (self.parsed is None) == (self.parse_error is None):
            raise ContractViolation("exactly one of parsed/parse_error must be set")
        if self.parse_error is not None and self.parse_error not in PARSE_ERRORS:
            raise ContractViolation(f"unknown parse error {self.parse_error!r}")


@dataclass(frozen=True)
class PromptTemplate:
    """Prompt text with {n}, {matrix} and {filler} placeholders."""

    text: str


DEFAULT_TEMPLATE = PromptTemplate(
    text=(
        "You are playing a two-player zero-sum matrix game.\n"
        "{filler}"
        "The row player's payoff matrix has {n} rows and {n} columns:\n"
        "{matrix}\n"
        "Row entries are the row player's payoffs; the column player receives "
        "their negation.\n"
        'Reply with a JSON object {{"row": [...], "col": [...]}} giving mixed '
        "strategies for the row and column players.\n"
    )
)

_FILLER_UNIT = "[advisory] This note is neutral padding and carries no game information. "


def render_matrix(entries: np.ndarray) -> str:
    """Nested-list rendering with repr floats; extract_matrix inverts it."""
    return json.dumps([list(row) for row in entries.tolist()])


def extract_matrix(prompt: str) -> np.ndarray:
    """Recover the first nested-list matrix embedded in a prompt."""
    dec = json.JSONDecoder()
    idx = 0
    while True:
        start = prompt.find("[", idx)
        if start < 0:
            raise ContractViolation("prompt contains no matrix literal")
        try:
            obj, _ = dec.raw_decode(prompt, start)
        except ValueError:
            idx = start + 1
            continue
        if (
            isinstance(obj, list)
            and obj
            and all(isinstance(r, list) and len(r) == len(obj) for r in obj)
        ):
            return np.array(obj, dtype=np.float64)
        idx = start + 1


def _filler_block(chars: int) -> str:
    if chars <= 0:
        return ""
    reps = -(-chars // len(_FILLER_UNIT))
    return (_FILLER_UNIT * reps)[: chars - 1] + "\n"


def build_prompt(
    game,
    template: PromptTemplate = DEFAULT_TEMPLATE,
    filler_chars: int = 0,
    target_length: int | None = None,
    length_fn=len,
) -> str:
    """Render a game into a prompt, optionally padded to a length target.

    ``filler_chars`` inserts an inert advisory block of exactly that many
    characters (including its trailing newline). ``target_length`` instead
    searches for the smallest filler making length_fn(prompt) >= target;
    length_fn defaults to len and may be any monotone length callback
    (e.g. a tokenizer).
    """

    def render(chars: int) -> str:
        return template.text.format(
            n=game.n, matrix=render_matrix(game.matrix.entries), filler=_filler_block(chars)
        )

    if target_length is None:
        return render(filler_chars)
    base = render(0)
    if length_fn(base) >= target_length:
        return base
    if length_fn is len:
        return render(target_length - len(base))
    lo, hi = 0, 64
    while length_fn(render(hi)) < target_length:
        lo, hi = hi, hi * 2
        if hi > 10_000_000:
            raise ContractViolation("length target unreachable")
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if length_fn(render(mid)) >= target_length:
            hi = mid
        else:
            lo = mid
    return render(hi)


def prompt_digest(prompt: str) -> str:
    return content_digest(prompt)


def _iter_json_objects(text: str):
    dec = json.JSONDecoder()
    idx = 0
    while True:
        start = text.find("{", idx)
        if start < 0:
            return
        try:
            obj, _ = dec.raw_decode(text, start)
        except ValueError:
            idx = start + 1
            continue
        yield obj
        idx = start + 1


def _as_weights(value, n: int):
    """(weights, error) for one strategy field."""
    if not isinstance(value, list):
        return None, "malformed"
    if len(value) != n:
        return None, "length_mismatch"
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        return None, "malformed"
    return np.array(value, dtype=np.float64), None


def parse_response(text: str, n: int) -> AgentResponse:
    """Extract and project the first {"row": ..., "col": ...} object."""
    candidate = None
    saw_partial = False
    for obj in _iter_json_objects(text):
        if not isinstance(obj, dict):
            continue
        has_row = "row" in obj
        has_col = "col" in obj
        if has_row and has_col:
            candidate = obj
            break
        if has_row or has_col:
            saw_partial = True
    if candidate is None:
        reason = "missing_field" if saw_partial else "malformed"
        return AgentResponse(raw_text=text, parsed=None, parse_error=reason)
    row_raw, row_err = _as_weights(candidate["row"], n)
    col_raw, col_err = _as_weights(candidate["col"], n)
    for err in ("length_mismatch", "malformed"):
        if row_err == err or col_err == err:
            return AgentResponse(raw_text=text, parsed=None, parse_error=err)
    row = project_to_simplex(row_raw)
    col = project_to_simplex(col_raw)
    if row is None or col is None:
        return AgentResponse(raw_text=text, parsed=None, parse_error="degenerate_weights")
    return AgentResponse(
        raw_text=text, parsed=StrategyPair(row=row, col=col), parse_error=None
    )


def serialize_pair(pair: StrategyPair) -> str:
    return json.dumps(pair.to_json_dict())


def _respond(raw_text: str, n: int) -> AgentResponse:
    return parse_response(raw_text, n)


class UniformAgent:
    name = "uniform"

    def propose(self, game, k: int) -> list[AgentResponse]:
        resp = _respond(serialize_pair(uniform_pair(game.n)), game.n)
        return [resp] * k


class MaximinAgent:
    name = "maximin"

    def propose(self, game, k: int) -> list[AgentResponse]:
        resp = _respond(serialize_pair(maximin_pure(game.matrix)), game.n)
        return [resp] * k


class OracleAgent:
    name = "oracle"

    def propose(self, game, k: int) -> list[AgentResponse]:
        resp = _respond(serialize_pair(solve_zero_sum_lp(game.matrix).pair), game.n)
        return [resp] * k


class NoisyOracleAgent:
    """Oracle pair plus seeded gaussian noise of scale sigma, re-projected.

    Sample s of game g perturbs with the stream keyed by
    child_seed(seed, int(game.id, 16), s); the raw (unprojected) weights are
    serialized so parsing does the projection, like model output.
    """

    def __init__(self, sigma: float, seed: int = 0):
        if sigma < 0:
            raise ContractViolation(f"noise scale must be >= 0, got {sigma}")
        self.sigma = float(sigma)
        self.seed = int(seed)
        self.name = f"noisy:{self.sigma:g}"

    def propose(self, game, k: int) -> list[AgentResponse]:
        pair = solve_zero_sum_lp(game.matrix).pair
        if self.sigma == 0.0:
            return [_respond(serialize_pair(pair), game.n)] * k
        out = []
        gid = int(game.id, 16)
        for s in range(k):
            rng = generator(child_seed(self.seed, gid, s))
            row = pair.row.probs + self.sigma * rng.standard_normal(game.n)
            col = pair.col.probs + self.sigma * rng.standard_normal(game.n)
            raw = json.dumps({"row": row.tolist(), "col": col.tolist()})
            out.append(_respond(raw, game.n))
        return out


class BlockSolverAgent:
    """Diagnostic fixture: solves the top-left block, zero-extends the pair.

    Emits an exact equilibrium whenever the game is a dominated pad of its
    top-left block and near-arbitrary strategies otherwise; used to show the
    padding-cliff harness separates its three conditions.
    """

    def __init__(self, block_n: int = 3):
        if block_n < 2:
            raise ContractViolation(f"block size must be >= 2, got {block_n}")
        self.block_n = block_n
        self.name = f"block:{block_n}"

    def propose(self, game, k: int) -> list[AgentResponse]:
        from .core import PayoffMatrix

        b = min(self.block_n, game.n)
        block = PayoffMatrix(game.matrix.entries[:b, :b])
        pair = solve_zero_sum_lp(block).pair
        row = np.zeros(game.n)
        row[:b] = pair.row.probs
        col = np.zeros(game.n)
        col[:b] = pair.col.probs
        raw = json.dumps({"row": row.tolist(), "col": col.tolist()})
        return [_respond(raw, game.n)] * k


def builtin_agent(kind: str, sigma: float = 0.0, seed: int = 0):
    """Factory for the built-in agents."""
    if kind == "uniform":
        return UniformAgent()
    if kind == "maximin":
        return MaximinAgent()
    if kind == "oracle":
        return OracleAgent()
    if kind in ("noisy_oracle", "noisy"):
        return NoisyOracleAgent(sigma=sigma, seed=seed)
    if kind == "block":
        return BlockSolverAgent()
    raise ConfigError(f"unknown builtin agent kind {kind!r}")


@dataclass(frozen=True)
class RemoteModelConfig:
    """Chat-completion endpoint settings for a remote model agent."""

    endpoint: str
    model: str
    temperature: float = 0.7
    max_tokens: int = 1024
    timeout: float = 30.0
    retries: int = 2
    auth_env: str = "ZEROSUM_API_TOKEN"
    max_inflight: int = 4

    def __post_init__(self):
        if not self.endpoint:
            raise ConfigError("remote config needs an endpoint URL")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")
        if self.max_inflight < 1:
            raise ConfigError("max_inflight must be >= 1")

    @classmethod
    def from_json_dict(cls, d: dict) -> "RemoteModelConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown remote config keys: {sorted(unknown)}")
        return cls(**d)


class RemoteModelAgent:
    """POSTs chat-completion requests; retries, audits, never aborts a run.

    Each sample issues {model, messages, temperature, max_tokens, n: 1};
    the bearer token is read from the env var named by config.auth_env. A
    semaphore caps in-flight requests when games are evaluated in parallel.
    Samples that exhaust their retry budget become invalid (malformed)
    responses and count toward transport_failures.
    """

    def __init__(self, config: RemoteModelConfig, template: PromptTemplate = DEFAULT_TEMPLATE,
                 audit_path: str | None = None):
        self.config = config
        self.template = template
        self.audit_path = audit_path
        self.name = f"remote:{config.model}"
        self.transport_failures = 0
        self.samples_attempted = 0
        self._sem = threading.Semaphore(config.max_inflight)
        self._lock = threading.Lock()

    def _audit(self, record: dict):
        if self.audit_path is None:
            return
        line = json.dumps(record, sort_keys=True)
        with self._lock:
            with open(self.audit_path, "a") as fh:
                fh.write(line + "\n")

    def _request(self, prompt: str) -> str:
        import requests

        headers = {}
        token = os.environ.get(self.config.auth_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
            "n": 1,
        }
        last_error = None
        for _ in range(self.config.retries + 1):
            try:
                with self._sem:
                    resp = requests.post(
                        self.config.endpoint, json=body, headers=headers,
                        timeout=self.config.timeout,
                    )
                if resp.status_code == 200:
                    return resp.json()["choices"][0]["message"]["content"]
                last_error = f"http {resp.status_code}"
            except (OSError, ValueError, KeyError, IndexError, TypeError) as exc:
                last_error = repr(exc)
        raise OSError(last_error or "transport failed")

    def propose(self, game, k: int) -> list[AgentResponse]:
        prompt = build_prompt(game, self.template)
        psha = prompt_digest(prompt)
        out = []
        for s in range(k):
            start = time.perf_counter()
            with self._lock:
                self.samples_attempted += 1
            try:
                text = self._request(prompt)
                resp = parse_response(text, game.n)
            except OSError:
                with self._lock:
                    self.transport_failures += 1
                resp = AgentResponse(raw_text="", parsed=None, parse_error="malformed")
            latency = time.perf_counter() - start
            resp = AgentResponse(
                raw_text=resp.raw_text, parsed=resp.parsed,
                parse_error=resp.parse_error, latency=latency,
            )
            self._audit(
                {
                    "game_id": game.id,
                    "sample_index": s,
                    "prompt_sha": psha,
                    "raw_text": resp.raw_text,
                    "parse_error": resp.parse_error,
                    "latency": latency,
                }
            )
            out.append(resp)
        return out


def remote_model_agent(
    config: RemoteModelConfig,
    template: PromptTemplate = DEFAULT_TEMPLATE,
    audit_path: str | None = None,
) -> RemoteModelAgent:
    return RemoteModelAgent(config, template=template, audit_path=audit_path)
