"""Deterministic randomness: one counter-based generator, one splitting rule.

Every random draw in the toolkit flows through a numpy Philox bit generator
(counter-based, 64-bit words) keyed directly with a 64-bit seed, so streams
are reproducible across platforms and independent of numpy's SeedSequence.

Child seeds are derived with a splitmix64 chain::

    child_seed(root, a, b, ...) = h_k   where   h_0 = root,
    h_{i+1} = splitmix64(h_i XOR (part_i * GOLDEN mod 2^64))

GOLDEN is the splitmix64 increment 0x9E3779B97F4A7C15. The rule is part of
the serialization contract: eval sets derive game i at size n from
(eval_seed, n, i), so any single game can be regenerated alone.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 output step (Steele, Lea & Flood's finalizer)."""
    x = (x + GOLDEN) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def child_seed(root: int, *parts: int) -> int:
    """Derive a 64-bit child seed from a root and an integer path."""
    h = root & _MASK
    for p in parts:
        h = splitmix64(h ^ ((int(p) * GOLDEN) & _MASK))
    return h


def generator(seed: int) -> np.random.Generator:
    """Philox generator keyed with the given 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & _MASK))


def standard_normal(rng: np.random.Generator, count: int) -> np.ndarray:
    """Box-Muller standard normals from the uniform stream.

    Draws ceil(count/2) uniform pairs (u1, u2) in [0,1), maps them through
    z0 = sqrt(-2 ln(1-u1)) cos(2 pi u2), z1 = sqrt(-2 ln(1-u1)) sin(2 pi u2),
    and interleaves (z0_0, z1_0, z0_1, ...) truncated to count values. The
    transform is fixed here so the byte stream does not depend on numpy's
    internal normal sampler.
    """
    pairs = (count + 1) // 2
    u = rng.random((pairs, 2))
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    theta = 2.0 * np.pi * u[:, 1]
    out = np.empty(pairs * 2)
    out[0::2] = r * np.cos(theta)
    out[1::2] = r * np.sin(theta)
    return out[:count]
