"""Equilibrium solving: the simplex route, the independent
support-enumeration route, and their agreement."""

import itertools

import numpy as np
import pytest

from zerosum import (
    ContractViolation,
    GameSpec,
    MixedStrategy,
    PayoffMatrix,
    StrategyPair,
    maximin_pure,
    raw_exploit,
    sample_game,
    solve_zero_sum_lp,
    support_enumeration,
    uniform_pair,
    verify_equilibrium,
)

MP = PayoffMatrix(np.array([[1.0, -1.0], [-1.0, 1.0]]))


def test_matching_pennies_interior_equilibrium():
    eq = solve_zero_sum_lp(MP)
    assert eq.value == pytest.approx(0.0, abs=1e-12)
    assert eq.pair.row.probs == pytest.approx([0.5, 0.5], abs=1e-12)
    assert eq.pair.col.probs == pytest.approx([0.5, 0.5], abs=1e-12)
    assert raw_exploit(MP, eq.pair) <= 1e-12
    assert eq.method == "lp"


def test_zero_matrix_returns_a_vertex_and_flags_degeneracy():
    eq = solve_zero_sum_lp(PayoffMatrix(np.zeros((2, 2))))
    assert np.array_equal(eq.pair.row.probs, np.array([1.0, 0.0]))
    assert np.array_equal(eq.pair.col.probs, np.array([1.0, 0.0]))
    assert eq.value == pytest.approx(0.0, abs=1e-12)
    assert eq.degenerate


def test_known_mixed_game():
    m = PayoffMatrix(np.array([[3.0, 0.0], [1.0, 2.0]]))
    eq = solve_zero_sum_lp(m)
    assert eq.value == pytest.approx(1.5, abs=1e-9)
    assert eq.pair.row.probs == pytest.approx([0.25, 0.75], abs=1e-9)
    assert eq.pair.col.probs == pytest.approx([0.5, 0.5], abs=1e-9)


def test_dominant_row_game():
    eq = solve_zero_sum_lp(PayoffMatrix(np.array([[1.0, 1.0], [0.0, 0.0]])))
    assert eq.value == pytest.approx(1.0, abs=1e-9)
    assert eq.pair.row.probs[0] == pytest.approx(1.0, abs=1e-9)


def test_saddle_point_game():
    eq = solve_zero_sum_lp(PayoffMatrix(np.array([[2.0, 1.0], [0.0, -1.0]])))
    assert eq.value == pytest.approx(1.0, abs=1e-9)
    assert eq.pair.row.probs == pytest.approx([1.0, 0.0], abs=1e-9)
    assert eq.pair.col.probs == pytest.approx([0.0, 1.0], abs=1e-9)


def test_all_2x2_integer_saddles_match_lp_value():
    vals = range(-2, 3)
    for a, b, c, d in itertools.product(vals, vals, vals, vals):
        m = np.array([[a, b], [c, d]], dtype=float)
        row_mins = m.min(axis=1)
        col_maxes = m.max(axis=0)
        if row_mins.max() == col_maxes.min():  # pure saddle exists
            eq = solve_zero_sum_lp(PayoffMatrix(m))
            assert eq.value == pytest.approx(row_mins.max(), abs=1e-9), m


def test_every_solution_certifies():
    rng = np.random.default_rng(21)
    for _ in range(300):
        n = int(rng.integers(2, 13))
        m = PayoffMatrix(rng.normal(size=(n, n)) * rng.uniform(0.2, 30))
        eq = solve_zero_sum_lp(m)
        assert raw_exploit(m, eq.pair) <= 1e-8
        assert verify_equilibrium(m, eq.pair)
        assert eq.iterations >= 0


def test_lp_agrees_with_support_enumeration():
    for seed in range(150):
        n = 2 + seed % 4  # sizes 2..5
        g = sample_game(GameSpec(n=n, distribution="integer", seed=seed))
        lp = solve_zero_sum_lp(g.matrix)
        se = support_enumeration(g.matrix)
        assert abs(lp.value - se.value) <= 1e-8
        assert raw_exploit(g.matrix, se.pair) <= 1e-8
        assert se.method == "support_enum"


def test_support_enumeration_rejects_large_games():
    with pytest.raises(ContractViolation):
        support_enumeration(PayoffMatrix(np.zeros((6, 6)) + np.eye(6)))


def test_duality_under_negated_transpose():
    rng = np.random.default_rng(22)
    for _ in range(100):
        n = int(rng.integers(2, 8))
        a = rng.normal(size=(n, n))
        v = solve_zero_sum_lp(PayoffMatrix(a)).value
        w = solve_zero_sum_lp(PayoffMatrix(-a.T)).value
        assert w == pytest.approx(-v, abs=1e-8)


def test_solver_is_bitwise_deterministic():
    rng = np.random.default_rng(23)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        m = PayoffMatrix(rng.normal(size=(n, n)))
        a = solve_zero_sum_lp(m)
        b = solve_zero_sum_lp(m)
        assert a.pair.row.probs.tobytes() == b.pair.row.probs.tobytes()
        assert a.pair.col.probs.tobytes() == b.pair.col.probs.tobytes()
        assert a.value == b.value and a.iterations == b.iterations
        sa = support_enumeration(m) if n <= 5 else None
        if sa is not None:
            sb = support_enumeration(m)
            assert sa.pair.row.probs.tobytes() == sb.pair.row.probs.tobytes()


def test_verify_equilibrium_rejects_non_equilibria():
    m = PayoffMatrix(np.array([[3.0, 0.0], [1.0, 2.0]]))
    assert not verify_equilibrium(m, uniform_pair(2))
    assert verify_equilibrium(MP, uniform_pair(2))


def test_maximin_pure_selection():
    m = PayoffMatrix(np.array([[3.0, 0.0], [1.0, 2.0]]))
    pair = maximin_pure(m)
    assert np.array_equal(pair.row.probs, np.array([0.0, 1.0]))
    assert np.array_equal(pair.col.probs, np.array([0.0, 1.0]))


def test_maximin_breaks_ties_toward_lowest_index():
    m = PayoffMatrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
    pair = maximin_pure(m)
    assert np.array_equal(pair.row.probs, np.array([1.0, 0.0]))
    assert np.array_equal(pair.col.probs, np.array([1.0, 0.0]))


def test_size_limit_enforced():
    big = np.zeros((65, 65))
    big[0, 0] = 1.0
    with pytest.raises(ContractViolation):
        solve_zero_sum_lp(PayoffMatrix(big))


def test_raw_exploit_handles_constant_matrices():
    m = PayoffMatrix(np.zeros((2, 2)))
    pair = StrategyPair(row=MixedStrategy(np.array([1.0, 0.0])),
                        col=MixedStrategy(np.array([1.0, 0.0])))
    assert raw_exploit(m, pair) == 0.0
