import random
from fractions import Fraction

import pytest

import tptg
from tptg import (
    ClockConstraint,
    DigitalState,
    ModelError,
    StateLimitError,
    Tptg,
    clock_le,
    enumerate_moves,
    initial_state,
)

from gamegen import naive_digital_reach, random_tptg


def test_fig1_initial_moves(fig1_model):
    start = initial_state(fig1_model)
    moves = enumerate_moves(fig1_model, start)
    assert [(m.time, m.action) for m in moves] == [(1, "send"), (2, "send")]


def test_zero_delay_move_has_action_price_only():
    model = Tptg(
        players=("p",),
        locations=("a", "b"),
        initial="a",
        clocks=("x",),
        actions=("go",),
        owner={"a": "p", "b": "p"},
        invariants={"a": clock_le("x", 3), "b": clock_le("x", 3)},
        enabling={("a", "go"): ClockConstraint()},
        transitions={("a", "go"): (tptg.ProbBranch(Fraction(1), frozenset(), "b"),)},
        prices={"cost": tptg.PriceStructure(rates={"a": 5}, action_prices={("a", "go"): 7})},
    )
    moves = enumerate_moves(model, initial_state(model), price="cost")
    assert moves[0].time == 0 and moves[0].price == 7
    assert moves[1].time == 1 and moves[1].price == 5 + 7


def test_branch_aggregation_merges_equal_successors():
    # two reset sets produce the same valuation when y is already 0
    model = Tptg(
        players=("p",),
        locations=("a", "b"),
        initial="a",
        clocks=("x", "y"),
        actions=("go",),
        owner={"a": "p", "b": "p"},
        invariants={
            "a": clock_le("x", 2).conjoin(clock_le("y", 2)),
            "b": clock_le("x", 2).conjoin(clock_le("y", 2)),
        },
        enabling={("a", "go"): ClockConstraint()},
        transitions={
            ("a", "go"): (
                tptg.ProbBranch(Fraction(1, 3), frozenset({"x"}), "b"),
                tptg.ProbBranch(Fraction(2, 3), frozenset({"x", "y"}), "b"),
            )
        },
    )
    (zero_delay, *_rest) = enumerate_moves(model, initial_state(model))
    assert len(zero_delay.branches) == 1
    (successor, prob) = zero_delay.branches[0]
    assert prob == 1
    assert successor.valuation.as_dict() == {"x": 0, "y": 0}


def test_build_single_bounded_location_all_deadlocks():
    model = Tptg(
        players=("p",),
        locations=("a",),
        initial="a",
        clocks=("x",),
        actions=(),
        owner={"a": "p"},
        invariants={"a": clock_le("x", 2)},
        enabling={},
        transitions={},
    )
    game = tptg.build(model)
    # no moves at all: only the initial state is ever reached
    assert len(game.states) == 1
    assert game.deadlocks == frozenset({0})


def test_build_initial_state_and_nonempty(fig1_model, fig1_game):
    start = fig1_game.states[fig1_game.initial]
    assert isinstance(start, DigitalState)
    assert start.location == "send"
    assert start.valuation.as_dict() == {"x": 0, "y": 0}
    assert len(fig1_game.states) > 0


def test_build_is_order_stable(fig1_model):
    first = tptg.build(fig1_model)
    second = tptg.build(fig1_model)
    assert [s.location for s in first.states] == [s.location for s in second.states]
    assert first.moves == second.moves
    assert first.labels == second.labels


def test_build_refuses_assumption_violations():
    model = Tptg(
        players=("p",),
        locations=("a",),
        initial="a",
        clocks=("x",),
        actions=(),
        owner={"a": "p"},
        invariants={"a": ClockConstraint()},
        enabling={},
        transitions={},
    )
    with pytest.raises(ModelError):
        tptg.build(model)


def test_build_state_limit(fig1_model):
    with pytest.raises(StateLimitError):
        tptg.build(fig1_model, state_limit=5)


def test_every_state_satisfies_its_invariant(fig1_model, fig1_game):
    for state in fig1_game.states:
        assert state.valuation.satisfies(fig1_model.invariants[state.location])


def test_max_delay_bounded_by_ceilings(fig1_model, fig1_game):
    top = 1 + max(tptg.max_constants(fig1_model).values())
    for moves in fig1_game.moves:
        for move in moves:
            assert move.time <= top


def test_branch_mass_exact_in_rationals(fig1_model):
    for state in tptg.build(fig1_model).states:
        for move in enumerate_moves(fig1_model, state):
            assert sum((p for _, p in move.branches), Fraction(0)) == 1


def test_naive_enumerator_agrees_on_fig1(fig1_model, fig1_game):
    expected = naive_digital_reach(fig1_model)
    actual = {(s.location, s.valuation.values) for s in fig1_game.states}
    assert actual == expected


def test_naive_enumerator_agrees_on_faultless_taskgraph():
    model = tptg.gen_taskgraph(0, 0, 1)
    game = tptg.build(model)
    expected = naive_digital_reach(model)
    actual = {(s.location, s.valuation.values) for s in game.states}
    assert len(actual) == len(expected)
    assert actual == expected


def test_naive_enumerator_agrees_on_random_models():
    rng = random.Random(20240)
    for _ in range(25):
        model = random_tptg(rng)
        game = tptg.build(model)
        expected = naive_digital_reach(model)
        actual = {(s.location, s.valuation.values) for s in game.states}
        assert actual == expected


def test_reprice_swaps_price_structure():
    model = tptg.gen_taskgraph(0, 0, 1)
    timed = tptg.build(model, price="time")
    energetic = tptg.reprice(timed, model, "energy")
    assert len(energetic.states) == len(timed.states)
    rebuilt = tptg.build(model, price="energy")
    assert energetic.moves == rebuilt.moves


def test_variable_provenance_parsing(taskgraph_k1_p1):
    _, game = taskgraph_k1_p1
    start = game.states[game.initial]
    assert start.base_location == "decide0"
    variables = start.variables
    assert variables["st1"] == 0 and variables["free1"] == 1 and variables["nrun"] == 0
