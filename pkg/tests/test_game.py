import random

import pytest

import tptg
from tptg import ModelError, Move, TsgPath, coalition_game, make_game

from gamegen import random_game


def single_state_game():
    return make_game(
        [[Move("a", ((0, 1.0),))]],
        owner=[1],
        players=(1, 2),
    )


def test_available_actions_single_state():
    game = single_state_game()
    assert game.available_actions(0) == ["a"]


def test_deadlock_state_has_no_actions():
    game = make_game([[]], owner=[1], players=(1, 2))
    assert game.available_actions(0) == []
    assert 0 in game.deadlocks


def test_available_actions_bad_index():
    with pytest.raises(ModelError):
        single_state_game().available_actions(3)


def test_available_actions_fig1_initial(fig1_game):
    assert fig1_game.available_actions(fig1_game.initial) == ["(1,send)", "(2,send)"]


def test_coalition_full_and_empty():
    rng = random.Random(7)
    game = random_game(rng)
    everyone = coalition_game(game, set(game.players))
    assert set(everyone.owner) == {1}
    nobody = coalition_game(game, set())
    assert set(nobody.owner) == {2}


def test_coalition_unknown_player_rejected():
    with pytest.raises(ModelError):
        coalition_game(single_state_game(), {"nope"})


def test_coalition_idempotent_on_two_player_games():
    rng = random.Random(3)
    game = coalition_game(random_game(rng), {1})
    again = coalition_game(game, {1})
    assert again.owner == game.owner
    assert again.players == game.players


def test_coalition_counts_match_owner_map():
    model = tptg.gen_nonrepudiation("malicious1", p="1/10")
    game = tptg.build(model)
    two = coalition_game(game, {"O"})
    o_states = sum(1 for s in game.owner if s == "O")
    assert sum(1 for s in two.owner if s == 1) == o_states


def test_coalition_preserves_validity():
    rng = random.Random(11)
    for _ in range(20):
        game = random_game(rng)
        assert game.validate() == []
        assert coalition_game(game, {1}).validate() == []


def test_validate_reports_bad_mass_and_partition():
    game = make_game(
        [[Move("a", ((0, 0.5), (0, 0.4)))]],
        owner=[1],
        players=(1, 2),
    )
    issues = game.validate()
    assert any("mass" in issue for issue in issues)

    broken = tptg.Tsg(
        states=(0, 1),
        initial=0,
        players=(1, 2),
        owner=(1,),  # one state uncovered
        moves=((Move("a", ((1, 1.0),)),), ()),
        labels={"deadlock": frozenset({1})},
    )
    assert any("partition" in issue for issue in broken.validate())


def test_unflagged_deadlock_is_diagnosed():
    game = tptg.Tsg(
        states=(0,),
        initial=0,
        players=(1, 2),
        owner=(1,),
        moves=((),),
        labels={},
    )
    assert any("deadlock" in issue for issue in game.validate())


def test_json_round_trip():
    rng = random.Random(13)
    for _ in range(10):
        game = random_game(rng)
        back = tptg.from_json(tptg.to_json(game))
        assert len(back.states) == len(game.states)
        assert back.initial == game.initial
        assert back.owner == game.owner
        assert back.labels == game.labels
        for s in range(len(game.states)):
            orig = game.moves[s]
            copy = back.moves[s]
            assert [m.label for m in copy] == [m.label for m in orig]
            for a, b in zip(orig, copy):
                assert a.branches == b.branches  # decimal strings are exact
                assert a.price == b.price


def test_json_digital_labels_round_trip(fig1_game):
    back = tptg.from_json(tptg.to_json(fig1_game))
    assert back.labels == fig1_game.labels
    assert back.owner == fig1_game.owner


def test_path_validates_support():
    game = make_game(
        [[Move("a", ((1, 1.0),))], []],
        owner=[1, 1],
        players=(1, 2),
    )
    path = TsgPath(game)
    path.extend("a", 1)
    assert path.states == [0, 1]
    with pytest.raises(ModelError):
        TsgPath(game).extend("a", 0)  # not in the support
    with pytest.raises(ModelError):
        TsgPath(game).extend("b", 1)  # unavailable action


def test_game_stats(fig1_game):
    stats = tptg.game_stats(fig1_game)
    assert stats["states"] == len(fig1_game.states)
    assert stats["transitions"] == sum(len(ms) for ms in fig1_game.moves)
    assert set(stats["player_states"]) == {"sender", "medium"}
