"""Explicit finite turn-based stochastic games.

A game is a finite indexed state space partitioned among players, with each
state carrying an ordered list of moves (action label, branch distribution,
price). States with no moves are deadlocks and must carry the ``deadlock``
label; the solver gives them reach probability 0 and infinite expected price.
"""

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import ModelError

Player = Union[int, str]

#: memoryless deterministic strategy: one chosen move label per owned state
MemorylessProfile = dict[int, str]

DEADLOCK_LABEL = "deadlock"

#: how tightly branch distributions must sum to one
MASS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Move:
    """One available move: label, branch distribution over states, price.

    `time` carries the delay component of a (delay, action) move and is used
    for deterministic tie-breaking; plain action moves leave it as None.
    """

    action: str
    branches: tuple[tuple[int, float], ...]
    price: float = 0.0
    time: int | None = None

    @property
    def label(self) -> str:
        if self.time is None:
            return self.action
        return f"({self.time},{self.action})"

    def sort_key(self) -> tuple[int, str]:
        return (self.time if self.time is not None else 0, self.action)


def parse_move_label(label: str) -> tuple[int | None, str]:
    """Split a ``(delay,action)`` label back into its parts."""
    if label.startswith("(") and label.endswith(")") and "," in label:
        head, _, tail = label[1:-1].partition(",")
        if head.isdigit():
            return int(head), tail
    return None, label


@dataclass(frozen=True)
class Tsg:
    """Explicit turn-based stochastic game over indexed states.

    `states` holds opaque per-state records (the digital semantics stores its
    own state objects there; imported games just keep indices). `owner[i]`
    is the player controlling state i, `moves[i]` its available moves in a
    fixed deterministic order, and `labels` names sets of states.
    """

    states: tuple
    initial: int
    players: tuple[Player, ...]
    owner: tuple[Player, ...]
    moves: tuple[tuple[Move, ...], ...]
    labels: Mapping[str, frozenset[int]]

    def __len__(self) -> int:
        return len(self.states)

    def available_actions(self, state: int) -> list[str]:
        """Labels of the moves available in `state`, in stored order."""
        if not 0 <= state < len(self.moves):
            raise ModelError(f"state index {state} out of range")
        return [m.label for m in self.moves[state]]

    def move(self, state: int, label: str) -> Move:
        for m in self.moves[state]:
            if m.label == label:
                return m
        raise ModelError(f"action {label!r} not available in state {state}")

    def label_states(self, name: str) -> frozenset[int]:
        if name not in self.labels:
            raise ModelError(f"unknown label {name!r}")
        return self.labels[name]

    @property
    def deadlocks(self) -> frozenset[int]:
        return self.labels.get(DEADLOCK_LABEL, frozenset())

    def player_states(self, player: Player) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.owner) if p == player)

    def validate(self) -> list[str]:
        """Check structural invariants, returning one diagnostic per violation."""
        issues: list[str] = []
        n = len(self.states)
        if not 0 <= self.initial < n:
            issues.append(f"initial state {self.initial} out of range")
        if len(self.owner) != n:
            issues.append(
                f"partition: owner map covers {len(self.owner)} of {n} states"
            )
        known = set(self.players)
        for i, player in enumerate(self.owner[:n]):
            if player not in known:
                issues.append(f"partition: state {i} owned by unknown player {player!r}")
        if len(self.moves) != n:
            issues.append(f"moves cover {len(self.moves)} of {n} states")
        flagged = self.labels.get(DEADLOCK_LABEL, frozenset())
        for i, moves in enumerate(self.moves[:n]):
            if not moves and i not in flagged:
                issues.append(f"state {i} has no moves and is not flagged as deadlock")
            seen = set()
            for m in moves:
                if m.label in seen:
                    issues.append(f"state {i}: duplicate action label {m.label!r}")
                seen.add(m.label)
                if m.price < 0:
                    issues.append(f"state {i}, action {m.label!r}: negative price")
                mass = 0.0
                for target, prob in m.branches:
                    if not 0 <= target < n:
                        issues.append(
                            f"state {i}, action {m.label!r}: branch to invalid state {target}"
                        )
                    if not 0.0 <= prob <= 1.0:
                        issues.append(
                            f"state {i}, action {m.label!r}: probability {prob} outside [0,1]"
                        )
                    mass += prob
                if abs(mass - 1.0) > MASS_TOLERANCE:
                    issues.append(
                        f"state {i}, action {m.label!r}: distribution mass {mass!r}"
                    )
        for name, members in self.labels.items():
            for i in members:
                if not 0 <= i < n:
                    issues.append(f"label {name!r} marks invalid state {i}")
        return issues


def coalition_game(game: Tsg, coalition: Iterable[Player]) -> Tsg:
    """Two-player view of `game`: the coalition becomes player 1, the rest player 2."""
    coalition = set(coalition)
    unknown = coalition - set(game.players)
    if unknown:
        raise ModelError(f"coalition contains unknown player(s) {sorted(map(str, unknown))}")
    owner = tuple(1 if p in coalition else 2 for p in game.owner)
    return Tsg(
        states=game.states,
        initial=game.initial,
        players=(1, 2),
        owner=owner,
        moves=game.moves,
        labels=game.labels,
    )


@dataclass
class TsgPath:
    """Alternating state/action sequence through a game, extendable in place."""

    game: Tsg
    states: list[int] = field(default_factory=list)
    actions: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.states:
            self.states = [self.game.initial]

    def __len__(self) -> int:
        """Number of transitions taken."""
        return len(self.actions)

    @property
    def last(self) -> int:
        return self.states[-1]

    def state(self, i: int) -> int:
        return self.states[i]

    def action(self, i: int) -> str:
        return self.actions[i]

    def prefix(self, k: int) -> "TsgPath":
        return TsgPath(self.game, self.states[: k + 1], self.actions[:k])

    def extend(self, action: str, target: int) -> "TsgPath":
        """Append one transition, checking availability and branch support."""
        move = self.game.move(self.last, action)
        if not any(t == target and p > 0 for t, p in move.branches):
            raise ModelError(
                f"state {target} is not a positive-probability successor of "
                f"state {self.last} under {action!r}"
            )
        self.states.append(target)
        self.actions.append(action)
        return self


def game_stats(game: Tsg) -> dict:
    """Size statistics: states, transitions, branches, per-player state counts."""
    per_player = {str(p): 0 for p in game.players}
    for p in game.owner:
        per_player[str(p)] += 1
    return {
        "states": len(game.states),
        "transitions": sum(len(ms) for ms in game.moves),
        "branches": sum(len(m.branches) for ms in game.moves for m in ms),
        "deadlocks": len(game.deadlocks),
        "player_states": per_player,
    }


def to_json_dict(game: Tsg) -> dict:
    """Serialize to the interchange schema (probabilities as decimal strings)."""
    labels_by_state: list[list[str]] = [[] for _ in game.states]
    for name in sorted(game.labels):
        for i in game.labels[name]:
            labels_by_state[i].append(name)
    states = [
        {"owner": game.owner[i], "labels": labels_by_state[i]}
        for i in range(len(game.states))
    ]
    transitions = []
    for i, moves in enumerate(game.moves):
        for m in moves:
            transitions.append(
                {
                    "from": i,
                    "action": m.label,
                    "price": m.price,
                    "branches": [
                        {"to": t, "prob": f"{p:.17g}"} for t, p in m.branches
                    ],
                }
            )
    return {"states": states, "initial": game.initial, "transitions": transitions}


def to_json(game: Tsg) -> str:
    return json.dumps(to_json_dict(game), indent=1)


def from_json_dict(data: dict) -> Tsg:
    try:
        state_records = data["states"]
        initial = data["initial"]
        raw_transitions = data["transitions"]
    except KeyError as missing:
        raise ModelError(f"game JSON is missing key {missing}") from None
    n = len(state_records)
    owner = tuple(record["owner"] for record in state_records)
    players = tuple(dict.fromkeys(owner))
    labels: dict[str, set[int]] = {}
    for i, record in enumerate(state_records):
        for name in record.get("labels", []):
            labels.setdefault(name, set()).add(i)
    moves: list[list[Move]] = [[] for _ in range(n)]
    for entry in raw_transitions:
        time, action = parse_move_label(entry["action"])
        branches = tuple(
            (b["to"], float(b["prob"])) for b in entry["branches"]
        )
        moves[entry["from"]].append(
            Move(action=action, branches=branches, price=float(entry.get("price", 0.0)), time=time)
        )
    return Tsg(
        states=tuple(range(n)),
        initial=initial,
        players=players,
        owner=owner,
        moves=tuple(tuple(ms) for ms in moves),
        labels={name: frozenset(members) for name, members in labels.items()},
    )


def from_json(text: str) -> Tsg:
    return from_json_dict(json.loads(text))


def make_game(
    moves: Sequence[Sequence[Move]],
    owner: Sequence[Player],
    labels: Mapping[str, Iterable[int]] | None = None,
    initial: int = 0,
    players: Sequence[Player] | None = None,
    auto_deadlock: bool = True,
) -> Tsg:
    """Assemble a game from per-state move lists; convenience for tests and tools."""
    n = len(moves)
    label_sets = {name: frozenset(v) for name, v in (labels or {}).items()}
    if auto_deadlock:
        silent = frozenset(i for i in range(n) if not moves[i])
        if silent:
            label_sets[DEADLOCK_LABEL] = label_sets.get(DEADLOCK_LABEL, frozenset()) | silent
    return Tsg(
        states=tuple(range(n)),
        initial=initial,
        players=tuple(players) if players is not None else tuple(dict.fromkeys(owner)),
        owner=tuple(owner),
        moves=tuple(tuple(ms) for ms in moves),
        labels=label_sets,
    )
