"""Optimal values and strategies for two-player explicit games.

Values are computed by Gauss-Seidel value iteration over binary64, with
graph-based qualitative precomputation pinning the certainly-0 and
certainly-1 states for reachability and the infinite states for expected
price. Synthesis extracts memoryless deterministic profiles and certifies
them by re-evaluating the induced chain.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import ModelError
from .game import Move, Tsg

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITERS = 10**6

#: slack for the monotonicity assertion on value-iteration sweeps
_MONOTONE_SLACK = 1e-9

KINDS = ("prob-reach", "exp-price", "bounded-exp-price")
DIRECTIONS = ("maxmin", "minmax")


@dataclass(frozen=True)
class Objective:
    """What to optimize: kind, direction, and target label.

    Direction fixes the goals of the two sides: under ``maxmin`` player 1
    maximizes the quantity and player 2 minimizes it; ``minmax`` swaps the
    roles. `horizon` applies to the bounded kind only; `price` records which
    price structure the game was built with (informational).
    """

    kind: str
    direction: str
    target: Union[str, frozenset]
    horizon: int | None = None
    price: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown objective kind {self.kind!r}")
        if self.direction not in DIRECTIONS:
            raise ModelError(f"unknown direction {self.direction!r}")
        if self.kind == "bounded-exp-price":
            if self.horizon is None or self.horizon < 0:
                raise ModelError("bounded objective needs a horizon n >= 0")

    def describe(self) -> str:
        text = f"{self.kind} {self.direction} -> {self.target}"
        if self.horizon is not None:
            text += f" within {self.horizon} steps"
        if self.price is not None:
            text += f" [price {self.price}]"
        return text


@dataclass
class SolveResult:
    objective: Objective
    values: list[float]
    initial_value: float
    iterations: int
    residual: float
    converged: bool
    strategy: dict[int, str] | None = None
    prob0: frozenset[int] | None = None
    prob1: frozenset[int] | None = None
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        target = self.objective.target
        return {
            "objective": {
                "kind": self.objective.kind,
                "direction": self.objective.direction,
                "target": target if isinstance(target, str) else sorted(target),
                "horizon": self.objective.horizon,
                "price": self.objective.price,
            },
            "value": self.initial_value,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "strategy": (
                None
                if self.strategy is None
                else [
                    {"state": s, "action": a}
                    for s, a in sorted(self.strategy.items())
                ]
            ),
        }


def _target_set(game: Tsg, targets: Union[str, Iterable[int]]) -> frozenset[int]:
    if isinstance(targets, str):
        return game.label_states(targets)
    return frozenset(targets)


def _check_two_players(game: Tsg):
    if len(game.players) != 2:
        raise ModelError(
            f"solver needs a two-player game (got players {list(game.players)}); "
            f"apply a coalition first"
        )


def _reach_maximizer(direction: str) -> int:
    """Index (0/1) into game.players of the side maximizing reach probability."""
    return 0 if direction == "maxmin" else 1


def _reverse_index(game: Tsg) -> list[list[tuple[int, int]]]:
    rev: list[list[tuple[int, int]]] = [[] for _ in game.states]
    for s, moves in enumerate(game.moves):
        for mi, move in enumerate(moves):
            for target, prob in move.branches:
                if prob > 0:
                    rev[target].append((s, mi))
    return rev


def positive_reach(game: Tsg, targets: frozenset[int], maximizer_states: frozenset[int]) -> frozenset[int]:
    """States from which the maximizer can reach the target with positive probability."""
    rev = _reverse_index(game)
    inside = set(targets)
    hit_moves: list[set[int]] = [set() for _ in game.states]
    queue = list(targets)
    while queue:
        t = queue.pop()
        for s, mi in rev[t]:
            if s in inside:
                continue
            hits = hit_moves[s]
            if mi in hits:
                continue
            hits.add(mi)
            if s in maximizer_states or len(hits) == len(game.moves[s]):
                # the minimizer only fails to avoid when every move can stray
                inside.add(s)
                queue.append(s)
    return frozenset(inside)


def almost_sure_reach(game: Tsg, targets: frozenset[int], maximizer_states: frozenset[int]) -> frozenset[int]:
    """States from which the maximizer can force the target with probability one.

    Greatest fixpoint over candidate sets X: inside X, grow from the target
    the states with a move that stays in X and makes progress (for the
    maximizer: some such move; for the minimizer: every move). Shrink X to
    that growth and repeat.
    """
    rev = _reverse_index(game)
    n = len(game.states)
    candidate = set(range(n))
    while True:
        move_ok: list[list[bool]] = []
        for s, moves in enumerate(game.moves):
            move_ok.append(
                [all(t in candidate for t, p in m.branches if p > 0) for m in moves]
            )
        grown = set(t for t in targets if t in candidate)
        satisfied: list[set[int]] = [set() for _ in range(n)]
        queue = list(grown)
        while queue:
            t = queue.pop()
            for s, mi in rev[t]:
                if s not in candidate or s in grown:
                    continue
                if not move_ok[s][mi]:
                    continue
                hits = satisfied[s]
                if mi in hits:
                    continue
                hits.add(mi)
                if s in maximizer_states:
                    grown.add(s)
                    queue.append(s)
                else:
                    moves = game.moves[s]
                    if moves and all(move_ok[s]) and len(hits) == len(moves):
                        grown.add(s)
                        queue.append(s)
        if grown == candidate:
            return frozenset(candidate)
        candidate = grown


def qualitative_reach(
    game: Tsg, targets: Union[str, Iterable[int]], direction: str = "maxmin"
) -> tuple[frozenset[int], frozenset[int]]:
    """Pure graph analysis: (probability-0 states, probability-1 states)."""
    _check_two_players(game)
    target_set = _target_set(game, targets)
    maximizer = game.players[_reach_maximizer(direction)]
    maximizer_states = game.player_states(maximizer)
    positive = positive_reach(game, target_set, maximizer_states)
    prob0 = frozenset(range(len(game.states))) - positive
    prob1 = almost_sure_reach(game, target_set, maximizer_states)
    return prob0, prob1


def _opt_for(game: Tsg, direction: str) -> list:
    """Per-state choice of max or min for the one-step backup."""
    player1 = game.players[0]
    if direction == "maxmin":
        return [max if p == player1 else min for p in game.owner]
    return [min if p == player1 else max for p in game.owner]


def prob_reach(
    game: Tsg,
    targets: Union[str, Iterable[int]],
    direction: str = "maxmin",
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> SolveResult:
    """Optimal probability of reaching the target under the given direction."""
    _check_two_players(game)
    target_set = _target_set(game, targets)
    objective = Objective("prob-reach", direction, _label_of(targets))
    prob0, prob1 = qualitative_reach(game, target_set, direction)
    values = [1.0 if s in prob1 else 0.0 for s in range(len(game.states))]
    active = [s for s in range(len(game.states)) if s not in prob0 and s not in prob1]
    opt = _opt_for(game, direction)

    warnings = _deadlock_warnings(game, target_set, "probability 0")
    iterations, residual, converged = _iterate(game, values, active, opt, tol, max_iters, prices=False)
    result = SolveResult(
        objective=objective,
        values=values,
        initial_value=values[game.initial],
        iterations=iterations,
        residual=residual,
        converged=converged,
        prob0=prob0,
        prob1=prob1,
        warnings=warnings,
    )
    if converged:
        p1, p2 = synthesize(game, objective, result, tol)
        result.strategy = {**p1, **p2}
    else:
        result.warnings.append("value iteration did not converge; no strategy synthesized")
    return result


def _zero_price_stall(
    game: Tsg,
    target_set: frozenset[int],
    region: frozenset[int],
    minimizer,
) -> frozenset[int]:
    """Largest target-free part of `region` where the price minimizer can
    force the play to stay forever along zero-price moves.

    Value iteration from zero cannot price such states correctly: sitting
    there looks free although the strict convention makes never reaching
    infinitely expensive.
    """
    inside = set(region) - set(target_set)
    for s in list(inside):
        if not game.moves[s]:
            inside.discard(s)

    def move_ok(s: int, move: Move) -> bool:
        if game.owner[s] == minimizer and move.price != 0:
            return False
        return all(t in inside for t, p in move.branches if p > 0)

    changed = True
    while changed:
        changed = False
        for s in list(inside):
            moves = game.moves[s]
            if game.owner[s] == minimizer:
                keep = any(move_ok(s, m) for m in moves)
            else:
                keep = all(move_ok(s, m) for m in moves)
            if not keep:
                inside.discard(s)
                changed = True
    return frozenset(inside)


def expected_price(
    game: Tsg,
    targets: Union[str, Iterable[int]],
    direction: str = "maxmin",
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> SolveResult:
    """Optimal expected price accumulated before reaching the target.

    States where the price-minimizing side cannot force the target almost
    surely get value infinity: a profile that leaves the target unreached
    with positive probability counts as infinitely expensive.

    Games where the minimizing side could cycle forever at price zero inside
    the almost-sure region are refused: their Bellman equation has several
    fixpoints and plain value iteration would silently undershoot.
    """
    _check_two_players(game)
    target_set = _target_set(game, targets)
    objective = Objective("exp-price", direction, _label_of(targets))
    # the side made to pay wants the target reached almost surely
    reach_direction = "minmax" if direction == "maxmin" else "maxmin"
    _, prob1 = qualitative_reach(game, target_set, reach_direction)
    minimizer = game.players[1 if direction == "maxmin" else 0]
    stalled = _zero_price_stall(game, target_set, prob1, minimizer)
    if stalled:
        raise ModelError(
            f"expected price is ill-posed here: the minimizing side can stall at "
            f"zero price in {len(stalled)} state(s) (e.g. state {min(stalled)}); "
            f"give the stalling moves positive prices"
        )

    n = len(game.states)
    values = [0.0 if s in prob1 else math.inf for s in range(n)]
    active = [s for s in range(n) if s in prob1 and s not in target_set]
    opt = _opt_for(game, direction)

    warnings = _deadlock_warnings(game, target_set, "infinite price")
    infinite = n - len(prob1)
    if infinite:
        warnings.append(
            f"{infinite} state(s) cannot be forced to reach the target almost surely; "
            f"their expected price is infinite"
        )
    iterations, residual, converged = _iterate(game, values, active, opt, tol, max_iters, prices=True)
    result = SolveResult(
        objective=objective,
        values=values,
        initial_value=values[game.initial],
        iterations=iterations,
        residual=residual,
        converged=converged,
        prob1=prob1,
        warnings=warnings,
    )
    if converged:
        p1, p2 = synthesize(game, objective, result, tol)
        result.strategy = {**p1, **p2}
    else:
        result.warnings.append("value iteration did not converge; no strategy synthesized")
    return result


def bounded_expected_price(
    game: Tsg,
    targets: Union[str, Iterable[int]],
    n: int,
    direction: str = "maxmin",
) -> list[float]:
    """Optimal expected price over exactly `n` backup steps (no tolerance)."""
    _check_two_players(game)
    if n < 0:
        raise ModelError("horizon must be non-negative")
    target_set = _target_set(game, targets)
    opt = _opt_for(game, direction)
    values = [0.0] * len(game.states)
    for _ in range(n):
        step = list(values)
        for s, moves in enumerate(game.moves):
            if s in target_set or not moves:
                continue
            step[s] = opt[s](
                m.price + sum(p * values[t] for t, p in m.branches) for m in moves
            )
        values = step
    return values


def _label_of(targets):
    # objectives carry either the label name or the explicit state set
    return targets if isinstance(targets, str) else frozenset(targets)


def _deadlock_warnings(game: Tsg, target_set: frozenset[int], treatment: str) -> list[str]:
    stuck = [s for s in range(len(game.states)) if not game.moves[s] and s not in target_set]
    if not stuck:
        return []
    return [f"{len(stuck)} non-target deadlock state(s) treated as {treatment}"]


def _iterate(
    game: Tsg,
    values: list[float],
    active: list[int],
    opt: list,
    tol: float,
    max_iters: int,
    prices: bool,
) -> tuple[int, float, bool]:
    """Gauss-Seidel sweeps in state order; returns (sweeps, residual, converged)."""
    moves = game.moves
    iterations = 0
    residual = math.inf
    while iterations < max_iters:
        iterations += 1
        residual = 0.0
        for s in active:
            old = values[s]
            if prices:
                new = opt[s](
                    m.price + sum(p * values[t] for t, p in m.branches)
                    for m in moves[s]
                )
            else:
                new = opt[s](
                    sum(p * values[t] for t, p in m.branches) for m in moves[s]
                )
            assert new >= old - _MONOTONE_SLACK, (
                f"non-monotone sweep at state {s}: {old} -> {new}"
            )
            if new != old:
                diff = new - old
                if diff > residual:
                    residual = diff
                values[s] = new
        if residual < tol:
            return iterations, residual, True
    return iterations, residual, False


def _backup(move: Move, values: list[float], prices: bool) -> float:
    total = move.price if prices else 0.0
    for t, p in move.branches:
        total += p * values[t]
    return total


def synthesize(
    game: Tsg,
    objective: Objective,
    values: Union[SolveResult, Sequence[float]],
    tol: float = DEFAULT_TOL,
) -> tuple[dict[int, str], dict[int, str]]:
    """Optimal memoryless deterministic profile pair extracted from values.

    Each state picks a one-step-optimal move; ties break towards the
    (delay, action)-smallest move, except that the side trying to reach the
    target prefers, among the optimal moves, one that makes progress towards
    it (otherwise a value-preserving loop could stall forever). The induced
    chain is re-solved and must reproduce the values within ``10 * tol``.
    """
    _check_two_players(game)
    if isinstance(values, SolveResult):
        if not values.converged:
            raise ModelError("refusing to synthesize from non-converged values")
        vector = values.values
    else:
        vector = list(values)
    if objective.kind not in ("prob-reach", "exp-price"):
        raise ModelError(f"no memoryless synthesis for kind {objective.kind!r}")
    prices = objective.kind == "exp-price"
    target_set = _target_set(game, objective.target)
    opt = _opt_for(game, objective.direction)

    # the reaching side: maximizer of probability, or payer of price
    if objective.kind == "prob-reach":
        reacher = game.players[_reach_maximizer(objective.direction)]
    else:
        reacher = game.players[1 if objective.direction == "maxmin" else 0]

    candidates: dict[int, list[Move]] = {}
    chosen: dict[int, Move] = {}
    for s, moves in enumerate(game.moves):
        if not moves:
            continue
        backups = [_backup(m, vector, prices) for m in moves]
        best = opt[s](backups)
        # converged values are only residual-accurate, so moves within that
        # slack of the optimum count as tied
        if math.isinf(best):
            tied = [m for m, b in zip(moves, backups) if b == best]
        else:
            slack = 2 * tol * max(1.0, abs(best))
            tied = [m for m, b in zip(moves, backups) if abs(b - best) <= slack]
        ordered = sorted(tied, key=Move.sort_key)
        if game.owner[s] == reacher and s not in target_set:
            candidates[s] = ordered
        else:
            chosen[s] = ordered[0]

    _settle_reachers(game, target_set, candidates, chosen)
    if prices:
        # at infinite-value states the avoider must witness the infinity:
        # steer towards the region it can keep target-free forever
        infinite = {s for s, v in enumerate(vector) if math.isinf(v)}
        avoider = game.players[0] if reacher == game.players[1] else game.players[1]
        for s, move in _avoidance_witness(game, target_set, avoider, infinite).items():
            chosen[s] = move

    profile1: dict[int, str] = {}
    profile2: dict[int, str] = {}
    for s, move in chosen.items():
        side = profile1 if game.owner[s] == game.players[0] else profile2
        side[s] = move.label

    _certify(game, objective, vector, {**profile1, **profile2}, tol)
    return profile1, profile2


def _settle_reachers(
    game: Tsg,
    target_set: frozenset[int],
    candidates: dict[int, list[Move]],
    chosen: dict[int, Move],
):
    """Pick progress-making optimal moves for the reaching side.

    Breadth-first from the target over the optimal-move structure: a state
    settles once one of its optimal moves can step onto an already-settled
    level. States that never settle (unreachable targets, infinite prices)
    fall back to the (delay, action)-smallest optimal move.
    """
    level: dict[int, int] = {t: 0 for t in target_set}
    frontier = set(target_set)
    rev: dict[int, list[int]] = {}
    for s in list(candidates) + list(chosen):
        moves = candidates.get(s) or [chosen[s]]
        for m in moves:
            for t, p in m.branches:
                if p > 0:
                    rev.setdefault(t, []).append(s)
    depth = 0
    while frontier:
        depth += 1
        touched = set()
        for t in frontier:
            for s in rev.get(t, ()):
                if s not in level:
                    touched.add(s)
        frontier = set()
        for s in sorted(touched):
            if s in candidates:
                for m in candidates[s]:
                    if any(p > 0 and level.get(t, depth + 1) < depth for t, p in m.branches):
                        chosen[s] = m
                        level[s] = depth
                        frontier.add(s)
                        break
            elif s in chosen and s not in level:
                m = chosen[s]
                if any(p > 0 and level.get(t, depth + 1) < depth for t, p in m.branches):
                    level[s] = depth
                    frontier.add(s)
    for s, moves in candidates.items():
        if s not in chosen:
            chosen[s] = moves[0]


def _avoidance_witness(
    game: Tsg,
    target_set: frozenset[int],
    avoider,
    infinite: set[int],
) -> dict[int, "Move"]:
    """Moves letting the avoider keep the target unreached with positive
    probability: inside the largest target-free trap it stays put, elsewhere
    in the infinite region it steers towards that trap."""
    if not infinite:
        return {}
    n = len(game.states)
    trap = set(range(n)) - set(target_set)
    shrinking = True
    while shrinking:
        shrinking = False
        for s in list(trap):
            moves = game.moves[s]
            if not moves:
                continue  # deadlocks never reach anything
            inside = [
                m for m in moves
                if all(t in trap for t, p in m.branches if p > 0)
            ]
            keep = bool(inside) if game.owner[s] == avoider else len(inside) == len(moves)
            if not keep:
                trap.discard(s)
                shrinking = True

    choice: dict[int, Move] = {}
    for s in trap:
        if game.owner[s] == avoider and s in infinite and game.moves[s]:
            choice[s] = sorted(
                (m for m in game.moves[s]
                 if all(t in trap for t, p in m.branches if p > 0)),
                key=Move.sort_key,
            )[0]

    # positive-probability attractor towards the trap
    level = set(trap)
    frontier = set(trap)
    while frontier:
        frontier = set()
        for s in range(n):
            if s in level or s in target_set:
                continue
            moves = game.moves[s]
            if not moves:
                continue
            stepping = [
                m for m in moves
                if any(p > 0 and t in level for t, p in m.branches)
            ]
            if game.owner[s] == avoider:
                if stepping:
                    if s in infinite:
                        choice[s] = sorted(stepping, key=Move.sort_key)[0]
                    frontier.add(s)
            elif len(stepping) == len(moves):
                frontier.add(s)
        level |= frontier
    return choice


def restrict_to_profile(game: Tsg, profile: dict[int, str]) -> Tsg:
    """Game where states in `profile` keep only their selected move."""
    new_moves = []
    for s, moves in enumerate(game.moves):
        if s in profile:
            new_moves.append(tuple(m for m in moves if m.label == profile[s]))
        else:
            new_moves.append(moves)
    return Tsg(
        states=game.states,
        initial=game.initial,
        players=game.players,
        owner=game.owner,
        moves=tuple(new_moves),
        labels=game.labels,
    )


def _chain_reachable(game: Tsg, profile: dict[int, str]) -> list[int]:
    seen = {game.initial}
    stack = [game.initial]
    while stack:
        s = stack.pop()
        if s not in profile:
            continue
        for move in game.moves[s]:
            if move.label != profile[s]:
                continue
            for t, p in move.branches:
                if p > 0 and t not in seen:
                    seen.add(t)
                    stack.append(t)
    return sorted(seen)


def _certify(
    game: Tsg,
    objective: Objective,
    vector: Sequence[float],
    profile: dict[int, str],
    tol: float,
):
    # Optimality holds along the play the profile pair actually induces;
    # off-path states with infinite value keep arbitrary recorded choices.
    chain = restrict_to_profile(game, profile)
    target = objective.target
    if objective.kind == "prob-reach":
        check = prob_reach_values_only(chain, target, objective.direction, tol)
    else:
        check = expected_price_values_only(chain, target, objective.direction, tol)
    worst = 0.0
    for s in _chain_reachable(game, profile):
        a, b = vector[s], check[s]
        if math.isinf(a) and math.isinf(b):
            continue
        worst = max(worst, abs(a - b))
    if worst > 10 * tol:
        raise ModelError(
            f"synthesized profile fails its optimality certificate: induced chain "
            f"deviates by {worst:.3e} (> {10 * tol:.1e})"
        )


def prob_reach_values_only(game, targets, direction, tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS):
    """Reach probabilities without synthesis (used for certificates)."""
    target_set = _target_set(game, targets)
    prob0, prob1 = qualitative_reach(game, target_set, direction)
    values = [1.0 if s in prob1 else 0.0 for s in range(len(game.states))]
    active = [s for s in range(len(game.states)) if s not in prob0 and s not in prob1]
    _iterate(game, values, active, _opt_for(game, direction), tol, max_iters, prices=False)
    return values


def expected_price_values_only(game, targets, direction, tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS):
    """Expected prices without synthesis (used for certificates)."""
    target_set = _target_set(game, targets)
    reach_direction = "minmax" if direction == "maxmin" else "maxmin"
    _, prob1 = qualitative_reach(game, target_set, reach_direction)
    values = [0.0 if s in prob1 else math.inf for s in range(len(game.states))]
    active = [s for s in range(len(game.states)) if s in prob1 and s not in target_set]
    _iterate(game, values, active, _opt_for(game, direction), tol, max_iters, prices=True)
    return values


def solve(game: Tsg, objective: Objective, tol: float = DEFAULT_TOL, max_iters: int = DEFAULT_MAX_ITERS) -> SolveResult:
    """Dispatch on the objective kind."""
    if objective.kind == "prob-reach":
        return prob_reach(game, objective.target, objective.direction, tol, max_iters)
    if objective.kind == "exp-price":
        return expected_price(game, objective.target, objective.direction, tol, max_iters)
    values = bounded_expected_price(game, objective.target, objective.horizon, objective.direction)
    return SolveResult(
        objective=objective,
        values=values,
        initial_value=values[game.initial],
        iterations=objective.horizon,
        residual=0.0,
        converged=True,
    )


def check_determinacy(
    game: Tsg,
    targets: Union[str, Iterable[int]],
    kind: str = "prob-reach",
    direction: str = "maxmin",
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> tuple[float, float]:
    """Certified bracket around the game value at the initial state.

    Solves the game, extracts an optimal profile pair, then re-solves twice
    with one side pinned to its strategy while the other optimizes freely.
    The pinned-coalition value is what that side can guarantee, so the pair
    brackets both optimization orders; a gap below ``2 * tol`` certifies
    determinacy and strategy optimality at this accuracy.
    """
    _check_two_players(game)
    target_set = _target_set(game, targets)
    if kind == "prob-reach":
        runner = prob_reach
    elif kind == "exp-price":
        runner = expected_price
    else:
        raise ModelError(f"determinacy check supports prob-reach and exp-price, not {kind!r}")
    result = runner(game, target_set, direction, tol, max_iters)
    if not result.converged:
        raise ModelError("determinacy check needs a converged solve")
    profile1 = {
        s: a for s, a in result.strategy.items() if game.owner[s] == game.players[0]
    }
    profile2 = {
        s: a for s, a in result.strategy.items() if game.owner[s] == game.players[1]
    }
    guaranteed1 = runner(
        restrict_to_profile(game, profile1), target_set, direction, tol, max_iters
    ).initial_value
    guaranteed2 = runner(
        restrict_to_profile(game, profile2), target_set, direction, tol, max_iters
    ).initial_value
    # With player 1 pinned, the free opponent drives the value to player 1's
    # guarantee (the pessimistic optimization order); pinning player 2 gives
    # the optimistic one. Return (pessimistic, optimistic) for player 1.
    if direction == "maxmin":
        return guaranteed1, guaranteed2
    return guaranteed2, guaranteed1
