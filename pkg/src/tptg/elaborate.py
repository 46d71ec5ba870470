"""From parsed model text to a core timed game.

Elaboration resolves constants, folds bounded discrete variables into
location names (reachable combinations only), converts each component
automaton, composes the network with synchronization on shared action
names, assigns owners to product locations by first-matching pattern rule,
and materializes label extents.
"""

from collections import deque
from dataclasses import replace
from fnmatch import fnmatchcase
from fractions import Fraction

from .clocks import ClockConstraint, Atom
from .dsl import (
    Assign,
    AutomatonAst,
    GuardAtom,
    LabelAst,
    ModelSource,
    PropertyAst,
)
from .errors import ModelError
from .model import JOIN, PriceStructure, ProbBranch, StateLabel, Tptg, compose
from .solver import Objective


def _resolve_int(value, constants: dict[str, Fraction], what: str) -> int:
    if isinstance(value, int):
        return value
    if value not in constants:
        raise ModelError(f"{what}: unknown constant {value!r}")
    resolved = constants[value]
    if resolved.denominator != 1 or resolved < 0:
        raise ModelError(f"{what}: constant {value!r} is not a natural number")
    return int(resolved)


def _resolve_prob(value, constants: dict[str, Fraction]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if value not in constants:
        raise ModelError(f"unknown constant {value!r}")
    return constants[value]


def _clock_constraint(atoms: tuple[GuardAtom, ...], clocks: set[str], constants) -> ClockConstraint:
    converted = []
    for atom in atoms:
        if atom.subject in clocks:
            converted.append(
                Atom(atom.subject, atom.op, _resolve_int(atom.value, constants, f"atom on {atom.subject}"))
            )
    return ClockConstraint(tuple(converted))


def _var_atoms_hold(atoms, values: dict[str, int], constants) -> bool:
    for atom in atoms:
        if atom.subject not in values:
            continue
        bound = _resolve_int(atom.value, constants, f"atom on {atom.subject}")
        actual = values[atom.subject]
        ok = (
            actual <= bound if atom.op == "<=" else
            actual >= bound if atom.op == ">=" else
            actual == bound
        )
        if not ok:
            return False
    return True


def _apply_assigns(
    assigns: tuple[Assign, ...],
    values: dict[str, int],
    bounds: dict[str, tuple[int, int]],
    where: str,
) -> dict[str, int]:
    updated = dict(values)
    for assign in assigns:
        new = assign.offset if assign.base is None else values[assign.base] + assign.offset
        low, high = bounds[assign.variable]
        if not low <= new <= high:
            raise ModelError(
                f"{where}: update sets {assign.variable} to {new}, outside [{low}..{high}]"
            )
        updated[assign.variable] = new
    return updated


def _mangle(location: str, order: list[str], values: dict[str, int]) -> str:
    if not order:
        return location
    suffix = ",".join(f"{name}={values[name]}" for name in order)
    return f"{location}#{suffix}"


def unfold_automaton(
    auto: AutomatonAst,
    source: ModelSource,
    placeholder_player: str,
) -> Tptg:
    """Single-component timed game with discrete variables folded into locations.

    With variables present, only combinations reachable through the
    component's own edges are materialized (synchronization can only remove
    behaviour, so this over-approximates product reachability). The owner
    map is a placeholder; the network step assigns real owners.
    """
    constants = dict(source.constants)
    clocks = set(source.clocks)
    var_order = [v.name for v in auto.variables]
    bounds = {v.name: (v.low, v.high) for v in auto.variables}
    locdefs = {loc.name: loc for loc in auto.locations}

    initial_values = {v.name: v.init for v in auto.variables}
    initial = _mangle(auto.init, var_order, initial_values)

    if var_order:
        worklist = deque([(auto.init, tuple(initial_values[n] for n in var_order))])
        seen = {worklist[0]}
    else:
        worklist = deque((name, ()) for name in locdefs)
        seen = set(worklist)

    locations: list[str] = []
    invariants: dict[str, ClockConstraint] = {}
    enabling: dict[tuple[str, str], ClockConstraint] = {}
    transitions: dict[tuple[str, str], tuple[ProbBranch, ...]] = {}
    rates: dict[str, dict[str, int]] = {}
    action_prices: dict[str, dict[tuple[str, str], int]] = {}
    actions: list[str] = []

    while worklist:
        base, packed = worklist.popleft()
        values = dict(zip(var_order, packed))
        name = _mangle(base, var_order, values)
        locdef = locdefs[base]
        locations.append(name)
        invariants[name] = _clock_constraint(locdef.invariant, clocks, constants)
        for rate in locdef.rates:
            per_location = rates.setdefault(rate.structure, {})
            per_location[name] = per_location.get(name, 0) + rate.value
        for edge in locdef.edges:
            if not _var_atoms_hold(edge.guard, values, constants):
                continue
            if (name, edge.action) in transitions:
                raise ModelError(
                    f"automaton {auto.name!r}: location {base!r} has two edges "
                    f"labelled {edge.action!r}"
                )
            if edge.action not in actions:
                actions.append(edge.action)
            branches = []
            for branch in edge.branches:
                where = f"automaton {auto.name!r}, edge ({base!r}, {edge.action!r})"
                new_values = _apply_assigns(branch.assigns, values, bounds, where)
                target = _mangle(branch.target, var_order, new_values)
                key = (branch.target, tuple(new_values[n] for n in var_order))
                if key not in seen:
                    seen.add(key)
                    worklist.append(key)
                branches.append(
                    ProbBranch(
                        _resolve_prob(branch.prob, constants),
                        frozenset(branch.resets),
                        target,
                    )
                )
            enabling[(name, edge.action)] = _clock_constraint(edge.guard, clocks, constants)
            transitions[(name, edge.action)] = tuple(branches)
            for price in edge.prices:
                action_prices.setdefault(price.structure, {})[(name, edge.action)] = price.value

    structure_names = sorted(set(rates) | set(action_prices))
    prices = {
        n: PriceStructure(rates.get(n, {}), action_prices.get(n, {}))
        for n in structure_names
    }
    return Tptg(
        players=tuple(source.players),
        locations=tuple(locations),
        initial=initial,
        clocks=tuple(source.clocks),
        actions=tuple(actions),
        owner={loc: placeholder_player for loc in locations},
        invariants=invariants,
        enabling=enabling,
        transitions=transitions,
        prices=prices,
        labels={},
        clock_caps={},
    )


def _owner_for(rules, name: str) -> str:
    for rule in rules:
        if fnmatchcase(name, rule.pattern):
            return rule.player
    raise ModelError(
        f"owner rules do not cover location {name!r}; add a catch-all rule"
    )


def _variable_assignment(name: str) -> dict[str, int]:
    values: dict[str, int] = {}
    for part in name.split(JOIN):
        if "#" not in part:
            continue
        for item in part.split("#", 1)[1].split(","):
            var, _, value = item.partition("=")
            values[var] = int(value)
    return values


def _label_extent(label: LabelAst, locations, constants) -> frozenset[str]:
    extent = set()
    for name in locations:
        values = _variable_assignment(name)
        for clause in label.clauses:
            if not all(fnmatchcase(name, pattern) for pattern in clause.patterns):
                continue
            if all(
                atom.subject in values
                and _var_atoms_hold((atom,), values, constants)
                for atom in clause.var_atoms
            ):
                extent.add(name)
                break
    return frozenset(extent)


def to_tptg(source: ModelSource) -> Tptg:
    """Elaborate a parsed model into the composed timed game."""
    if not source.players:
        raise ModelError("model declares no players")
    declared_vars: set[str] = set()
    for auto in source.automata:
        for v in auto.variables:
            if v.name in declared_vars:
                raise ModelError(
                    f"variable {v.name!r} is declared by more than one automaton"
                )
            declared_vars.add(v.name)

    placeholder = source.players[0]
    components = [
        unfold_automaton(source.automaton(name), source, placeholder)
        for name in source.compose
    ]

    if len(components) == 1:
        network = components[0]
        owner = {
            loc: _owner_for(source.owners, loc) for loc in network.locations
        }
        network = replace(network, owner=owner)
    else:
        shared = source.clocks
        network = components[0]
        for component in components[1:-1]:
            network = compose(network, component, lambda la, lb: placeholder, shared)

        def final_owner(la: str, lb: str) -> str:
            return _owner_for(source.owners, f"{la}{JOIN}{lb}")

        network = compose(network, components[-1], final_owner, shared)

    constants = dict(source.constants)
    labels = {
        label.name: StateLabel(_label_extent(label, network.locations, constants))
        for label in source.labels
    }
    for label in source.labels:
        for clause in label.clauses:
            for atom in clause.var_atoms:
                if atom.subject not in declared_vars:
                    raise ModelError(
                        f"label {label.name!r} tests unknown variable {atom.subject!r}"
                    )
    return replace(network, labels=labels)


def resolve_property(prop: PropertyAst) -> tuple[Objective, tuple[str, ...], int | None]:
    """Map a parsed property to (objective, coalition, optional time bound)."""
    kind = "prob-reach" if prop.query[0] == "P" else "exp-price"
    direction = "maxmin" if prop.query.endswith("max") else "minmax"
    objective = Objective(kind, direction, prop.target, price=prop.price)
    return objective, prop.coalition, prop.bound


def describe_property(prop: PropertyAst) -> str:
    text = f"{prop.query}[F {prop.target}]"
    if prop.bound is not None:
        text += f"<={prop.bound}"
    if prop.price is not None:
        text += f" price {prop.price}"
    return text + " {" + ",".join(prop.coalition) + "}"
