"""Verification and strategy synthesis for turn-based probabilistic timed
games, analysed through their integer-time (digital clocks) semantics."""

from .clocks import Atom, ClockConstraint, ClockValuation, TRUE, clock_ge, clock_le, conjunction
from .errors import ModelError, ParseError, StateLimitError
from .game import (
    DEADLOCK_LABEL,
    MemorylessProfile,
    Move,
    Tsg,
    TsgPath,
    coalition_game,
    from_json,
    game_stats,
    make_game,
    to_json,
)
from .model import (
    Diagnostic,
    PriceStructure,
    ProbBranch,
    StateLabel,
    Tptg,
    compose,
    errors_only,
    max_constants,
    validate_assumptions,
    with_time_bound,
)
from .semantics import DigitalState, build, enumerate_moves, initial_state, reprice, state_index
from .solver import (
    Objective,
    SolveResult,
    bounded_expected_price,
    check_determinacy,
    expected_price,
    prob_reach,
    qualitative_reach,
    solve,
    synthesize,
)
from .oracle import brute_force_solve, chain_expected_prices, chain_reach_probabilities
from .digitization import (
    DigitalPath,
    TimedPath,
    accumulated_duration,
    digital_path_in_game,
    digitize_path,
    digitize_scalar,
    estimate,
    random_timed_path,
    simulate,
    uniform_profile,
)
from .dsl import ModelSource, parse, parse_property, print_model
from .elaborate import resolve_property, to_tptg
from .casestudies import (
    gen_nonrepudiation,
    gen_taskgraph,
    nonrepudiation_source,
    nonrepudiation_text,
    taskgraph_source,
    taskgraph_text,
)

__version__ = "0.1.0"
