"""Coordination supervisory control of discrete-event systems under partial observation."""

__version__ = "0.1.0"

from descoord.automata import (
    AlphabetMismatch,
    Generator,
    accessible,
    empty_generator,
    equivalent,
    from_words,
    is_sublanguage,
    language_intersection,
    language_union,
    minimize,
    neutral_generator,
    prefix_closure,
    project,
    sync_product,
    trim,
)
from descoord.checks import (
    EmptySpecification,
    InclusionError,
    StateSpaceTooLarge,
    is_controllable,
    is_lm_closed,
    is_nonconflicting,
    is_normal,
    is_observable,
    is_relatively_observable,
    supervisor_exists,
)
from descoord.coordination import (
    CoordinationProblem,
    NotDecomposable,
    SupervisorRealization,
    SynthesisReport,
    extend_coordinator_alphabet,
    is_conditionally_c_observable,
    is_conditionally_closed,
    is_conditionally_controllable,
    is_conditionally_decomposable,
    is_conditionally_normal,
    is_conditionally_observable,
    is_conditionally_strong_c_observable,
    make_coordinator,
    realize_supervisors,
    synthesize_cc,
    synthesize_cro,
)
from descoord.events import EventTable
from descoord.synthesis import (
    FixpointNotReached,
    SupremalResult,
    SynthesisCancelled,
    sup_c_and_ro,
    sup_controllable,
    sup_relatively_observable,
)
from descoord.verdict import CompositeVerdict, Verdict, Witness
