"""Opacity verification for partially observed discrete-event systems."""

from importlib import resources

from .automata import (
    SINK,
    Des,
    Event,
    EventTable,
    ObserverAutomaton,
    ProductState,
    accessible,
    full_observer_step,
    is_deterministic,
    language_equivalent,
    make_events,
    observer,
    product_step,
    project,
    unobservable_reach,
)
from .desfile import DesFormatError, parse_des, serialize_des
from .oracle import (
    GeneratorParams,
    OracleBounds,
    random_des,
    simulate_observation,
    strong_violation_search,
    validate_weak_witness,
    weak_violation_search,
)
from .strong import (
    NormalizationResult,
    ReductionResult,
    is_normal,
    normalize,
    reduce_to_weak,
    strong_to_weak,
    verify_strong,
)
from .weak import (
    INFINITE,
    KBound,
    Seed,
    Verdict,
    VerifyStats,
    Witness,
    bounded_bfs,
    compute_seeds,
    verify_current_state_opacity,
    verify_weak,
)

__version__ = "0.1.0"


def load_fixture(name: str) -> Des:
    """Load one of the bundled example systems (e.g. ``"fig5"``)."""
    path = resources.files(__package__) / "fixtures" / f"{name}.des"
    return parse_des(path.read_text())
