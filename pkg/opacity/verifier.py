import logging
from enum import Enum

from opacity.automaton import validate
from opacity.data_models import Automaton, IndicatorSequence, Property, Verdict, Witness
from opacity.errors import InputError, PreconditionError
from opacity.indicator import full_indicator_sequence, n_k_set
from opacity.observer import build_observer, unobservable_reach

logger = logging.getLogger(__name__)

MAX_K = 2**31 - 1


class InstantWindow(Enum):
    """Which instants n >= K decide the instant verdict."""

    AUTO = "auto"  # SINGLE without unobservable events, CYCLE otherwise
    SINGLE = "single"  # {K}
    CYCLE = "cycle"  # K .. max(K, cycle start) + period - 1
    EXPONENTIAL = "exponential"  # K .. K + 2^|X| - 1


def _check_k(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int):
        raise InputError(f"K must be an integer, got {k!r}")
    if not 0 <= k <= MAX_K:
        raise InputError(f"K must lie in [0, {MAX_K}], got {k}")


def require_live(a: Automaton) -> None:
    report = validate(a)
    if not report.valid:
        raise InputError("automaton failed validation", report.dangling_references)
    if not report.live:
        dead = ", ".join(a.ordered(report.dead_states))
        raise PreconditionError(f"verification requires a live automaton; dead states: {dead}")


def saturation_bound(a: Automaton, seq: IndicatorSequence | None = None) -> int:
    """K beyond which the instant verdict no longer changes."""
    if seq is None:
        seq = full_indicator_sequence(a)
    return min(2 ** len(a.states) - 1, seq.first_repeat)


def _instants(a: Automaton, seq: IndicatorSequence, k: int, window: InstantWindow) -> range:
    if window is InstantWindow.AUTO:
        window = InstantWindow.CYCLE if a.has_unobservable else InstantWindow.SINGLE
    if window is InstantWindow.SINGLE:
        return range(k, k + 1)
    if window is InstantWindow.EXPONENTIAL:
        return range(k, k + 2 ** len(a.states))
    return seq.window(k)


def verify_instant(
    a: Automaton,
    k: int,
    window: InstantWindow = InstantWindow.AUTO,
    cap: int | None = None,
    prop: Property = Property.INSTANT,
) -> Verdict:
    """
    K-step instant pre-opacity: no reachable estimate may sit inside ℑ_n
    for an instant n >= K.

    `window` only decides the verdict. A violation is then located by
    sweeping the observer in BFS order against the cycle window, which
    covers every ℑ_n with n >= K, so the witness is the canonical shortest
    observation and, for it, the smallest instant, whatever the window.
    """
    _check_k(k)
    require_live(a)
    obs = build_observer(a, cap)
    seq = full_indicator_sequence(a)

    bound = saturation_bound(a, seq)
    effective, clamped_from = k, None
    if k > bound:
        effective, clamped_from = bound, k
        logger.debug("K=%d clamped to saturation bound %d", k, bound)

    def lifted(n: int) -> int:
        # ℑ is periodic from cycle_start <= bound <= n, so whole periods keep the set
        if n >= k:
            return n
        return n + -(-(k - n) // seq.cycle_length) * seq.cycle_length

    if window is not InstantWindow.CYCLE:
        decisive = [seq.at(n) for n in _instants(a, seq, effective, window)]
        if not any(q <= indicator for q in obs.states for indicator in decisive):
            return Verdict(prop, k, True, clamped_from=clamped_from)

    checks = [(n, seq.at(n)) for n in seq.window(effective)]
    for q in obs.states:
        hits = [lifted(n) for n, indicator in checks if q <= indicator]
        if hits:
            witness = Witness(obs.observation_of(q), min(hits), q)
            return Verdict(prop, k, False, witness, clamped_from=clamped_from)
    return Verdict(prop, k, True, clamped_from=clamped_from)


def verify_trajectory(
    a: Automaton,
    k: int,
    cap: int | None = None,
    prop: Property = Property.TRAJECTORY,
) -> Verdict:
    """K-step trajectory pre-opacity: every reachable estimate meets N_K."""
    _check_k(k)
    require_live(a)
    obs = build_observer(a, cap)
    nk = n_k_set(a, k)
    for q in obs.states:
        if q.isdisjoint(nk):
            return Verdict(prop, k, False, Witness(obs.observation_of(q), k, q))
    return Verdict(prop, k, True)


def verify_current_state_opacity(a: Automaton, cap: int | None = None) -> Verdict:
    """
    Current-state opacity against the standard estimator: each estimate is
    closed under unobservable reach before the subset test. The witness
    carries the observer estimate itself, which lies inside its closure.
    """
    report = validate(a)
    if not report.valid:
        raise InputError("automaton failed validation", report.dangling_references)
    obs = build_observer(a, cap)
    for q in obs.states:
        closed = unobservable_reach(a, q)
        if closed <= a.secret:
            logger.debug("closed estimate %s is all secret", sorted(closed))
            return Verdict(Property.CURRENT_STATE, None, False, Witness(obs.observation_of(q), 0, q))
    return Verdict(Property.CURRENT_STATE, None, True)
