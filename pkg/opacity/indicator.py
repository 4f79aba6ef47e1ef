"""
Reachability operators over state sets.

R_n is forward image in exactly n steps, F is the universal predecessor
(every defined transition lands inside), W is the existential predecessor.
Sets are handled as boolean masks over the dense successor table.
"""

import logging
from collections.abc import Iterable

import networkx as nx
import numpy as np

from opacity.automaton import from_mask, to_mask
from opacity.data_models import Automaton, IndicatorSequence, StateSet

logger = logging.getLogger(__name__)


def _image(table: np.ndarray, mask: np.ndarray) -> np.ndarray:
    targets = table[mask]
    targets = targets[targets >= 0]
    out = np.zeros(len(mask), dtype=bool)
    out[targets] = True
    return out


def _universal_pre(table: np.ndarray, mask: np.ndarray) -> np.ndarray:
    defined = table >= 0
    inside = np.where(defined, mask[table], True)
    return inside.all(axis=1)


def _existential_pre(table: np.ndarray, mask: np.ndarray) -> np.ndarray:
    defined = table >= 0
    return (defined & mask[table]).any(axis=1)


def reach_exact(a: Automaton, q: Iterable[str], n: int) -> StateSet:
    """R_n(q): states reachable from q by a defined string of length exactly n."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    table = a.successor_table
    mask = to_mask(a, q)
    for _ in range(n):
        if not mask.any():
            break
        mask = _image(table, mask)
    return from_mask(a, mask)


def f_operator(a: Automaton, q: Iterable[str]) -> StateSet:
    """F(q) = {x : every defined transition from x leads into q}."""
    return from_mask(a, _universal_pre(a.successor_table, to_mask(a, q)))


def w_operator(a: Automaton, q: Iterable[str]) -> StateSet:
    """W(q) = {x : some defined transition from x leads into q}."""
    return from_mask(a, _existential_pre(a.successor_table, to_mask(a, q)))


def indicator_sequence(a: Automaton, upto: int) -> IndicatorSequence:
    """
    Iterate F from X_S until a set repeats or ℑ_upto has been computed.

    On a repeat the sequence is eventually periodic and the cycle is
    recorded, so every later ℑ_n is resolved by index arithmetic.
    """
    if upto < 0:
        raise ValueError(f"upto must be non-negative, got {upto}")
    table = a.successor_table
    mask = to_mask(a, a.secret)
    sets = [from_mask(a, mask)]
    first_seen = {mask.tobytes(): 0}
    for n in range(1, upto + 1):
        mask = _universal_pre(table, mask)
        sets.append(from_mask(a, mask))
        key = mask.tobytes()
        if key in first_seen:
            start = first_seen[key]
            logger.debug("ℑ_%d repeats ℑ_%d (period %d)", n, start, n - start)
            return IndicatorSequence(tuple(sets), cycle_start=start, cycle_length=n - start)
        first_seen[key] = n
    return IndicatorSequence(tuple(sets))


def full_indicator_sequence(a: Automaton) -> IndicatorSequence:
    """ℑ sequence computed until its first repeat, which always exists."""
    seq = indicator_sequence(a, 2 ** len(a.states))
    assert seq.has_cycle
    return seq


def non_indicator_set(a: Automaton) -> StateSet:
    """
    N: non-secret states that reach, through non-secret states only, a cycle
    made of non-secret states (self-loops count).
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(x for x in a.states if x not in a.secret)
    for (source, _), target in a.transitions.items():
        if source in graph and target in graph:
            graph.add_edge(source, target)

    cyclic: set[str] = set()
    for component in nx.kosaraju_strongly_connected_components(graph):
        if len(component) > 1 or any(graph.has_edge(x, x) for x in component):
            cyclic |= component
    if not cyclic:
        return frozenset()

    reverse = graph.reverse(copy=True)
    sink = object()
    reverse.add_edges_from((sink, x) for x in cyclic)
    return frozenset(nx.descendants(reverse, sink))


def n_k_set(a: Automaton, k: int, non_indicator: StateSet | None = None) -> StateSet:
    """N_K = W^K(N); N ⊆ W(N) makes the iteration monotone, so it stops at a fixpoint."""
    if k < 0:
        raise ValueError(f"K must be non-negative, got {k}")
    table = a.successor_table
    mask = to_mask(a, non_indicator_set(a) if non_indicator is None else non_indicator)
    for _ in range(k):
        nxt = _existential_pre(table, mask)
        if np.array_equal(nxt, mask):
            break
        mask = nxt
    return from_mask(a, mask)
