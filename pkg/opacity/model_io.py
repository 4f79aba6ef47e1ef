"""
Model documents, verdict JSON and DOT export.

A model is one JSON object:

    {"schema": "preopa-model/1", "comment": "...",
     "events": [{"name": "a", "observable": true}, ...],
     "states": ["0", "1", ...], "initial": ["0"], "secret": ["4"],
     "marked": [...],                      # patterns only
     "transitions": [{"from": "0", "event": "a", "to": "1"}, ...]}
"""

import json
import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from opacity.automaton import build_automaton
from opacity.data_models import (
    Automaton,
    Event,
    IndicatorSequence,
    Observer,
    PatternSpec,
    StateSet,
    Verdict,
    sorted_states,
)
from opacity.errors import Diagnostic, InputError

logger = logging.getLogger(__name__)

SCHEMA = "preopa-model/1"


@dataclass
class ModelDocument:
    events: list[Event]
    states: list[str]
    initial: list[str]
    secret: list[str] = field(default_factory=list)
    transitions: list[tuple[str, str, str]] = field(default_factory=list)
    marked: list[str] | None = None
    comment: str | None = None

    @classmethod
    def from_dict(cls, data: object) -> "ModelDocument":
        """Shape-check a decoded document, collecting one diagnostic per problem."""
        if not isinstance(data, dict):
            raise InputError("invalid model", [Diagnostic("$", "top level must be an object")])
        problems: list[Diagnostic] = []

        schema = data.get("schema", SCHEMA)
        if schema != SCHEMA:
            problems.append(Diagnostic("schema", f"unsupported schema {schema!r}, expected {SCHEMA!r}"))
        comment = data.get("comment")
        if comment is not None and not isinstance(comment, str):
            problems.append(Diagnostic("comment", "must be a string"))
            comment = None

        events: list[Event] = []
        raw_events = data.get("events")
        if not isinstance(raw_events, list):
            problems.append(Diagnostic("events", "required list of {name, observable} objects"))
        else:
            for i, item in enumerate(raw_events):
                where = f"events[{i}]"
                if not isinstance(item, dict):
                    problems.append(Diagnostic(where, "must be an object"))
                    continue
                name, observable = item.get("name"), item.get("observable")
                if not isinstance(name, str):
                    problems.append(Diagnostic(f"{where}.name", "required string"))
                elif not isinstance(observable, bool):
                    problems.append(Diagnostic(f"{where}.observable", "required boolean"))
                else:
                    events.append(Event(name, observable))

        def names(key: str, required: bool) -> list[str] | None:
            value = data.get(key)
            if value is None:
                if required:
                    problems.append(Diagnostic(key, "required list of state names"))
                return None
            if not isinstance(value, list):
                problems.append(Diagnostic(key, "must be a list of state names"))
                return None
            for i, item in enumerate(value):
                if not isinstance(item, str):
                    problems.append(Diagnostic(f"{key}[{i}]", "must be a string"))
            return [item for item in value if isinstance(item, str)]

        states = names("states", required=True) or []
        initial = names("initial", required=True) or []
        secret = names("secret", required=False) or []
        marked = names("marked", required=False)

        transitions: list[tuple[str, str, str]] = []
        raw_transitions = data.get("transitions", [])
        if not isinstance(raw_transitions, list):
            problems.append(Diagnostic("transitions", "must be a list of {from, event, to} objects"))
        else:
            for i, item in enumerate(raw_transitions):
                where = f"transitions[{i}]"
                if not isinstance(item, dict):
                    problems.append(Diagnostic(where, "must be an object"))
                    continue
                triple = (item.get("from"), item.get("event"), item.get("to"))
                missing = [k for k, v in zip(("from", "event", "to"), triple) if not isinstance(v, str)]
                if missing:
                    problems.append(Diagnostic(where, f"missing or non-string {', '.join(missing)}"))
                    continue
                transitions.append(triple)

        if problems:
            raise InputError("invalid model", problems)
        return cls(events, states, initial, secret, transitions, marked, comment)

    def to_automaton(self) -> Automaton:
        return build_automaton(
            self.states, self.events, self.transitions, self.initial, self.secret, self.marked
        )

    @classmethod
    def from_automaton(cls, a: Automaton, comment: str | None = None) -> "ModelDocument":
        transitions = [(x, event, y) for x in a.states for event, y in a.outgoing(x)]
        return cls(
            events=list(a.alphabet.events),
            states=list(a.states),
            initial=a.ordered(a.initial),
            secret=a.ordered(a.secret),
            transitions=transitions,
            marked=None if a.marked is None else a.ordered(a.marked),
            comment=comment,
        )

    def to_dict(self) -> dict:
        doc: dict = {"schema": SCHEMA}
        if self.comment is not None:
            doc["comment"] = self.comment
        doc["events"] = [{"name": e.name, "observable": e.observable} for e in self.events]
        doc["states"] = list(self.states)
        doc["initial"] = list(self.initial)
        doc["secret"] = list(self.secret)
        if self.marked is not None:
            doc["marked"] = list(self.marked)
        doc["transitions"] = [{"from": x, "event": e, "to": y} for x, e, y in self.transitions]
        return doc


def _decode(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError("malformed JSON", [Diagnostic(f"{e.lineno}:{e.colno}", e.msg)]) from e


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e


def parse_document(text: str) -> ModelDocument:
    return ModelDocument.from_dict(_decode(text))


def parse_model(text: str) -> Automaton:
    return parse_document(text).to_automaton()


def load_model(path: str | Path) -> Automaton:
    a = parse_model(_read(path))
    logger.debug("loaded %s: %d states, %d events", path, len(a.states), len(a.alphabet))
    return a


def parse_pattern(text: str) -> PatternSpec:
    doc = parse_document(text)
    if doc.marked is None:
        raise InputError("invalid pattern", [Diagnostic("marked", "a pattern document requires \"marked\"")])
    return PatternSpec(doc.to_automaton())


def load_pattern(path: str | Path) -> PatternSpec:
    return parse_pattern(_read(path))


def dump_model(a: Automaton, comment: str | None = None) -> str:
    return json.dumps(ModelDocument.from_automaton(a, comment).to_dict(), indent=2, ensure_ascii=False) + "\n"


def save_model(a: Automaton, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(dump_model(a, comment), encoding="utf-8")


def verdict_json(verdict: Verdict) -> str:
    return json.dumps(verdict.to_dict(), ensure_ascii=False)


def format_state_set(q: StateSet) -> str:
    return "{" + ", ".join(sorted_states(q)) + "}"


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def observer_dot(obs: Observer, name: str = "observer") -> Iterator[str]:
    """
    Yield DOT lines for the observer graph. Nodes are numbered in BFS order
    and labelled with the sorted estimate, so output is stable across runs.
    """
    ids = {q: f"q{i}" for i, q in enumerate(obs.states)}
    yield f"digraph {_gvquote(name)} {{\n"
    yield "  rankdir=LR;\n"
    yield '  init [shape=point label=""];\n'
    for q in obs.states:
        yield f"  {ids[q]} [shape=box label={_gvquote(format_state_set(q))}];\n"
    yield f"  init -> {ids[obs.initial]};\n"
    for q in obs.states:
        for event in obs.events:
            target = obs.successor(q, event)
            if target is not None:
                yield f"  {ids[q]} -> {ids[target]} [label={_gvquote(event)}];\n"
    yield "}\n"


def indicator_frame(seq: IndicatorSequence) -> pd.DataFrame:
    """One row per stored ℑ_n, marking where the cycle starts and repeats."""
    rows = []
    for n, q in enumerate(seq.sets):
        note = ""
        if seq.has_cycle and n == seq.cycle_start:
            note = "cycle start"
        if seq.has_cycle and n == seq.first_repeat:
            note = f"= ℑ_{seq.cycle_start}"
        rows.append({"n": n, "indicator": format_state_set(q), "note": note})
    return pd.DataFrame(rows, columns=["n", "indicator", "note"])
