import json
import tempfile
import unittest
from pathlib import Path

from opacity.data_models import Property, Verdict, Witness
from opacity.errors import InputError
from opacity.indicator import full_indicator_sequence
from opacity.model_io import (
    ModelDocument,
    dump_model,
    indicator_frame,
    load_model,
    load_pattern,
    observer_dot,
    parse_document,
    parse_model,
    parse_pattern,
    save_model,
    verdict_json,
)
from opacity.observer import build_observer

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

MINIMAL = """{
  "schema": "preopa-model/1",
  "events": [{"name": "a", "observable": true}, {"name": "u", "observable": false}],
  "states": ["0", "1"],
  "initial": ["0"],
  "secret": ["1"],
  "transitions": [
    {"from": "0", "event": "a", "to": "1"},
    {"from": "1", "event": "u", "to": "0"}
  ]
}"""


class TestParseModel(unittest.TestCase):
    def test_minimal_model(self):
        a = parse_model(MINIMAL)
        self.assertEqual(a.states, ("0", "1"))
        self.assertEqual(a.alphabet.observable, ("a",))
        self.assertEqual(a.transitions[("1", "u")], "0")
        self.assertIsNone(a.marked)

    def test_every_fixture_loads(self):
        for path in sorted(FIXTURES.glob("*.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            self.assertIn("comment", doc, path.name)
            load_model(path)

    def test_round_trip_is_stable(self):
        for name in ("g1", "g2", "coprime_cycles", "factory_system"):
            a = load_model(FIXTURES / f"{name}.json")
            again = parse_model(dump_model(a))
            self.assertEqual(again.states, a.states)
            self.assertEqual(again.alphabet, a.alphabet)
            self.assertEqual(dict(again.transitions), dict(a.transitions))
            self.assertEqual(again.initial, a.initial)
            self.assertEqual(again.secret, a.secret)
            self.assertEqual(dump_model(again), dump_model(a))

    def test_syntax_error_has_line_and_column(self):
        with self.assertRaises(InputError) as ctx:
            parse_model('{\n  "states": [\n}')
        [diagnostic] = ctx.exception.diagnostics
        self.assertRegex(diagnostic.location, r"^3:\d+$")

    def test_shape_errors_use_json_paths(self):
        doc = json.loads(MINIMAL)
        doc["events"][1] = {"name": "u"}
        doc["transitions"][0] = {"from": "0", "event": "a"}
        with self.assertRaises(InputError) as ctx:
            parse_model(json.dumps(doc))
        locations = [d.location for d in ctx.exception.diagnostics]
        self.assertEqual(locations, ["events[1].observable", "transitions[0]"])

    def test_duplicate_transition(self):
        doc = json.loads(MINIMAL)
        doc["transitions"].append({"from": "0", "event": "a", "to": "0"})
        with self.assertRaises(InputError) as ctx:
            parse_model(json.dumps(doc))
        self.assertIn("nondeterministic", str(ctx.exception))
        self.assertEqual(ctx.exception.diagnostics[0].location, "transitions[2]")

    def test_undeclared_state(self):
        doc = json.loads(MINIMAL)
        doc["secret"] = ["9"]
        with self.assertRaises(InputError) as ctx:
            parse_model(json.dumps(doc))
        self.assertEqual(ctx.exception.diagnostics[0].location, "secret")

    def test_wrong_schema_and_top_level(self):
        doc = json.loads(MINIMAL)
        doc["schema"] = "preopa-model/9"
        with self.assertRaises(InputError):
            parse_model(json.dumps(doc))
        with self.assertRaises(InputError):
            parse_model("[]")

    def test_missing_file(self):
        with self.assertRaises(InputError):
            load_model(FIXTURES / "does-not-exist.json")

    def test_document_keeps_comment(self):
        doc = parse_document(dump_model(parse_model(MINIMAL), comment="two states"))
        self.assertEqual(doc.comment, "two states")
        self.assertIsInstance(doc, ModelDocument)

    def test_save_model(self):
        a = parse_model(MINIMAL)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "model.json"
            save_model(a, path)
            self.assertEqual(dict(load_model(path).transitions), dict(a.transitions))


class TestParsePattern(unittest.TestCase):
    def test_factory_pattern(self):
        p = load_pattern(FIXTURES / "factory_pattern.json")
        self.assertEqual(p.initial, "A")
        self.assertEqual(p.marked, frozenset({"F", "G", "H"}))

    def test_pattern_requires_marked(self):
        with self.assertRaises(InputError) as ctx:
            parse_pattern(MINIMAL)
        self.assertEqual(ctx.exception.diagnostics[0].location, "marked")

    def test_pattern_requires_single_initial(self):
        doc = json.loads(MINIMAL)
        doc["marked"] = ["1"]
        doc["initial"] = ["0", "1"]
        with self.assertRaises(InputError):
            parse_pattern(json.dumps(doc))


class TestOutputs(unittest.TestCase):
    def test_verdict_json(self):
        verdict = Verdict(Property.INSTANT, 1, False, Witness(("c",), 1, frozenset({"2", "5"})))
        self.assertEqual(
            json.loads(verdict_json(verdict)),
            {
                "property": "instant-pre-opacity",
                "k": 1,
                "holds": False,
                "witness": {"alpha": ["c"], "n": 1, "estimate": ["2", "5"]},
                "bounded": False,
                "clamped_from": None,
            },
        )

    def test_observer_dot(self):
        obs = build_observer(load_model(FIXTURES / "g1.json"))
        dot = "".join(observer_dot(obs, name="g1"))
        self.assertTrue(dot.startswith('digraph "g1" {'))
        self.assertIn('q0 [shape=box label="{0}"];', dot)
        self.assertIn('q3 [shape=box label="{6, 7}"];', dot)
        self.assertIn('q2 -> q3 [label="c"];', dot)
        self.assertEqual(dot.count(" -> q"), 7)
        self.assertEqual(dot, "".join(observer_dot(build_observer(load_model(FIXTURES / "g1.json")), name="g1")))

    def test_indicator_frame(self):
        frame = indicator_frame(full_indicator_sequence(load_model(FIXTURES / "g1.json")))
        self.assertEqual(list(frame["indicator"]), ["{4, 7}", "{2, 5}", "{3}", "{1}", "{}", "{}"])
        self.assertEqual(frame["note"].iloc[4], "cycle start")
        self.assertEqual(frame["note"].iloc[5], "= ℑ_4")


if __name__ == "__main__":
    unittest.main()
