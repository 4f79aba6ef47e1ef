import unittest
from pathlib import Path

from opacity.automaton import build_automaton, run, validate
from opacity.data_models import Alphabet, PatternSpec, Property
from opacity.errors import InputError
from opacity.model_io import load_model, load_pattern
from opacity.pattern import (
    complete_pattern_dfa,
    product,
    verify_pattern_instant,
    verify_pattern_trajectory,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def pattern(states, alphabet, transitions, marked, initial="p"):
    return PatternSpec(build_automaton(states, alphabet, transitions, [initial], marked=marked))


class TestPatternSpec(unittest.TestCase):
    def setUp(self):
        self.alphabet = Alphabet.of(["a"], ["u"])

    def test_requires_single_initial_state(self):
        dfa = build_automaton(["p", "q"], self.alphabet, [], ["p", "q"], marked=["q"])
        with self.assertRaises(InputError):
            PatternSpec(dfa)

    def test_requires_marked_set(self):
        dfa = build_automaton(["p"], self.alphabet, [], ["p"])
        with self.assertRaises(InputError):
            PatternSpec(dfa)

    def test_completion_adds_absorbing_dump(self):
        p = pattern(["p"], self.alphabet, [], ["p"])
        self.assertFalse(p.total)
        completed = complete_pattern_dfa(p)
        self.assertTrue(completed.total)
        self.assertEqual(completed.dfa.states, ("p", "dump"))
        self.assertEqual(completed.marked, frozenset({"p"}))
        self.assertEqual(completed.dfa.transitions[("p", "a")], "dump")
        self.assertEqual(completed.dfa.transitions[("dump", "u")], "dump")

    def test_completion_is_idempotent(self):
        p = complete_pattern_dfa(pattern(["p"], self.alphabet, [("p", "a", "p")], ["p"]))
        self.assertIs(complete_pattern_dfa(p), p)

    def test_dump_name_is_fresh(self):
        p = pattern(["p", "dump"], self.alphabet, [("p", "a", "dump")], ["dump"])
        completed = complete_pattern_dfa(p)
        self.assertIn("dump_", completed.dfa.states)
        self.assertNotIn("dump_", completed.marked)

    def test_completion_keeps_marked_language(self):
        p = pattern(["p", "q"], self.alphabet, [("p", "a", "q"), ("q", "u", "q")], ["q"])
        completed = complete_pattern_dfa(p)
        for word in (["a"], ["a", "u", "u"], ["u"], ["a", "a"], []):
            original = run(p.dfa, "p", word)
            accepted = original is not None and original in p.marked
            self.assertEqual(run(completed.dfa, "p", word) in completed.marked, accepted, word)


class TestFactoryProduct(unittest.TestCase):
    def setUp(self):
        self.system = load_model(FIXTURES / "factory_system.json")
        self.pattern = load_pattern(FIXTURES / "factory_pattern.json")

    def test_fixture_pattern_is_total(self):
        self.assertTrue(self.pattern.total)

    def test_product_secret_states(self):
        g = product(self.system, complete_pattern_dfa(self.pattern))
        self.assertEqual(len(g.states), 17)
        self.assertEqual(g.secret, frozenset({"(6,F)", "(8,H)"}))
        self.assertEqual(g.initial, frozenset({"(0,A)"}))
        self.assertEqual(g.alphabet, self.system.alphabet)
        self.assertTrue(validate(g).live)

    def test_pattern_marks_completions_since_last_a1(self):
        expected = {
            ("a2",): "A",
            ("a1", "b2"): "F",
            ("a1", "a6", "b2"): "G",
            ("a1", "a6", "b3"): "H",
            ("a1", "a6", "b3", "b2"): "G",
            ("a1", "b2", "b3"): "B",
            ("a1", "a6", "a1", "b3"): "B",
            ("a1", "a6", "a1", "b2"): "F",
        }
        for word, state in expected.items():
            reached = run(self.pattern.dfa, self.pattern.initial, list(word))
            self.assertEqual(reached, state, word)
            self.assertEqual(reached in self.pattern.marked, state in {"F", "G", "H"}, word)

    def test_instant_pattern_pre_opacity(self):
        violated = verify_pattern_instant(self.system, self.pattern, 1)
        self.assertFalse(violated.holds)
        self.assertEqual(violated.property, Property.PATTERN_INSTANT)
        self.assertEqual(violated.witness.alpha, ("a1", "a6"))
        self.assertEqual(violated.witness.n, 1)
        self.assertEqual(violated.witness.estimate, frozenset({"(7,C)"}))
        self.assertTrue(verify_pattern_instant(self.system, self.pattern, 2).holds)

    def test_trajectory_pattern_pre_opacity(self):
        violated = verify_pattern_trajectory(self.system, self.pattern, 1)
        self.assertFalse(violated.holds)
        self.assertEqual(violated.property, Property.PATTERN_TRAJECTORY)
        self.assertEqual(violated.witness.alpha, ("a1", "a6"))
        self.assertTrue(verify_pattern_trajectory(self.system, self.pattern, 2).holds)


class TestProductEdgeCases(unittest.TestCase):
    def setUp(self):
        self.alphabet = Alphabet.of(["a"], ["u"])
        self.system = build_automaton(
            ["0", "1"], self.alphabet, [("0", "a", "1"), ("1", "u", "0")], ["0"]
        )

    def test_alphabet_mismatch(self):
        p = pattern(["p"], Alphabet.of(["a"]), [("p", "a", "p")], ["p"])
        with self.assertRaises(InputError):
            product(self.system, p)
        with self.assertRaises(InputError):
            verify_pattern_instant(self.system, p, 0)

    def test_product_requires_total_pattern(self):
        p = pattern(["p"], self.alphabet, [], [])
        with self.assertRaises(InputError):
            product(self.system, p)

    def test_empty_pattern_holds(self):
        p = pattern(["p"], self.alphabet, [], [])
        for k in range(4):
            self.assertTrue(verify_pattern_instant(self.system, p, k).holds)
            self.assertTrue(verify_pattern_trajectory(self.system, p, k).holds)

    def test_universal_pattern_violated_immediately(self):
        p = pattern(["p"], self.alphabet, [("p", "a", "p"), ("p", "u", "p")], ["p"])
        g = product(self.system, p)
        self.assertEqual(g.secret, frozenset(g.states))
        verdict = verify_pattern_trajectory(self.system, p, 0)
        self.assertFalse(verdict.holds)
        self.assertEqual(verdict.witness.alpha, ())

    def test_product_keeps_system_language(self):
        p = complete_pattern_dfa(pattern(["p", "q"], self.alphabet, [("p", "a", "q")], ["q"]))
        g = product(self.system, p)
        for word in (["a"], ["a", "u"], ["a", "u", "a"], ["u"], ["a", "a"]):
            self.assertEqual(run(g, "(0,p)", word) is None, run(self.system, "0", word) is None, word)

    def test_product_secret_iff_pattern_accepts(self):
        p = complete_pattern_dfa(pattern(["p", "q"], self.alphabet, [("p", "a", "q"), ("q", "u", "p")], ["q"]))
        g = product(self.system, p)
        for word in (["a"], ["a", "u"], ["a", "u", "a"]):
            self.assertEqual(run(g, "(0,p)", word) in g.secret, run(p.dfa, "p", word) in p.marked, word)


if __name__ == "__main__":
    unittest.main()
