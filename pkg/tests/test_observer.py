import os
import random
import unittest
from pathlib import Path
from unittest.mock import patch

from opacity import config
from opacity.automaton import build_automaton
from opacity.data_models import Alphabet
from opacity.errors import InputError, QueryError, ResourceError
from opacity.model_io import load_model
from opacity.observer import build_observer, estimate, observer_step, unobservable_reach
from oracle.definitions import OracleBudget, oracle_estimate
from oracle.random_automata import GeneratorParams, generate_random

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def states(*names):
    return frozenset(names)


class TestObserverStep(unittest.TestCase):
    def setUp(self):
        self.g1 = load_model(FIXTURES / "g1.json")

    def test_step_uses_unobservable_prefix_only(self):
        self.assertEqual(observer_step(self.g1, states("0"), "a"), states("2", "3"))

    def test_step_without_match_is_empty(self):
        self.assertEqual(observer_step(self.g1, states("0"), "c"), frozenset())

    def test_step_rejects_unobservable_event(self):
        with self.assertRaises(InputError):
            observer_step(self.g1, states("0"), "u")

    def test_unobservable_reach(self):
        self.assertEqual(unobservable_reach(self.g1, states("0")), states("0", "1"))
        self.assertEqual(unobservable_reach(self.g1, states("6")), states("6"))

    def test_fully_observable_step_is_pointwise(self):
        a = build_automaton(
            ["0", "1", "2"],
            Alphabet.of(["a", "b"]),
            [("0", "a", "1"), ("1", "a", "2"), ("2", "b", "0")],
            ["0"],
        )
        self.assertEqual(observer_step(a, states("0", "1"), "a"), states("1", "2"))


class TestBuildObserver(unittest.TestCase):
    def setUp(self):
        self.g1 = load_model(FIXTURES / "g1.json")
        self.obs = build_observer(self.g1)

    def test_g1_observer_states_in_bfs_order(self):
        self.assertEqual(
            self.obs.states,
            (states("0"), states("2", "3"), states("4", "5"), states("6", "7"), states("6")),
        )

    def test_g1_observer_transitions(self):
        expected = {
            (states("0"), "a"): states("2", "3"),
            (states("2", "3"), "b"): states("4", "5"),
            (states("4", "5"), "c"): states("6", "7"),
            (states("6", "7"), "a"): states("6"),
            (states("6", "7"), "b"): states("6"),
            (states("6"), "a"): states("6"),
        }
        self.assertEqual(dict(self.obs.transitions), expected)

    def test_initial_estimate_has_no_unobservable_closure(self):
        self.assertEqual(self.obs.initial, states("0"))

    def test_canonical_observations(self):
        self.assertEqual(self.obs.observation_of(states("6")), ("a", "b", "c", "a"))
        for q in self.obs.states:
            self.assertEqual(estimate(self.obs, self.obs.observation_of(q)), q)
            self.assertLess(len(self.obs.observation_of(q)), len(self.obs))

    def test_estimates_from_worked_example(self):
        self.assertEqual(estimate(self.obs, []), states("0"))
        self.assertEqual(estimate(self.obs, ["a", "b"]), states("4", "5"))
        self.assertEqual(estimate(self.obs, ["a", "b", "c"]), states("6", "7"))

    def test_unproducible_observation(self):
        with self.assertRaises(QueryError):
            estimate(self.obs, ["b"])

    def test_cap_exceeded(self):
        with self.assertRaises(ResourceError) as ctx:
            build_observer(self.g1, cap=3)
        self.assertEqual(ctx.exception.cap, 3)
        self.assertIn(config.OBSERVER_CAP_ENV, str(ctx.exception))

    def test_cap_from_environment(self):
        with patch.dict(os.environ, {config.OBSERVER_CAP_ENV: "2"}):
            with self.assertRaises(ResourceError):
                build_observer(self.g1)
        with patch.dict(os.environ, {config.OBSERVER_CAP_ENV: "5"}):
            self.assertEqual(len(build_observer(self.g1)), 5)

    def test_bad_cap_in_environment(self):
        with patch.dict(os.environ, {config.OBSERVER_CAP_ENV: "many"}):
            with self.assertRaises(ValueError):
                config.observer_cap()
        with patch.dict(os.environ, {config.OBSERVER_CAP_ENV: "0"}):
            with self.assertRaises(ValueError):
                config.observer_cap()

    def test_fully_observable_observer_tracks_reachable_subsets(self):
        a = build_automaton(
            ["0", "1"],
            Alphabet.of(["a", "b"]),
            [("0", "a", "1"), ("1", "b", "0")],
            ["0", "1"],
        )
        obs = build_observer(a)
        self.assertEqual(obs.states, (states("0", "1"), states("1"), states("0")))


class TestObserverAgainstEnumeration(unittest.TestCase):
    def test_random_automata_agree_with_string_enumeration(self):
        rng = random.Random(7)
        budget = OracleBudget(max_string_length=200)
        for seed in range(40):
            a = generate_random(
                GeneratorParams(state_count=4, event_count=3, observable_fraction=0.6, seed=seed, initial_fraction=0.3)
            )
            obs = build_observer(a)
            for _ in range(10):
                alpha = []
                q = obs.initial
                for _ in range(rng.randint(0, 15)):
                    moves = [e for e in obs.events if obs.successor(q, e) is not None]
                    if not moves:
                        break
                    sigma = rng.choice(moves)
                    alpha.append(sigma)
                    q = obs.successor(q, sigma)
                self.assertEqual(oracle_estimate(a, alpha, budget), q, f"seed {seed}, alpha {alpha}")


if __name__ == "__main__":
    unittest.main()
