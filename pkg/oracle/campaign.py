import logging
import random
from dataclasses import asdict, dataclass

import pandas as pd

from opacity.data_models import Automaton, PatternSpec, Property
from opacity.pattern import verify_pattern_instant, verify_pattern_trajectory
from opacity.verifier import verify_instant, verify_trajectory
from oracle.definitions import OracleBudget, oracle_instant, oracle_pattern, oracle_trajectory
from oracle.random_automata import GeneratorParams, generate_random, generate_random_pattern

logger = logging.getLogger(__name__)

CAMPAIGN_PROPERTIES = {
    "instant": Property.INSTANT,
    "trajectory": Property.TRAJECTORY,
    "pattern-instant": Property.PATTERN_INSTANT,
    "pattern-trajectory": Property.PATTERN_TRAJECTORY,
}
PRODUCT_SIZE_LIMIT = 20


@dataclass
class CampaignCase:
    seed: int
    system: Automaton
    pattern: PatternSpec | None = None


@dataclass
class CampaignRow:
    seed: int
    states: int
    property: str
    k: int
    algorithmic: bool
    oracle: bool
    bounded: bool
    agreement: bool


class DifferentialCampaign:
    """Seeded rounds comparing the verifier against the brute-force definitions."""

    def __init__(
        self,
        first_seed: int = 0,
        max_states: int = 5,
        max_events: int = 4,
        ks: tuple[int, ...] = (0, 1, 2, 3),
        properties: tuple[str, ...] = ("instant", "trajectory"),
        budget: OracleBudget | None = None,
    ):
        unknown = [p for p in properties if p not in CAMPAIGN_PROPERTIES]
        if unknown:
            raise ValueError(f"unknown campaign properties: {', '.join(unknown)}")
        if max_states < 1 or max_events < 1:
            raise ValueError("max_states and max_events must be positive")
        if any(k < 0 for k in ks):
            raise ValueError(f"K values must be non-negative, got {ks}")
        self.first_seed = first_seed
        self.max_states = max_states
        self.max_events = max_events
        self.ks = tuple(ks)
        self.properties = tuple(properties)
        self.budget = budget if budget is not None else OracleBudget()

    def _setup_round(self, round_number: int) -> CampaignCase:
        seed = self.first_seed + round_number - 1
        case_rng = random.Random(seed)
        params = GeneratorParams(
            state_count=case_rng.randint(1, self.max_states),
            event_count=case_rng.randint(1, self.max_events),
            observable_fraction=case_rng.uniform(0.3, 1.0),
            secret_fraction=case_rng.uniform(0.1, 0.6),
            transition_density=case_rng.uniform(0.3, 0.8),
            seed=seed,
            initial_fraction=0.2,
        )
        system = generate_random(params)
        pattern = None
        if any(p.startswith("pattern") for p in self.properties):
            pattern_states = case_rng.randint(1, max(1, min(4, PRODUCT_SIZE_LIMIT // len(system.states))))
            pattern = generate_random_pattern(
                system.alphabet,
                pattern_states,
                marked_fraction=case_rng.uniform(0.1, 0.5),
                transition_density=case_rng.uniform(0.4, 0.9),
                seed=case_rng.getrandbits(32),
            )
        return CampaignCase(seed, system, pattern)

    def _check(self, case: CampaignCase, prop: Property, k: int):
        a = case.system
        if prop is Property.INSTANT:
            return verify_instant(a, k), oracle_instant(a, k, self.budget)
        if prop is Property.TRAJECTORY:
            return verify_trajectory(a, k), oracle_trajectory(a, k, self.budget)
        if prop is Property.PATTERN_INSTANT:
            return verify_pattern_instant(a, case.pattern, k), oracle_pattern(a, case.pattern, k, prop, self.budget)
        return verify_pattern_trajectory(a, case.pattern, k), oracle_pattern(a, case.pattern, k, prop, self.budget)

    def _play_round(self, case: CampaignCase) -> list[CampaignRow]:
        rows = []
        for name in self.properties:
            for k in self.ks:
                algorithmic, reference = self._check(case, CAMPAIGN_PROPERTIES[name], k)
                rows.append(
                    CampaignRow(
                        seed=case.seed,
                        states=len(case.system.states),
                        property=name,
                        k=k,
                        algorithmic=algorithmic.holds,
                        oracle=reference.holds,
                        bounded=reference.bounded,
                        agreement=algorithmic.holds == reference.holds,
                    )
                )
        return rows

    def run_campaign(self, num_rounds: int) -> pd.DataFrame:
        rows: list[CampaignRow] = []
        for round_number in range(1, num_rounds + 1):
            case = self._setup_round(round_number)
            rows.extend(self._play_round(case))
        frame = pd.DataFrame([asdict(r) for r in rows], columns=list(CampaignRow.__dataclass_fields__))
        logger.debug("campaign finished: %d rows, %d disagreements", len(frame), len(disagreements(frame)))
        return frame


def disagreements(frame: pd.DataFrame) -> pd.DataFrame:
    """Rows whose oracle verdict is complete yet differs from the verifier."""
    if frame.empty:
        return frame
    return frame[~frame["bounded"] & ~frame["agreement"]]
