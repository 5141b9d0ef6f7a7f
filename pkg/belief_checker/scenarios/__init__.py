from typing import Callable, Dict

from belief_checker.errors import ScenarioError
from .scenario import Expectation, ExpectationResult, Scenario, evaluate, select_points
from .generals import build_generals_timestamped, build_generals_actionstamped
from .firefighters import build_firefighters_indexical
from .search_rescue import build_search_rescue
from .bank_robbers import build_bank_robbers
from .random_model import random_model, random_formula

SCENARIOS: Dict[str, Callable[[], Scenario]] = {
    "generals1": build_generals_timestamped,
    "generals2": build_generals_actionstamped,
    "firefighters": build_firefighters_indexical,
    "search_rescue": build_search_rescue,
    "bank_robbers": build_bank_robbers,
}


def build_scenario(name: str) -> Scenario:
    try:
        builder = SCENARIOS[name]
    except KeyError:
        raise ScenarioError(f"unknown scenario {name!r}, expected one of {sorted(SCENARIOS)}") from None
    return builder()
