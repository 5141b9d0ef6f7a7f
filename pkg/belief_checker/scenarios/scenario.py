import logging
from dataclasses import dataclass, field

from typing import Any, Callable, Dict, List, Optional

from belief_checker.checker import Checker
from belief_checker.errors import BeliefCheckerError, ScenarioError
from belief_checker.formula import parse
from belief_checker.model import Model, Point, validate_model
from belief_checker.properties import (
    chi_alw_encoding_equiv,
    check_jb,
    embed_stamp_as_flags,
    stamp_certification,
    verify_theorem_1_2,
    verify_theorem_3_4,
)

logger = logging.getLogger(__name__)

FORMULA = "formula"
PROPERTY = "property"


@dataclass(frozen=True)
class Expectation:
    """One golden outcome of a scenario

    Attributes:
        kind: "formula" or "property"
        text: formula text, or a property id:
            ``valid``, ``jb:<group>``, ``theorem_1_2:<group>``, ``theorem_3_4:<group>:<phi>``,
            ``chi_alw:<group>``, ``stamp_certifies:<group>:<stamp>:<phi>``,
            ``stamp_embedding:<group>:<stamp>:<phi>``
        selector: "all", "run:<id>" or "point:<run>,<time>" (formulas only)
        expected: value the formula must take at every selected point, or the property value
        note: what the expectation reproduces
    """

    kind: str
    text: str
    expected: bool
    selector: str = "all"
    note: str = ""

    @staticmethod
    def formula(text: str, expected: bool, selector: str = "all", note: str = "") -> "Expectation":
        return Expectation(FORMULA, text, expected, selector, note)

    @staticmethod
    def prop(text: str, expected: bool, note: str = "") -> "Expectation":
        return Expectation(PROPERTY, text, expected, "model", note)


@dataclass
class Scenario:
    name: str
    title: str
    model: Model
    expectations: List[Expectation] = field(default_factory=list)


@dataclass
class ExpectationResult:
    expectation: Expectation
    passed: bool
    # points where a formula took the other value
    mismatches: List[Point] = field(default_factory=list)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        e = self.expectation
        return {
            "kind": e.kind,
            "text": e.text,
            "selector": e.selector,
            "expected": e.expected,
            "passed": self.passed,
            "mismatches": [[p.run, p.time] for p in self.mismatches],
            "error": self.error,
            "note": e.note,
        }


def select_points(m: Model, selector: str) -> List[Point]:
    if selector == "all":
        return list(m.points)
    kind, sep, arg = selector.partition(":")
    if sep and kind == "run":
        return m.run_points(arg)
    if sep and kind == "point":
        return [m.require_point(Point.parse(arg))]
    raise ScenarioError(f"bad point selector {selector!r}")


def _split(text: str, n: int) -> List[str]:
    parts = text.split(":", n)
    if len(parts) != n + 1:
        raise ScenarioError(f"bad property id {text!r}")
    return parts


def _embedding_agrees(c: Checker, group: str, stamp: str, phi_text: str) -> bool:
    m = c.model
    embedded = Checker(embed_stamp_as_flags(m, group, stamp))
    ct = c.extension(parse(f"C[t:{stamp}]{{{group}}}({phi_text})", m)).points
    ca = embedded.extension(parse(f"Ca{{{group}}}({phi_text})", embedded.model)).points
    return ct == ca


PropertyFn = Callable[[Checker, str], bool]


def _valid(c: Checker, text: str) -> bool:
    return validate_model(c.model).passed


def _jb(c: Checker, text: str) -> bool:
    _, group = _split(text, 1)
    return check_jb(c.model, group, c).holds


def _theorem_1_2(c: Checker, text: str) -> bool:
    _, group = _split(text, 1)
    return verify_theorem_1_2(c.model, group, c).equivalence_respected


def _theorem_3_4(c: Checker, text: str) -> bool:
    _, group, phi = _split(text, 2)
    return verify_theorem_3_4(c.model, group, parse(phi, c.model), c).equivalence_respected


def _chi_alw(c: Checker, text: str) -> bool:
    _, group = _split(text, 1)
    return chi_alw_encoding_equiv(c.model, group, c)


def _stamp_certifies(c: Checker, text: str) -> bool:
    _, group, stamp, phi = _split(text, 3)
    return stamp_certification(c.model, group, stamp, parse(phi, c.model), c).certifies


def _stamp_embedding(c: Checker, text: str) -> bool:
    _, group, stamp, phi = _split(text, 3)
    return _embedding_agrees(c, group, stamp, phi)


PROPERTIES: Dict[str, PropertyFn] = {
    "valid": _valid,
    "jb": _jb,
    "theorem_1_2": _theorem_1_2,
    "theorem_3_4": _theorem_3_4,
    "chi_alw": _chi_alw,
    "stamp_certifies": _stamp_certifies,
    "stamp_embedding": _stamp_embedding,
}


def evaluate_expectation(c: Checker, e: Expectation) -> ExpectationResult:
    if e.kind == FORMULA:
        f = parse(e.text, c.model)
        mismatches = [p for p in select_points(c.model, e.selector) if c.check(f, p) != e.expected]
        return ExpectationResult(e, not mismatches, mismatches)
    if e.kind == PROPERTY:
        key = e.text.split(":", 1)[0]
        try:
            fn = PROPERTIES[key]
        except KeyError:
            raise ScenarioError(f"unknown property {key!r}") from None
        value = fn(c, e.text)
        return ExpectationResult(e, value == e.expected)
    raise ScenarioError(f"unknown expectation kind {e.kind!r}")


def evaluate(scenario: Scenario, checker: Optional[Checker] = None) -> List[ExpectationResult]:
    """Run every expectation of a scenario

    Errors raised while evaluating one expectation are recorded on its result.
    """
    c = checker or Checker(scenario.model)
    results = []
    for e in scenario.expectations:
        try:
            result = evaluate_expectation(c, e)
        except BeliefCheckerError as err:
            result = ExpectationResult(e, False, error=f"{type(err).__name__}: {err}")
        if not result.passed:
            logger.info("%s: expectation %r failed", scenario.name, e.text)
        results.append(result)
    return results
