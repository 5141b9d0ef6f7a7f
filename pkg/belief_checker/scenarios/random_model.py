"""
Seeded random models and formulas for property tests and corpus runs

Every random model declares a rigid group "G", an indexical group "S" and a stamp function
"t"; agents are a0, a1, .. and ordinary variables X0, X1, .. over {0, 1}.
"""

import logging
import random

from typing import List, Optional

from belief_checker.config import CheckerOpts
from belief_checker.errors import ScenarioError
from belief_checker.formula.ast import (
    AgentSet,
    Alw,
    And,
    Atom,
    Believes,
    Chi,
    Common,
    CommonA,
    CommonT,
    Everyone,
    EveryoneA,
    EveryoneT,
    Formula,
    GroupName,
    GroupRef,
    Not,
)
from belief_checker.model import (
    FLAG_KINDS,
    BeliefRelation,
    Model,
    ModelBuilder,
    flag_variable,
    repair_kd45,
    validate_model,
)

logger = logging.getLogger(__name__)

RIGID_GROUP = "G"
INDEXICAL_GROUP = "S"
STAMP = "t"


def random_model(seed: int, params: Optional[CheckerOpts] = None) -> Model:
    """Deterministic random model; always passes validate_model

    Raises:
        ScenarioError: the size bounds allow more points than params.max_points
    """
    opts = params or CheckerOpts()
    if opts.runs_max * opts.horizon_max > opts.max_points:
        raise ScenarioError(
            f"up to {opts.runs_max * opts.horizon_max} points requested, limit is {opts.max_points}"
        )
    rng = random.Random(seed)

    agents = [f"a{i}" for i in range(rng.randint(opts.agents_min, opts.agents_max))]
    b = ModelBuilder(agents)
    variables = [f"X{i}" for i in range(opts.variables)]
    for var in variables:
        b.variable(var, ["0", "1"])

    run_ids = [f"r{i}" for i in range(rng.randint(opts.runs_min, opts.runs_max))]
    for run_id in run_ids:
        horizon = rng.randint(opts.horizon_min, opts.horizon_max)
        b.run(run_id, horizon=horizon, **{var: [rng.randint(0, 1) for _ in range(horizon)] for var in variables})
    points = b.points()

    raw_edges = {}
    for agent in agents:
        edges = set()
        for p in points:
            if rng.random() < opts.edge_density:
                edges.add((p, rng.choice(points)))
        raw_edges[agent] = edges

    b.rigid_group(RIGID_GROUP, rng.sample(agents, rng.randint(1, len(agents))))
    b.indexical_group(INDEXICAL_GROUP, {p: [a for a in agents if rng.random() < 0.5] for p in points})

    b.timestamp(
        STAMP,
        {a: {run_id: rng.randrange(len(b.points(run_id))) for run_id in run_ids} for a in agents},
    )

    for group in (RIGID_GROUP, INDEXICAL_GROUP):
        for agent in agents:
            b.acting(agent, group, [p for p in points if rng.random() < opts.flag_density])
            b.should_act(agent, group, [p for p in points if rng.random() < opts.flag_density])

    m = b.build()
    m = m.with_beliefs({a: BeliefRelation(a, repair_kd45(raw_edges[a], points)) for a in agents})

    report = validate_model(m)
    if not report.passed:
        raise ScenarioError(f"random model {seed} failed validation: {report.violations[0]}")
    logger.debug("random model %d: %d agent(s), %d point(s)", seed, len(agents), len(points))
    return m


def _random_group(rng: random.Random, m: Model) -> GroupRef:
    choice = rng.randrange(3)
    if choice == 0:
        return GroupName(RIGID_GROUP)
    if choice == 1:
        return GroupName(INDEXICAL_GROUP)
    return AgentSet(frozenset(rng.sample(list(m.agents), rng.randint(1, len(m.agents)))))


def random_atom(rng: random.Random, m: Model) -> Atom:
    if m.variables and rng.random() < 0.7:
        var = rng.choice(sorted(m.variables))
        return Atom(var, rng.choice(m.variables[var]))
    kind = rng.choice(FLAG_KINDS)
    agent = rng.choice(m.agents)
    group = rng.choice((RIGID_GROUP, INDEXICAL_GROUP))
    return Atom(flag_variable(kind, agent, group), rng.choice(("0", "1")))


def random_formula(rng: random.Random, m: Model, depth: int, nested_common: bool = True) -> Formula:
    """Random formula over a random model's vocabulary

    Args:
        rng: source of randomness
        m: model built by random_model
        depth: maximum nesting depth
        nested_common: when False, C-nodes and chi only appear at the root
    """
    return _random_formula(rng, m, depth, nested_common, root=True)


def _random_formula(rng: random.Random, m: Model, depth: int, nested_common: bool, root: bool) -> Formula:
    if depth <= 0:
        return random_atom(rng, m)

    def sub() -> Formula:
        return _random_formula(rng, m, depth - 1, nested_common, root=False)

    ops: List[str] = ["atom", "not", "and", "believes", "E", "Et", "Ea", "alw"]
    if nested_common or root:
        ops += ["C", "Ct", "Ca", "chi"]
    op = rng.choice(ops)
    match op:
        case "atom":
            return random_atom(rng, m)
        case "not":
            return Not(sub())
        case "and":
            return And(sub(), sub())
        case "believes":
            return Believes(rng.choice(m.agents), sub())
        case "E":
            return Everyone(_random_group(rng, m), sub())
        case "Et":
            return EveryoneT(_random_group(rng, m), STAMP, sub())
        case "Ea":
            return EveryoneA(_random_group(rng, m), sub())
        case "alw":
            return Alw(sub())
        case "C":
            return Common(_random_group(rng, m), sub())
        case "Ct":
            return CommonT(_random_group(rng, m), STAMP, sub())
        case "Ca":
            return CommonA(_random_group(rng, m), sub())
    return Chi(_random_group(rng, m))

