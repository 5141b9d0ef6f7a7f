"""
Runs-and-systems models

A model is a finite set of runs, each with a per-time valuation table, one KD45 belief
relation per agent, indexical groups, time-stamp functions and the ACTING / SHOULD_ACT
action flags. A model is built once (directly, through ModelBuilder or from JSON with
model_io.load_model), validated with validate_model, and never mutated afterwards.
"""

import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property

from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Set, Tuple, Union

from belief_checker.errors import ModelLookupError, ModelFormatError

logger = logging.getLogger(__name__)

ACTING = "ACTING"
SHOULD_ACT = "SHOULD_ACT"
MEMBER = "MEMBER"
FLAG_KINDS = (ACTING, SHOULD_ACT, MEMBER)
BOOLEAN_DOMAIN = ("0", "1")

IDENTIFIER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
VALUE_RE = re.compile(r"[A-Za-z0-9_]+\Z")
# formula keywords that cannot name a variable
RESERVED_WORDS = frozenset({"E", "C", "Ea", "Ca", "chi", "ALW", ACTING, SHOULD_ACT, MEMBER})
_FLAG_VARIABLE_RE = re.compile(r"(ACTING|SHOULD_ACT|MEMBER)\[([A-Za-z_][A-Za-z0-9_]*),([A-Za-z_][A-Za-z0-9_]*)\]\Z")


class Point(NamedTuple):
    """A point (run, time): the unit at which formulas are evaluated"""

    run: str
    time: int

    def __str__(self) -> str:
        return f"{self.run},{self.time}"

    @staticmethod
    def parse(text: str) -> "Point":
        """Parse the command line form ``runId,timeIndex``

        Raises:
            ModelFormatError: text is not of the form ``run,int``
        """
        run, sep, time = text.strip().rpartition(",")
        if not sep or not run:
            raise ModelFormatError(f"point must be 'run,time', got {text!r}")
        try:
            n = int(time)
        except ValueError:
            raise ModelFormatError(f"point time must be an integer, got {text!r}") from None
        return Point(run.strip(), n)


Edge = Tuple[Point, Point]


def flag_variable(kind: str, agent: str, group: str) -> str:
    """Name of the special Boolean variable ``kind[agent,group]`` (e.g. ``ACTING[Y,G]``)"""
    if kind not in FLAG_KINDS:
        raise ValueError(f"unknown flag kind {kind}")
    return f"{kind}[{agent},{group}]"


def parse_flag_variable(name: str) -> Optional[Tuple[str, str, str]]:
    """Return (kind, agent, group) for a special variable name, None for an ordinary one"""
    m = _FLAG_VARIABLE_RE.match(name)
    if not m:
        return None
    return m.group(1), m.group(2), m.group(3)


@dataclass(frozen=True)
class Run:
    """One possible evolution of the system

    Attributes:
        id: run identifier
        horizon: number of time indices (times are 0 .. horizon - 1)
        valuation: one row per time index, variable -> value
    """

    id: str
    horizon: int
    valuation: Tuple[Mapping[str, str], ...]

    def points(self) -> List[Point]:
        return [Point(self.id, n) for n in range(self.horizon)]


@dataclass(frozen=True)
class BeliefRelation:
    agent: str
    edges: FrozenSet[Edge]


@dataclass(frozen=True)
class IndexicalGroup:
    """A function from points to sets of agents

    A static (rigid) group is an IndexicalGroup whose membership is the same at every
    point; it is stored as ``rigid`` instead of a per-point table.
    """

    name: str
    membership: Mapping[Point, FrozenSet[str]] = field(default_factory=dict)
    rigid: Optional[FrozenSet[str]] = None

    @staticmethod
    def rigid_group(name: str, agents: Iterable[str]) -> "IndexicalGroup":
        return IndexicalGroup(name=name, rigid=frozenset(agents))

    @property
    def is_rigid(self) -> bool:
        return self.rigid is not None

    def members_at(self, point: Point) -> FrozenSet[str]:
        if self.rigid is not None:
            return self.rigid
        return self.membership.get(point, frozenset())


@dataclass(frozen=True)
class TimeStampFn:
    """The stamp t(i, r): one time index per (agent, run)"""

    name: str
    stamps: Mapping[Tuple[str, str], int]

    def at(self, agent: str, run: str) -> int:
        try:
            return self.stamps[(agent, run)]
        except KeyError:
            raise ModelLookupError("stamp entry", f"{self.name}({agent},{run})") from None


@dataclass(frozen=True)
class ActionFlags:
    """ACTING / SHOULD_ACT flags, keyed by (agent, group name)

    Only the points where a flag is 1 are stored; every other triple reads 0.
    """

    acting: Mapping[Tuple[str, str], FrozenSet[Point]] = field(default_factory=dict)
    should_act: Mapping[Tuple[str, str], FrozenSet[Point]] = field(default_factory=dict)

    def acting_at(self, agent: str, group: str, point: Point) -> bool:
        return point in self.acting.get((agent, group), ())

    def should_act_at(self, agent: str, group: str, point: Point) -> bool:
        return point in self.should_act.get((agent, group), ())


class Violation(NamedTuple):
    rule: str
    element: str
    detail: str
    witness: Tuple[Point, ...] = ()


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def rules(self) -> Set[str]:
        return {v.rule for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [
                {
                    "rule": v.rule,
                    "element": v.element,
                    "detail": v.detail,
                    "witness": [[p.run, p.time] for p in v.witness],
                }
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class Model:
    """M = (R, Phi, pi, B_1 .. B_n) plus groups, stamp functions and action flags"""

    agents: Tuple[str, ...]
    variables: Mapping[str, Tuple[str, ...]]
    runs: Mapping[str, Run]
    beliefs: Mapping[str, BeliefRelation]
    groups: Mapping[str, IndexicalGroup] = field(default_factory=dict)
    timestamps: Mapping[str, TimeStampFn] = field(default_factory=dict)
    flags: ActionFlags = field(default_factory=ActionFlags)

    @cached_property
    def points(self) -> Tuple[Point, ...]:
        """All points, ordered by (run id, time)"""
        return tuple(sorted(p for run in self.runs.values() for p in run.points()))

    @cached_property
    def point_set(self) -> FrozenSet[Point]:
        return frozenset(self.points)

    @cached_property
    def _successors(self) -> Dict[str, Dict[Point, Tuple[Point, ...]]]:
        index: Dict[str, Dict[Point, Tuple[Point, ...]]] = {}
        for agent, relation in self.beliefs.items():
            succ: Dict[Point, Set[Point]] = defaultdict(set)
            for src, dst in relation.edges:
                succ[src].add(dst)
            index[agent] = {p: tuple(sorted(targets)) for p, targets in succ.items()}
        return index

    def has_point(self, point: Point) -> bool:
        return point in self.point_set

    def require_point(self, point: Point) -> Point:
        if point not in self.point_set:
            raise ModelLookupError("point", str(point))
        return point

    def require_agent(self, agent: str) -> str:
        if agent not in self.agents:
            raise ModelLookupError("agent", agent)
        return agent

    def run_points(self, run_id: str) -> List[Point]:
        try:
            return self.runs[run_id].points()
        except KeyError:
            raise ModelLookupError("run", run_id) from None

    def group(self, name: str) -> IndexicalGroup:
        try:
            return self.groups[name]
        except KeyError:
            raise ModelLookupError("group", name) from None

    def stamp(self, name: str) -> TimeStampFn:
        try:
            return self.timestamps[name]
        except KeyError:
            raise ModelLookupError("stamp function", name) from None

    def rigid_group_for(self, agents: Iterable[str]) -> IndexicalGroup:
        """Group for an inline agent list

        Returns the declared rigid group with exactly these members when there is one (so that
        its action flags apply), an anonymous flag-less rigid group otherwise.
        """
        members = frozenset(agents)
        for name in sorted(self.groups):
            g = self.groups[name]
            if g.rigid == members:
                return g
        return IndexicalGroup.rigid_group("{" + ",".join(sorted(members)) + "}", members)

    def successors(self, agent: str, point: Point) -> Tuple[Point, ...]:
        self.require_agent(agent)
        self.require_point(point)
        return self._successors.get(agent, {}).get(point, ())

    def membership(self, group: Union[str, IndexicalGroup], point: Point) -> FrozenSet[str]:
        g = self.group(group) if isinstance(group, str) else group
        self.require_point(point)
        return g.members_at(point)

    def valuation(self, point: Point, variable: str) -> str:
        self.require_point(point)
        flag = parse_flag_variable(variable)
        if flag is not None:
            kind, agent, group = flag
            self.require_agent(agent)
            g = self.group(group)
            if kind == ACTING:
                on = self.flags.acting_at(agent, group, point)
            elif kind == SHOULD_ACT:
                on = self.flags.should_act_at(agent, group, point)
            else:
                on = agent in g.members_at(point)
            return "1" if on else "0"

        if variable not in self.variables:
            raise ModelLookupError("variable", variable)
        row = self.runs[point.run].valuation[point.time]
        try:
            return row[variable]
        except KeyError:
            raise ModelLookupError("valuation entry", f"{variable}@{point}") from None

    def domain(self, variable: str) -> Tuple[str, ...]:
        if parse_flag_variable(variable) is not None:
            return BOOLEAN_DOMAIN
        try:
            return self.variables[variable]
        except KeyError:
            raise ModelLookupError("variable", variable) from None

    def with_flags(self, flags: ActionFlags) -> "Model":
        return replace(self, flags=flags)

    def with_beliefs(self, beliefs: Mapping[str, BeliefRelation]) -> "Model":
        return replace(self, beliefs=beliefs)


# Operations


def valuation(m: Model, p: Point, v: str) -> str:
    """pi(p, v)

    Raises:
        ModelLookupError: unknown point or variable
    """
    return m.valuation(p, v)


def successors(m: Model, i: str, p: Point) -> FrozenSet[Point]:
    """{q : (p, q) in B_i}"""
    return frozenset(m.successors(i, p))


def membership(m: Model, s: Union[str, IndexicalGroup], p: Point) -> FrozenSet[str]:
    """S(p)"""
    return m.membership(s, p)


def _check_identifier(kind: str, name: str, add, reserved: bool = False) -> None:
    if not IDENTIFIER_RE.match(name):
        add(Violation("identifier", repr(name), f"{kind} names must be identifiers"))
    elif reserved and name in RESERVED_WORDS:
        add(Violation("identifier", name, f"{name} is a formula keyword, not a {kind} name"))


def validate_model(m: Model) -> ValidationReport:
    """Check structural well-formedness and the KD45 properties of every belief relation

    Every problem is reported, nothing is raised. The report is deterministic: violations
    are listed rule family by rule family, in (run, time) order.
    """
    report = ValidationReport()
    add = report.violations.append
    points = m.point_set

    # agents / variables
    if not m.agents:
        add(Violation("agents-nonempty", "agents", "the model declares no agent"))
    for agent in m.agents:
        if not agent or not IDENTIFIER_RE.match(agent):
            add(Violation("agent-id", repr(agent), "agent ids must be non-empty identifiers"))
    if len(set(m.agents)) != len(m.agents):
        add(Violation("agent-id", "agents", "agent ids must be unique"))
    for var, domain in sorted(m.variables.items()):
        if not domain:
            add(Violation("variable-domain", var, "empty value domain"))

    # names that formulas and point selectors refer to
    for var in sorted(m.variables):
        _check_identifier("variable", var, add, reserved=True)
        for value in m.variables[var]:
            if not VALUE_RE.match(value):
                add(Violation("identifier", f"{var}={value}", "values are letters, digits and underscores"))
    for kind, names in (("run", m.runs), ("group", m.groups), ("stamp function", m.timestamps)):
        for name in sorted(names):
            _check_identifier(kind, name, add)

    # runs / valuation
    for run_id in sorted(m.runs):
        run = m.runs[run_id]
        if run.horizon < 1:
            add(Violation("run-horizon", run_id, f"horizon must be positive, got {run.horizon}"))
        if len(run.valuation) != max(run.horizon, 0):
            add(
                Violation(
                    "valuation-total",
                    run_id,
                    f"{len(run.valuation)} valuation rows for horizon {run.horizon}",
                )
            )
        for n, row in enumerate(run.valuation):
            for var in sorted(m.variables):
                if var not in row:
                    add(Violation("valuation-total", f"{run_id},{n}", f"no value for {var}"))
                elif row[var] not in m.variables[var]:
                    add(
                        Violation(
                            "valuation-domain",
                            f"{run_id},{n}",
                            f"{var}={row[var]} is outside {list(m.variables[var])}",
                        )
                    )
            for var in sorted(set(row) - set(m.variables)):
                add(Violation("dangling-reference", f"{run_id},{n}", f"undeclared variable {var}"))

    # beliefs
    for agent in m.agents:
        if agent not in m.beliefs:
            add(Violation("belief-missing", agent, "no belief relation for this agent"))
    for agent in sorted(set(m.beliefs) - set(m.agents)):
        add(Violation("dangling-reference", agent, "belief relation for an undeclared agent"))
    for agent in m.agents:
        if agent in m.beliefs:
            _validate_kd45(m, m.beliefs[agent], add)

    # groups
    for name in sorted(m.groups):
        g = m.groups[name]
        if g.is_rigid:
            unknown = sorted(g.rigid - set(m.agents))  # type: ignore[operator]
            if unknown:
                add(Violation("dangling-reference", name, f"rigid group names unknown agents {unknown}"))
            continue
        for p in m.points:
            if p not in g.membership:
                add(Violation("group-total", f"{name}@{p}", "no membership declared at this point"))
        for p in sorted(g.membership):
            if p not in points:
                add(Violation("dangling-reference", f"{name}@{p}", "membership for an unknown point"))
            unknown = sorted(g.membership[p] - set(m.agents))
            if unknown:
                add(Violation("dangling-reference", f"{name}@{p}", f"unknown agents {unknown}"))

    # time stamps
    for name in sorted(m.timestamps):
        t = m.timestamps[name]
        for agent in m.agents:
            for run_id in sorted(m.runs):
                if (agent, run_id) not in t.stamps:
                    add(Violation("timestamp-total", f"{name}({agent},{run_id})", "stamp undefined"))
                    continue
                n = t.stamps[(agent, run_id)]
                if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n < m.runs[run_id].horizon:
                    add(
                        Violation(
                            "timestamp-range",
                            f"{name}({agent},{run_id})",
                            f"stamp {n!r} outside [0, {m.runs[run_id].horizon})",
                        )
                    )
        for agent, run_id in sorted(t.stamps):
            if agent not in m.agents or run_id not in m.runs:
                add(Violation("dangling-reference", f"{name}({agent},{run_id})", "unknown agent or run"))

    # action flags
    for kind, table in ((ACTING, m.flags.acting), (SHOULD_ACT, m.flags.should_act)):
        for agent, group in sorted(table):
            element = flag_variable(kind, agent, group)
            if agent not in m.agents:
                add(Violation("dangling-reference", element, f"unknown agent {agent}"))
            if group not in m.groups:
                add(Violation("dangling-reference", element, f"unknown group {group}"))
            for p in sorted(table[(agent, group)]):
                if not isinstance(p, Point) or not isinstance(p.time, int):
                    add(Violation("flag-boolean", element, f"flag entry {p!r} is not a point"))
                elif p not in points:
                    add(Violation("dangling-reference", element, f"flag set at unknown point {p}"))

    logger.debug("validated model: %d point(s), %d violation(s)", len(m.points), len(report.violations))
    return report


def _validate_kd45(m: Model, relation: BeliefRelation, add) -> None:
    agent = relation.agent
    points = m.point_set
    succ: Dict[Point, Set[Point]] = defaultdict(set)
    for src, dst in sorted(relation.edges):
        if src not in points or dst not in points:
            add(Violation("dangling-reference", agent, f"edge ({src})->({dst}) leaves the model", (src, dst)))
            continue
        succ[src].add(dst)

    for p in m.points:
        if not succ[p]:
            add(Violation("serial", f"{agent}@{p}", "no successor", (p,)))

    for a in m.points:
        for b in sorted(succ[a]):
            for c in sorted(succ[b]):
                if c not in succ[a]:
                    add(
                        Violation(
                            "transitive",
                            f"{agent}:({a})->({b})->({c})",
                            f"missing edge ({a})->({c})",
                            (a, b, c),
                        )
                    )

    for a in m.points:
        targets = sorted(succ[a])
        for b in targets:
            for c in targets:
                if c not in succ[b]:
                    add(
                        Violation(
                            "euclidean",
                            f"{agent}:({a})->({b}),({a})->({c})",
                            f"missing edge ({b})->({c})",
                            (a, b, c),
                        )
                    )


def repair_kd45(edges: Iterable[Edge], points: Iterable[Point]) -> FrozenSet[Edge]:
    """Close a relation under transitivity and Euclideanness, then patch seriality

    Successor-less points receive a self-loop; closure is re-run until nothing changes.
    """
    all_points = sorted(set(points))
    succ: Dict[Point, Set[Point]] = defaultdict(set)
    for src, dst in edges:
        succ[src].add(dst)

    while True:
        changed = True
        while changed:
            changed = False
            for a in all_points:
                for b in list(succ[a]):
                    for c in list(succ[b]):
                        if c not in succ[a]:
                            succ[a].add(c)
                            changed = True
            for a in all_points:
                targets = list(succ[a])
                for b in targets:
                    for c in targets:
                        if c not in succ[b]:
                            succ[b].add(c)
                            changed = True
        patched = False
        for p in all_points:
            if not succ[p]:
                succ[p].add(p)
                patched = True
        if not patched:
            break

    return frozenset((a, b) for a in all_points for b in succ[a])


class ModelBuilder:
    """Incremental construction of a Model

    Example:
        >>> b = ModelBuilder(["a"])
        >>> b.variable("X", ["0", "1"])
        >>> b.run("r", X=["1", "0"])
        >>> b.believe("a", b.points("r"), [Point("r", 0)])
        >>> model = b.build()
    """

    def __init__(self, agents: Iterable[str]):
        self.agents: Tuple[str, ...] = tuple(agents)
        self._variables: Dict[str, Tuple[str, ...]] = {}
        self._runs: Dict[str, Run] = {}
        self._edges: Dict[str, Set[Edge]] = {a: set() for a in self.agents}
        self._groups: Dict[str, IndexicalGroup] = {}
        self._stamps: Dict[str, Dict[Tuple[str, str], int]] = {}
        self._acting: Dict[Tuple[str, str], Set[Point]] = defaultdict(set)
        self._should_act: Dict[Tuple[str, str], Set[Point]] = defaultdict(set)

    def variable(self, name: str, domain: Iterable[object]) -> None:
        self._variables[name] = tuple(str(v) for v in domain)

    def run(self, run_id: str, horizon: Optional[int] = None, **series: Iterable[object]) -> None:
        """Add a run; each keyword gives the value of one variable per time index

        horizon is only needed for a run without any variable.
        """
        columns = {var: [str(v) for v in values] for var, values in series.items()}
        lengths = {len(values) for values in columns.values()}
        if horizon is not None:
            lengths.add(horizon)
        if len(lengths) != 1:
            raise ModelFormatError(f"run {run_id}: every series must have the same length")
        horizon = lengths.pop()
        rows = tuple({var: columns[var][n] for var in columns} for n in range(horizon))
        self._runs[run_id] = Run(run_id, horizon, rows)

    def points(self, *run_ids: str, times: Optional[Iterable[int]] = None) -> List[Point]:
        """Points of the given runs (all runs if none given), optionally restricted to some times"""
        selected = run_ids or tuple(self._runs)
        wanted = None if times is None else set(times)
        return [
            p
            for run_id in selected
            for p in self._runs[run_id].points()
            if wanted is None or p.time in wanted
        ]

    def believe(self, agent: str, at: Iterable[Point], targets: Iterable[Point]) -> None:
        """At every point of ``at``, agent considers exactly ``targets`` possible"""
        targets = list(targets)
        for p in at:
            for q in targets:
                self._edges[agent].add((p, q))

    def edge(self, agent: str, src: Point, dst: Point) -> None:
        self._edges[agent].add((src, dst))

    def rigid_group(self, name: str, agents: Iterable[str]) -> None:
        self._groups[name] = IndexicalGroup.rigid_group(name, agents)

    def indexical_group(self, name: str, table: Mapping[Point, Iterable[str]]) -> None:
        self._groups[name] = IndexicalGroup(name, {p: frozenset(a) for p, a in table.items()})

    def timestamp(self, name: str, stamps: Mapping[str, Mapping[str, int]]) -> None:
        """stamps: agent -> run -> time"""
        self._stamps[name] = {(a, r): n for a, per_run in stamps.items() for r, n in per_run.items()}

    def acting(self, agent: str, group: str, points: Iterable[Point]) -> None:
        self._acting[(agent, group)].update(points)

    def should_act(self, agent: str, group: str, points: Iterable[Point]) -> None:
        self._should_act[(agent, group)].update(points)

    def build(self) -> Model:
        return Model(
            agents=self.agents,
            variables=dict(self._variables),
            runs=dict(self._runs),
            beliefs={a: BeliefRelation(a, frozenset(e)) for a, e in self._edges.items()},
            groups=dict(self._groups),
            timestamps={n: TimeStampFn(n, s) for n, s in self._stamps.items()},
            flags=ActionFlags(
                acting={k: frozenset(v) for k, v in self._acting.items()},
                should_act={k: frozenset(v) for k, v in self._should_act.items()},
            ),
        )
