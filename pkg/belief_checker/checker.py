"""
Formula evaluation

A Checker is an evaluation session over one validated model: it holds the memo tables
(keyed by formula node and point) and the reachability cache. The three common belief
operators are computed by reachability along their one-step relation:

- Standard: from q, every B_i-successor of q for i in S(q)
- TimeStamped(t): from (r, n), every B_i-successor of (r, t(i,r)) for each agent i in S(r, t(i,r))
- ActionStamped: from (r, n), every B_i-successor of (r, n') for each time n' of r and each
  i in S(r, n') with ACTING[i,S] at (r, n')

E holds at p iff the argument holds at every one-step successor of p, C iff it holds at every
point reachable in one or more steps. bounded_nesting_oracle re-derives C by literal
expansion of E^1 .. E^k and is used to cross-check the reachability code.
"""

import logging
from collections import deque
from dataclasses import dataclass

from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Set, Tuple, Union

from belief_checker.errors import ContractViolationError, ModelValidationError
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
    COMMON_NODES,
    Everyone,
    EveryoneA,
    EveryoneT,
    Formula,
    GroupName,
    GroupRef,
    Not,
    subformulas,
)
from belief_checker.model import IndexicalGroup, Model, Point, ValidationReport, validate_model

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Standard:
    def __str__(self) -> str:
        return "standard"


@dataclass(frozen=True)
class TimeStamped:
    stamp: str

    def __str__(self) -> str:
        return f"time-stamped({self.stamp})"


@dataclass(frozen=True)
class ActionStamped:
    def __str__(self) -> str:
        return "action-stamped"


ReachKind = Union[Standard, TimeStamped, ActionStamped]
GroupLike = Union[str, GroupRef, IndexicalGroup]


@dataclass(frozen=True)
class Extension:
    """The set of points where a formula holds"""

    formula: Formula
    points: FrozenSet[Point]

    def __contains__(self, point: object) -> bool:
        return point in self.points

    def runs(self) -> List[str]:
        return sorted({p.run for p in self.points})


def reach_kind_of(node: Formula) -> ReachKind:
    """One-step relation used by an E or C node"""
    if isinstance(node, (Everyone, Common)):
        return Standard()
    if isinstance(node, (EveryoneT, CommonT)):
        return TimeStamped(node.stamp)
    if isinstance(node, (EveryoneA, CommonA)):
        return ActionStamped()
    raise ContractViolationError(f"{type(node).__name__} has no reachability relation")


class Checker:
    def __init__(self, model: Model, allow_invalid: bool = False):
        """Start an evaluation session on a model

        Args:
            model: the model (validated here)
            allow_invalid: evaluate even if the model breaks KD45 or well-formedness rules;
                results are then only meaningful as experiments

        Raises:
            ModelValidationError: model failed validation and allow_invalid is False
        """
        self.model = model
        self.report: ValidationReport = validate_model(model)
        if not self.report.passed:
            if not allow_invalid:
                raise ModelValidationError(self.report)
            logger.warning(
                "checking a model with %d validation violation(s), results may be meaningless",
                len(self.report.violations),
            )

        self._memo: Dict[Tuple[Formula, Point], bool] = {}
        self._extensions: Dict[Formula, FrozenSet[Point]] = {}
        self._steps: Dict[Tuple[Hashable, Point, ReachKind], Tuple[Point, ...]] = {}
        self._reach: Dict[Tuple[Hashable, Point, ReachKind], FrozenSet[Point]] = {}

    # groups

    def resolve_group(self, group: GroupLike) -> IndexicalGroup:
        if isinstance(group, IndexicalGroup):
            return group
        if isinstance(group, str):
            return self.model.group(group)
        if isinstance(group, GroupName):
            return self.model.group(group.name)
        if isinstance(group, AgentSet):
            return self.model.rigid_group_for(group.agents)
        raise TypeError(f"not a group reference: {group!r}")

    def _members(self, g: IndexicalGroup, p: Point) -> List[str]:
        return sorted(g.members_at(p))

    def _group_key(self, g: IndexicalGroup) -> Hashable:
        if self.model.groups.get(g.name) is g:
            return g.name
        # undeclared, or a different group under a declared name
        if g.rigid is not None:
            return (g.name, g.rigid)
        return (g.name, frozenset(g.membership.items()))

    # one-step relations

    def step(self, group: GroupLike, p: Point, kind: ReachKind) -> Tuple[Point, ...]:
        """Points one step away from p (sorted by run then time)"""
        g = self.resolve_group(group)
        key = (self._group_key(g), p, kind)
        cached = self._steps.get(key)
        if cached is not None:
            return cached
        out: Set[Point] = set()
        for agent, src in self._sources(g, p, kind):
            out.update(self.model.successors(agent, src))
        result = tuple(sorted(out))
        self._steps[key] = result
        return result

    def _sources(self, g: IndexicalGroup, p: Point, kind: ReachKind) -> Iterator[Tuple[str, Point]]:
        """(agent, point) pairs whose belief successors form the one-step relation at p"""
        m = self.model
        if isinstance(kind, Standard):
            for agent in self._members(g, p):
                yield agent, p
        elif isinstance(kind, TimeStamped):
            t = m.stamp(kind.stamp)
            for agent in m.agents:
                tp = Point(p.run, t.at(agent, p.run))
                if agent in g.members_at(tp):
                    yield agent, tp
        elif isinstance(kind, ActionStamped):
            for q in m.run_points(p.run):
                for agent in self._members(g, q):
                    if m.flags.acting_at(agent, g.name, q):
                        yield agent, q
        else:
            raise TypeError(f"unknown reach kind {kind!r}")

    def reachable_set(self, group: GroupLike, p: Point, kind: ReachKind) -> FrozenSet[Point]:
        """Points reachable from p in one or more steps of the given kind"""
        g = self.resolve_group(group)
        self.model.require_point(p)
        key = (self._group_key(g), p, kind)
        cached = self._reach.get(key)
        if cached is not None:
            return cached

        seen: Set[Point] = set()
        queue = deque(self.step(g, p, kind))
        seen.update(queue)
        while queue:
            q = queue.popleft()
            for nxt in self.step(g, q, kind):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)

        result = frozenset(seen)
        self._reach[key] = result
        logger.debug("reach %s %s from %s: %d point(s)", kind, g.name, p, len(result))
        return result

    # pointwise evaluation

    def check(self, f: Formula, p: Point) -> bool:
        """Truth of f at p"""
        self.model.require_point(p)
        return self._eval(f, p)

    def _eval(self, f: Formula, p: Point) -> bool:
        key = (f, p)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        result = self._eval_node(f, p)
        self._memo[key] = result
        return result

    def _all(self, f: Formula, points: Iterable[Point]) -> bool:
        return all(self._eval(f, q) for q in points)

    def _eval_node(self, f: Formula, p: Point) -> bool:
        m = self.model
        match f:
            case Atom(variable, value):
                return m.valuation(p, variable) == value
            case Not(g):
                return not self._eval(g, p)
            case And(left, right):
                return self._eval(left, p) and self._eval(right, p)
            case Believes(agent, g):
                return self._all(g, m.successors(agent, p))
            case Everyone(group, g) | EveryoneT(group, _, g) | EveryoneA(group, g):
                return self._all(g, self.step(group, p, reach_kind_of(f)))
            case Common(group, g) | CommonT(group, _, g) | CommonA(group, g):
                return self._all(g, self.reachable_set(group, p, reach_kind_of(f)))
            case Chi(group):
                return self._chi_on_run(self.resolve_group(group), p.run)
            case Alw(g):
                return self._all(g, m.run_points(p.run))
        raise TypeError(f"not a formula: {f!r}")

    def _chi_on_run(self, g: IndexicalGroup, run_id: str) -> bool:
        flags = self.model.flags
        for q in self.model.run_points(run_id):
            for agent in self._members(g, q):
                if flags.should_act_at(agent, g.name, q) and not flags.acting_at(agent, g.name, q):
                    return False
        return True

    # set based evaluation

    def extension(self, f: Formula) -> Extension:
        """Points where f holds, computed bottom-up over subformulas(f)"""
        for node in subformulas(f):
            if node not in self._extensions:
                self._extensions[node] = self._extension_node(node)
        return Extension(f, self._extensions[f])

    def _extension_node(self, f: Formula) -> FrozenSet[Point]:
        m = self.model
        points = m.points
        ext = self._extensions
        match f:
            case Atom(variable, value):
                return frozenset(p for p in points if m.valuation(p, variable) == value)
            case Not(g):
                return m.point_set - ext[g]
            case And(left, right):
                return ext[left] & ext[right]
            case Believes(agent, g):
                return frozenset(p for p in points if ext[g].issuperset(m.successors(agent, p)))
            case Everyone(group, g) | EveryoneT(group, _, g) | EveryoneA(group, g):
                kind = reach_kind_of(f)
                return frozenset(p for p in points if ext[g].issuperset(self.step(group, p, kind)))
            case Common(group, g) | CommonT(group, _, g) | CommonA(group, g):
                kind = reach_kind_of(f)
                return frozenset(p for p in points if ext[g] >= self.reachable_set(group, p, kind))
            case Chi(group):
                g_ = self.resolve_group(group)
                return frozenset(
                    p for run_id in m.runs if self._chi_on_run(g_, run_id) for p in m.run_points(run_id)
                )
            case Alw(g):
                return frozenset(
                    p
                    for run_id in m.runs
                    if all(q in ext[g] for q in m.run_points(run_id))
                    for p in m.run_points(run_id)
                )
        raise TypeError(f"not a formula: {f!r}")

    # oracle

    def _everyone_clause(self, g: IndexicalGroup, kind: ReachKind, holds: FrozenSet[Point], p: Point) -> bool:
        """E of a known extension at p, straight from the clause of each kind (no step cache)"""
        m = self.model
        if isinstance(kind, Standard):
            return all(holds.issuperset(m.successors(i, p)) for i in g.members_at(p))
        if isinstance(kind, TimeStamped):
            t = m.stamp(kind.stamp)
            for i in m.agents:
                at_stamp = Point(p.run, t.at(i, p.run))
                if i in g.members_at(at_stamp) and not holds.issuperset(m.successors(i, at_stamp)):
                    return False
            return True
        if isinstance(kind, ActionStamped):
            return all(
                holds.issuperset(m.successors(i, q))
                for q in m.run_points(p.run)
                for i in g.members_at(q)
                if m.flags.acting_at(i, g.name, q)
            )
        raise TypeError(f"unknown reach kind {kind!r}")

    def nesting_levels(self, node: Formula, k: int) -> List[FrozenSet[Point]]:
        """Extensions of E^1(psi) .. E^k(psi) for a C node, by literal expansion"""
        if not isinstance(node, COMMON_NODES):
            raise ContractViolationError(
                f"bounded nesting is defined for C, C[t] and Ca nodes, not {type(node).__name__}"
            )
        if k < 1:
            raise ContractViolationError(f"nesting depth must be positive, got {k}")
        kind = reach_kind_of(node)
        g = self.resolve_group(node.group)
        points = self.model.points

        level = self.extension(node.f).points
        levels: List[FrozenSet[Point]] = []
        for _ in range(k):
            level = frozenset(p for p in points if self._everyone_clause(g, kind, level, p))
            levels.append(level)
        return levels

    def bounded_nesting_oracle(self, node: Formula, p: Point, k: int) -> bool:
        """E^1 & .. & E^k of the C node's argument, at p

        For k >= number of points this equals check(node, p).

        Raises:
            ContractViolationError: node is not a common belief node, or k < 1
        """
        self.model.require_point(p)
        return all(p in level for level in self.nesting_levels(node, k))


_SESSIONS: Dict[int, Tuple[Model, Checker]] = {}
_MAX_SESSIONS = 8


def session(m: Model) -> Checker:
    """Shared Checker for m, used by the module level functions"""
    entry = _SESSIONS.get(id(m))
    if entry is not None and entry[0] is m:
        return entry[1]
    checker = Checker(m)
    if len(_SESSIONS) >= _MAX_SESSIONS:
        _SESSIONS.pop(next(iter(_SESSIONS)))
    _SESSIONS[id(m)] = (m, checker)
    return checker


def check(m: Model, f: Formula, p: Point) -> bool:
    return session(m).check(f, p)


def extension(m: Model, f: Formula) -> Extension:
    return session(m).extension(f)


def reachable_set(m: Model, s: GroupLike, p: Point, kind: ReachKind) -> FrozenSet[Point]:
    return session(m).reachable_set(s, p, kind)


def bounded_nesting_oracle(m: Model, node: Formula, p: Point, k: int) -> bool:
    return session(m).bounded_nesting_oracle(node, p, k)
