"""
Joint behavior

chi{S} holds on a run when every member of S that should act at a point also acts there.
JB_S holds in a model when every acting member believes chi{S} whenever it acts. The
verify_theorem_* functions compare these model-level properties with action-stamped common
belief (Ca) at every point; the two sides are proved equivalent, so a mismatch always means
a bug in this package.
"""

import logging
from dataclasses import dataclass, field, replace

from typing import Any, Dict, List, Optional, Tuple, Union

from belief_checker.checker import Checker, Extension, session
from belief_checker.errors import ContractViolationError
from belief_checker.formula.ast import (
    AgentSet,
    Alw,
    Atom,
    Believes,
    Chi,
    CommonA,
    CommonT,
    Formula,
    GroupName,
    GroupRef,
    Implies,
    conjunction,
    render,
)
from belief_checker.model import (
    ACTING,
    MEMBER,
    SHOULD_ACT,
    ActionFlags,
    IndexicalGroup,
    Model,
    Point,
    TimeStampFn,
    flag_variable,
)

logger = logging.getLogger(__name__)

GroupArg = Union[str, IndexicalGroup, GroupRef]

MISMATCH_NOTE = (
    "implementation bug: the two sides are proved equivalent on every model, "
    "this mismatch is a defect in the checker, not a counterexample"
)


@dataclass
class JbReport:
    group: str
    holds: bool
    violations: List[Tuple[Point, str]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "group": self.group,
            "holds": self.holds,
            "violations": [{"point": [p.run, p.time], "agent": a} for p, a in self.violations],
        }


@dataclass
class TheoremReport:
    """Outcome of one theorem check on one model

    Attributes:
        theorems: (1, 2) for chi{S}, (3, 4) for an arbitrary formula
        group: group name
        phi: rendered formula believed by acting members
        left: every acting member believes phi when it acts
        right: Ca{S}(phi) holds at every point
        equivalence_respected: left == right
        witness_point: point where the true side's counterpart fails (mismatch only)
        witness_agent: acting agent at witness_point, if the left side failed
        note: explanation of a mismatch, empty otherwise
    """

    theorems: Tuple[int, int]
    group: str
    phi: str
    left: bool
    right: bool
    equivalence_respected: bool
    witness_point: Optional[Point] = None
    witness_agent: Optional[str] = None
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorems": list(self.theorems),
            "group": self.group,
            "phi": self.phi,
            "left": self.left,
            "right": self.right,
            "equivalence_respected": self.equivalence_respected,
            "witness": None
            if self.witness_point is None
            else {
                "point": [self.witness_point.run, self.witness_point.time],
                "agent": self.witness_agent,
            },
            "note": self.note,
        }


@dataclass
class StampCertification:
    """Whether a single time stamp function captures a group's acting points

    Attributes:
        stamp: stamp function name
        uncovered: acting (point, agent) pairs that the stamp does not select
        ct_everywhere: C[t:stamp]{S}(phi) holds at every point
        ca_everywhere: Ca{S}(phi) holds at every point
    """

    stamp: str
    group: str
    phi: str
    uncovered: List[Tuple[Point, str]]
    ct_everywhere: bool
    ca_everywhere: bool

    @property
    def certifies(self) -> bool:
        return not self.uncovered and self.ct_everywhere

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stamp": self.stamp,
            "group": self.group,
            "phi": self.phi,
            "certifies": self.certifies,
            "uncovered": [{"point": [p.run, p.time], "agent": a} for p, a in self.uncovered],
            "ct_everywhere": self.ct_everywhere,
            "ca_everywhere": self.ca_everywhere,
        }


def _session(m: Model, checker: Optional[Checker]) -> Checker:
    if checker is None:
        return session(m)
    if checker.model is not m:
        raise ContractViolationError("checker session belongs to another model")
    return checker


def group_ref(m: Model, s: GroupArg) -> GroupRef:
    """Formula-level reference for a group argument"""
    if isinstance(s, (GroupName, AgentSet)):
        return s
    if isinstance(s, str):
        m.group(s)
        return GroupName(s)
    if m.groups.get(s.name) == s:
        return GroupName(s.name)
    if s.rigid is not None:
        return AgentSet(s.rigid)
    if s.name in m.groups:
        raise ContractViolationError(f"indexical group {s.name} differs from the declared group of that name")
    raise ContractViolationError(f"indexical group {s.name} is not declared in the model")


def _declared_name(m: Model, s: GroupArg) -> str:
    ref = group_ref(m, s)
    if not isinstance(ref, GroupName):
        raise ContractViolationError(f"group {{{ref.render()}}} must be declared in the model to carry flags")
    return ref.name


def chi_extension(m: Model, s: GroupArg, checker: Optional[Checker] = None) -> Extension:
    return _session(m, checker).extension(Chi(group_ref(m, s)))


def _acting_pairs(c: Checker, g: IndexicalGroup):
    m = c.model
    for p in m.points:
        for agent in sorted(g.members_at(p)):
            if m.flags.acting_at(agent, g.name, p):
                yield p, agent


def _acting_believers_fail(c: Checker, ref: GroupRef, phi: Formula) -> List[Tuple[Point, str]]:
    g = c.resolve_group(ref)
    return [(p, agent) for p, agent in _acting_pairs(c, g) if not c.check(Believes(agent, phi), p)]


def check_jb(m: Model, s: GroupArg, checker: Optional[Checker] = None) -> JbReport:
    """Scan every (point, member) pair for ACTING[i,S] without B_i(chi{S})"""
    c = _session(m, checker)
    ref = group_ref(m, s)
    violations = _acting_believers_fail(c, ref, Chi(ref))
    logger.debug("JB %s: %d violation(s)", ref.render(), len(violations))
    return JbReport(group=ref.render(), holds=not violations, violations=violations)


def _first_failure(c: Checker, f: Formula) -> Optional[Point]:
    holds = c.extension(f).points
    for p in c.model.points:
        if p not in holds:
            return p
    return None


def _theorem_report(
    c: Checker, ref: GroupRef, phi: Formula, theorems: Tuple[int, int]
) -> TheoremReport:
    failures = _acting_believers_fail(c, ref, phi)
    left = not failures
    ca = CommonA(ref, phi)
    ca_failure = _first_failure(c, ca)
    right = ca_failure is None

    report = TheoremReport(
        theorems=theorems,
        group=ref.render(),
        phi=render(phi),
        left=left,
        right=right,
        equivalence_respected=left == right,
    )
    if left and not right:
        report.witness_point = ca_failure
    elif right and not left:
        report.witness_point, report.witness_agent = failures[0]
    if not report.equivalence_respected:
        report.note = MISMATCH_NOTE
        logger.error("theorems %s on group %s: %s", theorems, ref.render(), MISMATCH_NOTE)
    return report


def verify_theorem_1_2(m: Model, s: GroupArg, checker: Optional[Checker] = None) -> TheoremReport:
    """JB_S holds iff Ca{S}(chi{S}) holds at every point"""
    ref = group_ref(m, s)
    return _theorem_report(_session(m, checker), ref, Chi(ref), (1, 2))


def verify_theorem_3_4(
    m: Model, s: GroupArg, phi: Formula, checker: Optional[Checker] = None
) -> TheoremReport:
    """Acting members always believe phi iff Ca{S}(phi) holds at every point"""
    ref = group_ref(m, s)
    return _theorem_report(_session(m, checker), ref, phi, (3, 4))


def chi_alw_encoding(m: Model, s: GroupArg) -> Formula:
    """chi{S} rewritten with ALW and the MEMBER / SHOULD_ACT / ACTING flag atoms"""
    name = _declared_name(m, s)
    clauses: List[Formula] = []
    for agent in m.agents:
        member = Atom(flag_variable(MEMBER, agent, name), "1")
        should = Atom(flag_variable(SHOULD_ACT, agent, name), "1")
        acting = Atom(flag_variable(ACTING, agent, name), "1")
        clauses.append(Implies(member, Implies(should, acting)))
    return Alw(conjunction(clauses))


def chi_alw_encoding_equiv(m: Model, s: GroupArg, checker: Optional[Checker] = None) -> bool:
    c = _session(m, checker)
    return chi_extension(m, s, c).points == c.extension(chi_alw_encoding(m, s)).points


def stamp_certification(
    m: Model, s: GroupArg, stamp: str, phi: Formula, checker: Optional[Checker] = None
) -> StampCertification:
    """Compare a single time stamp function with the group's acting points"""
    c = _session(m, checker)
    ref = group_ref(m, s)
    g = c.resolve_group(ref)
    t = m.stamp(stamp)
    uncovered = [(p, agent) for p, agent in _acting_pairs(c, g) if t.at(agent, p.run) != p.time]
    return StampCertification(
        stamp=stamp,
        group=ref.render(),
        phi=render(phi),
        uncovered=uncovered,
        ct_everywhere=_first_failure(c, CommonT(ref, stamp, phi)) is None,
        ca_everywhere=_first_failure(c, CommonA(ref, phi)) is None,
    )


def embed_stamp_as_flags(m: Model, s: GroupArg, stamp: str) -> Model:
    """Copy of m whose ACTING flags for S hold exactly at the stamped points

    Agent i acts at (r, t(i,r)) when it is a member of S there; C[t:stamp]{S} and Ca{S} then
    agree at every point of the returned model.
    """
    name = _declared_name(m, s)
    g = m.group(name)
    t = m.stamp(stamp)
    acting = {key: pts for key, pts in m.flags.acting.items() if key[1] != name}
    for agent in m.agents:
        points = set()
        for run_id in m.runs:
            tp = Point(run_id, t.at(agent, run_id))
            if agent in g.members_at(tp):
                points.add(tp)
        if points:
            acting[(agent, name)] = frozenset(points)
    return m.with_flags(ActionFlags(acting=acting, should_act=m.flags.should_act))


def clock_stamp(m: Model, name: str, clock: int) -> TimeStampFn:
    """Stamp every agent at the same clock reading: t(i, r) = min(clock, H(r) - 1)"""
    if clock < 0:
        raise ContractViolationError(f"clock reading must be >= 0, got {clock}")
    return TimeStampFn(
        name,
        {(agent, run_id): min(clock, run.horizon - 1) for agent in m.agents for run_id, run in m.runs.items()},
    )


def with_timestamp(m: Model, t: TimeStampFn) -> Model:
    return replace(m, timestamps={**m.timestamps, t.name: t})
