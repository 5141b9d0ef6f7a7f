"""
Formula abstract syntax

Nodes are frozen dataclasses, so structurally equal formulas compare and hash equal; the
checker uses them directly as memo keys. Or and Implies only exist in the concrete syntax:
``A | B`` is ``!(!A & !B)`` and ``A -> B`` is ``!(!!A & !B)``.
"""

from dataclasses import dataclass, fields

from typing import FrozenSet, Iterator, List, Tuple, Union


@dataclass(frozen=True)
class GroupName:
    """A group declared in the model (rigid or indexical)"""

    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class AgentSet:
    """An inline rigid group, e.g. ``{Y,Z}``"""

    agents: FrozenSet[str]

    def render(self) -> str:
        return ",".join(sorted(self.agents))


GroupRef = Union[GroupName, AgentSet]


class Formula:
    """Base class of every formula node"""

    def children(self) -> Tuple["Formula", ...]:
        return tuple(getattr(self, f.name) for f in fields(self) if isinstance(getattr(self, f.name), Formula))  # type: ignore[arg-type]

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    variable: str
    value: str


@dataclass(frozen=True)
class Not(Formula):
    f: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Believes(Formula):
    agent: str
    f: Formula


@dataclass(frozen=True)
class Everyone(Formula):
    group: GroupRef
    f: Formula


@dataclass(frozen=True)
class Common(Formula):
    group: GroupRef
    f: Formula


@dataclass(frozen=True)
class EveryoneT(Formula):
    group: GroupRef
    stamp: str
    f: Formula


@dataclass(frozen=True)
class CommonT(Formula):
    group: GroupRef
    stamp: str
    f: Formula


@dataclass(frozen=True)
class EveryoneA(Formula):
    group: GroupRef
    f: Formula


@dataclass(frozen=True)
class CommonA(Formula):
    group: GroupRef
    f: Formula


@dataclass(frozen=True)
class Chi(Formula):
    group: GroupRef


@dataclass(frozen=True)
class Alw(Formula):
    f: Formula


COMMON_NODES = (Common, CommonT, CommonA)
# truth of these is constant along a run
RUN_PROPERTY_NODES = (EveryoneT, CommonT, EveryoneA, CommonA, Chi, Alw)


def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Or(Not(left), right)


def conjunction(items: List[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is not representable"""
    if not items:
        raise ValueError("empty conjunction")
    out = items[0]
    for item in items[1:]:
        out = And(out, item)
    return out


def everyone_of(node: Formula, f: Formula) -> Formula:
    """The E-operator matching a C-node, applied to f"""
    if isinstance(node, Common):
        return Everyone(node.group, f)
    if isinstance(node, CommonT):
        return EveryoneT(node.group, node.stamp, f)
    if isinstance(node, CommonA):
        return EveryoneA(node.group, f)
    raise TypeError(f"{type(node).__name__} is not a common belief node")


def _group(g: GroupRef) -> str:
    return "{" + g.render() + "}"


def render(f: Formula) -> str:
    """Canonical concrete syntax; parse(render(f), m) == f"""
    match f:
        case Atom(variable, value):
            return f"{variable}={value}"
        case Not(g):
            return f"!({render(g)})"
        case And(left, right):
            return f"({render(left)} & {render(right)})"
        case Believes(agent, g):
            return f"B_{agent}({render(g)})"
        case Everyone(group, g):
            return f"E{_group(group)}({render(g)})"
        case Common(group, g):
            return f"C{_group(group)}({render(g)})"
        case EveryoneT(group, stamp, g):
            return f"E[t:{stamp}]{_group(group)}({render(g)})"
        case CommonT(group, stamp, g):
            return f"C[t:{stamp}]{_group(group)}({render(g)})"
        case EveryoneA(group, g):
            return f"Ea{_group(group)}({render(g)})"
        case CommonA(group, g):
            return f"Ca{_group(group)}({render(g)})"
        case Chi(group):
            return f"chi{_group(group)}"
        case Alw(g):
            return f"ALW({render(g)})"
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> List[Formula]:
    """Post-order listing, each distinct node once (children before parents)"""
    seen = set()
    out: List[Formula] = []

    def visit(node: Formula) -> None:
        if node in seen:
            return
        for child in node.children():
            visit(child)
        seen.add(node)
        out.append(node)

    visit(f)
    return out


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included"""
    yield f
    for child in f.children():
        yield from walk(child)


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))
