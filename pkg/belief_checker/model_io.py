"""
JSON model format

Top-level keys: ``agents``, ``variables``, ``runs``, ``beliefs``, ``groups``, ``timestamps``,
``acting`` and ``should_act``. Times are 0-based integers, values are stored as strings.
See doc/model_format.md for a complete example.
"""

import json
from pathlib import Path

from typing import Any, Dict, Iterable, List, Tuple, Union

from belief_checker.errors import ModelFormatError
from belief_checker.model import (
    ActionFlags,
    BeliefRelation,
    IndexicalGroup,
    Model,
    Point,
    Run,
    TimeStampFn,
)

TOP_LEVEL_KEYS = ("agents", "variables", "runs", "beliefs", "groups", "timestamps", "acting", "should_act")
REQUIRED_KEYS = ("agents", "variables", "runs", "beliefs")
RUN_KEYS = ("horizon", "valuation")


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ModelFormatError(msg)


def _check_keys(obj: Dict[str, Any], allowed: Iterable[str], where: str) -> None:
    unknown = sorted(set(obj) - set(allowed))
    _expect(not unknown, f"{where}: unknown key(s) {unknown}")


def _point(obj: Any, where: str) -> Point:
    _expect(
        isinstance(obj, list) and len(obj) == 2 and isinstance(obj[0], str) and _is_int(obj[1]),
        f"{where}: a point is a [run, time] pair, got {obj!r}",
    )
    return Point(obj[0], obj[1])


def _point_key(text: str, where: str) -> Point:
    run, sep, time = text.rpartition(",")
    _expect(bool(sep) and bool(run) and time.strip().lstrip("-").isdigit(), f"{where}: bad point key {text!r}")
    return Point(run, int(time))


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def model_from_dict(doc: Dict[str, Any]) -> Model:
    """Build a Model from a parsed JSON document

    Only the document shape is checked here; semantic rules (KD45, totality, ranges) are
    reported by validate_model.

    Raises:
        ModelFormatError: unknown keys, wrong shapes, non-integer stamps
    """
    _expect(isinstance(doc, dict), "model document must be a JSON object")
    _check_keys(doc, TOP_LEVEL_KEYS, "model")
    for key in REQUIRED_KEYS:
        _expect(key in doc, f"model: missing key {key!r}")

    agents = doc["agents"]
    _expect(isinstance(agents, list) and all(isinstance(a, str) for a in agents), "agents: list of strings")

    variables = doc["variables"]
    _expect(isinstance(variables, dict), "variables: object name -> domain list")
    domains: Dict[str, Tuple[str, ...]] = {}
    for name, domain in variables.items():
        _expect(isinstance(domain, list), f"variables.{name}: domain must be a list")
        domains[name] = tuple(str(v) for v in domain)

    runs: Dict[str, Run] = {}
    _expect(isinstance(doc["runs"], dict), "runs: object id -> run")
    for run_id, run in doc["runs"].items():
        where = f"runs.{run_id}"
        _expect(isinstance(run, dict), f"{where}: object expected")
        _check_keys(run, RUN_KEYS, where)
        _expect(_is_int(run.get("horizon")), f"{where}.horizon: integer expected")
        table = run.get("valuation", {})
        _expect(isinstance(table, dict), f"{where}.valuation: object time -> row")
        rows: List[Dict[str, str]] = [{} for _ in range(max(run["horizon"], 0))]
        for time, row in table.items():
            _expect(time.isdigit(), f"{where}.valuation: time key {time!r} is not an integer")
            _expect(isinstance(row, dict), f"{where}.valuation.{time}: object var -> value")
            n = int(time)
            _expect(n < len(rows), f"{where}.valuation: time {n} beyond horizon {run['horizon']}")
            rows[n] = {var: str(value) for var, value in row.items()}
        runs[run_id] = Run(run_id, run["horizon"], tuple(rows))

    beliefs: Dict[str, BeliefRelation] = {}
    _expect(isinstance(doc["beliefs"], dict), "beliefs: object agent -> edge list")
    for agent, edges in doc["beliefs"].items():
        where = f"beliefs.{agent}"
        _expect(isinstance(edges, list), f"{where}: edge list expected")
        parsed = set()
        for edge in edges:
            _expect(isinstance(edge, list) and len(edge) == 2, f"{where}: edge is a [point, point] pair")
            parsed.add((_point(edge[0], where), _point(edge[1], where)))
        beliefs[agent] = BeliefRelation(agent, frozenset(parsed))

    groups: Dict[str, IndexicalGroup] = {}
    raw_groups = doc.get("groups", {})
    _expect(isinstance(raw_groups, dict), "groups: object name -> membership")
    for name, membership in raw_groups.items():
        where = f"groups.{name}"
        _expect(isinstance(membership, dict), f"{where}: object expected")
        if "rigid" in membership:
            _expect(len(membership) == 1, f"{where}: a rigid group has only the 'rigid' key")
            _expect(isinstance(membership["rigid"], list), f"{where}.rigid: agent list expected")
            groups[name] = IndexicalGroup.rigid_group(name, membership["rigid"])
        else:
            table = {}
            for key, members in membership.items():
                _expect(isinstance(members, list), f"{where}.{key}: agent list expected")
                table[_point_key(key, where)] = frozenset(members)
            groups[name] = IndexicalGroup(name, table)

    timestamps: Dict[str, TimeStampFn] = {}
    raw_stamps = doc.get("timestamps", {})
    _expect(isinstance(raw_stamps, dict), "timestamps: object name -> agent -> run -> time")
    for name, per_agent in raw_stamps.items():
        where = f"timestamps.{name}"
        _expect(isinstance(per_agent, dict), f"{where}: object agent -> run -> time")
        stamps: Dict[Tuple[str, str], int] = {}
        for agent, per_run in per_agent.items():
            _expect(isinstance(per_run, dict), f"{where}.{agent}: object run -> time")
            for run_id, n in per_run.items():
                # a stamp picks exactly one time per (agent, run)
                _expect(_is_int(n), f"{where}.{agent}.{run_id}: one integer time expected, got {n!r}")
                stamps[(agent, run_id)] = n
        timestamps[name] = TimeStampFn(name, stamps)

    flags = ActionFlags(
        acting=_flag_table(doc.get("acting", {}), "acting"),
        should_act=_flag_table(doc.get("should_act", {}), "should_act"),
    )

    return Model(
        agents=tuple(agents),
        variables=domains,
        runs=runs,
        beliefs=beliefs,
        groups=groups,
        timestamps=timestamps,
        flags=flags,
    )


def _flag_table(raw: Any, where: str) -> Dict[Tuple[str, str], frozenset]:
    _expect(isinstance(raw, dict), f"{where}: object group -> agent -> point list")
    table = {}
    for group, per_agent in raw.items():
        _expect(isinstance(per_agent, dict), f"{where}.{group}: object agent -> point list")
        for agent, points in per_agent.items():
            _expect(isinstance(points, list), f"{where}.{group}.{agent}: point list expected")
            table[(agent, group)] = frozenset(_point(p, f"{where}.{group}.{agent}") for p in points)
    return table


def model_to_dict(m: Model) -> Dict[str, Any]:
    """Canonical JSON document for a model (sorted keys and lists)"""
    doc: Dict[str, Any] = {
        "agents": list(m.agents),
        "variables": {name: list(domain) for name, domain in sorted(m.variables.items())},
        "runs": {
            run_id: {
                "horizon": run.horizon,
                "valuation": {str(n): dict(sorted(row.items())) for n, row in enumerate(run.valuation)},
            }
            for run_id, run in sorted(m.runs.items())
        },
        "beliefs": {
            agent: [[[a.run, a.time], [b.run, b.time]] for a, b in sorted(rel.edges)]
            for agent, rel in sorted(m.beliefs.items())
        },
        "groups": {},
        "timestamps": {},
        "acting": _flags_to_dict(m.flags.acting),
        "should_act": _flags_to_dict(m.flags.should_act),
    }
    for name, g in sorted(m.groups.items()):
        if g.rigid is not None:
            doc["groups"][name] = {"rigid": sorted(g.rigid)}
        else:
            doc["groups"][name] = {str(p): sorted(members) for p, members in sorted(g.membership.items())}
    for name, t in sorted(m.timestamps.items()):
        per_agent: Dict[str, Dict[str, int]] = {}
        for (agent, run_id), n in sorted(t.stamps.items()):
            per_agent.setdefault(agent, {})[run_id] = n
        doc["timestamps"][name] = per_agent
    return doc


def _flags_to_dict(table) -> Dict[str, Dict[str, List[List[Union[str, int]]]]]:
    out: Dict[str, Dict[str, List[List[Union[str, int]]]]] = {}
    for (agent, group), points in sorted(table.items()):
        out.setdefault(group, {})[agent] = [[p.run, p.time] for p in sorted(points)]
    return out


def loads_model(text: str) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"model is not valid JSON: {e}") from e
    return model_from_dict(doc)


def load_model(path: Union[str, Path]) -> Model:
    """Read a model from a JSON file

    Raises:
        ModelFormatError: the document does not follow the model format
    """
    with open(path, "r", encoding="utf-8") as fp:
        return loads_model(fp.read())


def dumps_model(m: Model) -> str:
    return json.dumps(model_to_dict(m), indent=2, sort_keys=False)


def dump_model(m: Model, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(dumps_model(m))
        fp.write("\n")
