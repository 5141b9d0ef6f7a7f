"""
Firefighters arriving at and leaving a fire

S is the indexical group of firefighters on the scene. F3 is already acting at time 0 but
only joins S at time 2, so that act does not count for S. F4 never joins S; its acts are
declared under another group.
"""

from belief_checker.model import Model, ModelBuilder, Point
from belief_checker.scenarios.scenario import Expectation, Scenario

FIREFIGHTERS = ("F1", "F2", "F3", "F4")
HORIZON = 4


def firefighters_model() -> Model:
    b = ModelBuilder(FIREFIGHTERS)
    b.variable("CLEARED", ["0", "1"])
    b.run("actual", CLEARED=[1] * HORIZON)
    # the building collapses before anyone is out
    b.run("collapse", CLEARED=[0] * HORIZON)

    on_scene = [{"F1"}, {"F1", "F2"}, {"F1", "F2", "F3"}, {"F2", "F3"}]
    table = {Point("actual", n): members for n, members in enumerate(on_scene)}
    table.update({p: {"F1"} for p in b.points("collapse")})
    b.indexical_group("S", table)
    b.rigid_group("all_firefighters", ("F1", "F2", "F3"))
    b.rigid_group("coffee", ("F4",))

    for n in range(HORIZON):
        actual, collapse = Point("actual", n), Point("collapse", n)
        for agent in ("F1", "F2", "F3"):
            b.believe(agent, [collapse], [collapse])
            if agent == "F3" and n == 0:
                b.believe(agent, [actual], [collapse])
            else:
                b.believe(agent, [actual], [actual])
        b.believe("F4", [actual, collapse], [collapse])

    acts = {"F1": Point("actual", 0), "F2": Point("actual", 1), "F3": Point("actual", 2)}
    for group in ("S", "all_firefighters"):
        for agent, p in acts.items():
            b.acting(agent, group, [p])
        b.acting("F3", group, [Point("actual", 0)])
    for agent, p in acts.items():
        b.should_act(agent, "S", [p])
    b.acting("F4", "coffee", [Point("actual", 1)])

    b.timestamp(
        "arrival",
        {
            agent: {"actual": n, "collapse": n}
            for agent, n in (("F1", 0), ("F2", 1), ("F3", 2), ("F4", 0))
        },
    )
    return b.build()


def build_firefighters_indexical() -> Scenario:
    return Scenario(
        name="firefighters",
        title="Firefighters, indexical group",
        model=firefighters_model(),
        expectations=[
            Expectation.prop("valid", True),
            Expectation.formula("MEMBER[F3,S]=1", False, "point:actual,0"),
            Expectation.formula("MEMBER[F3,S]=1", True, "point:actual,2"),
            Expectation.formula("Ca{S}(CLEARED=1)", True, "all", "only members' acts are stamps"),
            Expectation.formula("Ea{S}(CLEARED=1)", True, "all"),
            Expectation.formula(
                "Ca{all_firefighters}(CLEARED=1)", False, "run:actual", "F3's early act counts for a rigid group"
            ),
            Expectation.formula("E[t:arrival]{S}(CLEARED=1)", True, "run:actual"),
            Expectation.prop("jb:S", True),
            Expectation.prop("theorem_1_2:S", True),
            Expectation.prop("chi_alw:S", True),
        ],
    )
