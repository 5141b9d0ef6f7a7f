"""
The two generals ambush stories

Time steps: 0 is the morning Y lays the traps, 1 is 11:30 (a false "Z captured" message
reaches Y), 2 is noon when Z arrives, 3 afterwards. In the action-stamped telling Y lays
two sets of traps (south at 0, west at 1) and Z springs the ambush at 3.
"""

from belief_checker.model import Model, ModelBuilder, Point
from belief_checker.scenarios.scenario import Expectation, Scenario

GENERALS = ("Y", "Z")


def generals_timestamped_model() -> Model:
    b = ModelBuilder(GENERALS)
    for var in ("PLAN", "TRAPS", "ARRIVED", "CAPTURE_MSG"):
        b.variable(var, ["0", "1"])

    b.run("actual", PLAN=[1, 1, 1, 1], TRAPS=[1, 1, 1, 1], ARRIVED=[0, 0, 1, 1], CAPTURE_MSG=[0, 1, 1, 1])
    # Z was really captured and never comes
    b.run("captured", PLAN=[0, 0, 0, 0], TRAPS=[1, 1, 1, 1], ARRIVED=[0, 0, 0, 0], CAPTURE_MSG=[0, 1, 1, 1])
    # no enemy showed up, nothing to ambush
    b.run("noenemy", PLAN=[0, 0, 0, 0], TRAPS=[0, 0, 0, 0], ARRIVED=[0, 0, 1, 1], CAPTURE_MSG=[0, 0, 0, 0])

    for n in range(4):
        yz = [Point("actual", n), Point("captured", n)]
        if n == 0:
            b.believe("Y", yz, [Point("actual", 0)])
        else:
            # the capture message is believed from 11:30 on
            b.believe("Y", yz, [Point("captured", n)])
        b.believe("Y", [Point("noenemy", n)], [Point("noenemy", n)])

        if n < 2:
            b.believe("Z", b.points(times=[n]), [Point("noenemy", n)])
        else:
            for p in b.points(times=[n]):
                b.believe("Z", [p], [p])

    b.rigid_group("G", GENERALS)
    b.timestamp(
        "plan",
        {
            "Y": {r: 0 for r in ("actual", "captured", "noenemy")},
            "Z": {r: 2 for r in ("actual", "captured", "noenemy")},
        },
    )
    return b.build()


def build_generals_timestamped() -> Scenario:
    return Scenario(
        name="generals1",
        title="Generals, time-stamped common belief",
        model=generals_timestamped_model(),
        expectations=[
            Expectation.prop("valid", True),
            Expectation.formula("C{Y,Z}(PLAN=1)", False, "all", "no point ever has common belief of the plan"),
            Expectation.formula(
                "C[t:plan]{Y,Z}(PLAN=1)", True, "run:actual", "common belief stamped at the trap and arrival times"
            ),
            Expectation.formula("C[t:plan]{G}(TRAPS=1)", True, "run:actual"),
            Expectation.formula("C[t:plan]{Y,Z}(PLAN=1)", False, "run:captured"),
            Expectation.formula("B_Y(PLAN=1)", True, "point:actual,0", "Y believes the plan when laying traps"),
            Expectation.formula("B_Y(PLAN=1)", False, "point:actual,1", "the false capture message arrives"),
            Expectation.prop("stamp_embedding:G:plan:PLAN=1", True),
        ],
    )


def generals_actionstamped_model(y_doubts_west: bool = False) -> Model:
    """Build the action-stamped model

    Args:
        y_doubts_west: Y lays the west traps believing Z was captured (used to show that a
            single time stamp misses the second act)
    """
    b = ModelBuilder(GENERALS)
    for var in ("PLAN", "SOUTH_TRAPS", "WEST_TRAPS", "ARRIVED"):
        b.variable(var, ["0", "1"])

    b.run("actual", PLAN=[1] * 5, SOUTH_TRAPS=[1] * 5, WEST_TRAPS=[0, 1, 1, 1, 1], ARRIVED=[0, 0, 0, 1, 1])
    b.run("captured", PLAN=[0] * 5, SOUTH_TRAPS=[1] * 5, WEST_TRAPS=[0, 1, 1, 1, 1], ARRIVED=[0] * 5)
    b.run("noenemy", PLAN=[0] * 5, SOUTH_TRAPS=[0] * 5, WEST_TRAPS=[0] * 5, ARRIVED=[0, 0, 0, 1, 1])

    for n in range(5):
        yz = [Point("actual", n), Point("captured", n)]
        if n == 0 or (n == 1 and not y_doubts_west):
            b.believe("Y", yz, [Point("actual", n)])
        else:
            b.believe("Y", yz, [Point("captured", n)])
        b.believe("Y", [Point("noenemy", n)], [Point("noenemy", n)])

        if n < 3:
            b.believe("Z", b.points(times=[n]), [Point("noenemy", n)])
        else:
            for p in b.points(times=[n]):
                b.believe("Z", [p], [p])

    b.rigid_group("G", GENERALS)
    y_acts = b.points("actual", "captured", times=[0, 1])
    b.acting("Y", "G", y_acts)
    b.acting("Z", "G", [Point("actual", 3)])
    b.should_act("Y", "G", y_acts)
    b.should_act("Z", "G", [Point("actual", 3), Point("captured", 3)])

    runs = ("actual", "captured", "noenemy")
    b.timestamp("south", {"Y": {r: 0 for r in runs}, "Z": {r: 3 for r in runs}})
    b.timestamp("west", {"Y": {r: 1 for r in runs}, "Z": {r: 3 for r in runs}})
    return b.build()


def build_generals_actionstamped() -> Scenario:
    return Scenario(
        name="generals2",
        title="Generals, action-stamped common belief",
        model=generals_actionstamped_model(),
        expectations=[
            Expectation.prop("valid", True),
            Expectation.formula("Ca{Y,Z}(PLAN=1)", True, "all", "action-stamped common belief is achieved"),
            Expectation.formula("C{Y,Z}(PLAN=1)", False, "run:actual"),
            Expectation.prop("stamp_certifies:G:south:PLAN=1", False, "the west traps are not stamped"),
            Expectation.prop("stamp_certifies:G:west:PLAN=1", False, "the south traps are not stamped"),
            Expectation.prop("jb:G", True),
            Expectation.prop("theorem_1_2:G", True),
            Expectation.prop("chi_alw:G", True),
        ],
    )
