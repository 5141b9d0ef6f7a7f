"""
Rescue team R and robot B

The robot is due at time 1. In the actual run ("delayed") it arrives at 3; in "giveup" it
also arrives at 3 but R has given up hope and believes it will never come; in "noarrive"
it never comes. B cannot tell "noarrive" from "delayed" until time 3.
"""

from belief_checker.model import Model, ModelBuilder, Point
from belief_checker.scenarios.scenario import Expectation, Scenario

HORIZON = 5
RUNS = ("ontime", "delayed", "giveup", "noarrive")
ARRIVAL = {"ontime": 1, "delayed": 3, "giveup": 3}


def search_rescue_model() -> Model:
    b = ModelBuilder(("R", "B"))
    b.variable("PLAN", ["0", "1"])
    b.variable("ARRIVED", ["0", "1"])
    for run in RUNS:
        plan = 0 if run == "noarrive" else 1
        arrived = [1 if run in ARRIVAL and n >= ARRIVAL[run] else 0 for n in range(HORIZON)]
        b.run(run, PLAN=[plan] * HORIZON, ARRIVED=arrived)

    # rescuers
    b.believe("R", b.points(times=[0]), [Point("ontime", 0)])
    for n in range(1, HORIZON):
        for run in ("ontime", "delayed", "noarrive"):
            b.believe("R", [Point(run, n)], [Point(run, n)])
        b.believe("R", [Point("giveup", n)], [Point("noarrive", n)])

    # robot
    for n in range(HORIZON):
        waiting = [Point(run, n) for run in RUNS if n < 3 and not (run == "ontime" and n >= 1)]
        b.believe("B", waiting, [Point("noarrive", n), Point("delayed", n)])
        if n >= 1:
            b.believe("B", [Point("ontime", n)], [Point("ontime", n)])
        if n >= 3:
            b.believe("B", [Point("noarrive", n)], [Point("noarrive", n)])
            late = [Point("delayed", n), Point("giveup", n)]
            b.believe("B", late, late)

    b.rigid_group("team", ("R", "B"))
    b.acting("R", "team", b.points(times=[0]))
    b.should_act("R", "team", b.points(times=[0]))
    b.acting("B", "team", [Point(run, n) for run, n in ARRIVAL.items()])
    b.should_act("B", "team", [Point(run, n) for run, n in ARRIVAL.items()] + [Point("noarrive", 1)])
    return b.build()


def build_search_rescue() -> Scenario:
    return Scenario(
        name="search_rescue",
        title="Search and rescue with a delayed robot",
        model=search_rescue_model(),
        expectations=[
            Expectation.prop("valid", True),
            Expectation.formula("C{R,B}(PLAN=1)", False, "run:delayed", "common belief is never achieved"),
            Expectation.formula("Ca{R,B}(PLAN=1)", True, "all", "the task is carried out safely"),
            Expectation.formula("ALW(!(ACTING[B,team]=1))", True, "run:noarrive", "the robot never acts"),
            Expectation.prop("jb:team", True),
            Expectation.prop("theorem_1_2:team", True),
            Expectation.prop("theorem_3_4:team:PLAN=1", True),
        ],
    )
