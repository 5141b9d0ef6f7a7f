"""
Two bank robbers who each bypass the alarm they know about

Both act at time 1 of the actual run, but neither has any idea whether the other will act:
each considers possible a run where it acts alone. Those solo acts are flagged under the
group "solo", not "crew".
"""

from belief_checker.model import Model, ModelBuilder, Point
from belief_checker.scenarios.scenario import Expectation, Scenario

HORIZON = 3
RUNS = ("actual", "j_alone", "h_alone")


def bank_robbers_model() -> Model:
    b = ModelBuilder(("J", "H"))
    b.variable("VAULT_OPEN", ["0", "1"])
    b.run("actual", VAULT_OPEN=[0, 0, 1])
    b.run("j_alone", VAULT_OPEN=[0, 0, 0])
    b.run("h_alone", VAULT_OPEN=[0, 0, 0])

    for n in range(HORIZON):
        j_view = [Point("actual", n), Point("j_alone", n)]
        h_view = [Point("actual", n), Point("h_alone", n)]
        b.believe("J", j_view, j_view)
        b.believe("J", [Point("h_alone", n)], [Point("h_alone", n)])
        b.believe("H", h_view, h_view)
        b.believe("H", [Point("j_alone", n)], [Point("j_alone", n)])

    b.rigid_group("crew", ("J", "H"))
    b.rigid_group("solo", ("J", "H"))
    for agent in ("J", "H"):
        b.should_act(agent, "crew", b.points(times=[1]))
        b.acting(agent, "crew", [Point("actual", 1)])
    b.acting("J", "solo", [Point("j_alone", 1)])
    b.acting("H", "solo", [Point("h_alone", 1)])
    return b.build()


def build_bank_robbers() -> Scenario:
    return Scenario(
        name="bank_robbers",
        title="Bank robbers, joint behavior fails",
        model=bank_robbers_model(),
        expectations=[
            Expectation.prop("valid", True),
            Expectation.formula("chi{crew}", True, "run:actual", "both play their part"),
            Expectation.prop("jb:crew", False, "neither has an inkling the other will help"),
            Expectation.formula("Ca{crew}(chi{crew})", False, "run:actual"),
            Expectation.prop("theorem_1_2:crew", True),
            Expectation.prop("chi_alw:crew", True),
        ],
    )
