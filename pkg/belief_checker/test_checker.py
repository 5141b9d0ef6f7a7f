import random
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from belief_checker import checker as checker_module
from belief_checker.checker import ActionStamped, Checker, Standard, TimeStamped, reach_kind_of
from belief_checker.config import CheckerOpts
from belief_checker.errors import ContractViolationError, ModelLookupError, ModelValidationError
from belief_checker.formula import parse
from belief_checker.formula.ast import (
    COMMON_NODES,
    RUN_PROPERTY_NODES,
    And,
    Atom,
    Believes,
    Common,
    CommonA,
    CommonT,
    Everyone,
    GroupName,
    Implies,
    Not,
    conjunction,
    everyone_of,
    subformulas,
)
from belief_checker.model import IndexicalGroup, ModelBuilder, Point
from belief_checker.properties import embed_stamp_as_flags
from belief_checker.scenarios.random_model import INDEXICAL_GROUP, RIGID_GROUP, STAMP, random_formula, random_model

CORPUS = CheckerOpts().corpus_size


def two_believers():
    """Y only considers run r possible, Z also considers (s,0)"""
    b = ModelBuilder(["Y", "Z"])
    b.variable("X", ["0", "1"])
    b.run("r", X=[1, 1])
    b.run("s", X=[0, 0])
    b.believe("Y", b.points(), b.points("r"))
    b.believe("Z", b.points(), b.points("r") + [Point("s", 0)])
    b.rigid_group("G", ["Y", "Z"])
    b.indexical_group("S", {Point("r", 0): ["Y"], Point("r", 1): ["Z"], Point("s", 0): [], Point("s", 1): []})
    b.timestamp("t", {"Y": {"r": 0, "s": 0}, "Z": {"r": 1, "s": 1}})
    b.acting("Z", "S", [Point("r", 1)])
    return b.build()


def common_nodes(f):
    return [node for node in subformulas(f) if isinstance(node, COMMON_NODES)]


class TestCheck(unittest.TestCase):
    def setUp(self):
        self.m = two_believers()
        self.c = Checker(self.m)
        self.r0 = Point("r", 0)

    def holds(self, text, p=None):
        return self.c.check(parse(text, self.m), p or self.r0)

    def test_belief(self):
        assert self.holds("B_Y(X=1)")
        assert not self.holds("B_Z(X=1)")
        assert self.holds("B_Y(X=1)", Point("s", 1))
        assert self.holds("B_Z(!B_Y(X=0))")

    def test_everyone_and_common(self):
        assert not self.holds("E{G}(X=1)")
        assert self.holds("E{Y}(X=1)")
        assert self.holds("C{Y}(X=1)")
        assert not self.holds("C{G}(X=1)")
        assert not self.holds("C{Y,Z}(X=1)")

    def test_indexical_standard(self):
        # S is {Y} at (r,0) and {Z} at (r,1): the chain ends at (s,0), where S is empty
        assert not self.holds("C{S}(X=1)")
        assert self.holds("E{S}(X=1)")
        assert self.holds("E{S}(X=0)", Point("s", 0))

    def test_time_stamped(self):
        # Y is a member at its stamp (r,0), Z at its stamp (r,1)
        assert self.c.step("S", self.r0, TimeStamped("t")) == self.c.step("S", Point("r", 1), TimeStamped("t"))
        assert not self.holds("C[t:t]{S}(X=1)")
        # on run s nobody is a member at its stamp
        assert self.holds("C[t:t]{S}(X=1)", Point("s", 1))

    def test_action_stamped(self):
        assert self.c.step("S", Point("s", 0), ActionStamped()) == ()
        assert set(self.c.step("S", self.r0, ActionStamped())) == {Point("r", 0), Point("r", 1), Point("s", 0)}
        assert not self.holds("Ca{S}(X=1)")
        assert self.holds("Ca{S}(X=1)", Point("s", 0))

    def test_chi_and_alw(self):
        assert self.holds("chi{S}")
        assert self.holds("ALW(X=1)", Point("r", 1))
        assert not self.holds("ALW(B_Z(X=1))")

    def test_reachable_set_excludes_unreached_seed(self):
        assert self.c.reachable_set("G", Point("s", 1), Standard()) == {Point("r", 0), Point("r", 1), Point("s", 0)}

    def test_undeclared_group_with_a_declared_name(self):
        r1, s0 = Point("r", 1), Point("s", 0)
        for declared, undeclared in (
            ("G", IndexicalGroup.rigid_group("G", ["Y"])),
            ("S", IndexicalGroup("S", {self.r0: frozenset({"Y"})})),
        ):
            for declared_first in (True, False):
                c = Checker(self.m)
                if declared_first:
                    assert c.reachable_set(declared, self.r0, Standard()) == {self.r0, r1, s0}
                assert c.reachable_set(undeclared, self.r0, Standard()) == {self.r0, r1}
                assert c.reachable_set(declared, self.r0, Standard()) == {self.r0, r1, s0}

    def test_unknown_point(self):
        with self.assertRaises(ModelLookupError):
            self.c.check(parse("X=1", self.m), Point("r", 2))

    def test_invalid_model(self):
        b = ModelBuilder(["a"])
        b.variable("X", ["0", "1"])
        b.run("r", X=[0, 1])
        b.edge("a", Point("r", 0), Point("r", 1))
        m = b.build()
        with self.assertRaises(ModelValidationError) as ctx:
            Checker(m)
        assert "serial" in ctx.exception.report.rules()
        forced = Checker(m, allow_invalid=True)
        assert forced.check(Believes("a", Atom("X", "1")), Point("r", 0))
        # no successor at all: vacuously true
        assert forced.check(Believes("a", Atom("X", "7")), Point("r", 1))

    def test_module_level_functions(self):
        f = parse("C{G}(X=1)", self.m)
        assert checker_module.check(self.m, f, self.r0) is False
        assert checker_module.extension(self.m, parse("X=1", self.m)).runs() == ["r"]
        assert checker_module.reachable_set(self.m, GroupName("G"), self.r0, Standard())
        assert checker_module.bounded_nesting_oracle(self.m, f, self.r0, 4) is False

    def test_reach_kind_of(self):
        assert reach_kind_of(parse("E{G}(X=1)", self.m)) == Standard()
        assert reach_kind_of(parse("C[t:t]{G}(X=1)", self.m)) == TimeStamped("t")
        assert reach_kind_of(parse("Ea{G}(X=1)", self.m)) == ActionStamped()
        with self.assertRaises(ContractViolationError):
            reach_kind_of(parse("B_Y(X=1)", self.m))


class TestNestingOracle(unittest.TestCase):
    def test_contract(self):
        m = two_believers()
        c = Checker(m)
        with self.assertRaises(ContractViolationError):
            c.bounded_nesting_oracle(parse("E{G}(X=1)", m), Point("r", 0), 3)
        with self.assertRaises(ContractViolationError):
            c.bounded_nesting_oracle(parse("C{G}(X=1)", m), Point("r", 0), 0)

    def test_oracle_has_its_own_one_step_clauses(self):
        m = two_believers()
        r0 = Point("r", 0)
        for text in ("C{G}(X=1)", "C[t:t]{G}(X=1)", "Ca{S}(X=1)"):
            c = Checker(m)
            node = parse(text, m)
            # a one-step relation that never moves makes every C vacuously true
            c.step = lambda group, p, kind: ()
            assert c.check(node, r0), text
            assert not c.bounded_nesting_oracle(node, r0, len(m.points)), text

    def test_oracle_equivalence(self):
        """Reachability and literal nesting agree once k reaches the number of points"""
        compared = 0
        for seed in range(CORPUS):
            m = random_model(seed)
            c = Checker(m)
            rng = random.Random(seed)
            k = len(m.points)
            for _ in range(50):
                f = random_formula(rng, m, depth=2)
                for node in common_nodes(f):
                    levels = c.nesting_levels(node, k)
                    by_nesting = frozenset.intersection(*levels)
                    assert by_nesting == c.extension(node).points, f"seed {seed}: {node}"
                    compared += 1
            p = rng.choice(m.points)
            node = CommonA(GroupName(INDEXICAL_GROUP), random_formula(rng, m, 1))
            assert c.bounded_nesting_oracle(node, p, k) == c.check(node, p)
        assert compared >= CORPUS

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.randoms(use_true_random=False))
    def test_oracle_equivalence_beyond_the_corpus(self, seed, rng):
        m = random_model(seed)
        c = Checker(m)
        k = len(m.points)
        for _ in range(10):
            for node in common_nodes(random_formula(rng, m, depth=2)):
                by_nesting = frozenset.intersection(*c.nesting_levels(node, k))
                self.assertEqual(by_nesting, c.extension(node).points, f"seed {seed}: {node}")

    def test_monotone(self):
        for seed in range(30):
            m = random_model(seed)
            c = Checker(m)
            rng = random.Random(seed)
            n = len(m.points)
            for _ in range(5):
                for node in common_nodes(random_formula(rng, m, 2)):
                    for p in m.points:
                        for k in range(1, 5):
                            if c.bounded_nesting_oracle(node, p, k + 1):
                                assert c.bounded_nesting_oracle(node, p, k)
                    # nothing new past the number of points
                    levels = c.nesting_levels(node, n + 1)
                    assert frozenset.intersection(*levels) == frozenset.intersection(*levels[:n])


class TestLaws(unittest.TestCase):
    """Validities of the logic, checked at every point of random models"""

    def valid(self, m, c, f):
        for p in m.points:
            assert c.check(f, p), f"{f} fails at ({p})"

    def test_kd45_axioms(self):
        for seed in range(40):
            m = random_model(seed)
            c = Checker(m)
            rng = random.Random(seed)
            for _ in range(10):
                phi = random_formula(rng, m, 2)
                agent = rng.choice(m.agents)
                bel = Believes(agent, phi)
                self.valid(m, c, Implies(bel, Not(Believes(agent, Not(phi)))))
                self.valid(m, c, Implies(bel, Believes(agent, bel)))
                self.valid(m, c, Implies(Not(bel), Believes(agent, Not(bel))))

    def test_fixpoint_and_introspection(self):
        for seed in range(40):
            m = random_model(seed)
            c = Checker(m)
            rng = random.Random(seed)
            phi = random_formula(rng, m, 2)
            for node in (
                Common(GroupName(RIGID_GROUP), phi),
                Common(GroupName(INDEXICAL_GROUP), phi),
                CommonT(GroupName(INDEXICAL_GROUP), STAMP, phi),
                CommonA(GroupName(RIGID_GROUP), phi),
            ):
                # C(phi) <-> E(phi & C(phi))
                fixpoint = everyone_of(node, And(phi, node))
                self.valid(m, c, Implies(node, fixpoint))
                self.valid(m, c, Implies(fixpoint, node))
                self.valid(m, c, Implies(node, everyone_of(node, node)))

    def test_everyone_is_conjunction_of_beliefs(self):
        for seed in range(40):
            m = random_model(seed)
            c = Checker(m)
            phi = random_formula(random.Random(seed), m, 2)
            members = sorted(m.group(RIGID_GROUP).rigid)
            everyone = Everyone(GroupName(RIGID_GROUP), phi)
            beliefs = conjunction([Believes(a, phi) for a in members])
            assert c.extension(everyone).points == c.extension(beliefs).points

    def test_run_properties_are_constant_along_runs(self):
        for seed in range(40):
            m = random_model(seed)
            c = Checker(m)
            rng = random.Random(seed)
            for _ in range(20):
                for node in subformulas(random_formula(rng, m, 3)):
                    if not isinstance(node, RUN_PROPERTY_NODES):
                        continue
                    for run_id in m.runs:
                        values = {c.check(node, p) for p in m.run_points(run_id)}
                        assert len(values) == 1, f"seed {seed}: {node} varies on {run_id}"


class TestExtension(unittest.TestCase):
    def test_matches_pointwise_check(self):
        for seed in range(40):
            m = random_model(seed)
            rng = random.Random(seed)
            by_sets = Checker(m)
            for _ in range(20):
                f = random_formula(rng, m, 3)
                pointwise = Checker(m)
                expected = frozenset(p for p in m.points if pointwise.check(f, p))
                assert by_sets.extension(f).points == expected, f"seed {seed}: {f}"


class TestStampEmbedding(unittest.TestCase):
    def test_time_stamped_equals_action_stamped_after_embedding(self):
        for seed in range(60):
            m = random_model(seed)
            phi = random_formula(random.Random(seed), m, 2)
            for group in (RIGID_GROUP, INDEXICAL_GROUP):
                c = Checker(embed_stamp_as_flags(m, group, STAMP))
                ct = c.extension(CommonT(GroupName(group), STAMP, phi)).points
                ca = c.extension(CommonA(GroupName(group), phi)).points
                assert ct == ca, f"seed {seed} group {group}"


if __name__ == "__main__":
    unittest.main()
