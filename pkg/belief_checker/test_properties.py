import random
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from belief_checker.checker import Checker
from belief_checker.config import CheckerOpts
from belief_checker.errors import ContractViolationError, ModelLookupError
from belief_checker.formula import parse
from belief_checker.formula.ast import COMMON_NODES, AgentSet, Alw, GroupName, render, subformulas
from belief_checker.misc import model_fingerprint
from belief_checker.model import IndexicalGroup, ModelBuilder, Point, validate_model
from belief_checker.model_io import model_to_dict
from belief_checker.properties import (
    MISMATCH_NOTE,
    check_jb,
    chi_alw_encoding,
    chi_alw_encoding_equiv,
    chi_extension,
    clock_stamp,
    embed_stamp_as_flags,
    group_ref,
    stamp_certification,
    verify_theorem_1_2,
    verify_theorem_3_4,
    with_timestamp,
)
from belief_checker.scenarios import SCENARIOS, evaluate
from belief_checker.scenarios.random_model import INDEXICAL_GROUP, RIGID_GROUP, STAMP, random_formula, random_model

CORPUS = CheckerOpts().corpus_size


def patrol(y_should_act=False):
    """Z acts at (r,1) as the only member of S there"""
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
    if y_should_act:
        b.should_act("Y", "S", [Point("r", 0)])
    return b.build()


def naive_jb_violations(m, group):
    """Second scan: chi per run from the flags, beliefs from the raw edge list"""
    g = m.group(group)
    chi_runs = set()
    for run_id in m.runs:
        if all(
            m.flags.acting_at(a, group, p)
            for p in m.run_points(run_id)
            for a in g.members_at(p)
            if m.flags.should_act_at(a, group, p)
        ):
            chi_runs.add(run_id)
    out = []
    for p in m.points:
        for a in sorted(g.members_at(p)):
            if not m.flags.acting_at(a, group, p):
                continue
            targets = {q for src, q in m.beliefs[a].edges if src == p}
            if any(q.run not in chi_runs for q in targets):
                out.append((p, a))
    return out


class TestJb(unittest.TestCase):
    def test_holds(self):
        m = patrol()
        report = check_jb(m, "S")
        assert report.holds
        assert report.violations == []
        assert chi_extension(m, "S").points == m.point_set

    def test_violation(self):
        m = patrol(y_should_act=True)
        report = check_jb(m, "S")
        assert not report.holds
        assert report.violations == [(Point("r", 1), "Z")]
        assert report.to_dict()["violations"] == [{"point": ["r", 1], "agent": "Z"}]
        assert chi_extension(m, "S").runs() == ["s"]

    def test_matches_second_scan(self):
        for seed in range(CORPUS):
            m = random_model(seed)
            c = Checker(m)
            for group in (RIGID_GROUP, INDEXICAL_GROUP):
                report = check_jb(m, group, c)
                assert sorted(report.violations) == sorted(naive_jb_violations(m, group)), seed
                assert report.holds == (not report.violations)

    def test_unknown_group(self):
        with self.assertRaises(ModelLookupError):
            check_jb(patrol(), "T")


class TestTheorems(unittest.TestCase):
    def test_hand_model(self):
        for y_should_act in (False, True):
            m = patrol(y_should_act)
            report = verify_theorem_1_2(m, "S")
            assert report.equivalence_respected
            assert report.left is not y_should_act
            assert report.note == ""
            assert report.witness_point is None

    def test_arbitrary_formula(self):
        m = patrol()
        holds = verify_theorem_3_4(m, "S", parse("X=1 | X=0", m))
        assert holds.left and holds.right
        fails = verify_theorem_3_4(m, "S", parse("X=1", m))
        assert not fails.left and not fails.right
        assert fails.to_dict()["phi"] == "X=1"

    def test_random_corpus(self):
        for seed in range(CORPUS):
            m = random_model(seed)
            c = Checker(m)
            rng = random.Random(seed)
            for group in (RIGID_GROUP, INDEXICAL_GROUP, AgentSet(frozenset(m.agents[:1]))):
                report = verify_theorem_1_2(m, group, c)
                assert report.equivalence_respected, f"seed {seed}: {report}"
                for _ in range(3):
                    phi = random_formula(rng, m, 2, nested_common=False)
                    report = verify_theorem_3_4(m, group, phi, c)
                    assert report.equivalence_respected, f"seed {seed}: {render(phi)}"

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.randoms(use_true_random=False))
    def test_random_models_beyond_the_corpus(self, seed, rng):
        m = random_model(seed)
        c = Checker(m)
        for group in (RIGID_GROUP, INDEXICAL_GROUP):
            self.assertTrue(verify_theorem_1_2(m, group, c).equivalence_respected, seed)
            phi = random_formula(rng, m, 2, nested_common=False)
            self.assertTrue(verify_theorem_3_4(m, group, phi, c).equivalence_respected, render(phi))

    def test_true_formula_is_believed(self):
        for seed in range(20):
            m = random_model(seed)
            phi = parse("X0=0 | X0=1", m)
            for group in (RIGID_GROUP, INDEXICAL_GROUP):
                report = verify_theorem_3_4(m, group, phi)
                assert report.left and report.right

    def test_report_serialization(self):
        report = verify_theorem_1_2(patrol(y_should_act=True), "S")
        doc = report.to_dict()
        assert doc["theorems"] == [1, 2]
        assert doc["group"] == "S"
        assert doc["phi"] == "chi{S}"
        assert doc["witness"] is None
        assert "implementation bug" in MISMATCH_NOTE

    def test_foreign_checker(self):
        with self.assertRaises(ContractViolationError):
            verify_theorem_1_2(patrol(), "S", Checker(patrol(y_should_act=True)))


class TestChiEncoding(unittest.TestCase):
    def test_shape(self):
        m = patrol()
        f = chi_alw_encoding(m, "S")
        assert isinstance(f, Alw)
        assert "MEMBER[Y,S]=1" in render(f)
        assert "SHOULD_ACT[Z,S]=1" in render(f)

    def test_equivalent_on_random_models(self):
        for seed in range(CORPUS):
            m = random_model(seed)
            c = Checker(m)
            for group in (RIGID_GROUP, INDEXICAL_GROUP):
                assert chi_alw_encoding_equiv(m, group, c), seed

    def test_needs_declared_group(self):
        m = patrol()
        with self.assertRaises(ContractViolationError):
            chi_alw_encoding(m, AgentSet(frozenset({"Y"})))


class TestGroupRef(unittest.TestCase):
    def test_forms(self):
        m = patrol()
        assert group_ref(m, "S") == GroupName("S")
        assert group_ref(m, m.group("G")) == GroupName("G")
        assert group_ref(m, IndexicalGroup.rigid_group("{Y}", ["Y"])) == AgentSet(frozenset({"Y"}))
        with self.assertRaises(ContractViolationError):
            group_ref(m, IndexicalGroup("T", {}))
        # a different group under a declared name is not the declared group
        assert group_ref(m, IndexicalGroup.rigid_group("G", ["Y"])) == AgentSet(frozenset({"Y"}))
        with self.assertRaises(ContractViolationError):
            group_ref(m, IndexicalGroup("S", {Point("r", 0): frozenset({"Z"})}))
        with self.assertRaises(ModelLookupError):
            group_ref(m, "T")


class TestStamps(unittest.TestCase):
    def test_clock_stamp(self):
        m = patrol()
        t = clock_stamp(m, "late", 5)
        assert t.at("Y", "r") == 1
        assert t.at("Z", "s") == 1
        assert clock_stamp(m, "start", 0).at("Y", "r") == 0
        with self.assertRaises(ContractViolationError):
            clock_stamp(m, "bad", -1)

    def test_with_timestamp(self):
        m = patrol()
        m2 = with_timestamp(m, clock_stamp(m, "c1", 1))
        assert set(m2.timestamps) == {"t", "c1"}
        assert "c1" not in m.timestamps
        assert validate_model(m2).passed
        # at clock 1 only Z is a member of S, and only on run r
        c = Checker(m2)
        assert c.check(parse("E[t:c1]{S}(X=1 | X=0)", m2), Point("r", 0))

    def test_certification(self):
        m = patrol()
        cert = stamp_certification(m, "S", "t", parse("X=1", m))
        # Y is stamped at (r,0) without acting, which does not matter; Z acts at its stamp
        assert cert.uncovered == []
        # C[t:t]{S} reaches (s,0) from run r
        assert not cert.ct_everywhere
        assert not cert.certifies

        clock = with_timestamp(m, clock_stamp(m, "c0", 0))
        cert = stamp_certification(clock, "S", "c0", parse("X=1", clock))
        assert cert.uncovered == [(Point("r", 1), "Z")]
        assert not cert.certifies
        assert cert.to_dict()["uncovered"] == [{"point": ["r", 1], "agent": "Z"}]

    def test_embedding_certifies(self):
        for seed in range(40):
            m = embed_stamp_as_flags(random_model(seed), INDEXICAL_GROUP, STAMP)
            phi = random_formula(random.Random(seed), m, 1)
            cert = stamp_certification(m, INDEXICAL_GROUP, STAMP, phi)
            assert cert.uncovered == []
            assert cert.ct_everywhere == cert.ca_everywhere
            assert cert.certifies == cert.ct_everywhere

    def test_embedding_keeps_other_flags(self):
        m = random_model(11)
        embedded = embed_stamp_as_flags(m, INDEXICAL_GROUP, STAMP)
        for (agent, group), points in m.flags.acting.items():
            if group == RIGID_GROUP:
                assert embedded.flags.acting[(agent, group)] == points
        assert embedded.flags.should_act == m.flags.should_act
        assert validate_model(embedded).passed


if __name__ == "__main__":
    unittest.main()


class TestModelUnchanged(unittest.TestCase):
    """Checking and property operations never write to the model they are given"""

    def assert_untouched(self, m, work):
        before, fingerprint = model_to_dict(m), model_fingerprint(m)
        work(m)
        assert model_to_dict(m) == before
        assert model_fingerprint(m) == fingerprint

    def exercise(self, m, seed):
        c = Checker(m)
        rng = random.Random(seed)
        n = len(m.points)
        for _ in range(5):
            f = random_formula(rng, m, 2)
            c.extension(f)
            for p in m.points:
                c.check(f, p)
            for node in subformulas(f):
                if isinstance(node, COMMON_NODES):
                    c.bounded_nesting_oracle(node, rng.choice(m.points), n)
        phi = random_formula(rng, m, 1, nested_common=False)
        for group in (RIGID_GROUP, INDEXICAL_GROUP):
            check_jb(m, group, c)
            chi_extension(m, group, c)
            chi_alw_encoding_equiv(m, group, c)
            verify_theorem_1_2(m, group, c)
            verify_theorem_3_4(m, group, phi, c)
            stamp_certification(m, group, STAMP, phi, c)
            embed_stamp_as_flags(m, group, STAMP)
        with_timestamp(m, clock_stamp(m, "late", 1))

    def test_random_models(self):
        for seed in range(20):
            self.assert_untouched(random_model(seed), lambda m: self.exercise(m, seed))

    def test_scenarios(self):
        for name, build in SCENARIOS.items():
            scenario = build()
            self.assert_untouched(scenario.model, lambda m: evaluate(scenario))

    def test_hand_model(self):
        m = patrol(y_should_act=True)
        c = Checker(m)

        def work(m):
            check_jb(m, "S", c)
            verify_theorem_1_2(m, "S", c)
            verify_theorem_3_4(m, GroupName("G"), parse("X=1", m), c)
            c.bounded_nesting_oracle(parse("Ca{S}(X=1)", m), Point("r", 0), len(m.points))
            embed_stamp_as_flags(m, "S", "t")

        self.assert_untouched(m, work)
