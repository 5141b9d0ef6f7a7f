import tempfile
import unittest
from pathlib import Path

from belief_checker.config import CheckerOpts, edit_opts, load_opts, opts_from_mapping
from belief_checker.errors import ConfigError


class TestCheckerOpts(unittest.TestCase):
    def test_defaults(self):
        opts = CheckerOpts()
        assert opts.runs_max * opts.horizon_max <= opts.max_points
        assert opts.log_level == "WARNING"

    def test_rejects_inconsistent_bounds(self):
        for kwargs in (
            {"runs_min": 5, "runs_max": 4},
            {"agents_min": 0},
            {"flag_density": 1.5},
            {"max_points": 100},
            {"runs_max": 10, "horizon_max": 10},
            {"log_level": "LOUD"},
            {"formula_depth": -1},
        ):
            with self.assertRaises(ConfigError, msg=str(kwargs)):
                CheckerOpts(**kwargs)

    def test_overlay(self):
        base = CheckerOpts(seed=3)
        opts = opts_from_mapping({"horizon_max": 3}, base)
        assert opts.seed == 3
        assert opts.horizon_max == 3
        with self.assertRaises(ConfigError):
            opts_from_mapping({"colour": "blue"})


class TestConfigFile(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.path = Path(self._tmp.name) / "checker.toml"

    def tearDown(self):
        self._tmp.cleanup()

    def test_edit_then_load(self):
        with edit_opts(self.path) as cfg:
            cfg["checker"]["seed"] = 11
            cfg["checker"]["edge_density"] = 0.5
        opts = load_opts(self.path)
        assert opts.seed == 11
        assert opts.edge_density == 0.5

        with edit_opts(self.path) as cfg:
            cfg["checker"]["runs_max"] = 3
        opts = load_opts(self.path)
        assert (opts.seed, opts.runs_max) == (11, 3)

    def test_edit_keeps_comments(self):
        self.path.write_text("# local settings\n[checker]\nseed = 1 # base\n", encoding="utf-8")
        with edit_opts(self.path) as cfg:
            cfg["checker"]["seed"] = 2
        text = self.path.read_text(encoding="utf-8")
        assert "# local settings" in text
        assert load_opts(self.path).seed == 2

    def test_errors(self):
        with self.assertRaises(ConfigError):
            load_opts(self.path)

        self.path.write_text("[checker\nseed = 1\n", encoding="utf-8")
        with self.assertRaises(ConfigError):
            load_opts(self.path)

        self.path.write_text("[other]\nseed = 1\n", encoding="utf-8")
        with self.assertRaises(ConfigError):
            load_opts(self.path)

        self.path.write_text("[checker]\nseed = 1\nagents_min = 0\n", encoding="utf-8")
        with self.assertRaises(ConfigError):
            load_opts(self.path)


if __name__ == "__main__":
    unittest.main()
