"""Unit tests for scenario file parsing and validation."""

import pytest

from cli.schemas import ScenarioFile, load_scenario, parse_scenario
from core.exceptions import ScenarioError

PAIR_SCENARIO = """\
# two agents
weights = 0.5 0.5; 0.5 0.5
alpha = 0.3
x1 = 0.2
t_max = 40
seed = 4
"""


class TestScenarioFile:
    """Field-level validation."""

    def test_defaults(self):
        scenario = ScenarioFile(weights="w.txt")
        assert scenario.alpha == 0.1
        assert scenario.x1 == [0.5]
        assert scenario.delta is None
        assert scenario.window is None
        assert scenario.schedule == "constant"

    def test_lists_from_strings(self):
        scenario = ScenarioFile.model_validate({"weights": "w", "x1": "0.1, 0.2 0.3", "stubborn": "1 3"})
        assert scenario.x1 == [0.1, 0.2, 0.3]
        assert scenario.stubborn == [1, 3]

    def test_initial_state_broadcast(self):
        assert ScenarioFile(weights="w", x1=[0.4]).initial_state(3) == [0.4, 0.4, 0.4]

    def test_initial_state_length(self):
        with pytest.raises(ValueError):
            ScenarioFile(weights="w", x1=[0.4, 0.5]).initial_state(3)

    @pytest.mark.parametrize(
        "field,value",
        [("alpha", 1.0), ("x1", [1.5]), ("stubborn", [0]), ("delta", 0.5), ("window", 0), ("t_max", 0)],
    )
    def test_rejects(self, field, value):
        with pytest.raises(ValueError):
            ScenarioFile.model_validate({"weights": "w", field: value})


class TestParseScenario:
    def test_inline_weights(self):
        scenario, W = parse_scenario(PAIR_SCENARIO)
        config = scenario.simulation_config(W)
        assert W.entries.tolist() == [[0.5, 0.5], [0.5, 0.5]]
        assert config.x1.x.tolist() == [0.2, 0.2]
        assert (config.alpha, config.t_max, config.seed) == (0.3, 40, 4)

    def test_seed_override(self):
        scenario, W = parse_scenario(PAIR_SCENARIO)
        assert scenario.simulation_config(W, seed=9).seed == 9

    def test_stubborn_is_one_based(self):
        scenario, W = parse_scenario("weights = 0.5 0.5; 0.5 0.5\nx1 = 1 0.5\nstubborn = 1\n")
        assert scenario.simulation_config(W).stubborn == frozenset({0})

    def test_weights_file_relative_to_scenario(self, tmp_path):
        (tmp_path / "nets").mkdir()
        (tmp_path / "nets" / "pair.txt").write_text("2\n0.5 0.5\n0.5 0.5\n", encoding="utf-8")
        (tmp_path / "run.txt").write_text("weights = nets/pair.txt\nalpha = 0.2\n", encoding="utf-8")
        scenario, W = load_scenario(tmp_path / "run.txt")
        assert W.n == 2
        assert scenario.alpha == 0.2

    # === Errors carry the offending line ===

    @pytest.mark.parametrize(
        "text,line,fragment",
        [
            ("weights = 0.5 0.5; 0.5 0.5\nalpha = 1.5\n", 2, "alpha"),
            ("weights = 0.5 0.5; 0.5 0.5\n\nspeed = 3\n", 3, "unknown key"),
            ("alpha = 0.3\n", None, "weights"),
            ("weights = 0.5 0.5; 0.5 0.4\n", 1, "weights"),
            ("weights = missing.txt\n", 1, "does not exist"),
            ("weights = 0.5 0.5; 0.5 0.5\nx1 = 0.1 0.2 0.3\n", 2, "x1"),
            ("weights = 0.5 0.5; 0.5 0.5\nx1 = 1 1\nstubborn = 3\n", 3, "stubborn"),
        ],
    )
    def test_errors(self, text, line, fragment, tmp_path):
        with pytest.raises(ScenarioError, match=fragment) as exc:
            parse_scenario(text, source="s.txt", base_dir=tmp_path)
        assert exc.value.line == line

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="cannot read"):
            load_scenario(tmp_path / "absent.txt")
