import json
import math

import pytest

import culturesim


def test_subaction_round_trip():
    assert culturesim.parse_subaction("01-110-1") == [0, 1, -1, 1, 0, -1]
    assert culturesim.format_subaction([0, 1, -1, 1, 0, -1]) == "01-110-1"
    with pytest.raises(ValueError):
        culturesim.parse_subaction("0")


def test_fitness_anchors():
    assert culturesim.fitness_single("000000") == 0
    assert culturesim.fitness_single("011111") == 39
    assert culturesim.fitness_template("000000") == 6
    assert culturesim.fitness_template("111110") == 31
    acc = culturesim.fitness_template("01-11-11")
    assert culturesim.fitness_template("01-11-11|01-11-1-1") == 2 * acc
    assert len(culturesim.default_templates()) == 20


def test_network():
    net = culturesim.Network(seed=3)
    epochs, converged = net.train("1-10110")
    assert converged and epochs <= 50
    assert net.recall("1-10110") == "1-10110"
    movement, symmetry = net.invention_bias("000000")
    assert 0.0 <= movement <= 1.0 and 0.0 <= symmetry <= 1.0


def test_metrics():
    assert culturesim.npv([1, 2, 3], 1.0) == 6
    assert culturesim.npv([4, 4], 0.5) == 6
    assert culturesim.time_to_threshold([1, 5, 9, 12], 9) == (3, False)
    assert culturesim.time_to_threshold([1, 2], 9) == (3, True)
    assert culturesim.piv([2, 4], [1, 2]) == pytest.approx(2.0)
    assert culturesim.discount_rate(25) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        culturesim.piv([1], [1, 2])


def test_run_is_deterministic():
    a = culturesim.run(lattice_side=10, iterations=15, creator_fraction=0.5, creator_creativity=0.8)
    b = culturesim.run(lattice_side=10, iterations=15, creator_fraction=0.5, creator_creativity=0.8)
    assert a == b
    assert len(a["mean_fitness"]) == 15
    assert all(x <= y for x, y in zip(a["mean_fitness"], a["mean_fitness"][1:]))


def test_nothing_to_imitate():
    s = culturesim.run(lattice_side=8, iterations=20, creator_fraction=0.0)
    assert set(s["mean_fitness"]) == {0.0}


def test_config_errors_name_the_field():
    with pytest.raises(ValueError, match="world.creator_fraction"):
        culturesim.run(creator_fraction=1.5)
    with pytest.raises(ValueError, match="world.colour"):
        culturesim.run(colour="red")


def test_presets_and_effective_config():
    exp2 = culturesim.preset("exp2")
    assert exp2["world"]["fitness_regime"] == "single_step"
    exp3 = culturesim.preset("exp3")
    assert exp3["world"]["chaining_enabled"] is True
    cfg = culturesim.effective_config({})
    assert cfg["world"]["lattice_side"] == 32 and cfg["world"]["iterations"] == 100


def test_experiment_in_memory_and_on_disk(tmp_path):
    config = {
        "preset": "exp2",
        "runs_per_cell": 2,
        "output_dir": str(tmp_path / "out"),
        "world": {"lattice_side": 8, "iterations": 10},
    }
    mem = culturesim.run_experiment(config, workers=1, write=False)
    assert len(mem["series"]["mean_fitness"]) == 10
    disk = culturesim.run_experiment(config, workers=2)
    assert disk["series"] == mem["series"]
    files = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert files == ["config.json", "manifest.json", "series_sr_off.csv", "series_sr_on.csv"]
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["config_digest"] == disk["config_digest"]


def test_surface():
    config = {
        "preset": "exp1",
        "runs_per_cell": 2,
        "grid": {"C": [0.5, 1.0], "p": [1.0]},
        "world": {"lattice_side": 8, "iterations": 10, "tau": 20},
    }
    rows = culturesim.run_experiment(config, write=False)["surface"]
    assert [(r["C"], r["p"]) for r in rows] == [(0.5, 1.0), (1.0, 1.0)]
    assert rows[1]["mean_piv"] == 0.0
    assert all(math.isfinite(r["mean_ttt_log10"]) for r in rows)
