import math

import pytest

import morphoevo as me


def test_decode_is_repeatable_and_bounded():
    genome = me.random_genome(3)
    a = me.decode(genome, "bfs")
    assert a == me.decode(genome, "bfs", seed=99)
    assert 1 <= len(a["modules"]) <= 10
    r = me.decode(genome, "random", seed=5)
    assert r == me.decode(genome, "random", seed=5)
    assert len(r["modules"]) <= 10


def test_core_only_render():
    core = {"modules": [{"id": 0, "kind": "core", "pos": [0, 0, 0], "rotation": "deg0", "parent": None}]}
    assert me.render(core).count("C") == 1
    assert me.traits(core)["coverage"] == 1.0
    assert me.tree_edit_distance(core, core) == 0


def test_indices():
    assert me.row(-10, -10) == 0
    assert me.row(10, 10) == 439
    assert me.slot(-2, 0) == 1
    assert me.slot(2, 0) == 12
    with pytest.raises(ValueError):
        me.row(0, 0)


def test_fitness_example():
    f = me.fitness([(0, 0), (1, -1), (0, -2)], targets_reached=2)
    assert f == pytest.approx(1.8 * math.sqrt(2), abs=1e-9)


def test_evaluate_plus_shape():
    body = me.decode(me.random_genome(1))
    brain = me.random_brain(2)
    assert len(brain) == me.BRAIN_ROWS * me.BRAIN_SLOTS
    out = me.evaluate(body, brain)
    assert out == me.evaluate(body, brain)
    assert len(out["samples"]) == 201


def test_small_evolution_round_trip(tmp_path):
    cfg = {"pop_size": 6, "offspring": 3, "generations": 3, "master_seed": 4, "learn": {"mu": 4, "iterations": 2}}
    summary = me.evolve(cfg, out=tmp_path / "run")
    assert len(summary["individuals"]) == 6 + 3 * 2
    assert summary["assessments"] == len(summary["individuals"]) * (4 + 3 * 4)
    best = summary["best_fitness"]
    assert best == sorted(best)
    assert all(d >= 0 for d in summary["learning_delta"])
    assert me.check_archive(tmp_path / "run") == []
    again = me.read_archive(tmp_path / "run")
    assert [i["fitness_after"] for i in again["individuals"]] == [i["fitness_after"] for i in summary["individuals"]]
