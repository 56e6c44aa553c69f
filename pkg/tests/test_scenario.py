import json

import numpy as np
import pytest

from finslergeo import lie, norms, scenario
from finslergeo.errors import ParseError, ValidationError

I3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]


def write_scenario(tmp_path, data, name="scen.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def minimal(task="check-minkowski-lie", model="su2", norm=None, **extra):
    data = {"task": task, "model": model, "norm": norm or {"kind": "euclidean", "a": I3}}
    data.update(extra)
    return data


def test_minimal_scenario_fills_defaults(tmp_path):
    scen = scenario.parse_scenario(write_scenario(tmp_path, minimal()))
    assert scen.task == "check-minkowski-lie"
    assert scen.model_name == "su2"
    assert scen.model is not None
    assert scen.seed == 0
    assert scen.params == {}
    assert scen.m_indices == (0, 1, 2)
    assert scen.h_indices == ()
    assert scen.raw["seed"] == 0
    assert scen.raw["m_indices"] == [1, 2, 3]
    assert scen.raw["h_indices"] == []
    assert isinstance(scen.norm, norms.EuclideanNorm)


def test_bundled_scenarios_parse():
    paths = scenario.bundled_scenarios()
    assert len(paths) == 13
    tasks = set()
    for path in paths:
        scen = scenario.parse_scenario(path)
        assert scen.task in scenario.TASKS
        tasks.add(scen.task)
    assert tasks == set(scenario.TASKS)


def test_randers_unit_ball_violation(tmp_path):
    data = minimal(norm={"kind": "randers", "a": I3, "b": [1.2, 0.0, 0.0]})
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, data))
    assert "‖b‖ < 1" in str(err.value)
    assert "1.2" in str(err.value)


def test_norm_dimension_mismatch_names_both(tmp_path):
    data = minimal(model="heisenberg3", norm={"kind": "euclidean", "a": [[1.0, 0.0], [0.0, 1.0]]})
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, data))
    assert "(2, 2)" in str(err.value)
    assert "3" in str(err.value)


def test_inline_algebra_matches_builtin(tmp_path):
    block = {
        "dim": 3,
        "structure_constants": [[1, 2, 3, 1.0], [2, 3, 1, 1.0], [3, 1, 2, 1.0]],
    }
    scen = scenario.parse_scenario(write_scenario(tmp_path, minimal(model=block)))
    assert scen.model is None
    assert scen.model_name is None
    assert np.max(np.abs(scen.algebra.c - lie.su2().c)) == 0.0


def test_inline_algebra_jacobi_violation(tmp_path):
    block = {"dim": 3, "structure_constants": [[1, 2, 2, 1.0], [2, 3, 1, 1.0]]}
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(model=block)))
    assert "Jacobi" in str(err.value)
    assert "(1, 2, 3)" in str(err.value)


def test_inline_algebra_duplicate_entry(tmp_path):
    block = {"dim": 3, "structure_constants": [[1, 2, 3, 1.0], [2, 1, 3, -1.0]]}
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(model=block)))
    assert "duplicate" in str(err.value)


def test_inline_algebra_bad_indices(tmp_path):
    block = {"dim": 3, "structure_constants": [[0, 2, 3, 1.0]]}
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(model=block)))
    assert "outside 1..3" in str(err.value)
    block = {"dim": 3, "structure_constants": [[1, 1, 2, 1.0]]}
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(model=block)))
    assert "always zero" in str(err.value)


def test_inline_algebra_rejected_for_chart_tasks(tmp_path):
    block = {"dim": 3, "structure_constants": [[1, 2, 3, 1.0], [2, 3, 1, 1.0], [3, 1, 2, 1.0]]}
    data = minimal(task="integrate-geodesic", model=block, params={"y0": [1.0, 0.0, 0.0]})
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, data))
    assert "named group model" in str(err.value)


def test_unknown_task_and_model(tmp_path):
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(task="solve-everything")))
    assert "solve-everything" in str(err.value)
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(model="so5")))
    assert "so5" in str(err.value)


def test_bad_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"task": "berwald",\n  "model": }\n', encoding="utf-8")
    with pytest.raises(ParseError) as err:
        scenario.parse_scenario(str(path))
    assert ":2:" in str(err.value)


def test_missing_file_is_parse_error():
    with pytest.raises(ParseError) as err:
        scenario.parse_scenario("/no/such/scenario.json")
    assert "cannot read" in str(err.value)


def test_round_trip_preserves_canonical_form(tmp_path):
    data = minimal(
        task="check-nat-reductive",
        model="su2",
        params={"samples": 50, "expect_passed": True},
        seed=3,
        m_indices=[1, 2],
        h_indices=[3],
    )
    scen = scenario.parse_scenario(write_scenario(tmp_path, data))
    assert scen.m_indices == (0, 1)
    assert scen.h_indices == (2,)
    again = scenario.parse_scenario(write_scenario(tmp_path, scenario.serialize_scenario(scen), "b.json"))
    assert again.raw == scen.raw


def test_m_h_must_partition(tmp_path):
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(m_indices=[1, 2], h_indices=[2, 3])))
    assert "partition" in str(err.value)
    with pytest.raises(ValidationError):
        scenario.parse_scenario(write_scenario(tmp_path, minimal(m_indices=[1], h_indices=[2])))
    with pytest.raises(ValidationError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, minimal(m_indices=[1, 1, 2], h_indices=[3])))
    assert "distinct" in str(err.value)


def test_seed_validation(tmp_path):
    with pytest.raises(ParseError):
        scenario.parse_scenario(write_scenario(tmp_path, minimal(seed=-1)))
    with pytest.raises(ParseError):
        scenario.parse_scenario(write_scenario(tmp_path, minimal(seed=True)))


def test_missing_fields(tmp_path):
    with pytest.raises(ParseError) as err:
        scenario.parse_scenario(write_scenario(tmp_path, {"model": "su2"}))
    assert "task" in str(err.value)
    with pytest.raises(ParseError):
        scenario.parse_scenario(write_scenario(tmp_path, {"task": "berwald", "model": "su2"}))
    with pytest.raises(ParseError):
        scenario.parse_scenario(write_scenario(tmp_path, {"task": "berwald", "norm": {"kind": "euclidean", "a": I3}}))
