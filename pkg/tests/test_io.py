"""Tests for canonical JSON, CSV, validators and problem/solution/pose files."""

import json
import math

import numpy as np
import pytest

from src.bench.synthetic import default_rig
from src.geometry.rig import ImuAttitude
from src.geometry.rotations import rotation_y
from src.solver.pipeline import RelativePoseSolver
from src.utils.exceptions import FileFormatError, UnknownCameraError, ValidationError
from src.utils.file_handlers import (
    Problem,
    format_poses,
    load_poses,
    load_problem,
    load_truth,
    problem_from_dict,
    problem_to_dict,
    save_poses,
    save_problem,
    solution_to_dict,
    truth_path,
    truth_to_dict,
    write_json_file,
)
from src.utils.formatters import format_csv, format_float, format_json_output, parse_json, validate_json_structure
from src.utils.validators import validate_input_file, validate_rotation
from tests.conftest import make_instance


def _problem(inst) -> Problem:
    return Problem.from_attitudes(inst.rig, inst.imu_i, inst.imu_j, inst.correspondences)


def _problem_dict() -> dict:
    return {
        "rig": [{"id": 0, "R": [1, 0, 0, 0, 1, 0, 0, 0, 1], "t": [0.0, 0.0, 0.5]}],
        "imu_i": {"roll_deg": 1.0, "pitch_deg": -2.0},
        "imu_j": {"roll_deg": 0.5, "pitch_deg": 3.0},
        "correspondences": [
            {"cam_i": 0, "cam_j": 0, "x_i": [0.1, 0.2], "x_j": [0.15, 0.18], "A": [1.0, 0.1, -0.05, 0.9]},
        ],
    }


class TestFormatters:
    def test_canonical_json(self):
        text = format_json_output({"b": [1.5, 2], "a": {"y": True, "x": None}, "c": np.array([0.1])})
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"') < text.index('"c"')
        assert json.loads(text) == {"a": {"x": None, "y": True}, "b": [1.5, 2], "c": [0.1]}

    def test_float_round_trip(self):
        value = 0.1 + 0.2
        assert float(format_float(value)) == value
        assert format_float(math.nan) == "nan"

    def test_non_finite_rejected(self):
        with pytest.raises(FileFormatError):
            format_json_output({"x": math.inf})

    def test_parse_errors(self):
        with pytest.raises(FileFormatError):
            parse_json("{not json")
        with pytest.raises(FileFormatError, match="correspondences\\[3\\]: missing field 'A'"):
            validate_json_structure({"x_i": []}, ["x_i", "A"], "correspondences[3]")

    def test_csv(self):
        text = format_csv(["a", "b", "c"], [[1, 0.5, None], ["x", math.nan, 2.0]])
        assert text == "a,b,c\n1,0.5,\nx,nan,2\n"


class TestValidators:
    def test_rotation(self):
        validate_rotation(rotation_y(0.3), "R")
        with pytest.raises(ValidationError):
            validate_rotation(2.0 * np.eye(3), "R")
        with pytest.raises(ValidationError):
            validate_rotation(np.diag([1.0, 1.0, -1.0]), "R")

    def test_input_file(self, tmp_path):
        with pytest.raises(ValidationError):
            validate_input_file(tmp_path / "missing.json", {".json"}, "problem")
        path = tmp_path / "problem.yaml"
        path.write_text("{}")
        with pytest.raises(FileFormatError):
            validate_input_file(path, {".json"}, "problem")


class TestProblemFile:
    def test_round_trip_is_byte_identical(self, tmp_path):
        inst = make_instance(seed=4, n_planes=8)
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        save_problem(_problem(inst), first)
        save_problem(load_problem(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_loaded_values(self):
        problem = problem_from_dict(_problem_dict())
        c = problem.correspondences[0]
        np.testing.assert_array_equal(c.x_i, [0.1, 0.2, 1.0])
        np.testing.assert_array_equal(c.A, [[1.0, 0.1], [-0.05, 0.9]])
        assert problem.imu_i.roll == pytest.approx(math.radians(1.0))
        assert problem_to_dict(problem)["imu_j"] == {"roll_deg": 0.5, "pitch_deg": 3.0}

    def test_missing_field_named(self):
        data = _problem_dict()
        del data["correspondences"][0]["A"]
        with pytest.raises(FileFormatError, match="correspondences\\[0\\]: missing field 'A'"):
            problem_from_dict(data)

    def test_wrong_length(self):
        data = _problem_dict()
        data["correspondences"][0]["x_j"] = [0.1]
        with pytest.raises(FileFormatError, match="x_j"):
            problem_from_dict(data)

    def test_unknown_camera(self):
        data = _problem_dict()
        data["correspondences"][0]["cam_j"] = 4
        with pytest.raises(UnknownCameraError):
            problem_from_dict(data)

    def test_non_orthonormal_rotation(self):
        data = _problem_dict()
        data["rig"][0]["R"] = [1, 0, 0, 0, 1, 0, 0, 0, 1.01]
        with pytest.raises(ValidationError, match="rig\\[0\\].R"):
            problem_from_dict(data)

    def test_pixel_points(self):
        data = _problem_dict()
        data["points"] = "pixels"
        data["intrinsics"] = [{"id": 0, "fx": 400.0, "fy": 400.0, "cx": 320.0, "cy": 240.0}]
        data["correspondences"][0].update({"x_i": [360.0, 320.0], "x_j": [380.0, 312.0]})
        problem = problem_from_dict(data)
        c = problem.correspondences[0]
        np.testing.assert_allclose(c.x_i, [0.1, 0.2, 1.0])
        np.testing.assert_allclose(c.x_j, [0.15, 0.18, 1.0])
        # equal focal lengths leave the affine map unchanged
        np.testing.assert_allclose(c.A, [[1.0, 0.1], [-0.05, 0.9]])

    def test_pixel_round_trip_is_byte_identical(self, tmp_path):
        data = _problem_dict()
        data["points"] = "pixels"
        data["intrinsics"] = [{"id": 0, "fx": 410.0, "fy": 395.0, "cx": 320.0, "cy": 240.0}]
        data["correspondences"][0].update({"x_i": [360.5, 320.25], "x_j": [381.0, 312.75]})
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        save_problem(problem_from_dict(data), first)
        save_problem(load_problem(first), second)
        assert first.read_bytes() == second.read_bytes()
        saved = json.loads(first.read_text())
        assert saved["points"] == "pixels"
        assert saved["correspondences"][0]["x_i"] == [360.5, 320.25]
        assert saved["correspondences"][0]["A"] == data["correspondences"][0]["A"]
        assert saved["intrinsics"] == data["intrinsics"]

    def test_pixel_points_need_intrinsics(self):
        data = _problem_dict()
        data["points"] = "pixels"
        with pytest.raises(FileFormatError, match="intrinsics"):
            problem_from_dict(data)


class TestSolutionAndTruth:
    def test_solution_fields(self, instance):
        report = RelativePoseSolver().solve(
            list(instance.correspondences), instance.rig, instance.imu_i, instance.imu_j
        )
        data = solution_to_dict(report)
        assert set(data) >= {"s", "theta_y_deg", "R", "t", "t_tilde", "lambda_min", "candidates", "mode"}
        lambdas = [c["lambda_min"] for c in data["candidates"]]
        assert lambdas == sorted(lambdas)
        assert json.loads(format_json_output(data))["mode"] == "full"

    def test_truth_sidecar(self, tmp_path, instance):
        path = tmp_path / "scene.json"
        assert truth_path(path) == tmp_path / "scene.truth.json"
        write_json_file(truth_to_dict(instance.truth), truth_path(path))
        data = load_truth(truth_path(path))
        np.testing.assert_allclose(data["t_tilde"], instance.truth.aligned.t_tilde)
        assert data["s"] == instance.truth.aligned.s


class TestPoseFile:
    def test_round_trip(self, tmp_path):
        poses = np.stack([np.eye(4), np.eye(4)])
        poses[1, :3, :3] = rotation_y(0.2)
        poses[1, :3, 3] = [1.0, 2.0, 3.0]
        path = tmp_path / "poses.txt"
        save_poses(poses, path)
        np.testing.assert_array_equal(load_poses(path), poses)
        assert len(format_poses(poses).splitlines()) == 2

    def test_bad_line(self, tmp_path):
        path = tmp_path / "poses.txt"
        path.write_text("1 0 0 0 0 1 0 0 0 0 1\n")
        with pytest.raises(FileFormatError):
            load_poses(path)

    def test_bad_rotation(self, tmp_path):
        path = tmp_path / "poses.txt"
        path.write_text("2 0 0 0 0 1 0 0 0 0 1 0\n")
        with pytest.raises(ValidationError):
            load_poses(path)


def test_problem_from_attitudes_keeps_degrees():
    problem = Problem.from_attitudes(default_rig(), ImuAttitude.from_degrees(2.0, -1.0), ImuAttitude(0.0, 0.0), ())
    assert problem.imu_i_deg == pytest.approx((2.0, -1.0))
