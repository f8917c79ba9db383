import json
import math
from unittest.mock import patch

import numpy as np
import pytest

from app.cli.main import main
from app.cli.verify import IDENTITY, VerificationReport
from app.errors import NoSolutionFoundError


SR_HALF_TURN = ["sr-geodesic", "--r", "1", "--theta", "0", "--zeta", "0.5", "--t-max", str(2 * math.pi)]


def _table(path):
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip().split(",")
    return header, np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def test_sr_geodesic_closes_up_on_the_z_axis(tmp_path):
    out = tmp_path / "sr.csv"
    assert main(SR_HALF_TURN + ["--output", str(out)]) == 0
    header, rows = _table(out)
    assert header == ["t", "x1", "y1", "z", "u1", "v1"]
    assert rows[0, :4] == pytest.approx([0.0, 0.0, 0.0, 0.0])
    assert rows[-1, 0] == pytest.approx(2 * math.pi)
    assert rows[-1, 1:4] == pytest.approx([0.0, 0.0, 2 * math.pi], abs=1e-9)


def test_identical_runs_write_identical_bytes(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    main(SR_HALF_TURN + ["-o", str(first)])
    main(SR_HALF_TURN + ["-o", str(second)])
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()


def test_sr_geodesic_twin_adds_a_deviation_column(tmp_path):
    out = tmp_path / "twin.csv"
    args = ["sr-geodesic", "--r", "1", "--theta", "0.3", "--zeta", "1", "--t-max", "2", "--dt", "0.01", "--twin"]
    assert main(args + ["-o", str(out)]) == 0
    header, rows = _table(out)
    assert header[-1] == "deviation"
    assert np.max(rows[:, -1]) <= 1e-6


def test_missing_parameter_is_a_validation_error(capsys):
    assert main(["sr-geodesic", "--r", "1", "--zeta", "0.5"]) == 2
    assert "--theta" in capsys.readouterr().err


def test_unnormalized_radii_are_rejected(capsys):
    assert main(["sr-geodesic", "--r", "1,1", "--theta", "0,0"]) == 2
    assert "arc-length" in capsys.readouterr().err


def test_config_file_is_overridden_by_flags(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"r": "1", "theta": "0", "zeta": 0.5, "t-max": 1.0, "dt": 0.5}))
    out = tmp_path / "cfg.csv"
    assert main(["sr-geodesic", "--config", str(config), "--dt", "0.25", "-o", str(out)]) == 0
    _, rows = _table(out)
    assert list(rows[:, 0]) == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_riem_geodesic_json(capsys):
    assert main(["riem-geodesic", "--rho", "1", "--gamma", "0.6", "--t-max", "1", "--dt", "0.5", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["columns"] == ["t", "x1", "y1", "z", "u1", "v1", "g"]
    assert len(payload["rows"]) == 3
    assert payload["rows"][0][-1] == pytest.approx(0.6)


def test_riem_geodesic_rejects_fast_vertical_speed(capsys):
    assert main(["riem-geodesic", "--gamma", "1.5"]) == 2
    assert "gamma" in capsys.readouterr().err


def test_vertical_riem_geodesic_needs_no_direction(tmp_path):
    out = tmp_path / "vertical.csv"
    assert main(["riem-geodesic", "--gamma", "1", "--t-max", "2", "--dt", "1", "-o", str(out)]) == 0
    _, rows = _table(out)
    assert list(rows[:, 3]) == [0.0, 1.0, 2.0]


def test_connect_half_turn(capsys):
    assert main(["connect", "--target", f"0,2,{math.pi!r}"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["target"] == [0.0, 2.0, math.pi]
    assert payload["t"] == pytest.approx(math.pi, abs=1e-6)
    assert payload["params"]["zeta"] == pytest.approx(0.5, abs=1e-6)


def test_connect_origin_is_a_validation_error():
    assert main(["connect", "--target", "0,0,0"]) == 2


def test_connect_target_must_match_n():
    assert main(["connect", "--n", "2", "--target", "0,1,0"]) == 2


def test_solver_failures_exit_with_four(capsys):
    with patch("app.cli.commands.connect", side_effect=NoSolutionFoundError("grid exhausted")):
        assert main(["connect", "--target", "1,0,0"]) == 4
    assert "grid exhausted" in capsys.readouterr().err


def test_unwritable_output_exits_with_three(tmp_path):
    out = tmp_path / "missing" / "sr.csv"
    assert main(SR_HALF_TURN + ["-o", str(out)]) == 3


def test_distance_probe(capsys):
    assert main(["distance-probe", "--z", "50"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["best_length"] == pytest.approx(17.44, abs=5e-3)
    assert payload["vertical_length"] == 50.0


def test_distance_probe_below_the_plane():
    assert main(["distance-probe", "--z=-1"]) == 2


def test_ray_scan_csv(capsys):
    assert main(["ray-scan", "--gammas", "1,0", "--horizon", "3.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "gamma,direction_id,status,first_beaten_t,witness_gamma,witness_t"
    assert lines[1].startswith("1,0,beaten,3.25,")
    assert lines[2] == "0,1,ray,,,"


def test_verify_exit_code_follows_the_report(tmp_path):
    failing = VerificationReport("brackets")
    failing.add("n=1 [X1,Y1]", "2 T", "0", IDENTITY, False)
    out = tmp_path / "verify.json"
    with patch("app.cli.commands.run_suite", return_value=failing) as run_suite:
        assert main(["verify", "brackets", "-o", str(out)]) == 1
    run_suite.assert_called_once_with("brackets")
    payload = json.loads(out.read_text())
    assert payload["passed"] is False
    assert payload["checks"][0]["provenance"] == "identity"


def test_verify_passing_report(capsys):
    passing = VerificationReport("curvature")
    passing.within("K(X1,T)", 1.0, 1.0, 1e-12, IDENTITY)
    with patch("app.cli.commands.run_suite", return_value=passing):
        assert main(["verify", "curvature"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_unknown_suite_is_rejected_by_the_parser():
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense"])
    assert info.value.code == 2


def test_verify_contact_suite_passes(capsys):
    assert main(["verify", "contact"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert any("isotropy" in check["name"] for check in payload["checks"])
