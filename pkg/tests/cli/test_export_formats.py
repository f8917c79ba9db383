import json

import numpy as np
import pytest

from app.cli.export import format_float, trajectory_columns, write_json, write_records, write_table


def test_trajectory_columns():
    assert trajectory_columns(1) == ["t", "x1", "y1", "z", "u1", "v1"]
    assert trajectory_columns(2, extra=("g",)) == [
        "t", "x1", "y1", "x2", "y2", "z", "u1", "v1", "u2", "v2", "g",
    ]


def test_floats_keep_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2"
    assert format_float(None) == ""
    assert float(format_float(1 / 3)) == 1 / 3


def test_csv_table(tmp_path):
    out = tmp_path / "table.csv"
    write_table(["t", "value"], np.array([[0.0, 0.1], [1.0, -2.5]]), str(out))
    assert out.read_text(encoding="utf-8") == "t,value\n0,0.10000000000000001\n1,-2.5\n"


def test_json_table(tmp_path):
    out = tmp_path / "table.json"
    write_table(["t", "value"], np.array([[0.0, 0.5]]), str(out), fmt="json")
    assert json.loads(out.read_text()) == {"columns": ["t", "value"], "rows": [[0.0, 0.5]]}


def test_table_width_must_match_the_header():
    with pytest.raises(ValueError):
        write_table(["t"], np.zeros((2, 2)), None)


def test_records_mix_strings_numbers_and_blanks(tmp_path):
    out = tmp_path / "records.csv"
    write_records(("name", "id", "value"), [{"name": "ray", "id": 3, "value": None}], str(out))
    assert out.read_text(encoding="utf-8") == "name,id,value\nray,3,\n"


def test_json_payload_goes_to_stdout(capsys):
    write_json({"z": 1.5}, None)
    assert capsys.readouterr().out == '{\n  "z": 1.5\n}\n'
