"""
Tests for CSV and JSON result document writers.
"""

import csv
import io
import json
import math

import numpy as np
import pytest

from core.errors import DomainError, NumericError, ResourceError
from core.models import ResultDocument
from core.runner import LabRunner
from writers import csv_writer, json_writer
from writers.csv_writer import CsvWriter, format_cell
from writers.json_writer import JsonWriter


@pytest.fixture
def sample_doc():
    return ResultDocument(
        ["x", "gamma", "pmax", "in_Rt", "note"],
        [[0.8, 1.1, 0.9987456, True, None],
         [np.float64(0.1), np.int64(3), 1.0 / 3.0, np.bool_(False), "edge"]],
        {"command": "regions", "regions_coincide": True},
    )


def test_format_cell():
    assert format_cell(0.1) == "0.1"
    assert format_cell(1.0 / 3.0) == repr(1.0 / 3.0)
    assert format_cell(True) == "1"
    assert format_cell(np.bool_(False)) == "0"
    assert format_cell(None) == ""
    assert format_cell(np.int64(64)) == "64"
    with pytest.raises(NumericError):
        format_cell(math.nan)


def test_csv_round_trips_floats(sample_doc):
    text = CsvWriter().render(sample_doc)
    lines = text.split("\n")
    assert lines[0] == "x,gamma,pmax,in_Rt,note"
    assert text.endswith("\n") and "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))[1:]
    assert float(rows[1][2]) == 1.0 / 3.0
    assert rows[0][3:] == ["1", ""]
    assert rows[1][:2] == ["0.1", "3"]


def test_csv_empty_document_is_header_only():
    assert CsvWriter().render(ResultDocument(["t", "p_general"])) == "t,p_general\n"


def test_json_structure(sample_doc):
    text = JsonWriter({"indent": 4}).render(sample_doc)
    assert text.endswith("}\n")
    payload = json.loads(text)
    assert payload["columns"] == ["x", "gamma", "pmax", "in_Rt", "note"]
    assert payload["metadata"]["regions_coincide"] is True
    assert payload["rows"][0] == {"x": 0.8, "gamma": 1.1, "pmax": 0.9987456, "in_Rt": True, "note": None}
    assert payload["rows"][1]["in_Rt"] is False
    assert payload["rows"][1]["gamma"] == 3


def test_json_refuses_infinities():
    doc = ResultDocument(["t"], [[math.inf]])
    with pytest.raises(NumericError):
        JsonWriter().render(doc)
    with pytest.raises(NumericError):
        JsonWriter().render(ResultDocument(["t"], [], {"peak": -math.inf}))


def test_module_write_to_path_and_stream(tmp_path, sample_doc):
    target = tmp_path / "out.csv"
    csv_writer.write(sample_doc, str(target))
    assert target.read_text().startswith("x,gamma,pmax")

    stream = io.StringIO()
    json_writer.write(sample_doc, stream, {"indent": 2})
    assert json.loads(stream.getvalue())["metadata"]["command"] == "regions"


def test_write_to_stdout(capsys, sample_doc):
    csv_writer.write(sample_doc, "-")
    assert capsys.readouterr().out.startswith("x,gamma,pmax,in_Rt,note\n")


def test_unwritable_destination(tmp_path, sample_doc):
    with pytest.raises(ResourceError):
        csv_writer.write(sample_doc, str(tmp_path / "missing" / "out.csv"))


def test_row_length_mismatch():
    with pytest.raises(DomainError):
        ResultDocument(["a", "b"], [[1.0]])


def test_runner_rejects_unknown_format(sample_doc):
    with pytest.raises(DomainError):
        LabRunner().write_document(sample_doc, "parquet")
