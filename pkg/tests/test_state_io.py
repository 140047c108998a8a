import json

import numpy as np
import pytest

from qcmm.core.state_core import D7Params, singlet_density
from qcmm.errors import StateParseError
from qcmm.utils.state_io import matrix_to_json, parse_state, read_state


def test_parse_d7_document():
    doc = {"d7": {"p1z": 0, "p2z": 0, "mxx": -0.5, "myy": -0.5, "mxy": 0, "myx": 0, "mzz": -0.5}}
    parsed = parse_state(json.dumps(doc))
    assert parsed.kind == "d7"
    assert parsed.d7 == D7Params(mxx=-0.5, myy=-0.5, mzz=-0.5)
    assert parsed.matrix.trace == pytest.approx(1.0)


def test_parse_fano_document():
    doc = {"fano": {"p1": [0.3, 0, 0], "p2": [0, 0, 0], "m": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}}
    parsed = parse_state(json.dumps(doc))
    assert parsed.kind == "fano"
    assert parsed.fano.p1.tolist() == [0.3, 0.0, 0.0]
    assert parsed.matrix[0, 2] == pytest.approx(0.075)


def test_matrix_document_matches_source():
    rho = singlet_density()
    parsed = parse_state(json.dumps(matrix_to_json(rho)))
    assert parsed.kind == "matrix"
    assert np.array_equal(parsed.matrix.entries, rho.entries)


def test_exactly_one_form_required():
    with pytest.raises(StateParseError, match="exactly one"):
        parse_state(json.dumps({"d7": {}, "fano": {}}))
    with pytest.raises(StateParseError, match="exactly one"):
        parse_state("{}")


def test_malformed_json_reports_line():
    with pytest.raises(StateParseError) as excinfo:
        parse_state('{\n  "d7": {\n    "p1z": ,\n  }\n}')
    assert excinfo.value.line == 3


def test_field_path_in_errors():
    doc = {"d7": {"p1z": "a", "p2z": 0, "mxx": 0, "myy": 0, "mxy": 0, "myx": 0, "mzz": 0}}
    with pytest.raises(StateParseError) as excinfo:
        parse_state(json.dumps(doc))
    assert excinfo.value.field == "d7.p1z"

    with pytest.raises(StateParseError) as excinfo:
        parse_state(json.dumps({"matrix": [[[0, 0]] * 4] * 3}))
    assert excinfo.value.field == "matrix"

    with pytest.raises(StateParseError) as excinfo:
        parse_state(json.dumps({"matrix": [[[0, 0]] * 4, [[0, 0]] * 3, [[0, 0]] * 4, [[0, 0]] * 4]}))
    assert excinfo.value.field == "matrix[1]"


def test_unknown_and_missing_d7_keys():
    with pytest.raises(StateParseError, match="unknown keys"):
        parse_state(json.dumps({"d7": {"p1x": 0.1}}))
    with pytest.raises(StateParseError, match="missing keys"):
        parse_state(json.dumps({"d7": {"p1z": 0.1}}))


def test_booleans_are_not_numbers():
    doc = {"fano": {"p1": [True, 0, 0], "p2": [0, 0, 0], "m": [[0, 0, 0]] * 3}}
    with pytest.raises(StateParseError) as excinfo:
        parse_state(json.dumps(doc))
    assert excinfo.value.field == "fano.p1[0]"


def test_read_state_missing_file(tmp_path):
    with pytest.raises(StateParseError, match="cannot read"):
        read_state(tmp_path / "absent.json")
