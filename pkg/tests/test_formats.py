import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlskit import formats
from qlskit.codes import build_encoder_from_sppm, pauli_family
from qlskit.fixtures import example_qlis_pair_dim8, example_qls_dim4
from qlskit.formats import FormatError, parse_scalar

W = cmath.exp(2j * math.pi / 3)


@pytest.mark.parametrize(
    "text,value",
    [
        ("1/sqrt2", 1 / math.sqrt(2)),
        ("1/sqrt3", 1 / math.sqrt(3)),
        ("2/sqrt5", 2 / math.sqrt(5)),
        ("i/sqrt5", 1j / math.sqrt(5)),
        ("2i/sqrt5", 2j / math.sqrt(5)),
        ("w", W),
        ("w*", W.conjugate()),
        ("w*/sqrt3", W.conjugate() / math.sqrt(3)),
        ("-w*", -W.conjugate()),
        ("(1+i)/sqrt(3)", (1 + 1j) / math.sqrt(3)),
        ("sqrt(3/2)", math.sqrt(1.5)),
        ("sqrt2/3", math.sqrt(2) / 3),
        ("exp(i*pi/4)", cmath.exp(1j * math.pi / 4)),
        ("conj(w)", W.conjugate()),
        (1, 1),
        (0.5, 0.5),
        ([0.25, -1], 0.25 - 1j),
    ],
)
def test_scalar_catalog(text, value):
    assert parse_scalar(text) == pytest.approx(value, abs=1e-15)


def test_w_is_a_cube_root_of_unity():
    assert parse_scalar("w") ** 3 == pytest.approx(1)
    assert 1 + parse_scalar("w") + parse_scalar("w*") == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize(
    "bad", ["__import__('os')", "x", "1/0", "sqrt(1, 2)", "1 +", True, None, [1, 2, 3], {"re": 1}, "a.b"]
)
def test_bad_scalars(bad):
    with pytest.raises(FormatError):
        parse_scalar(bad)


@settings(max_examples=50)
@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e6))
def test_dump_parse_round_trip(z):
    assert parse_scalar(formats.dump_scalar(z)) == z


@pytest.mark.parametrize(
    "obj",
    [
        example_qls_dim4(),
        example_qlis_pair_dim8()[0],
        example_qlis_pair_dim8()[2],
        pauli_family(),
        build_encoder_from_sppm(example_qlis_pair_dim8()[2]),
        np.arange(6).reshape(2, 3) * (1 + 0.5j),
    ],
    ids=["qls", "qlis", "sppm", "family", "encoder", "matrix"],
)
def test_object_round_trip(tmp_path, obj):
    path = tmp_path / "x.json"
    formats.save(obj, path)
    kind, back = formats.load(path)
    doc = formats.to_doc(obj)
    assert kind == doc["type"]
    assert formats.to_doc(back) == doc
    text = path.read_text()
    formats.save(back, path)
    assert path.read_text() == text


def test_document_errors(tmp_path):
    cases = {
        "notjson.json": "{",
        "list.json": "[]",
        "type.json": json.dumps({"type": "tensor"}),
        "missing.json": json.dumps({"type": "qls"}),
        "n.json": json.dumps({"type": "qls", "n": 0, "entries": []}),
        "shape.json": json.dumps({"type": "qls", "n": 2, "entries": [[[1, 0]]]}),
        "veclen.json": json.dumps({"type": "qls", "n": 2, "entries": [[[1], [1]], [[1], [1]]]}),
        "ragged.json": json.dumps({"type": "matrix", "matrix": [[1, 2], [3]]}),
        "dims.json": json.dumps(
            {"type": "qlis", "n": 1, "d": 1, "block_dims": [[0]], "blocks": [[[[1]]]]}
        ),
        "blockshape.json": json.dumps({"type": "qlis", "n": 1, "d": 2, "blocks": [[[[1]]]]}),
        "part.json": json.dumps({"type": "sppm", "n": 1, "d": 2, "parts": [[[[1]]]]}),
        "enc.json": json.dumps({"type": "encoder", "n": 1, "d": 1, "map": [[1], [0]]}),
    }
    for name, text in cases.items():
        p = tmp_path / name
        p.write_text(text)
        with pytest.raises(FormatError):
            formats.load(p)
    with pytest.raises(FormatError):
        formats.load(tmp_path / "absent.json")


def test_null_blocks_and_parts():
    doc = {"type": "qlis", "n": 2, "d": 1, "blocks": [[[[1]], None], [None, [[1]]]]}
    kind, sq = formats.from_doc(doc)
    assert kind == "qlis" and sq.blocks[0][1] is None
    assert sq.block_dims.tolist() == [[1, 0], [0, 1]]
    _, t = formats.from_doc({"type": "sppm", "n": 1, "d": 1, "parts": [[None]]})
    assert t.parts[0, 0, 0, 0] == 0


def test_dumps_is_canonical():
    doc = {"b": 1, "a": [1.0, 2.0]}
    assert formats.dumps(doc) == formats.dumps(dict(reversed(list(doc.items()))))
    with pytest.raises(ValueError):
        formats.dumps({"x": float("nan")})
