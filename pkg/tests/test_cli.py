import io
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saddlerep.cli import main
from saddlerep.document import Document, DocumentError, dump, load, parse, serialize
from saddlerep.oracle import random_dc, random_family
from saddlerep.phfunc import ApproximationFamilies, DCPair, MaxOfLinear, MinOfLinear, SaddleFamily
from saddlerep.saddle import exhaustive_families, from_dc

ABS_TEXT = json.dumps(
    {"format_version": 1, "kind": "dc", "dim": 1, "payload": {"plus": [[1], [-1]], "minus": [[0]]}}
)
MIXED = DCPair(MaxOfLinear([[1, 0], [-1, 0]]), MaxOfLinear([[0, 0.5], [0, -0.5]]))
COUNTER = SaddleFamily([[1.0, -1.0], [-1.0, 1.0]])


def write(tmp_path, name, doc_or_text):
    path = tmp_path / name
    path.write_text(doc_or_text if isinstance(doc_or_text, str) else serialize(doc_or_text))
    return str(path)


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- documents


def test_minimal_abs_document():
    doc = parse(ABS_TEXT)
    assert doc.kind == "dc" and doc.dim == 1
    assert doc.payload(-3.0) == 3.0
    assert parse(serialize(doc)) == doc


def test_round_trip_keeps_metadata_and_bits():
    p = DCPair(MaxOfLinear([[0.1, 1 / 3]]), MaxOfLinear([[np.pi, -1e-300]]))
    doc = Document("dc", p, name="thirds", description="non-representable decimals")
    back = parse(serialize(doc))
    assert back == doc
    np.testing.assert_array_equal(back.payload.plus.generators, p.plus.generators)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["dc", "saddle", "families"]))
def test_round_trip_property(seed, kind):
    n = seed % 4 + 1
    p = random_dc(seed, n, 4, 4, 5.0)
    payload = {"dc": p, "saddle": random_family(seed, n, 2, 3), "families": exhaustive_families(p)}[kind]
    doc = Document(kind, payload, name=f"doc{seed}")
    assert parse(serialize(doc)) == doc


def test_ragged_grid_names_short_row():
    text = json.dumps(
        {"format_version": 1, "kind": "saddle", "dim": 1, "payload": {"entries": [[[1], [2]], [[1]]]}}
    )
    with pytest.raises(DocumentError) as err:
        parse(text)
    assert err.value.path == "payload.entries[1]"
    assert "ragged" in str(err.value)


def test_nan_rejected():
    with pytest.raises(DocumentError):
        parse(ABS_TEXT.replace("[0]", "[NaN]"))


def test_syntax_error_has_position():
    with pytest.raises(DocumentError) as err:
        parse('{\n  "kind": "dc",\n  oops\n}')
    assert err.value.line == 3 and err.value.column is not None


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.update(format_version=2), "format_version"),
        (lambda d: d["payload"].update(minus=[]), "payload.minus"),
        (lambda d: d["payload"]["plus"].__setitem__(1, [1, 2]), "payload.plus[1]"),
        (lambda d: d.update(kind="nope"), "kind"),
    ],
)
def test_semantic_errors_have_paths(mutate, path):
    d = json.loads(ABS_TEXT)
    mutate(d)
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(d))
    assert err.value.path is not None and err.value.path.startswith(path)


def test_load_and_dump(tmp_path):
    doc = Document("saddle", COUNTER, name="counter")
    dump(doc, tmp_path / "c.json")
    assert load(tmp_path / "c.json") == doc


# ---------------------------------------------------------------- commands


def test_build_then_verify_pipeline(tmp_path, capsys, monkeypatch):
    f = write(tmp_path, "abs.dc.json", ABS_TEXT)
    code, out, _ = run(capsys, "build-saddle", f)
    assert code == 0 and parse(out).kind == "saddle"
    code, out, _ = run(capsys, "verify", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    assert "is_saddle: true" in out


def test_counterexample_pipeline_exits_one(tmp_path, capsys, monkeypatch):
    f = write(tmp_path, "counter.json", Document("saddle", COUNTER))
    code, out, _ = run(capsys, "build-saddle", f)
    assert code == 0
    code, out, _ = run(capsys, "verify", "--exact2d", "--json", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 1
    rep = json.loads(out)
    assert rep["is_saddle"] is False
    assert rep["max_gap"] == pytest.approx(2.0, abs=1e-12)
    assert abs(rep["witness"][0]) == 1.0


def test_build_families_failure_exits_one(tmp_path, capsys):
    fams = ApproximationFamilies((MaxOfLinear([-1.0, 1.0]),), (MinOfLinear([5.0]),))
    f = write(tmp_path, "bad.json", Document("families", fams))
    code, out, err = run(capsys, "build-saddle", f)
    assert code == 1 and out == ""
    assert "separating direction" in err


def test_eval_at_origin(tmp_path, capsys):
    for name, doc in (
        ("d.json", Document("dc", MIXED)),
        ("s.json", Document("saddle", from_dc(MIXED))),
        ("f.json", Document("families", exhaustive_families(MIXED))),
    ):
        code, out, _ = run(capsys, "eval", "--at", "0,0", "--json", write(tmp_path, name, doc))
        assert code == 0
        rep = json.loads(out)
        assert all(v == 0.0 for k, v in rep.items() if k != "at")


def test_eval_grid(tmp_path, capsys):
    code, out, _ = run(capsys, "eval", "--grid", "8", write(tmp_path, "d.json", Document("dc", MIXED)))
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 9
    assert lines[0].split("\t") == ["angle", "x1", "x2", "dc"]


def test_eval_bad_point(tmp_path, capsys):
    code, _, err = run(capsys, "eval", "--at", "1,2,3", write(tmp_path, "d.json", Document("dc", MIXED)))
    assert code == 2 and "error" in err


def test_sign_reports_not_nonnegative(tmp_path, capsys):
    f = write(tmp_path, "s.json", Document("saddle", from_dc(MIXED)))
    code, out, _ = run(capsys, "sign", f)
    assert code == 1
    assert "not nonnegative" in out and "witness" in out
    code, out, _ = run(capsys, "sign", "--json", write(tmp_path, "a.json", ABS_TEXT))
    assert code == 0 and json.loads(out)["nonnegative"]["holds"] is True


def test_sign_nonpositive_flag(tmp_path, capsys):
    negabs = Document("dc", DCPair(MaxOfLinear([0.0]), MaxOfLinear([1.0, -1.0])))
    assert run(capsys, "sign", "--nonpositive", write(tmp_path, "n.json", negabs))[0] == 0
    assert run(capsys, "sign", write(tmp_path, "n.json", negabs))[0] == 1


def test_descent_and_ascent(tmp_path, capsys):
    f = write(tmp_path, "s.json", Document("saddle", from_dc(MIXED)))
    code, out, _ = run(capsys, "descent", "--json", f)
    rep = json.loads(out)
    assert code == 0 and rep["value"] == pytest.approx(-0.5) and rep["approximate"] is False
    code, out, _ = run(capsys, "ascent", f)
    assert code == 0 and "value: 1" in out


def test_info(tmp_path, capsys):
    code, out, _ = run(capsys, "info", "--json", write(tmp_path, "s.json", Document("saddle", COUNTER, name="c")))
    rep = json.loads(out)
    assert code == 0
    assert rep == {"kind": "saddle", "dim": 1, "name": "c", "rows": 2, "cols": 2, "lipschitz_M": 1.0}


def test_convert_dc_and_reduce_output_files(tmp_path, capsys):
    f = write(tmp_path, "s.json", Document("saddle", from_dc(MIXED)))
    out_path = tmp_path / "out.json"
    assert run(capsys, "convert-dc", f, "-o", str(out_path))[0] == 0
    d = load(out_path)
    X = np.random.default_rng(0).normal(size=(100, 2))
    np.testing.assert_allclose(d.payload(X), MIXED(X), atol=1e-12)
    dup = SaddleFamily(np.concatenate([from_dc(MIXED).entries] * 2))
    assert run(capsys, "reduce", write(tmp_path, "dup.json", Document("saddle", dup)), "-o", str(out_path))[0] == 0
    assert load(out_path).payload.rows == 2


def test_outputs_are_byte_identical(tmp_path, capsys):
    f = write(tmp_path, "r.json", Document("saddle", random_family(5, 3, 3, 3)))
    first = run(capsys, "verify", "--json", "--seed", "4", f)
    assert run(capsys, "verify", "--json", "--seed", "4", f) == first


def test_input_errors_exit_two(tmp_path, capsys):
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify", write(tmp_path, "a.json", ABS_TEXT))[0] == 2
    assert run(capsys, "verify", write(tmp_path, "x.json", "{ not json"))[0] == 2
    assert run(capsys, "no-such-command", "x")[0] == 2
    assert run(capsys, "verify", "--samples", "0", write(tmp_path, "c.json", Document("saddle", COUNTER)))[0] == 2
