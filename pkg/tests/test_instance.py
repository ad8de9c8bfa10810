import json
from pathlib import Path

import pytest

from dvt.cli import _safe
from dvt.errors import EmptyImage, NonClosedC, ParseError, PartialMap, UnknownCell
from dvt.gallery import DEFAULT_NAMES, build_example
from dvt.instance import emit_instance, from_gallery, parse_instance, parse_text
from dvt.viability import INF, viability_sequence

GOLDEN = Path(__file__).parent / "golden"

BASE = {
    "name": "seg",
    "points": ["a", "b", "ab"],
    "hasse": [["a", "ab"], ["b", "ab"]],
    "C": ["a"],
    "map_kind": "function",
    "map": {"a": ["b"]},
}


def doc(**changes):
    d = json.loads(json.dumps(BASE))
    for k, v in changes.items():
        if v is None:
            d.pop(k)
        else:
            d[k] = v
    return json.dumps(d, indent=2)


def test_minimal_instance():
    inst = parse_text(doc())
    assert inst.name == "seg" and inst.C.ids() == ["a"]
    assert viability_sequence(inst.space, inst.C, inst.f).iter == 1
    assert not inst.has_expected


def test_setvalued_and_expected():
    inst = parse_text(doc(map_kind="setvalued", map={"a": ["a", "ab"]},
                          expected={"iter": "inf", "hypotheses": {"usc": True}}))
    assert inst.f.kind == "setvalued"
    assert inst.expected_iter == INF and inst.expected_hypotheses == {"usc": True}


@pytest.mark.parametrize("name", DEFAULT_NAMES)
def test_goldens_round_trip_byte_identical(name):
    path = GOLDEN / f"{_safe(name)}.json"
    text = path.read_text(encoding="utf-8")
    inst = parse_instance(path)
    assert emit_instance(inst) == text
    assert emit_instance(from_gallery(build_example(name))) == text


def test_golden_certificates_survive_round_trip():
    inst = parse_instance(GOLDEN / "ex_stargate_bis.json")
    assert inst.certificate is not None and inst.certificate.subdivided
    g = build_example("ex_stargate_bis")
    assert inst.certificate.tables() == g.certificate.tables()


def test_partial_map_reports_line():
    with pytest.raises(PartialMap) as err:
        parse_text(doc(C=["a", "b"]))
    assert "line" in str(err.value) and "b" in str(err.value)


def test_empty_image():
    with pytest.raises(EmptyImage):
        parse_text(doc(map_kind="setvalued", map={"a": []}))


def test_unknown_cells():
    with pytest.raises(UnknownCell):
        parse_text(doc(C=["z"]))
    with pytest.raises(UnknownCell):
        parse_text(doc(hasse=[["a", "z"]]))
    with pytest.raises(UnknownCell):
        parse_text(doc(map={"a": ["z"]}))


@pytest.mark.parametrize("bad,needle", [
    ("{", "line"),
    ("[]", "top level"),
])
def test_syntax_errors(bad, needle):
    with pytest.raises(ParseError) as err:
        parse_text(bad)
    assert needle in str(err.value)


@pytest.mark.parametrize("changes", [
    {"points": None},
    {"extra": 1},
    {"map_kind": "relation"},
    {"map": ["a"]},
    {"map": {"a": ["a", "b"]}},
    {"map": {"a": ["b"], "ab": ["a"]}},
    {"hasse": [["a"]]},
    {"expected": {"iter": -1}},
    {"expected": {"iter": 1, "other": 2}},
    {"certificate_domain": "chains", "certificate": []},
])
def test_malformed_documents(changes):
    with pytest.raises(ParseError):
        parse_text(doc(**changes))


def test_parse_error_carries_line_number():
    text = doc(map_kind="relation")
    with pytest.raises(ParseError) as err:
        parse_text(text)
    line = next(i for i, l in enumerate(text.splitlines(), 1) if '"map_kind"' in l)
    assert err.value.line == line


def test_non_closed_domain_warns():
    text = doc(C=["ab"], map={"ab": ["a"]})
    with pytest.warns(NonClosedC):
        inst = parse_text(text)
    assert inst.warnings
    assert not viability_sequence(inst.space, inst.C, inst.f).c_closed
