from __future__ import annotations

import json
import re
import xml.dom.minidom
from fractions import Fraction as F

import pytest

from penrose import document as docs
from penrose.cli import main
from penrose.completion import FULL, SEVEN
from penrose.engine import PenroseParams, build_lattice, label, parse_label
from penrose.matrix import poly_to_sym
from penrose.poly import Poly
from penrose.projective import proj_equal_sym
from penrose.svg import SAMPLES, conic_residual

x, y, z = (Poly.var(3, i) for i in range(3))
PRESET = PenroseParams.preset(x * x + 2 * y * y - z * z + x * y, (x + z, y - 2 * z, x + y + 3 * z),
                              F(1, 3), F(1, 4), F(2, 7))


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def write(path, doc):
    path.write_text(json.dumps(doc))
    return path


def params_doc(params):
    return {"version": 1, "options": {"mode": "exact"}, "params": docs.params_section(params)}


def seven_doc(params):
    lat = build_lattice(params)
    return {"version": 1, "config": docs.config_section({s: lat.vertices[s] for s in SEVEN})}


def test_construct_preset_matches_engine(tmp_path, capsys):
    src = write(tmp_path / "p.json", params_doc(PRESET))
    code, out, _ = run(["construct", src], capsys)
    assert code == 0
    doc = json.loads(out)
    lat = build_lattice(PRESET)
    verts = docs.read_vertices(doc, "exact")
    assert len(verts) == 8
    for s, A in verts.items():
        assert A == poly_to_sym(lat.vertices[s])
    assert doc["f"]["S_{123}"] == docs.dump_scalar(lat.f[FULL])
    assert set(doc["face_points"]) == {"S_{}:12", "S_{}:13", "S_{}:23", "S_{1}:23", "S_{2}:13", "S_{3}:12"}


def test_construct_hypercube_and_quadrics(capsys):
    code, out, _ = run(["construct", "--n", "4", "--seed", "3"], capsys)
    assert code == 0 and len(json.loads(out)["config"]["vertices"]) == 16
    code, out, _ = run(["construct", "--space", "quadric", "--seed", "3"], capsys)
    doc = json.loads(out)
    assert doc["config"]["space"] == "quadric" and len(doc["config"]["vertices"]["S_{}"]) == 4


def test_construct_is_deterministic(capsys):
    first = run(["construct", "--seed", "5"], capsys)[1]
    assert first == run(["construct", "--seed", "5"], capsys)[1]
    assert first != run(["construct", "--seed", "6"], capsys)[1]


def test_input_errors_exit_2(tmp_path, capsys):
    doc = params_doc(PRESET)
    doc["params"]["d"][0] = "1/0"
    code, _, err = run(["construct", write(tmp_path / "bad.json", doc)], capsys)
    assert code == 2 and "params.d[0]" in err
    (tmp_path / "syntax.json").write_text('{\n  "params": [1, 2,\n}')
    code, _, err = run(["construct", tmp_path / "syntax.json"], capsys)
    assert code == 2 and "line 3, column 1" in err
    doc = params_doc(PRESET)
    doc["params"]["d"][1] = "0.5"
    code, _, err = run(["construct", write(tmp_path / "dec.json", doc)], capsys)
    assert code == 2 and "exact mode" in err
    code, _, _ = run(["construct", write(tmp_path / "p.json", params_doc(PRESET)), "--n", "4"], capsys)
    assert code == 2
    assert run(["scenario", "nonsense"], capsys)[0] == 2
    assert run(["verify", tmp_path / "missing.json"], capsys)[0] == 2


def test_complete_valid_seven(tmp_path, capsys):
    code, out, _ = run(["complete", write(tmp_path / "s.json", seven_doc(PRESET))], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["completion"]["unique"] is True
    top = docs.read_vertices(doc, "exact")[FULL]
    assert proj_equal_sym(top, poly_to_sym(build_lattice(PRESET).vertices[FULL]))


def test_complete_concurrent_chords_gives_two(tmp_path, capsys):
    params = PenroseParams.preset(x * x + y * y - z * z + x * z, (x, y, x + y), F(1, 2), F(1, 3), F(2, 5))
    code, out, err = run(["complete", write(tmp_path / "s.json", seven_doc(params))], capsys)
    assert code == 0 and "two completions" in err
    doc = json.loads(out)
    assert doc["completion"]["unique"] is False and "second" in doc["completion"]


def test_complete_broken_face_exits_1(tmp_path, capsys):
    params = PenroseParams.preset(x * x + y * y - z * z, (x + y + z, x, 2 * y), F(1, 3), F(1, 5), F(1, 7))
    doc = seven_doc(params)
    doc["config"]["vertices"]["S_{23}"] = docs.dump_quadratic(-2 * x * x - y * y + 2 * z * z)
    code, _, err = run(["complete", write(tmp_path / "s.json", doc)], capsys)
    assert code == 1 and "InconsistentFace" in err


def test_verify_passes_and_catches_perturbation(tmp_path, capsys):
    code, out, _ = run(["construct", "--seed", "1"], capsys)
    cube = json.loads(out)
    code, out, _ = run(["verify", write(tmp_path / "c.json", cube)], capsys)
    assert code == 0 and "0 fail" in out
    cube["config"]["vertices"]["S_{3}"][1][1] = "12345/7"
    code, out, _ = run(["verify", write(tmp_path / "bad.json", cube)], capsys)
    assert code == 1
    failing = {line.split("  ")[1] for line in out.splitlines() if line.startswith("FAIL")}
    assert "edge S_{}-S_{3}" in failing and "edge S_{1}-S_{2}" not in failing


def test_verify_float_noise_is_flagged(tmp_path, capsys):
    code, out, _ = run(["construct", "--seed", "1"], capsys)
    cube = json.loads(out)
    cube["options"]["mode"] = "float"
    verts = cube["config"]["vertices"]
    for key, rows in verts.items():
        verts[key] = [[float(F(v)) + (1e-12 if i == j else 0.0) for j, v in enumerate(r)] for i, r in enumerate(rows)]
    code, out, _ = run(["verify", write(tmp_path / "f.json", cube)], capsys)
    assert code == 0
    flags = int(re.search(r"(\d+) flag", out).group(1))
    assert flags > 0 and "0 fail" in out


def test_verify_config_only_document(tmp_path, capsys):
    lat = build_lattice(PRESET)
    doc = {"version": 1, "config": docs.config_section(lat.vertices)}
    code, out, _ = run(["verify", write(tmp_path / "c.json", doc)], capsys)
    assert code == 0 and "18 pass" in out


def test_scenario_and_classify(tmp_path, capsys):
    code, out, _ = run(["scenario", "brianchon", "--seed", "7"], capsys)
    assert code == 0 and "classified as Brianchon" in out
    code, out, _ = run(["classify", write(tmp_path / "p.json", params_doc(PRESET))], capsys)
    assert code == 0 and out.strip() == "generic"


def test_lift_then_slice_round_trip(tmp_path, capsys):
    doc = seven_doc(PRESET)
    doc["frame"] = {"u": [3, "1/2", -1, 2]}
    code, out, _ = run(["lift", write(tmp_path / "s.json", doc)], capsys)
    assert code == 0
    lifted = json.loads(out)
    assert lifted["faces"]["apex"] == [0, 0, 0, 1]
    code, out, _ = run(["slice", write(tmp_path / "l.json", lifted)], capsys)
    assert code == 0
    cut = docs.read_vertices(json.loads(out), "exact")
    lat = build_lattice(PRESET)
    for s, A in cut.items():
        assert proj_equal_sym(A, poly_to_sym(lat.vertices[s]))


def test_render_resubstitution(tmp_path, capsys):
    code, out, _ = run(["construct", "--seed", "4"], capsys)
    cube = write(tmp_path / "c.json", json.loads(out))
    code, svg_text, _ = run(["render", cube], capsys)
    assert code == 0
    xml.dom.minidom.parseString(svg_text)
    verts = docs.read_vertices(json.loads(cube.read_text()), "exact")
    branches = re.findall(r'data-vertex="([^"]+)" data-branch="\d+" d="([^"]+)"', svg_text)
    assert branches
    for key, d in branches:
        nums = [float(t) for t in d.replace("M", " ").replace("L", " ").split()]
        pts = list(zip(nums[::2], nums[1::2]))
        assert len(pts) >= 128
        assert max(conic_residual(verts[parse_label(key)], px, py) for px, py in pts) <= 1e-6
    assert 'class="chord"' in svg_text and "stroke-dasharray" in svg_text
    assert 'class="face-point"' in svg_text
    assert SAMPLES >= 128


def test_render_annotates_empty_conics(tmp_path, capsys):
    lat = build_lattice(PRESET)
    verts = {s: poly_to_sym(v) for s, v in lat.vertices.items()}
    verts[frozenset()] = poly_to_sym(x * x + y * y + z * z)
    doc = {"version": 1, "config": docs.config_section(verts)}
    code, svg_text, _ = run(["render", write(tmp_path / "c.json", doc)], capsys)
    assert code == 0
    assert "S_{}: no real points" in svg_text
    assert f'data-vertex="{label(())}"' not in svg_text
