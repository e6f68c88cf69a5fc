import io
import json

from slb.cli import main
from slb.catalog import build_S_ij, build_S_ijk
from slb.movie_core import print_movie


def _run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_catalog_to_invariants_pipeline(tmp_path):
    path = tmp_path / "s123.movie"
    code, _ = _run(["catalog", "--gen", "Sk", "--n", "3", "--i", "1", "--j", "2", "--k", "3", "-o", str(path)])
    assert code == 0
    code, text = _run(["invariants", str(path), "--json"])
    assert code == 0
    data = json.loads(text)
    assert data["tlk"]["1,2,3"] == 1
    assert data["tlk"]["3,1,2"] == -1
    assert data["tlk"]["2,3,1"] == 0
    assert all(v == 0 for v in data["dlk"].values())


def test_validate_and_relations(tmp_path):
    path = tmp_path / "s12.movie"
    _run(["catalog", "--gen", "S", "--n", "2", "--i", "1", "--j", "2", "-o", str(path)])
    code, text = _run(["validate", str(path)])
    assert code == 0 and "valid movie" in text
    code, text = _run(["relations", str(path)])
    assert code == 0 and "relations_ok: true" in text


def test_determinism_byte_identical(tmp_path):
    path = tmp_path / "m.movie"
    _run(["catalog", "--gen", "Sk-", "--n", "3", "--i", "2", "--j", "3", "--k", "1", "-o", str(path)])
    outs = [_run(["invariants", str(path), "--json"])[1] for _ in range(2)]
    assert outs[0] == outs[1]
    cats = [_run(["catalog", "--gen", "trivial", "--n", "2"])[1] for _ in range(2)]
    assert cats[0] == cats[1]


def test_normal_form_round_trip(tmp_path):
    src = tmp_path / "in.movie"
    out_movie = tmp_path / "realized.movie"
    _run(["catalog", "--gen", "Sk", "--n", "3", "--i", "1", "--j", "2", "--k", "3", "-o", str(src)])
    code, text = _run(["normal-form", "--from-movie", str(src), "-o", str(out_movie)])
    assert code == 0
    assert "S(1,2,3) x 1" in text
    code1, inv1 = _run(["invariants", str(src), "--json"])
    code2, inv2 = _run(["invariants", str(out_movie), "--json"])
    assert code1 == code2 == 0
    assert json.loads(inv1)["tlk"] == json.loads(inv2)["tlk"]
    assert json.loads(inv1)["dlk"] == json.loads(inv2)["dlk"]


def test_normal_form_of_trivial(tmp_path):
    path = tmp_path / "t3.movie"
    _run(["catalog", "--gen", "trivial", "--n", "3", "-o", str(path)])
    code, text = _run(["normal-form", "--from-movie", str(path)])
    assert code == 0
    assert "(trivial link)" in text


def test_normal_form_from_class(tmp_path):
    from slb.bordism import basis_e

    path = tmp_path / "cls.json"
    path.write_text(basis_e(3, 1, 2, 3).to_json())
    code, text = _run(["normal-form", "--from-class", str(path)])
    assert code == 0
    assert "S(1,2,3) x 1" in text


def test_exit_code_input_error(tmp_path):
    code, _ = _run(["validate", str(tmp_path / "missing.movie")])
    assert code == 2
    bad = tmp_path / "bad.movie"
    bad.write_text("n=1\n")
    code, _ = _run(["validate", str(bad)])
    assert code == 2


def test_exit_code_nongeneric(tmp_path):
    from dataclasses import replace

    movie = build_S_ijk(3, 1, 2, 3)
    events = []
    for ev in movie.events:
        if ev.kind == "R3":
            ev = replace(
                ev,
                top=replace(ev.top, dir=ev.mid.dir, vel=ev.mid.vel),
                bot=replace(ev.bot, dir=ev.mid.dir, vel=ev.mid.vel),
            )
        events.append(ev)
    bad = replace(movie, events=tuple(events))
    path = tmp_path / "nongeneric.movie"
    path.write_text(print_movie(bad))
    code, _ = _run(["validate", str(path)])
    assert code == 3


def test_oracle_tlk_from_mesh_files(tmp_path):
    from slb.gauss_oracle import split_tori_meshes, write_mesh

    paths = []
    for m in split_tori_meshes(n=(24, 12)):
        p = tmp_path / f"m{m.component}.mesh"
        write_mesh(m, p)
        paths.append(str(p))
    code, text = _run(["oracle", "tlk", "--meshes"] + paths)
    assert code == 0
    assert text.strip() == "degree: 0"


def test_oracle_lk(tmp_path):
    import math

    data = {
        "curve1": [[math.cos(t), math.sin(t), 0.0] for t in [k * math.pi / 12 for k in range(24)]],
        "curve2": [[1 + math.cos(t), 0.0, math.sin(t)] for t in [k * math.pi / 12 for k in range(24)]],
    }
    path = tmp_path / "curves.json"
    path.write_text(json.dumps(data))
    code, text = _run(["oracle", "lk", "--curves", str(path)])
    assert code == 0
    assert text.strip() in ("linking: 1", "linking: -1")
