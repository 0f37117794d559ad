import json
import shutil
from fractions import Fraction as F

import pytest

from extalg.algebra import Algebra, annihilator, basis_vector
from extalg.catalog import (FAIL, PASS, CatalogError, UnknownName, algebra_json, default_catalog_path,
                            generate_Rn, load_catalog, verify_catalog)
from extalg.identity import check_identity


def test_shipped_counts(catalog):
    by_dim = {}
    for e in catalog.entries.values():
        by_dim.setdefault("family" if e.algebra.parameters and e.name.startswith("N") else e.algebra.dim, []).append(e.name)
    assert sorted(by_dim[1] + by_dim[2]) == ["N1", "R2s_1"]
    assert sorted(by_dim[3]) == ["R3_1", "R3s_1", "R3s_2", "R3s_3", "R3s_4"]
    assert sorted(by_dim[4]) == [f"R4_{i}" for i in range(1, 10)]
    assert sorted(by_dim["family"]) == ["N2_alpha", "N3_alpha"]
    assert len(catalog) == 18
    assert len(catalog.rows) == 6


def test_tags_are_consistent(catalog):
    for e in catalog.entries.values():
        for label, A in e.instances():
            nonpure = bool(check_identity(A, "xyz-zero-left")) and bool(check_identity(A, "xyz-zero-right"))
            if "non-pure" in e.tags:
                assert nonpure, label
            if "pure" in e.tags:
                assert not nonpure, label
            if A.dim == 4:
                assert annihilator(A).contains(basis_vector(4, 3)), label


def test_single_nontrivial_two_dim_entry(catalog):
    two = [e for e in catalog.entries.values() if e.algebra.dim == 2]
    assert [e.name for e in two] == ["R2s_1"]
    assert two[0].algebra.entries() == [(1, 1, 2, F(1))]


def test_r3s4_has_two_golden_rows(catalog):
    rows = [r for r in catalog.cohomology if r["algebra"] in ("R3s_4", "R3s_4(0)")]
    assert len(rows) == 2
    assert {r["h2_dim"] for r in rows} == {3, 4}
    assert catalog.entries["R3s_4"].algebra.parameters == {"a"}


def test_resolve_forms(catalog):
    assert catalog.resolve("zero3") == Algebra.zero(3)
    assert catalog.resolve("N2") == Algebra.zero(2)
    assert catalog.resolve("R4") == catalog.resolve("R4_9")
    assert not catalog.resolve("R3s_4(0)").parameters
    with pytest.raises(UnknownName) as exc:
        catalog.resolve("R9_9")
    assert "R4_1" in str(exc.value)
    with pytest.raises(UnknownName):
        catalog.row("nope")


def test_generate_rn():
    assert generate_Rn(1) == Algebra.zero(1)
    A = generate_Rn(5)
    assert check_identity(A, "associative") and check_identity(A, "commutative")
    with pytest.raises(ValueError):
        generate_Rn(0)


def test_empty_file_gives_empty_catalog(tmp_path):
    (tmp_path / "empty.json").write_text("")
    cat = load_catalog(tmp_path)
    assert len(cat) == 0
    report = verify_catalog(cat)
    assert report.ok and all(not s.checks for s in report.sections)


def test_malformed_constant_names_entry(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"algebras": [{"name": "Broken", "dim": 2,
                                           "constants": [{"i": 1, "j": 1, "k": 2, "value": "1/0"}]}]}, indent=1))
    with pytest.raises(CatalogError) as exc:
        load_catalog(f)
    msg = str(exc.value)
    assert "Broken" in msg and "bad.json:4" in msg


def test_json_syntax_error_has_position(tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{"algebras": [\n  {"name": }\n]}')
    with pytest.raises(CatalogError, match=r"x\.json:2:\d+"):
        load_catalog(f)


def test_dangling_reference(tmp_path):
    f = tmp_path / "x.json"
    f.write_text(json.dumps({"rows": [{"name": "r", "source": "Nope", "target": "zero1", "basis": [["1"]]}]}))
    with pytest.raises(CatalogError, match="Nope"):
        load_catalog(f)


def test_unknown_section(tmp_path):
    f = tmp_path / "x.json"
    f.write_text(json.dumps({"algebra": []}))
    with pytest.raises(CatalogError, match="unknown sections"):
        load_catalog(f)


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("EXTALG_CATALOG", str(tmp_path))
    assert default_catalog_path() == tmp_path
    monkeypatch.delenv("EXTALG_CATALOG")
    assert (default_catalog_path() / "algebras").is_dir()


def test_algebra_json_round_trip(tmp_path, catalog):
    A = catalog.resolve("R4_6")
    (tmp_path / "one.json").write_text(json.dumps({"algebras": [algebra_json(A, "Copy", tags=["x"])]}))
    cat = load_catalog(tmp_path)
    assert cat.resolve("Copy") == A
    assert cat.entries["Copy"].tags == {"x"}


def test_mutated_r45_fails_right_alternativity(tmp_path):
    src = default_catalog_path()
    dst = tmp_path / "cat"
    shutil.copytree(src, dst)
    path = dst / "algebras" / "dim4_pure.json"
    data = json.loads(path.read_text())
    for entry in data["algebras"]:
        if entry["name"] == "R4_5":
            for c in entry["constants"]:
                if (c["i"], c["j"], c["k"]) == (2, 1, 3):
                    c["value"] = "1"
    path.write_text(json.dumps(data, indent=1))
    report = verify_catalog(load_catalog(dst), only=["identities"])
    check = next(c for c in report.section("identities").checks if c.id == "R4_5 right-alternative")
    assert check.status == FAIL and check.detail["witness"]
    assert not report.ok


def test_report_rendering(catalog):
    report = verify_catalog(catalog, only=["one_generated"])
    assert report.ok
    assert [c.status for c in report.section("one_generated").checks] == [PASS] * 7
    d = json.loads(report.to_json())
    assert d["schema"] == 1 and d["summary"]["pass"] == 7
    text = report.to_text()
    assert "result: OK" in text and "R4 generated equals R4_9" in text
