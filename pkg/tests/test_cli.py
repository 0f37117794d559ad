import json
import subprocess
import sys

import pytest

from extalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_r48(capsys):
    code, out, _ = run(capsys, "invariants", "--algebra", "R4_8")
    assert code == 0 and "dim_der = 3" in out


def test_invariants_family_uses_samples(capsys):
    code, out, _ = run(capsys, "invariants", "--algebra", "N2_alpha")
    assert code == 0 and out.count("dim_der") == 3
    code, out, _ = run(capsys, "invariants", "--algebra", "N2_alpha", "--alpha", "7")
    assert code == 0 and out.count("dim_der") == 1


def test_degenerate_row(capsys):
    code, out, _ = run(capsys, "degenerate", "--row", "R4_9_to_R4_1")
    assert code == 0 and "Verified" in out


def test_degenerate_custom_basis(capsys, tmp_path):
    basis = tmp_path / "b.json"
    basis.write_text(json.dumps([["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]))
    code, out, _ = run(capsys, "degenerate", "--source", "R4_1", "--target", "R4_9", "--basis", str(basis))
    assert code == 1 and "Failed" in out and "mismatch" in out
    code, _, err = run(capsys, "degenerate", "--source", "R4_1")
    assert code == 2 and "--basis" in err


def test_check_identity(capsys, tmp_path):
    code, out, _ = run(capsys, "check-identity", "--algebra", "zero4", "--identity", "associative")
    assert code == 0 and "Holds" in out
    code, out, _ = run(capsys, "check-identity", "--algebra", "R4_5", "--identity", "associative")
    assert code == 1 and "Fails at (e1,e1,e2)" in out
    f = tmp_path / "id.txt"
    f.write_text("(x*y)*z = x*(y*z)\n")
    code, out, _ = run(capsys, "check-identity", "--algebra", "R4_9", "--identity", str(f))
    assert code == 0 and "Holds" in out


def test_cohomology_verb(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "R3s_1", "--identity", "right-alternative")
    assert code == 0 and "(dim 4)" in out and "B2 = <D11>" in out
    code, out, _ = run(capsys, "cohomology", "--algebra", "R4_5", "--identity", "associative")
    assert code == 1


def test_extend_writes_loadable_json(capsys, tmp_path):
    out_file = tmp_path / "ext.json"
    code, out, _ = run(capsys, "extend", "--algebra", "R3s_1", "--cocycle", "D12+D21+D33",
                       "--name", "X", "--out", str(out_file))
    assert code == 0
    code, out, _ = run(capsys, "--catalog", str(tmp_path), "invariants", "--algebra", "X")
    assert code == 0 and "dim_der = 5" in out
    code, out, _ = run(capsys, "extend", "--algebra", "R3s_1", "--cocycle", "D23")
    assert code == 1 and "not a cocycle" in out


def test_closed_set_verb(capsys):
    code, out, _ = run(capsys, "closed-set", "--algebra", "R4_8", "--set", "R4_8_borel")
    assert code == 0 and "satisfies" in out
    code, out, _ = run(capsys, "closed-set", "--algebra", "R4_5", "--set", "R4_8_borel", "--search", "300", "--seed", "1")
    assert code == 1 and "NoBasisFound" in out and "evidence" in out


def test_iso_evidence(capsys):
    code, out, _ = run(capsys, "iso-evidence", "--a", "R4_6", "--b", "R4_7", "--prime", "2")
    assert code == 0 and "NoneFoundModP" in out
    code, out, _ = run(capsys, "iso-evidence", "--a", "R4_1", "--b", "R4_1", "--prime", "3")
    assert code == 0 and "IsoWitness" in out


def test_unknown_name_lists_available(capsys):
    code, _, err = run(capsys, "invariants", "--algebra", "Nope")
    assert code == 2 and "R4_9" in err
    code, _, err = run(capsys, "degenerate", "--row", "nope")
    assert code == 2 and "R4_9_to_R4_1" in err


def test_bad_catalog_is_input_error(capsys, tmp_path):
    (tmp_path / "x.json").write_text("{")
    code, _, err = run(capsys, "--catalog", str(tmp_path), "invariants", "--algebra", "zero1")
    assert code == 2 and "x.json:1" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-verb"])
    assert exc.value.code == 2


def test_report_json_is_deterministic(tmp_path):
    outs = []
    for jobs in ("1", "2"):
        path = tmp_path / f"r{jobs}.json"
        code = main(["report", "--format", "json", "--trials", "1000", "--jobs", jobs, "--seed", "3",
                     "--out", str(path)])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert data["schema"] == 1 and "seconds" not in outs[0].decode()
    fails = [c["id"] for s in data["sections"] for c in s["checks"] if c["status"] == "fail"]
    assert fails == ["R4_5 dim Der"]
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "extalg", "check-identity", "--algebra", "zero4",
                           "--identity", "associative"], capture_output=True, text=True)
    assert proc.returncode == 0 and "Holds" in proc.stdout
