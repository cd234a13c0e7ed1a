import csv
import json
from fractions import Fraction

import pytest

from torsion_forge.cli import UsageError, main, parse_complex, parse_grid, parse_value


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert parse_value("3/5") == Fraction(3, 5)
    assert parse_value("sqrt(9/4)") == Fraction(3, 2)
    assert parse_value("sqrt(6)") ** 2 == 6
    assert parse_complex("3+4i") == (3, 4)
    assert parse_complex("-i") == (0, -1)
    assert parse_complex("3i") == (0, 3)
    assert parse_complex("1/2-3i") == (Fraction(1, 2), -3)
    assert parse_complex("2") == (2, 0)
    assert parse_grid("0:1:1/2") == [0, Fraction(1, 2), 1]
    for bad in ("x", "sqrt(-1)", "1/0"):
        with pytest.raises(UsageError):
            parse_value(bad)
    with pytest.raises(UsageError):
        parse_complex("3+4j")
    with pytest.raises(UsageError):
        parse_grid("1:0:1")


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and len(data["results"]) == 6
    assert all(c["ok"] for block in data["results"] for c in block["checks"])


def test_verify_file(tmp_path, capsys):
    from torsion_forge.verify import fixture_text

    good = tmp_path / "h3.tf"
    good.write_text(fixture_text("h3"))
    assert run(capsys, "verify", "--file", str(good))[0] == 0
    bad = tmp_path / "bad.tf"
    bad.write_text(fixture_text("h3").replace("o[1][2] = -P", "o[1][2] = P"))
    assert run(capsys, "verify", "--file", str(bad))[0] == 2
    broken = tmp_path / "broken.tf"
    broken.write_text("algebra x;\nd e9 = e12;\n")
    assert run(capsys, "verify", "--file", str(broken))[0] == 3


def test_solve_sl2c_bismut(capsys):
    code, out, _ = run(capsys, "solve", "--algebra", "sl2c", "--eps", "1/2", "--rho", "0", "--t", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["alpha"] == "4" and data["motion_equations"] is True


def test_solve_h3(capsys):
    code, out, _ = run(capsys, "solve", "--algebra", "h3", "--eps", "1/2", "--lambda", "1/10", "--json")
    data = json.loads(out)
    assert code == 0 and data["alpha_sign"] == 1 and data["motion_equations"] is True


def test_solve_g7_chern(capsys):
    code, out, _ = run(capsys, "solve", "--algebra", "g7", "--eps", "0", "--rho", "1/2", "--r", "2",
                       "--u", "4/5", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["back_substitution"] is True and data["alpha"] == "768/25"
    assert data["motion_equations"] is False


def test_solve_g7_radical(capsys):
    code, out, _ = run(capsys, "solve", "--algebra", "g7", "--eps", "1/2", "--rho", "0", "--r", "2",
                       "--t", "sqrt(6)", "--u1", "sqrt(15)", "--json")
    data = json.loads(out)
    assert code == 0 and data["mu_squared"] == "4" and data["alpha"] == "1/5"


def test_solve_g7_failures(capsys):
    assert run(capsys, "solve", "--algebra", "g7", "--eps", "0", "--rho", "0", "--r", "2", "--u1", "1/2")[0] == 2
    assert run(capsys, "solve", "--algebra", "g7", "--r", "1", "--u1", "2")[0] == 3
    assert run(capsys, "solve", "--algebra", "h3", "--t", "0")[0] == 3
    assert run(capsys, "solve", "--algebra", "h3", "--eps", "abc")[0] == 3


def test_usage_errors_exit_3(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", "--algebra", "nope"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 3


def test_scan_region_outputs(tmp_path, capsys):
    out_csv, fig = tmp_path / "scan.csv", tmp_path / "region.png"
    code, out, _ = run(capsys, "scan-region", "--grid=-1:1:1/2", "--csv", str(out_csv),
                       "--figure", str(fig), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["points"] == 25 and not data["DeltaPlus_definitions_disagree"]
    with open(out_csv, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 25
    assert list(rows[0]) == ["eps", "rho", "L", "N", "M", "S", "Z", "W", "d", "beta", "in_Delta",
                             "in_DeltaPlus", "sign_alpha_flat", "sign_alpha_nonflat"]
    bismut = next(r for r in rows if (r["eps"], r["rho"]) == ("1/2", "0"))
    assert bismut["in_DeltaPlus"] == "True"
    assert fig.stat().st_size > 1000


def test_scan_svg(tmp_path, capsys):
    fig = tmp_path / "region.svg"
    assert run(capsys, "scan-region", "--grid=0:1:1", "--svg", str(fig))[0] == 0
    assert fig.read_text().lstrip().startswith("<?xml")


def test_scan_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("TORSION_FORGE_THREADS", "zero")
    assert run(capsys, "scan-region", "--grid=0:1:1")[0] == 3


def test_holonomy(capsys):
    code, out, _ = run(capsys, "holonomy", "--algebra", "g7", "--r", "3", "--u", "1+4i", "--json")
    assert code == 0 and json.loads(out)["dimension"] == 8
    code, out, err = run(capsys, "holonomy", "--algebra", "g7", "--r", "1", "--u1", "1/2")
    assert code == 3 and "for example" in err
    code, out, _ = run(capsys, "holonomy", "--algebra", "sl2c")
    assert code == 0 and "so(3)" in out


def test_cohomology(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "sl2c")
    assert code == 0 and "is exact" in out
    code, out, _ = run(capsys, "cohomology", "--algebra", "h3", "--cup", "--json")
    data = json.loads(out)
    assert data["exact"] is False and data["cup_product"]["kernel_witness"] == "(1)*e5"
    code, out, _ = run(capsys, "cohomology", "--algebra", "g7", "--delta", "1", "--form", "e12345")
    assert code == 0 and "is exact" in out
    assert run(capsys, "cohomology", "--algebra", "h3", "--form", "e6")[0] == 2
    assert run(capsys, "cohomology", "--algebra", "h3", "--form", "e6 +")[0] == 3


def test_table1(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0 and "FAIL" not in out
