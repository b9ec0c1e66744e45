import csv
import io
import json
import math
import subprocess
import sys

import pytest

from solidhull.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants(capsys):
    code, out, _ = run(["constants", "--a", "1", "--b", "1"], capsys)
    assert code == 0
    assert json.loads(out) == {"alpha": 4.0, "beta": 0.5, "G": 1.0, "S": 0.0625}
    code, out, _ = run(["constants", "--a", "1", "--b", "2"], capsys)
    d = json.loads(out)
    assert d["G"] == pytest.approx(1.259921, abs=1e-6) and d["S"] == 2.0


def test_constants_rejects(capsys):
    code, _, err = run(["constants", "--a", "1", "--b", "3"], capsys)
    assert code == 2 and "unsupported order" in err


def test_rm(capsys):
    _, out, _ = run(["rm", "--m", "1"], capsys)
    assert json.loads(out)["rows"][0]["r"] == pytest.approx(0.3819660113, abs=1e-10)
    _, out, _ = run(["rm", "--m", "100", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["r"]) == pytest.approx(0.9048751, abs=1e-7)
    code, _, _ = run(["rm", "--m", "0"], capsys)
    assert code == 2


def test_blocks_and_frame(capsys):
    _, out, _ = run(["blocks", "--n-max", "6"], capsys)
    blocks = {b["n"]: b["M"] for b in json.loads(out)["blocks"]}
    assert blocks[4] == 16
    _, out, _ = run(["framecheck", "--n-max", "60"], capsys)
    d = json.loads(out)
    assert d["min_A"] >= 1 and d["min_B"] >= 1 and d["holds_after_warmup"]


def test_hullnorm_files(tmp_path, capsys):
    ext = tmp_path / "ext.json"
    code, out, _ = run(["generate", "--n-max", "20"], capsys)
    ext.write_text(out)
    _, out, _ = run(["hullnorm", "--input", str(ext), "--input-format", "json_log", "--n-max", "20"], capsys)
    assert abs(json.loads(out)["sup_log"]) < 1e-9
    zero = tmp_path / "z.json"
    zero.write_text("[0, 0, 0]")
    _, out, _ = run(["hullnorm", "--input", str(zero)], capsys)
    assert json.loads(out)["sup_log"] == "-inf"
    _, out, _ = run(["membership", "--input", str(ext), "--input-format", "json_log",
                     "--n-max", "20"], capsys)
    assert json.loads(out)["verdict"] == "bounded"


def test_hullnorm_explicit(tmp_path, capsys):
    f = tmp_path / "m.csv"
    f.write_text("index,re,im\n300,1,0\n")
    _, out, _ = run(["hullnorm", "--input", str(f), "--input-format", "csv_complex",
                     "--explicit", "--n-max", "6"], capsys)
    d = json.loads(out)
    assert d["argmax_n"] == 4
    assert d["sup_log"] == pytest.approx(-16 + 300 * math.log(1 - 1 / 16), rel=1e-11)


def test_bad_input(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("[-1]")
    code, _, err = run(["hullnorm", "--input", str(f)], capsys)
    assert code == 2 and "nonnegative" in err
    code, _, _ = run(["hullnorm", "--input", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_multiplier(capsys):
    _, out, _ = run(["multiplier", "--n-max", "20", "--p", "inf"], capsys)
    d = json.loads(out)
    assert d["verdict"] == "bounded" and abs(d["aggregate_log"]) < 1e-9
    _, out, _ = run(["multiplier", "--n-max", "20", "--p", "1"], capsys)
    d = json.loads(out)
    assert (d["r"], d["s"], d["case"]) == (2.0, 1.0, "a")


def test_verify_exit_codes(capsys):
    code, out, _ = run(["verify", "--which", "rm"], capsys)
    assert code == 0
    assert json.loads(out)["checks"][0]["fitted_order"] == pytest.approx(-1.5, abs=0.15)
    code, out, _ = run(["verify", "--b", "2", "--which", "radius-ratio"], capsys)
    assert code == 0
    code, _, _ = run(["verify", "--b", "2", "--which", "weight-ratio"], capsys)
    assert code == 1
    code, out, _ = run(["verify", "--which", "rm", "--m-grid", "100"], capsys)
    assert code == 0 and json.loads(out)["checks"][0]["fitted_order"] is None


def test_verify_csv(capsys):
    code, out, _ = run(["verify", "--which", "proof-bounds", "--n-grid", "5:40", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["family", "variant", "min", "max", "spread", "bounded"]


def test_deterministic_and_module_entry(tmp_path):
    cmd = [sys.executable, "-m", "solidhull.cli", "generate", "--kind", "random",
           "--seed", "5", "--n-max", "12"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and len(a) > 10


def test_usage_error():
    out = subprocess.run([sys.executable, "-m", "solidhull.cli", "hullnorm"], capture_output=True)
    assert out.returncode == 2
