import io
from pynormality import cli
from pynormality.general.logger import adjust_logger

def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out = out)
    return code, out.getvalue()

def test_1(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    code, out = run(["reduce", "--builtin", "true", "--count", "10"])
    assert code == 0
    assert out.split() == ["1", "2", "1", "2", "3", "1", "2", "3", "2", "3"]
    code, out = run(["reduce", "--predicate", "x = 1", "--count", "6"])
    assert out.split() == ["1", "2", "1", "2", "3", "1"]

def test_2(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    code, out = run(["params", "--max-index", "3"])
    assert code == 0
    assert out.splitlines() == ["i,delta,k,ell", "1,1/4,188,190", "2,1/144,755,1518", "3,1/9216,1890,3794"]

def test_3(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    fh = tmp_path / "digits.txt"
    fh.write_text("0101\n", encoding = "utf8")
    code, out = run(["analyze", "--input", str(fh), "--stride", "2"])
    assert code == 0
    assert out.splitlines() == ["length,D,D_ell", "2,0/1,0/1", "4,0/1,0/1"]
    code, out = run(["analyze", "--input", str(fh), "--ell", "2"])
    assert out.splitlines()[1] == "1,1/2,"
    assert out.splitlines()[-1] == "4,0/1,1/4"

def test_4(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    code, out = run(["digits", "--control", "1", "--count", "5", "--toy-params", "k=2,ell=8"])
    assert code == 0
    assert out.strip() == "00010"
    code, out = run(["digits", "--control", "1", "--count", "3", "--base", "2", "--base", "16",
                     "--toy-params", "k=2,ell=8"])
    lines = out.splitlines()
    assert lines[0] == "000"
    assert len(lines[1].split()) == 3

def test_5(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    code, out = run(["digits", "--control", "1", "--count", "100", "--toy-params", "k=2,ell=8", "--max-rounds", "1"])
    assert code == 3
    assert out.strip() == "0" + "001" * 11

def test_6(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    assert run(["digits", "--builtin", "true", "--base", "1", "--count", "3"])[0] == 2
    assert run(["reduce", "--predicate", "x % 0 = 1", "--count", "3"])[0] == 2
    assert run(["reduce", "--builtin", "true", "--predicate", "x = 1", "--count", "3"])[0] == 2
    assert run(["reduce", "--predicate", "div(x, y - 2)", "--count", "10"])[0] == 2
    assert run(["verify", "--trace", str(tmp_path / "missing.jsonl")])[0] == 2
    assert run(["launch"])[0] == 2

def test_7(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    fh = tmp_path / "toy.jsonl"
    code, _ = run(["digits", "--control", "1", "--count", "5", "--toy-params", "k=2,ell=8", "--trace", str(fh)])
    assert code == 0
    assert fh.exists()
    assert run(["verify", "--trace", str(fh)])[0] == 2

def test_8(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    fh = tmp_path / "real.jsonl"
    code, out = run(["digits", "--builtin", "false", "--count", "8", "--max-rounds", "1", "--trace", str(fh)])
    assert code == 0
    assert out.strip() == "0" * 8
    code, out = run(["verify", "--trace", str(fh), "--replay"])
    assert code == 0
    assert out.splitlines()[0] == "round 1 (i=1, p=1): pass"
    assert "replay: pass" in out

def test_9(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    code, out = run(["reduce", "--builtin", "false", "--count", "40"])
    assert code == 0
    assert out.split() == [str(x) for x in range(1, 41)]

def test_10(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    fh = tmp_path / "hex.txt"
    fh.write_text("10 3 15\n", encoding = "utf8")
    code, out = run(["analyze", "--input", str(fh), "--base", "16", "--stride", "1", "--ell", "1"])
    assert code == 0
    assert out.splitlines() == ["length,D,D_ell", "1,15/16,15/16", "2,7/16,7/16", "3,13/48,13/48"]

    fh.write_text("a 3 f\n", encoding = "utf8")
    assert run(["analyze", "--input", str(fh), "--base", "16"])[0] == 2

    code, out = run(["digits", "--control", "1", "--count", "8", "--base", "16", "--toy-params", "k=2,ell=8"])
    assert code == 0
    fh.write_text(out, encoding = "utf8")
    code, table = run(["analyze", "--input", str(fh), "--base", "16", "--stride", "1", "--ell", "1"])
    assert code == 0
    assert len(out.split()) == 8
    assert table.splitlines()[-1].startswith("8,")
