import io
import json
import subprocess
import sys
from importlib import resources

import pytest

from catsym.cli import main
from catsym.fileformat import parse_category_file


def data(name):
    return str(resources.files("catsym").joinpath("data", f"{name}.cat"))


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin.encode("utf-8"))))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fields(text):
    out = {}
    for line in text.splitlines():
        k, _, v = line.partition(": ")
        out.setdefault(k, v)
    return out


# -- check ---------------------------------------------------------------------


@pytest.mark.parametrize("name", ["terminal", "group2", "indiscrete2"])
def test_check_all_pass(capsys, name):
    code, out, _ = run(capsys, "check", data(name))
    f = fields(out)
    assert code == 0
    for layer in ("psc", "cocc", "sec", "imc"):
        assert f[layer] == "verdict=PASS"
    assert f["monotone"] == "yes"
    assert f["input"].startswith("sha256:")


def test_check_interval(capsys):
    # the domain map is a PSC structure on 2, so the psc layer passes
    code, out, _ = run(capsys, "check", data("interval2"), "--layer", "psc")
    assert code == 0
    assert fields(out)["psc"] == "verdict=PASS"
    code, out, _ = run(capsys, "check", data("interval2"), "--layer", "imc")
    f = fields(out)
    assert code == 1
    assert f["imc"].startswith("verdict=FAIL law=")


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", data("interval2"), "--json")
    doc = json.loads(out)
    assert code == 1
    assert doc["command"] == "check"
    assert doc["imc"]["verdict"] == "FAIL"
    assert doc["imc"]["witness"]
    assert doc["requested"] == ["psc", "cocc", "sec", "imc"]


def test_check_deterministic(capsys):
    first = run(capsys, "check", data("group2"))
    second = run(capsys, "check", data("group2"))
    assert first == second


def test_check_timings_only_on_request(capsys):
    _, out, _ = run(capsys, "check", data("terminal"))
    assert "seconds" not in out
    _, out, _ = run(capsys, "check", data("terminal"), "--timings")
    assert "seconds: " in out


def test_check_budget_exit(capsys):
    code, out, _ = run(capsys, "check", data("indiscrete2"), "--budget", "1")
    f = fields(out)
    assert code == 3
    assert f["psc"].startswith("verdict=BUDGET")
    assert f["imc"] == "verdict=ABSENT"


def test_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "missing.cat"))
    assert code == 2
    bad = tmp_path / "bad.cat"
    bad.write_text("objects: a\ncompose: g . f = h\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "unknown name" in err
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == 2


# -- level ---------------------------------------------------------------------


@pytest.mark.parametrize("name, n, objects, arrows", [
    ("terminal", 4, 1, 1),
    ("interval2", 1, 2, 3),
    ("interval2", 2, 3, 6),
    ("interval2", 3, 6, 20),
    ("group2", 2, 2, 8),
])
def test_level_counts(capsys, name, n, objects, arrows):
    code, out, _ = run(capsys, "level", data(name), "--n", str(n))
    assert code == 0
    C = parse_category_file(out).category
    assert (len(C.objects), len(C.arrows)) == (objects, arrows)
    assert f"# {objects} objects, {arrows} arrows" in out


def test_level_back_map_comments(capsys):
    _, out, _ = run(capsys, "level", data("interval2"), "--n", "2")
    cf = parse_category_file(out)
    C = cf.category
    assert [C.obj_name(a) for a in C.objects] == ["x0", "x1", "x2"]
    assert any(c.startswith("x0 = ") for c in cf.comments)
    assert any(c.startswith("s") for c in cf.comments)


def test_level_caps(capsys):
    code, _, err = run(capsys, "level", data("interval2"), "--n", "4", "--max-arrows", "50")
    assert code == 3
    assert "cap" in err


def test_level_caps_from_env(capsys, monkeypatch):
    monkeypatch.setenv("CATSYM_MAX_ARROWS", "10")
    code, _, _ = run(capsys, "level", data("interval2"), "--n", "3")
    assert code == 3


def test_level_feeds_check(capsys, monkeypatch):
    _, out, _ = run(capsys, "level", data("group2"), "--n", "2")
    code, checked, _ = run(capsys, "check", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    assert fields(checked)["psc"] == "verdict=PASS"


def test_level_then_search_psc(capsys, monkeypatch):
    _, out, _ = run(capsys, "level", data("terminal"), "--n", "2")
    code, found, _ = run(capsys, "search-psc", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    f = fields(found)
    assert f["result"] == "FOUND" and f["check_psc"] == "PASS"
    assert "psc.iso: x0 = id_x0" in found


# -- apply-e and orbit ---------------------------------------------------------


def test_apply_e_group2(capsys):
    code, out, _ = run(capsys, "apply-e", data("group2"), "--target", "g", "--n", "5")
    f = fields(out)
    assert code == 0
    assert (f["result"], f["kind"], f["power"]) == ("g", "arrow", "5")


def test_apply_e_interval(capsys):
    code, out, _ = run(capsys, "apply-e", data("interval2"), "--target", "f")
    assert code == 0
    assert fields(out)["result"] == "f"


def test_apply_e_unknown_target(capsys):
    code, _, err = run(capsys, "apply-e", data("group2"), "--target", "h")
    assert code == 2 and "unknown" in err


def test_apply_e_without_psc(capsys, tmp_path):
    # the given structure fails representability, so no search is attempted
    p = tmp_path / "broken.cat"
    p.write_text("objects: a b\narrow: f: a -> b\npsc.btop: id_a -> b\npsc.btop: id_b -> b\n"
                 "psc.btop: f -> b\npsc.star: b * b = b\npsc.iso: a = id_a\npsc.iso: b = id_b\n")
    code, _, err = run(capsys, "apply-e", str(p), "--target", "f")
    assert code == 1
    assert "PSC" in err


def test_orbit_terminal(capsys):
    code, out, _ = run(capsys, "orbit", data("terminal"), "--target", "•", "--depth", "3")
    f = fields(out)
    assert code == 0
    assert f["orbit"] == "• • • •"
    assert f["witnesses"] == "id_• id_• id_•"
    assert f["cycle"] == "start=0 period=1"


def test_orbit_arrow_json(capsys):
    code, out, _ = run(capsys, "orbit", data("group2"), "--target", "g", "--depth", "2", "--json")
    doc = json.loads(out)
    assert doc["orbit"] == ["g", "g", "g"]
    assert doc["witnesses"] == ["(e;e)", "(e;e)"]


def test_negative_depth_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["orbit", data("terminal"), "--target", "•", "--depth", "-1"])
    assert exc.value.code == 2


# -- search-psc and finset-demo ------------------------------------------------


def test_search_psc_lines(capsys):
    code, out, _ = run(capsys, "search-psc", data("interval2"))
    assert code == 0
    assert out.splitlines()[-8:] == [
        "psc.btop: f -> a", "psc.btop: id_a -> a", "psc.btop: id_b -> b",
        "psc.star: a * a = a", "psc.star: b * a = a", "psc.star: b * b = b",
        "psc.iso: a = id_a", "psc.iso: b = id_b",
    ]


def test_finset_demo(capsys):
    code, out, _ = run(capsys, "finset-demo", "--ground", "2")
    f = fields(out)
    assert code == 0
    assert (f["objects"], f["arrows"], f["mode"]) == ("4", "18", "exhaustive")
    assert f["law.imc-fails"] == "PASS"
    assert f["verdict"] == "PASS"


def test_finset_demo_sampled_structures(capsys):
    code, out, _ = run(capsys, "finset-demo", "--ground", "3", "--samples", "100", "--structures")
    assert code == 0
    assert fields(out)["mode"] == "sampled(100)"
    assert "psc.iso: {0,1} = f{<0,0>,<1,1>}>{0,1}[0,1]" in out


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "catsym.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.startswith("catsym ")
