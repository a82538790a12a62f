import subprocess
import sys

import pytest

from toricfunctor import cli
from toricfunctor.pointfunctor import QuotientCensus

from conftest import FANS, MAPS


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_fan_check_p2(capsys):
    code, out, _ = run(capsys, "fan", "check", FANS / "p2.fan")
    assert code == 0
    assert "smooth: yes" in out and "valid: yes" in out and "rays_span: yes" in out


def test_fan_check_nonsmooth(capsys):
    code, out, _ = run(capsys, "fan", "check", FANS / "nonsmooth.fan")
    assert code == 3 and "smooth: no" in out


@pytest.mark.parametrize("name", ["badref", "overlapping"])
def test_fan_check_invalid(capsys, name):
    code, out, _ = run(capsys, "fan", "check", FANS / f"{name}.fan")
    assert code == 2 and "valid: no" in out


def test_fan_check_trust(capsys):
    code, out, _ = run(capsys, "fan", "check", "--trust-fan", FANS / "overlapping.fan")
    assert code == 0 and "intersections: skipped" in out


def test_fan_check_io_and_parse_errors(capsys, tmp_path):
    code, _, err = run(capsys, "fan", "check", tmp_path / "missing.fan")
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.fan"
    bad.write_text("ray x 1\ndim 1\n")
    code, _, err = run(capsys, "fan", "check", bad)
    assert code == 1 and "bad.fan:1" in err


def test_fan_pic(capsys):
    code, out, _ = run(capsys, "fan", "pic", FANS / "p2.fan")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "pic_rank 1"
    assert [l for l in lines if l.startswith("class")] == ["class x0 1", "class x1 1", "class x2 1"]
    assert [l for l in lines if l.startswith("irrelevant")] == ["irrelevant x_x0", "irrelevant x_x1", "irrelevant x_x2"]
    code, out, _ = run(capsys, "fan", "pic", FANS / "f1.fan")
    lines = out.splitlines()
    assert lines[0] == "pic_rank 2"
    assert sum(l.startswith("class") for l in lines) == 4
    assert sum(l.startswith("irrelevant") for l in lines) == 4
    code, out, _ = run(capsys, "fan", "pic", FANS / "a2.fan")
    assert "pic_rank 0" in out and "irrelevant 1" in out
    assert run(capsys, "fan", "pic", FANS / "nonsmooth.fan")[0] == 3
    assert run(capsys, "fan", "pic", FANS / "badref.fan")[0] == 2


@pytest.mark.parametrize("name, code, needle", [
    ("conic", 0, "overall: valid"),
    ("common_factor", 4, "condition_b: fail"),
    ("p1_to_f1", 0, "overall: valid"),
    ("f1_self", 0, "certificate: rabinowitsch"),
    ("f1_self_bad", 4, "failed: condition_a"),
    ("conic_gf5", 0, "overall: valid"),
    ("point_to_line_times_torus", 0, "torus_value 5"),
    ("p1_to_torus", 0, "torus_rank 2"),
    ("p1_to_torus_nonconstant", 4, "torus: fail"),
])
def test_map_check(capsys, name, code, needle):
    got, out, _ = run(capsys, "map", "check", MAPS / f"{name}.map")
    assert got == code
    assert needle in out.splitlines()


def test_map_check_undecided(capsys):
    code, out, _ = run(capsys, "map", "check", "--deadline", "0", MAPS / "conic.map")
    assert code == 5 and "condition_b: undecided" in out


def test_map_check_input_errors(capsys, tmp_path):
    def write(text):
        p = tmp_path / "m.map"
        p.write_text(text)
        return p

    target = f"target fan {FANS / 'p2.fan'}\n"
    cases = [
        "source P 1\n" + target + "P x0 = t0\nP x1 = t1\n",                      # missing section
        "source P 1\n" + target + "P x0 = t0\nP x1 = t1\nP x2 = t2\n",           # unknown variable
        "source P 1\n" + target + "P x0 = t0 + 1\nP x1 = t1\nP x2 = t0\n",       # not homogeneous
        "source P 1\n" + target + "field 4\nP x0 = t0\nP x1 = t1\nP x2 = t0\n",  # not a prime
        "source P 1\nP x0 = t0\n",                                              # no target
        "source fan x.fan\n" + target,                                          # fan source without var
        f"source P 0\ntarget fan {FANS / 'line_times_torus.fan'}\nP x = 3\n",   # non-spanning, no torus
        "source P 1\n" + target + "P x0 = t0\nP x1 = t1\nP x2 = t0\ntorus 3\n",  # torus on spanning
        "bogus line\n",
    ]
    for text in cases:
        code, _, err = run(capsys, "map", "check", write(text))
        assert code == 1, (text, err)
    code, _, _ = run(capsys, "map", "check", tmp_path / "absent.map")
    assert code == 1


def test_map_check_bad_target_fan(capsys, tmp_path):
    p = tmp_path / "m.map"
    p.write_text(f"source P 1\ntarget fan {FANS / 'nonsmooth.fan'}\nP a = t0\nP b = t1\n")
    assert run(capsys, "map", "check", p)[0] == 3
    p.write_text(f"source P 1\ntarget fan {FANS / 'badref.fan'}\nP r1 = t0\nP r2 = t1\n")
    assert run(capsys, "map", "check", p)[0] == 2


@pytest.mark.parametrize("a, b, code, lambdas", [
    ("conic", "conic_doubled", 0, ["lambda x0 2", "lambda x1 2", "lambda x2 2"]),
    ("line", "line_scaled", 4, []),
    ("conic", "conic", 0, ["lambda x0 1", "lambda x1 1", "lambda x2 1"]),
    ("p1xp1_diagonal", "p1xp1_diagonal_scaled", 0, ["lambda u1 5", "lambda v1 1", "lambda u0 5", "lambda v0 1"]),
    ("conic", "common_factor", 4, []),
])
def test_map_equiv(capsys, a, b, code, lambdas):
    got, out, _ = run(capsys, "map", "equiv", MAPS / f"{a}.map", MAPS / f"{b}.map")
    assert got == code
    assert [l for l in out.splitlines() if l.startswith("lambda")] == lambdas
    assert ("equivalent: yes" in out) == (code == 0)


def test_map_equiv_errors(capsys):
    assert run(capsys, "map", "equiv", MAPS / "conic.map", MAPS / "line.map")[0] == 1
    code, out, _ = run(capsys, "map", "equiv", "--deadline", "0", MAPS / "conic.map", MAPS / "conic.map")
    assert code == 5 and "equivalent: undecided" in out


@pytest.mark.parametrize("name, q, count", [("p2", 3, 13), ("f1", 3, 16), ("p1xp1", 5, 36), ("torus2", 3, 4)])
def test_points_count(capsys, name, q, count):
    code, out, _ = run(capsys, "points", "count", FANS / f"{name}.fan", "--q", q)
    assert code == 0
    assert f"quotient_count {count}" in out and f"orbit_cone_count {count}" in out


def test_points_count_cap(capsys):
    assert run(capsys, "points", "count", FANS / "p3.fan", "--q", 5, "--cap", 100)[0] == 7


def test_points_count_not_prime(capsys):
    assert run(capsys, "points", "count", FANS / "p2.fan", "--q", 4)[0] == 1


def test_points_count_mismatch(capsys, monkeypatch):
    def broken(fan, grading, q, cap):
        return QuotientCensus(10, 1, 10, 10, 1, 0, True)
    monkeypatch.setattr(cli, "quotient_census", broken)
    code, out, _ = run(capsys, "points", "count", FANS / "p2.fan", "--q", 3)
    assert code == 6 and "match: no" in out


def test_points_count_nonsmooth_and_invalid(capsys):
    assert run(capsys, "points", "count", FANS / "nonsmooth.fan", "--q", 3)[0] == 3
    assert run(capsys, "points", "count", FANS / "overlapping.fan", "--q", 3)[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "fan")[0] == 1
    assert run(capsys, "points", "count", FANS / "p2.fan")[0] == 1
    assert run(capsys, "--help")[0] == 0


def test_output_is_deterministic(capsys):
    first = run(capsys, "map", "check", MAPS / "p1_to_f1.map")
    second = run(capsys, "map", "check", MAPS / "p1_to_f1.map")
    assert first == second
    first = run(capsys, "points", "count", FANS / "f2.fan", "--q", 3)
    assert first == run(capsys, "points", "count", FANS / "f2.fan", "--q", 3)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toricfunctor", "fan", "pic", str(FANS / "p1.fan")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "pic_rank 1"
