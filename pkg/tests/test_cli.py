import re
from pathlib import Path

import pytest

from anmirror import cli, fs_ring, paths
from anmirror.report import STATEMENTS

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_transform_ray(capsys):
    code, out, _ = run(capsys, "transform", str(DATA / "gamma0_n2.json"))
    assert code == 0
    assert "degrees [0,0]" in out


def test_transform_loop(capsys):
    code, out, _ = run(capsys, "transform", str(DATA / "loop_n2.json"))
    assert code == 0
    assert "winding-by-lift [1,-1]" in out
    assert "degrees [-1,1]" in out


def test_transform_bad_rational(capsys):
    code, _, err = run(capsys, "transform", str(DATA / "bad_rational.json"))
    assert code == 2
    assert "line 3, column 13" in err


def test_transform_broken_json(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text('{"n": 1,\n "a": ["1" "2"]}')
    code, _, err = run(capsys, "transform", str(f))
    assert code == 2 and "line 2" in err


def test_transform_inadmissible(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text('{"n": 1, "a": ["1", "2"], "vertices": [["-1/4", "0"], ["-3/2", "0"]]}')
    code, out, _ = run(capsys, "transform", str(f))
    assert code == 1 and "admissible no" in out


def test_transform_degenerate(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text('{"n": 1, "a": ["1", "2"], "vertices": '
                 '[["-1/2", "0"], ["1/2", "1/2"], ["3/2", "-1/2"], ["-5", "5"]]}')
    code, out, _ = run(capsys, "transform", str(f))
    assert code == 1
    assert "segment 1 passes through puncture" in out


def test_path_file_roundtrip():
    a = (1, 2, 3)
    path = paths.path_with_winding(a, (2, 0))
    n, a2, back = cli.parse_path_file(cli.path_to_json(2, a, path))
    assert n == 2 and back == path


def test_out_of_range_config(capsys):
    assert run(capsys, "verify", "toric", "--n", "9")[0] == 2
    assert run(capsys, "verify", "toric", "--wmax", "7")[0] == 2
    assert run(capsys, "verify", "fs", "--epsilon", "1/0")[0] == 2


def test_empty_plot_target(capsys):
    assert run(capsys, "plot", "")[0] == 2


def test_plot_base_n2(capsys):
    code, out, _ = run(capsys, "plot", "base", "--n", "2")
    assert code == 0
    assert out.count('class="wall"') == 3
    assert out.count('class="singular"') == 3


def test_plot_thimble_labels_match_generators(capsys):
    code, out, _ = run(capsys, "plot", "thimbles", "--n", "2", "--wmax", "1", "--block", "0,2")
    assert code == 0
    eps = fs_ring.default_epsilon(2, 1)
    labels = re.findall(r'data-gen="(\d+),(\d+),(\d+),(\d+)">([^<]*)<', out)
    want = []
    for k in range(2):
        for g in fs_ring.geometric_generators(0, 2, k, 2, eps):
            want.append((str(g.i0), str(g.i1), str(g.k), str(g.index), str(fs_ring.gen_monomial(g, 2))))
    assert sorted(labels) == sorted(want)


def test_plot_wrapping(capsys):
    code, out, _ = run(capsys, "plot", "wrapping", "--n", "1", "--wmax", "1")
    assert code == 0
    assert out.count('class="gen"') == 1 + 7


@pytest.mark.parametrize("target", ["base", "thimbles", "wrapping"])
def test_plots_are_deterministic(capsys, target):
    first = run(capsys, "plot", target, "--n", "2", "--wmax", "1")[1]
    assert run(capsys, "plot", target, "--n", "2", "--wmax", "1")[1] == first
    assert first.startswith("<?xml")


def test_verify_fs_n2(capsys):
    code, out, _ = run(capsys, "verify", "fs", "--n", "2", "--wmax", "3")
    assert code == 0
    assert "result=pass" in out


def test_verify_wrapped_flipped_sign(capsys):
    code, out, _ = run(capsys, "verify", "wrapped", "--sign", "-1")
    assert code == 0
    assert "sign -1" in out


def test_report_ids_are_known(capsys):
    _, out, _ = run(capsys, "verify", "toric", "--n", "2")
    ids = re.findall(r"record id=(\S+)", out)
    assert ids and all(i in STATEMENTS for i in ids)


def test_other_subcommands(tmp_path, capsys):
    assert run(capsys, "toric", "--n", "2", "--bundles", "0,2")[0] == 0
    assert run(capsys, "toric", "--n", "2", "--bundles", "0,5")[0] == 2
    code, out, _ = run(capsys, "fs-ring", "--n", "1", "--wmax", "1")
    assert code == 0 and "monomials=[x^2,x*y,y^2]" in out
    out_file = tmp_path / "w.txt"
    assert run(capsys, "wrapped-ring", "--n", "1", "--wmax", "1", "--out", str(out_file))[0] == 0
    assert "psi" in out_file.read_text()
