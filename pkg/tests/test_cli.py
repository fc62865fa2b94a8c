import json
import subprocess
import sys

import pytest

from formalcr import corpus
from formalcr.cli import build_parser, main, resolve_config


def run_cli(*argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_manifold_report(capsys):
    code, out, _ = run_cli("manifold", corpus.path("lewy.mfd"), "--degree", 8, capsys=capsys)
    assert code == 0
    r = json.loads(out)
    assert r["minimality"]["verdict"] == "Minimal(2)"
    assert r["finite_nondegeneracy"]["verdict"] == "Order(1)"
    assert r["holomorphic_nondegeneracy"]["levi_type"] == 1
    assert r["degeneracy"]["d"] == 0
    assert r["manifold"]["cap"] == 8
    for section in ("minimality", "finite_nondegeneracy", "holomorphic_nondegeneracy", "degeneracy", "certificate"):
        assert "cap" in r[section]


def test_leviflat_report(capsys):
    code, out, _ = run_cli("manifold", corpus.path("leviflat.mfd"), capsys=capsys)
    r = json.loads(out)
    assert code == 0
    assert r["minimality"]["verdict"] == "NotMinimalAtCap"
    assert r["degeneracy"]["d"] == 1


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.mfd"
    bad.write_text('n: 2\ncodim: 1\ndefining:\n  - "(z2 - zb2)/(2*i) - z1*"\n')
    code, out, err = run_cli("manifold", bad, capsys=capsys)
    assert code == 2 and out == ""
    assert "line 4" in err


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, err = run_cli("manifold", tmp_path / "nope.mfd", capsys=capsys)
    assert code == 2 and "cannot read" in err


def test_insufficient_cap_exit_code(capsys):
    code, _, err = run_cli("map", corpus.path("lewy_identity.map"), "--jet-order", 12, capsys=capsys)
    assert code == 3 and "insufficient" in err


def test_map_reports(capsys):
    _, out, _ = run_cli("map", corpus.path("lewy_identity.map"), capsys=capsys)
    r = json.loads(out)
    assert r["cr_valid"] and r["char_variety"]["zero_dim_certified"]
    assert all(row["residual_max_sq"] == "0" for row in r["reflection"]["identities"])
    _, out, _ = run_cli("map", corpus.path("lewy_dilation.map"), capsys=capsys)
    r = json.loads(out)
    assert r["reflection"]["D"]["text"] == "2"
    code, out, _ = run_cli("map", corpus.path("lewy_perturbed.map"), capsys=capsys)
    r = json.loads(out)
    assert code == 0 and not r["cr_valid"]
    assert r["first_nonzero_residual"]["coefficient"] == ["0", "1/2"]


def test_map_overrides(capsys):
    code, out, _ = run_cli(
        "map", corpus.path("lewy_to_leviflat_constant.map"),
        "--target", corpus.path("lewy.mfd"), capsys=capsys,
    )
    r = json.loads(out)
    assert code == 0 and r["target"]["label"] == "lewy.mfd"


def test_map_dimension_mismatch(capsys):
    code, _, err = run_cli(
        "map", corpus.path("lewy_identity.map"), "--target", corpus.path("cylinder.mfd"), capsys=capsys,
    )
    assert code == 2


def test_text_format(capsys):
    code, out, _ = run_cli("manifold", corpus.path("quartic.mfd"), "--format", "text", capsys=capsys)
    assert code == 0
    assert 'verdict: "Minimal(2)"' in out


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "r.json"
    code, out, _ = run_cli("manifold", corpus.path("lewy.mfd"), "-o", dest, capsys=capsys)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["kind"] == "manifold"


def test_env_overrides_and_flag_precedence():
    parser = build_parser()
    args = parser.parse_args(["map", "x.map"])
    config, fmt = resolve_config(args, {"FORMALCR_DEGREE": "7", "FORMALCR_FORMAT": "text"})
    assert config.degree == 7 and config.jet == 5 and fmt == "text"
    args = parser.parse_args(["map", "x.map", "--degree", "9", "--format", "json"])
    config, fmt = resolve_config(args, {"FORMALCR_DEGREE": "7", "FORMALCR_FORMAT": "text"})
    assert config.degree == 9 and fmt == "json"


def test_bad_env_value():
    from formalcr.errors import InputError

    args = build_parser().parse_args(["manifold", "x.mfd"])
    with pytest.raises(InputError):
        resolve_config(args, {"FORMALCR_SEED": "abc"})


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "formalcr", "manifold", str(corpus.path("lewy.mfd")), "--degree", "6"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["manifold"]["cap"] == 6


@pytest.mark.parametrize("argv", [
    ["manifold", "cylinder.mfd"],
    ["map", "lewy_dilation.map"],
])
def test_byte_determinism(argv, capsys):
    path = corpus.path(argv[1])
    outs = []
    for _ in range(2):
        main([argv[0], str(path), "--seed", "3"])
        outs.append(capsys.readouterr().out.encode())
    assert outs[0] == outs[1]
