"""Spec files and the command-line entry point.

Exit codes: 0 for a completed run, 2 for a structured diagnostic (payload
on stdout), 1 for anything else (message on stderr).
"""

import io
import json
import sys
from importlib import resources

import pytest

import horobound.cli as cli_mod
from horobound.cli import RunConfig, emit_report, main, parse_spec, run_command
from horobound.errors import NoDominatorAtLevel, SchemaError, ValidationError
from horobound.examples import example

SPECS = resources.files("horobound") / "specs"


def spec_path(name):
    return str(SPECS / name)


def run_cli(argv):
    """Call main() in process; returns (exit code, stdout bytes, stderr text)."""
    out, err = io.BytesIO(), io.StringIO()

    class _Stdout:
        buffer = out

        def write(self, text):
            out.write(text.encode("utf-8"))

        def flush(self):
            pass

    saved = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = _Stdout(), err
    try:
        code = main(argv)
    finally:
        sys.stdout, sys.stderr = saved
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# parse_spec on the bundled specs

BUNDLED = {
    "cylinder_n3.spec": ("annihilator", {"m": "3", "r": "12"}),
    "cylinder_n30_diag.spec": (
        "bend",
        {"ell": "8", "m": "18", "r": "49", "scan_m": "2", "x": "(0,15)"},
    ),
    "cylinder_n4.spec": ("annihilator", {"m": "3", "r": "12"}),
    "cylinder_n4_ext.spec": ("polytope", {"r": "8"}),
    "cylinder_n5.spec": ("annihilator", {"m": "3", "r": "12"}),
    "cylinder_n6.spec": ("annihilator", {"m": "3", "r": "12"}),
    "fat_cylinder_n3.spec": ("annihilator", {"m": "2", "r": "10"}),
    "lamplighter.spec": ("ballsystem", {"n_max": "4"}),
    "z2_rot4.spec": ("boundary", {"m": "2", "r": "8"}),
    "z2_standard.spec": ("witness", {"k": "5", "m": "2", "r": "14"}),
    "z_line.spec": ("boundary", {"m": "3", "r": "10"}),
}


def test_bundled_spec_listing():
    names = sorted(p.name for p in SPECS.iterdir() if p.name.endswith(".spec"))
    assert names == sorted(BUNDLED)


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_parse_spec_bundled(name):
    group, gens, cfg = parse_spec(spec_path(name))
    command, params = BUNDLED[name]
    assert cfg.command == command
    assert dict(cfg.params) == params
    assert len(cfg.generators) == len(gens)
    if cfg.labels is not None:
        assert len(cfg.labels) == len(gens)


def test_parse_spec_z_line_details():
    group, gens, cfg = parse_spec(spec_path("z_line.spec"))
    assert group.describe()["family"] == "fg_abelian"
    assert cfg.generators == ("(1)", "(-1)")
    assert cfg.labels == ("a", "a^-1")
    assert cfg.witnesses == ()
    assert cfg.seed is None


def test_parse_spec_lamplighter_witnesses():
    group, gens, cfg = parse_spec(spec_path("lamplighter.spec"))
    assert cfg.witnesses == ("({1};0)", "({-1};0)")
    assert gens.verified


# ---------------------------------------------------------------------------
# rejected spec files

SCHEMA_CASES = [
    ("[generators]\nelements = (1) (-1)\n", r"missing \[group\] section"),
    ("[group]\nfamily = fg_abelian\nfree_rank = 1\n", r"missing \[generators\] section"),
    ("[group]\nfree_rank = 1\n\n[generators]\nelements = (1) (-1)\n", "'family' key"),
    (
        "[group]\nfamily = so3\n\n[generators]\nelements = (1) (-1)\n",
        "unknown family 'so3'",
    ),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\ncolor = red\n"
        "\n[generators]\nelements = (1) (-1)\n",
        "unknown key 'color'",
    ),
    ("[group]\nfamily = fg_abelian\n\n[generators]\nelements = (1) (-1)\n", "'free_rank'"),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = one\n"
        "\n[generators]\nelements = (1) (-1)\n",
        "expected an integer",
    ),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n"
        "\n[generators]\nelements = (1) (-1)\nlabels = a\n",
        "1 labels for 2 generators",
    ),
    ("[group]\nfamily = fg_abelian\nfree_rank = 1\n\n[generators]\nlabels = a\n", "'elements'"),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n"
        "\n[generators]\nelements = (1) (-1)\n\n[run]\ncommand = dance\n",
        r"\[run\] unknown command 'dance'",
    ),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n\n[generators]\nelements = x y\n",
        r"\[generators\] elements",
    ),
]


@pytest.mark.parametrize("text,match", SCHEMA_CASES)
def test_parse_spec_schema_errors(tmp_path, text, match):
    path = tmp_path / "bad.spec"
    path.write_text(text)
    with pytest.raises(SchemaError, match=match):
        parse_spec(str(path))


def test_parse_spec_missing_file(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        parse_spec(str(tmp_path / "nope.spec"))


VALIDATION_CASES = [
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n\n[generators]\nelements = (1)\n",
        r"not symmetric, \(1\)\^-1 = \(-1\) is missing",
    ),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n"
        "\n[generators]\nelements = (0) (1) (-1)\n",
        "identity is not a generator",
    ),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n\n[generators]\nelements =\n",
        "elements is empty",
    ),
    (
        "[group]\nfamily = fg_abelian\nfree_rank = -1\n"
        "\n[generators]\nelements = (1) (-1)\n",
        r"\[group\]",
    ),
    # symmetric but generates 2Z, caught by the reachability check
    (
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n\n[generators]\nelements = (2) (-2)\n",
        r"\[generators\]",
    ),
]


@pytest.mark.parametrize("text,match", VALIDATION_CASES)
def test_parse_spec_validation_errors(tmp_path, text, match):
    path = tmp_path / "bad.spec"
    path.write_text(text)
    with pytest.raises(ValidationError, match=match):
        parse_spec(str(path))


# ---------------------------------------------------------------------------
# RunConfig helpers


def _config(**params):
    _, _, cfg = parse_spec(spec_path("z_line.spec"))
    return cfg.with_params(**params)


def test_runconfig_param_lookup():
    cfg = _config()
    assert cfg.param("r") == "10"
    assert cfg.param("absent") is None
    assert cfg.int_param("m") == 3
    assert cfg.int_param("absent", 7) == 7


def test_runconfig_int_param_rejects_garbage():
    cfg = _config(window="soon")
    with pytest.raises(SchemaError, match="'window' must be an integer"):
        cfg.int_param("window")


def test_runconfig_require_int_missing():
    cfg = _config()
    with pytest.raises(SchemaError, match="needs parameter 'ell'"):
        cfg.require_int("ell")
    with pytest.raises(SchemaError, match="needs parameter 'x'"):
        cfg.require_str("x")


def test_runconfig_with_params_merges_sorted():
    cfg = _config(r=6, skipped=None)
    assert cfg.param("r") == "6"
    assert cfg.param("skipped") is None
    assert list(cfg.params) == sorted(cfg.params)


# ---------------------------------------------------------------------------
# run_command / emit_report


def test_run_command_rejects_unknown_command():
    _, _, cfg = parse_spec(spec_path("z_line.spec"))
    from dataclasses import replace

    with pytest.raises(SchemaError, match="unknown command"):
        run_command(replace(cfg, command="dance"))


def test_run_command_deterministic_bytes():
    _, _, cfg = parse_spec(spec_path("z_line.spec"))
    first = emit_report(run_command(cfg)[0])
    second = emit_report(run_command(cfg)[0])
    assert first == second


def test_run_command_report_envelope():
    _, _, cfg = parse_spec(spec_path("z_line.spec"))
    report, sides = run_command(cfg)
    assert report["command"] == "boundary"
    assert report["group"]["family"] == "fg_abelian"
    assert report["config"]["params"] == {"m": "3", "r": "10"}
    assert sides == {}


def test_emit_report_format():
    blob = emit_report({"b": 1, "a": 2})
    assert blob.endswith(b"\n")
    assert blob.index(b'"a"') < blob.index(b'"b"')
    with pytest.raises(ValueError, match="unknown report format"):
        emit_report({}, format="yaml")


# ---------------------------------------------------------------------------
# main(): exit code 0


def test_main_boundary_z_line():
    code, out, err = run_cli(["boundary", spec_path("z_line.spec")])
    assert code == 0 and err == ""
    report = json.loads(out)
    assert report["command"] == "boundary"
    assert report["level"] == {"m": 3, "r": 10, "window": 3}
    assert report["class_count"] == 2
    assert report["stable_class_count"] == 2
    assert report["ball_order"][:3] == ["(0)", "(1)", "(-1)"]


def test_main_annihilator_writes_side_files(tmp_path):
    code, out, err = run_cli(
        ["annihilator", spec_path("cylinder_n4.spec"), "--out", str(tmp_path)]
    )
    assert code == 0
    report = json.loads(out)
    assert report["candidates"] == ["(0,0)", "(0,3)", "(0,1)", "(0,2)"]
    assert sorted(p.name for p in tmp_path.iterdir()) == ["candidates.csv", "report.json"]
    # the on-disk report is byte for byte what went to stdout
    assert (tmp_path / "report.json").read_bytes() == out
    lines = (tmp_path / "candidates.csv").read_text().splitlines()
    assert lines[0] == "element,norm,rho,witness_radius,candidate"
    assert lines[1] == '"(0,0)",0,-1,0,1'


BALL_SPEC = """\
[group]
family = fg_abelian
free_rank = 1

[generators]
elements = (1) (-1)

[run]
command = ball
r = 6
n = 3
"""


def test_main_ball_with_prefix_tree(tmp_path):
    spec = tmp_path / "zball.spec"
    spec.write_text(BALL_SPEC)
    code, out, err = run_cli(["ball", str(spec), "--out", str(tmp_path)])
    assert code == 0
    report = json.loads(out)
    assert report["radius"] == 6
    assert report["size"] == 13
    assert report["layer_sizes"] == [1, 2, 2, 2, 2, 2, 2]
    assert report["prefix_tree"] == {"count": 2, "depth": 3, "min_horizon": 6}
    csv = (tmp_path / "ball.csv").read_text().splitlines()
    assert csv[0] == "element,distance,parent"
    assert csv[1] == "(0),0,"
    assert csv[2] == "(1),1,s0"  # no labels in the spec, so generator 0 is s0
    dot = (tmp_path / "prefixes.dot").read_text()
    assert dot.startswith("digraph prefixes {")
    assert 'label="(1) h=6"' in dot


def test_main_subcommand_overrides_run_section():
    # z_line.spec says boundary; the subcommand wins
    code, out, _ = run_cli(["ball", spec_path("z_line.spec")])
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "ball"
    assert report["radius"] == 10
    assert report["size"] == 21


def test_main_flag_overrides_run_value():
    code, out, _ = run_cli(["boundary", spec_path("z_line.spec"), "--r", "6"])
    assert code == 0
    assert json.loads(out)["level"] == {"m": 3, "r": 6, "window": 3}


# ---------------------------------------------------------------------------
# main(): exit codes 1 and 2


def test_main_missing_spec_exits_1(tmp_path):
    code, out, err = run_cli(["boundary", str(tmp_path / "nope.spec")])
    assert code == 1
    assert out == b""
    assert "cannot read" in err


def test_main_validation_failure_exits_1(tmp_path):
    spec = tmp_path / "bad.spec"
    spec.write_text(
        "[group]\nfamily = fg_abelian\nfree_rank = 1\n\n[generators]\nelements = (1)\n"
    )
    code, out, err = run_cli(["boundary", str(spec)])
    assert code == 1
    assert "ValidationError" in err and "not symmetric" in err


def test_main_diagnostic_exits_2(monkeypatch):
    def explode(group, gens, cfg):
        raise NoDominatorAtLevel("nothing dominates", level=7)

    monkeypatch.setitem(cli_mod._HANDLERS, "ball", explode)
    code, out, err = run_cli(["ball", spec_path("z_line.spec")])
    assert code == 2
    assert json.loads(out) == {
        "diagnostic": "NoDominatorAtLevel",
        "message": "nothing dominates",
        "detail": {"level": 7},
    }


# ---------------------------------------------------------------------------
# bundled examples


def test_example_lookup():
    group, gens = example("z_line")
    assert group.describe()["family"] == "fg_abelian"
    assert len(gens) == 2


def test_example_unknown_name():
    with pytest.raises(ValueError, match="unknown example"):
        example("noone")
