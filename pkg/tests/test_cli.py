"""End-to-end command-line coverage through main(argv), one process, no shell."""

import json
import math

import pytest

from subgeneral.cli import main

CONCURRENT = "[[1,0,0],[0,1,0],[1,1,0]]"
WORKED_FORMS = "[[1,0,0],[0,1,0],[1,-1,0]]"
LINE_X = '{"ambient_dim": 2, "forms": [["0", "0", "1"]]}'


def run_json(capsys, argv, expect=0):
    code = main(argv)
    captured = capsys.readouterr()
    assert code == expect, captured.err
    return json.loads(captured.out)


def violator_config(**overrides):
    cfg = {
        "x": {"ambient_dim": 1, "forms": []},
        "arrangements": {
            "inf": [
                {"type": "linear", "coeffs": ["1", "0"]},
                {"type": "linear", "coeffs": ["5", "7"]},
            ]
        },
        "l": 1,
        "epsilon": "1/10",
        "height_window": [0.5, 2.5],
        "sample_count": None,
        "seed": 0,
    }
    cfg.update(overrides)
    return cfg


# ---------------------------------------------------------------------------
# norm and height


def test_norm_single_place(capsys):
    data = run_json(capsys, ["norm", "12", "--place", "p=2"])
    assert data == {
        "exact": [2, 2],
        "place": "p=2",
        "value": pytest.approx(-2 * math.log(2), abs=1e-12),
        "x": "12",
    }
    bare = run_json(capsys, ["norm", "12", "--place", "2"])
    assert bare["place"] == "p=2"
    arch = run_json(capsys, ["norm", "-3/8", "--place", "inf"])
    assert arch["exact"] is None
    assert arch["value"] == pytest.approx(math.log(3) - math.log(8), abs=1e-12)


def test_norm_ledger(capsys):
    data = run_json(capsys, ["norm", "-35/4", "--ledger"])
    assert data["x"] == "-35/4"
    assert data["finite"] == [[2, -2], [5, 1], [7, 1]]
    assert data["residual_exact_zero"] is True
    assert data["arch_log"] == pytest.approx(math.log(35) - math.log(4), abs=1e-12)


def test_norm_usage_and_domain_errors(capsys):
    assert main(["norm", "12"]) == 64
    assert "norm needs --place" in capsys.readouterr().err
    assert main(["norm", "0", "--ledger"]) == 65
    assert main(["norm", "0", "--place", "inf"]) == 65
    assert main(["norm", "12", "--place", "p=6"]) == 65
    capsys.readouterr()


def test_height(capsys):
    data = run_json(capsys, ["height", "[4,6,10]"])
    assert data == {
        "height": pytest.approx(math.log(5), abs=1e-12),
        "height_exact": "5",
        "point": "[2:3:5]",
    }
    scaled = run_json(capsys, ["height", "[2:3:5]", "--degree", "2"])
    assert scaled["degree"] == "2"
    assert scaled["height_scaled"] == pytest.approx(2 * math.log(5), abs=1e-12)


def test_height_errors(capsys):
    assert main(["height", "[0,0]"]) == 65
    assert main(["height", "[2:3]", "--degree", "0"]) == 65
    capsys.readouterr()


# ---------------------------------------------------------------------------
# weil


def test_weil_single(capsys):
    data = run_json(
        capsys, ["weil", "--point", "[1:4]", "--place", "inf", "--linear", "[1,0]"]
    )
    assert data["value"] == pytest.approx(math.log(4), abs=1e-12)
    assert data["exact"] is None
    assert data["subject"] == "x0"
    assert data["point"] == "[1:4]"
    finite = run_json(
        capsys, ["weil", "--point", "[1:4]", "--place", "p=2", "--linear", "[0,1]"]
    )
    assert finite["exact"] == [2, 2]


def test_weil_target_json(capsys):
    target = json.dumps(
        {"type": "form", "dim": 1, "degree": 2, "terms": [[[2, 0], "1"]]}
    )
    data = run_json(
        capsys, ["weil", "--point", "[3:1]", "--place", "p=3", "--target", target]
    )
    assert data["exact"] == [3, 2]


def test_weil_manifest_csv(capsys, tmp_path):
    manifest = {
        "points": [["1", "4"], ["0", "1"]],
        "targets": [{"type": "linear", "coeffs": ["1", "0"]}],
        "places": ["inf", "2"],
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest))
    code = main(["weil", "--manifest", "@%s" % path, "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "point,target,place,value,exact,note"
    assert len(lines) == 5
    assert lines[1].startswith('[1:4],"x0",inf,')
    assert lines[3] == '[0:1],"x0",inf,,support,'


def test_weil_usage_errors(capsys):
    assert main(["weil", "--point", "[1:2]", "--place", "inf"]) == 64
    assert main(["weil", "--manifest", "{oops"]) == 64
    capsys.readouterr()


def test_weil_support_is_domain_error(capsys):
    code = main(["weil", "--point", "[0:1]", "--place", "inf", "--linear", "[1,0]"])
    assert code == 65
    assert "support" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# position


def test_position_check_negative_verdict_is_data(capsys):
    data = run_json(capsys, ["position", "check", "--forms", CONCURRENT, "--l", "2"])
    assert data["verdict"] is False
    assert data["level"] == 2 and data["q"] == 3
    assert data["complete"] is True
    assert data["witnesses"][0] == {"subset": [1, 2, 3], "dim": 0, "allowed": -1}


def test_position_check_verdict_only(capsys):
    data = run_json(
        capsys,
        ["position", "check", "--forms", CONCURRENT, "--l", "2", "--verdict-only"],
    )
    assert data["verdict"] is False
    assert data["complete"] is False
    assert len(data["witnesses"]) == 1


def test_position_check_on_subvariety(capsys):
    data = run_json(
        capsys,
        ["position", "check", "--forms", WORKED_FORMS, "--l", "2", "--x", LINE_X],
    )
    assert data["verdict"] is True
    assert data["witnesses"] == []


def test_position_check_level_below_dim(capsys):
    assert main(["position", "check", "--forms", CONCURRENT, "--l", "0"]) == 65
    capsys.readouterr()


# ---------------------------------------------------------------------------
# quang, seshadri, chain, delta


def test_quang_combine_worked_example(capsys):
    data = run_json(
        capsys,
        ["quang", "combine", "--forms", WORKED_FORMS, "--x", LINE_X,
         "--places", "inf,p=2"],
    )
    assert data["outputs"] == [["1", "0", "0"], ["0", "1", "0"]]
    assert data["matrix"] == [["1", "0", "0"], ["0", "1", "0"]]
    assert data["constants"] == {"inf": "1", "p=2": "1"}
    assert data["position"]["verdict"] is True


def test_quang_combine_rejects_bad_position(capsys):
    assert main(["quang", "combine", "--forms", CONCURRENT]) == 65
    assert "subgeneral" in capsys.readouterr().err


def test_seshadri(capsys):
    cubic = json.dumps(
        {
            "type": "form",
            "dim": 2,
            "degree": 3,
            "terms": [[[3, 0, 0], "1"], [[0, 3, 0], "1"], [[0, 0, 3], "1"]],
        }
    )
    data = run_json(capsys, ["seshadri", "--target", cubic])
    assert data["value"] == "1/3"
    assert data["class"] == "hypersurface(3)"
    point = json.dumps(
        {
            "type": "subscheme",
            "label": "",
            "components": [
                {"type": "linear", "coeffs": ["1", "0", "0"]},
                {"type": "linear", "coeffs": ["0", "1", "0"]},
            ],
        }
    )
    data = run_json(capsys, ["seshadri", "--target", point])
    assert data["value"] == "1"


def test_seshadri_unsupported(capsys):
    dependent = json.dumps(
        {
            "type": "subscheme",
            "components": [
                {"type": "linear", "coeffs": ["1", "1", "0"]},
                {"type": "linear", "coeffs": ["2", "2", "0"]},
            ],
        }
    )
    assert main(["seshadri", "--target", dependent]) == 65
    capsys.readouterr()


def test_chain_check_round_trip(capsys, tmp_path):
    cert_path = tmp_path / "cert.json"
    code = main(
        ["quang", "combine", "--forms", WORKED_FORMS, "--x", LINE_X,
         "--out", str(cert_path)]
    )
    assert code == 0
    capsys.readouterr()
    data = run_json(
        capsys,
        ["chain", "check", "--cert", "@%s" % cert_path, "--point", "[1:2:0]",
         "--place", "inf"],
    )
    assert data["passed"] is True
    assert data["perm"] == [1, 3, 2]
    assert data["lhs"] == pytest.approx(math.log(4), abs=1e-12)
    assert data["rhs"] == pytest.approx(math.log(48), abs=1e-12)
    assert data["chain_c"] == "1"

    assert (
        main(
            ["chain", "check", "--cert", "@%s" % cert_path, "--point", "[1:1:0]",
             "--place", "inf"]
        )
        == 65
    )
    capsys.readouterr()


def test_delta(capsys):
    data = run_json(capsys, ["delta", "--l", "2", "--n", "2", "--epsilon", "1"])
    assert data == {"delta": "1/8", "epsilon": "1", "l": 2, "n": 2}
    assert main(["delta", "--l", "1", "--n", "2", "--epsilon", "1"]) == 65
    assert main(["delta", "--l", "1", "--n", "1", "--epsilon", "0"]) == 65
    assert (
        main(["delta", "--l", "1", "--n", "1", "--epsilon", "1/1000000000000000"])
        == 65
    )
    capsys.readouterr()


# ---------------------------------------------------------------------------
# experiments


def test_experiment_run_and_determinism(capsys, tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(violator_config()))
    first = main(["experiment", "run", "--config", "@%s" % path])
    out1 = capsys.readouterr().out
    assert first == 0
    second = main(["experiment", "run", "--config", "@%s" % path])
    out2 = capsys.readouterr().out
    assert out1 == out2
    data = json.loads(out1)
    assert data["kind"] == "main"
    assert data["bound"] == "21/10"
    assert data["violators"] == ["[2:-1]", "[3:-2]", "[4:-3]"]
    assert len(data["candidates"]) == 3
    assert data["unassigned"] == []


def test_experiment_csv_and_flags(capsys, tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(violator_config()))
    assert main(["experiment", "run", "--config", "@%s" % path, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "point,height,weighted_sum,ratio,violator"
    assert len(lines) > 1

    assert main(["experiment", "run", "--config", "@%s" % path, "--no-records"]) == 0
    slim = json.loads(capsys.readouterr().out)
    assert "records" not in slim

    assert main(["experiment", "run", "--config", "@%s" % path, "--seed", "99"]) == 0
    seeded = json.loads(capsys.readouterr().out)
    assert seeded["config"]["seed"] == 99


def test_experiment_baseline(capsys, tmp_path):
    cfg = violator_config(
        arrangements={
            "inf": [
                {"type": "linear", "coeffs": ["1", "0"]},
                {"type": "linear", "coeffs": ["0", "1"]},
            ],
            "p=2": [
                {"type": "linear", "coeffs": ["1", "0"]},
                {"type": "linear", "coeffs": ["0", "1"]},
            ],
        }
    )
    path = tmp_path / "baseline.json"
    path.write_text(json.dumps(cfg))
    data = run_json(capsys, ["experiment", "baseline", "--config", "@%s" % path])
    assert data["kind"] == "baseline"
    assert data["violators"] == []


def test_experiment_bare_list_targets(capsys):
    # bare coefficient lists are linear-form shorthand in configs
    cfg = violator_config(arrangements={"inf": [["1", "0"], ["5", "7"]]})
    data = run_json(capsys, ["experiment", "run", "--config", json.dumps(cfg)])
    assert data["config"]["arrangements"]["inf"] == [
        {"type": "linear", "coeffs": ["1", "0"]},
        {"type": "linear", "coeffs": ["5", "7"]},
    ]


def test_experiment_exit_codes(capsys, tmp_path):
    rejected = violator_config(
        x={"ambient_dim": 2, "forms": []},
        arrangements={
            "inf": [
                {"type": "linear", "coeffs": ["1", "0", "0"]},
                {"type": "linear", "coeffs": ["0", "1", "0"]},
                {"type": "linear", "coeffs": ["1", "1", "0"]},
            ]
        },
        l=2,
    )
    path = tmp_path / "rejected.json"
    path.write_text(json.dumps(rejected))
    assert main(["experiment", "run", "--config", "@%s" % path]) == 2
    assert "config rejected" in capsys.readouterr().err

    partial = violator_config(height_window=[0.0, 0.69], sample_count=50)
    path2 = tmp_path / "partial.json"
    path2.write_text(json.dumps(partial))
    assert main(["experiment", "run", "--config", "@%s" % path2]) == 3
    captured = capsys.readouterr()
    assert "partial" in captured.err
    assert json.loads(captured.out)["partial"] is True

    bad = violator_config(epsilon="0")
    path3 = tmp_path / "bad.json"
    path3.write_text(json.dumps(bad))
    assert main(["experiment", "run", "--config", "@%s" % path3]) == 65
    capsys.readouterr()


def test_io_failures_exit_66(capsys, tmp_path):
    assert main(["experiment", "run", "--config", "@%s/missing.json" % tmp_path]) == 66
    assert main(["height", "[1:2]", "--out", "%s/no/dir/x.json" % tmp_path]) == 66
    capsys.readouterr()


def test_usage_failures_exit_64(capsys):
    assert main([]) == 64
    assert main(["frobnicate"]) == 64
    assert main(["position", "check", "--forms", "not json", "--l", "1"]) == 64
    assert main(["experiment", "run", "--config", "{broken"]) == 64
    capsys.readouterr()


def test_out_file_matches_stdout(capsys, tmp_path):
    main(["delta", "--l", "3", "--n", "2", "--epsilon", "1"])
    stdout_text = capsys.readouterr().out
    path = tmp_path / "delta.json"
    assert main(["delta", "--l", "3", "--n", "2", "--epsilon", "1",
                 "--out", str(path)]) == 0
    capsys.readouterr()
    assert path.read_text() == stdout_text
    assert json.loads(stdout_text)["delta"] == "1/16"
