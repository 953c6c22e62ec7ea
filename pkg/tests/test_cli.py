"""CLI surface: subcommands, exit codes, determinism, caching."""

import json


from anomform.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def results_of(out):
    envelope = json.loads(out)
    assert envelope["version"] == 1
    assert "config" in envelope
    return envelope["results"]


def test_expand_eps2_leading_terms(capsys):
    code, out, _ = run(capsys, "expand", "delta-eps", "--which", "eps2", "--q-order", "8")
    assert code == 0
    series = results_of(out)[0]["series"]
    assert series[0] == {"exp2": 1, "coef": "1"}
    assert series[1] == {"exp2": 2, "coef": "8"}


def test_expand_theta_nullwert(capsys):
    code, out, _ = run(capsys, "expand", "theta-nullwert", "--i", "2", "--q-order", "6")
    assert code == 0
    series = results_of(out)[0]["series"]
    assert series[0] == {"exp2": 0, "coef": "1"}
    assert series[1] == {"exp2": 1, "coef": "-2"}


def test_expand_bare_theta1_exits_2(capsys):
    code, _, err = run(capsys, "expand", "theta-nullwert", "--i", "1")
    assert code == 2
    assert "q^(1/8)" in err


def test_expand_theta1_fourth_power(capsys):
    code, out, _ = run(
        capsys, "expand", "theta-nullwert", "--i", "1", "--fourth-power", "--q-order", "6"
    )
    assert code == 0
    series = results_of(out)[0]["series"]
    assert series[0] == {"exp2": 1, "coef": "16"}


def test_expand_theta_bundle_listing(capsys):
    code, out, _ = run(
        capsys, "expand", "theta-bundle", "--kind", "theta2", "--dim", "10", "--q-order", "5"
    )
    assert code == 0
    entry = results_of(out)[0]
    labels = [c["label"] for c in entry["coefficients"]]
    assert labels[0] == "B_0" and "B_1" in labels


def test_expand_theta_bundle_off_class_dim_needs_max_degree(capsys):
    code, _, err = run(capsys, "expand", "theta-bundle", "--kind", "theta2", "--dim", "4")
    assert code == 2 and "identity class" in err
    code, out, _ = run(
        capsys,
        "expand", "theta-bundle", "--kind", "theta2", "--dim", "4",
        "--max-degree", "8", "--q-order", "4",
    )
    assert code == 0
    assert results_of(out)[0]["coefficients"][0]["label"] == "B_0"


def test_decompose_b_case(capsys):
    code, out, _ = run(capsys, "decompose", "--m", "1", "--dim", "10")
    assert code == 0
    entries = results_of(out)
    assert entries[0]["label"] == "b_0" and entries[0]["rank"] == -1
    assert entries[1]["label"] == "b_1" and entries[1]["rank"] == 72


def test_decompose_z_case(capsys):
    code, out, _ = run(capsys, "decompose", "--m", "1", "--dim", "6")
    assert code == 0
    entries = results_of(out)
    assert entries[0]["label"] == "z_0" and entries[0]["rank"] == 1
    # z_1 = -T_C Z - 42 C at dim 6, so the virtual rank is -6 - 42
    assert entries[1]["label"] == "z_1" and entries[1]["rank"] == -48


def test_decompose_class_mismatch_exits_2(capsys):
    code, _, err = run(capsys, "decompose", "--m", "0", "--dim", "6")
    assert code == 2
    assert "not in a class" in err


def test_verify_agw_dim6(capsys):
    code, out, _ = run(capsys, "verify", "agw", "--dim", "6")
    assert code == 0
    entries = results_of(out)
    assert entries[0]["identity"] == "eq1.2" and entries[0]["status"] == "pass"


def test_verify_main_reports_lambda(capsys):
    code, out, _ = run(
        capsys, "verify", "main", "--m", "1", "--dim", "10", "--l-variant", "full"
    )
    assert code == 0
    entry = results_of(out)[0]
    assert entry["lambda"] == "512" and entry["paper_ratio"] == "1"


def test_verify_main_m_dim_mismatch_exits_2(capsys):
    code, _, err = run(capsys, "verify", "main", "--m", "0", "--dim", "10")
    assert code == 2
    assert "not in a class" in err


def test_verify_numeric_with_tau(capsys):
    code, out, _ = run(capsys, "verify", "numeric", "--law", "eq3.5", "--tau", "0.3+1.2i")
    assert code == 0
    entries = results_of(out)
    assert {e["law"] for e in entries} == {"eq3.5delta", "eq3.5eps"}
    assert all(r < 1e-9 for e in entries for r in e["residuals"])


def test_verify_routes_respects_l_variant(capsys):
    code, _, _ = run(
        capsys, "verify", "routes", "--dim", "2", "--kind", "P1", "--l-variant", "half"
    )
    assert code == 0
    code, _, _ = run(
        capsys, "verify", "routes", "--dim", "2", "--kind", "P1", "--l-variant", "full"
    )
    assert code == 1  # full-angle Theta_1 route diverges past the calibrated term


def test_verify_degenerate_needs_flag(capsys):
    code, _, _ = run(capsys, "verify", "main", "--dim", "1")
    assert code == 1
    code, _, _ = run(capsys, "verify", "main", "--dim", "1", "--allow-degenerate")
    assert code == 0


def test_verify_all_passes(capsys):
    code, out, _ = run(capsys, "verify", "all", "--allow-degenerate")
    assert code == 0
    entries = results_of(out)
    assert len(entries) > 30


def test_determinism_byte_identical(capsys):
    _, first, _ = run(capsys, "verify", "main", "--dim", "6")
    _, second, _ = run(capsys, "verify", "main", "--dim", "6")
    assert first == second


def test_jobs_fanout_matches_serial(capsys):
    # the envelope echoes the jobs setting; the results must be identical
    _, serial, _ = run(capsys, "verify", "decomposition", "--jobs", "1", "--allow-degenerate")
    _, parallel, _ = run(capsys, "verify", "decomposition", "--jobs", "4", "--allow-degenerate")
    assert json.loads(serial)["results"] == json.loads(parallel)["results"]


def test_cache_transparency(tmp_path, capsys):
    cache = tmp_path / "cache"
    args = ("decompose", "--m", "1", "--dim", "10", "--cache-dir", str(cache))
    _, cold, _ = run(capsys, *args)
    assert list(cache.glob("*.json")), "cache should be populated"
    _, warm, _ = run(capsys, *args)
    assert cold == warm
    # and identical to an uncached run
    _, plain, _ = run(capsys, "decompose", "--m", "1", "--dim", "10")
    json_cold = json.loads(cold)
    json_plain = json.loads(plain)
    assert json_cold["results"] == json_plain["results"]


def test_config_file_and_flag_override(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("q_order=6\nl_variant=half\n")
    _, out, _ = run(capsys, "expand", "delta-eps", "--which", "eps2", "--config", str(config))
    envelope = json.loads(out)
    assert envelope["config"]["q_order"] == 6
    assert envelope["config"]["l_variant"] == "half"
    _, out, _ = run(
        capsys,
        "expand", "delta-eps", "--which", "eps2",
        "--config", str(config), "--q-order", "4",
    )
    assert json.loads(out)["config"]["q_order"] == 4


def test_bad_config_key_exits_2(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("no_such_key=1\n")
    code, _, err = run(capsys, "expand", "delta-eps", "--which", "eps2", "--config", str(config))
    assert code == 2 and "unknown config key" in err


def test_report_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", "agw", "--out", str(out_path))
    assert code == 0
    code, out, _ = run(capsys, "report", "--in", str(out_path))
    assert code == 0
    assert len(results_of(out)) == 3


def test_report_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "report", "--in", "/nonexistent/report.json")
    assert code == 2


def test_table_format(capsys):
    code, out, _ = run(capsys, "verify", "agw", "--dim", "2", "--format", "table")
    assert code == 0
    assert "eq1.1" in out and "pass" in out


def test_out_file_written(tmp_path, capsys):
    path = tmp_path / "series.json"
    code, out, _ = run(
        capsys, "expand", "delta-eps", "--which", "delta2", "--out", str(path)
    )
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["results"][0]["weight"] == 2
