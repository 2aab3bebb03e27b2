"""End-to-end CLI behavior: exit codes, artifact formats, reproducibility.

Each test drives cuspsums.cli.main in-process against a small cached
table; absolute paths in the config keep the tests independent of cwd.
"""

import json
from pathlib import Path

import pytest

from cuspsums.cli import main

pytestmark = pytest.mark.slow


def _read_dir(path: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cliws")
    table = root / "tau2e4.cache"
    cfg = root / "exp.cfg"
    cfg.write_text(
        f"table = {table}\n"
        "n = 21000\n"
        "ms = 1e4\n"
        "ks = 1, 2\n"
        f"out = {root / 'out'}\n"
        "seed = 20260815\n"
        "omega_delta = 1000\n"
        "omega_windows = 15\n"
        "omega_threshold = 0.05\n"
        "voronoi_ms = 1e4\n"
        "voronoi_ks = 1, 3\n"
        "voronoi_samples = 6\n",
        encoding="utf-8",
    )
    assert main(["coeffs", "--config", str(cfg)]) == 0
    return root, cfg, table


def test_coeffs_reports_cache(workspace, capsys):
    root, cfg, table = workspace
    before = table.read_bytes()
    assert main(["coeffs", "--config", str(cfg), "--json"]) == 0
    out = capsys.readouterr().out
    # 3 u32 header words + u64 count + 16 bytes per entry
    assert f"bytes: {4 + 4 + 4 + 8 + 16 * 21000}" in out
    assert "sha256: " in out
    assert table.read_bytes() == before
    payload = json.loads((root / "out" / "coeffs.json").read_text())
    assert payload["n"] == 21000
    assert payload["provenance"]["package"] == "cuspsums"


def test_missing_cache_cites_creation_command(workspace, capsys):
    root, cfg, table = workspace
    ghost_cfg = root / "ghost.cfg"
    ghost_cfg.write_text(f"table = {root / 'ghost.cache'}\nms = 1e4\nks = 1\n",
                         encoding="utf-8")
    assert main(["meansquare", "--config", str(ghost_cfg)]) == 3
    err = capsys.readouterr().err
    assert "cuspsums coeffs" in err
    assert "ghost.cache" in err


def test_invalid_config_exits_one(workspace, capsys):
    root, cfg, table = workspace
    bad = root / "bad.cfg"
    bad.write_text("delta_exponent = 0.4\n", encoding="utf-8")
    assert main(["meansquare", "--config", str(bad)]) == 1
    assert "invalid:" in capsys.readouterr().err


def test_node_budget_refusal_exits_two(workspace, capsys):
    root, cfg, table = workspace
    tight = root / "tight.cfg"
    tight.write_text(f"table = {table}\nms = 1e4\nks = 1\n"
                     f"out = {root / 'tight_out'}\nnode_budget = 20\n",
                     encoding="utf-8")
    assert main(["verify-lemmas", "--config", str(tight)]) == 2
    assert "budget refused:" in capsys.readouterr().err


def test_verify_lemmas_row_count_and_verdict(workspace, capsys):
    root, cfg, table = workspace
    out = root / "lem_out"
    assert main(["verify-lemmas", "--config", str(cfg), "--out", str(out),
                 "--json"]) == 0
    text = capsys.readouterr().out
    assert "verdict: bounded" in text
    lines = (out / "lemma_bounds.csv").read_text().strip().splitlines()
    # header + (2 k) x (6 pairs) x (3 families) x (2 orders)
    assert len(lines) == 1 + 72
    assert lines[0].startswith("family,m_frequency_index")
    payload = json.loads((out / "lemmas.json").read_text())
    assert payload["bounded"] is True
    assert payload["min_derivative_ratio"] >= 1.0


def test_meansquare_artifacts(workspace):
    root, cfg, table = workspace
    out = root / "ms_out"
    assert main(["meansquare", "--config", str(cfg), "--out", str(out),
                 "--json"]) == 0
    lines = (out / "meansquare.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 2
    header = lines[0].split(",")
    assert "ratio_integral_over_delta_sqrt_m" in header
    m, k, h, delta, integral, diag, ratio, method = lines[1].split(",")
    assert int(k) == 1 and int(h) == 0
    assert abs(float(ratio) - float(integral)
               / (float(delta) * float(m) ** 0.5)) < 1e-12
    assert method == "exact-step"
    svg = (out / "meansquare.svg").read_text()
    assert svg.startswith("<svg") and "script" not in svg


def test_meansquare_byte_reproducible(workspace):
    root, cfg, table = workspace
    out1, out2 = root / "rep1", root / "rep2"
    assert main(["meansquare", "--config", str(cfg), "--out", str(out1),
                 "--json"]) == 0
    assert main(["meansquare", "--config", str(cfg), "--out", str(out2),
                 "--json"]) == 0
    assert _read_dir(out1) == _read_dir(out2)


def test_voronoi_columns_and_reproducibility(workspace):
    root, cfg, table = workspace
    out1, out2 = root / "vor1", root / "vor2"
    assert main(["voronoi", "--config", str(cfg), "--out", str(out1),
                 "--json"]) == 0
    assert main(["voronoi", "--config", str(cfg), "--out", str(out2),
                 "--json"]) == 0
    assert _read_dir(out1) == _read_dir(out2)
    lines = (out1 / "voronoi.csv").read_text().strip().splitlines()
    header = lines[0].split(",")
    assert "err_phase0" in header
    assert "err_phase_pi4" in header
    # 2 denominators x 6 samples
    assert len(lines) == 1 + 12
    payload = json.loads((out1 / "voronoi.json").read_text())
    assert set(payload["envelope_phase_pi4"]) == {
        "coeff", "exponent", "rms_residual", "points"}


def test_omega_threshold_and_seed(workspace, capsys):
    root, cfg, table = workspace
    out = root / "om1"
    assert main(["omega", "--config", str(cfg), "--out", str(out),
                 "--json"]) == 0
    assert "cleared" in capsys.readouterr().out
    payload = json.loads((out / "omega.json").read_text())
    assert payload["cleared"] is True
    assert payload["windows"] == 15

    # same seed reproduces the bytes, another seed moves the windows
    out_same = root / "om_same"
    out_other = root / "om_other"
    assert main(["omega", "--config", str(cfg), "--out", str(out_same)]) == 0
    assert ((out / "omega.csv").read_bytes()
            == (out_same / "omega.csv").read_bytes())
    assert main(["omega", "--config", str(cfg), "--out", str(out_other),
                 "--seed", "7"]) == 0
    assert ((out / "omega.csv").read_bytes()
            != (out_other / "omega.csv").read_bytes())


def test_omega_unreachable_threshold_exits_one(workspace, capsys):
    root, cfg, table = workspace
    strict = root / "strict.cfg"
    strict.write_text(f"table = {table}\nomega_threshold = 5.0\n"
                      f"out = {root / 'strict_out'}\nomega_windows = 15\n",
                      encoding="utf-8")
    assert main(["omega", "--config", str(strict)]) == 1
    assert "NOT CLEARED" in capsys.readouterr().out
