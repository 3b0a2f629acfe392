import csv
import subprocess
import sys

import pytest

from fockcm.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, TRAJECTORY_COLUMNS, main
from fockcm.config import parse_config
from fockcm.presets import get_preset

SMALL = ["--set", "n_atoms=80", "--set", "alpha_init=2", "--set", "tau_mean=0.5", "--set", "spread=0.2"]


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def pn_sum(path):
    rows = read_rows(path)
    assert rows[0] == ["n", "p"]
    return sum(float(p) for _, p in rows[1:])


def test_run_writes_outputs(tmp_path):
    assert main(["run", "--out", str(tmp_path), *SMALL]) == EXIT_OK
    rows = read_rows(tmp_path / "trajectory.csv")
    assert rows[0] == TRAJECTORY_COLUMNS
    assert len(rows) == 81
    assert [int(r[0]) for r in rows[1:]] == list(range(1, 81))
    assert abs(pn_sum(tmp_path / "final_pn.csv") - 1.0) < 1e-9
    cfg = parse_config((tmp_path / "config.txt").read_text())
    assert cfg.n_atoms == 80


def test_born_sampled_adds_outcome_column(tmp_path):
    main(["run", "--out", str(tmp_path), *SMALL, "--set", "selection=born_sampled", "--set", "scheme=interference_epg"])
    assert read_rows(tmp_path / "trajectory.csv")[0] == TRAJECTORY_COLUMNS + ["outcome"]


def test_byte_identical_reruns(tmp_path):
    for sub in ("a", "b"):
        assert main(["run", "--out", str(tmp_path / sub), "--seed", "17", *SMALL]) == EXIT_OK
    for name in ("trajectory.csv", "final_pn.csv", "config.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert b"\r\n" not in (tmp_path / "a" / "trajectory.csv").read_bytes()


def test_floats_round_trip(tmp_path):
    main(["run", "--out", str(tmp_path), *SMALL])
    for row in read_rows(tmp_path / "trajectory.csv")[1:]:
        for cell in row[1:]:
            assert repr(float(cell)) == cell


def test_run_fig2_fixed_converges(tmp_path):
    assert main(["run", "--preset", "fig2-fixed", "--out", str(tmp_path)]) == EXIT_OK
    last = read_rows(tmp_path / "trajectory.csv")[-1]
    assert float(last[2]) <= 0.1


def test_run_fig1_does_not_converge(tmp_path):
    status = main(["run", "--preset", "fig1", "--out", str(tmp_path)])
    assert status in (EXIT_OK, EXIT_NUMERICAL)
    rows = read_rows(tmp_path / "final_pn.csv")[1:]
    assert max(float(p) for _, p in rows) < 0.99


def test_ensemble(tmp_path):
    assert main(["ensemble", "--out", str(tmp_path), "--seeds", "3", *SMALL]) == EXIT_OK
    rows = read_rows(tmp_path / "summary.csv")
    assert rows[0] == ["seed", "converged", "converged_n", "final_delta_n", "cum_log_success"]
    assert [r[0] for r in rows[1:]] == ["0", "1", "2"]
    assert all(r[1] in ("true", "false") for r in rows[1:])
    median = read_rows(tmp_path / "median_delta_n.csv")
    assert median[0] == ["k", "median_delta_n"] and len(median) == 81


def test_ensemble_records_faults(tmp_path):
    args = ["--set", "scheme=inelastic_eg", "--set", "alpha_init=0.5", "--set", "n_max=12", "--set", "tau_mean=0.3"]
    assert main(["ensemble", "--out", str(tmp_path), "--seeds", "2", *args]) == EXIT_OK
    faults = read_rows(tmp_path / "faults.csv")
    assert faults[0] == ["seed", "fault"] and len(faults) == 3


def test_compare_nsm(tmp_path):
    assert main(["compare-nsm", "--out", str(tmp_path), *SMALL, "--set", "n_max=80"]) == EXIT_OK
    rows = read_rows(tmp_path / "compare.csv")
    assert rows[0] == ["k", "tau_k", "cm_mean_n", "cm_delta_n", "nsm_mean_n", "nsm_delta_n"]
    assert len(rows) == 81
    for name in ("final_pn_cm.csv", "final_pn_nsm.csv"):
        assert abs(pn_sum(tmp_path / name) - 1.0) < 1e-9
    assert read_rows(tmp_path / "trajectory_nsm.csv")[0] == TRAJECTORY_COLUMNS


def test_config_file_and_errors(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("n_atoms = 5\nalpha_init = 1\n")
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK
    cfg.write_text("n_atoms = 5\nbogus = 1\n")
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert f"{cfg}:2:" in capsys.readouterr().err
    assert main(["run", "--set", "spread=-1", "--out", str(tmp_path / "o")]) == EXIT_CONFIG


def test_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["run", "--out", str(blocker / "sub"), *SMALL]) == EXIT_IO
    assert main(["run", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path)]) == EXIT_IO


def test_numerical_fault_exit(tmp_path, capsys):
    args = ["--set", "scheme=inelastic_eg", "--set", "alpha_init=0.5", "--set", "n_max=12", "--set", "tau_mean=0.3"]
    assert main(["run", "--out", str(tmp_path), *args]) == EXIT_NUMERICAL
    assert "numerical fault" in capsys.readouterr().err
    assert main(["run", "--out", str(tmp_path), "--set", "n_max=10"]) == EXIT_NUMERICAL


def test_presets_listing(capsys):
    assert main(["presets"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("fig1", "fig2-fixed", "fig2-small", "fig2-large"):
        assert name in out
    assert main(["presets", "--dump", "fig2-small"]) == EXIT_OK
    assert parse_config(capsys.readouterr().out) == get_preset("fig2-small")


def test_unknown_preset_rejected():
    with pytest.raises(SystemExit):
        main(["run", "--preset", "fig9"])


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fockcm", "run", "--out", str(tmp_path), *SMALL],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "trajectory.csv").exists()
