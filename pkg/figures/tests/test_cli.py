"""Figure CLI: exit codes and error reporting."""

import shutil
import subprocess

import pytest

from ryddrive_figures.cli import run

from conftest import write_csv


def test_no_args_usage(capsys):
    assert run([]) == 2


def test_fig6_renders(csv_factory, tmp_path, capsys):
    out = tmp_path / "fig6.png"
    code = run([
        "fig6", "--scan", str(csv_factory("rfscan")), "--peaks", str(csv_factory("rfpeaks")),
        "--out", str(out),
    ])
    assert code == 0
    assert out.exists()


def test_fig4_multiple_scans(csv_factory, tmp_path):
    scans = [csv_factory("fieldscan", f"s{i}.csv") for i in range(3)]
    args = ["fig4"]
    for s, lab in zip(scans, ("20 um", "30 um", "40 um")):
        args += ["--scan", str(s), "--label", lab]
    args += ["--out", str(tmp_path / "fig4.png")]
    assert run(args) == 0


def test_schema_mismatch_names_column(csv_factory, tmp_path, capsys):
    bad = write_csv(tmp_path / "bad.csv", [], ["freq_MHz", "fraction"], [(1.0, 0.2)])
    code = run([
        "fig6", "--scan", str(bad), "--peaks", str(csv_factory("rfpeaks")),
        "--out", str(tmp_path / "fig6.png"),
    ])
    assert code == 2
    err = capsys.readouterr().err
    assert "fraction" in err
    assert not (tmp_path / "fig6.png").exists()


def test_missing_file_is_error(csv_factory, tmp_path):
    code = run([
        "fig6", "--scan", str(tmp_path / "nope.csv"), "--peaks", str(csv_factory("rfpeaks")),
        "--out", str(tmp_path / "fig6.png"),
    ])
    assert code == 1


@pytest.mark.skipif(shutil.which("ryddrive") is None, reason="primary CLI not installed")
def test_end_to_end_with_primary_cli(tmp_path):
    # consume the primary component through its public CLI surface
    subprocess.run(
        [
            "ryddrive", "resonances", "--constants", "reference", "--f-s", "0.26",
            "--f-rf", "0.08", "--pair-energies", "--outdir", str(tmp_path),
        ],
        check=True,
        capture_output=True,
    )
    code = run([
        "fig3", "--pair-energy", str(tmp_path / "pairenergy.csv"),
        "--resonances", str(tmp_path / "resonances.csv"),
        "--out", str(tmp_path / "fig3.png"),
    ])
    assert code == 0
    assert (tmp_path / "fig3.png").exists()
