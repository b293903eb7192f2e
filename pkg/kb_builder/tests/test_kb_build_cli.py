import json
import subprocess


def run_cli(*args):
    return subprocess.run(["kb-build", *args], capture_output=True, text=True)


def test_builds_requested_libraries(tmp_path):
    proc = run_cli("--libs", "json", "--out", str(tmp_path))
    assert proc.returncode == 0, proc.stderr
    assert "wrote" in proc.stdout
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["all.json", "json.json"]


def test_reports_failures_but_still_writes_the_rest(tmp_path):
    proc = run_cli("--libs", "json,not_a_lib", "--out", str(tmp_path))
    assert proc.returncode == 2
    assert "not_a_lib" in proc.stderr
    assert (tmp_path / "json.json").exists()
    assert (tmp_path / "all.json").exists()


def test_two_runs_write_identical_bytes(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    assert run_cli("--libs", "json,numpy", "--out", str(first)).returncode == 0
    assert run_cli("--libs", "json,numpy", "--out", str(second)).returncode == 0
    for name in ("json.json", "numpy.json", "all.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_types_override(tmp_path):
    proc = run_cli(
        "--libs", "pandas", "--types", "pandas=Series", "--out", str(tmp_path)
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads((tmp_path / "pandas.json").read_text(encoding="utf-8"))
    assert sorted(doc["libraries"]["pandas"]["object_methods"]) == ["Series"]


def test_malformed_types_flag_rejected(tmp_path):
    proc = run_cli("--libs", "json", "--types", "nonsense", "--out", str(tmp_path))
    assert proc.returncode == 2
    assert "LIB=T1,T2" in proc.stderr


def test_empty_libs_rejected(tmp_path):
    proc = run_cli("--libs", ",", "--out", str(tmp_path))
    assert proc.returncode == 2
