"""Command line behavior: exit codes, output formats, file handling."""

import json

import pytest

from kchlint.cli import EXIT_CLEAN, EXIT_ERROR, EXIT_FINDINGS, main
from kchlint.evalharness import CLEAN, MISTYPED_API, Sample, synthesize, write_dataset
from kchlint.kb import SCHEMA_VERSION, bundled_kb

CLEAN_SOURCE = "import pandas as pd\ndf = pd.read_csv('data.csv')\nprint(df.head())\n"
DIRTY_SOURCE = "import pandas as pd\ndf = pd.raed_csv('data.csv')\n"
BROKEN_SOURCE = "def broken(:\n"


@pytest.fixture
def clean_file(tmp_path):
    path = tmp_path / "clean.py"
    path.write_text(CLEAN_SOURCE)
    return path


@pytest.fixture
def dirty_file(tmp_path):
    path = tmp_path / "dirty.py"
    path.write_text(DIRTY_SOURCE)
    return path


# -- check ---------------------------------------------------------------------


def test_check_clean_exits_zero(clean_file, capsys):
    assert main(["check", str(clean_file)]) == EXIT_CLEAN
    assert capsys.readouterr().out == ""


def test_check_findings_exit_one_with_location(dirty_file, capsys):
    assert main(["check", str(dirty_file)]) == EXIT_FINDINGS
    out = capsys.readouterr().out
    assert out.startswith(f"{dirty_file}:2:")
    assert "unknown_api" in out
    assert "read_csv" in out


def test_check_json_format_and_field_order(dirty_file, capsys):
    assert main(["check", "--format", "json", str(dirty_file)]) == EXIT_FINDINGS
    payload = capsys.readouterr().out
    records = json.loads(payload)
    assert len(records) == 1
    record = records[0]
    assert list(record) == [
        "file", "line", "col", "category", "name", "evidence",
        "confidence", "suggestion",
    ]
    assert record["category"] == "unknown_api"
    assert record["suggestion"]["replacement"] == "read_csv"
    # byte-stable across runs
    capsys.readouterr()
    main(["check", "--format", "json", str(dirty_file)])
    assert capsys.readouterr().out == payload


def test_check_json_clean_prints_empty_array(clean_file, capsys):
    assert main(["check", "--format", "json", str(clean_file)]) == EXIT_CLEAN
    assert json.loads(capsys.readouterr().out) == []


def test_check_parse_error_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.py"
    path.write_text(BROKEN_SOURCE)
    assert main(["check", str(path)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_check_missing_file_exits_two(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nope.py")]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_check_error_outranks_findings(tmp_path, dirty_file, capsys):
    broken = tmp_path / "broken.py"
    broken.write_text(BROKEN_SOURCE)
    assert main(["check", str(dirty_file), str(broken)]) == EXIT_ERROR


def test_check_timing_goes_to_stderr(clean_file, capsys):
    main(["check", "--timing", str(clean_file)])
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "s" in captured.err


# -- fix ----------------------------------------------------------------------


def test_fix_stdout_prints_fixed_source(dirty_file, capsys):
    assert main(["fix", str(dirty_file)]) == EXIT_FINDINGS
    captured = capsys.readouterr()
    assert "pd.read_csv('data.csv')" in captured.out
    assert "applied=1" in captured.err
    assert dirty_file.read_text() == DIRTY_SOURCE  # untouched


def test_fix_stdout_requires_single_file(dirty_file, clean_file, capsys):
    assert main(["fix", str(dirty_file), str(clean_file)]) == EXIT_ERROR


def test_fix_clean_file_exits_zero(clean_file, capsys):
    assert main(["fix", str(clean_file)]) == EXIT_CLEAN


def test_fix_diff_output(dirty_file, capsys):
    assert main(["fix", "--diff", str(dirty_file)]) == EXIT_FINDINGS
    out = capsys.readouterr().out
    assert f"--- a/{dirty_file}" in out
    assert f"+++ b/{dirty_file}" in out
    assert "-df = pd.raed_csv('data.csv')" in out
    assert "+df = pd.read_csv('data.csv')" in out


def test_fix_diff_silent_on_clean(clean_file, capsys):
    assert main(["fix", "--diff", str(clean_file)]) == EXIT_CLEAN
    assert capsys.readouterr().out == ""


def test_fix_in_place_rewrites(dirty_file, capsys):
    assert main(["fix", "--in-place", str(dirty_file)]) == EXIT_FINDINGS
    assert dirty_file.read_text() == (
        "import pandas as pd\ndf = pd.read_csv('data.csv')\n"
    )


def test_fix_in_place_leaves_clean_bytes_untouched(tmp_path, capsys):
    # non-canonical but clean: zero edits means zero writes
    path = tmp_path / "spacing.py"
    original = "x  =  1\n"
    path.write_text(original)
    assert main(["fix", "--in-place", str(path)]) == EXIT_CLEAN
    assert path.read_text() == original


def test_fix_in_place_multiple_files(tmp_path, capsys):
    a = tmp_path / "a.py"
    b = tmp_path / "b.py"
    a.write_text(DIRTY_SOURCE)
    b.write_text(CLEAN_SOURCE)
    assert main(["fix", "--in-place", str(a), str(b)]) == EXIT_FINDINGS
    assert "pd.read_csv" in a.read_text()
    assert b.read_text() == CLEAN_SOURCE


def test_fix_parse_error_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.py"
    path.write_text(BROKEN_SOURCE)
    assert main(["fix", str(path)]) == EXIT_ERROR


def test_fix_intent_flag(tmp_path, capsys):
    path = tmp_path / "intent.py"
    path.write_text(
        "import numpy as np\n"
        "values = [1, 2]\n"
        "# average of the list\n"
        "m = np.median(values)\n"
    )
    assert main(["fix", "--fix-intent", str(path)]) == EXIT_FINDINGS
    assert "np.mean(values)" in capsys.readouterr().out


# -- eval -----------------------------------------------------------------------


@pytest.fixture
def dataset_dir(tmp_path, clean_samples):
    kb = bundled_kb()
    seeds = clean_samples[:8]
    mutants = synthesize(seeds, MISTYPED_API, 4, seed=5, kb=kb)
    write_dataset(seeds + mutants, tmp_path / "ds")
    return tmp_path / "ds"


def test_eval_text_report(dataset_dir, capsys):
    assert main(["eval", str(dataset_dir)]) == EXIT_CLEAN
    out = capsys.readouterr().out
    assert "precision" in out
    assert "recall" in out


def test_eval_json_report(dataset_dir, capsys):
    assert main(["eval", "--format", "json", str(dataset_dir)]) == EXIT_CLEAN
    doc = json.loads(capsys.readouterr().out)
    assert doc["tp"] == 4
    assert doc["fp"] == 0
    assert doc["tn"] == 8
    assert doc["fix_accuracy"] >= 0.0


def test_eval_bad_dataset_exits_two(tmp_path, capsys):
    assert main(["eval", str(tmp_path)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


# -- kb --------------------------------------------------------------------------


def extra_manifest(tmp_path):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "libraries": {
            "extralib": {
                "version": "0.1",
                "canonical_alias": "xl",
                "callables": ["frobnicate"],
                "constructors": {},
                "object_methods": {},
            }
        },
        "semantic": {
            "extension_map": [],
            "reader_family": [],
            "intent_synonyms": [],
            "preferences": [],
        },
    }
    path = tmp_path / "extra.json"
    path.write_text(json.dumps(doc))
    return path


def test_kb_validate_ok(tmp_path, capsys):
    path = extra_manifest(tmp_path)
    assert main(["kb", "validate", str(path)]) == EXIT_CLEAN
    out = capsys.readouterr().out
    assert "OK" in out and "1 librar" in out


def test_kb_validate_bad_manifest(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": "99"}))
    assert main(["kb", "validate", str(path)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_kb_merge_writes_combined_manifest(tmp_path, capsys):
    bundled = bundled_kb()
    first = tmp_path / "first.json"
    first.write_text(json.dumps(bundled.to_manifest()))
    second = extra_manifest(tmp_path)
    out_path = tmp_path / "merged.json"
    code = main(["kb", "merge", "-o", str(out_path), str(first), str(second)])
    assert code == EXIT_CLEAN
    merged = json.loads(out_path.read_text())
    assert "extralib" in merged["libraries"]
    assert "pandas" in merged["libraries"]


def test_kb_show_library(capsys):
    assert main(["kb", "show", "pandas"]) == EXIT_CLEAN
    out = capsys.readouterr().out
    assert "pandas" in out
    assert "read_csv" in out
    assert "DataFrame" in out


def test_kb_show_unknown_library(capsys):
    assert main(["kb", "show", "no_such_lib"]) == EXIT_ERROR


def test_kb_flag_layers_on_default(tmp_path, capsys):
    path = extra_manifest(tmp_path)
    snippet = tmp_path / "code.py"
    snippet.write_text("import extralib as xl\nxl.frobnicat(1)\n")
    assert main(["check", "--kb", str(path), str(snippet)]) == EXIT_FINDINGS
    out = capsys.readouterr().out
    assert "frobnicate" in out
    # without the extra manifest the library is unknown and skipped
    assert main(["check", str(snippet)]) == EXIT_CLEAN


def test_version_flag(capsys):
    assert main(["--version"]) == EXIT_CLEAN
    assert "kchlint" in capsys.readouterr().out


def test_unknown_command_exits_two(capsys):
    assert main(["bogus"]) == EXIT_ERROR
