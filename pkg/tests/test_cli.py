import csv
import io
import json
import os
import subprocess
import sys

import pytest

from bepeval.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, fmt4, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return str(path)


def rec(video, frame, x, y, w, h):
    return {"video_id": video, "frame": frame, "x": x, "y": y, "w": w, "h": h, "label": "boat"}


@pytest.fixture
def two_frame(tmp_path):
    gt = write_jsonl(tmp_path / "gt.jsonl", [rec("v", 0, 0, 0, 40, 40), rec("v", 1, 0, 0, 40, 40)])
    det = write_jsonl(tmp_path / "det.jsonl", [rec("v", 0, 0, 0, 40, 40), rec("v", 1, 200, 200, 40, 40)])
    return gt, det


@pytest.mark.parametrize(
    "value, text",
    [(2 / 3, "0.6667"), (0.12345, "0.1234"), (0.12355, "0.1236"), (1.0, "1.0000"), (0.0, "0.0000")],
)
def test_fmt4_half_even(value, text):
    assert fmt4(value) == text


def test_score_example(capsys):
    code, out, _ = run(["score", "--gt", "0,0,10,10", "--det", "0,2,10,10", "--metric", "iou,bep2"], capsys)
    assert code == EXIT_OK
    r = rows(out)
    assert r[0] == {"metric": "IOU", "score": "0.6667", "x": "", "y": ""}
    assert r[1] == {"metric": "BEP2", "score": "0.8000", "x": "1.0000", "y": "0.8000"}


@pytest.mark.parametrize("det, value", [("0,0,10,10", "1.0000"), ("50,50,10,10", "0.0000")])
def test_score_identical_and_disjoint(capsys, det, value):
    code, out, _ = run(["score", "--gt", "0,0,10,10", "--det", det], capsys)
    assert code == EXIT_OK
    r = rows(out)
    assert len(r) == 9
    assert all(row["score"] == value for row in r)


def test_score_tversky_in_list(capsys):
    code, out, _ = run(["score", "--gt", "0,0,10,10", "--det", "5,0,10,10", "--metric", "tversky(1,1),dice"], capsys)
    assert code == EXIT_OK
    assert [r["score"] for r in rows(out)] == ["0.3333", "0.5000"]


@pytest.mark.parametrize(
    "argv",
    [
        ["score", "--gt", "0,0,10", "--det", "0,0,1,1"],
        ["score", "--gt", "0,0,0,10", "--det", "0,0,1,1"],
        ["score", "--gt", "0,0,1,1", "--det", "0,0,1,1", "--metric", "nope"],
        ["evaluate", "--gt", "x", "--det", "y", "--criterion", "iou:0.5,0.7"],
        ["evaluate", "--gt", "x", "--det", "y", "--criterion", "bep1:1.5,0.7"],
        ["evaluate", "--gt", "x", "--det", "y", "--criterion", "iou:0.5", "--min-px", "-1"],
        ["sweep", "--gt", "x", "--det", "y", "--c0", "0.5,2"],
        ["compare", "--gt", "x"],
        ["compare", "--reference", "nothing"],
        ["bogus"],
        ["score"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_usage_error_checked_before_files(capsys, tmp_path):
    # the bad threshold is reported even though the files do not exist
    code, out, err = run(["evaluate", "--gt", "missing", "--det", "missing", "--criterion", "iou:9"], capsys)
    assert code == EXIT_USAGE and out == ""


def test_data_errors_exit_2(capsys, tmp_path):
    good = write_jsonl(tmp_path / "g.jsonl", [rec("v", 0, 0, 0, 40, 40)])
    bad = tmp_path / "b.jsonl"
    bad.write_text(json.dumps(rec("v", 0, 0, 0, 40, 40)) + "\n" + json.dumps(rec("v", 0, 0, 0, 0, 40)) + "\n")
    code, out, err = run(["evaluate", "--gt", good, "--det", str(bad), "--criterion", "iou:0.5"], capsys)
    assert code == EXIT_DATA
    assert out == ""
    assert f"{bad}:2" in err

    code, _, err = run(["sweep", "--gt", good, "--det", str(tmp_path / "missing.jsonl")], capsys)
    assert code == EXIT_DATA and "missing.jsonl" in err


def test_evaluate_self(capsys, data_dir):
    gt = os.path.join(data_dir, "sample_gt.jsonl")
    code, out, _ = run(["evaluate", "--gt", gt, "--det", gt, "--criterion", "iou:0.5", "--min-px", "0"], capsys)
    assert code == EXIT_OK
    r = rows(out)[0]
    assert (r["precision"], r["recall"]) == ("1.0000", "1.0000")


def test_evaluate_empty_detections(capsys, tmp_path, data_dir):
    gt = os.path.join(data_dir, "sample_gt.jsonl")
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, out, _ = run(["evaluate", "--gt", gt, "--det", str(empty), "--criterion", "bep2:0.7071,0.75"], capsys)
    assert code == EXIT_OK
    r = rows(out)[0]
    assert (r["precision"], r["recall"], r["n_do"]) == ("NA", "0.0000", "0")


def test_evaluate_two_frames_and_per_video(capsys, two_frame):
    gt, det = two_frame
    code, out, _ = run(["evaluate", "--gt", gt, "--det", det, "--criterion", "iou:0.5", "--per-video"], capsys)
    assert code == EXIT_OK
    r = rows(out)
    assert [x["video_id"] for x in r] == ["ALL", "v"]
    assert (r[0]["tp"], r[0]["n_do"], r[0]["n_gt"]) == ("1", "2", "2")
    assert (r[0]["precision"], r[0]["recall"]) == ("0.5000", "0.5000")


def test_evaluate_jsonl_and_markdown(capsys, two_frame, tmp_path):
    gt, det = two_frame
    code, out, _ = run(["evaluate", "--gt", gt, "--det", det, "--criterion", "iou:0.5", "--format", "jsonl"], capsys)
    assert json.loads(out.splitlines()[0])["precision"] == 0.5
    code, out, _ = run(["evaluate", "--gt", gt, "--det", det, "--criterion", "iou:0.5", "--format", "markdown"], capsys)
    assert "| 0.5000 (<=0.5) |" in out


def test_sweep_default_rows_and_output_file(capsys, two_frame, tmp_path):
    gt, det = two_frame
    target = tmp_path / "sweep.csv"
    code, out, _ = run(["sweep", "--gt", gt, "--det", det, "-o", str(target)], capsys)
    assert code == EXIT_OK and out == ""
    r = rows(target.read_text())
    assert len(r) == 33
    assert list(r[0]) == ["metric", "c0_or_x0", "y0", "precision", "recall", "tp", "n_do", "n_gt"]
    assert r[9]["metric"] == "BEP1" and r[9]["c0_or_x0"] == "0.7071" and r[9]["y0"] == "0.6000"
    assert r[-1]["metric"] == "Y2" and r[-1]["c0_or_x0"] == "" and r[-1]["y0"] == "0.9000"


def test_sweep_perfect_fixture(capsys, data_dir):
    gt = os.path.join(data_dir, "sample_gt.jsonl")
    code, out, _ = run(["sweep", "--gt", gt, "--det", gt, "--min-px", "0"], capsys)
    assert all(x["precision"] == "1.0000" and x["recall"] == "1.0000" for x in rows(out))


def test_sweep_custom_axes(capsys, two_frame):
    gt, det = two_frame
    code, out, _ = run(
        ["sweep", "--gt", gt, "--det", det, "--metrics", "bep2,x1", "--x0", "sqrt(0.5),0.8", "--y0", "0.75"],
        capsys,
    )
    r = rows(out)
    assert [(x["metric"], x["c0_or_x0"], x["y0"]) for x in r] == [
        ("BEP2", "0.7071", "0.7500"),
        ("BEP2", "0.8000", "0.7500"),
        ("X1", "0.7071", ""),
        ("X1", "0.8000", ""),
    ]


def test_compare_builtin(capsys):
    code, out, _ = run(["compare"], capsys)
    assert code == EXIT_OK
    r = {x["criterion"]: x for x in rows(out)}
    assert r["BEP2(0.7,0.75)"]["successes"] == "10"
    assert int(r["IOU(0.5)"]["successes"]) < 10
    assert r["Maritime CV"]["successes"] == ""
    assert r["Maritime CV"]["superstructure-only"] == "FP"


def test_compare_files_roundtrip_through_scenarios(capsys, tmp_path):
    code, _, _ = run(["scenarios", "--out-dir", str(tmp_path)], capsys)
    assert code == EXIT_OK
    code, out, _ = run(
        [
            "compare",
            "--gt", str(tmp_path / "gt.jsonl"),
            "--det", str(tmp_path / "det.jsonl"),
            "--reference", "BEP2(0.7,0.75)",
        ],
        capsys,
    )
    assert code == EXIT_OK
    r = {x["criterion"]: x for x in rows(out)}
    assert r["Y2(0.75)"]["successes"] == "10"
    assert len(r["IOU(0.5)"]) == 1 + 10 + 1


def test_compare_single_exact_example(capsys, tmp_path):
    box = [rec("v", 0, 5, 5, 30, 30)]
    gt = write_jsonl(tmp_path / "g.jsonl", box)
    code, out, _ = run(
        ["compare", "--gt", gt, "--det", gt, "--criterion", "iou:0.9", "--criterion", "bep1:0.9,0.9"], capsys
    )
    assert [x["v:0"] for x in rows(out)] == ["TP", "TP"]


def test_scenarios_listing(capsys):
    code, out, _ = run(["scenarios", "--format", "jsonl"], capsys)
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 10 and lines[0]["name"] == "exact"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bepeval", "score", "--gt", "0,0,10,10", "--det", "0,0,10,10", "--metric", "iou"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "IOU,1.0000" in proc.stdout
