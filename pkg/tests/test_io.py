import io
import json
import os

import pytest

from bepeval.geometry import BBox
from bepeval.io import (
    AnnotatedFrame,
    Annotation,
    AnnotationError,
    align_frames,
    dump_annotations,
    load_annotations,
    read_annotations,
)

LINE = '{"video_id":"v1","frame":0,"x":0,"y":0,"w":10,"h":10,"label":"ferry"}'


def _write(tmp_path, text, name="a.jsonl"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_single_record(tmp_path):
    frames = load_annotations(_write(tmp_path, LINE + "\n"))
    assert len(frames) == 1
    fr = frames[0]
    assert (fr.video_id, fr.frame_index) == ("v1", 0)
    assert fr.boxes == [Annotation(BBox(0, 0, 10, 10), "ferry", None)]


def test_empty_file(tmp_path):
    assert load_annotations(_write(tmp_path, "")) == []
    assert load_annotations(_write(tmp_path, "\n  \n")) == []


def test_zero_width_names_the_line(tmp_path):
    bad = LINE.replace('"w":10', '"w":0')
    p = _write(tmp_path, LINE + "\n" + bad + "\n")
    with pytest.raises(AnnotationError) as err:
        load_annotations(p)
    assert err.value.line == 2
    assert f"{p}:2:" in str(err.value)


@pytest.mark.parametrize(
    "line, message",
    [
        ("{not json", "parse error"),
        ("[1, 2]", "JSON object"),
        ('{"video_id":"v","frame":0,"x":0,"y":0,"w":1,"h":1}', "missing field"),
        ('{"video_id":3,"frame":0,"x":0,"y":0,"w":1,"h":1,"label":"a"}', "video_id"),
        ('{"video_id":"v","frame":-1,"x":0,"y":0,"w":1,"h":1,"label":"a"}', "frame"),
        ('{"video_id":"v","frame":1.5,"x":0,"y":0,"w":1,"h":1,"label":"a"}', "frame"),
        ('{"video_id":"v","frame":0,"x":"0","y":0,"w":1,"h":1,"label":"a"}', "x must be a number"),
        ('{"video_id":"v","frame":0,"x":0,"y":0,"w":1,"h":-1,"label":"a"}', "invalid box"),
        ('{"video_id":"v","frame":0,"x":0,"y":0,"w":1,"h":1,"label":7}', "label"),
    ],
)
def test_validation_errors(line, message):
    with pytest.raises(AnnotationError, match=message) as err:
        read_annotations(io.StringIO(line + "\n"), "f.jsonl")
    assert err.value.line == 1


def test_grouping_sorting_and_extra_keys():
    text = "\n".join(
        [
            '{"video_id":"v2","frame":3,"x":0,"y":0,"w":5,"h":5,"label":"boat","score":0.9}',
            '{"video_id":"v1","frame":7,"x":1,"y":1,"w":5,"h":5,"label":"buoy","id":12}',
            '{"video_id":"v1","frame":2,"x":2,"y":2,"w":5,"h":5,"label":"kayak"}',
            '{"video_id":"v1","frame":7,"x":3,"y":3,"w":5,"h":5,"label":"ferry"}',
        ]
    )
    frames = read_annotations(io.StringIO(text))
    assert [(f.video_id, f.frame_index) for f in frames] == [("v1", 2), ("v1", 7), ("v2", 3)]
    assert [a.label for a in frames[1].boxes] == ["buoy", "ferry"]
    assert frames[1].boxes[0].object_id == "12"


def _records(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def test_round_trip(tmp_path, data_dir):
    for name in ("sample_gt.jsonl", "sample_det.jsonl"):
        src = os.path.join(data_dir, name)
        out = tmp_path / name
        dump_annotations(load_annotations(src), out)
        assert _records(out) == _records(src)


def test_round_trip_fractional_coordinates(tmp_path):
    frames = [AnnotatedFrame("v", 0, [Annotation(BBox(0.5, 1, 10.25, 3), "boat", "x")])]
    p = tmp_path / "f.jsonl"
    dump_annotations(frames, p)
    assert load_annotations(p) == frames
    assert '"x": 0.5' in p.read_text() and '"y": 1,' in p.read_text()


def test_align_frames():
    gt = [AnnotatedFrame("v", 0, [Annotation(BBox(0, 0, 5, 5), "a")]), AnnotatedFrame("v", 1, [])]
    det = [AnnotatedFrame("v", 2, [Annotation(BBox(1, 1, 5, 5), "a")]), AnnotatedFrame("v", 0, [])]
    frames = align_frames(gt, det)
    assert [(len(f.gts), len(f.dos)) for f in frames] == [(1, 0), (0, 0), (0, 1)]
    assert all(f.video_id == "v" for f in frames)
