import json
import random

import pytest

from coverstego import (
    DetectedObject,
    DetectionRecord,
    FilterThresholds,
    ParseError,
    ValidationError,
    parse_detection_file,
    select_optimal_object,
    serialize_detection_file,
    synthetic_detector,
)


def record(objects, w=100, h=100, image_id="img"):
    return DetectionRecord(image_id=image_id, width=w, height=h, objects=tuple(objects))


def obj(label, conf, area_w, area_h, x=0, y=0):
    return DetectedObject(label=label, confidence=conf, bbox=(x, y, area_w, area_h))


def test_optimal_object_area_gate_beats_confidence():
    # dog has the higher confidence but its box is too small to qualify
    person = obj("person", 0.90, 40, 50)          # area 2000 > 1500
    dog = obj("dog", 0.95, 25, 20)                # area 500 <= 1500
    assert select_optimal_object(record([person, dog])) is person


def test_optimal_object_empty_list():
    assert select_optimal_object(record([])) is None


def test_optimal_object_strict_thresholds():
    # both gates are strict: exactly-at-threshold values are excluded
    at_conf = obj("cat", 0.50, 50, 100)
    assert select_optimal_object(record([at_conf])) is None
    at_area = obj("cat", 0.9, 30, 50)             # area 1500 == 0.15 * 10000
    assert select_optimal_object(record([at_area])) is None
    above = obj("cat", 0.51, 30, 51)              # area 1530
    assert select_optimal_object(record([above])) is above


def test_optimal_object_tie_breaks():
    small = obj("a", 0.8, 40, 40)
    large = obj("b", 0.8, 50, 50)
    assert select_optimal_object(record([small, large])) is large
    first = obj("a", 0.8, 40, 40)
    second = obj("b", 0.8, 40, 40)
    assert select_optimal_object(record([first, second])) is first


def test_optimal_object_member_of_record():
    rng = random.Random(3)
    for _ in range(200):
        objs = [
            obj(f"l{i}", rng.random(), rng.randint(1, 100), rng.randint(1, 100))
            for i in range(rng.randint(0, 5))
        ]
        rec = record(objs)
        best = select_optimal_object(rec)
        assert best is None or any(best is o for o in rec.objects)


def test_threshold_monotonicity():
    # raising either threshold never turns absence into presence
    rng = random.Random(4)
    for _ in range(200):
        objs = [
            obj(f"l{i}", rng.random(), rng.randint(1, 100), rng.randint(1, 100))
            for i in range(rng.randint(1, 4))
        ]
        rec = record(objs)
        lo = FilterThresholds(min_area_fraction=0.10, min_confidence=0.4)
        hi = FilterThresholds(min_area_fraction=0.20, min_confidence=0.6)
        if select_optimal_object(rec, lo) is None:
            assert select_optimal_object(rec, hi) is None


def test_permutation_invariance_with_distinct_ranks():
    a = obj("a", 0.9, 50, 50)
    b = obj("b", 0.8, 60, 60)
    c = obj("c", 0.7, 70, 70)
    rng = random.Random(5)
    objs = [a, b, c]
    for _ in range(10):
        rng.shuffle(objs)
        assert select_optimal_object(record(objs)) is a


def test_thresholds_validation():
    with pytest.raises(ValidationError):
        FilterThresholds(min_area_fraction=0.0)
    with pytest.raises(ValidationError):
        FilterThresholds(min_area_fraction=1.0)
    with pytest.raises(ValidationError):
        FilterThresholds(min_confidence=1.0)
    with pytest.raises(ValidationError):
        FilterThresholds(min_confidence=-0.1)
    assert FilterThresholds(min_confidence=0.0).min_confidence == 0.0


def test_object_validation():
    with pytest.raises(ValidationError):
        DetectedObject(label="", confidence=0.5, bbox=(0, 0, 1, 1))
    with pytest.raises(ValidationError):
        DetectedObject(label="x", confidence=1.5, bbox=(0, 0, 1, 1))
    with pytest.raises(ValidationError):
        DetectedObject(label="x", confidence=0.5, bbox=(0, 0, 0, 1))
    with pytest.raises(ValidationError):
        DetectedObject(label="x", confidence=0.5, bbox=(-1, 0, 1, 1))
    with pytest.raises(ValidationError):
        DetectedObject(label="x", confidence=0.5, bbox=(0, 0, 1))


def test_record_validation():
    with pytest.raises(ValidationError):
        record([obj("x", 0.9, 60, 60, x=50)])    # 50 + 60 > 100
    with pytest.raises(ValidationError):
        DetectionRecord(image_id="", width=10, height=10, objects=())
    with pytest.raises(ValidationError):
        DetectionRecord(image_id="a", width=0, height=10, objects=())


def test_parse_round_trip_preserves_order(small_corpus):
    text = serialize_detection_file(small_corpus, indent=2)
    back = parse_detection_file(text)
    assert back == list(small_corpus)
    assert [r.image_id for r in back] == [r.image_id for r in small_corpus]


def test_parse_single_image_two_objects():
    doc = {
        "images": [
            {
                "image_id": "photo_1",
                "width": 640,
                "height": 480,
                "objects": [
                    {"label": "cat", "confidence": 0.9, "bbox": [10, 10, 300, 300]},
                    {"label": "dog", "confidence": 0.4, "bbox": [0, 0, 64, 64]},
                ],
            }
        ]
    }
    records = parse_detection_file(json.dumps(doc))
    assert len(records) == 1
    assert len(records[0].objects) == 2
    assert records[0].objects[0].label == "cat"


def test_parse_empty_images():
    assert parse_detection_file('{"images": []}') == []


def test_parse_syntax_errors():
    with pytest.raises(ParseError):
        parse_detection_file("not json")
    with pytest.raises(ParseError):
        parse_detection_file("{}")
    with pytest.raises(ParseError):
        parse_detection_file('{"images": 3}')
    with pytest.raises(ParseError, match=r"images\[0\]"):
        parse_detection_file('{"images": [5]}')
    with pytest.raises(ParseError, match="missing field"):
        parse_detection_file('{"images": [{"image_id": "a", "width": 2, "height": 2}]}')
    with pytest.raises(ParseError, match="confidence"):
        parse_detection_file(
            '{"images": [{"image_id": "a", "width": 9, "height": 9,'
            ' "objects": [{"label": "x", "confidence": "high", "bbox": [0,0,1,1]}]}]}'
        )


def test_parse_validation_error_names_entry():
    doc = {
        "images": [
            {
                "image_id": "bad",
                "width": 100,
                "height": 100,
                "objects": [{"label": "x", "confidence": 0.9, "bbox": [90, 0, 20, 20]}],
            }
        ]
    }
    with pytest.raises(ValidationError, match=r"images\[0\]"):
        parse_detection_file(json.dumps(doc))


def test_parse_null_entries():
    doc = '{"images": [null]}'
    with pytest.raises(ParseError):
        parse_detection_file(doc)
    assert parse_detection_file(doc, allow_missing=True) == [None]
    # serialization keeps the null slot
    assert json.loads(serialize_detection_file([None]))["images"] == [None]


def test_synthetic_detector_deterministic():
    pool = ["cat", "dog"]
    assert synthetic_detector(7, 3, pool) == synthetic_detector(7, 3, pool)
    assert synthetic_detector(8, 3, pool) != synthetic_detector(7, 3, pool)


def test_synthetic_detector_empty():
    assert synthetic_detector(1, 0, ["cat"]) == []


def test_synthetic_detector_every_record_usable():
    records = synthetic_detector(13, 200, [f"c{i}" for i in range(20)])
    assert len(records) == 200
    for rec in records:
        assert select_optimal_object(rec) is not None


def test_synthetic_detector_label_coverage():
    pool = [f"class{i:02d}" for i in range(50)]
    records = synthetic_detector(7, 200, pool)
    labels = {select_optimal_object(r).label for r in records}
    assert len(labels) >= 45


def test_synthetic_detector_rejects_bad_args():
    with pytest.raises(ValidationError):
        synthetic_detector(1, 3, [])
    with pytest.raises(ValidationError):
        synthetic_detector(1, -1, ["a"])
