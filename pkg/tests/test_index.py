import random

import numpy as np
import pytest

from coverstego import (
    DetectedObject,
    DetectionRecord,
    EmptyIndexError,
    ScramblingFactor,
    UnknownFactorError,
    ValidationError,
    assemble_index,
    build_dictionary,
    build_index,
    derive_sequence_key,
    longest_match,
    pick_image,
    scramble,
    select_optimal_object,
    substring_spans,
    synthetic_detector,
)

import oracles


def passing_record(label, image_id):
    return DetectionRecord(
        image_id=image_id,
        width=100,
        height=100,
        objects=(DetectedObject(label=label, confidence=0.9, bbox=(0, 0, 50, 50)),),
    )


def random_index(rng, t, n_factors):
    key = derive_sequence_key(rng.getrandbits(64), t)
    return assemble_index(key, {f: [f"img{f}"] for f in range(n_factors)})


def test_grouping_by_optimal_factor():
    records = [
        passing_record("dog", "d1"),
        passing_record("dog", "d2"),
        passing_record("cat", "c1"),
    ]
    mapping = build_dictionary(records)
    key = derive_sequence_key(1, 64)
    index = build_index(records, mapping, key)
    assert index.factor_count == 2
    cat_entry = index.entry_for(mapping.factor_for("cat"))
    dog_entry = index.entry_for(mapping.factor_for("dog"))
    assert cat_entry.images == ("c1",)
    assert dog_entry.images == ("d1", "d2")


def test_unqualified_record_absent_everywhere():
    records = [
        passing_record("dog", "d1"),
        DetectionRecord(image_id="none", width=100, height=100, objects=()),
    ]
    mapping = build_dictionary(records)
    index = build_index(records, mapping, derive_sequence_key(1, 64))
    all_images = [i for e in index.entries for i in e.images]
    assert all_images == ["d1"]


def test_sequences_are_scrambles_of_the_key():
    records = [passing_record("dog", "d1"), passing_record("cat", "c1")]
    mapping = build_dictionary(records)
    key = derive_sequence_key(5, 128)
    index = build_index(records, mapping, key)
    values = [e.factor.value for e in index.entries]
    assert values == sorted(values)
    for entry in index.entries:
        expected = scramble(key, entry.factor)
        assert (entry.sequence.bits == expected.bits).all()


def test_unknown_label_records_skipped_and_empty_errors():
    records = [passing_record("dog", "d1")]
    mapping = build_dictionary(records)
    stranger = passing_record("yak", "y1")
    index = build_index(records + [stranger], mapping, derive_sequence_key(1, 64))
    assert [i for e in index.entries for i in e.images] == ["d1"]
    with pytest.raises(EmptyIndexError):
        build_index([stranger], mapping, derive_sequence_key(1, 64))


def test_entry_count_matches_independent_scan():
    records = synthetic_detector(7, 200, [f"class{i:02d}" for i in range(50)])
    mapping = build_dictionary(records)
    index = build_index(records, mapping, derive_sequence_key(3, 256))
    distinct = {select_optimal_object(r).label for r in records}
    assert index.factor_count == len(distinct)
    # every corpus image with an optimal object lands in exactly one list
    listed = [i for e in index.entries for i in e.images]
    assert sorted(listed) == sorted(r.image_id for r in records)


def test_assemble_validations():
    key = derive_sequence_key(1, 32)
    with pytest.raises(EmptyIndexError):
        assemble_index(key, {})
    with pytest.raises(ValidationError):
        assemble_index(key, {0: []})


def test_worked_example_matches(index_with_sequence):
    index = index_with_sequence([1, 0, 1, 1, 0, 1, 0, 0])
    m = longest_match(index, [1, 1, 0, 1], 4)
    assert (m.start, m.length) == (2, 4)
    assert m.factor.value == 0
    m = longest_match(index, [1, 1, 1], 3)
    assert (m.start, m.length) == (2, 2)


def test_match_present_when_both_bits_occur(index_with_sequence):
    index = index_with_sequence([0, 1, 0, 1])
    for msg in ([0], [1], [1, 1, 1, 1], [0, 0, 0, 0]):
        assert longest_match(index, msg, min(4, len(msg))) is not None


def test_no_match_on_constant_sequence(index_with_sequence):
    index = index_with_sequence([0, 0, 0, 0])
    assert longest_match(index, [1, 1], 2) is None
    m = longest_match(index, [0, 1], 2)
    assert (m.start, m.length) == (0, 1)


def test_long_match_uses_window_path():
    # a 35-bit slice of the sequence must come back exactly
    key = derive_sequence_key(44, 200)
    index = assemble_index(key, {0: ["a"], 1: ["b"]})
    seq = index.entries[1].sequence.bits
    msg = seq[5:40]
    m = longest_match(index, msg, 35)
    assert m.length == 35
    got = index.entry_for(m.factor).sequence.bits[m.start : m.start + 35]
    assert (got == msg).all()


def test_n_max_validation(index_with_sequence):
    index = index_with_sequence([1, 0, 1, 0])
    with pytest.raises(ValidationError):
        longest_match(index, [1, 1], 0)
    with pytest.raises(ValidationError):
        longest_match(index, [1, 1], 3)     # exceeds message length
    with pytest.raises(ValidationError):
        longest_match(index, [1] * 8, 5)    # exceeds t
    with pytest.raises(ValidationError):
        longest_match(index, [], 1)


def test_oracle_equivalence_small_instances():
    rng = random.Random(2024)
    for _ in range(300):
        t = rng.randint(2, 64)
        n_factors = rng.randint(1, 4)
        index = random_index(rng, t, n_factors)
        sequences = [e.sequence.bits.tolist() for e in index.entries]
        msg = [rng.randint(0, 1) for _ in range(rng.randint(1, 128))]
        n_max = min(t, len(msg))
        got = longest_match(index, msg, n_max)
        expected = oracles.naive_longest_match(sequences, msg, n_max)
        if expected is None:
            assert got is None
        else:
            assert (got.factor.value, got.start, got.length) == expected


def test_adding_entries_never_shortens_best_match():
    rng = random.Random(55)
    for _ in range(100):
        t = rng.randint(16, 48)
        key = derive_sequence_key(rng.getrandbits(64), t)
        small = assemble_index(key, {0: ["a"]})
        big = assemble_index(key, {0: ["a"], 1: ["b"], 2: ["c"]})
        msg = [rng.randint(0, 1) for _ in range(rng.randint(1, 40))]
        n_max = min(t, len(msg))
        short = longest_match(small, msg, n_max)
        long = longest_match(big, msg, n_max)
        short_len = 0 if short is None else short.length
        long_len = 0 if long is None else long.length
        assert long_len >= short_len


def test_substring_span_count(index_with_sequence):
    for t in (2, 5, 64):
        index = index_with_sequence(derive_sequence_key(1, t).bits)
        assert index.substring_span_count() == t * (t + 1) // 2
    assert len(list(substring_spans(3))) == 6


def test_pick_image_singleton_and_determinism():
    key = derive_sequence_key(1, 32)
    index = assemble_index(key, {0: ["only"], 1: ["w", "x", "y", "z"]})
    assert pick_image(index, ScramblingFactor(0)) == "only"
    assert pick_image(index, ScramblingFactor(0), selector_seed=9) == "only"
    a = pick_image(index, ScramblingFactor(1), selector_seed=42)
    b = pick_image(index, ScramblingFactor(1), selector_seed=42)
    assert a == b
    with pytest.raises(UnknownFactorError):
        pick_image(index, ScramblingFactor(7))


def test_pick_image_seeded_uniformity():
    key = derive_sequence_key(1, 32)
    index = assemble_index(key, {1: ["w", "x", "y", "z"]})
    counts = {"w": 0, "x": 0, "y": 0, "z": 0}
    for seed in range(10000):
        counts[pick_image(index, ScramblingFactor(1), selector_seed=seed)] += 1
    for c in counts.values():
        assert 0.19 <= c / 10000 <= 0.31


def test_index_immutability():
    key = derive_sequence_key(1, 32)
    index = assemble_index(key, {0: ["a"]})
    with pytest.raises(ValueError):
        index.entries[0].sequence.bits[0] ^= 1
