"""Evaluation harness: detector attacks, recovery scoring, benchmark sweeps.

Robustness here means robustness of the detection channel, not of pixels:
an attack perturbs what the receiver's detector reports (objects dropped,
confidences decayed, labels flipped) and the score is the fraction of
message bits that still come back right after zero-padding lost segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .detection import (
    DEFAULT_THRESHOLDS,
    DetectedObject,
    DetectionRecord,
    FilterThresholds,
    select_optimal_object,
    synthetic_detector,
)
from .dictionary import build_dictionary
from .errors import ProtocolError, ValidationError
from .extractor import extract
from .hider import SecretMessage, estimate_capacity, hide
from .keying import EnginePrng, as_bit_array, derive_sequence_key, random_bits
from .stego_index import build_index


@dataclass(frozen=True)
class AttackModel:
    """Per-record perturbation probabilities and strengths.

    drop_probability: chance the record's optimal object is removed.
    confidence_decay: when positive, every confidence is multiplied by
    it; 0.0 disables the channel entirely (a multiplier of zero would
    just erase all detections, which drop already models).
    label_flip_probability: chance the current optimal object's label is
    replaced by a pool label.  The all-zero model is the identity.
    """

    drop_probability: float = 0.0
    confidence_decay: float = 0.0
    label_flip_probability: float = 0.0

    def __post_init__(self):
        for name in ("drop_probability", "confidence_decay", "label_flip_probability"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v!r}")

    @property
    def is_identity(self) -> bool:
        return (
            self.drop_probability == 0.0
            and self.confidence_decay == 0.0
            and self.label_flip_probability == 0.0
        )


def perturb(records, model: AttackModel, seed: int, thresholds: FilterThresholds = DEFAULT_THRESHOLDS):
    """Apply the attack model to each record, deterministically per seed.

    Channels apply in a fixed order: drop the optimal object, decay all
    confidences, then flip the label of whatever object is optimal after
    the first two steps.  Exactly three PRNG draws are consumed per
    record, None entries included, so changing one probability never
    shifts another record's fate.  None entries pass through unchanged
    and the flip pool is the sorted set of labels seen across the input.
    """
    engine = EnginePrng(seed)
    pool = sorted({obj.label for rec in records if rec is not None for obj in rec.objects})
    out = []
    for rec in records:
        u_drop = engine.next_float()
        u_flip = engine.next_float()
        flip_choice = engine.next()
        if rec is None:
            out.append(None)
            continue
        objs = list(rec.objects)
        if model.drop_probability > 0.0 and u_drop < model.drop_probability:
            target = select_optimal_object(rec, thresholds)
            if target is not None:
                for k, obj in enumerate(objs):
                    if obj is target:
                        del objs[k]
                        break
        if model.confidence_decay > 0.0:
            objs = [replace(o, confidence=o.confidence * model.confidence_decay) for o in objs]
        if model.label_flip_probability > 0.0 and u_flip < model.label_flip_probability and pool:
            interim = replace(rec, objects=tuple(objs))
            target = select_optimal_object(interim, thresholds)
            if target is not None:
                new_label = pool[flip_choice % len(pool)]
                for k, obj in enumerate(interim.objects):
                    if obj is target:
                        objs[k] = replace(obj, label=new_label)
                        break
        out.append(replace(rec, objects=tuple(objs)))
    return out


@dataclass(frozen=True)
class RobustnessResult:
    """Bitwise agreement between sent and recovered streams."""

    recovery_rate: float
    bits_total: int
    bits_matching: int
    segments_lost: int


def recovery_rate(original, recovered, segments_lost: int = 0) -> RobustnessResult:
    """Fraction of bit positions where the streams agree.

    Both streams must have equal length; extraction guarantees that by
    zero-padding lost segments instead of dropping them.  segments_lost
    is carried through for reporting; the caller counts it because only
    the extraction report knows which segments were padded.
    """
    a = as_bit_array(original)
    b = as_bit_array(recovered)
    if a.size != b.size:
        raise ProtocolError(f"streams differ in length: {a.size} vs {b.size}")
    if a.size == 0:
        raise ValidationError("streams must be non-empty")
    matching = int((a == b).sum())
    return RobustnessResult(
        recovery_rate=matching / a.size,
        bits_total=int(a.size),
        bits_matching=matching,
        segments_lost=segments_lost,
    )


@dataclass(frozen=True)
class PipelineConfig:
    """Shape of one synthetic end-to-end run."""

    image_count: int = 200
    label_count: int = 50
    key_length: int = 10000
    message_bits: int = 10000

    def __post_init__(self):
        if self.image_count < 1 or self.label_count < 1:
            raise ValidationError("image_count and label_count must be >= 1")
        if self.key_length < 2:
            raise ValidationError("key_length must be >= 2")
        if self.message_bits < 1:
            raise ValidationError("message_bits must be >= 1")


@dataclass(frozen=True)
class RobustnessSummary:
    """Aggregate of per-trial recovery under one attack model."""

    mean_recovery: float
    stddev: float
    trials: int
    mean_segments_lost: float
    results: tuple[RobustnessResult, ...]


def run_robustness(
    config: PipelineConfig,
    model: AttackModel,
    trials: int,
    seed: int,
) -> RobustnessSummary:
    """Full pipeline per trial: synthesize, hide, attack, extract, score.

    Every trial gets fresh sub-seeds from the master seed's stream for
    corpus, receiver key, message, image selection, and attack, so trials
    are independent but the whole run is reproducible.  Under the
    identity model the recovered stream equals the sent stream exactly,
    making the rate 1.0 for every trial and seed.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    engine = EnginePrng(seed)
    pool = [f"class{i:03d}" for i in range(config.label_count)]
    results = []
    for _ in range(trials):
        corpus_seed = engine.next()
        key_seed = engine.next()
        msg_seed = engine.next()
        pick_seed = engine.next()
        attack_seed = engine.next()
        corpus = synthetic_detector(corpus_seed, config.image_count, pool)
        mapping = build_dictionary(corpus)
        key = derive_sequence_key(key_seed, config.key_length)
        index = build_index(corpus, mapping, key)
        message = random_bits(msg_seed, config.message_bits)
        sent = hide(SecretMessage.from_bits(message), index, selector_seed=pick_seed)
        by_id = {rec.image_id: rec for rec in corpus}
        received = [by_id[image_id] for image_id in sent.stego_images]
        attacked = perturb(received, model, seed=attack_seed)
        report = extract(attacked, sent.position_keys, mapping, key)
        results.append(recovery_rate(message, report.bits, report.segments_lost))
    mean = sum(r.recovery_rate for r in results) / trials
    if trials > 1:
        var = sum((r.recovery_rate - mean) ** 2 for r in results) / (trials - 1)
        stddev = math.sqrt(var)
    else:
        stddev = 0.0
    return RobustnessSummary(
        mean_recovery=mean,
        stddev=stddev,
        trials=trials,
        mean_segments_lost=sum(r.segments_lost for r in results) / trials,
        results=tuple(results),
    )


def factor_complete_corpus(seed: int, image_count: int, factor_count: int) -> list:
    """Deterministic corpus whose dictionary has exactly factor_count factors.

    Image i carries a single strongly passing object labeled with class
    i mod factor_count, so every label wins its images' filter and the
    built dictionary is exactly factor_count entries.  Used by capacity
    benchmarks, where the factor count must hit the grid value precisely
    rather than drift with sampling noise.
    """
    if factor_count < 1:
        raise ValidationError("factor_count must be >= 1")
    if image_count < factor_count:
        raise ValidationError("image_count must be >= factor_count")
    engine = EnginePrng(seed)
    records = []
    for i in range(image_count):
        width = 400 + engine.next() % 625
        height = 300 + engine.next() % 469
        frac = 0.25 + engine.next_float() * 0.4
        side = math.sqrt(frac)
        bw = max(1, int(width * side))
        bh = max(1, int(height * side))
        x = engine.next() % (width - bw + 1)
        y = engine.next() % (height - bh + 1)
        records.append(
            DetectionRecord(
                image_id=f"cap_{i:05d}",
                width=width,
                height=height,
                objects=(
                    DetectedObject(
                        label=f"class{i % factor_count:05d}",
                        confidence=0.6 + engine.next_float() * 0.39,
                        bbox=(x, y, bw, bh),
                    ),
                ),
            )
        )
    return records


@dataclass(frozen=True)
class SweepCell:
    """One (key length, factor count) cell of a capacity sweep."""

    t: int
    factors: int
    mean_bits_per_image: float
    stddev: float
    trials: int


def capacity_sweep(
    t_values,
    factor_counts,
    trials: int,
    seed: int,
    message_bits: int = 10000,
) -> list[SweepCell]:
    """Estimate capacity over the full (t, factors) grid.

    Each cell builds a factor-complete corpus, derives a fresh receiver
    key, and averages bits per image over `trials` random messages.
    Cells are returned in row-major order: t ascending, factors ascending
    within t.
    """
    engine = EnginePrng(seed)
    cells = []
    for t in sorted(set(int(v) for v in t_values)):
        for factors in sorted(set(int(v) for v in factor_counts)):
            corpus_seed = engine.next()
            key_seed = engine.next()
            trial_seed = engine.next()
            corpus = factor_complete_corpus(corpus_seed, factors, factors)
            mapping = build_dictionary(corpus)
            key = derive_sequence_key(key_seed, t)
            index = build_index(corpus, mapping, key)
            est = estimate_capacity(index, trials, message_bits, trial_seed)
            cells.append(
                SweepCell(
                    t=t,
                    factors=factors,
                    mean_bits_per_image=est.mean_bits_per_image,
                    stddev=est.stddev,
                    trials=trials,
                )
            )
    return cells


def sweep_to_csv(cells) -> str:
    """Render sweep cells as CSV with a fixed header and 3-decimal floats."""
    lines = ["t,factors,mean_bits_per_image,stddev,trials"]
    for c in cells:
        lines.append(
            f"{c.t},{c.factors},{c.mean_bits_per_image:.3f},{c.stddev:.3f},{c.trials}"
        )
    return "\n".join(lines) + "\n"


def robustness_to_csv(rows) -> str:
    """Render (AttackModel, RobustnessSummary) pairs as CSV."""
    lines = [
        "drop_probability,confidence_decay,label_flip_probability,mean_recovery,stddev,trials"
    ]
    for model, summary in rows:
        lines.append(
            f"{model.drop_probability:.3f},{model.confidence_decay:.3f},"
            f"{model.label_flip_probability:.3f},{summary.mean_recovery:.3f},"
            f"{summary.stddev:.3f},{summary.trials}"
        )
    return "\n".join(lines) + "\n"
