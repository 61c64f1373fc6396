#!/usr/bin/env python3
"""Recovery rate when the receiver's detector is under attack.

Attacks here act on detection records, not pixels: objects vanish,
confidences decay below the filter gate, labels flip to other classes.
Zero-padding lost segments keeps the recovered stream aligned, so the
score is a plain bitwise agreement fraction.
"""

from coverstego import AttackModel, PipelineConfig, robustness_to_csv, run_robustness

config = PipelineConfig(image_count=120, label_count=24, key_length=4000, message_bits=2000)

models = [
    AttackModel(),
    AttackModel(drop_probability=0.1),
    AttackModel(drop_probability=0.3),
    AttackModel(drop_probability=1.0),
    AttackModel(confidence_decay=0.8),
    AttackModel(confidence_decay=0.5),
    AttackModel(label_flip_probability=0.2),
    AttackModel(drop_probability=0.1, label_flip_probability=0.1),
]

rows = []
for model in models:
    summary = run_robustness(config, model, trials=8, seed=2026)
    rows.append((model, summary))
    parts = []
    if model.drop_probability:
        parts.append(f"drop={model.drop_probability}")
    if model.confidence_decay:
        parts.append(f"decay={model.confidence_decay}")
    if model.label_flip_probability:
        parts.append(f"flip={model.label_flip_probability}")
    name = " ".join(parts) or "no attack"
    print(f"{name:<24} mean recovery {summary.mean_recovery:.3f} "
          f"(+/- {summary.stddev:.3f}), "
          f"{summary.mean_segments_lost:.1f} segments lost/trial")

print()
print("as csv:")
print(robustness_to_csv(rows), end="")
