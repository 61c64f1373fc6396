#!/usr/bin/env python3
"""Hide a short text message in a synthetic image corpus and get it back.

No pixel is ever touched: the sender only picks images whose dominant
detected object selects the right scrambled sequence, and ships the
(start, length) position keys under authenticated encryption.
"""

import numpy as np

from coverstego import (
    SecretMessage,
    bits_to_text,
    build_dictionary,
    build_index,
    derive_sequence_key,
    extract,
    hide,
    open_keys,
    seal_keys,
    synthetic_detector,
    text_to_bits,
)

# --- sender side -----------------------------------------------------------

# a corpus of 120 detection records over 16 object classes, as a real
# detector would emit them for 120 ordinary photographs
corpus = synthetic_detector(seed=7, image_count=120, label_pool=[f"class{i:02d}" for i in range(16)])
mapping = build_dictionary(corpus)
print(f"dictionary: {mapping.factor_count} labels with usable objects")

# receiver 41's secret sequence key; both sides can derive it from the id
key = derive_sequence_key(receiver_id=41, t=10000)

index = build_index(corpus, mapping, key)
print(f"index: {index.factor_count} factors over a {index.key_length}-bit key")

secret = b"meet at the usual place, 21:00"
message = SecretMessage.from_bits(text_to_bits(secret))
result = hide(message, index, selector_seed=2026)
print(f"hidden: {message.bit_length} bits in {result.segment_count} images "
      f"({message.bit_length / result.segment_count:.2f} bits/image)")
print(f"stego images: {result.stego_images[:4]}...")

# position keys travel sealed under a 32-byte pre-shared secret
psk = bytes(range(32))
sealed = seal_keys(result.position_keys, psk)
print(f"sealed keys: {len(sealed)} bytes on the wire")

# --- receiver side ---------------------------------------------------------

position_keys = open_keys(sealed, psk)
by_id = {rec.image_id: rec for rec in corpus}
received = [by_id[image_id] for image_id in result.stego_images]

report = extract(received, position_keys, mapping, key)
recovered = bits_to_text(report.bits)
print(f"recovered: {recovered!r} (padded bits: {report.padded_bits})")
assert recovered == secret

# --- what a lost image costs -----------------------------------------------

# drop the second stego image in transit; its segment comes back zeroed
received[1] = None
report = extract(received, position_keys, mapping, key)
sent_bits = text_to_bits(secret)
matching = int((report.bits == sent_bits).sum())
print(f"with one image lost: {matching}/{len(sent_bits)} bits still correct, "
      f"{report.padded_bits} zero-padded")
assert report.segments_lost == 1
print("round trip ok")
