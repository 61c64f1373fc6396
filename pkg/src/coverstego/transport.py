"""Sealed transport of position keys under a pre-shared 256-bit secret.

Position keys are the only side channel the receiver needs beyond the
images, so they travel authenticated-encrypted: AES-256-GCM with a fresh
12-byte nonce per seal and the file header bound as associated data.
Any bit flip in header, nonce, or body makes opening fail loudly.
"""

from __future__ import annotations

import os
import struct

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import AuthenticationError, FormatError, ValidationError

TRANSPORT_MAGIC = b"CSPK"
TRANSPORT_VERSION = 1
_HEADER = TRANSPORT_MAGIC + bytes([TRANSPORT_VERSION])
_NONCE_BYTES = 12
_TAG_BYTES = 16
_U32_MAX = 0xFFFFFFFF


def _check_secret(secret: bytes):
    if not isinstance(secret, (bytes, bytearray)) or len(secret) != 32:
        raise ValidationError("secret must be exactly 32 bytes")


def _encode_payload(position_keys) -> bytes:
    keys = [tuple(k) for k in position_keys]
    if len(keys) > _U32_MAX:
        raise ValidationError("too many position keys")
    out = [struct.pack("<I", len(keys))]
    for i, pair in enumerate(keys):
        if len(pair) != 2:
            raise ValidationError(f"position key {i} must be a (start, length) pair")
        start, length = pair
        for name, v in (("start", start), ("length", length)):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v <= _U32_MAX:
                raise ValidationError(f"position key {i} {name} must be a u32, got {v!r}")
        out.append(struct.pack("<II", start, length))
    return b"".join(out)


def seal_keys(position_keys, secret: bytes, nonce: bytes | None = None) -> bytes:
    """Encrypt and authenticate position keys for transport.

    Layout: magic "CSPK", version byte, 12-byte nonce, then the GCM
    ciphertext with its 16-byte tag.  The magic and version are bound as
    associated data, so header tampering is detected even though the
    header itself is plaintext.  A fixed nonce may be injected for tests;
    production callers leave it None and get a random one.
    """
    _check_secret(secret)
    payload = _encode_payload(position_keys)
    if nonce is None:
        nonce = os.urandom(_NONCE_BYTES)
    elif len(nonce) != _NONCE_BYTES:
        raise ValidationError(f"nonce must be {_NONCE_BYTES} bytes")
    sealed = AESGCM(bytes(secret)).encrypt(nonce, payload, _HEADER)
    return _HEADER + nonce + sealed


def open_keys(data: bytes, secret: bytes) -> list[tuple[int, int]]:
    """Verify and decrypt a sealed key file back to (start, length) pairs.

    Structural problems (bad magic, unknown version, truncation) raise
    FormatError; a failed authentication tag, which covers any flipped
    bit anywhere in the file, raises AuthenticationError.
    """
    _check_secret(secret)
    if len(data) < len(_HEADER) + _NONCE_BYTES + _TAG_BYTES:
        raise FormatError("sealed key file truncated")
    if data[:4] != TRANSPORT_MAGIC:
        raise FormatError("bad sealed key file magic")
    if data[4] != TRANSPORT_VERSION:
        raise FormatError(f"unsupported sealed key file version {data[4]}")
    nonce = data[5 : 5 + _NONCE_BYTES]
    body = data[5 + _NONCE_BYTES :]
    try:
        payload = AESGCM(bytes(secret)).decrypt(nonce, bytes(body), _HEADER)
    except InvalidTag as exc:
        raise AuthenticationError("sealed key file failed authentication") from exc
    if len(payload) < 4:
        raise FormatError("sealed payload truncated")
    (count,) = struct.unpack("<I", payload[:4])
    if len(payload) != 4 + 8 * count:
        raise FormatError("sealed payload length inconsistent with key count")
    keys = []
    for i in range(count):
        start, length = struct.unpack("<II", payload[4 + 8 * i : 12 + 8 * i])
        keys.append((start, length))
    return keys
