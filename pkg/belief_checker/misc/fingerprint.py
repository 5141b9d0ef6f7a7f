import json

import base58
import varint
from blake3 import blake3

from belief_checker.model import Model
from belief_checker.model_io import model_to_dict

FINGERPRINT_VERSION = 0


def canonical_bytes(m: Model) -> bytes:
    return json.dumps(model_to_dict(m), sort_keys=True, separators=(",", ":")).encode("utf-8")


def model_fingerprint(m: Model) -> str:
    """Stable identifier of a model: "M" + base58check(varint(version) + blake3(canonical json))"""
    digest = blake3(canonical_bytes(m)).digest()
    return "M" + base58.b58encode_check(varint.encode(FINGERPRINT_VERSION) + digest).decode("utf-8")


def decode_fingerprint(fingerprint: str) -> bytes:
    """Return the 32 byte digest of a fingerprint (checksum verified)

    Raises:
        ValueError: bad prefix, bad checksum or unknown version
    """
    if not fingerprint.startswith("M"):
        raise ValueError(f"not a model fingerprint: {fingerprint}")
    raw = base58.b58decode_check(fingerprint[1:])
    # versions fit in one varint byte for now
    version = varint.decode_bytes(raw[:1])
    if version != FINGERPRINT_VERSION:
        raise ValueError(f"unknown fingerprint version {version}")
    return raw[1:]


def fingerprint_matches(m: Model, fingerprint: str) -> bool:
    """Whether fingerprint was computed from a model with the same content as m

    Raises:
        ValueError: malformed fingerprint (see decode_fingerprint)
    """
    return decode_fingerprint(fingerprint) == blake3(canonical_bytes(m)).digest()
