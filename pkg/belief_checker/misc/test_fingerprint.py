import unittest

import base58

from belief_checker.model_io import loads_model, dumps_model
from belief_checker.scenarios.generals import generals_actionstamped_model

from .fingerprint import decode_fingerprint, fingerprint_matches, model_fingerprint


class TestFingerprint(unittest.TestCase):
    def test_stable_across_serialization(self):
        m = generals_actionstamped_model()
        fingerprint = model_fingerprint(m)
        assert fingerprint.startswith("M")
        assert model_fingerprint(loads_model(dumps_model(m))) == fingerprint

    def test_differs_on_change(self):
        assert model_fingerprint(generals_actionstamped_model()) != model_fingerprint(
            generals_actionstamped_model(y_doubts_west=True)
        )

    def test_decode(self):
        digest = decode_fingerprint(model_fingerprint(generals_actionstamped_model()))
        assert len(digest) == 32

    def test_decode_rejects_garbage(self):
        with self.assertRaises(ValueError):
            decode_fingerprint("P12345")
        fingerprint = model_fingerprint(generals_actionstamped_model())
        tampered = fingerprint[:-1] + ("1" if fingerprint[-1] != "1" else "2")
        with self.assertRaises(ValueError):
            decode_fingerprint(tampered)
        with self.assertRaises(ValueError):
            decode_fingerprint("M" + base58.b58encode_check(b"\x05" + bytes(32)).decode())

    def test_matches(self):
        m = generals_actionstamped_model()
        fingerprint = model_fingerprint(m)
        assert fingerprint_matches(loads_model(dumps_model(m)), fingerprint)
        assert not fingerprint_matches(generals_actionstamped_model(y_doubts_west=True), fingerprint)
        with self.assertRaises(ValueError):
            fingerprint_matches(m, fingerprint[1:])
