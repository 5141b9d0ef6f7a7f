from .fingerprint import model_fingerprint, decode_fingerprint, fingerprint_matches
