"""Deterministic seed derivation.

Every random choice in the package flows from one root seed.  Derived
seeds are the first 8 bytes of a BLAKE2b hash over the root and a path
of context parts, so independent consumers (modules, ensemble samples)
get decorrelated streams while runs stay exactly reproducible.
"""

from __future__ import annotations

import hashlib


def derive_seed(root: int, *parts: object) -> int:
    """A 64-bit seed for the stream identified by ``root`` and ``parts``."""
    text = ":".join([str(root), *(str(part) for part in parts)])
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")
