from __future__ import annotations

import hashlib
import logging
import secrets
from typing import Optional

logger = logging.getLogger(__name__)


def derive_seed(base: int, *parts: object) -> int:
    """Stable 64-bit seed for one cell of an experiment.

    The value depends only on ``base`` and ``parts``, never on the order in
    which cells are executed.
    """
    payload = "\x1f".join(str(part) for part in (base, *parts)).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    seed = secrets.randbits(63)
    logger.warning("no --seed given, using %d", seed)
    return seed
