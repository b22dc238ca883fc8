"""Deterministic derivation of independent RNG streams.

Every random decision in the package is drawn from a stream derived from
(master_seed, label). The derivation is a pure function: the label is
hashed with SHA-256 together with the master seed, and the first 8 bytes
of the digest (big-endian) key a Philox4x64 counter-based generator with
the counter starting at zero. Philox output is bit-reproducible across
platforms and numpy versions, and distinct labels give statistically
independent streams, so results do not depend on scheduling or worker
count.

Canonical labels follow the template

    size=<int>/instance=<int>/run=<int>/alg=<name>/purpose=<name>

with "-" for fields that do not apply.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_seed", "derive_stream", "make_label"]


def make_label(
    *,
    size: int | None = None,
    instance: int | None = None,
    run: int | None = None,
    alg: str | None = None,
    purpose: str,
) -> str:
    """Build a canonical stream label; omitted fields render as '-'."""
    fields = [
        f"size={'-' if size is None else size}",
        f"instance={'-' if instance is None else instance}",
        f"run={'-' if run is None else run}",
        f"alg={'-' if alg is None else alg}",
        f"purpose={purpose}",
    ]
    return "/".join(fields)


def derive_seed(master_seed: int, label: str) -> int:
    """First 8 bytes (big-endian) of SHA-256(master_seed | label)."""
    digest = hashlib.sha256(f"{master_seed}|{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_stream(master_seed: int, label: str) -> np.random.Generator:
    """Independent Philox stream for (master_seed, label)."""
    return np.random.Generator(np.random.Philox(key=derive_seed(master_seed, label)))
