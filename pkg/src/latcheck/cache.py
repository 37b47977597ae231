"""Binary lattice cache.

Record layout (all integers little-endian)::

    magic   b"LATC"
    version u8
    spec    u32 length + UTF-8 canonical spec text
    order   u64 group order
    count   u64 number of subgroups
    count x { u32 nwords, nwords x u64 bitset words, u32 ngens, ngens x u32 generator IDs }
    covers  u8 flag; if 1: count x { u32 k, k x u32 upper-cover IDs }
    digest  32-byte SHA-256 of everything above

Records are keyed by the SHA-256 of the canonical spec text and written
atomically (temp file + rename).  Anything that fails validation is
discarded with a warning and the lattice is recomputed.
"""

from __future__ import annotations

import hashlib
import io
import logging
import os
import struct
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

from .group import FiniteGroup, SubgroupSet, closure, mask_to_bits
from .groupspec import canonical
from .lattice import LatticeError, SubgroupLattice, enumerate_subgroups

logger = logging.getLogger(__name__)

MAGIC = b"LATC"
VERSION = 1
ENV_VAR = "LATCHECK_CACHE"


class CacheError(ValueError):
    pass


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "latcheck"


def cache_key(spec: str) -> str:
    return hashlib.sha256(canonical(spec).encode()).hexdigest()


def record_path(spec: str, cache_dir: Path) -> Path:
    return Path(cache_dir) / f"{cache_key(spec)}.latc"


def encode_record(spec: str, lat: SubgroupLattice, covers: bool = True,
                  version: int = VERSION) -> bytes:
    buf = io.BytesIO()
    text = canonical(spec).encode()
    buf.write(MAGIC)
    buf.write(struct.pack("<B", version))
    buf.write(struct.pack("<I", len(text)))
    buf.write(text)
    buf.write(struct.pack("<QQ", lat.group.order, len(lat)))
    nwords = (lat.group.order + 63) // 64
    for sub in lat.subgroups:
        words = np.frombuffer(sub.bits.to_bytes(nwords * 8, "little"), dtype="<u8")
        buf.write(struct.pack("<I", nwords))
        buf.write(words.tobytes())
        buf.write(struct.pack("<I", len(sub.gens)))
        buf.write(np.array(sub.gens, dtype="<u4").tobytes())
    buf.write(struct.pack("<B", 1 if covers else 0))
    if covers:
        for ys in lat.upper_covers:
            buf.write(struct.pack("<I", len(ys)))
            buf.write(np.array(ys, dtype="<u4").tobytes())
    payload = buf.getvalue()
    return payload + hashlib.sha256(payload).digest()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CacheError("truncated record")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def decode_record(data: bytes, spec: str, group: FiniteGroup) -> SubgroupLattice:
    """Parse and validate a record against ``group``; raises CacheError on any mismatch."""
    if len(data) < 32 or hashlib.sha256(data[:-32]).digest() != data[-32:]:
        raise CacheError("checksum mismatch")
    r = _Reader(data[:-32])
    if r.take(4) != MAGIC:
        raise CacheError("bad magic")
    (version,) = r.unpack("<B")
    if version != VERSION:
        raise CacheError(f"record version {version}, expected {VERSION}")
    (length,) = r.unpack("<I")
    if r.take(length).decode() != canonical(spec):
        raise CacheError("spec text mismatch")
    order, count = r.unpack("<QQ")
    if order != group.order:
        raise CacheError("group order mismatch")
    subs = []
    for _ in range(count):
        (nwords,) = r.unpack("<I")
        bits = int.from_bytes(r.take(8 * nwords), "little")
        (ngens,) = r.unpack("<I")
        gens = tuple(int(g) for g in np.frombuffer(r.take(4 * ngens), dtype="<u4"))
        if bits >> order or any(g >= order for g in gens):
            raise CacheError("bitset outside the group")
        start = np.zeros(order, dtype=bool)
        if mask_to_bits(closure(group, start, gens)) != bits:
            raise CacheError("stored generators do not generate the stored bitset")
        size = bin(bits).count("1")
        if order % size:
            raise CacheError("subgroup order does not divide |G|")
        subs.append(SubgroupSet(bits, size, gens))
    (has_covers,) = r.unpack("<B")
    stored_covers = None
    if has_covers:
        stored_covers = []
        for _ in range(count):
            (k,) = r.unpack("<I")
            stored_covers.append([int(y) for y in np.frombuffer(r.take(4 * k), dtype="<u4")])
    if r.pos != len(r.data):
        raise CacheError("trailing bytes in record")
    lat = SubgroupLattice(group, subs)
    if [s.bits for s in lat.subgroups] != [s.bits for s in subs]:
        raise CacheError("stored subgroups are not in canonical order")
    if stored_covers is not None and stored_covers != lat.upper_covers:
        raise CacheError("stored covers disagree with recomputed covers")
    return lat


def cache_store(lat: SubgroupLattice, spec: str, cache_dir: Optional[Path] = None) -> Path:
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = record_path(spec, cache_dir)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".tmp-", suffix=".latc")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(encode_record(spec, lat))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def cache_load(spec: str, group: FiniteGroup, cache_dir: Optional[Path] = None) -> Optional[SubgroupLattice]:
    """Cached lattice for ``spec`` or None on a miss or an invalid record."""
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = record_path(spec, cache_dir)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        return None
    except OSError as exc:
        logger.warning("cannot read cache record %s: %s", path, exc)
        return None
    try:
        return decode_record(data, spec, group)
    except (CacheError, LatticeError, UnicodeDecodeError, ValueError) as exc:
        logger.warning("discarding cache record %s: %s", path, exc)
        return None


def load_or_build(spec: str, group: FiniteGroup, cache_dir: Optional[Path] = None,
                  **enumerate_kw) -> SubgroupLattice:
    lat = cache_load(spec, group, cache_dir)
    if lat is not None:
        return lat
    lat = enumerate_subgroups(group, **enumerate_kw)
    try:
        cache_store(lat, spec, cache_dir)
    except OSError as exc:
        logger.warning("cannot write cache record: %s", exc)
    return lat


class CachedLoader:
    """Picklable lattice loader for the verification harness."""

    def __init__(self, cache_dir: Optional[Path] = None):
        self.cache_dir = cache_dir

    def __call__(self, spec: str, group: FiniteGroup, deadline: Optional[float] = None) -> SubgroupLattice:
        return load_or_build(spec, group, self.cache_dir, deadline=deadline)
