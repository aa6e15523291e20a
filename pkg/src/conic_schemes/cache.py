"""On-disk cache of configurations: binary id matrix plus a JSON descriptor.

Binary layout (little endian)::

    magic   8 bytes  b"CONICCC\\x01"
    header  struct "<IQ16sII": q, polynomial mask, variant, n, rank
    fibre   n x int8
    ids     n*n x uint16, row major

The descriptor stores the relation table and a sha256 of the id matrix.
Writers hold a lock file next to the binary.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from pathlib import Path

import numpy as np
from filelock import FileLock

from . import __version__
from .coherent import CoherentConfiguration, Relation

__all__ = ["CacheError", "cache_dir", "cache_key", "save", "load", "clean"]

MAGIC = b"CONICCC\x01"
HEADER = struct.Struct("<IQ16sII")
ENV = "CONIC_SCHEMES_CACHE"


class CacheError(RuntimeError):
    """Corrupt or mismatching cache entry."""


def cache_dir(override: str | os.PathLike | None = None) -> Path:
    if override is not None:
        path = Path(override)
    elif os.environ.get(ENV):
        path = Path(os.environ[ENV])
    else:
        path = Path.home() / ".cache" / "conic_schemes"
    path.mkdir(parents=True, exist_ok=True)
    return path


def cache_key(q: int, poly_mask: int, variant: str) -> str:
    return f"{variant}-q{q}-p{poly_mask:x}-v{__version__}"


def _checksum(ids: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(ids, dtype="<u2").tobytes()).hexdigest()


def _encode_label(label):
    return label if isinstance(label, str) else int(label)


def save(cc: CoherentConfiguration, q: int, poly_mask: int, variant: str,
         directory: str | os.PathLike | None = None) -> Path:
    base = cache_dir(directory) / cache_key(q, poly_mask, variant)
    binp, descp = Path(f"{base}.bin"), Path(f"{base}.json")
    desc = {
        "format": 1,
        "version": __version__,
        "name": cc.name,
        "q": q,
        "poly_mask": poly_mask,
        "variant": variant,
        "n": cc.n,
        "sha256": _checksum(cc.ids),
        "relations": [
            {"id": r.id, "label": _encode_label(r.label), "eps": r.eps, "phi": r.phi, "size": r.size}
            for r in cc.relations
        ],
        "lines": [list(map(int, c)) for c in cc.lines] if cc.lines is not None else None,
    }
    with FileLock(str(base) + ".lock"):
        tmp = Path(f"{base}.bin.tmp")
        with open(tmp, "wb") as fh:
            fh.write(MAGIC)
            fh.write(HEADER.pack(q, poly_mask, variant.encode()[:16], cc.n, cc.rank))
            fh.write(np.ascontiguousarray(cc.fibre, dtype=np.int8).tobytes())
            fh.write(np.ascontiguousarray(cc.ids, dtype="<u2").tobytes())
        os.replace(tmp, binp)
        descp.write_text(json.dumps(desc, sort_keys=True, ensure_ascii=False), encoding="utf-8")
    return binp


def load(q: int, poly_mask: int, variant: str, directory: str | os.PathLike | None = None,
         ctx=None) -> CoherentConfiguration | None:
    """The cached configuration, None if absent; CacheError if corrupt."""
    base = cache_dir(directory) / cache_key(q, poly_mask, variant)
    binp, descp = Path(f"{base}.bin"), Path(f"{base}.json")
    if not binp.exists() or not descp.exists():
        return None
    with FileLock(str(base) + ".lock"):
        raw = binp.read_bytes()
        desc = json.loads(descp.read_text(encoding="utf-8"))
    if raw[:8] != MAGIC:
        raise CacheError(f"{binp}: bad magic")
    hq, hmask, hvar, n, rank = HEADER.unpack_from(raw, 8)
    if (hq, hmask, hvar.rstrip(b"\0").decode()) != (q, poly_mask, variant[:16]):
        raise CacheError(f"{binp}: header does not match the requested key")
    off = 8 + HEADER.size
    expected = off + n + 2 * n * n
    if len(raw) != expected:
        raise CacheError(f"{binp}: truncated ({len(raw)} of {expected} bytes)")
    fibre = np.frombuffer(raw, dtype=np.int8, count=n, offset=off).copy()
    ids = np.frombuffer(raw, dtype="<u2", count=n * n, offset=off + n).reshape(n, n).astype(np.uint16)
    if _checksum(ids) != desc["sha256"]:
        raise CacheError(f"{binp}: checksum mismatch")
    rels = [Relation(r["id"], r["label"], r["eps"], r["phi"], r["size"]) for r in desc["relations"]]
    if len(rels) != rank:
        raise CacheError(f"{binp}: relation table has {len(rels)} entries, header says {rank}")
    lines = [tuple(c) for c in desc["lines"]] if desc.get("lines") is not None else None
    return CoherentConfiguration(ids, fibre, rels, name=desc["name"], ctx=ctx, lines=lines)


def clean(directory: str | os.PathLike | None = None) -> int:
    """Remove cache files; returns how many were deleted."""
    d = cache_dir(directory)
    count = 0
    for p in d.glob("*-q*-p*-v*"):
        if p.is_file():
            p.unlink()
            count += 1
    return count
