"""On-disk index container shared by every back-end.

Layout (little-endian): magic ``JPMX``, u16 format version, one backend tag
byte, u32 record count, then per record a length-prefixed UTF-8 name and a
length-prefixed payload produced by the back-end's own ``to_bytes``. Multiple
records support per-record FASTA indexing. A version or magic mismatch fails
loudly; nothing is parsed best-effort.
"""

from __future__ import annotations

import struct

MAGIC = b"JPMX"
FORMAT_VERSION = 1

BACKEND_TAGS = {"table": b"T", "wavelet": b"W", "interval": b"V"}
TAG_BACKENDS = {v: k for k, v in BACKEND_TAGS.items()}


def dump_index(path, backend: str, records: list[tuple[str, bytes]]) -> None:
    if backend not in BACKEND_TAGS:
        raise ValueError(f"unknown backend {backend!r}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<H", FORMAT_VERSION))
        fh.write(BACKEND_TAGS[backend])
        fh.write(struct.pack("<I", len(records)))
        for name, payload in records:
            raw = name.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<Q", len(payload)))
            fh.write(payload)


def load_index(path) -> tuple[str, list[tuple[str, bytes]]]:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise ValueError("not an index file (bad magic)")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != FORMAT_VERSION:
        raise ValueError(
            f"index format version {version} is not supported (expected {FORMAT_VERSION})")
    tag = data[6:7]
    if tag not in TAG_BACKENDS:
        raise ValueError(f"unknown backend tag {tag!r}")
    (count,) = struct.unpack_from("<I", data, 7)
    pos = 11
    records = []
    for _ in range(count):
        (nlen,) = struct.unpack_from("<H", data, pos)
        pos += 2
        name = data[pos:pos + nlen].decode("utf-8")
        pos += nlen
        (plen,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        records.append((name, data[pos:pos + plen]))
        pos += plen
    return TAG_BACKENDS[tag], records
