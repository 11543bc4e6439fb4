"""
Content-addressed node storage: every value lives under its Keccak digest.

Two backends share one interface. ``MemoryStore`` keeps a dict;
``FileStore`` appends records to a log file of the form::

    4-byte big-endian value length | 32-byte key | value

and rebuilds an in-memory offset index when opened.
"""
from __future__ import annotations

import os
import struct
import threading
from typing import Iterator, Optional

from .keccak import keccak256

_HEADER = struct.Struct(">I32s")


class StoreError(Exception):
    pass


class CorruptionError(StoreError):
    """A stored value no longer hashes to its key."""


class MemoryStore:
    backend = "memory"

    def __init__(self) -> None:
        self._data: dict[bytes, bytes] = {}
        self._lock = threading.Lock()

    def put(self, value: bytes) -> bytes:
        value = bytes(value)
        key = keccak256(value)
        with self._lock:
            self._data.setdefault(key, value)
        return key

    def get(self, key: bytes) -> Optional[bytes]:
        value = self._data.get(bytes(key))
        if value is None:
            return None
        if keccak256(value) != key:
            raise CorruptionError("value under %s fails its hash check" % key.hex())
        return value

    def flush(self) -> None:
        pass

    def close(self) -> None:
        pass

    def __contains__(self, key: bytes) -> bool:
        return bytes(key) in self._data

    def __len__(self) -> int:
        return len(self._data)

    def keys(self) -> Iterator[bytes]:
        return iter(list(self._data))

    def __enter__(self):
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class FileStore(MemoryStore):
    backend = "file"

    def __init__(self, path: str | os.PathLike) -> None:
        super().__init__()
        self.path = os.fspath(path)
        self._index: dict[bytes, tuple[int, int]] = {}
        self._load()
        self._fh = open(self.path, "ab")

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path, "rb") as fh:
            blob = fh.read()
        pos = 0
        prev_bad = False
        while pos < len(blob):
            rec = _parse_record(blob, pos)
            if rec is None:
                break
            key, start, length = rec
            end = start + length
            bad = keccak256(blob[start:end]) != key
            if bad and (prev_bad or _find_record(blob[:end], pos + 1) is not None):
                # a bad record that swallows good ones: the length field is wrong
                raise StoreError("corrupt record framing at offset %d in %s" % (pos, self.path))
            prev_bad = bad
            self._index[key] = (start, length)
            self._data[key] = blob[start:end]
            pos = end
        if pos < len(blob):
            if prev_bad or _find_record(blob, pos + 1) is not None:
                raise StoreError("unreadable record at offset %d in %s" % (pos, self.path))
            # torn tail from an interrupted append
            with open(self.path, "r+b") as fh:
                fh.truncate(pos)

    def put(self, value: bytes) -> bytes:
        value = bytes(value)
        key = keccak256(value)
        with self._lock:
            if key in self._data:
                return key
            self._fh.write(_HEADER.pack(len(value), key))
            start = self._fh.tell()
            self._fh.write(value)
            self._index[key] = (start, len(value))
            self._data[key] = value
        return key

    def flush(self) -> None:
        with self._lock:
            self._fh.flush()
            os.fsync(self._fh.fileno())

    def close(self) -> None:
        if not self._fh.closed:
            self.flush()
            self._fh.close()


def _parse_record(blob: bytes, pos: int) -> Optional[tuple[bytes, int, int]]:
    if pos + _HEADER.size > len(blob):
        return None
    length, key = _HEADER.unpack_from(blob, pos)
    start = pos + _HEADER.size
    if start + length > len(blob):
        return None
    return key, start, length


def _find_record(blob: bytes, pos: int) -> Optional[int]:
    """Offset of the first complete record at or after ``pos`` whose hash checks."""
    for p in range(pos, len(blob) - _HEADER.size + 1):
        rec = _parse_record(blob, p)
        if rec is not None and keccak256(blob[rec[1]:rec[1] + rec[2]]) == rec[0]:
            return p
    return None


def open_store(path: str | os.PathLike | None = None) -> MemoryStore:
    """Open a file-backed store at ``path``, or a fresh memory store."""
    return MemoryStore() if path is None else FileStore(path)
