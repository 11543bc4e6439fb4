"""
Contract storage layout: where each declared variable lives in 32-byte slots,
and reading/writing slot contents through a storage trie.

Scalars pack low-offset-first into the current slot and spill to the next
slot when they do not fit. Records and fixed arrays start on a fresh slot and
round up to whole slots. Mappings, dynamic arrays and byte strings take one
full slot at their declaration point; their data lives at hashed locations.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Union

from . import rlp
from .keccak import keccak256
from .secure import SecureTrie

SLOT_SIZE = 32
SLOT_MOD = 2**256

_SCALAR_KINDS = {"uint", "int", "bool", "address", "fixed_bytes"}
_FULL_SLOT_KINDS = {"mapping", "dynamic_array", "bytes", "string"}


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str
    width: int = 0  # bits for int/uint, bytes for fixed_bytes
    members: tuple["VarDecl", ...] = ()  # struct members
    element: Optional["VarDecl"] = None  # array element type
    length: int = 0  # fixed array length
    key: Optional["VarDecl"] = None  # mapping key type
    value: Optional["VarDecl"] = None  # mapping value type

    def __post_init__(self):
        k = self.kind
        if k in ("uint", "int"):
            if self.width % 8 or not 8 <= self.width <= 256:
                raise LayoutError("%s: bit width must be a multiple of 8 in 8..256" % self.name)
        elif k == "fixed_bytes":
            if not 1 <= self.width <= 32:
                raise LayoutError("%s: fixed byte run must be 1..32 bytes" % self.name)
        elif k == "struct":
            if not self.members:
                raise LayoutError("%s: empty struct" % self.name)
        elif k == "array":
            if self.element is None or self.length < 1:
                raise LayoutError("%s: fixed array needs an element type and length >= 1" % self.name)
        elif k == "dynamic_array":
            if self.element is None:
                raise LayoutError("%s: dynamic array needs an element type" % self.name)
        elif k == "mapping":
            if self.key is None or self.value is None:
                raise LayoutError("%s: mapping needs key and value types" % self.name)
            if self.key.kind not in _SCALAR_KINDS | {"bytes", "string"}:
                raise LayoutError("%s: unsupported mapping key kind %r" % (self.name, self.key.kind))
        elif k not in ("bool", "address", "bytes", "string"):
            raise LayoutError("%s: unknown kind %r" % (self.name, k))

    @property
    def byte_size(self) -> int:
        """Bytes occupied by one scalar, or ``32 * slots`` for everything else."""
        k = self.kind
        if k in ("uint", "int"):
            return self.width // 8
        if k == "fixed_bytes":
            return self.width
        if k == "bool":
            return 1
        if k == "address":
            return 20
        return SLOT_SIZE * self.slot_count

    @property
    def is_scalar(self) -> bool:
        return self.kind in _SCALAR_KINDS

    @property
    def slot_count(self) -> int:
        if self.is_scalar or self.kind in _FULL_SLOT_KINDS:
            return 1
        return len({a.slot for a in _layout(self._inner_decls(), 0)}) or 1

    def _inner_decls(self) -> list["VarDecl"]:
        if self.kind == "struct":
            return list(self.members)
        return [replace(self.element, name="[%d]" % i) for i in range(self.length)]

    @classmethod
    def from_json(cls, obj: dict) -> "VarDecl":
        try:
            name = obj.get("name", "")
            kind = obj["kind"]
            elements = obj.get("elements")
            kw: dict = {"width": int(obj.get("width", 0))}
            if kind == "struct":
                kw["members"] = tuple(cls.from_json(m) for m in elements or ())
            elif kind in ("array", "dynamic_array"):
                kw["element"] = cls.from_json(obj["element"])
                if kind == "array":
                    kw["length"] = int(elements)
            elif kind == "mapping":
                kw["key"] = cls.from_json(obj["key"])
                kw["value"] = cls.from_json(obj["value"])
        except (KeyError, TypeError) as exc:
            raise LayoutError("bad declaration %r: %s" % (obj, exc)) from exc
        return cls(name, kind, **kw)


@dataclass(frozen=True)
class SlotAssignment:
    name: str
    slot: int
    offset: int
    length: int

    def to_json(self) -> dict:
        return {"name": self.name, "slot": hex(self.slot), "offset": self.offset, "length": self.length}


def _layout(decls: Iterable[VarDecl], base: int, prefix: str = "") -> list[SlotAssignment]:
    out: list[SlotAssignment] = []
    slot, offset = base, 0
    for d in decls:
        name = prefix + d.name
        if d.is_scalar:
            size = d.byte_size
            if offset + size > SLOT_SIZE:
                slot, offset = slot + 1, 0
            out.append(SlotAssignment(name, slot, offset, size))
            offset += size
            continue
        if offset:
            slot, offset = slot + 1, 0
        if d.kind in _FULL_SLOT_KINDS:
            out.append(SlotAssignment(name, slot, 0, SLOT_SIZE))
            slot += 1
            continue
        sep = "" if d.kind == "array" else "."
        inner = _layout(d._inner_decls(), slot, name + sep)
        out.extend(inner)
        slot = max(a.slot for a in inner) + 1
    return out


def layout_static(decls: Iterable[VarDecl], base: int = 0) -> list[SlotAssignment]:
    """Assign slots to ``decls`` in declaration order, starting at slot ``base``."""
    return _layout(list(decls), base)


def layout_contract(*levels: Iterable[VarDecl]) -> list[SlotAssignment]:
    """Layout for an inheritance chain, most basic contract first."""
    decls: list[VarDecl] = []
    for level in levels:
        decls.extend(level)
    return _layout(decls, 0)


def pad32(value: Union[int, bytes]) -> bytes:
    if isinstance(value, int):
        if not 0 <= value < SLOT_MOD:
            raise ValueError("slot operand out of range")
        return value.to_bytes(32, "big")
    value = bytes(value)
    if len(value) > 32:
        raise ValueError("operand longer than 32 bytes")
    return value.rjust(32, b"\x00")


def map_value_slot(map_slot: int, key: Union[int, bytes]) -> int:
    return int.from_bytes(keccak256(pad32(key) + pad32(map_slot)), "big")


def dyn_array_base(array_slot: int) -> int:
    return int.from_bytes(keccak256(pad32(array_slot)), "big")


def dyn_array_slot(array_slot: int, elem_byte_size: int, index: int) -> SlotAssignment:
    """Location of element ``index`` of the dynamic array declared at ``array_slot``."""
    if not 1 <= elem_byte_size <= SLOT_SIZE:
        raise LayoutError("element width must be 1..32 bytes")
    per_slot = SLOT_SIZE // elem_byte_size
    slot = (dyn_array_base(array_slot) + index // per_slot) % SLOT_MOD
    return SlotAssignment("[%d]" % index, slot, (index % per_slot) * elem_byte_size, elem_byte_size)


def short_bytes_encode(data: bytes) -> bytes:
    if len(data) > 31:
        raise LayoutError("byte strings of 32 bytes or more use the dynamic array form")
    return bytes(data).ljust(31, b"\x00") + bytes([len(data)])


def short_bytes_decode(content: bytes) -> bytes:
    if len(content) != 32 or content[31] > 31:
        raise LayoutError("not a short byte-string slot")
    return content[: content[31]]


def slot_write(storage: SecureTrie, index: int, content: bytes) -> SecureTrie:
    """Bind slot ``index`` to ``content``; all-zero content removes the binding."""
    if len(content) != SLOT_SIZE:
        raise LayoutError("slot content must be exactly 32 bytes")
    stripped = bytes(content).lstrip(b"\x00")
    if not stripped:
        return storage.delete(pad32(index))
    return storage.insert(pad32(index), rlp.encode(stripped))


def slot_read(storage: SecureTrie, index: int) -> bytes:
    raw = storage.get(pad32(index))
    if raw is None:
        return bytes(SLOT_SIZE)
    value = rlp.decode(raw)
    if not isinstance(value, bytes) or len(value) > SLOT_SIZE:
        raise LayoutError("stored slot value is not a byte string of at most 32 bytes")
    return value.rjust(SLOT_SIZE, b"\x00")
