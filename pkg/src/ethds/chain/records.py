"""Account, transaction, receipt and block-header records with their RLP forms."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .. import rlp
from ..keccak import EMPTY_HASH, keccak256
from ..rlp import bytes_to_int, int_to_bytes
from ..trie import EMPTY_ROOT
from .bloom import BLOOM_BYTES, EMPTY_BLOOM, Bloom

ZERO_HASH = bytes(32)
ZERO_ADDRESS = bytes(20)


class RecordError(ValueError):
    """A record violates its shape rules or has a malformed encoding."""


def _check_len(name: str, value: bytes, n: int) -> None:
    if len(value) != n:
        raise RecordError("%s must be %d bytes, got %d" % (name, n, len(value)))


def _check_uint(name: str, value: int) -> None:
    if value < 0:
        raise RecordError("%s must be non-negative" % name)


def _fields(item, n: int, what: str) -> list:
    if not isinstance(item, list) or len(item) != n:
        raise RecordError("%s must be an RLP list of %d items" % (what, n))
    return item


def _int(b) -> int:
    if not isinstance(b, bytes):
        raise RecordError("expected an integer byte string")
    try:
        return bytes_to_int(b)
    except rlp.RLPError as exc:
        raise RecordError(str(exc)) from exc


def _bytes(b, n: int | None = None) -> bytes:
    if not isinstance(b, bytes):
        raise RecordError("expected a byte string")
    if n is not None:
        _check_len("field", b, n)
    return b


def _decode(data: bytes):
    try:
        return rlp.decode(data)
    except rlp.RLPError as exc:
        raise RecordError("malformed RLP: %s" % exc) from exc


@dataclass(frozen=True)
class Account:
    nonce: int = 0
    balance: int = 0
    storage_root: bytes = EMPTY_ROOT
    code_hash: bytes = EMPTY_HASH

    def __post_init__(self):
        _check_uint("nonce", self.nonce)
        _check_uint("balance", self.balance)
        _check_len("storage_root", self.storage_root, 32)
        _check_len("code_hash", self.code_hash, 32)

    @property
    def is_external(self) -> bool:
        return self.storage_root == EMPTY_ROOT and self.code_hash == EMPTY_HASH

    def to_rlp(self) -> list:
        return [int_to_bytes(self.nonce), int_to_bytes(self.balance), self.storage_root, self.code_hash]

    def encode(self) -> bytes:
        return rlp.encode(self.to_rlp())

    @classmethod
    def decode(cls, data: bytes) -> "Account":
        nonce, balance, root, code = _fields(_decode(data), 4, "account")
        return cls(_int(nonce), _int(balance), _bytes(root, 32), _bytes(code, 32))


class TxKind(enum.Enum):
    TRANSFER = "transfer"
    CREATE = "create"
    CALL = "call"


@dataclass(frozen=True)
class Transaction:
    """
    A transaction. ``v``, ``r`` and ``s`` are carried opaquely; ``sender`` is
    explicit because signatures are never checked or recovered here.
    """

    nonce: int
    sender: bytes
    to: bytes = b""
    value: int = 0
    gas_price: int = 0
    gas_limit: int = 21000
    init: bytes = b""
    data: bytes = b""
    v: int = 0
    r: int = 0
    s: int = 0

    def __post_init__(self):
        for name in ("nonce", "value", "gas_price", "gas_limit", "v", "r", "s"):
            _check_uint(name, getattr(self, name))
        if self.v > 0xFF:
            raise RecordError("v must fit in one byte")
        if self.r >= 2**256 or self.s >= 2**256:
            raise RecordError("r and s must fit in 32 bytes")
        _check_len("sender", self.sender, 20)
        if self.to:
            _check_len("to", self.to, 20)
        self.kind  # validates the field combination

    @property
    def kind(self) -> TxKind:
        if not self.to:
            if self.init and not self.data:
                return TxKind.CREATE
        elif not self.init:
            return TxKind.CALL if self.data else TxKind.TRANSFER
        raise RecordError("transaction fields match none of transfer, creation or call")

    def to_rlp(self) -> list:
        return [
            int_to_bytes(self.nonce), int_to_bytes(self.gas_price), int_to_bytes(self.gas_limit),
            self.to, int_to_bytes(self.value), self.init, self.data,
            int_to_bytes(self.v), int_to_bytes(self.r), int_to_bytes(self.s), self.sender,
        ]

    def encode(self) -> bytes:
        return rlp.encode(self.to_rlp())

    @classmethod
    def from_rlp(cls, item) -> "Transaction":
        f = _fields(item, 11, "transaction")
        return cls(
            nonce=_int(f[0]), gas_price=_int(f[1]), gas_limit=_int(f[2]), to=_bytes(f[3]),
            value=_int(f[4]), init=_bytes(f[5]), data=_bytes(f[6]), v=_int(f[7]),
            r=_int(f[8]), s=_int(f[9]), sender=_bytes(f[10], 20),
        )

    @classmethod
    def decode(cls, data: bytes) -> "Transaction":
        return cls.from_rlp(_decode(data))

    @property
    def hash(self) -> bytes:
        return keccak256(self.encode())


@dataclass(frozen=True)
class LogEntry:
    address: bytes
    topics: tuple[bytes, ...] = ()
    data: bytes = b""

    def __post_init__(self):
        _check_len("address", self.address, 20)
        if len(self.topics) > 4:
            raise RecordError("at most four topics per log entry")
        for t in self.topics:
            _check_len("topic", t, 32)

    def to_rlp(self) -> list:
        return [self.address, list(self.topics), self.data]

    @classmethod
    def from_rlp(cls, item) -> "LogEntry":
        address, topics, data = _fields(item, 3, "log entry")
        if not isinstance(topics, list):
            raise RecordError("log topics must be a list")
        return cls(_bytes(address, 20), tuple(_bytes(t, 32) for t in topics), _bytes(data))


@dataclass(frozen=True)
class Receipt:
    cumulative_gas_used: int
    logs: tuple[LogEntry, ...] = ()
    bloom: Bloom = EMPTY_BLOOM
    status: int = 1

    def to_rlp(self) -> list:
        return [
            int_to_bytes(self.cumulative_gas_used),
            [log.to_rlp() for log in self.logs],
            bytes(self.bloom),
            int_to_bytes(self.status),
        ]

    def encode(self) -> bytes:
        return rlp.encode(self.to_rlp())

    @classmethod
    def decode(cls, data: bytes) -> "Receipt":
        gas, logs, bloom, status = _fields(_decode(data), 4, "receipt")
        if not isinstance(logs, list):
            raise RecordError("receipt logs must be a list")
        return cls(_int(gas), tuple(LogEntry.from_rlp(x) for x in logs),
                   Bloom(_bytes(bloom, BLOOM_BYTES)), _int(status))


HEADER_FIELDS = (
    "parent_hash", "ommers_hash", "beneficiary", "state_root", "receipts_root",
    "transactions_root", "logs_bloom", "difficulty", "number", "gas_limit",
    "gas_used", "extra_data", "mix_hash", "nonce",
)
_HEADER_INTS = {"difficulty", "number", "gas_limit", "gas_used"}


@dataclass(frozen=True)
class BlockHeader:
    parent_hash: bytes = ZERO_HASH
    ommers_hash: bytes = field(default_factory=lambda: keccak256(rlp.encode([])))
    beneficiary: bytes = ZERO_ADDRESS
    state_root: bytes = EMPTY_ROOT
    receipts_root: bytes = EMPTY_ROOT
    transactions_root: bytes = EMPTY_ROOT
    logs_bloom: Bloom = EMPTY_BLOOM
    difficulty: int = 0
    number: int = 0
    gas_limit: int = 0
    gas_used: int = 0
    extra_data: bytes = b""
    mix_hash: bytes = ZERO_HASH
    nonce: bytes = bytes(8)

    def __post_init__(self):
        for name in ("parent_hash", "ommers_hash", "state_root", "receipts_root",
                     "transactions_root", "mix_hash"):
            _check_len(name, getattr(self, name), 32)
        _check_len("beneficiary", self.beneficiary, 20)
        _check_len("nonce", self.nonce, 8)
        for name in _HEADER_INTS:
            _check_uint(name, getattr(self, name))
        if len(self.extra_data) > 32:
            raise RecordError("extra_data is limited to 32 bytes")

    def to_rlp(self) -> list:
        out = []
        for name in HEADER_FIELDS:
            v = getattr(self, name)
            if name in _HEADER_INTS:
                v = int_to_bytes(v)
            elif name == "logs_bloom":
                v = bytes(v)
            out.append(v)
        return out

    def encode(self) -> bytes:
        return rlp.encode(self.to_rlp())

    @classmethod
    def from_rlp(cls, item) -> "BlockHeader":
        f = _fields(item, len(HEADER_FIELDS), "header")
        kw = {}
        for name, v in zip(HEADER_FIELDS, f):
            if name in _HEADER_INTS:
                kw[name] = _int(v)
            elif name == "logs_bloom":
                kw[name] = Bloom(_bytes(v, BLOOM_BYTES))
            else:
                kw[name] = _bytes(v)
        return cls(**kw)

    @classmethod
    def decode(cls, data: bytes) -> "BlockHeader":
        return cls.from_rlp(_decode(data))

    @property
    def hash(self) -> bytes:
        return keccak256(self.encode())


def ommers_hash(ommers) -> bytes:
    return keccak256(rlp.encode([h.to_rlp() for h in ommers]))


@dataclass(frozen=True)
class Block:
    header: BlockHeader
    transactions: tuple[Transaction, ...] = ()
    ommers: tuple[BlockHeader, ...] = ()

    @property
    def hash(self) -> bytes:
        return self.header.hash
