"""
JSON forms of chains. All scalars and byte strings are ``0x``-hex.

A *description* lists genesis allocations and unsealed transaction batches::

    {"alloc": {"0x<addr>": {"balance": "0x64", "nonce": "0x0"}},
     "blocks": [{"beneficiary": "0x<addr>", "transactions": [<tx>, ...]}]}

A *sealed chain* has the same ``alloc`` plus full blocks, genesis first::

    {"alloc": {...}, "blocks": [{"header": {...}, "transactions": [...], "ommers": [...]}]}
"""
from __future__ import annotations

from typing import Any, Optional

from ..secure import SecureTrie
from ..store import MemoryStore
from .bloom import Bloom
from .block import genesis_block, seal_block
from .records import HEADER_FIELDS, Account, Block, BlockHeader, Transaction
from .state import state_put


class FixtureError(ValueError):
    pass


def to_hex(b: bytes) -> str:
    return "0x" + bytes(b).hex()


def from_hex(s: str) -> bytes:
    if not isinstance(s, str) or not s.startswith("0x"):
        raise FixtureError("expected 0x-prefixed hex, got %r" % (s,))
    try:
        return bytes.fromhex(s[2:])
    except ValueError as exc:
        raise FixtureError("bad hex %r" % s) from exc


def hex_int(n: int) -> str:
    return hex(n)


def parse_int(s: Any) -> int:
    if isinstance(s, int):
        return s
    if not isinstance(s, str) or not s.startswith("0x"):
        raise FixtureError("expected 0x-hex integer, got %r" % (s,))
    return int(s, 16) if len(s) > 2 else 0


_TX_KEYS = {
    "nonce": "nonce", "sender": "sender", "to": "to", "value": "value",
    "gasPrice": "gas_price", "gasLimit": "gas_limit", "init": "init", "data": "data",
    "v": "v", "r": "r", "s": "s",
}
_TX_BYTES = {"sender", "to", "init", "data"}

_HEADER_KEYS = dict(zip(
    ("parentHash", "ommersHash", "beneficiary", "stateRoot", "receiptsRoot", "transactionsRoot",
     "logsBloom", "difficulty", "number", "gasLimit", "gasUsed", "extraData", "mixHash", "nonce"),
    HEADER_FIELDS,
))
_HEADER_INTS = {"difficulty", "number", "gas_limit", "gas_used"}


def tx_to_json(tx: Transaction) -> dict:
    out = {}
    for key, attr in _TX_KEYS.items():
        v = getattr(tx, attr)
        out[key] = to_hex(v) if attr in _TX_BYTES else hex_int(v)
    return out


def tx_from_json(obj: dict) -> Transaction:
    kw = {}
    for key, attr in _TX_KEYS.items():
        if key in obj:
            kw[attr] = from_hex(obj[key]) if attr in _TX_BYTES else parse_int(obj[key])
    if "sender" not in kw or "nonce" not in kw:
        raise FixtureError("transaction needs sender and nonce")
    return Transaction(**kw)


def header_to_json(h: BlockHeader) -> dict:
    out = {}
    for key, attr in _HEADER_KEYS.items():
        v = getattr(h, attr)
        out[key] = hex_int(v) if attr in _HEADER_INTS else to_hex(bytes(v))
    return out


def header_from_json(obj: dict) -> BlockHeader:
    kw = {}
    for key, attr in _HEADER_KEYS.items():
        if key not in obj:
            raise FixtureError("header is missing %s" % key)
        if attr in _HEADER_INTS:
            kw[attr] = parse_int(obj[key])
        elif attr == "logs_bloom":
            kw[attr] = Bloom(from_hex(obj[key]))
        else:
            kw[attr] = from_hex(obj[key])
    return BlockHeader(**kw)


def block_to_json(b: Block) -> dict:
    return {
        "hash": to_hex(b.hash),
        "header": header_to_json(b.header),
        "transactions": [tx_to_json(t) for t in b.transactions],
        "ommers": [header_to_json(o) for o in b.ommers],
    }


def block_from_json(obj: dict) -> Block:
    return Block(
        header_from_json(obj["header"]),
        tuple(tx_from_json(t) for t in obj.get("transactions", ())),
        tuple(header_from_json(o) for o in obj.get("ommers", ())),
    )


def alloc_state(alloc: dict, store: Optional[MemoryStore] = None) -> SecureTrie:
    state = SecureTrie(store)
    for addr, acct in sorted(alloc.items()):
        account = Account(parse_int(acct.get("nonce", "0x0")), parse_int(acct.get("balance", "0x0")))
        state = state_put(state, from_hex(addr), account)
    return state


def alloc_to_json(alloc: dict[bytes, Account]) -> dict:
    return {to_hex(a): {"nonce": hex_int(acc.nonce), "balance": hex_int(acc.balance)}
            for a, acc in sorted(alloc.items())}


def seal_description(desc: dict, store: Optional[MemoryStore] = None) -> tuple[dict, SecureTrie]:
    """Seal every batch of a description; returns the sealed-chain JSON and the final state."""
    try:
        state = alloc_state(desc.get("alloc", {}), store)
        blocks = [genesis_block(state)]
        for entry in desc.get("blocks", []):
            txs = [tx_from_json(t) for t in entry.get("transactions", [])]
            beneficiary = from_hex(entry.get("beneficiary", "0x" + "00" * 20))
            block, state = seal_block(blocks[-1].header, txs, state, beneficiary)
            blocks.append(block)
    except (KeyError, TypeError, AttributeError) as exc:
        raise FixtureError("malformed chain description: %s" % exc) from exc
    return {"alloc": desc.get("alloc", {}), "blocks": [block_to_json(b) for b in blocks]}, state


def load_sealed(obj: dict) -> tuple[dict, list[Block]]:
    try:
        return obj.get("alloc", {}), [block_from_json(b) for b in obj["blocks"]]
    except (KeyError, TypeError, AttributeError) as exc:
        raise FixtureError("malformed sealed chain: %s" % exc) from exc


def funding_demo_description() -> dict:
    """Two blocks: account B is funded to 100, then spends down to 20."""
    a, b, c, d = (bytes([i]) * 20 for i in (0xAA, 0xBB, 0xCC, 0xDD))

    def transfer(nonce, src, dst, value):
        return tx_to_json(Transaction(nonce=nonce, sender=src, to=dst, value=value))

    return {
        "alloc": {to_hex(a): {"balance": hex_int(1000), "nonce": "0x0"}},
        "blocks": [
            {"beneficiary": to_hex(c), "transactions": [transfer(0, a, b, 100), transfer(1, a, d, 50)]},
            {"beneficiary": to_hex(c), "transactions": [transfer(0, b, c, 80), transfer(2, a, d, 10)]},
        ],
    }
