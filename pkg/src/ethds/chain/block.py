"""Index tries, block sealing, and replay verification of a chain."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .. import rlp
from ..rlp import int_to_bytes
from ..secure import SecureTrie
from ..store import CorruptionError, MemoryStore
from ..trie import Trie, TrieError
from .bloom import header_bloom
from .records import Block, BlockHeader, RecordError, Receipt, Transaction, ommers_hash
from .state import DEFAULT_TX_GAS, UnknownSenderError, apply_transaction


def _index_trie_root(encodings: Iterable[bytes], store: Optional[MemoryStore] = None) -> bytes:
    trie = Trie(store)
    for i, enc in enumerate(encodings):
        trie = trie.insert(rlp.encode(int_to_bytes(i)), enc)
    return trie.root_hash


def tx_trie_root(txs: Iterable[Transaction], store: Optional[MemoryStore] = None) -> bytes:
    return _index_trie_root((tx.encode() for tx in txs), store)


def receipt_trie_root(receipts: Iterable[Receipt], store: Optional[MemoryStore] = None) -> bytes:
    return _index_trie_root((r.encode() for r in receipts), store)


def genesis_block(state: SecureTrie, gas_limit: int = 30_000_000, extra_data: bytes = b"") -> Block:
    return Block(BlockHeader(state_root=state.root_hash, gas_limit=gas_limit, extra_data=extra_data))


def execute(pre_state: SecureTrie, txs: Iterable[Transaction],
            tx_gas: int = DEFAULT_TX_GAS) -> tuple[SecureTrie, list[Receipt]]:
    state = pre_state
    receipts: list[Receipt] = []
    gas = 0
    for tx in txs:
        state, receipt = apply_transaction(state, tx, gas, tx_gas)
        gas = receipt.cumulative_gas_used
        receipts.append(receipt)
    return state, receipts


def seal_block(parent: BlockHeader, txs: Sequence[Transaction], pre_state: SecureTrie,
               beneficiary: bytes, ommers: Sequence[BlockHeader] = (), *,
               gas_limit: Optional[int] = None, extra_data: bytes = b"",
               tx_gas: int = DEFAULT_TX_GAS) -> tuple[Block, SecureTrie]:
    """
    Execute ``txs`` on ``pre_state`` and build the child block of ``parent``.

    Proof-of-work fields (difficulty, mix hash, nonce) are left zero.
    """
    txs = tuple(txs)
    post_state, receipts = execute(pre_state, txs, tx_gas)
    store = pre_state.store
    header = BlockHeader(
        parent_hash=parent.hash,
        ommers_hash=ommers_hash(ommers),
        beneficiary=beneficiary,
        state_root=post_state.root_hash,
        receipts_root=receipt_trie_root(receipts, store),
        transactions_root=tx_trie_root(txs, store),
        logs_bloom=header_bloom(receipts),
        number=parent.number + 1,
        gas_limit=parent.gas_limit if gas_limit is None else gas_limit,
        gas_used=receipts[-1].cumulative_gas_used if receipts else 0,
        extra_data=extra_data,
    )
    return Block(header, txs, tuple(ommers)), post_state


@dataclass(frozen=True)
class ChainError:
    index: int
    reason: str

    def __str__(self) -> str:
        return "block %d: %s" % (self.index, self.reason)


_REPLAY_ERRORS = (CorruptionError, UnknownSenderError, TrieError, RecordError, rlp.RLPError)


def verify_chain(blocks: Sequence[Block], genesis_state: SecureTrie,
                 final_state: Optional[SecureTrie] = None,
                 tx_gas: int = DEFAULT_TX_GAS) -> Optional[ChainError]:
    """
    Replay ``blocks`` from ``genesis_state`` and return the first inconsistency.

    ``blocks[0]`` is the genesis block. When ``final_state`` is given it must
    match the last header's state root and be fully readable from its store.
    Returns ``None`` when everything checks out.
    """
    if not blocks:
        return ChainError(0, "empty chain")
    genesis = blocks[0].header
    if genesis.number != 0 or blocks[0].transactions:
        return ChainError(0, "first block is not a genesis block")
    if genesis.state_root != genesis_state.root_hash:
        return ChainError(0, "state root mismatch")

    state = genesis_state
    for i in range(1, len(blocks)):
        parent, block = blocks[i - 1].header, blocks[i]
        h = block.header
        if h.parent_hash != parent.hash:
            return ChainError(i, "parent hash mismatch")
        if h.number != parent.number + 1:
            return ChainError(i, "block number %d does not follow %d" % (h.number, parent.number))
        if h.ommers_hash != ommers_hash(block.ommers):
            return ChainError(i, "ommers hash mismatch")
        if h.transactions_root != tx_trie_root(block.transactions):
            return ChainError(i, "transactions root mismatch")
        try:
            state, receipts = execute(state, block.transactions, tx_gas)
        except _REPLAY_ERRORS as exc:
            return ChainError(i, "replay failed: %s" % exc)
        if h.receipts_root != receipt_trie_root(receipts):
            return ChainError(i, "receipts root mismatch")
        if h.gas_used != (receipts[-1].cumulative_gas_used if receipts else 0):
            return ChainError(i, "gas used mismatch")
        if h.logs_bloom != header_bloom(receipts):
            return ChainError(i, "logs bloom mismatch")
        if h.state_root != state.root_hash:
            return ChainError(i, "state root mismatch")

    if final_state is not None:
        last = len(blocks) - 1
        if final_state.root_hash != blocks[-1].header.state_root:
            return ChainError(last, "presented state does not match the state root")
        try:
            for _ in final_state.inner.walk():
                pass
        except _REPLAY_ERRORS as exc:
            return ChainError(last, "presented state is corrupt: %s" % exc)
    return None
