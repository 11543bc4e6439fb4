"""World state access and the single-transaction state transition."""
from __future__ import annotations

from typing import Optional

from .. import rlp
from ..keccak import EMPTY_HASH, keccak256
from ..secure import SecureTrie
from ..trie import EMPTY_ROOT
from .bloom import logs_bloom
from .records import Account, LogEntry, Receipt, Transaction, TxKind

DEFAULT_TX_GAS = 21000

STATUS_FAILED = 0
STATUS_OK = 1


class UnknownSenderError(LookupError):
    pass


def state_get(state: SecureTrie, address: bytes) -> Optional[Account]:
    raw = state.get(address)
    return None if raw is None else Account.decode(raw)


def state_put(state: SecureTrie, address: bytes, account: Account) -> SecureTrie:
    if len(address) != 20:
        raise ValueError("addresses are 20 bytes")
    return state.insert(address, account.encode())


def contract_address(sender: bytes, nonce: int) -> bytes:
    return keccak256(sender + rlp.encode(rlp.int_to_bytes(nonce)))[:20]


def apply_transaction(state: SecureTrie, tx: Transaction, gas_used: int = 0,
                      tx_gas: int = DEFAULT_TX_GAS) -> tuple[SecureTrie, Receipt]:
    """
    Apply ``tx`` to ``state``; ``gas_used`` is the block's cumulative gas so far.

    A transaction that breaks a rule still bumps the sender's nonce and is
    charged gas, but leaves balances untouched and yields a status-0 receipt.
    Only a missing sender account is raised as an error.
    """
    sender = state_get(state, tx.sender)
    if sender is None:
        raise UnknownSenderError("no account for sender 0x%s" % tx.sender.hex())
    cumulative = gas_used + tx_gas
    bumped = Account(sender.nonce + 1, sender.balance, sender.storage_root, sender.code_hash)

    def fail():
        return state_put(state, tx.sender, bumped), Receipt(cumulative, status=STATUS_FAILED)

    if tx.nonce != sender.nonce:
        return fail()

    kind = tx.kind
    if kind is TxKind.CALL:
        target = state_get(state, tx.to)
        if target is None or target.is_external:
            return fail()
        log = LogEntry(tx.to, (keccak256(tx.data),), tx.data)
        receipt = Receipt(cumulative, (log,), logs_bloom([log]), STATUS_OK)
        return state_put(state, tx.sender, bumped), receipt

    if sender.balance < tx.value:
        return fail()
    debited = Account(bumped.nonce, bumped.balance - tx.value, bumped.storage_root, bumped.code_hash)

    if kind is TxKind.CREATE:
        address = contract_address(tx.sender, tx.nonce)
        if state_get(state, address) is not None:
            return fail()
        state = state_put(state, tx.sender, debited)
        state = state_put(state, address, Account(0, tx.value, EMPTY_ROOT, keccak256(tx.init)))
        return state, Receipt(cumulative, status=STATUS_OK)

    state = state_put(state, tx.sender, debited)
    # re-read so a self-transfer credits the already-debited account
    recipient = state_get(state, tx.to) or Account(0, 0, EMPTY_ROOT, EMPTY_HASH)
    credited = Account(recipient.nonce, recipient.balance + tx.value,
                       recipient.storage_root, recipient.code_hash)
    return state_put(state, tx.to, credited), Receipt(cumulative, status=STATUS_OK)
