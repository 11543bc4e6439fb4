import math
import random

import pytest

from ethds import rlp
from ethds.keccak import EMPTY_HASH, keccak256, keccak256_reference
from ethds.secure import SecureTrie
from ethds.store import MemoryStore
from ethds.trie import EMPTY_ROOT, Trie
from ethds.chain import (EMPTY_BLOOM, Account, Block, BlockHeader, Bloom, LogEntry, Receipt,
                         RecordError, Transaction, TxKind, UnknownSenderError, apply_transaction,
                         bloom_contains, bloom_insert, contract_address, genesis_block,
                         header_bloom, logs_bloom, receipt_trie_root, seal_block, state_get,
                         state_put, tx_trie_root, verify_chain)

A, B, C, D = (bytes([x]) * 20 for x in (0xAA, 0xBB, 0xCC, 0xDD))


def funded(store=None, **balances):
    state = SecureTrie(store)
    for name, bal in balances.items():
        state = state_put(state, {"a": A, "b": B, "c": C, "d": D}[name], Account(balance=bal))
    return state


# -- records -------------------------------------------------------------

def test_account_round_trip(rng):
    fresh = Account()
    assert fresh.is_external
    assert rlp.decode(fresh.encode()) == [b"", b"", EMPTY_ROOT, EMPTY_HASH]
    for _ in range(50):
        a = Account(rng.randrange(2**64), rng.randrange(2**128), rng.randbytes(32), rng.randbytes(32))
        assert Account.decode(a.encode()) == a


def test_balance_changes_account_digest():
    a, b = Account(balance=100), Account(balance=20)
    assert a.encode() != b.encode()
    assert keccak256(a.encode()) != keccak256(b.encode())


def test_account_decode_rejects_shape():
    with pytest.raises(RecordError):
        Account.decode(rlp.encode([b"", b""]))
    with pytest.raises(RecordError):
        Account.decode(rlp.encode([b"\x00\x01", b"", EMPTY_ROOT, EMPTY_HASH]))


def test_transaction_kinds():
    assert Transaction(0, A, to=B, value=1).kind is TxKind.TRANSFER
    assert Transaction(0, A, init=b"\x60").kind is TxKind.CREATE
    assert Transaction(0, A, to=B, data=b"\x01").kind is TxKind.CALL
    for bad in (dict(), dict(to=B, init=b"x"), dict(init=b"x", data=b"y"), dict(to=b"\x01")):
        with pytest.raises(RecordError):
            Transaction(0, A, **bad)


def test_transaction_round_trip():
    tx = Transaction(3, A, to=B, value=10**18, gas_price=7, v=27, r=2**255, s=1)
    items = rlp.decode(tx.encode())
    assert len(items) == 11 and items[-1] == A and items[5] == b"" and items[6] == b""
    assert Transaction.decode(tx.encode()) == tx


def test_receipt_and_header_round_trip():
    log = LogEntry(C, (keccak256(b"t"),), b"payload")
    r = Receipt(21000, (log,), logs_bloom([log]), 1)
    assert Receipt.decode(r.encode()) == r
    h = BlockHeader(number=5, gas_used=42, extra_data=b"hi", logs_bloom=r.bloom)
    assert len(rlp.decode(h.encode())) == 14
    assert BlockHeader.decode(h.encode()) == h


def test_header_limits():
    with pytest.raises(RecordError):
        BlockHeader(extra_data=b"x" * 33)
    with pytest.raises(RecordError):
        LogEntry(A, tuple(bytes(32) for _ in range(5)))


# -- index tries ---------------------------------------------------------

def test_empty_lists_give_empty_root():
    assert tx_trie_root([]) == EMPTY_ROOT
    assert receipt_trie_root([]) == EMPTY_ROOT


def test_single_tx_root_by_hand():
    tx = Transaction(0, A, to=B, value=1)
    enc = tx.encode()
    # key rlp(0) = 0x80 -> nibbles [8, 0] -> even leaf hp 0x20 0x80
    leaf = rlp.encode([b"\x20\x80", enc])
    assert tx_trie_root([tx]) == keccak256_reference(leaf)


def test_tx_order_matters():
    t1, t2 = Transaction(0, A, to=B, value=1), Transaction(1, A, to=C, value=2)
    assert tx_trie_root([t1, t2]) != tx_trie_root([t2, t1])


def test_index_keys_are_rlp_encoded():
    txs = [Transaction(n, A, to=B, value=n) for n in range(130)]
    t = Trie()
    for n, tx in enumerate(txs):
        t = t.insert(rlp.encode(rlp.int_to_bytes(n)), tx.encode())
    assert tx_trie_root(txs) == t.root_hash


# -- bloom ---------------------------------------------------------------

def test_bloom_basics():
    assert not any(bloom_contains(EMPTY_BLOOM, bytes([i])) for i in range(200))
    b = bloom_insert(EMPTY_BLOOM, b"entry")
    assert bloom_contains(b, b"entry")
    assert bytes(b).count(0) >= 253


def test_bloom_false_positive_rate():
    rng = random.Random(3)
    b = EMPTY_BLOOM
    entries = [rng.randbytes(20) for _ in range(50)]
    for e in entries:
        b = b.insert(e)
    assert all(b.contains(e) for e in entries)
    fp = sum(b.contains(rng.randbytes(32)) for _ in range(10_000))
    expected = (1 - math.exp(-3 * 50 / 2048)) ** 3
    assert expected == pytest.approx(3.5e-4, rel=0.1)
    assert fp / 10_000 <= 0.005


def test_receipt_and_header_bloom():
    assert logs_bloom([]) == EMPTY_BLOOM
    t = keccak256(b"topic")
    log = LogEntry(C, (t,), b"")
    rb = logs_bloom([log])
    assert rb.contains(C) and rb.contains(t) and rb.contains(C + t)
    other = logs_bloom([LogEntry(D)])
    hb = header_bloom([Receipt(1, bloom=rb), Receipt(2, bloom=other)])
    assert hb.covers(rb) and hb.covers(other)
    assert hb == rb | other


# -- state transition ----------------------------------------------------

def test_state_put_get():
    s = state_put(SecureTrie(), A, Account(balance=5))
    assert state_get(s, A) == Account(balance=5)
    assert state_get(s, B) is None
    assert s.inner.get(keccak256(A)) == Account(balance=5).encode()


def test_full_balance_transfer():
    s = funded(a=100)
    s, r = apply_transaction(s, Transaction(0, A, to=B, value=100))
    assert r.status == 1 and r.cumulative_gas_used == 21000
    assert state_get(s, A) == Account(nonce=1, balance=0)
    assert state_get(s, B) == Account(balance=100)


def test_stale_nonce_fails_without_moving_funds():
    s = funded(a=100)
    s2, r = apply_transaction(s, Transaction(5, A, to=B, value=10), gas_used=21000)
    assert r.status == 0 and r.cumulative_gas_used == 42000
    assert state_get(s2, A) == Account(nonce=1, balance=100)
    assert state_get(s2, B) is None


def test_insufficient_balance():
    s, r = apply_transaction(funded(a=5), Transaction(0, A, to=B, value=10))
    assert r.status == 0 and state_get(s, A).balance == 5


def test_self_transfer():
    s, r = apply_transaction(funded(a=5), Transaction(0, A, to=A, value=5))
    assert r.status == 1 and state_get(s, A) == Account(nonce=1, balance=5)


def test_unknown_sender():
    with pytest.raises(UnknownSenderError):
        apply_transaction(SecureTrie(), Transaction(0, A, to=B, value=1))


def test_contract_creation_and_call():
    s = funded(a=100)
    s, r = apply_transaction(s, Transaction(0, A, init=b"\x60\x00", value=7))
    assert r.status == 1
    addr = contract_address(A, 0)
    assert addr == keccak256(A + b"\x80")[:20]
    acct = state_get(s, addr)
    assert acct == Account(0, 7, EMPTY_ROOT, keccak256(b"\x60\x00"))
    assert not acct.is_external
    before = s.root_hash
    s, r = apply_transaction(s, Transaction(1, A, to=addr, data=b"method(30)"), 21000)
    assert r.status == 1 and r.cumulative_gas_used == 42000
    assert r.logs == (LogEntry(addr, (keccak256(b"method(30)"),), b"method(30)"),)
    assert r.bloom.contains(addr)
    assert state_get(s, A).nonce == 2 and state_get(s, A).balance == 93
    assert s.root_hash != before
    # calling an external account is a rule violation
    _, r = apply_transaction(s, Transaction(2, A, to=B, data=b"x"))
    assert r.status == 0


# -- blocks --------------------------------------------------------------

def _two_block_chain(store=None):
    state = funded(store, a=1000)
    g = genesis_block(state)
    n, s_n = seal_block(g.header, [Transaction(0, A, to=B, value=100)], state, C)
    m, s_m = seal_block(n.header, [Transaction(0, B, to=D, value=80)], s_n, C)
    return state, [g, n, m], s_n, s_m


def test_empty_block():
    state = funded(a=1)
    g = genesis_block(state)
    b, post = seal_block(g.header, [], state, C)
    assert post.root_hash == state.root_hash == b.header.state_root
    assert b.header.transactions_root == b.header.receipts_root == EMPTY_ROOT
    assert b.header.number == 1 and b.header.gas_used == 0


def test_seal_is_deterministic():
    _, blocks1, _, _ = _two_block_chain()
    _, blocks2, _, _ = _two_block_chain()
    assert [b.hash for b in blocks1] == [b.hash for b in blocks2]


def test_balance_scenario():
    genesis_state, (g, n, m), s_n, s_m = _two_block_chain()
    assert state_get(s_n, B).balance == 100
    assert state_get(s_m, B).balance == 20
    assert n.header.state_root != m.header.state_root
    assert m.header.parent_hash == keccak256(rlp.encode(n.header.to_rlp()))
    assert n.header.gas_used == 21000
    assert verify_chain([g, n, m], genesis_state, s_m) is None
    # the older state still reads back: persistent versions
    assert state_get(SecureTrie(s_m.store, n.header.state_root), B).balance == 100


def test_verify_detects_tampered_node():
    store = MemoryStore()
    genesis_state, blocks, s_n, _ = _two_block_chain(store)
    # corrupt every stored encoding of B's account with balance 100
    target = Account(balance=100).encode()
    hit = 0
    for k in store.keys():
        v = store._data[k]
        if target in v:
            store._data[k] = v.replace(target, Account(balance=999).encode())
            hit += 1
    assert hit
    err = verify_chain(blocks, genesis_state)
    assert err is not None and err.index == 2


def test_verify_detects_stale_state():
    genesis_state, blocks, s_n, s_m = _two_block_chain()
    err = verify_chain(blocks, genesis_state, final_state=s_n)
    assert err.index == 2 and "state" in err.reason


def test_verify_detects_header_swap():
    genesis_state, (g, n, m), _, _ = _two_block_chain()
    swapped = [g, Block(m.header, n.transactions), Block(n.header, m.transactions)]
    assert verify_chain(swapped, genesis_state).index == 1


def test_verify_detects_reordered_transactions():
    state = funded(a=1000)
    g = genesis_block(state)
    txs = [Transaction(0, A, to=B, value=1), Transaction(1, A, to=C, value=2)]
    b, _ = seal_block(g.header, txs, state, C)
    err = verify_chain([g, Block(b.header, tuple(reversed(txs)))], state)
    assert err.index == 1 and "transactions" in err.reason


def test_verify_detects_wrong_genesis():
    genesis_state, blocks, _, _ = _two_block_chain()
    assert verify_chain(blocks, funded(a=999)).index == 0


def test_ommers_hash_checked():
    state = funded(a=10)
    g = genesis_block(state)
    b, _ = seal_block(g.header, [], state, C, ommers=[g.header])
    assert verify_chain([g, b], state) is None
    assert verify_chain([g, Block(b.header, (), ())], state).reason == "ommers hash mismatch"


def test_random_blocks_conserve_balance():
    rng = random.Random(11)
    addrs = [bytes([i]) * 20 for i in range(1, 9)]
    state = SecureTrie()
    for a in addrs:
        state = state_put(state, a, Account(balance=1000))
    g = genesis_block(state)
    blocks, genesis_state = [g], state
    nonces = {a: 0 for a in addrs}
    for _ in range(5):
        txs = []
        for _ in range(10):
            src, dst = rng.choice(addrs), rng.choice(addrs)
            txs.append(Transaction(nonces[src], src, to=dst, value=rng.randrange(300)))
            nonces[src] += 1
        before = [state_get(state, a) for a in addrs]
        block, state = seal_block(blocks[-1].header, txs, state, C)
        after = [state_get(state, a) for a in addrs]
        assert sum(a.balance for a in before) == sum(a.balance for a in after)
        assert all(x.nonce >= y.nonce for x, y in zip(after, before))
        blocks.append(block)
    assert verify_chain(blocks, genesis_state, state) is None
