import pytest

from ethds import rlp
from ethds.store import CorruptionError, FileStore, MemoryStore, StoreError, open_store

EMPTY_TRIE = bytes.fromhex("56e81f171bcc55a6ff8345e692c0f86e5b48e01b996cadc001622fb5e363b421")


@pytest.fixture(params=["memory", "file"])
def any_store(request, tmp_path):
    s = MemoryStore() if request.param == "memory" else FileStore(tmp_path / "nodes.log")
    yield s
    s.close()


def test_put_returns_content_key(any_store):
    assert any_store.put(rlp.encode(b"")) == EMPTY_TRIE


def test_put_is_idempotent(any_store):
    k1 = any_store.put(b"value")
    size = len(any_store)
    assert any_store.put(b"value") == k1
    assert len(any_store) == size


def test_distinct_values_distinct_keys(any_store):
    assert any_store.put(b"one") != any_store.put(b"two")


def test_get(any_store):
    assert any_store.get(bytes(32)) is None
    k = any_store.put(b"hello")
    assert any_store.get(k) == b"hello"


def test_memory_corruption_detected():
    s = MemoryStore()
    k = s.put(b"hello")
    s._data[k] = b"hellO"
    with pytest.raises(CorruptionError):
        s.get(k)


def test_reopen(tmp_path):
    path = tmp_path / "n.log"
    with FileStore(path) as s:
        keys = [s.put(bytes([i]) * i) for i in range(50)]
    s = FileStore(path)
    assert [s.get(k) for k in keys] == [bytes([i]) * i for i in range(50)]
    s.close()


def test_file_format_is_bit_exact(tmp_path):
    path = tmp_path / "n.log"
    with FileStore(path) as s:
        k = s.put(b"abc")
    assert path.read_bytes() == b"\x00\x00\x00\x03" + k + b"abc"


def test_flipped_value_byte_is_corruption(tmp_path):
    path = tmp_path / "n.log"
    with FileStore(path) as s:
        k1 = s.put(b"first value")
        k2 = s.put(b"second value")
    blob = bytearray(path.read_bytes())
    blob[36 + 2] ^= 0x01
    path.write_bytes(bytes(blob))
    s = FileStore(path)
    with pytest.raises(CorruptionError):
        s.get(k1)
    assert s.get(k2) == b"second value"
    s.close()


def test_truncated_tail_is_dropped(tmp_path):
    path = tmp_path / "n.log"
    with FileStore(path) as s:
        k1 = s.put(b"kept")
        k2 = s.put(b"torn record")
    blob = path.read_bytes()
    path.write_bytes(blob[:-4])
    s = FileStore(path)
    assert s.get(k1) == b"kept"
    assert s.get(k2) is None
    k3 = s.put(b"after")
    s.close()
    s = FileStore(path)
    assert s.get(k3) == b"after" and s.get(k1) == b"kept"
    s.close()


@pytest.mark.parametrize("new_len", [b"\x00\x00\x00\x01", b"\x00\x00\x01\x00", b"\x7f\x00\x00\x00"])
def test_corrupted_length_mid_file_fails_open(tmp_path, new_len):
    path = tmp_path / "n.log"
    with FileStore(path) as s:
        for i in range(5):
            s.put(b"record %d" % i * 3)
    blob = bytearray(path.read_bytes())
    blob[0:4] = new_len
    path.write_bytes(bytes(blob))
    with pytest.raises(StoreError):
        FileStore(path)


def test_reopen_equivalence(tmp_path, rng):
    path = tmp_path / "n.log"
    s = open_store(path)
    for _ in range(200):
        s.put(rng.randbytes(rng.randrange(1, 100)))
    s.flush()
    before = {k: s.get(k) for k in s.keys()}
    s.close()
    s = open_store(path)
    assert {k: s.get(k) for k in s.keys()} == before
    s.close()
