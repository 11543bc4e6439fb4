import pytest
from hypothesis import given, strategies as st

from ethds.hexprefix import HexPrefixError, bytes_to_nibbles, hp_decode, hp_encode
from strategies import nibble_paths


@pytest.mark.parametrize("path, leaf, expected", [
    ([5, 6, 7, 8, 9], False, [0x15, 0x67, 0x89]),
    ([5, 6, 7, 8, 9], True, [0x35, 0x67, 0x89]),
    ([4, 5, 6, 7, 8, 9], False, [0x00, 0x45, 0x67, 0x89]),
    ([4, 5, 6, 7, 8, 9], True, [0x20, 0x45, 0x67, 0x89]),
    ([], True, [0x20]),
    ([], False, [0x00]),
    ([0xF], True, [0x3F]),
])
def test_known_encodings(path, leaf, expected):
    assert hp_encode(path, leaf) == bytes(expected)
    assert hp_decode(bytes(expected)) == (tuple(path), leaf)


def test_decode_even_leaf():
    assert hp_decode(b"\x20\x45") == ((4, 5), True)


@pytest.mark.parametrize("data", [b"\x41\x00", b"\xf0", b"\x01\x23", b"\x25", b""])
def test_decode_rejects(data):
    with pytest.raises(HexPrefixError):
        hp_decode(data)


def test_encode_rejects_wide_nibble():
    with pytest.raises(HexPrefixError):
        hp_encode([1, 16], False)


@pytest.mark.parametrize("key, nibbles", [
    (b"\x11\xf2", (1, 1, 15, 2)),
    (b"", ()),
    (b"\x0a", (0, 10)),
])
def test_bytes_to_nibbles(key, nibbles):
    assert bytes_to_nibbles(key) == nibbles


@given(nibble_paths, st.booleans())
def test_round_trip_length_and_flags(path, leaf):
    enc = hp_encode(path, leaf)
    assert hp_decode(enc) == (tuple(path), leaf)
    assert len(enc) == 1 + len(path) // 2
    assert bool(enc[0] & 0x10) == (len(path) % 2 == 1)
    assert bool(enc[0] & 0x20) == leaf
