"""Serialising nested byte structures and compacting nibble paths."""
from ethds import rlp
from ethds.hexprefix import bytes_to_nibbles, hp_decode, hp_encode

# A single short string gets a one-byte length header.
print("rlp('ABCD')        =", rlp.encode(b"ABCD").hex())

# Lists wrap the concatenation of their encoded members.
item = [b"AB", [b"CDE", b""], b"\x07"]
enc = rlp.encode(item)
print("rlp(nested)        =", enc.hex())
assert rlp.decode(enc) == item

# The decoder is strict: a byte below 0x80 must encode as itself.
try:
    rlp.decode(bytes([0x81, 0x05]))
except rlp.NonCanonicalError as exc:
    print("rejected 0x8105    :", exc)

# Hex-prefix packs a nibble path plus a leaf flag into whole bytes.
path = bytes_to_nibbles(b"\x12\x34")[1:]
for leaf in (False, True):
    packed = hp_encode(path, leaf)
    print("hp(%s, leaf=%s) = %s" % ("".join("%x" % n for n in path), leaf, packed.hex()))
    assert hp_decode(packed) == (path, leaf)
