"""Building a Merkle Patricia Trie, proving membership, and catching a forgery."""
from ethds.trie import EMPTY_ROOT, ProofStatus, Trie, build, verify_proof

pairs = {b"\x11\x11": b"v0", b"\x11\x11\x01\x23": b"v1",
         b"\x11\x11\x2a\xbc": b"v2", b"\x11\x11\xf4\x56": b"v3"}
trie = build(pairs)
print("root:", trie.root_hash.hex())

# Every node reachable from the root, with its encoding size and whether it is inlined.
for node, enc, inlined in trie.walk():
    print("  %-9s %3d bytes %s" % (type(node).__name__, len(enc), "inline" if inlined else "by hash"))

# Insertion order never changes the root.
again = Trie()
for k in reversed(list(pairs)):
    again = again.insert(k, pairs[k])
assert again.root_hash == trie.root_hash

# Updates are persistent: the old version stays readable.
newer = trie.insert(b"\x11\x11", b"changed")
print("old get:", trie.get(b"\x11\x11"), " new get:", newer.get(b"\x11\x11"))

# A proof is the list of node encodings along the key's path.
proof = trie.prove(b"\x11\x11\x2a\xbc")
print("proof of v2:", verify_proof(trie.root_hash, b"\x11\x11\x2a\xbc", proof))
print("absence    :", verify_proof(trie.root_hash, b"\x99", trie.prove(b"\x99")).status)

forged = [bytearray(p) for p in proof]
forged[-1][-1] ^= 1
result = verify_proof(trie.root_hash, b"\x11\x11\x2a\xbc", [bytes(p) for p in forged])
assert result.status is ProofStatus.INVALID
print("forged     :", result.status)

# Deleting everything returns to the canonical empty root.
for k in pairs:
    trie = trie.delete(k)
assert trie.root_hash == EMPTY_ROOT
print("empty root:", trie.root_hash.hex())
