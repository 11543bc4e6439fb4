from hypothesis import given, strategies as st

from ethds.keccak import keccak256, keccak256_reference
from ethds.secure import SecureTrie
from ethds.trie import EMPTY_ROOT, Branch, Extension, Leaf, Trie


def leaf_path_lengths(trie):
    out = []
    stack = [(0, trie.root_node())]
    while stack:
        depth, node = stack.pop()
        if isinstance(node, Leaf):
            out.append(depth + len(node.path))
        elif isinstance(node, Extension):
            stack.append((depth + len(node.path), trie._resolve(node.child)))
        elif isinstance(node, Branch):
            assert not node.value
            for i in node.occupied():
                stack.append((depth + 1, trie._resolve(node.children[i])))
    return out


def test_insert_goes_under_hashed_key():
    s = SecureTrie().insert(b"addr", b"v")
    assert s.inner.get(keccak256_reference(b"addr")) == b"v"
    assert s.inner.get(b"addr") is None
    assert s.get(b"addr") == b"v"


def test_absent():
    assert SecureTrie().get(b"nope") is None


@given(st.dictionaries(st.binary(max_size=20), st.binary(min_size=1, max_size=40), max_size=25))
def test_equivalent_to_plain_trie_on_hashed_keys(m):
    s, p = SecureTrie(), Trie()
    for k, v in m.items():
        s = s.insert(k, v)
        p = p.insert(keccak256(k), v)
    assert s.root_hash == p.root_hash
    assert all(len == 64 for len in leaf_path_lengths(s.inner))
    for k in m:
        s = s.delete(k)
    assert s.root_hash == EMPTY_ROOT


def test_distinct_keys_distinct_paths():
    assert keccak256(b"a") != keccak256(b"b")
    s = SecureTrie().insert(b"a", b"1").insert(b"b", b"2")
    assert sorted(leaf_path_lengths(s.inner)) == [64, 64]
