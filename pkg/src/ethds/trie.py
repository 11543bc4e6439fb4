"""
Merkle Patricia Trie over byte keys.

Nodes are immutable values. Every update rebuilds the path from the touched
leaf back to the root and returns a new :class:`Trie`; earlier roots stay
readable because nothing is ever removed from the node store.

A child whose RLP encoding is shorter than 32 bytes is embedded in its
parent instead of being stored under its hash. The root is the exception: it
is always stored and addressed by digest.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from . import rlp
from .hexprefix import HexPrefixError, bytes_to_nibbles, hp_decode, hp_encode, nibbles_to_bytes
from .keccak import keccak256
from .store import CorruptionError, MemoryStore

Nibbles = tuple[int, ...]

EMPTY_NODE_RLP = rlp.encode(b"")
EMPTY_ROOT = keccak256(EMPTY_NODE_RLP)


class TrieError(Exception):
    pass


class MalformedNodeError(TrieError):
    pass


@dataclass(frozen=True)
class Leaf:
    path: Nibbles
    value: bytes


@dataclass(frozen=True)
class Extension:
    path: Nibbles
    child: "Ref"


@dataclass(frozen=True)
class Branch:
    children: tuple = field(default=(None,) * 16)
    value: bytes = b""

    def with_child(self, i: int, ref: "Ref") -> "Branch":
        children = list(self.children)
        children[i] = ref
        return Branch(tuple(children), self.value)

    def occupied(self) -> list[int]:
        return [i for i, c in enumerate(self.children) if c is not None]


Node = Union[Leaf, Extension, Branch]
# None for an empty slot, 32-byte digest for a stored child, or the child node itself when inlined
Ref = Union[None, bytes, Node]


def _ref_item(ref: Ref):
    if ref is None:
        return b""
    if isinstance(ref, bytes):
        return ref
    return node_encode(ref)


def node_encode(node: Node) -> list:
    """Structured RLP item for ``node`` (pass it to ``rlp.encode`` for bytes)."""
    if isinstance(node, Leaf):
        return [hp_encode(node.path, True), node.value]
    if isinstance(node, Extension):
        return [hp_encode(node.path, False), _ref_item(node.child)]
    return [_ref_item(c) for c in node.children] + [node.value]


def encode_node_bytes(node: Node) -> bytes:
    return rlp.encode(node_encode(node))


def _decode_ref(item) -> Ref:
    if isinstance(item, list):
        if len(rlp.encode(item)) >= 32:
            raise MalformedNodeError("embedded child is too large to be inlined")
        return node_decode(item)
    if item == b"":
        return None
    if len(item) != 32:
        raise MalformedNodeError("child reference of %d bytes" % len(item))
    return item


def node_decode(item) -> Node:
    if not isinstance(item, list):
        raise MalformedNodeError("node is not a list")
    try:
        if len(item) == 17:
            value = item[16]
            if not isinstance(value, bytes):
                raise MalformedNodeError("branch value is not a byte string")
            return Branch(tuple(_decode_ref(c) for c in item[:16]), value)
        if len(item) == 2:
            hp, second = item
            if not isinstance(hp, bytes):
                raise MalformedNodeError("path is not a byte string")
            path, is_leaf = hp_decode(hp)
            if is_leaf:
                if not isinstance(second, bytes) or not second:
                    raise MalformedNodeError("leaf value must be a non-empty byte string")
                return Leaf(path, second)
            if not path:
                raise MalformedNodeError("extension with empty path")
            child = _decode_ref(second)
            if child is None:
                raise MalformedNodeError("extension without child")
            return Extension(path, child)
    except HexPrefixError as exc:
        raise MalformedNodeError(str(exc)) from exc
    raise MalformedNodeError("node list of length %d" % len(item))


def node_ref(node: Node, store: MemoryStore) -> Ref:
    """Inline ``node`` if its encoding is under 32 bytes, else store it and return its digest."""
    encoded = encode_node_bytes(node)
    if len(encoded) < 32:
        return node
    return store.put(encoded)


def _common_prefix(a: Nibbles, b: Nibbles) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


class ProofStatus(enum.Enum):
    PRESENT = "present"
    ABSENT = "absent"
    INVALID = "invalid"


@dataclass(frozen=True)
class ProofResult:
    status: ProofStatus
    value: Optional[bytes] = None


class Trie:
    """An immutable view of one trie version, identified by its root digest."""

    def __init__(self, store: Optional[MemoryStore] = None, root_hash: bytes = EMPTY_ROOT):
        self.store = store if store is not None else MemoryStore()
        self.root_hash = bytes(root_hash)

    def __repr__(self) -> str:
        return "Trie(0x%s)" % self.root_hash.hex()

    def __eq__(self, other) -> bool:
        return isinstance(other, Trie) and other.root_hash == self.root_hash

    def __hash__(self) -> int:
        return hash(self.root_hash)

    # -- node access ----------------------------------------------------

    def _load(self, digest: bytes) -> Node:
        encoded = self.store.get(digest)
        if encoded is None:
            raise CorruptionError("dangling reference to %s" % digest.hex())
        return node_decode(rlp.decode(encoded))

    def _resolve(self, ref: Ref) -> Optional[Node]:
        if ref is None:
            return None
        if isinstance(ref, bytes):
            return self._load(ref)
        return ref

    def root_node(self) -> Optional[Node]:
        if self.root_hash == EMPTY_ROOT:
            return None
        return self._load(self.root_hash)

    def _commit(self, root: Optional[Node]) -> "Trie":
        if root is None:
            self.store.put(EMPTY_NODE_RLP)
            return Trie(self.store, EMPTY_ROOT)
        return Trie(self.store, self.store.put(encode_node_bytes(root)))

    def _ref(self, node: Optional[Node]) -> Ref:
        return None if node is None else node_ref(node, self.store)

    # -- lookup ---------------------------------------------------------

    def get(self, key: bytes) -> Optional[bytes]:
        path = bytes_to_nibbles(key)
        node = self.root_node()
        while node is not None:
            if isinstance(node, Leaf):
                return node.value if node.path == path else None
            if isinstance(node, Extension):
                n = len(node.path)
                if path[:n] != node.path:
                    return None
                path = path[n:]
                node = self._resolve(node.child)
            else:
                if not path:
                    return node.value or None
                node = self._resolve(node.children[path[0]])
                path = path[1:]
        return None

    def __contains__(self, key: bytes) -> bool:
        return self.get(key) is not None

    # -- insertion ------------------------------------------------------

    def insert(self, key: bytes, value: bytes) -> "Trie":
        if not value:
            raise ValueError("empty values are reserved to mean absence; use delete()")
        root = self._insert(self.root_node(), bytes_to_nibbles(key), bytes(value))
        return self._commit(root)

    def _insert(self, node: Optional[Node], path: Nibbles, value: bytes) -> Node:
        if node is None:
            return Leaf(path, value)

        if isinstance(node, Branch):
            if not path:
                return Branch(node.children, value)
            child = self._insert(self._resolve(node.children[path[0]]), path[1:], value)
            return node.with_child(path[0], self._ref(child))

        c = _common_prefix(node.path, path)
        if isinstance(node, Leaf) and node.path == path:
            return Leaf(path, value)
        if isinstance(node, Extension) and c == len(node.path):
            child = self._insert(self._resolve(node.child), path[c:], value)
            return Extension(node.path, self._ref(child))

        # diverge at position c: both remainders hang off a new branch
        branch = Branch()
        old_rest = node.path[c:]
        if isinstance(node, Leaf):
            if old_rest:
                branch = branch.with_child(old_rest[0], self._ref(Leaf(old_rest[1:], node.value)))
            else:
                branch = Branch(branch.children, node.value)
        else:
            if len(old_rest) == 1:
                sub = node.child
            else:
                sub = self._ref(Extension(old_rest[1:], node.child))
            branch = branch.with_child(old_rest[0], sub)
        new_rest = path[c:]
        if new_rest:
            branch = branch.with_child(new_rest[0], self._ref(Leaf(new_rest[1:], value)))
        else:
            branch = Branch(branch.children, value)
        if c:
            return Extension(path[:c], self._ref(branch))
        return branch

    # -- deletion -------------------------------------------------------

    def delete(self, key: bytes) -> "Trie":
        root = self.root_node()
        new_root = self._delete(root, bytes_to_nibbles(key))
        if new_root is root:
            return self
        return self._commit(new_root)

    def _delete(self, node: Optional[Node], path: Nibbles) -> Optional[Node]:
        # returns ``node`` itself (identity) when the key was absent
        if node is None:
            return None
        if isinstance(node, Leaf):
            return None if node.path == path else node
        if isinstance(node, Extension):
            n = len(node.path)
            if path[:n] != node.path:
                return node
            child = self._resolve(node.child)
            new_child = self._delete(child, path[n:])
            if new_child is child:
                return node
            return self._prefix(node.path, new_child)

        if not path:
            if not node.value:
                return node
            branch = Branch(node.children, b"")
        else:
            child = self._resolve(node.children[path[0]])
            if child is None:
                return node
            new_child = self._delete(child, path[1:])
            if new_child is child:
                return node
            branch = node.with_child(path[0], self._ref(new_child))
        return self._normalize_branch(branch)

    def _prefix(self, prefix: Nibbles, node: Optional[Node]) -> Optional[Node]:
        """Put ``prefix`` in front of ``node``, merging adjacent path segments."""
        if node is None:
            return None
        if not prefix:
            return node
        if isinstance(node, Leaf):
            return Leaf(prefix + node.path, node.value)
        if isinstance(node, Extension):
            return Extension(prefix + node.path, node.child)
        return Extension(prefix, self._ref(node))

    def _normalize_branch(self, branch: Branch) -> Optional[Node]:
        occupied = branch.occupied()
        if len(occupied) + bool(branch.value) >= 2:
            return branch
        if branch.value:
            return Leaf((), branch.value)
        if not occupied:
            return None
        i = occupied[0]
        return self._prefix((i,), self._resolve(branch.children[i]))

    # -- proofs ---------------------------------------------------------

    def prove(self, key: bytes) -> list[bytes]:
        """Encodings of the stored nodes visited while looking up ``key``, root first."""
        path = bytes_to_nibbles(key)
        proof = [self.store.get(self.root_hash) or EMPTY_NODE_RLP]
        if self.root_hash == EMPTY_ROOT:
            return proof
        node = self._load(self.root_hash)
        while node is not None:
            if isinstance(node, Leaf):
                break
            if isinstance(node, Extension):
                n = len(node.path)
                if path[:n] != node.path:
                    break
                ref = node.child
                path = path[n:]
            else:
                if not path:
                    break
                ref = node.children[path[0]]
                path = path[1:]
            if isinstance(ref, bytes):
                encoded = self.store.get(ref)
                if encoded is None:
                    raise CorruptionError("dangling reference to %s" % ref.hex())
                proof.append(encoded)
            node = self._resolve(ref)
        return proof

    # -- traversal ------------------------------------------------------

    def walk(self) -> Iterator[tuple[Node, bytes, bool]]:
        """Yield ``(node, encoding, inlined)`` for every node, root first."""
        root = self.root_node()
        if root is None:
            return
        stack: list[tuple[Node, bool]] = [(root, False)]
        while stack:
            node, inlined = stack.pop()
            yield node, encode_node_bytes(node), inlined
            if isinstance(node, Extension):
                refs = [node.child]
            elif isinstance(node, Branch):
                refs = [c for c in node.children if c is not None]
            else:
                refs = []
            for ref in reversed(refs):
                stack.append((self._resolve(ref), not isinstance(ref, bytes)))

    def items(self) -> Iterator[tuple[bytes, bytes]]:
        """All bindings in key order."""
        root = self.root_node()
        if root is None:
            return
        stack: list[tuple[Nibbles, Node]] = [((), root)]
        while stack:
            prefix, node = stack.pop()
            if isinstance(node, Leaf):
                yield nibbles_to_bytes(prefix + node.path), node.value
            elif isinstance(node, Extension):
                stack.append((prefix + node.path, self._resolve(node.child)))
            else:
                for i in reversed(node.occupied()):
                    stack.append((prefix + (i,), self._resolve(node.children[i])))
                if node.value:
                    yield nibbles_to_bytes(prefix), node.value


def build(mapping, store: Optional[MemoryStore] = None) -> Trie:
    trie = Trie(store)
    for k, v in mapping.items():
        trie = trie.insert(k, v)
    return trie


class _Invalid(Exception):
    pass


def verify_proof(root_hash: bytes, key: bytes, proof: list[bytes]) -> ProofResult:
    """
    Check ``proof`` against ``root_hash`` and report what it says about ``key``.

    Each element must hash to the reference its predecessor holds at the
    position the key's nibbles select, and every element must be used.
    """
    try:
        status, value = _walk_proof(bytes(root_hash), bytes_to_nibbles(key), [bytes(p) for p in proof])
    except (_Invalid, rlp.RLPError, MalformedNodeError, HexPrefixError):
        return ProofResult(ProofStatus.INVALID)
    return ProofResult(status, value)


def _walk_proof(root_hash: bytes, path: Nibbles, proof: list[bytes]):
    if not proof or keccak256(proof[0]) != root_hash:
        raise _Invalid
    used = 1

    def finish(status, value=None):
        if used != len(proof):
            raise _Invalid
        return status, value

    if proof[0] == EMPTY_NODE_RLP:
        return finish(ProofStatus.ABSENT)
    node = node_decode(rlp.decode(proof[0]))
    while True:
        if isinstance(node, Leaf):
            if node.path == path:
                return finish(ProofStatus.PRESENT, node.value)
            return finish(ProofStatus.ABSENT)
        if isinstance(node, Extension):
            n = len(node.path)
            if path[:n] != node.path:
                return finish(ProofStatus.ABSENT)
            ref = node.child
            path = path[n:]
        else:
            if not path:
                if node.value:
                    return finish(ProofStatus.PRESENT, node.value)
                return finish(ProofStatus.ABSENT)
            ref = node.children[path[0]]
            path = path[1:]
            if ref is None:
                return finish(ProofStatus.ABSENT)
        if isinstance(ref, bytes):
            if used >= len(proof):
                raise _Invalid
            encoded = proof[used]
            used += 1
            if keccak256(encoded) != ref or len(encoded) < 32:
                raise _Invalid
            node = node_decode(rlp.decode(encoded))
        else:
            node = ref
