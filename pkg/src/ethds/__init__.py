"""Ethereum data structures: RLP, hex-prefix, Merkle Patricia Tries, storage layout and a toy chain."""
from . import hexprefix, layout, rlp
from .hexprefix import bytes_to_nibbles, hp_decode, hp_encode
from .keccak import EMPTY_HASH, keccak256
from .secure import SecureTrie
from .store import CorruptionError, FileStore, MemoryStore, StoreError, open_store
from .trie import (EMPTY_ROOT, Branch, Extension, Leaf, ProofResult, ProofStatus, Trie,
                   node_decode, node_encode, node_ref, verify_proof)

__version__ = "0.1.0"
