"""
Command-line front end.

Binary data is read and printed as ``0x``-hex, structured data as JSON.
Exit status is 0 on success, 1 on a domain error (bad input, failed
verification) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import hexprefix, layout, rlp
from .chain import fixtures
from .chain.block import verify_chain
from .keccak import keccak256
from .secure import SecureTrie
from .store import MemoryStore, StoreError, open_store
from .trie import EMPTY_ROOT, ProofStatus, Trie, verify_proof


class CommandError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _hex(s: str) -> bytes:
    s = s.strip()
    if not s.startswith("0x"):
        raise CommandError("input", "expected 0x-prefixed hex, got %r" % s[:40])
    try:
        return bytes.fromhex(s[2:])
    except ValueError:
        raise CommandError("input", "invalid hex %r" % s[:40]) from None


def _read(arg: Optional[str]) -> str:
    """An argument may be a literal, a path to a file, or ``-``/absent for stdin."""
    if arg is None or arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _json(arg: Optional[str]):
    text = _read(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CommandError("input", "invalid JSON: %s" % exc) from None


def _item_from_json(obj) -> rlp.Item:
    if isinstance(obj, list):
        return [_item_from_json(x) for x in obj]
    if isinstance(obj, str):
        if obj.startswith("0x"):
            return _hex(obj)
        try:
            return obj.encode("ascii")
        except UnicodeEncodeError:
            raise CommandError("input", "non-ASCII string %r" % obj) from None
    raise CommandError("input", "RLP items are strings or arrays, got %r" % (obj,))


def _item_to_json(item: rlp.Item):
    if isinstance(item, list):
        return [_item_to_json(x) for x in item]
    return "0x" + item.hex()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# -- rlp / hp / keccak ------------------------------------------------------

def cmd_rlp(args) -> str:
    if args.action == "encode":
        return "0x" + rlp.encode(_item_from_json(_json(args.input))).hex()
    try:
        return json.dumps(_item_to_json(rlp.decode(_hex(_read(args.input)))))
    except rlp.RLPError as exc:
        raise CommandError("rlp", "%s: %s" % (type(exc).__name__, exc)) from None


def _nibbles(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise CommandError("input", "invalid JSON: %s" % exc) from None
    try:
        return [int(c, 16) for c in text]
    except ValueError:
        raise CommandError("input", "nibbles must be hex digits or a JSON list") from None


def cmd_hp(args) -> str:
    try:
        if args.action == "encode":
            return "0x" + hexprefix.hp_encode(_nibbles(_read(args.input)), args.leaf).hex()
        path, is_leaf = hexprefix.hp_decode(_hex(_read(args.input)))
    except hexprefix.HexPrefixError as exc:
        raise CommandError("hp", str(exc)) from None
    return json.dumps({"nibbles": list(path), "leaf": is_leaf})


def cmd_keccak(args) -> str:
    if args.file:
        with open(args.file, "rb") as fh:
            data = fh.read()
    else:
        data = _hex(_read(args.input))
    return "0x" + keccak256(data).hex()


# -- tries ------------------------------------------------------------------

def _wrap(trie: Trie, secure: bool):
    return SecureTrie.wrap(trie) if secure else trie


def _trie_from_map(obj, store: MemoryStore, secure: bool):
    if not isinstance(obj, dict):
        raise CommandError("input", "trie input must be a JSON object of hex key -> hex value")
    t = _wrap(Trie(store), secure)
    for k, v in obj.items():
        value = _hex(v)
        if not value:
            raise CommandError("input", "empty value for key %s" % k)
        t = t.insert(_hex(k), value)
    return t


def _open_trie(args, store: MemoryStore):
    if args.map is not None:
        return _trie_from_map(_json(args.map), store, args.secure)
    if args.root is None:
        raise CommandError("usage", "need --map, or --store with --root")
    root = _hex(args.root)
    if root != EMPTY_ROOT and store.get(root) is None:
        raise CommandError("trie", "root %s not found in store" % args.root)
    return _wrap(Trie(store, root), args.secure)


def cmd_trie(args, store: MemoryStore) -> str:
    a = args.action
    if a in ("root", "build"):
        if a == "build" and args.store is None:
            raise CommandError("usage", "trie build needs --store")
        t = _trie_from_map(_json(args.input), store, args.secure)
        return "0x" + t.root_hash.hex()
    if a == "verify":
        proof = _json(args.proof)
        if not isinstance(proof, list):
            raise CommandError("input", "proof must be a JSON array of hex strings")
        key = _hex(args.key)
        if args.secure:
            key = keccak256(key)
        result = verify_proof(_hex(args.root), key, [_hex(p) for p in proof])
        out = {"status": result.status.value}
        if result.value is not None:
            out["value"] = "0x" + result.value.hex()
        if result.status is ProofStatus.INVALID:
            raise CommandError("proof", "invalid proof")
        return json.dumps(out)
    t = _open_trie(args, store)
    key = _hex(args.key)
    if a == "get":
        value = t.get(key)
        if value is None:
            raise CommandError("trie", "key not found")
        return "0x" + value.hex()
    return _dump(["0x" + p.hex() for p in t.prove(key)])


# -- storage layout ---------------------------------------------------------

def cmd_layout(args) -> str:
    decls = _json(args.input)
    if not isinstance(decls, list):
        raise CommandError("input", "layout input must be a JSON array of declarations")
    try:
        slots = layout.layout_static([layout.VarDecl.from_json(d) for d in decls])
    except layout.LayoutError as exc:
        raise CommandError("layout", str(exc)) from None
    return _dump([s.to_json() for s in slots])


def _slot_index(s: str) -> int:
    try:
        return int(s, 0)
    except ValueError:
        raise CommandError("input", "bad slot index %r" % s) from None


def cmd_slot(args, store: MemoryStore) -> str:
    root = _hex(args.root) if args.root else EMPTY_ROOT
    storage = SecureTrie(store, root)
    index = _slot_index(args.index)
    if args.action == "read":
        return "0x" + layout.slot_read(storage, index).hex()
    content = _hex(args.content)
    if len(content) > 32:
        raise CommandError("input", "slot content is at most 32 bytes")
    return "0x" + layout.slot_write(storage, index, content.rjust(32, b"\x00")).root_hash.hex()


# -- chain ------------------------------------------------------------------

def cmd_chain(args, store: MemoryStore) -> str:
    if args.action == "demo":
        desc = fixtures.funding_demo_description() if args.input is None else _json(args.input)
        sealed, _ = fixtures.seal_description(desc, store)
        return _dump(sealed)
    alloc, blocks = fixtures.load_sealed(_json(args.input))
    if not blocks:
        raise CommandError("chain", "block 0: empty chain")
    final = None
    if args.store:
        genesis = SecureTrie(store, blocks[0].header.state_root)
        final = SecureTrie(store, blocks[-1].header.state_root)
    else:
        genesis = fixtures.alloc_state(alloc, store)
    err = verify_chain(blocks, genesis, final)
    if err is not None:
        raise CommandError("chain", str(err))
    return "ok"


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--store", metavar="PATH", help="node store file")

    p = argparse.ArgumentParser(prog="ethds", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rlp", parents=[common], help="RLP encode/decode")
    r.add_argument("action", choices=["encode", "decode"])
    r.add_argument("input", nargs="?", help="JSON item (encode) or hex (decode)")

    h = sub.add_parser("hp", parents=[common], help="hex-prefix encode/decode")
    h.add_argument("action", choices=["encode", "decode"])
    h.add_argument("input", nargs="?", help="nibbles as hex digits or JSON list (encode), hex (decode)")
    h.add_argument("--leaf", action="store_true", help="set the leaf flag when encoding")

    k = sub.add_parser("keccak", parents=[common], help="Keccak-256 of hex input or a file")
    k.add_argument("input", nargs="?")
    k.add_argument("--file", metavar="PATH")

    t = sub.add_parser("trie", parents=[common], help="Merkle Patricia Trie operations")
    t.add_argument("action", choices=["build", "root", "get", "prove", "verify"])
    t.add_argument("input", nargs="?", help="JSON map for build/root")
    t.add_argument("--secure", action="store_true", help="hash keys before trie access")
    t.add_argument("--root", help="root digest")
    t.add_argument("--key", help="hex key for get/prove/verify")
    t.add_argument("--map", help="JSON map to build an in-memory trie from")
    t.add_argument("--proof", help="JSON array of hex node encodings (verify)")

    lay = sub.add_parser("layout", parents=[common], help="storage slot layout of declarations")
    lay.add_argument("input", nargs="?")

    s = sub.add_parser("slot", parents=[common], help="read/write a storage slot")
    s.add_argument("action", choices=["read", "write"])
    s.add_argument("index", help="slot index (decimal or 0x)")
    s.add_argument("content", nargs="?", help="0x-hex content, up to 32 bytes (write)")
    s.add_argument("--root", help="storage trie root (default: empty)")

    c = sub.add_parser("chain", parents=[common], help="seal or verify a chain fixture")
    c.add_argument("action", choices=["demo", "verify"])
    c.add_argument("input", nargs="?", help="chain description (demo) or sealed chain (verify)")
    return p


def _check_usage(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "trie" and args.action in ("get", "prove", "verify") and not args.key:
        parser.error("trie %s needs --key" % args.action)
    if args.command == "trie" and args.action == "verify" and (not args.root or not args.proof):
        parser.error("trie verify needs --root and --proof")
    if args.command == "slot":
        if args.store is None:
            parser.error("slot commands need --store")
        if args.action == "write" and args.content is None:
            parser.error("slot write needs content")


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_usage(parser, args)
    try:
        store = open_store(args.store)
    except (StoreError, OSError) as exc:
        print("error: store: %s" % exc, file=sys.stderr)
        return 1
    try:
        if args.command == "rlp":
            out = cmd_rlp(args)
        elif args.command == "hp":
            out = cmd_hp(args)
        elif args.command == "keccak":
            out = cmd_keccak(args)
        elif args.command == "trie":
            out = cmd_trie(args, store)
        elif args.command == "layout":
            out = cmd_layout(args)
        elif args.command == "slot":
            out = cmd_slot(args, store)
        else:
            out = cmd_chain(args, store)
    except CommandError as exc:
        if exc.kind == "usage":
            parser.error(str(exc))
        print("error: %s: %s" % (exc.kind, exc), file=sys.stderr)
        return 1
    except (ValueError, LookupError, StoreError, OSError) as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1
    finally:
        store.close()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
