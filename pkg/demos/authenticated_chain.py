"""Seal a small two-block chain to a node store, verify it, then tamper with it."""
import json
import sys
import tempfile
from pathlib import Path

from ethds.cli import run

tmp = Path(tempfile.mkdtemp())
store, chain = tmp / "nodes.log", tmp / "chain.json"

run(["chain", "demo", "--store", str(store), "--out", str(chain)])
sealed = json.loads(chain.read_text())
for block in sealed["blocks"]:
    h = block["header"]
    print("block %s  state %s..  txs %d" % (int(h["number"], 16), h["stateRoot"][:18],
                                            len(block["transactions"])))

code = run(["chain", "verify", str(chain), "--store", str(store), "--out", str(tmp / "verdict")])
print("honest chain, exit code:", code)

# Swap the transactions of block 1 and watch verification point at it.
sealed["blocks"][1]["transactions"].reverse()
chain.write_text(json.dumps(sealed))
sys.stdout.flush()
print("reordered txs, exit code:", run(["chain", "verify", str(chain)]))
