"""Where contract variables live, and how slot writes change the storage root."""
from ethds import SecureTrie
from ethds.layout import (VarDecl, dyn_array_slot, layout_static, map_value_slot,
                          short_bytes_decode, short_bytes_encode, slot_read, slot_write)

decls = [VarDecl("a", "int", 128), VarDecl("b", "int", 8), VarDecl("c", "bool"),
         VarDecl("d", "int", 256)]
for s in layout_static(decls):
    print("%-2s slot %d offset %2d length %2d" % (s.name, s.slot, s.offset, s.length))

# Map entries and dynamic array elements sit at hashed locations.
print("balances[1] with map at slot 2 ->", hex(map_value_slot(2, 1)))
loc = dyn_array_slot(3, 1, 40)
print("bytes1 array at slot 3, index 40 -> slot %s offset %d" % (hex(loc.slot), loc.offset))

# Replaying a setter: each write produces a new storage root.
storage = SecureTrie()
for value in (30, 20, 10):
    storage = slot_write(storage, 0, value.to_bytes(32, "big"))
    print("a := %2d  root %s" % (value, storage.root_hash.hex()[:16]))
print("slot 0 reads", int.from_bytes(slot_read(storage, 0), "big"))

word = short_bytes_encode(b"hello")
print("short bytes word:", word.hex(), "->", short_bytes_decode(word))
