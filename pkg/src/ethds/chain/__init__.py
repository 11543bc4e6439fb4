from .bloom import (BLOOM_BITS, BLOOM_BYTES, EMPTY_BLOOM, Bloom, bloom_contains, bloom_insert,
                    bloom_positions, header_bloom, logs_bloom)
from .block import (ChainError, execute, genesis_block, receipt_trie_root, seal_block,
                    tx_trie_root, verify_chain)
from .records import (Account, Block, BlockHeader, LogEntry, Receipt, RecordError, Transaction,
                      TxKind, ommers_hash)
from .state import (DEFAULT_TX_GAS, UnknownSenderError, apply_transaction, contract_address,
                    state_get, state_put)

receipt_bloom = logs_bloom
