"""Writes the 12-record transfer log fixture and its expected decoding.

Log payloads are ABI-encoded with eth_abi; the expected events are written
out by hand below and are not produced by any decoder.
"""
import json
from pathlib import Path

from eth_abi import encode

HERE = Path(__file__).parent

T721 = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"
SINGLE = "0xc3d58168c5ae7397731d063d5bbf3d657854427343f4c083240f7aacaa2d0f62"
BATCH = "0x4a39dc06d4c0dbc64b70af90fd698a233a518aa5d07e595d983b8c0526c8f7fb"
APPROVAL = "0x8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925"

NULL = "0x" + "00" * 20
DEAD = "0x000000000000000000000000000000000000dead"
A = "0x" + "aa" * 20
B = "0x" + "bb" * 20
C = "0x" + "cc" * 20
OP = "0x" + "0e" * 20
NFT721 = "0x" + "71" * 20
NFT1155 = "0x" + "11" * 20
TOKEN20 = "0x" + "20" * 20
ETH = 10**18


def topic_addr(a):
    return "0x" + "00" * 12 + a[2:]


def topic_uint(n):
    return "0x" + n.to_bytes(32, "big").hex()


def tx(n):
    return "0x" + n.to_bytes(32, "big").hex()


logs, expected = [], []


def log(txn, idx, contract, topics, data, block, value):
    logs.append({
        "tx_hash": tx(txn), "log_index": idx, "contract": contract, "topics": topics,
        "data": "0x" + data.hex(), "block": block, "timestamp": 1_650_000_000 + block,
        "tx_value_wei": str(value),
    })


def event(std, contract, frm, to, token, amount, kind, txn, idx, block, value, batch=0):
    expected.append({
        "standard": std, "contract": contract, "from": frm, "to": to, "token_id": str(token),
        "amount": str(amount), "kind": kind, "block": block, "log_index": idx, "batch_index": batch,
        "timestamp": 1_650_000_000 + block, "tx_hash": tx(txn), "tx_value_wei": str(value),
    })


def t721(txn, idx, frm, to, token, block, value, kind):
    log(txn, idx, NFT721, [T721, topic_addr(frm), topic_addr(to), topic_uint(token)], b"", block, value)
    event("ERC721", NFT721, frm, to, token, 1, kind, txn, idx, block, value)


# 1-4: three paid mint transactions, the third minting two tokens
t721(1, 0, NULL, A, 7, 100, ETH // 10, "Mint")
t721(2, 0, NULL, B, 8, 101, ETH // 10, "Mint")
t721(3, 0, NULL, A, 9, 102, ETH // 5, "Mint")
t721(3, 1, NULL, A, 10, 102, ETH // 5, "Mint")
# 5: swap, 6-7: burns to the null and the dead address
t721(4, 0, A, B, 7, 103, 0, "Swap")
t721(5, 0, B, NULL, 8, 104, 0, "Burn")
t721(6, 0, A, DEAD, 9, 105, 0, "Burn")

# 8: TransferSingle mint of 100 units of id 1
log(7, 3, NFT1155, [SINGLE, topic_addr(OP), topic_addr(NULL), topic_addr(C)],
    encode(["uint256", "uint256"], [1, 100]), 106, ETH // 20)
event("ERC1155", NFT1155, NULL, C, 1, 100, "Mint", 7, 3, 106, ETH // 20)

# 9: TransferBatch mint ids [1,2] values [5,6]
log(8, 0, NFT1155, [BATCH, topic_addr(OP), topic_addr(NULL), topic_addr(A)],
    encode(["uint256[]", "uint256[]"], [[1, 2], [5, 6]]), 107, 0)
event("ERC1155", NFT1155, NULL, A, 1, 5, "Mint", 8, 0, 107, 0, 0)
event("ERC1155", NFT1155, NULL, A, 2, 6, "Mint", 8, 0, 107, 0, 1)

# 10: TransferBatch burn ids [1,2] values [3,4] to the dead address
log(9, 2, NFT1155, [BATCH, topic_addr(OP), topic_addr(A), topic_addr(DEAD)],
    encode(["uint256[]", "uint256[]"], [[1, 2], [3, 4]]), 108, 0)
event("ERC1155", NFT1155, A, DEAD, 1, 3, "Burn", 9, 2, 108, 0, 0)
event("ERC1155", NFT1155, A, DEAD, 2, 4, "Burn", 9, 2, 108, 0, 1)

# 11: ERC-20 Transfer (same topic-0, value in data) -> skipped
log(10, 0, TOKEN20, [T721, topic_addr(A), topic_addr(B)], encode(["uint256"], [5 * ETH]), 109, 0)
# 12: unrelated event -> skipped
log(11, 0, NFT721, [APPROVAL, topic_addr(A), topic_addr(B), topic_uint(7)], b"", 110, 0)

with open(HERE / "transfer_logs.jsonl", "w") as f:
    for r in logs:
        f.write(json.dumps(r) + "\n")
with open(HERE / "transfer_expected.jsonl", "w") as f:
    for r in expected:
        f.write(json.dumps(r) + "\n")
