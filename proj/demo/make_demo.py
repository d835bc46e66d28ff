"""Builds the demo dataset and its ground truth.

Five seed collections, sixteen candidates and about 170 chain records
arranged so every stage has work to do:

  * eight squat collections that meet at least four filter criteria,
  * one candidate with only three criteria, one healthy look-alike,
  * one whitelisted derivative and one deployed before its target,
  * four names that match nothing,
  * three campaigns: shared link, shared creator, shared deposit address.

expected.json is derived from the tables below, not from the pipeline.

Usage: python3 make_demo.py  (writes next to this file)
"""
import csv
import hashlib
import json
import random
import shutil
from fractions import Fraction
from pathlib import Path

from eth_abi import encode
from PIL import Image

HERE = Path(__file__).parent
ETH = 10**18
MILLI = 10**15

T721 = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"
SINGLE = "0xc3d58168c5ae7397731d063d5bbf3d657854427343f4c083240f7aacaa2d0f62"
APPROVAL = "0x8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925"
TAKER_ASK = "0x68cd251d4d267c6e2034ff0088b990352b97b2002c0476587d0c4da889c11330"
TAKER_BID = "0x95fb6205e23ff6bda16a2d1dba56b9ad7c783f67c96fa149785052f47696f2be"
LOOKSRARE = "0x59728544b08ab483533076417fbbb2fd0b17ce3a"
WETH = "0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2"
NULL = "0x" + "00" * 20

BASE_TS = 1651363200  # 2022-05-01T00:00:00Z
BASE_BLOCK = 14_690_000
DAY = 86400


def addr(prefix, n):
    return "0x" + prefix + format(n, "0%dx" % (40 - len(prefix)))


def block_at(ts):
    return BASE_BLOCK + (ts - BASE_TS) // 13


def ts_at(day, second=0):
    return BASE_TS + day * DAY + second


def topic_addr(a):
    return "0x" + "00" * 12 + a[2:]


def topic_uint(n):
    return "0x" + n.to_bytes(32, "big").hex()


_tx_counter = [0]


def new_tx():
    _tx_counter[0] += 1
    return "0x" + hashlib.sha256(b"demo-tx-%d" % _tx_counter[0]).hexdigest()


# ---------------------------------------------------------------------------
# Actors

victim = {i: addr("a1", i) for i in range(1, 31)}
creator = {k: addr("c0", i) for i, k in enumerate("ABCDEFGHNJKLMP", start=1)}
EXCHANGE = addr("e0", 1)
EXCHANGE2 = addr("e0", 2)
DEPOSIT_X = addr("d0", 1)   # shared by creators E and F
DEPOSIT_Y = addr("d0", 2)   # amount gap too large
DEPOSIT_Z = addr("d0", 3)   # block gap too large
HOP = addr("b0", 1)

seeds = [
    dict(rank=1, name="Azuki", contract_address=addr("0f", 1), deploy_block=13_975_838,
         market_cap_wei=str(300_000 * ETH), link="https://www.azuki.com", tokens=3),
    dict(rank=2, name="Bored Ape Yacht Club", contract_address=addr("0f", 2), deploy_block=12_287_507,
         market_cap_wei=str(900_000 * ETH), link="https://boredapeyachtclub.com", tokens=0),
    dict(rank=3, name="Moonbirds", contract_address=addr("0f", 3), deploy_block=14_591_056,
         market_cap_wei=str(200_000 * ETH), link="https://www.moonbirds.xyz", tokens=3),
    dict(rank=4, name="Doodles", contract_address=addr("0f", 4), deploy_block=13_430_097,
         market_cap_wei=str(150_000 * ETH), link="https://doodles.app", tokens=3),
    dict(rank=5, name="Milady Maker", contract_address=addr("0f", 5), deploy_block=13_090_020,
         market_cap_wei=str(50_000 * ETH), link="https://miladymaker.net", tokens=3),
]
seed_by_name = {s["name"]: s for s in seeds}

# Squat collections. mints: (recipient, tokens, paid wei for the tx).
# trades: (day, seller, buyer, price wei, side); image: (kind, seed, token).
squats = [
    dict(key="S1", name="Azuki NFT", target="Azuki", tactic="CombinationSquatting", creator="A",
         link="https://fakemint.io/", royalty=750, standard="ERC721",
         mints=[(victim[1], 2, 100 * MILLI), (victim[2], 1, 50 * MILLI), (victim[3], 1, 50 * MILLI)],
         trades=[(10, victim[1], victim[4], 200 * MILLI, "ask"), (20, victim[2], creator["B"], 10 * MILLI, "bid")],
         labels=["Spam"], image=("exact", "Azuki", 1)),
    dict(key="S2", name="Moonbhirds", target="Moonbirds", tactic="CharacterInsertion", creator="B",
         link="http://FAKEMINT.io", royalty=500, standard="ERC721",
         mints=[(victim[1], 1, 80 * MILLI), (victim[5], 1, 80 * MILLI)],
         trades=[(11, victim[5], victim[6], 300 * MILLI, "ask"), (21, victim[1], victim[7], 12 * MILLI, "ask")],
         labels=[], image=("similar", "Moonbirds", 2)),
    dict(key="S3", name="Doodle", target="Doodles", tactic="CharacterOmission", creator="C",
         link="fakemint.io", royalty=0, standard="ERC721",
         mints=[(victim[8], 1, 30 * MILLI), (victim[9], 1, 30 * MILLI), (victim[10], 1, 30 * MILLI)],
         trades=[(12, victim[8], victim[11], 150 * MILLI, "bid"), (22, victim[9], victim[12], 5 * MILLI, "ask")],
         labels=[], image=("exact", "Doodles", 1), steal_uris=True),
    dict(key="S4", name="MIlady Maker", target="Milady Maker", tactic="CaseSubstitution", creator="D",
         link=None, royalty=1000, standard="ERC721",
         mints=[(creator["D"], 1, 0), (victim[13], 1, 0), (victim[14], 1, 0)],
         trades=[(10, victim[13], victim[15], 400 * MILLI, "ask"), (25, victim[14], victim[16], 20 * MILLI, "ask")],
         labels=[], image=("similar", "Milady Maker", 3)),
    dict(key="S5", name="Board Ape Yacht Club", target="Bored Ape Yacht Club", tactic="Homophone", creator="D",
         link=None, royalty=250, standard="ERC721",
         mints=[(victim[17], 1, 100 * MILLI), (victim[18], 1, 100 * MILLI)],
         trades=[(13, victim[17], victim[19], 1000 * MILLI, "ask"), (23, victim[18], creator["D"], 50 * MILLI, "bid")],
         labels=["Phishing"], image=("own", None, None)),
    dict(key="S6", name="Azuki2", target="Azuki", tactic="CombinationSquatting", creator="E",
         link=None, royalty=None, standard="ERC721",
         mints=[(victim[2], 1, 20 * MILLI), (victim[20], 1, 20 * MILLI), (victim[21], 1, 20 * MILLI),
                (victim[22], 1, 20 * MILLI)],
         trades=[(14, victim[20], victim[23], 90 * MILLI, "ask"), (24, victim[21], victim[2], 3 * MILLI, "ask")],
         labels=["Malicious"], image=("own", None, None), rgb=True),
    dict(key="S7", name="Malady Maker", target="Milady Maker", tactic="MisspellingSubstitution", creator="F",
         link=None, royalty=500, standard="ERC1155",
         mints=[(creator["F"], 5, 0), (victim[24], 2, 0)],
         trades=[(15, creator["F"], victim[25], 250 * MILLI, "ask"), (26, victim[24], victim[26], 7 * MILLI, "ask")],
         labels=["Spam"], image=("own", None, None)),
    dict(key="S8", name="AZUKl", target="Azuki", tactic="Homoglyph", creator="G",
         link="https://www.azuki.com", royalty=0, standard="ERC721",
         mints=[(creator["G"], 1, 0), (victim[27], 1, 0)],
         trades=[(16, victim[27], victim[28], 100 * MILLI, "ask"), (27, creator["G"], victim[29], 2 * MILLI, "ask")],
         labels=["Spam"], image=("own", None, None), reuse_uri=True),
]

# Other candidates. kind: "three" meets three criteria, "healthy" none,
# "whitelist" / "early" are excluded before evaluation, "nomatch" never match.
others = [
    dict(key="N1", name="Doodles Collection", target="Doodles", creator="N", kind="healthy", royalty=500,
         deploy_block=14_700_100),
    dict(key="N2", name="Azuki Collection", target="Azuki", creator="A", kind="three", royalty=500,
         deploy_block=14_700_200),
    dict(key="W1", name="Doodles Club", target="Doodles", creator="J", kind="whitelist", royalty=0,
         deploy_block=14_700_300),
    dict(key="E1", name="Moonbirds Genesis", target="Moonbirds", creator="K", kind="early", royalty=0,
         deploy_block=14_500_000),
    dict(key="X1", name="CryptoCars", creator="L", kind="nomatch", deploy_block=14_700_400),
    dict(key="X2", name="r00ts Yacht Club", creator="L", kind="nomatch", deploy_block=14_700_500),
    dict(key="X3", name="Sunset Pixels", creator="M", kind="nomatch", deploy_block=14_700_600),
    dict(key="X4", name="Galaxy Frogs", creator="P", kind="nomatch", deploy_block=14_700_700),
]

for i, s in enumerate(squats, start=1):
    s["contract"] = addr("5a", i)
    s["deploy_block"] = 14_700_000 + i
for i, o in enumerate(others, start=1):
    o["contract"] = addr("7e", i)


# ---------------------------------------------------------------------------
# DHash oracle (exact area averages with fractions) and images

def dhash_bits(pixels, w, h):
    def cells(src, n):
        out = []
        for c in range(n):
            lo, hi = Fraction(c * src, n), Fraction((c + 1) * src, n)
            spans = []
            for x in range(src):
                a, b = max(lo, Fraction(x)), min(hi, Fraction(x + 1))
                if b > a:
                    spans.append((x, b - a))
            out.append(spans)
        return out

    cols, rows = cells(w, 9), cells(h, 8)
    bits = 0
    for r in range(8):
        vals = []
        for c in range(9):
            vals.append(sum(wy * wx * pixels[y * w + x] for y, wy in rows[r] for x, wx in cols[c]))
        for c in range(8):
            if vals[c] < vals[c + 1]:
                bits |= 1 << (r * 8 + c)
    return bits


def luma(r, g, b):
    return (299 * r + 587 * g + 114 * b + 500) // 1000


SIZE = 48


def random_image(rng):
    grid = [[rng.randrange(256) for _ in range(6)] for _ in range(6)]
    px = []
    for y in range(SIZE):
        for x in range(SIZE):
            v = grid[y * 6 // SIZE][x * 6 // SIZE] + rng.randrange(-6, 7)
            px.append(min(255, max(0, v)))
    return px


def perturb(px, rng, base_bits):
    """A copy with a local change that moves the hash by 1 to 4 bits."""
    while True:
        out = list(px)
        cx, cy = rng.randrange(SIZE - 8), rng.randrange(SIZE - 8)
        delta = rng.choice([-1, 1]) * rng.randrange(20, 60)
        for y in range(cy, cy + 8):
            for x in range(cx, cx + 8):
                out[y * SIZE + x] = min(255, max(0, out[y * SIZE + x] + delta))
        d = bin(dhash_bits(out, SIZE, SIZE) ^ base_bits).count("1")
        if 1 <= d <= 4:
            return out, d


def save_gray(path, px):
    path.parent.mkdir(parents=True, exist_ok=True)
    img = Image.new("L", (SIZE, SIZE))
    img.putdata(px)
    img.save(path)


def save_rgb(path, rng):
    """Colour image; returns the luminance the decoder will see."""
    path.parent.mkdir(parents=True, exist_ok=True)
    rgb = [(rng.randrange(256), rng.randrange(256), rng.randrange(256)) for _ in range(36)]
    data, gray = [], []
    for y in range(SIZE):
        for x in range(SIZE):
            p = rgb[(y * 6 // SIZE) * 6 + x * 6 // SIZE]
            data.append(p)
            gray.append(luma(*p))
    img = Image.new("RGB", (SIZE, SIZE))
    img.putdata(data)
    img.save(path)
    return gray


# ---------------------------------------------------------------------------
# Chain records

logs, txs = [], []
log_index = {}


def emit(tx, ts, contract, topics, data=b"", value=0):
    i = log_index.get(tx, 0)
    log_index[tx] = i + 1
    logs.append(dict(tx_hash=tx, log_index=i, contract=contract, topics=topics, data="0x" + data.hex(),
                     block=block_at(ts), timestamp=ts, tx_value_wei=str(value)))


def transfer(contract, standard, tx, ts, frm, to, token, amount=1, value=0):
    if standard == "ERC1155":
        emit(tx, ts, contract, [SINGLE, topic_addr(frm), topic_addr(frm), topic_addr(to)],
             encode(["uint256", "uint256"], [token, amount]), value)
    else:
        emit(tx, ts, contract, [T721, topic_addr(frm), topic_addr(to), topic_uint(token)], b"", value)


def trade(contract, tx, ts, seller, buyer, token, price, side):
    data = encode(["bytes32", "uint256", "address", "address", "uint256", "uint256", "uint256"],
                  [hashlib.sha256(tx.encode()).digest(), 1, WETH, contract, token, 1, price])
    if side == "ask":  # taker sells into a bid
        topics = [TAKER_ASK, topic_addr(seller), topic_addr(buyer), topic_addr(addr("57", 1))]
    else:  # taker buys an ask
        topics = [TAKER_BID, topic_addr(buyer), topic_addr(seller), topic_addr(addr("57", 1))]
    emit(tx, ts, LOOKSRARE, topics, data, price)


def plain(frm, to, value, block):
    txs.append(dict(tx_hash=new_tx(), **{"from": frm}, to=to, value_wei=str(value), block=block))


def mint_and_trade(c, standard, mints, trade_rows, start_day=1):
    """Mints in order (token ids from 1), then trades token i by its minter."""
    owner_of = {}
    token = 1
    for n, (to, count, paid) in enumerate(mints):
        tx = new_tx()
        ts = ts_at(start_day + n // 3, 3600 * (n % 3 + 1))
        for _ in range(count if standard == "ERC721" else 1):
            transfer(c, standard, tx, ts, NULL, to, token, amount=count if standard == "ERC1155" else 1, value=paid)
            owner_of[token] = to
            token += 1
    for day, seller, buyer, price, side in trade_rows:
        tok = next(t for t, o in sorted(owner_of.items()) if o == seller)
        tx = new_tx()
        ts = ts_at(day, 7200)
        transfer(c, standard, tx, ts, seller, buyer, tok, value=price if side == "bid" else 0)
        trade(c, tx, ts, seller, buyer, tok, price, side)
        owner_of[tok] = buyer
    return token - 1


# ---------------------------------------------------------------------------

def main():
    rng = random.Random(20220501)
    images = HERE / "images"
    if images.exists():
        shutil.rmtree(images)

    official_px = {}
    metadata = []
    for s in seeds:
        tokens = {}
        for t in range(1, s["tokens"] + 1):
            px = random_image(rng)
            official_px[(s["name"], t)] = px
            save_gray(images / s["contract_address"] / f"{t}.png", px)
            tokens[str(t)] = f"ipfs://Qm{s['name'].replace(' ', '')}/{t}"
        metadata.append(dict(contract=s["contract_address"], name=s["name"], creator=addr("0c", s["rank"]),
                             royalty_bps=500, external_link=s["link"], token_uris=tokens, official_flag=True))

    squat_px = {}
    designed_image_pairs = {}
    for s in squats:
        kind, seed_name, tok = s["image"]
        path = images / s["contract"] / "1.png"
        if kind == "exact":
            px = official_px[(seed_name, tok)]
            save_gray(path, px)
            designed_image_pairs[s["key"]] = ("exact", tok)
        elif kind == "similar":
            base = official_px[(seed_name, tok)]
            px, _ = perturb(base, rng, dhash_bits(base, SIZE, SIZE))
            save_gray(path, px)
            designed_image_pairs[s["key"]] = ("similar", tok)
        elif s.get("rgb"):
            px = save_rgb(path, rng)
        else:
            px = random_image(rng)
            save_gray(path, px)
        squat_px[s["key"]] = {1: px}
        if s.get("steal_uris"):
            px2 = official_px[(seed_name, 2)]
            save_gray(images / s["contract"] / "2.png", px2)
            squat_px[s["key"]][2] = px2
    for o in others:
        if o["kind"] in ("healthy", "three"):
            px = random_image(rng)
            save_gray(images / o["contract"] / "1.png", px)
            squat_px[o["key"]] = {1: px}

    # Image pairs as the oracle sees them; the designed ones must be the
    # only ones under the threshold.
    off_hashes = {k: dhash_bits(v, SIZE, SIZE) for k, v in official_px.items()}
    image_pairs = {}
    for col in squats + others:
        if col["key"] not in squat_px or "target" not in col:
            continue
        exact = similar = 0
        for (seed_name, t), h in off_hashes.items():
            if seed_name != col["target"]:
                continue
            for st, px in squat_px[col["key"]].items():
                d = bin(h ^ dhash_bits(px, SIZE, SIZE)).count("1")
                exact += d == 0
                similar += 0 < d < 5
        image_pairs[col["key"]] = (exact, similar)
    for k, (e, sim) in image_pairs.items():
        designed = designed_image_pairs.get(k)
        if designed is None:
            assert e == 0 and sim == 0, (k, e, sim)
        elif designed[0] == "exact":
            assert e >= 1 and sim == 0, (k, e, sim)
        else:
            assert e == 0 and sim == 1, (k, e, sim)

    # Squat chain activity: all in May 2022.
    for s in squats:
        n_tokens = mint_and_trade(s["contract"], s["standard"], s["mints"], s["trades"])
        uris = {}
        for t in range(1, n_tokens + 1):
            uris[str(t)] = f"ipfs://Qm{s['key']}/{t}"
        if s.get("steal_uris"):
            uris["1"] = "ipfs://QmDoodles/1"
            uris["2"] = "ipfs://QmDoodles/2"
        if s.get("reuse_uri"):
            uris = {str(t): "ipfs://QmSameImage/0" for t in range(1, n_tokens + 1)}
        m = dict(contract=s["contract"], name=s["name"], creator=creator[s["creator"]],
                 token_uris=uris, official_flag=False)
        if s["royalty"] is not None:
            m["royalty_bps"] = s["royalty"]
        if s["link"]:
            m["external_link"] = s["link"]
        metadata.append(m)

    # N2: collapses and stays silent but has no label and no copied image.
    n2 = others[1]
    mint_and_trade(n2["contract"], "ERC721",
                   [(victim[30], 1, 10 * MILLI), (victim[3], 1, 10 * MILLI)],
                   [(12, victim[30], victim[4], 100 * MILLI, "ask"), (22, victim[3], victim[5], 5 * MILLI, "ask")])
    # N1: steady trading through October, posts after its last sale.
    n1 = others[0]
    holders = [victim[i] for i in range(6, 26)]
    rows = []
    for m in range(6):
        for k in range(4):
            i = 4 * m + k
            seller, buyer = holders[i % 20], victim[1 + (i + 7) % 30]
            if seller == buyer:
                buyer = victim[1 + (i + 8) % 30]
            rows.append((31 * m + 5 + 6 * k, seller, buyer, 500 * MILLI + i * 5 * MILLI, "ask"))
            holders[i % 20] = buyer
    mint_and_trade(n1["contract"], "ERC721", [(v, 1, 10 * MILLI) for v in [victim[i] for i in range(6, 26)]], rows)
    # W1, E1: a couple of mints each.
    for o in others[2:4]:
        mint_and_trade(o["contract"], "ERC721", [(victim[i], 1, 10 * MILLI) for i in range(1, 16)], [])
    for o in others:
        if o["kind"] == "nomatch":
            continue
        uris = {"1": f"ipfs://Qm{o['key']}/1"}
        metadata.append(dict(contract=o["contract"], name=o["name"], creator=creator[o["creator"]],
                             royalty_bps=o["royalty"], token_uris=uris, official_flag=False))

    # Noise the decoders must skip: an ERC-20 transfer and an approval.
    tx = new_tx()
    emit(tx, ts_at(3), addr("20", 1), [T721, topic_addr(victim[1]), topic_addr(victim[2])],
         encode(["uint256"], [5 * ETH]))
    emit(tx, ts_at(3), squats[0]["contract"], [APPROVAL, topic_addr(victim[1]), topic_addr(victim[2]),
                                                topic_uint(1)])

    logs.sort(key=lambda r: (r["block"], r["tx_hash"], r["log_index"]))

    # Plain transactions for deposit detection.
    b0 = 14_800_000
    plain(creator["E"], DEPOSIT_X, 1 * ETH, b0)
    plain(DEPOSIT_X, EXCHANGE, 995 * MILLI, b0 + 120)
    plain(creator["F"], HOP, 3 * ETH, b0 + 500)
    plain(HOP, DEPOSIT_X, 2 * ETH, b0 + 900)
    plain(DEPOSIT_X, EXCHANGE, 1999 * MILLI, b0 + 10_900)      # gap exactly 10,000
    plain(creator["G"], DEPOSIT_Y, 1 * ETH, b0 + 2000)
    plain(DEPOSIT_Y, EXCHANGE2, 990 * MILLI, b0 + 2010)         # diff exactly 0.01 ETH
    plain(creator["A"], DEPOSIT_Z, 1 * ETH, b0 + 3000)
    plain(DEPOSIT_Z, EXCHANGE, 1 * ETH - 1, b0 + 13_001)        # gap 10,001
    plain(victim[4], EXCHANGE, 500 * MILLI, b0 + 4000)          # no inflow to pair with
    plain(creator["D"], creator["D"], 0, b0 + 4100)
    plain(EXCHANGE, victim[5], 2 * ETH, b0 + 4200)

    # ---------------------------------------------------------------------
    # Files

    def dump_jsonl(name, rows):
        with open(HERE / name, "w") as f:
            for r in rows:
                f.write(json.dumps(r) + "\n")

    dump_jsonl("seeds.jsonl", [{k: s[k] for k in ("rank", "name", "contract_address", "deploy_block",
                                                  "market_cap_wei")} for s in seeds])
    cands = []
    for s in seeds:
        cands.append(dict(contract_address=s["contract_address"], name=s["name"], standard="ERC721",
                          deploy_block=s["deploy_block"], creator=addr("0c", s["rank"])))
    for s in squats:
        cands.append(dict(contract_address=s["contract"], name=s["name"], standard=s["standard"],
                          deploy_block=s["deploy_block"], creator=creator[s["creator"]]))
    for o in others:
        cands.append(dict(contract_address=o["contract"], name=o["name"], standard="ERC721",
                          deploy_block=o["deploy_block"], creator=creator[o["creator"]]))
    dump_jsonl("candidates.jsonl", cands)
    dump_jsonl("logs.jsonl", logs)
    dump_jsonl("transactions.jsonl", txs)
    metadata.sort(key=lambda m: m["contract"])
    dump_jsonl("metadata.jsonl", metadata)
    dump_jsonl("labels.jsonl", [dict(contract=s["contract"], source="explorer", label=l)
                                for s in squats for l in s["labels"]])
    n1_last = max(r["timestamp"] for r in logs if r["contract"] == n1["contract"] or
                  (r["contract"] == LOOKSRARE and n1["contract"][2:] in r["data"]))
    dump_jsonl("social.jsonl", [
        dict(contract=n1["contract"], post_timestamps=[ts_at(0), n1_last + 5 * DAY]),
        dict(contract=squats[2]["contract"], post_timestamps=[ts_at(0)]),
    ])
    (HERE / "exchanges.txt").write_text(f"# exchange hot wallets\n{EXCHANGE}\n{EXCHANGE2}\n")
    (HERE / "whitelist.txt").write_text(f"# known derivative projects\n{others[2]['contract']}\n")
    with open(HERE / "usd.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "wei_per_usd"])
        w.writerow(["2022-05-01", ETH // 2800])
        w.writerow(["2022-06-01", ETH // 1800])
    config = dict(seeds="seeds.jsonl", candidates="candidates.jsonl", logs="logs.jsonl",
                  transactions="transactions.jsonl", metadata="metadata.jsonl", exchanges="exchanges.txt",
                  whitelist="whitelist.txt", labels="labels.jsonl", social="social.jsonl", images="images",
                  usd_table="usd.csv", output_dir="out")
    (HERE / "config.json").write_text(json.dumps(config, indent=2) + "\n")

    # ---------------------------------------------------------------------
    # Ground truth

    def members(keys):
        return sorted(next(s["contract"] for s in squats if s["key"] == k) for k in keys)

    campaigns = [
        dict(archetype="LinkCentered", members=members(["S1", "S2", "S3"]), creators=sorted(creator[c] for c in "ABC")),
        dict(archetype="CreatorCentered", members=members(["S4", "S5"]), creators=[creator["D"]]),
        dict(archetype="Mixed", members=members(["S6", "S7"]), creators=sorted(creator[c] for c in "EF")),
    ]
    scammers = {}
    for c in campaigns:
        for m in c["members"]:
            scammers[m] = set(c["creators"])
    per_collection = {}
    fee_total = earn_total = 0
    all_minters, all_buyers = set(), set()
    for s in squats:
        sc = scammers.get(s["contract"], {creator[s["creator"]]})
        fee = sum(paid for _, _, paid in s["mints"])
        bps = s["royalty"] or 0
        earn = sum(price * bps // 10000 for _, _, _, price, _ in s["trades"])
        minters = {to for to, _, paid in s["mints"] if paid > 0 and to not in sc}
        buyers = {b for _, _, b, _, _ in s["trades"] if b not in sc}
        all_minters |= minters
        all_buyers |= buyers
        fee_total += fee
        earn_total += earn
        channel = {(True, True): "both", (True, False): "mint-only", (False, True): "earnings-only",
                   (False, False): "neither"}[(fee > 0, earn > 0)]
        per_collection[s["contract"]] = dict(
            key=s["key"], name=s["name"], target=s["target"], tactic=s["tactic"], mint_fee_wei=str(fee),
            creator_earnings_wei=str(earn), channel_class=channel, victims=len(minters | buyers))

    expected = dict(
        candidates=len(cands),
        matches=len(squats) + sum(o["kind"] != "nomatch" for o in others),
        prefiltered=dict(DerivativeWhitelist=1, DeployedBeforeOfficial=1),
        squat_collections=len(squats),
        squats=sorted(s["contract"] for s in squats),
        not_suspicious=sorted(o["contract"] for o in others if o["kind"] in ("healthy", "three")),
        campaigns=campaigns,
        singletons=[s["contract"] for s in squats if s["key"] == "S8"],
        deposit_addresses=[DEPOSIT_X],
        profit=dict(mint_fee_wei=str(fee_total), creator_earnings_wei=str(earn_total),
                    total_wei=str(fee_total + earn_total)),
        victims=dict(total=len(all_minters | all_buyers), minters=len(all_minters), buyers=len(all_buyers)),
        image_pairs={next(c["contract"] for c in squats + others if c["key"] == k): dict(exact=e, similar=sim)
                     for k, (e, sim) in sorted(image_pairs.items()) if e or sim},
        per_collection=per_collection,
    )
    (HERE / "expected.json").write_text(json.dumps(expected, indent=2) + "\n")
    print(f"{len(cands)} candidates, {len(logs)} logs, {len(txs)} transactions")


if __name__ == "__main__":
    main()
