"""Generate a small flow-record CSV with the UNSW-NB15 column layout.

The values are synthetic: labels depend on a handful of features through a
noisy rule so neither model scores perfectly. Used as a test fixture.

    python scripts/make_synthetic_flows.py crates/core/tests/data/flows_synthetic.csv [rows]
"""

import sys

import numpy as np
import pandas as pd

COLUMNS = [
    "id", "dur", "proto", "service", "state", "spkts", "dpkts", "sbytes", "dbytes",
    "rate", "sttl", "dttl", "sload", "dload", "sloss", "dloss", "sinpkt", "dinpkt",
    "sjit", "djit", "swin", "stcpb", "dtcpb", "dwin", "tcprtt", "synack", "ackdat",
    "smean", "dmean", "trans_depth", "response_body_len", "ct_srv_src",
    "ct_state_ttl", "ct_dst_ltm", "ct_src_dport_ltm", "ct_dst_sport_ltm",
    "ct_dst_src_ltm", "is_ftp_login", "ct_ftp_cmd", "ct_flw_http_mthd",
    "ct_src_ltm", "ct_srv_dst", "is_sm_ips_ports", "attack_cat", "label",
]

ATTACKS = ["Generic", "Exploits", "Fuzzers", "DoS", "Reconnaissance", "Analysis", "Backdoor"]


def choose(rng, options, probs, size):
    return rng.choice(options, size=size, p=np.asarray(probs) / np.sum(probs))


def generate(n=5000, seed=20240607):
    rng = np.random.default_rng(seed)
    label = (rng.random(n) < 0.55).astype(int)
    attack = label == 1

    proto = np.where(
        attack,
        choose(rng, ["tcp", "udp", "unas", "arp", "ospf", "sctp"], [45, 30, 12, 3, 6, 4], n),
        choose(rng, ["tcp", "udp", "arp", "ospf"], [60, 34, 5, 1], n),
    )
    service = np.where(
        attack,
        choose(rng, ["-", "dns", "http", "smtp", "ftp", "ftp-data"], [40, 30, 15, 5, 5, 5], n),
        choose(rng, ["-", "dns", "http", "smtp", "ftp", "ftp-data", "ssh", "pop3"], [45, 20, 15, 6, 4, 6, 3, 1], n),
    )
    state = np.where(
        attack,
        choose(rng, ["INT", "FIN", "CON", "REQ"], [55, 35, 5, 5], n),
        choose(rng, ["FIN", "CON", "INT", "REQ", "RST"], [60, 20, 15, 4, 1], n),
    )

    dur = np.round(rng.exponential(np.where(attack, 0.4, 1.2)), 6)
    spkts = rng.poisson(np.where(attack, 6, 14)) + 1
    dpkts = rng.poisson(np.where(attack, 3, 16))
    sbytes = np.round(spkts * rng.lognormal(np.where(attack, 5.0, 5.3), 0.6)).astype(int)
    dbytes = np.round(dpkts * rng.lognormal(np.where(attack, 4.5, 6.0), 0.8)).astype(int)
    rate = np.round((spkts + dpkts) / (dur + 1e-3), 4)
    # sttl is the strongest cue, blurred so that classes overlap
    sttl = np.where(
        rng.random(n) < 0.82,
        np.where(attack, 254, choose(rng, [31, 62], [3, 1], n)),
        choose(rng, [0, 31, 62, 254], [1, 3, 2, 3], n),
    )
    dttl = np.where(dpkts > 0, choose(rng, [0, 29, 252], [2, 6, 2], n), 0)
    sload = np.round(sbytes * 8 / (dur + 1e-3), 3)
    dload = np.round(dbytes * 8 / (dur + 1e-3), 3)
    sloss = rng.binomial(spkts, 0.02)
    dloss = rng.binomial(np.maximum(dpkts, 0), 0.03)
    sinpkt = np.round(dur * 1000 / spkts, 4)
    dinpkt = np.round(np.where(dpkts > 0, dur * 1000 / np.maximum(dpkts, 1), 0.0), 4)
    sjit = np.round(rng.gamma(2.0, np.where(attack, 5.0, 20.0)), 4)
    djit = np.round(rng.gamma(2.0, 10.0, n), 4)
    tcp = proto == "tcp"
    swin = np.where(tcp, 255, 0)
    dwin = np.where(tcp & (dpkts > 0), 255, 0)
    stcpb = np.where(tcp, rng.integers(0, 2**32, n), 0)
    dtcpb = np.where(tcp & (dpkts > 0), rng.integers(0, 2**32, n), 0)
    synack = np.round(np.where(tcp, rng.exponential(0.05, n), 0.0), 6)
    ackdat = np.round(np.where(tcp, rng.exponential(0.04, n), 0.0), 6)
    tcprtt = np.round(synack + ackdat, 6)
    smean = (sbytes // spkts).astype(int)
    dmean = np.where(dpkts > 0, dbytes // np.maximum(dpkts, 1), 0).astype(int)
    http = service == "http"
    trans_depth = np.where(http, rng.integers(0, 3, n), 0)
    response_body_len = np.where(http, rng.integers(0, 20000, n), 0)
    ct_srv_src = rng.poisson(np.where(attack, 14, 6)) + 1
    ct_state_ttl = np.where(attack, choose(rng, [1, 2, 3], [2, 6, 2], n), choose(rng, [0, 1, 2], [6, 3, 1], n))
    ct_dst_ltm = rng.poisson(np.where(attack, 9, 4)) + 1
    ct_src_dport_ltm = rng.poisson(np.where(attack, 8, 2)) + 1
    ct_dst_sport_ltm = rng.poisson(np.where(attack, 6, 1)) + 1
    ct_dst_src_ltm = rng.poisson(np.where(attack, 12, 5)) + 1
    ftp = np.isin(service, ["ftp", "ftp-data"])
    is_ftp_login = np.where(ftp, rng.integers(0, 2, n), 0)
    ct_ftp_cmd = is_ftp_login.copy()
    ct_flw_http_mthd = np.where(http, rng.integers(0, 4, n), 0)
    ct_src_ltm = rng.poisson(np.where(attack, 9, 4)) + 1
    ct_srv_dst = rng.poisson(np.where(attack, 14, 6)) + 1
    is_sm_ips_ports = (rng.random(n) < 0.01).astype(int)
    attack_cat = np.where(attack, choose(rng, ATTACKS, [30, 25, 15, 10, 10, 5, 5], n), "Normal")

    # a few percent of flipped labels keeps the task from being separable
    flip = rng.random(n) < 0.04
    label = np.where(flip, 1 - label, label)

    frame = pd.DataFrame({
        "id": np.arange(1, n + 1),
        "dur": dur, "proto": proto, "service": service, "state": state,
        "spkts": spkts, "dpkts": dpkts, "sbytes": sbytes, "dbytes": dbytes,
        "rate": rate, "sttl": sttl, "dttl": dttl, "sload": sload, "dload": dload,
        "sloss": sloss, "dloss": dloss, "sinpkt": sinpkt, "dinpkt": dinpkt,
        "sjit": sjit, "djit": djit, "swin": swin, "stcpb": stcpb, "dtcpb": dtcpb,
        "dwin": dwin, "tcprtt": tcprtt, "synack": synack, "ackdat": ackdat,
        "smean": smean, "dmean": dmean, "trans_depth": trans_depth,
        "response_body_len": response_body_len, "ct_srv_src": ct_srv_src,
        "ct_state_ttl": ct_state_ttl, "ct_dst_ltm": ct_dst_ltm,
        "ct_src_dport_ltm": ct_src_dport_ltm, "ct_dst_sport_ltm": ct_dst_sport_ltm,
        "ct_dst_src_ltm": ct_dst_src_ltm, "is_ftp_login": is_ftp_login,
        "ct_ftp_cmd": ct_ftp_cmd, "ct_flw_http_mthd": ct_flw_http_mthd,
        "ct_src_ltm": ct_src_ltm, "ct_srv_dst": ct_srv_dst,
        "is_sm_ips_ports": is_sm_ips_ports, "attack_cat": attack_cat, "label": label,
    })
    assert list(frame.columns) == COLUMNS
    return frame


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "flows_synthetic.csv"
    rows = int(sys.argv[2]) if len(sys.argv) > 2 else 5000
    generate(n=rows).to_csv(out, index=False)
