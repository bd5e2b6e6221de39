#!/usr/bin/env python3
"""Brute-force reference outputs for the bundled fixture.

Recomputes the default pipeline profile (intersection at 46, cleanup,
mutual-best sentence alignment, 30-character filter, metrics at 46) with
plain loops over the fixture vectors and writes expected/*.json. Sentences
come from the generator's own sentence lists, not from a segmenter.
"""

import json
import math
import pathlib
import struct
from collections import Counter

import numpy as np
from scipy import stats

from make_fixture import DOCS, HERE

THRESHOLD = 46.0
ANALYSIS_THRESHOLD = 46.0
MIN_CHARS = 30
SUSPICIOUS = 99.5
TRIGRAM = 0.9
MARKERS = ["Cet article n'est pas disponible", "Dieser Artikel ist nicht verfügbar"]


def read_xdemb(path):
    raw = path.read_bytes()
    assert raw[:7] == b"XDEMB1\0"
    rows, dim = struct.unpack_from("<II", raw, 7)
    off = 15
    data = np.frombuffer(raw, dtype="<f4", count=rows * dim, offset=off).reshape(rows, dim)
    off += rows * dim * 4
    ids = []
    for _ in range(rows):
        (n,) = struct.unpack_from("<I", raw, off)
        off += 4
        ids.append(raw[off:off + n].decode("utf-8"))
        off += n
    return {i: data[k].astype(np.float64) for k, i in enumerate(ids)}


def score(u, v):
    c = 100.0 * float(np.dot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return max(-100.0, min(100.0, c))


def mutual_best(rows, cols, vec, threshold):
    s = [[score(vec[r], vec[c]) for c in cols] for r in rows]
    out = []
    for i in range(len(rows)):
        for j in range(len(cols)):
            row_best = max(range(len(cols)), key=lambda k: (s[i][k], -k))
            col_best = max(range(len(rows)), key=lambda k: (s[k][j], -k))
            if row_best == j and col_best == i and s[i][j] >= threshold:
                out.append((i, j, s[i][j]))
    return out


def trigrams(text):
    t = text.lower()
    return Counter(t[i:i + 3] for i in range(len(t) - 2))


def trigram_cos(a, b):
    ca, cb = trigrams(a), trigrams(b)
    dot = sum(ca[k] * cb[k] for k in ca)
    na = math.sqrt(sum(v * v for v in ca.values()))
    nb = math.sqrt(sum(v * v for v in cb.values()))
    return 0.0 if na == 0 or nb == 0 else dot / (na * nb)


def defined(x):
    return None if x is None or math.isnan(x) else float(x)


def main():
    docs = {}
    for story, date, lang, title, lead, sentences in DOCS:
        docs[f"{lang}-{story}"] = dict(date=date, lang=lang, title=title, lead=lead,
                                       sentences=[t for _, t in sentences])
    doc_vec = read_xdemb(HERE / "doc_vectors.xdemb")
    sent_vec = read_xdemb(HERE / "sentence_vectors.xdemb")

    candidates = []
    for date in sorted({d["date"] for d in docs.values()}):
        de = [k for k, d in docs.items() if d["date"] == date and d["lang"] == "de"]
        fr = [k for k, d in docs.items() if d["date"] == date and d["lang"] == "fr"]
        for i, j, s in mutual_best(de, fr, doc_vec, THRESHOLD):
            candidates.append(dict(src_id=de[i], tgt_id=fr[j], score=s, date=date))

    kept, removed = [], []
    for p in candidates:
        a, b = docs[p["src_id"]], docs[p["tgt_id"]]
        text_a = " ".join(f"{a['title']} {a['lead']}".split())
        text_b = " ".join(f"{b['title']} {b['lead']}".split())
        full = lambda d: " ".join([d["title"], d["lead"], *d["sentences"]]).lower()
        if p["score"] >= SUSPICIOUS and text_a == text_b:
            removed.append({**p, "reason": "identical-text"})
        elif any(m.lower() in full(a) or m.lower() in full(b) for m in MARKERS):
            removed.append({**p, "reason": "error-marker"})
        elif trigram_cos(text_a, text_b) > TRIGRAM:
            removed.append({**p, "reason": "same-language"})
        else:
            kept.append(p)

    sentence_pairs, metrics = [], []
    for p in kept:
        src, tgt = docs[p["src_id"]]["sentences"], docs[p["tgt_id"]]["sentences"]
        rows = [f"{p['src_id']}#{i}" for i in range(len(src))]
        cols = [f"{p['tgt_id']}#{j}" for j in range(len(tgt))]
        pairs = [(i, j, s) for i, j, s in mutual_best(rows, cols, sent_vec, 0.0)
                 if len(src[i]) >= MIN_CHARS and len(tgt[j]) >= MIN_CHARS]
        for i, j, s in pairs:
            sentence_pairs.append(dict(src_doc=p["src_id"], tgt_doc=p["tgt_id"], src_idx=i, tgt_idx=j, score=s))
        strong = [(i, j) for i, j, s in pairs if s >= ANALYSIS_THRESHOLD]
        n = len(strong)
        m = dict(src_id=p["src_id"], tgt_id=p["tgt_id"], n_aligned=n,
                 align_ratio_src=len({i for i, _ in strong}) / len(src),
                 align_ratio_tgt=len({j for _, j in strong}) / len(tgt),
                 length_corr=None, monotonicity=None)
        if n >= 2:
            ls = [len(src[i]) for i, _ in strong]
            lt = [len(tgt[j]) for _, j in strong]
            if len(set(ls)) > 1 and len(set(lt)) > 1:
                m["length_corr"] = defined(stats.pearsonr(ls, lt)[0])
            xs = [i for i, _ in strong]
            ys = [j for _, j in strong]
            if len(set(xs)) > 1 and len(set(ys)) > 1:
                m["monotonicity"] = defined(stats.kendalltau(xs, ys, variant="b")[0])
        metrics.append(m)

    out = HERE / "expected"
    out.mkdir(exist_ok=True)
    for name, obj in [("alignments", kept), ("removed", removed), ("sentence_pairs", sentence_pairs),
                      ("metrics", metrics)]:
        (out / f"{name}.json").write_text(json.dumps(obj, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
