#!/usr/bin/env python3
"""Regenerates the synthetic fixture corpora from the fixture grammar's inventory.

    python3 tests/fixtures/make_corpus.py

Output is deterministic for a given seed; the committed files were produced
with the defaults below.
"""

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

NOUNS = {
    "cat_n1": "cat", "dog_n1": "dog", "idea_n1": "idea", "law_n1": "law",
    "law_n2": "law", "risk_n3": "risk", "sand_n1": "sand",
}
INTRANSITIVE = {"sleep_v1": "sleep", "run_v1": "run"}
TRANSITIVE = {"see_v1": "see", "chase_v1": "chase"}
ADJECTIVES = {"big_a1": "big", "old_a1": "old", "generic_adj": "odd"}
PREPS = {"in_p1": "in", "near_p2": "near"}
DETS = {"the_1": "the", "a_det": "a"}


class Builder:
    def __init__(self, rng, style):
        self.rng = rng
        self.style = style
        self.next_id = 1
        self.pos = 0

    def node(self, label, start, end, daughters):
        nid = self.next_id
        self.next_id += 1
        score = round(self.rng.uniform(-2.0, 2.0), 3)
        return f"({nid} {label} {score:g} {start} {end} {' '.join(daughters)})"

    def word(self, entry, surface, rule=None):
        start = self.pos
        self.pos += 1
        token = f'"{surface}"'
        if self.rng.random() < 0.3:
            token += f' {self.next_id + 100} "token [ +FORM \\"{surface}\\" ]"'
        leaf = self.node(entry, start, self.pos, [f"({token})"])
        if rule:
            return self.node(rule, start, self.pos, [leaf])
        return leaf

    def pick(self, table, weights=None):
        keys = sorted(table)
        key = self.rng.choices(keys, weights=weights)[0] if weights else self.rng.choice(keys)
        return key, table[key]

    def noun(self):
        entry, surface = self.pick(NOUNS)
        plural = self.rng.random() < self.style["plural"]
        return self.word(entry, surface + ("s" if plural else ""),
                         "n_pl_olr" if plural else "n_sg_ilr")

    def nbar(self, depth):
        start = self.pos
        r = self.rng.random()
        if depth < 2 and r < self.style["adj"]:
            entry, surface = self.pick(ADJECTIVES)
            adj = self.word(entry, surface, "j_att_dlr" if self.rng.random() < 0.2 else None)
            head = self.nbar(depth + 1)
            return self.node("aj-hdn_norm_c", start, self.pos, [adj, head])
        if depth < 2 and r < self.style["adj"] + self.style["compound"]:
            first = self.noun()
            head = self.nbar(depth + 1)
            return self.node("n-hdn_cpd_c", start, self.pos, [first, head])
        return self.noun()

    def np(self, depth=0):
        start = self.pos
        if self.rng.random() < self.style["det"]:
            entry, surface = self.pick(DETS)
            det = self.word(entry, surface)
            head = self.nbar(depth)
            return self.node("sp-hd_n_c", start, self.pos, [det, head])
        head = self.nbar(depth)
        return self.node("hdn_bnp_c", start, self.pos, [head])

    def verb(self, table):
        entry, surface = self.pick(table)
        rule = self.rng.choice(["v_3s-fin_olr", "v_pst_olr", "v_n3s-bse_ilr"])
        return self.word(entry, surface, rule)

    def vp(self, depth=0):
        start = self.pos
        if self.rng.random() < self.style["transitive"]:
            v = self.verb(TRANSITIVE)
            obj = self.np(1)
            vp = self.node("hd-cmp_u_c", start, self.pos, [v, obj])
        else:
            v = self.verb(INTRANSITIVE)
            vp = self.node("hd_optcmp_c", start, self.pos, [v])
        if depth == 0 and self.rng.random() < self.style["pp"]:
            pstart = self.pos
            entry, surface = self.pick(PREPS)
            p = self.word(entry, surface)
            obj = self.np(1)
            pp = self.node("hd-cmp_u_c", pstart, self.pos, [p, obj])
            vp = self.node("hd-aj_int-unsl_c", start, self.pos, [vp, pp])
        return vp

    def sentence(self):
        subj = self.np()
        pred = self.vp()
        tree = self.node("sb-hd_mc_c", 0, self.pos, [subj, pred])
        if self.rng.random() < 0.5:
            tree = f"(root_strict {tree})"
        return tree


HUMAN = {"plural": 0.45, "adj": 0.35, "compound": 0.15, "det": 0.5,
         "transitive": 0.4, "pp": 0.45}
LLM = {"plural": 0.25, "adj": 0.15, "compound": 0.05, "det": 0.75,
       "transitive": 0.7, "pp": 0.2}
LLM2 = {"plural": 0.3, "adj": 0.2, "compound": 0.1, "det": 0.7,
        "transitive": 0.6, "pp": 0.25}


def generate(n, style, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        out.append(Builder(rng, style).sentence())
    return out


def main():
    human = generate(50, HUMAN, 20240501)
    authors = ["A. Writer", "B. Reporter", "C. Editor"]
    with open(HERE / "fixture_human.jsonl", "w", encoding="utf-8") as f:
        for i, deriv in enumerate(human, start=1):
            record = {"corpus": "nyt", "item": str(i), "author": authors[(i - 1) % 3],
                      "deriv": deriv}
            f.write(json.dumps(record, ensure_ascii=False) + "\n")

    llm = generate(40, LLM, 20240502)
    with open(HERE / "fixture_llm.udf", "w", encoding="utf-8") as f:
        f.write("# synthetic model output, one derivation per line\n")
        for i, deriv in enumerate(llm, start=1):
            f.write(f"{100 + i}\t{deriv}\n")

    llm2 = generate(30, LLM2, 20240503)
    with open(HERE / "fixture_llm2.udf", "w", encoding="utf-8") as f:
        for i, deriv in enumerate(llm2, start=1):
            f.write(f"{deriv}\n")


if __name__ == "__main__":
    main()
