"""Regenerates calls.jsonl and labels.csv.

Every call is a sequence of 40-word segments; scoring with max_words=40
makes each segment one chunk, so the label of a chunk is the phrase planted
in its segment. Aggregates are written as exact fractions.
"""
import json
import random
from fractions import Fraction

SEG = 40
FILLER = ("the team reviewed results with customers and partners across regions while margins "
          "held and management discussed pricing supply logistics demand backlog orders "
          "products services markets channels segments").split()

# phrase -> (policy, label); mirrors stub_rules.json in this directory
PHRASES = {
    "investment": [("significantly increase capital", "Increase substantially", 1),
                   ("expand capacity", "Increase", Fraction(1, 2)),
                   ("maintain capital spending", "No change", 0),
                   ("reduce capital expenditure", "Decrease", Fraction(-1, 2)),
                   ("halt construction", "Decrease substantially", -1)],
    "dividend": [("raise the dividend", "Increase", Fraction(1, 2)),
                 ("suspend the dividend", "Decrease substantially", -1),
                 ("maintain the dividend", "No change", 0)],
    "employment": [("add headcount", "Increase", Fraction(1, 2)),
                   ("layoffs", "Decrease substantially", -1),
                   ("reduce headcount", "Decrease", Fraction(-1, 2))],
}
NOINFO = ("No information", 0)


def segment(rng, phrase):
    words = [rng.choice(FILLER) for _ in range(SEG)]
    if phrase:
        p = phrase.split()
        at = rng.randrange(0, SEG - len(p))
        words[at:at + len(p)] = p
    return words


def maxabs(scores):
    m = max(abs(s) for s in scores)
    signs = {1 if s > 0 else -1 for s in scores if abs(s) == m and s != 0}
    if m == 0 or len(signs) == 2:
        return Fraction(0)
    return m * signs.pop()


def main():
    rng = random.Random(7)
    calls, labels, aggs = [], [], []
    for i in range(50):
        cid = f"C{i + 1:03d}"
        n = rng.randint(1, 5)
        policy_of_call = ["investment", "dividend", "employment"][i % 3]
        segs, chunk_labels = [], []
        # Force the opposite-sign tie on a few calls.
        forced = None
        if i in (4, 17, 33):
            forced = [PHRASES["investment"][0], PHRASES["investment"][4]]
            n = 2
        if i in (9, 26):
            forced = [PHRASES["investment"][1], PHRASES["investment"][3], None]
            n = 3
        for k in range(n):
            if forced is not None:
                choice = forced[k]
            else:
                choice = rng.choice(PHRASES[policy_of_call] + [None])
            if forced is not None:
                pol = "investment"
            else:
                pol = policy_of_call
            segs.append(segment(rng, choice[0] if choice else None))
            chunk_labels.append((pol, choice))
        text = " ".join(" ".join(s) for s in segs)
        calls.append({"call_id": cid, "ticker": f"T{i % 10:02d}", "fiscal_quarter": f"{2010 + i % 5}Q{1 + i % 4}",
                      "call_date": f"{2010 + i % 5}-0{1 + i % 4 * 3 if i % 4 < 3 else 1}-15".replace("-010-", "-10-"),
                      "text": text})
        for policy in ("investment", "dividend", "employment"):
            scores = []
            for k, (pol, choice) in enumerate(chunk_labels):
                if pol == policy and choice:
                    label, score = choice[1], Fraction(choice[2])
                else:
                    label, score = NOINFO[0], Fraction(0)
                labels.append((cid, policy, k, label))
                scores.append(score)
            mean = sum(scores, Fraction(0)) / len(scores)
            aggs.append((cid, policy, len(scores), mean, maxabs(scores)))
    with open("calls.jsonl", "w") as f:
        for c in calls:
            f.write(json.dumps(c) + "\n")
    with open("labels.csv", "w") as f:
        f.write("call_id,policy,chunk_index,choice\n")
        for row in labels:
            f.write(",".join(str(x) for x in row) + "\n")
    with open("aggregates.csv", "w") as f:
        f.write("call_id,policy,n_chunks,mean_num,mean_den,maxabs_num,maxabs_den\n")
        for cid, pol, n, mean, mx in aggs:
            f.write(f"{cid},{pol},{n},{mean.numerator},{mean.denominator},{mx.numerator},{mx.denominator}\n")


if __name__ == "__main__":
    main()
