"""Scores every corpus entry of retrieval_case.json by idf-weighted cosine
over non-stopword term sets and writes the expected top-10 order.

idf(t) = ln(1 + N / df(t)); df counts corpus entries containing t (terms
unseen in the corpus use df = 1). Scores are compared at 1e-12
resolution; ties keep corpus order.
"""
import json
import math
import os
import string

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.join(HERE, "..", "..")
PUNCT = set(string.punctuation)


def word_list(path):
    with open(path) as f:
        return {l.split("#")[0].strip().lower() for l in f if l.split("#")[0].strip()}


STOP = word_list(os.path.join(ROOT, "data", "stopwords.txt"))


def terms(text):
    out = set()
    for chunk in text.split():
        core = chunk.strip(string.punctuation).lower()
        if core and core not in STOP:
            out.add(core)
    return out


def main():
    path = os.path.join(ROOT, "tests", "fixtures", "retrieval_case.json")
    case = json.load(open(path))
    corpus = case["corpus"]
    n = len(corpus)
    docs = [terms(t) for t in corpus]
    df = {}
    for d in docs:
        for t in d:
            df[t] = df.get(t, 0) + 1

    def idf(t):
        return math.log(1 + n / df.get(t, 1))

    results = []
    for q in case["queries"]:
        user = terms(q)
        unorm = math.sqrt(sum(idf(t) ** 2 for t in user))
        scores = []
        for i, d in enumerate(docs):
            dnorm = math.sqrt(sum(idf(t) ** 2 for t in d))
            overlap = sum(idf(t) ** 2 for t in d if t in user)
            scores.append(overlap / (unorm * dnorm) if unorm and dnorm else 0.0)
        order = sorted(range(n), key=lambda i: (-round(scores[i] * 1e12), i))[:10]
        results.append({"query": q, "expected_top10": order, "scores": scores})
        print(q, order)
    json.dump(results, open(os.path.join(ROOT, "tests", "fixtures", "retrieval_expected.json"), "w"), indent=1)


if __name__ == "__main__":
    main()
