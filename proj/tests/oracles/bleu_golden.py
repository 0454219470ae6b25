#!/usr/bin/env python3
"""Independent oracle for the sentence-BLEU golden table.

Computes cumulative BLEU-1..4 from first principles with exact fractions:
modified n-gram precision with per-reference max clipping, geometric mean
over orders 1..N with no smoothing (any zero precision zeroes the score),
and the standard brevity penalty using the closest reference length
(ties resolved toward the shorter reference). Scores are scaled to [0, 100].

The printed table is frozen into tests/test_benchmark_metrics.cpp; this
script is kept so the frozen numbers can be re-derived without touching
the C++ implementation.
"""
from fractions import Fraction
from math import exp, log
from collections import Counter


def ngrams(tokens, n):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def modified_precision(cand, refs, n):
    cand_ngrams = Counter(ngrams(cand, n))
    if not cand_ngrams:
        return None  # no n-grams of this order
    max_ref = Counter()
    for ref in refs:
        for g, c in Counter(ngrams(ref, n)).items():
            max_ref[g] = max(max_ref[g], c)
    clipped = sum(min(c, max_ref[g]) for g, c in cand_ngrams.items())
    return Fraction(clipped, sum(cand_ngrams.values()))


def brevity_penalty(cand, refs):
    c = len(cand)
    if c == 0:
        return 0.0
    r = min((abs(len(ref) - c), len(ref)) for ref in refs)[1]
    return 1.0 if c > r else exp(1.0 - r / c)


def bleu(cand, refs, max_n=4):
    out = []
    bp = brevity_penalty(cand, refs)
    for n_max in range(1, max_n + 1):
        precisions = [modified_precision(cand, refs, n) for n in range(1, n_max + 1)]
        if len(cand) == 0 or any(p is None or p == 0 for p in precisions):
            out.append(0.0)
            continue
        gm = exp(sum(log(float(p)) for p in precisions) / n_max)
        out.append(100.0 * bp * gm)
    return out


CASES = [
    ("identity", "the cat sat on mat", ["the cat sat on mat"]),
    ("one_sub", "a b c d", ["a b c e"]),
    ("short_cand_bp", "a b", ["a b c d"]),
    ("clip_repeat", "the the the the", ["the cat"]),
    ("multiref_clip", "the cat the cat", ["the cat sat", "cat the dog"]),
    ("bp_tie_shorter", "a b c", ["a b", "a b c d"]),
    ("reorder", "b a", ["a b"]),
    ("near_miss", "resumed morning jogging in the park",
     ["resumed morning jogging in the riverside park"]),
    ("disjoint", "x y z", ["p q r"]),
    ("two_ref_partial", "plan a quiet weekend hike",
     ["plan a relaxing weekend hike nearby", "book a quiet weekend trip"]),
]

if __name__ == "__main__":
    for name, cand, refs in CASES:
        scores = bleu(cand.split(), [r.split() for r in refs])
        print(f"{name:16s} " + "  ".join(f"{s:.10f}" for s in scores))
