"""Generate the bundled Bengali sample corpus.

Sentences are drawn from the Bengali unigram distribution shipped with the
`wordfreq` package (CC-BY-SA 4.0). Output is deterministic for a fixed seed.

    pip install wordfreq
    python3 scripts/gen_corpus.py crates/core/data/corpus
"""
import os
import random
import sys

import wordfreq

DIGITS = "০১২৩৪৫৬৭৮৯"


def vocabulary(n):
    words = [w for w in wordfreq.top_n_list("bn", n * 2) if all("ঀ" <= c <= "৿" for c in w)]
    words = words[:n]
    weights = [wordfreq.word_frequency(w, "bn") for w in words]
    return words, weights


def sentence(rng, words, weights):
    n = rng.randint(4, 14)
    out = rng.choices(words, weights, k=n)
    if rng.random() < 0.08:
        out.insert(rng.randrange(len(out)), "".join(rng.choice(DIGITS) for _ in range(rng.randint(1, 4))))
    if n > 7 and rng.random() < 0.5:
        i = rng.randrange(2, n - 2)
        out[i] = out[i] + ","
    end = rng.choices(["।", "?", "!"], [0.9, 0.07, 0.03])[0]
    return " ".join(out) + end


def document(rng, words, weights, target_bytes):
    paras, size = [], 0
    while size < target_bytes:
        para = " ".join(sentence(rng, words, weights) for _ in range(rng.randint(2, 6)))
        paras.append(para)
        size += len(para.encode("utf-8")) + 1
    return "\n".join(paras) + "\n"


def main():
    out = sys.argv[1]
    os.makedirs(out, exist_ok=True)
    words, weights = vocabulary(6000)
    rng = random.Random(20091201)
    for name, size in [("train_a.txt", 24_000), ("train_b.txt", 24_000), ("train_c.txt", 24_000),
                       ("train_d.txt", 24_000), ("train_e.txt", 24_000)]:
        with open(os.path.join(out, name), "w", encoding="utf-8") as f:
            f.write(document(rng, words, weights, size))
    held = os.path.join(out, "held_out")
    os.makedirs(held, exist_ok=True)
    for i in range(1, 6):
        with open(os.path.join(held, f"sample_{i}.txt"), "w", encoding="utf-8") as f:
            f.write(document(rng, words, weights, 8_000))


if __name__ == "__main__":
    main()
