"""How close do small P5-free graphs come to the optimal exponent 2?

For each graph the empirical exponent d_hat solves alpha * omega**d = n.  A
polynomial bound with exponent d holds on a corpus exactly when every
d_hat <= d.  This survey walks all P5-free graphs on up to seven vertices
(once per isomorphism class) and then a seeded family of complements of
triangle-free graphs, which are the natural candidates for large exponents.
"""

import time

from p5lab.experiments import corpus_exponent, estimate_exponent, tightness_family

t0 = time.time()
corpus = corpus_exponent(7)
print(f"exhaustive corpus (n <= 7), {corpus.nontrivial} nontrivial classes, {time.time() - t0:.1f}s")
print("  max d_hat:", corpus.max_d_hat, "at", corpus.argmax)
print("  every class satisfies n <= alpha * omega^2:", corpus.all_within_two)
for bucket, count in corpus.histogram.items():
    print(f"  {bucket}: {'#' * max(1, count // 10)} {count}")

fam = tightness_family(count=20, seed=0, n_min=12, n_max=16)
summary = estimate_exponent(enumerate(fam))
print(f"\ntriangle-free complements (n = 12..16), {summary.nontrivial} graphs")
print("  max d_hat:", summary.max_d_hat, "at", summary.argmax)
for bucket, count in summary.histogram.items():
    print(f"  {bucket}: {count}")
