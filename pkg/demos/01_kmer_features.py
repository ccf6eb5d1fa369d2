"""Walk through k-mer featurization: canonical order, counts, frequencies."""

import numpy as np

from tehier import KmerConfig, canonical_feature_order, count_kmers, featurize

config = KmerConfig()  # K = 2, 3, 4 -> 16 + 64 + 256 = 336 features
order = canonical_feature_order(config)
print(f"feature dimension: {config.dimension}")
print(f"first 2-mers : {order[:6]}")
print(f"block starts : AA at 0, {order[16]} at 16, {order[80]} at 80")

sequence = "ACGTACGTNNACGT"
print(f"\nsequence: {sequence}")
counts = count_kmers(sequence, 2)
nonzero = {order[i]: int(c) for i, c in enumerate(counts) if c}
print(f"2-mer counts (windows touching N are skipped): {nonzero}")

vector = featurize(sequence, config)
for sl, k in zip(config.block_slices(), config.k_values):
    block = vector[sl]
    print(f"K={k}: block sums to {block.sum():.6f} "
          f"({int((block > 0).sum())} of {len(block)} k-mers observed)")

raw = featurize(sequence, KmerConfig(normalization="raw"))
print(f"\nraw-count mode: total 2-mer windows counted = {raw[:16].sum():.0f}")

rng = np.random.default_rng(0)
random_seq = "".join(rng.choice(list("ACGT"), size=500))
profile = featurize(random_seq, config)
print(f"random 500-nt sequence: 2-mer block max {profile[:16].max():.4f} "
      f"(uniform chains sit near 1/16 = {1 / 16:.4f})")
