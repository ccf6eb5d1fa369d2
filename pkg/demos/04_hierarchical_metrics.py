"""Hierarchical precision / recall / F-measure on worked examples."""

from tehier import build_from_labels, hier_metrics, label_set, levelwise_f, parse_label

hl = parse_label
taxonomy = build_from_labels([hl("1.1.1"), hl("1.2"), hl("2")])

# each sample contributes its ancestor-closed label set
print("label sets:")
for text in ("1.1.1", "1.2", "2"):
    closure = sorted(str(l) for l in label_set(taxonomy, hl(text)))
    print(f"  {text:6s} -> {closure}")

# under-prediction: correct but shallow
pairs = [(hl("1.1"), hl("1.1.1"))]
m = hier_metrics(pairs, taxonomy)
print(f"\npredicted 1.1 for true 1.1.1: hP={m.hp:.3f} hR={m.hr:.3f} hF={m.hf:.3f}")
print("  (precision is perfect, recall pays for the missing level)")

# sibling confusion at depth 2
pairs = [(hl("1.2"), hl("1.1"))]
m = hier_metrics(pairs, taxonomy)
print(f"predicted 1.2 for true 1.1  : hP={m.hp:.3f} hR={m.hr:.3f} hF={m.hf:.3f}")
print(f"  level-wise: L1={levelwise_f(pairs, taxonomy, 1)} "
      f"L2={levelwise_f(pairs, taxonomy, 2)} (shared depth-1 node keeps L1 perfect)")

# a small batch mixing outcomes
pairs = [
    (hl("1.1.1"), hl("1.1.1")),  # exact
    (hl("1.1"), hl("1.1.1")),    # shallow
    (hl("2"), hl("1.2")),        # wrong branch
]
m = hier_metrics(pairs, taxonomy)
print(f"\nbatch of 3: hP={m.hp:.3f} hR={m.hr:.3f} hF={m.hf:.3f}")
levels = ", ".join(
    f"L{i + 1}={'NA' if v is None else f'{v:.3f}'}" for i, v in enumerate(m.per_level_f)
)
print(f"per-level F: {levels}")
