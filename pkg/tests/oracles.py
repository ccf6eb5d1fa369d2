"""Independent reference implementations used to check the package.

Everything here is deliberately naive: substring scans, explicit set
algebra, exhaustive enumeration, and a projected-gradient QP solver. None of
it shares code with the package internals it audits.
"""

from __future__ import annotations

import numpy as np


def naive_kmer_counts(residues: str, k: int) -> dict[str, int]:
    """Count k-mers by scanning every substring; windows with non-ACGT skip."""
    counts: dict[str, int] = {}
    for i in range(len(residues) - k + 1):
        window = residues[i : i + k]
        if all(c in "ACGT" for c in window):
            counts[window] = counts.get(window, 0) + 1
    return counts


def naive_feature_vector(residues: str, k_values, normalization: str) -> np.ndarray:
    """Canonical-order vector built from naive_kmer_counts."""
    import itertools

    blocks = []
    for k in k_values:
        names = ["".join(p) for p in itertools.product("ACGT", repeat=k)]
        counts = naive_kmer_counts(residues, k)
        block = np.array([float(counts.get(name, 0)) for name in names])
        if normalization == "freq":
            total = block.sum()
            if total > 0:
                block = block / total
        blocks.append(block)
    return np.concatenate(blocks)


# -- hierarchical metrics ------------------------------------------------------


def ancestor_set(path: tuple[int, ...]) -> set[tuple[int, ...]]:
    return {path[:d] for d in range(1, len(path) + 1)}


def naive_hier_prf(pairs: list[tuple[tuple[int, ...], tuple[int, ...]]]):
    """(hP, hR, hF) from explicit ancestor-closed set construction."""
    hits = pred = true = 0
    for p_path, t_path in pairs:
        p_set = ancestor_set(p_path)
        t_set = ancestor_set(t_path)
        hits += len(p_set & t_set)
        pred += len(p_set)
        true += len(t_set)
    hp = hits / pred
    hr = hits / true
    hf = 0.0 if hp + hr == 0 else 2 * hp * hr / (hp + hr)
    return hp, hr, hf


# -- top-down strategies -------------------------------------------------------


def greedy_chain_oracle(tree: dict, probas: dict) -> tuple[int, ...]:
    """Greedy descent over a stub tree.

    ``tree`` maps each node path tuple to its (sorted) child path tuples,
    with () for the root; ``probas`` maps trained parent path tuples to
    {class path tuple: probability}.
    """
    current: tuple[int, ...] = ()
    while True:
        dist = probas.get(current)
        if dist is None:
            break
        # argmax with ties to the smallest class path
        best_class = None
        for cls in sorted(dist):
            if best_class is None or dist[cls] > dist[best_class]:
                best_class = cls
        if best_class == current:
            break
        current = best_class
        if not tree.get(current):
            break
    assert current != ()
    return current


def exhaustive_path_oracle(tree: dict, probas: dict) -> tuple[tuple[int, ...], dict]:
    """Score every reachable node by its mean edge probability and take the
    best (ties: deeper, then smaller path)."""
    all_nodes = [n for n in tree if n != ()]
    scores: dict[tuple[int, ...], float] = {}
    for node in all_nodes:
        prefixes = [node[:d] for d in range(0, len(node))]  # root .. parent
        if any(p not in probas for p in prefixes):
            continue  # unreachable through an untrained parent
        edges = []
        for depth, parent in enumerate(prefixes):
            child = node[: depth + 1]
            edges.append(probas[parent].get(child, 0.0))
        if tree.get(node) and node in probas:  # internal and trained: self edge
            edges.append(probas[node].get(node, 0.0))
        scores[node] = sum(edges) / len(edges)
    best = None
    for node, score in scores.items():
        if best is None:
            best = node
            continue
        if (score, len(node), [-c for c in node]) > (
            scores[best],
            len(best),
            [-c for c in best],
        ):
            best = node
    return best, scores


def random_stub_problem(rng: np.random.Generator, max_depth=4, max_branch=3):
    """A random taxonomy plus stub local distributions for strategy tests.

    Some internal nodes are randomly left untrained; probabilities are drawn
    on a coarse grid so exact ties actually occur.
    """
    tree: dict[tuple[int, ...], list[tuple[int, ...]]] = {(): []}

    def grow(node, depth):
        if depth >= max_depth:
            tree[node] = []
            return
        n_children = int(rng.integers(0 if depth > 0 else 1, max_branch + 1))
        children = [node + (i + 1,) for i in range(n_children)]
        tree[node] = children
        for child in children:
            grow(child, depth + 1)

    grow((), 0)
    probas: dict[tuple[int, ...], dict[tuple[int, ...], float]] = {}
    for node, children in tree.items():
        if not children:
            continue
        if node != () and rng.random() < 0.15:
            continue  # untrained internal node
        classes = list(children) + ([node] if node != () else [])
        raw = rng.integers(0, 5, size=len(classes)).astype(float)
        if raw.sum() == 0:
            raw[0] = 1.0
        dist = raw / raw.sum()
        probas[node] = dict(zip(classes, dist))
    return tree, probas


# -- finite differences ----------------------------------------------------------


def finite_difference_logreg_gradient(loss_fn, weights, bias, h=1e-5):
    """Central-difference gradient of loss_fn(weights, bias)."""
    grad_w = np.zeros_like(weights)
    grad_b = np.zeros_like(bias)
    for idx in np.ndindex(weights.shape):
        bump = np.zeros_like(weights)
        bump[idx] = h
        grad_w[idx] = (loss_fn(weights + bump, bias) - loss_fn(weights - bump, bias)) / (2 * h)
    for i in range(bias.shape[0]):
        bump = np.zeros_like(bias)
        bump[i] = h
        grad_b[i] = (loss_fn(weights, bias + bump) - loss_fn(weights, bias - bump)) / (2 * h)
    return grad_w, grad_b


# -- QP oracle -----------------------------------------------------------------


def project_to_feasible(v: np.ndarray, y: np.ndarray, C: float) -> np.ndarray:
    """Exact Euclidean projection onto {0 <= a <= C, y'a = 0}.

    The projection is clip(v - lam*y, 0, C) for the multiplier lam solving
    y'clip(v - lam*y, 0, C) = 0; that function of lam is piecewise linear and
    non-increasing, so the root is found by scanning its breakpoints.
    """
    pos = y > 0
    w_pos = v[pos]
    w_neg = -v[~pos]

    breakpoints = np.sort(
        np.concatenate([w_pos, w_pos - C, w_neg, w_neg + C])
    )

    def phi(lams):
        lams = np.asarray(lams)[:, None]
        total = np.clip(w_pos[None, :] - lams, 0.0, C).sum(axis=1)
        total -= np.clip(lams - w_neg[None, :], 0.0, C).sum(axis=1)
        return total

    values = phi(breakpoints)
    # first breakpoint where phi <= 0; both classes present => a crossing exists
    idx = int(np.argmax(values <= 0.0))
    if values[idx] == 0.0 or idx == 0:
        lam = breakpoints[idx]
    else:
        lo, hi = breakpoints[idx - 1], breakpoints[idx]
        flo, fhi = values[idx - 1], values[idx]
        lam = lo if flo == fhi else lo + (hi - lo) * flo / (flo - fhi)
    return np.clip(v - lam * y, 0.0, C)


def projected_gradient_qp(
    K: np.ndarray,
    y: np.ndarray,
    C: float,
    iterations: int = 400_000,
    plateau: float = 1e-9,
    check_every: int = 10_000,
) -> tuple[np.ndarray, float]:
    """Maximize W(a) = 1'a - 1/2 (a*y)'K(a*y) over the SVM dual feasible set.

    Plain projected gradient ascent with a small fixed step (1/eigmax);
    stops early once a whole block of iterations improves the objective by
    less than ``plateau``.
    """
    n = y.shape[0]
    Q = K * np.outer(y, y)
    eigmax = np.linalg.eigvalsh(Q)[-1]
    step = 1.0 / max(eigmax, 1e-9)

    def objective(a):
        return float(a.sum() - 0.5 * a @ Q @ a)

    alpha = project_to_feasible(np.full(n, min(C, 1.0) / 2), y, C)
    last = objective(alpha)
    done = 0
    while done < iterations:
        for _ in range(check_every):
            grad = 1.0 - Q @ alpha
            alpha = project_to_feasible(alpha + step * grad, y, C)
        done += check_every
        current = objective(alpha)
        if current - last < plateau:
            break
        last = current
    return alpha, objective(alpha)
