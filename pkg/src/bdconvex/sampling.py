"""Random Bell-diagonal states for tests and verification batches."""

import numpy as np

from bdconvex.bdstate import BDState


def random_simplex(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` points uniform on the probability 3-simplex, shape (size, 4)."""
    return rng.dirichlet(np.ones(4), size=size)


def random_entangled(rng: np.random.Generator, size: int, low: float = 0.5,
                     high: float = 0.999, label=None) -> list:
    """Entangled states with dominant weight uniform in ``(low, high)``.

    The dominant Bell label is uniform over 1..4 unless ``label`` fixes it;
    the remaining weight is split uniformly over the other three labels.
    """
    pk = rng.uniform(low, high, size=size)
    while np.any(pk <= low):
        bad = pk <= low
        pk[bad] = rng.uniform(low, high, size=int(bad.sum()))
    rest = rng.dirichlet(np.ones(3), size=size) * (1.0 - pk)[:, None]
    labels = rng.integers(1, 5, size=size) if label is None else np.full(size, label)
    out = []
    for k, top, others in zip(labels, pk, rest):
        p = np.insert(others, k - 1, top)
        out.append(BDState(p / p.sum()))
    return out
