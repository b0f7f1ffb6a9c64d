"""Reproducible Monte Carlo plumbing.

A run with seed ``s`` and ``total`` samples is cut into fixed-size chunks;
chunk ``c`` always draws from ``SeedSequence(s).spawn(...)[c]``.  Chunks
are reduced in index order, so estimates do not depend on how many
threads evaluated them.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

CHUNK = 1 << 15


def chunk_sizes(total, chunk=CHUNK):
    full, rest = divmod(int(total), chunk)
    return [chunk] * full + ([rest] if rest else [])


def chunk_rngs(seed, count):
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(c) for c in children]


def map_chunks(fn, seed, total, threads=1, chunk=CHUNK):
    """Apply ``fn(rng, size)`` to every chunk; results come back in chunk order."""
    sizes = chunk_sizes(total, chunk)
    rngs = chunk_rngs(seed, len(sizes))
    if threads <= 1 or len(sizes) <= 1:
        return [fn(r, s) for r, s in zip(rngs, sizes)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, rngs, sizes))


@dataclass(frozen=True)
class Estimate:
    """Sample mean with its standard error."""
    mean: float
    std_error: float
    samples: int

    def as_dict(self):
        return {"estimate": self.mean, "std_error": self.std_error,
                "samples": self.samples}


def mean_estimate(parts):
    """Combine per-chunk ``(sum, sum_of_squares, count)`` triples."""
    s = sum(p[0] for p in parts)
    ss = sum(p[1] for p in parts)
    cnt = sum(p[2] for p in parts)
    mean = s / cnt
    var = max(ss / cnt - mean * mean, 0.0)
    se = float(np.sqrt(var / max(cnt - 1, 1)))
    return Estimate(float(mean), se, int(cnt))


def moments(values):
    v = np.asarray(values, dtype=np.float64)
    return float(v.sum()), float((v * v).sum()), int(v.size)
