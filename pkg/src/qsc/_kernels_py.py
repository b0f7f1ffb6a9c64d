"""numpy versions of the compiled kernels (same signatures, same results)."""
import numpy as np


def wht_inplace(a):
    """Unnormalised butterfly; ``a[S]`` becomes sum_x a[x] (-1)^{|S & x|}."""
    size = a.shape[0]
    h = 1
    while h < size:
        view = a.reshape(-1, 2, h)
        u = view[:, 0, :].copy()
        v = view[:, 1, :]
        view[:, 0, :] += v
        view[:, 1, :] = u - v
        h *= 2


def triple_agree_count(f, g, h, low_x, low_y, low_z, high_x, high_y,
                       high_z, num_threads=1):
    total = 0
    # process several high indices per numpy call to amortise overhead
    block = max(1, (1 << 20) // max(1, low_x.shape[0]))
    for start in range(0, high_x.shape[0], block):
        stop = start + block
        fx = f[low_x[None, :] | high_x[start:stop, None]]
        gy = g[low_y[None, :] | high_y[start:stop, None]]
        hz = h[low_z[None, :] | high_z[start:stop, None]]
        total += int(np.count_nonzero((fx == gy) & (gy == hz)))
    return total


def manipulation_min_span(table, m, n, pos, span, num_threads=1):
    total = table.shape[0]
    idx = np.arange(total, dtype=np.int64)
    here = table.astype(np.int64)
    best = np.zeros(total, dtype=np.int64)
    for i in range(n):
        stride = m ** (n - 1 - i)
        d = (idx // stride) % m
        base = idx - d * stride
        here_pos = pos[d, here]
        for q in range(m):
            alt = table[base + q * stride].astype(np.int64)
            gain = (d != q) & (pos[d, alt] < here_pos)
            s = span[d, q]
            better = gain & ((best == 0) | (s < best))
            best = np.where(better, s, best)
    return best.astype(np.uint8)


def majority_step(indptr, indices, state):
    sums = np.add.reduceat(state[indices].astype(np.int64), indptr[:-1])
    return np.where(sums > 0, 1, -1).astype(np.int8)
