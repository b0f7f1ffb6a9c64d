"""Social choice functions over ranking profiles S_k^n.

Alternatives are 0..k-1 (printed as letters).  A ranking is a tuple listing
alternatives from top to bottom; rankings are coded by their index in
``itertools.permutations(range(k))`` (lexicographic / Lehmer order).  A
profile of n rankings has index sum_v code_v * (k!)^(n-1-v), voter 1 most
significant.

Ties in score-based rules go to the smallest alternative index.
"""
import math
from dataclasses import dataclass, field
from itertools import combinations, permutations

import networkx as nx
import numpy as np

from . import boolean_core as bc
from . import kernels
from .streams import map_chunks, mean_estimate, moments

MAX_TABLE = 10 ** 8
MAX_EXHAUSTIVE = 10 ** 7
EVAL_CHUNK = 1 << 18
LETTERS = "abcdefghijklmnopqrstuvwxyz"


# ---------------------------------------------------------------- rankings

def all_rankings(k):
    if not 1 <= k <= 8:
        raise ValueError("k must be in 1..8")
    return np.array(list(permutations(range(k))), dtype=np.int64)


def position_table(perms, k):
    """pos[p, a] = position of alternative a in ranking p (0 = top)."""
    pos = np.empty((perms.shape[0], k), dtype=np.int64)
    rows = np.arange(perms.shape[0])[:, None]
    pos[rows, perms] = np.arange(k)[None, :]
    return pos


def ranking_code(ranking):
    """Lexicographic rank of a permutation (Lehmer code)."""
    r = list(ranking)
    k = len(r)
    code = 0
    for i, a in enumerate(r):
        smaller = sum(1 for b in r[i + 1:] if b < a)
        code += smaller * math.factorial(k - 1 - i)
    return code


def parse_ranking(text):
    return tuple(LETTERS.index(ch) for ch in text.replace(" ", ""))


def format_ranking(ranking):
    return "".join(LETTERS[a] for a in ranking)


def encode_profile(rankings, k):
    m = math.factorial(k)
    idx = 0
    for r in rankings:
        idx = idx * m + ranking_code(r)
    return idx


def decode_profile(index, k, n):
    perms = all_rankings(k)
    m = perms.shape[0]
    codes = []
    for _ in range(n):
        index, c = divmod(index, m)
        codes.append(c)
    return tuple(tuple(int(a) for a in perms[c]) for c in reversed(codes))


def span_table(perms):
    """span[p, q]: length of the shortest block of positions outside which p and q agree."""
    diff = perms[:, None, :] != perms[None, :, :]
    any_diff = diff.any(axis=2)
    k = perms.shape[1]
    first = np.argmax(diff, axis=2)
    last = k - 1 - np.argmax(diff[:, :, ::-1], axis=2)
    return np.where(any_diff, last - first + 1, 0)


def profile_codes(indices, m, n):
    indices = np.asarray(indices, dtype=np.int64)
    return np.stack([(indices // m ** (n - 1 - v)) % m for v in range(n)], axis=-1)


# ---------------------------------------------------------------- rules

def _argmax_low(scores):
    return np.argmax(scores, axis=-1).astype(np.uint8)


def _has_tie(scores):
    top = scores.max(axis=-1, keepdims=True)
    return (scores == top).sum(axis=-1) > 1


def plurality_scores(pos, k):
    return (pos == 0).sum(axis=1)


def borda_scores(pos, k):
    return (k - 1 - pos).sum(axis=1)


def veto_scores(pos, k):
    return -(pos == k - 1).sum(axis=1)


def copeland_scores(pos, k):
    n = pos.shape[1]
    s = np.zeros((pos.shape[0], k), dtype=np.int64)
    for a, b in combinations(range(k), 2):
        above = (pos[:, :, a] < pos[:, :, b]).sum(axis=1)
        s[:, a] += 2 * above > n
        s[:, b] += 2 * above < n
    return s


SCORE_RULES = {"plurality": plurality_scores, "borda": borda_scores,
               "veto": veto_scores, "copeland": copeland_scores}


@dataclass
class SocialChoiceFunction:
    """SCF on S_k^n.  ``evaluate(pos)`` maps a (N, n, k) position array to winners."""
    k: int
    n: int
    name: str
    evaluate: object = None
    scores: object = None
    meta: dict = field(default_factory=dict)
    _table: np.ndarray = None

    @property
    def m(self):
        return math.factorial(self.k)

    @property
    def size(self):
        return self.m ** self.n

    def _positions(self, codes):
        perms = all_rankings(self.k)
        return position_table(perms, self.k)[codes]

    def __call__(self, rankings):
        """Winner at one profile given as a sequence of rankings."""
        if self._table is not None:
            return int(self._table[encode_profile(rankings, self.k)])
        codes = np.array([[ranking_code(r) for r in rankings]])
        return int(self.evaluate(self._positions(codes))[0])

    def table(self):
        if self._table is None:
            if self.size > MAX_TABLE:
                raise ValueError(f"(k!)^n = {self.size} exceeds the dense table budget")
            pos_all = position_table(all_rankings(self.k), self.k)
            out = np.empty(self.size, dtype=np.uint8)
            for start in range(0, self.size, EVAL_CHUNK):
                idx = np.arange(start, min(self.size, start + EVAL_CHUNK))
                out[start:start + idx.size] = self.evaluate(pos_all[profile_codes(idx, self.m, self.n)])
            self._table = out
            self._table.setflags(write=False)
        return self._table

    def tie_mask(self):
        """Profiles where the raw scores tie (so the tie-break decides)."""
        if self.scores is None:
            return np.zeros(self.size, dtype=bool)
        pos_all = position_table(all_rankings(self.k), self.k)
        out = np.empty(self.size, dtype=bool)
        for start in range(0, self.size, EVAL_CHUNK):
            idx = np.arange(start, min(self.size, start + EVAL_CHUNK))
            out[start:start + idx.size] = _has_tie(
                self.scores(pos_all[profile_codes(idx, self.m, self.n)], self.k))
        return out


def score_rule(name, k, n):
    fn = SCORE_RULES[name]
    return SocialChoiceFunction(k, n, name, lambda pos: _argmax_low(fn(pos, k)), fn,
                                {"tie_break": "lowest index"})


def plurality(k, n):
    return score_rule("plurality", k, n)


def borda(k, n):
    return score_rule("borda", k, n)


def veto(k, n):
    return score_rule("veto", k, n)


def copeland(k, n):
    return score_rule("copeland", k, n)


def top_h(k, n, voter, subset):
    """Voter's favourite alternative among ``subset`` (1-based voter)."""
    h = np.array(sorted(subset), dtype=np.int64)
    if h.size == 0:
        raise ValueError("subset must be nonempty")
    v = voter - 1

    def ev(pos):
        return h[np.argmin(pos[:, v, h], axis=1)].astype(np.uint8)
    return SocialChoiceFunction(k, n, f"top_H(voter={voter},H={format_ranking(h)})", ev,
                                meta={"voter": voter, "H": tuple(int(x) for x in h)})


def dictator(k, n, voter=1):
    f = top_h(k, n, voter, range(k))
    f.name = f"dictator({voter})"
    return f


def two_valued(g, k, a, b):
    """a when g(x^{a>b}) = +1, else b; bit v of x is 1 iff voter v+1 ranks a above b."""
    if g.codomain != bc.PM1:
        raise ValueError("two-valued rules need a ±1 function")
    n = g.n
    weights = 1 << np.arange(n, dtype=np.int64)

    def ev(pos):
        bits = (pos[:, :, a] < pos[:, :, b]).astype(np.int64)
        out = g.values[(bits * weights).sum(axis=1)]
        return np.where(out > 0, a, b).astype(np.uint8)
    return SocialChoiceFunction(k, n, f"two_valued({LETTERS[a]},{LETTERS[b]})", ev,
                                meta={"pair": (a, b), "monotone": bc.is_monotone(g)})


def from_table(k, n, table, name="table"):
    table = np.ascontiguousarray(table, dtype=np.uint8)
    if table.size != math.factorial(k) ** n or (table.size and table.max() >= k):
        raise ValueError("table has the wrong size or values outside [k]")
    f = SocialChoiceFunction(k, n, name)
    f._table = table
    f._table.setflags(write=False)
    return f


def random_rule(k, n, seed):
    rng = np.random.default_rng(seed)
    return from_table(k, n, rng.integers(0, k, math.factorial(k) ** n), f"random(seed={seed})")


def named_rule(name, k, n):
    if name in SCORE_RULES:
        return score_rule(name, k, n)
    if name.startswith("dictator"):
        voter = int(name.split(":")[1]) if ":" in name else 1
        return dictator(k, n, voter)
    raise ValueError(f"unknown rule {name!r}")


def rule_zoo(k, n, random_seeds=(1, 2)):
    """Named rules used by the exhaustive audits."""
    rules = [plurality(k, n), borda(k, n), veto(k, n), copeland(k, n)]
    rules += [random_rule(k, n, s) for s in random_seeds]
    return rules


# ---------------------------------------------------------------- manipulation

@dataclass(frozen=True)
class ManipulationRecord:
    profile: tuple
    voter: int
    misreport: tuple
    r: int
    outcome: int
    new_outcome: int

    def as_dict(self):
        return {"profile": [format_ranking(r) for r in self.profile], "voter": self.voter,
                "misreport": format_ranking(self.misreport), "r": self.r,
                "outcome": LETTERS[self.outcome], "new_outcome": LETTERS[self.new_outcome]}


def is_manipulable_at(f, profile, r_max=None):
    """Smallest-span profitable misreport at ``profile`` (None if there is none)."""
    k = f.k
    r_max = k if r_max is None else r_max
    perms = [tuple(p) for p in all_rankings(k)]
    here = f(profile)
    best = None
    for v, truth in enumerate(profile):
        rank_of = {a: i for i, a in enumerate(truth)}
        for lie in perms:
            if lie == tuple(truth):
                continue
            diff = [j for j in range(k) if lie[j] != truth[j]]
            span = diff[-1] - diff[0] + 1
            if span > r_max or (best is not None and span >= best.r):
                continue
            alt = f(tuple(profile[:v]) + (lie,) + tuple(profile[v + 1:]))
            if rank_of[alt] < rank_of[here]:
                best = ManipulationRecord(tuple(tuple(r) for r in profile), v + 1, lie,
                                          span, here, alt)
    return best


def min_span_array(f, threads=1):
    """Per profile: smallest span of a profitable misreport, 0 when none."""
    if f.size > MAX_EXHAUSTIVE:
        raise ValueError("exhaustive census budget exceeded")
    perms = all_rankings(f.k)
    pos = np.ascontiguousarray(position_table(perms, f.k), dtype=np.int32)
    span = np.ascontiguousarray(span_table(perms), dtype=np.int32)
    return kernels.manipulation_min_span(np.ascontiguousarray(f.table()), f.m, f.n, pos,
                                         span, threads)


@dataclass(frozen=True)
class Census:
    p_manipulable: float
    p_r: dict
    count: int
    total: int


def census(f, r_max=None, threads=1):
    """Exact P(sigma in M) and P(sigma in M_r) for r = 2..r_max."""
    r_max = f.k if r_max is None else r_max
    ms = min_span_array(f, threads)
    total = ms.size
    hit = ms > 0
    p_r = {r: float(np.count_nonzero(hit & (ms <= r))) / total for r in range(2, r_max + 1)}
    return Census(float(np.count_nonzero(hit)) / total, p_r, int(np.count_nonzero(hit)), total)


def census_mc(f, r_max=None, samples=100_000, seed=0, threads=1):
    """Sampled census for rules too large to tabulate."""
    r_max = f.k if r_max is None else r_max
    perms = [tuple(int(a) for a in p) for p in all_rankings(f.k)]

    def chunk(rng, size):
        spans = np.zeros(size)
        codes = rng.integers(0, len(perms), size=(size, f.n))
        for t in range(size):
            rec = is_manipulable_at(f, [perms[c] for c in codes[t]], r_max)
            spans[t] = 0 if rec is None else rec.r
        return [moments(spans > 0)] + [moments((spans > 0) & (spans <= r)) for r in range(2, r_max + 1)]

    parts = map_chunks(chunk, seed, samples, threads, chunk=2048)
    out = {"M": mean_estimate([p[0] for p in parts]).as_dict()}
    for j, r in enumerate(range(2, r_max + 1)):
        out[f"M_{r}"] = mean_estimate([p[j + 1] for p in parts]).as_dict()
    return out


def manipulation_pair_mc(f, samples=100_000, seed=0, threads=1):
    """P[(sigma, sigma') is a manipulation pair] where sigma' permutes four
    adjacent alternatives of a random voter at a random block start."""
    k, n = f.k, f.n
    if k < 4:
        raise ValueError("the four-block sampler needs k >= 4")
    perms = all_rankings(k)
    pos_all = position_table(perms, k)
    table = f.table() if f.size <= MAX_TABLE else None
    m = perms.shape[0]
    lookup = {tuple(p): i for i, p in enumerate(perms.tolist())}

    def value(codes):
        if table is not None:
            weights = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
            return table[(codes * weights).sum(axis=1)].astype(np.int64)
        return f.evaluate(pos_all[codes]).astype(np.int64)

    def chunk(rng, size):
        codes = rng.integers(0, m, size=(size, n))
        voter = rng.integers(0, n, size=size)
        start = rng.integers(0, k - 3, size=size)
        new = codes.copy()
        for t in range(size):
            r = perms[codes[t, voter[t]]].copy()
            j = start[t]
            r[j:j + 4] = r[j:j + 4][rng.permutation(4)]
            new[t, voter[t]] = lookup[tuple(r.tolist())]
        a, b = value(codes), value(new)
        rows = np.arange(size)
        true_pos = pos_all[codes[rows, voter]]
        lie_pos = pos_all[new[rows, voter]]
        gain = (true_pos[rows, b] < true_pos[rows, a]) | (lie_pos[rows, a] < lie_pos[rows, b])
        return moments(gain)

    return mean_estimate(map_chunks(chunk, seed, samples, threads, chunk=4096))


def value_range(f):
    return sorted(int(a) for a in np.unique(f.table()))


def top_subset_dictator_of(f):
    """(voter, H) if f is the top-of-H rule of some voter with H = range(f), else None."""
    h = value_range(f)
    for v in range(1, f.n + 1):
        if np.array_equal(top_h(f.k, f.n, v, h).table(), f.table()):
            return v, tuple(h)
    return None


class TheoremViolation(AssertionError):
    pass


def gs_witness(f, threads=1):
    """Concrete manipulation point of a rule with >= 3 values that is not a
    dictator on its range."""
    if len(value_range(f)) < 3:
        raise ValueError("precondition fails: fewer than three values")
    if top_subset_dictator_of(f) is not None:
        raise ValueError("precondition fails: rule is a dictator on its range")
    ms = min_span_array(f, threads)
    hits = np.flatnonzero(ms)
    if hits.size == 0:
        raise TheoremViolation(f"no manipulation point for {f.name}; table={f.table().tolist()}")
    profile = decode_profile(int(hits[0]), f.k, f.n)
    return is_manipulable_at(f, profile)


# ---------------------------------------------------------------- influences and boundaries

def adjacent_transpositions(k):
    """T as (c, d) pairs with c < d; [c:d] swaps c and d when adjacent."""
    return list(combinations(range(k), 2))


def transposition_map(k, c, d):
    perms = all_rankings(k)
    pos = position_table(perms, k)
    lookup = {tuple(p): i for i, p in enumerate(perms.tolist())}
    out = np.arange(perms.shape[0])
    for p in range(perms.shape[0]):
        if abs(pos[p, c] - pos[p, d]) == 1:
            r = perms[p].copy()
            r[pos[p, c]], r[pos[p, d]] = d, c
            out[p] = lookup[tuple(r.tolist())]
    return out


def _voter_view(table, m, n, i):
    return table.reshape(m ** i, m, m ** (n - 1 - i))


@dataclass(frozen=True)
class InfluenceTables:
    """Exact counts; probabilities are counts / denominators."""
    k: int
    n: int
    pair_counts: np.ndarray      # (n, k, k): sum over lines of c_a c_b
    pair_denominator: int        # (k!)^(n+1)
    refined_counts: np.ndarray   # (n, |T|, k, k): #{sigma: f=a, f(z_i sigma)=b}
    refined_denominator: int     # 2 (k!)^n
    transpositions: tuple

    def inf(self):
        c = self.pair_counts
        off = c.sum(axis=(1, 2)) - np.trace(c, axis1=1, axis2=2)
        return off / self.pair_denominator

    def inf_a(self):
        c = self.pair_counts
        return (c.sum(axis=2) - np.diagonal(c, axis1=1, axis2=2)) / self.pair_denominator

    def inf_ab(self):
        return self.pair_counts / self.pair_denominator

    def inf_ab_z(self):
        return self.refined_counts / self.refined_denominator

    def inf_a_mu(self):
        c = self.refined_counts
        return (c.sum(axis=3) - np.diagonal(c, axis1=2, axis2=3)) / self.refined_denominator


def ranking_influences(f):
    k, n, m = f.k, f.n, f.m
    t = f.table().astype(np.int64)
    pair = np.zeros((n, k, k), dtype=np.int64)
    trans = adjacent_transpositions(k)
    refined = np.zeros((n, len(trans), k, k), dtype=np.int64)
    zmaps = [transposition_map(k, c, d) for c, d in trans]
    for i in range(n):
        view = _voter_view(t, m, n, i)
        counts = np.stack([(view == a).sum(axis=1) for a in range(k)], axis=-1)  # (L, R, k)
        pair[i] = np.einsum("lra,lrb->ab", counts, counts)
        for zi, zmap in enumerate(zmaps):
            moved = view[:, zmap, :]
            np.add.at(refined[i, zi], (view.ravel(), moved.ravel()), 1)
    return InfluenceTables(k, n, pair, m ** (n + 1), refined, 2 * m ** n, tuple(trans))


def influence_identities(tab):
    """Exact integer forms of sum_a Inf^a = Inf and sum_{a != b} Inf^{a,b} = Inf."""
    c = tab.pair_counts
    off = c.sum(axis=(1, 2)) - np.trace(c, axis1=1, axis2=2)
    by_a = (c.sum(axis=2) - np.diagonal(c, axis1=1, axis2=2)).sum(axis=1)
    by_ab = sum(c[:, a, b] for a in range(tab.k) for b in range(tab.k) if a != b)
    return bool(np.array_equal(off, by_a) and np.array_equal(off, by_ab))


def outcome_variances(f):
    """Var[1_{f = a}] for every alternative a."""
    p = np.bincount(f.table(), minlength=f.k) / f.size
    return p * (1 - p)


@dataclass(frozen=True)
class BoundaryCensus:
    a: int
    b: int
    pair_sizes: np.ndarray         # |B_i^{a,b}| as ordered pairs, per voter
    on_boundary: np.ndarray        # vertices on B_i^{a,b}, per voter
    refined_sizes: np.ndarray      # |B_i^{a,b;z}|, (n, |T|)
    refined_inf_gap: float         # max |Inf^{a,b;z} - |B|/(2 (k!)^n)|
    fiber_fraction: np.ndarray     # (n, 2^n): P(sigma in B_i(z) | sigma in F(z))
    large: np.ndarray              # fiber_fraction >= 1 - gamma
    gamma: float


def fiber_ids(f, a, b):
    """x^{a,b}(sigma) as an n-bit integer per profile (bit v: voter v+1 ranks a above b)."""
    perms = all_rankings(f.k)
    pos = position_table(perms, f.k)
    above = (pos[:, a] < pos[:, b]).astype(np.int64)
    out = np.zeros(f.size, dtype=np.int64)
    idx = np.arange(f.size, dtype=np.int64)
    for v in range(f.n):
        code = (idx // f.m ** (f.n - 1 - v)) % f.m
        out |= above[code] << v
    return out


def large_fiber_gamma(eps, n, k):
    return eps ** 3 / (4 * n ** 3 * k ** 9)


def boundary_census(f, a, b, eps=0.1, gamma=None):
    k, n, m = f.k, f.n, f.m
    gamma = large_fiber_gamma(eps, n, k) if gamma is None else gamma
    t = f.table()
    pair = np.zeros(n, dtype=np.int64)
    on = np.zeros(n, dtype=np.int64)
    frac = np.zeros((n, 1 << n))
    fid = fiber_ids(f, a, b)
    fiber_size = np.bincount(fid, minlength=1 << n)
    for i in range(n):
        view = _voter_view(t, m, n, i)
        ca = (view == a).sum(axis=1)
        cb = (view == b).sum(axis=1)
        pair[i] = int((ca * cb).sum())
        mask = ((view == a) & (cb[:, None, :] > 0)).reshape(-1)
        on[i] = int(mask.sum())
        frac[i] = np.bincount(fid[mask], minlength=1 << n) / np.maximum(fiber_size, 1)
    tab = ranking_influences(f)
    refined = tab.refined_counts[:, :, a, b]
    gap = float(np.abs(tab.inf_ab_z()[:, :, a, b] - refined / (2.0 * m ** n)).max())
    return BoundaryCensus(a, b, pair, on, refined, gap, frac, frac >= 1 - gamma, gamma)


# ---------------------------------------------------------------- canonical paths

def _bubble(r, elem, target, path):
    p = r.index(elem)
    while p > target:
        r[p - 1], r[p] = r[p], r[p - 1]
        p -= 1
        path.append(tuple(r))


def canonical_path(sigma, pi, variant=1, pair=None):
    """Adjacent-transposition path from sigma to pi, both endpoints included.

    variant 1 bubbles pi's elements to the top in order.  variant 2 (for a
    pair (a, b) ranked a above b in both endpoints) places the other
    alternatives first, then a, then b, so a stays above b throughout.
    """
    r = list(sigma)
    path = [tuple(r)]
    if variant == 1:
        for t, elem in enumerate(pi):
            _bubble(r, elem, t, path)
        return path
    a, b = pair
    if not (sigma.index(a) < sigma.index(b) and pi.index(a) < pi.index(b)):
        raise ValueError("variant 2 needs a above b in both endpoints")
    others = [e for e in pi if e not in (a, b)]
    for t, elem in enumerate(others):
        _bubble(r, elem, t, path)
    _bubble(r, a, pi.index(a), path)
    _bubble(r, b, pi.index(b), path)
    return path


@dataclass(frozen=True)
class CongestionReport:
    k: int
    variant: int
    max_congestion: int
    bound: int
    max_length: int
    length_bound: int
    order_kept: bool
    ok: bool


def congestion_census(k, variant=1, pair=(0, 1)):
    rankings = [tuple(int(x) for x in p) for p in all_rankings(k)]
    if variant == 2:
        a, b = pair
        rankings = [r for r in rankings if r.index(a) < r.index(b)]
    hits = {}
    max_len = 0
    order_kept = True
    for s in rankings:
        for p in rankings:
            path = canonical_path(s, p, variant, pair)
            if path[-1] != p:
                raise AssertionError("canonical path does not end at its target")
            for u, w in zip(path, path[1:]):
                d = [j for j in range(k) if u[j] != w[j]]
                if len(d) != 2 or d[1] != d[0] + 1:
                    raise AssertionError("path step is not an adjacent transposition")
            max_len = max(max_len, len(path) - 1)
            if variant == 2:
                order_kept &= all(q.index(pair[0]) < q.index(pair[1]) for q in path)
            for q in set(path):
                hits[q] = hits.get(q, 0) + 1
    worst = max(hits.values())
    fk = math.factorial(k)
    if variant == 1:
        bound, length_bound = k * k * fk // 2, k * (k - 1) // 2
        ok = worst <= bound and max_len <= length_bound
    else:
        bound, length_bound = k ** 4 * fk, k * k
        ok = worst <= bound and max_len < length_bound and order_kept
    return CongestionReport(k, variant, worst, bound, max_len, length_bound, bool(order_kept), bool(ok))


# ---------------------------------------------------------------- isoperimetry

@dataclass(frozen=True)
class IsoperimetryReport:
    boundary: int
    size: int
    applicable: bool
    ok: bool


def edge_boundary_product_complete(ell, n, member):
    """Edges of K_ell^n with exactly one endpoint in A (A given as a boolean table)."""
    cube = np.asarray(member, dtype=np.int64).reshape([ell] * n)
    total = 0
    for ax in range(n):
        c = cube.sum(axis=ax)
        total += int((c * (ell - c)).sum())
    return total


def product_complete_graph_isoperimetry(ell, n, member):
    if ell ** n > 10 ** 6:
        raise ValueError("ell^n exceeds the enumeration budget")
    member = np.asarray(member, dtype=bool)
    size = int(member.sum())
    boundary = edge_boundary_product_complete(ell, n, member)
    applicable = size <= (1 - 1 / ell) * ell ** n
    return IsoperimetryReport(boundary, size, applicable, (not applicable) or boundary >= size)


# ---------------------------------------------------------------- local dictators

@dataclass(frozen=True)
class LocalDictatorCensus:
    voter: int
    by_subset: dict       # H -> boolean mask over profiles
    counts: dict

    def pair_union(self, a, b):
        out = None
        for h, mask in self.by_subset.items():
            if a in h and b in h:
                out = mask.copy() if out is None else out | mask
        return out


def local_dictator_census(f, voter):
    k, n, m = f.k, f.n, f.m
    i = voter - 1
    perms = all_rankings(k)
    pos = position_table(perms, k)
    lookup = {tuple(p): c for c, p in enumerate(perms.tolist())}
    t = f.table()
    idx = np.arange(f.size, dtype=np.int64)
    stride = m ** (n - 1 - i)
    own = (idx // stride) % m
    base = idx - own * stride
    out, counts = {}, {}
    for h in combinations(range(k), 3):
        ph = pos[:, list(h)]
        block = (ph.max(axis=1) - ph.min(axis=1)) == 2
        # for each ranking with H adjacent: codes of all 6 block rearrangements and their H-tops
        alt_codes = np.full((m, 6), -1, dtype=np.int64)
        alt_tops = np.zeros((m, 6), dtype=np.int64)
        for c in np.flatnonzero(block):
            j = ph[c].min()
            r = perms[c].copy()
            for q, arr in enumerate(permutations(h)):
                r[j:j + 3] = arr
                alt_codes[c, q] = lookup[tuple(r.tolist())]
                alt_tops[c, q] = arr[0]
        mask = block[own]
        for q in range(6):
            ok_q = np.zeros(f.size, dtype=bool)
            sel = mask
            ok_q[sel] = t[base[sel] + alt_codes[own[sel], q] * stride] == alt_tops[own[sel], q]
            mask = mask & ok_q
        out[h] = mask
        counts[h] = int(mask.sum())
    return LocalDictatorCensus(voter, out, counts)


# ---------------------------------------------------------------- distance to the nonmanipulable family

def monotone_min_cost(cost_true, cost_false):
    """Minimum of sum cost over monotone u: {0..2^n-1} -> {true, false}.

    Solved exactly as a minimum-weight up-set (closure) by an s-t min cut.
    Returns (cost, u as boolean table).
    """
    size = cost_true.size
    n = size.bit_length() - 1
    g = nx.DiGraph()
    scale = 1
    for x in range(size):
        w = cost_true[x] - cost_false[x]
        if w < 0:
            g.add_edge("s", x, capacity=-w * scale)
        elif w > 0:
            g.add_edge(x, "t", capacity=w * scale)
        for v in range(n):
            if not x >> v & 1:
                # x true forces x + e_v true
                g.add_edge(x, x | (1 << v), capacity=float("inf"))
    g.add_nodes_from(["s", "t"])
    _, (source_side, _) = nx.minimum_cut(g, "s", "t")
    u = np.zeros(size, dtype=bool)
    for x in source_side:
        if x != "s":
            u[x] = True
    return float(np.where(u, cost_true, cost_false).sum()), u


def sort_monotonize(values, n):
    """Swap-monotonize a ±1 table coordinate by coordinate until it is fixed."""
    v = np.array(values, dtype=float)
    while True:
        changed = False
        for i in range(n):
            shaped = v.reshape(-1, 2, 1 << i)
            lo, hi = shaped[:, 0, :].copy(), shaped[:, 1, :].copy()
            if np.any(lo > hi):
                shaped[:, 0, :] = np.minimum(lo, hi)
                shaped[:, 1, :] = np.maximum(lo, hi)
                changed = True
        if not changed:
            return v


def monotonicity_violation_rate(values, n):
    """Fraction of cube edges (x, x + e_i) with h(x) > h(x + e_i)."""
    bad = 0
    for i in range(n):
        shaped = np.asarray(values).reshape(-1, 2, 1 << i)
        bad += int(np.count_nonzero(shaped[:, 0, :] > shaped[:, 1, :]))
    return bad / (n * (1 << (n - 1))) if n else 0.0


@dataclass(frozen=True)
class NonmanipDistance:
    dictator_distance: float
    dictator: tuple
    two_valued_exact: float
    two_valued_lower: float
    two_valued_upper: float
    pair: tuple
    fiber_majority_violation: float
    fiber_majority_distance: float
    violation_bound_ok: bool
    combined: float


def dist_to_nonmanip(f):
    k, n = f.k, f.n
    t = f.table()
    best_d = (2.0, None)
    for v in range(1, n + 1):
        for r in range(1, k + 1):
            for h in combinations(range(k), r):
                d = float(np.mean(top_h(k, n, v, h).table() != t))
                if d < best_d[0]:
                    best_d = (d, (v, h))
    best = None
    for a, b in combinations(range(k), 2):
        fid = fiber_ids(f, a, b)
        wrong_a = np.bincount(fid, weights=(t != a), minlength=1 << n) / f.size
        wrong_b = np.bincount(fid, weights=(t != b), minlength=1 << n) / f.size
        exact, _ = monotone_min_cost(wrong_a, wrong_b)
        lower = float(np.minimum(wrong_a, wrong_b).sum())
        # fiber majority h: +1 (a) when #a >= #b, then sort-monotonize
        count_a = np.bincount(fid, weights=(t == a), minlength=1 << n)
        count_b = np.bincount(fid, weights=(t == b), minlength=1 << n)
        h = np.where(count_a >= count_b, 1.0, -1.0)
        mono = sort_monotonize(h, n)
        upper = float(np.where(mono > 0, wrong_a, wrong_b).sum())
        # Boolean distance of h to monotone functions, and the violated-edge rate
        h_dist, _ = monotone_min_cost((h < 0).astype(float), (h > 0).astype(float))
        h_dist /= 1 << n
        p_h = monotonicity_violation_rate(h, n)
        cand = (exact, (a, b), lower, upper, p_h, h_dist)
        if best is None or exact < best[0]:
            best = cand
    exact, pair, lower, upper, p_h, h_dist = best
    viol_ok = p_h * n >= h_dist - 1e-12
    return NonmanipDistance(best_d[0], best_d[1], exact, lower, upper, pair, p_h, h_dist,
                            bool(viol_ok), min(best_d[0], exact))


@dataclass(frozen=True)
class QuantitativeGate:
    epsilon: float
    m4_fraction: float
    bound: float
    ok: bool


def quantitative_gs_gate(f, threads=1):
    """One-sided check P(M_4) >= eps^5 / (1e9 n^7 k^46); extremely loose."""
    d = dist_to_nonmanip(f)
    eps = d.combined
    c = census(f, min(4, f.k), threads)
    m4 = c.p_r.get(4, c.p_manipulable) if f.k >= 4 else c.p_manipulable
    bound = eps ** 5 / (1e9 * f.n ** 7 * float(f.k) ** 46)
    return QuantitativeGate(eps, m4, bound, m4 >= bound)


# ---------------------------------------------------------------- audits

def nonmanip_boundary_audit(f, threads=1):
    """Every refined boundary pair (sigma, z_i sigma) between different
    outcomes a, b either has z = [a:b] or touches a 2-manipulation point.
    Returns the number of violating pairs (0 expected)."""
    k, n, m = f.k, f.n, f.m
    t = f.table()
    ms = min_span_array(f, threads)
    m2 = (ms > 0) & (ms <= 2)
    idx = np.arange(f.size, dtype=np.int64)
    bad = 0
    for i in range(n):
        stride = m ** (n - 1 - i)
        own = (idx // stride) % m
        base = idx - own * stride
        for c, d in adjacent_transpositions(k):
            zmap = transposition_map(k, c, d)
            other = base + zmap[own] * stride
            a, b = t, t[other]
            edge = (other != idx) & (a != b)
            same_pair = ((a == c) & (b == d)) | ((a == d) & (b == c))
            bad += int(np.count_nonzero(edge & ~same_pair & ~m2 & ~m2[other]))
    return bad


def const_distance_check(f):
    """Dist(f, constants) <= (k/2) sum_a Var[1_{f=a}]."""
    p = np.bincount(f.table(), minlength=f.k) / f.size
    dist = 1 - p.max()
    bound = f.k / 2 * float((p * (1 - p)).sum())
    return float(dist), bound, bool(dist <= bound + 1e-12)


def influence_variance_check(f):
    """sum_i Inf_i^a >= Var[1_{f=a}] for every a."""
    tab = ranking_influences(f)
    lhs = tab.inf_a().sum(axis=0)
    rhs = outcome_variances(f)
    return lhs, rhs, bool(np.all(lhs >= rhs - 1e-12))


def transposition_influence_check(f):
    """sum_{mu in T} Inf_i^{a;mu} >= Inf_i^a / k^2, exact integer comparison."""
    tab = ranking_influences(f)
    k, m = f.k, f.m
    # lhs = R / (2 m^n), rhs = P / (k^2 m^(n+1)); compare R * k^2 * m >= 2 P
    c = tab.refined_counts
    r = (c.sum(axis=3) - np.diagonal(c, axis1=2, axis2=3)).sum(axis=1)
    p = tab.pair_counts.sum(axis=2) - np.diagonal(tab.pair_counts, axis1=1, axis2=2)
    return bool(np.all(r * k * k * m >= 2 * p))


def _relabel_voters(f, order):
    """Table of sigma -> f(sigma permuted by ``order``)."""
    m, n = f.m, f.n
    idx = np.arange(f.size, dtype=np.int64)
    codes = profile_codes(idx, m, n)
    weights = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return f.table()[(codes[:, list(order)] * weights).sum(axis=1)]


def anonymity_audit(f):
    """Fraction of profiles where swapping voters 1,2 or shifting cyclically changes f."""
    if f.n < 2:
        return 0.0
    t = f.table()
    swap = list(range(f.n))
    swap[0], swap[1] = 1, 0
    shift = list(range(1, f.n)) + [0]
    bad = (_relabel_voters(f, swap) != t) | (_relabel_voters(f, shift) != t)
    return float(bad.mean())


def neutrality_audit(f, untied_only=True):
    """Fraction of (profile, relabelling) with f(tau sigma) != tau f(sigma).

    With ``untied_only`` profiles whose raw scores tie are skipped, since a
    deterministic tie-break cannot be neutral."""
    k, m, n = f.k, f.m, f.n
    perms = all_rankings(k)
    lookup = {tuple(p): i for i, p in enumerate(perms.tolist())}
    t = f.table()
    idx = np.arange(f.size, dtype=np.int64)
    codes = profile_codes(idx, m, n)
    weights = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
    keep = ~f.tie_mask() if untied_only else np.ones(f.size, dtype=bool)
    bad = 0
    checked = 0
    for tau in permutations(range(k)):
        tau = np.array(tau)
        rel = np.array([lookup[tuple(tau[perms[c]].tolist())] for c in range(m)])
        moved = t[(rel[codes] * weights).sum(axis=1)]
        bad += int(np.count_nonzero((moved != tau[t]) & keep))
        checked += int(keep.sum())
    return bad / max(checked, 1)
