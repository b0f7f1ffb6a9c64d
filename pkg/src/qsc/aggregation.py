"""Aggregation of independent and correlated signals.

Covers jury curves, optimal rules for noisy signals, influence diagnostics
over the function zoo, and effects of voters under arbitrary (possibly
correlated) measures on {0,1}^n, including a tree-structured Ising
measure evaluated by recursive majority.
"""
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import boolean_core as bc
from .streams import map_chunks, mean_estimate, moments

WEIGHT_TOL = 1e-12


# ---------------------------------------------------------------- jury theorem

def _as_fraction(p):
    return p if isinstance(p, Fraction) else Fraction(str(p))


def majority_win_probability(p, n):
    """Exact P[Bin(n, p) > n/2] as a Fraction."""
    p = _as_fraction(p)
    q = 1 - p
    return sum((math.comb(n, j) * p ** j * q ** (n - j) for j in range(n // 2 + 1, n + 1)),
               Fraction(0))


def jury_curve(p, n_list):
    values = [majority_win_probability(p, n) for n in n_list]
    increasing = all(b > a for a, b in zip(values, values[1:]))
    return values, increasing


def signal_success_probabilities(n, p):
    """P[f(x) = s] for every f: {±1}^n -> {±1}, s uniform, x_i = s w.p. p.

    Rows of the returned array follow the integer code of the truth table
    (bit x of the code is 1 when f(x) = +1).
    """
    pts = bc.cube_points(n)
    agree = (pts > 0).sum(axis=1)
    lik_plus = p ** agree * (1 - p) ** (n - agree)
    lik_minus = (1 - p) ** agree * p ** (n - agree)
    codes = np.arange(1 << (1 << n), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(1 << n)) & 1
    return 0.5 * (bits * lik_plus).sum(axis=1) + 0.5 * ((1 - bits) * lik_minus).sum(axis=1)


@dataclass(frozen=True)
class NeymanPearsonReport:
    best_value: float
    maximizers: tuple
    majority_value: float
    majority_is_unique_max: bool


def neyman_pearson_exhaustive(n=3, p=0.6):
    if n > 4:
        raise ValueError("exhaustive search over 2^(2^n) functions limited to n <= 4")
    vals = signal_success_probabilities(n, p)
    best = vals.max()
    winners = tuple(int(c) for c in np.flatnonzero(vals >= best - 1e-15))
    maj = bc.majority(n) if n % 2 else None
    maj_code = int(((maj.values > 0).astype(np.int64) << np.arange(1 << n)).sum()) if maj else -1
    maj_val = float(vals[maj_code]) if maj else float("nan")
    return NeymanPearsonReport(float(best), winners, maj_val, winners == (maj_code,))


# ---------------------------------------------------------------- KKL diagnostics

@dataclass(frozen=True)
class KKLDiagnostic:
    n: int
    min_influence: float
    max_influence: float
    variance: float
    min_ratio: float
    max_ratio: float
    transitive: bool


def kkl_diagnostic(f, influences=None, transitive=None):
    """min_i I_i n / (Var log n) and max_i I_i n / (Var log n), natural log."""
    inf = bc.influences(f) if influences is None else np.asarray(influences, float)
    var = f.variance() if f is not None else None
    return _kkl(f.n, inf, var, transitive)


def _kkl(n, inf, var, transitive=None):
    scale = n / (var * math.log(n)) if var > 0 and n > 1 else float("nan")
    if transitive is None:
        transitive = bool(np.ptp(inf) == 0)
    return KKLDiagnostic(n, float(inf.min()), float(inf.max()), float(var),
                         float(inf.min() * scale), float(inf.max() * scale), transitive)


def tribes_kkl(r, m=None):
    """KKL ratios of tribes(r, m) from the exact influence, any width."""
    m = 1 << r if m is None else m
    inf = float(bc.tribes_influence_exact(r, m))
    p_plus = 1 - (1 - 0.5 ** r) ** m
    var = 4 * p_plus * (1 - p_plus)
    return _kkl(r * m, np.full(r * m, inf), var, True)


# ---------------------------------------------------------------- stability extremality

def balanced_tables(n):
    """All balanced ±1 tables on n bits (rows)."""
    size = 1 << n
    rows = []
    for ones in combinations(range(size), size // 2):
        row = -np.ones(size)
        row[list(ones)] = 1
        rows.append(row)
    return np.array(rows)


@dataclass(frozen=True)
class StabilityExtremality:
    count: int
    max_stability: float
    maximizers: tuple
    all_signed_dictators: bool


def balanced_stability_maximizers(n=4, rho=0.5):
    """Maximize <f, f>_rho over balanced f; report the maximizers as tables."""
    tables = balanced_tables(n)
    size = 1 << n
    pts = bc.cube_points(n)
    # character matrix chi[x, S] = prod_{i in S} x_i
    masks = np.arange(size)
    chi = np.ones((size, size))
    for i in range(n):
        chi *= np.where((masks[None, :] >> i) & 1, pts[:, i:i + 1], 1.0)
    coeffs = tables @ chi / size
    weights = rho ** bc.popcounts(n)
    stab = (coeffs ** 2 * weights).sum(axis=1)
    best = stab.max()
    idx = np.flatnonzero(stab >= best - 1e-12)
    dictators = {tuple(int(v) for v in s * pts[:, i]) for i in range(n) for s in (1, -1)}
    found = {tuple(int(v) for v in tables[j]) for j in idx}
    return StabilityExtremality(len(tables), float(best), tuple(sorted(found)),
                                found == dictators)


def monotone_balanced_minimizers(n=3, p=0.6):
    """Monotone balanced f minimizing E_p[f]; returns (value, tables, only dictators)."""
    pts = bc.cube_points(n)
    w = np.prod(np.where(pts > 0, p, 1 - p), axis=1)
    best, keep = None, []
    for t in balanced_tables(n):
        f = bc.BooleanFunction(n, t, bc.PM1)
        if not bc.is_monotone(f):
            continue
        e = float((w * t).sum())
        if best is None or e < best - 1e-12:
            best, keep = e, [t]
        elif abs(e - best) <= 1e-12:
            keep.append(t)
    dictators = {tuple(int(v) for v in pts[:, i]) for i in range(n)}
    found = {tuple(int(v) for v in t) for t in keep}
    return best, tuple(sorted(found)), found == dictators


def biased_poincare_check(f, p):
    mu = bc.BiasedMeasure(p)
    lhs = float(bc.biased_influences(f, mu).sum())
    rhs = bc.biased_variance(f, mu)
    return lhs, rhs, lhs >= rhs - 1e-12


def bias_sweep(f, ps):
    """E_p[f] across biases (diagnostic for threshold behaviour)."""
    return [(float(p), bc.biased_expectation(f, bc.BiasedMeasure(p))) for p in ps]


# ---------------------------------------------------------------- measures on {0,1}^n

@dataclass(frozen=True)
class FiniteDistribution:
    """Weights on a list of 0/1 vectors."""
    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=np.int8)
        w = np.asarray(self.weights, dtype=float)
        if s.ndim != 2 or s.shape[0] != w.size:
            raise ValueError("support must be (m, n) with one weight per row")
        if np.any((s != 0) & (s != 1)):
            raise ValueError("support vectors must be 0/1")
        if np.any(w < 0) or abs(w.sum() - 1) > WEIGHT_TOL:
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return self.support.shape[1]

    def expect(self, values):
        return float(np.dot(self.weights, values))

    def marginals(self):
        return self.weights @ self.support

    def to_json(self):
        return json.dumps({"support": ["".join(map(str, row)) for row in self.support.tolist()],
                           "weights": self.weights.tolist()})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(np.array([[int(c) for c in s] for s in d["support"]]), np.array(d["weights"]))

    @classmethod
    def from_table(cls, n, probs):
        """Dense weights over all 2^n points (bit i of the index = voter i+1)."""
        probs = np.asarray(probs, float)
        keep = np.flatnonzero(probs > 0)
        sup = (keep[:, None] >> np.arange(n)) & 1
        return cls(sup, probs[keep] / probs[keep].sum())


def product_measure(ps):
    ps = np.asarray(ps, float)
    n = ps.size
    pts = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
    w = np.prod(np.where(pts == 1, ps, 1 - ps), axis=1)
    return FiniteDistribution.from_table(n, w)


def identical_voters_measure(n, p=0.5):
    """All voters share one signal: mass p on 1...1 and 1-p on 0...0."""
    return FiniteDistribution(np.array([[0] * n, [1] * n]), np.array([1 - p, p]))


def mixture_of_biases(n, ts, weights):
    """Mixture over t of iid Bernoulli(t) vectors, as a dense measure."""
    ts = np.asarray(ts, float)
    weights = np.asarray(weights, float) / np.sum(weights)
    k = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).sum(axis=1)
    probs = np.zeros(1 << n)
    for t, w in zip(ts, weights):
        probs += w * t ** k * (1 - t) ** (n - k)
    return FiniteDistribution.from_table(n, probs)


def evaluate_01(f, support):
    """f on 0/1 rows; ``f`` is a ±1 BooleanFunction (1 <-> +1) or a callable on rows."""
    if isinstance(f, bc.BooleanFunction):
        idx = (support.astype(np.int64) << np.arange(support.shape[1])).sum(axis=1)
        return (f.values[idx] > 0).astype(float) if f.codomain == bc.PM1 else f.values[idx]
    return np.asarray(f(support), float)


@dataclass(frozen=True)
class EffectsReport:
    effects: np.ndarray           # nan where undefined
    defined: np.ndarray
    marginals: np.ndarray
    covariance_gap: float
    pivot_influences: np.ndarray


def effects(f, mu):
    """e_k = mu[f | X_k = 1] - mu[f | X_k = 0] and the identity
    Cov[f, X_k] = p_k (1 - p_k) e_k."""
    vals = evaluate_01(f, mu.support)
    n = mu.n
    pk = mu.marginals()
    mean_f = mu.expect(vals)
    e = np.full(n, np.nan)
    gap = 0.0
    for k in range(n):
        on = mu.support[:, k] == 1
        w1, w0 = mu.weights[on].sum(), mu.weights[~on].sum()
        cov = mu.expect(vals * mu.support[:, k]) - mean_f * pk[k]
        if w1 > 0 and w0 > 0:
            e[k] = np.dot(mu.weights[on], vals[on]) / w1 - np.dot(mu.weights[~on], vals[~on]) / w0
            gap = max(gap, abs(cov - pk[k] * (1 - pk[k]) * e[k]))
    piv = np.array([mu.expect(vals != evaluate_01(f, mu.support ^ (np.arange(n) == k)))
                    for k in range(n)])
    return EffectsReport(e, ~np.isnan(e), pk, float(gap), piv)


def alice_win_probability(n, eps, grid=10_000):
    """Majority win probability when t ~ U[eps, 1] and votes are iid Bernoulli(t).

    t is discretized by the midpoint rule on ``grid`` cells.  Ties (even n)
    count one half.
    """
    ts = eps + (np.arange(grid) + 0.5) * (1 - eps) / grid
    from scipy.stats import binom
    win = binom.sf(n // 2, n, ts)
    if n % 2 == 0:
        win = win - 0.5 * binom.pmf(n // 2, n, ts)
    return float(win.mean()), 1.0 / (2.0 * (1.0 - eps))


def alice_win_probability_exact(n, eps):
    """Same probability in closed form (odd n).

    P[Bin(n, t) >= k] = I_t(k, n - k + 1) and
    int I_t(a, b) dt = t I_t(a, b) - a/(a + b) I_t(a + 1, b).
    """
    if n % 2 == 0:
        raise ValueError("closed form implemented for odd n")
    from scipy.special import betainc
    a, b = n // 2 + 1, n - n // 2

    def antiderivative(t):
        return t * betainc(a, b, t) - a / (a + b) * betainc(a + 1, b, t)
    return float((antiderivative(1.0) - antiderivative(eps)) / (1 - eps)), 1.0 / (2.0 * (1.0 - eps))


# ---------------------------------------------------------------- weighted majority bound

@dataclass(frozen=True)
class WeightedMajorityReport:
    mu_f: float
    bound: float
    p: float
    q: float
    delta: float
    hypotheses_ok: bool
    ok: bool


def weighted_majority(weights, q, tie=0):
    """0/1 rule: 1 when sum_i (2 x_i - 2q) w_i > 0, 0 when < 0, ``tie`` otherwise."""
    w = np.asarray(weights, float)

    def f(rows):
        s = ((2 * rows - 2 * q) * w).sum(axis=1)
        return np.where(s > 1e-12, 1.0, np.where(s < -1e-12, 0.0, float(tie)))
    return f


def weighted_majority_bound_check(weights, mu, q, delta=None, tie=0):
    """mu[f] >= 1 - delta p (1 - p) / (p - q) for the weighted majority f.

    p is defined by sum w_i p_i = p W, so the first hypothesis holds by
    construction; ``delta`` defaults to the smallest value meeting the
    second hypothesis.
    """
    w = np.asarray(weights, float)
    W = w.sum()
    f = weighted_majority(w, q, tie)
    rep = effects(f, mu)
    pk = rep.marginals
    p = float(np.dot(w, pk) / W)
    if not p > q:
        raise ValueError("the bound needs p > q")
    e = np.where(rep.defined, rep.effects, 0.0)
    lhs = float(np.dot(w, pk * (1 - pk) * e))
    if delta is None:
        delta = lhs / (p * (1 - p) * W) if 0 < p < 1 else 0.0
    hyp = lhs <= p * (1 - p) * delta * W + 1e-12
    mu_f = mu.expect(f(mu.support.astype(float)))
    bound = 1 - delta * p * (1 - p) / (p - q)
    return WeightedMajorityReport(mu_f, bound, p, q, float(delta), bool(hyp),
                                  bool(hyp and mu_f >= bound - 1e-12))


def constructed_measures(n=5, count=20, seed=0):
    """Varied measures on {0,1}^n: products, bias mixtures, correlated blocks."""
    rng = np.random.default_rng(seed)
    out = []
    for j in range(count):
        kind = j % 4
        if kind == 0:
            out.append(product_measure(rng.uniform(0.55, 0.95, n)))
        elif kind == 1:
            ts = rng.uniform(0.3, 1.0, 5)
            out.append(mixture_of_biases(n, ts, rng.uniform(0.1, 1, 5)))
        elif kind == 2:
            probs = rng.dirichlet(np.full(1 << n, 0.3))
            k = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).sum(axis=1)
            probs = probs * np.exp(0.8 * k)
            out.append(FiniteDistribution.from_table(n, probs / probs.sum()))
        else:
            a = rng.uniform(0.6, 0.9)
            base = product_measure(np.full(n, a))
            same = identical_voters_measure(n, a)
            mix = rng.uniform(0.2, 0.8)
            probs = np.zeros(1 << n)
            for m_, wt in ((base, 1 - mix), (same, mix)):
                idx = (m_.support.astype(np.int64) << np.arange(n)).sum(axis=1)
                np.add.at(probs, idx, wt * m_.weights)
            out.append(FiniteDistribution.from_table(n, probs))
    return out


# ---------------------------------------------------------------- tree Ising measure

@dataclass(frozen=True)
class TreeIsingSpec:
    """Ternary tree of height r; flip probability eps per edge; each leaf
    is then forced to 1 with probability delta."""
    r: int
    eps: float
    delta: float

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("height must be at least 1")
        if not (0 <= self.eps < 0.5 and 0 <= self.delta < 0.5):
            raise ValueError("eps and delta must lie in [0, 1/2)")


def _maj3_plus(a, b, c):
    """P[maj of three independent bits = 1] given their probabilities of 1."""
    return a * b + b * c + a * c - 2 * a * b * c


def tree_ising_exact(spec):
    """Exact mu[m] and the effect of one leaf, by recursion along its path.

    q[y] = P[m_v = 1 | y_v = y] for a subtree of the current height; the
    joint table j[y, c, a] = P[x_leaf = c, m_v = a | y_v = y] follows the
    path from the chosen leaf upward.
    """
    eps, delta = spec.eps, spec.delta
    flip = np.array([[1 - eps, eps], [eps, 1 - eps]])   # flip[y_parent, y_child]
    q = np.array([delta, 1.0])
    j = np.zeros((2, 2, 2))
    j[0, 1, 1], j[0, 0, 0] = delta, 1 - delta
    j[1, 1, 1] = 1.0
    for _ in range(spec.r):
        qc = flip @ q                                   # P[m_child = 1 | y_parent]
        jc = np.einsum("pc,cxa->pxa", flip, j)          # path child given parent
        new_j = np.zeros((2, 2, 2))
        for y in range(2):
            s = qc[y]
            two_plus, one_plus = s * s, 2 * s * (1 - s)
            for c in range(2):
                a1, a0 = jc[y, c, 1], jc[y, c, 0]
                plus = a1 * (two_plus + one_plus) + a0 * two_plus
                new_j[y, c, 1] = plus
                new_j[y, c, 0] = a1 + a0 - plus
        q = np.array([_maj3_plus(*(qc[y],) * 3) for y in range(2)])
        j = new_j
    mu_m = 0.5 * (q[0] + q[1])
    joint = 0.5 * (j[0] + j[1])                         # [c, a]
    px1 = joint[1].sum()
    effect = joint[1, 1] / px1 - joint[0, 1] / (1 - px1)
    return float(mu_m), float(effect), float(px1)


def tree_ising_brute_force(spec):
    """Exact enumeration over tree states and leaf re-randomization (r <= 2)."""
    r = spec.r
    if r > 2:
        raise ValueError("brute force limited to height 2")
    nodes = sum(3 ** h for h in range(r + 1))
    parent = np.array([0] + [(v - 1) // 3 for v in range(1, nodes)])
    nl = 3 ** r
    codes = np.arange(1 << nodes, dtype=np.int64)
    y = (codes[:, None] >> np.arange(nodes)) & 1
    disagree = (y[:, 1:] != y[:, parent[1:]]).sum(axis=1)
    w = 0.5 * spec.eps ** disagree * (1 - spec.eps) ** (nodes - 1 - disagree)
    yl = y[:, nodes - nl:]
    # given the leaf spins, votes are independent with P[x_i = 1] = 1 or delta
    p1 = np.where(yl == 1, 1.0, spec.delta)
    xbits = (np.arange(1 << nl)[:, None] >> np.arange(nl)) & 1
    xs = np.zeros(1 << nl)
    for block in range(0, codes.size, 1024):
        pb = p1[block:block + 1024]
        probs = np.prod(np.where(xbits[None, :, :] == 1, pb[:, None, :], 1 - pb[:, None, :]),
                        axis=2)
        xs += w[block:block + 1024] @ probs
    m = recursive_majority_01(r)
    vals = m(((np.arange(1 << nl)[:, None] >> np.arange(nl)) & 1))
    mu = FiniteDistribution.from_table(nl, xs)
    rep = effects(lambda rows: m(rows), mu)
    return float(np.dot(xs, vals)), float(rep.effects[0]), mu


def recursive_majority_01(r):
    """RM_{3,r} on 0/1 rows of length 3^r (leaf blocks of three, left to right)."""
    def m(rows):
        v = np.asarray(rows, dtype=np.int64)
        for _ in range(r):
            v = (v.reshape(v.shape[0], -1, 3).sum(axis=2) >= 2).astype(np.int64)
        return v[:, 0].astype(float)
    return m


def sample_tree_leaves(spec, size, rng):
    """Leaf votes x (size, 3^r) and leaf spins y before re-randomization."""
    y = rng.integers(0, 2, size=(size, 1))
    for _ in range(spec.r):
        y = np.repeat(y, 3, axis=1)
        y = y ^ (rng.random(y.shape) < spec.eps)
    forced = rng.random(y.shape) < spec.delta
    return np.where(forced, 1, y), y


@dataclass(frozen=True)
class TreeIsingReport:
    mu_m: float
    mu_m_se: float
    mu_m_exact: float
    effect: float
    effect_se: float
    effect_exact: float
    mu_bound: float
    effect_bound: float
    mu_ok: bool
    effect_ok: bool


def tree_ising_experiment(spec, samples=100_000, seed=0, threads=1):
    """MC estimates of mu[m] and of leaf 1's effect, with exact values and the
    two claimed upper bounds.  The effect is estimated by coupling: a sample
    is drawn once, then the leaf vote is forced to 1 and to 0 while the
    rest of the configuration keeps its common random numbers, and the
    conditional laws are recovered by reweighting with the leaf's
    conditional probability."""
    m = recursive_majority_01(spec.r)
    mu_exact, eff_exact, px1 = tree_ising_exact(spec)

    def chunk(rng, size):
        x, y = sample_tree_leaves(spec, size, rng)
        base = m(x)
        x1, x0 = x.copy(), x.copy()
        x1[:, 0], x0[:, 0] = 1, 0
        # P[x_leaf = 1 | everything else] depends only on y_leaf
        p1 = np.where(y[:, 0] == 1, 1.0, spec.delta)
        m1, m0 = m(x1), m(x0)
        return (moments(base), moments(p1 * m1), moments(p1), moments((1 - p1) * m0),
                moments(1 - p1))

    parts = map_chunks(chunk, seed, samples, threads)
    est = [mean_estimate([p[i] for p in parts]) for i in range(5)]
    num1, den1, num0, den0 = est[1].mean, est[2].mean, est[3].mean, est[4].mean
    effect = num1 / den1 - num0 / den0
    # delta-method standard error, conservatively adding the two ratio errors
    se = (est[1].std_error + abs(num1 / den1) * est[2].std_error) / den1 \
        + (est[3].std_error + abs(num0 / den0) * est[4].std_error) / den0
    mu_bound = 0.5 + spec.delta / 2
    eff_bound = (1 - spec.eps / 2) ** ((spec.r - 1) / 2) + 2.0 ** (-(spec.r - 1) / 2)
    claim_applies = spec.eps == spec.delta and spec.eps <= 0.01
    mu_ok = (not claim_applies) or est[0].mean <= mu_bound + 3 * est[0].std_error
    return TreeIsingReport(est[0].mean, est[0].std_error, mu_exact, float(effect), float(se),
                           eff_exact, mu_bound, eff_bound, bool(mu_ok),
                           bool(effect <= eff_bound + 3 * se))


def monotone_events(n):
    """A fixed list of increasing events on 0/1 rows of length n."""
    third = max(1, n // 3)
    return {
        "x1": lambda r: r[:, 0] == 1,
        "x_last": lambda r: r[:, -1] == 1,
        "first_third_majority": lambda r: 2 * r[:, :third].sum(axis=1) > third,
        "any_of_first_two": lambda r: (r[:, 0] | r[:, 1 % n]) == 1,
        "all_of_last_two": lambda r: (r[:, -1] & r[:, -2 % n]) == 1,
        "overall_majority": lambda r: 2 * r.sum(axis=1) > n,
    }


def fkg_check_exact(mu):
    """P[AB] >= P[A] P[B] for every pair from ``monotone_events``."""
    ev = monotone_events(mu.n)
    rows = {}
    worst = np.inf
    for (na, ea), (nb, eb) in combinations(ev.items(), 2):
        a, b = ea(mu.support), eb(mu.support)
        gap = mu.expect(a & b) - mu.expect(a) * mu.expect(b)
        rows[(na, nb)] = gap
        worst = min(worst, gap)
    return rows, worst >= -1e-12


def fkg_check_mc(spec, samples=100_000, seed=0):
    ev = list(monotone_events(3 ** spec.r).items())

    def chunk(rng, size):
        x, _ = sample_tree_leaves(spec, size, rng)
        vals = [e(x) for _, e in ev]
        out = []
        for i, j in combinations(range(len(ev)), 2):
            out.append((moments(vals[i] & vals[j]), moments(vals[i]), moments(vals[j])))
        return out

    parts = map_chunks(chunk, seed, samples)
    rows, ok = {}, True
    for idx, (i, j) in enumerate(combinations(range(len(ev)), 2)):
        ab = mean_estimate([p[idx][0] for p in parts])
        a = mean_estimate([p[idx][1] for p in parts])
        b = mean_estimate([p[idx][2] for p in parts])
        se = ab.std_error + a.std_error + b.std_error
        gap = ab.mean - a.mean * b.mean
        rows[(ev[i][0], ev[j][0])] = (gap, se)
        ok &= gap >= -3 * se
    return rows, bool(ok)
