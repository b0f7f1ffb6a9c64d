"""Boolean functions on the discrete cube and their Fourier analysis.

Conventions
-----------
A function of ``n`` bits is a dense table of ``2**n`` values.  Bit ``i``
of a table index (least significant first) holds coordinate ``i + 1``;
a set bit means that coordinate equals +1.  Fourier coefficients use the
same bitmask indexing for subsets, with characters x_S = prod_{i in S} x_i.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, isqrt

import numpy as np

from . import kernels
from .streams import map_chunks, mean_estimate, moments

PM1 = "pm1"
ZERO_ONE = "01"
REAL = "real"
CODOMAINS = (PM1, ZERO_ONE, REAL)

MAX_DENSE_N = 24
RESILIENCE_MAX_R = 6
FKN_CONSTANT = 1.0e4
RUSSO_STEP = 1.0e-5


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class BooleanFunction:
    """Dense truth table of a function on {-1,1}^n."""
    n: int
    values: np.ndarray = field(repr=False)
    codomain: str = REAL

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DENSE_N:
            raise ArityError(f"dense tables need 0 <= n <= {MAX_DENSE_N}, got {self.n}")
        if self.codomain not in CODOMAINS:
            raise ValueError(f"unknown codomain {self.codomain!r}")
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"table must have length 2^{self.n}, got {vals.shape}")
        if self.codomain == PM1 and not np.all(np.abs(vals) == 1):
            raise ValueError("pm1 table has entries outside {-1, +1}")
        if self.codomain == ZERO_ONE and not np.all((vals == 0) | (vals == 1)):
            raise ValueError("0/1 table has entries outside {0, 1}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, n, fn, codomain=REAL):
        """Tabulate ``fn`` applied row-wise to the (2^n, n) matrix of ±1 points."""
        return cls(n, np.asarray(fn(cube_points(n)), dtype=np.float64), codomain)

    def mean(self):
        return float(self.values.mean())

    def variance(self):
        return float(self.values.var())

    def __call__(self, x):
        """Evaluate on ±1 rows (any leading shape)."""
        return self.values[points_to_index(x)]


def to_zero_one(f):
    """Map a ±1 function to {0,1} by (1 - f)/2, so +1 -> 0 and -1 -> 1."""
    if f.codomain != PM1:
        raise ValueError("expected a pm1 function")
    return BooleanFunction(f.n, (1.0 - f.values) / 2.0, ZERO_ONE)


def to_plus_minus(f):
    """Inverse of :func:`to_zero_one`: 0 -> +1, 1 -> -1."""
    if f.codomain != ZERO_ONE:
        raise ValueError("expected a 0/1 function")
    return BooleanFunction(f.n, 1.0 - 2.0 * f.values, PM1)


@dataclass(frozen=True)
class FourierExpansion:
    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64)
        if c.shape != (1 << self.n,):
            raise ValueError("coefficient table has the wrong length")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, subset):
        return float(self.coeffs[subset_mask(subset)])

    def level_weights(self):
        """W_k = sum of squared coefficients on level k, for k = 0..n."""
        return np.bincount(popcounts(self.n), weights=self.coeffs ** 2,
                           minlength=self.n + 1)


@dataclass(frozen=True)
class BiasedMeasure:
    """Product measure with P[x_i = +1] = p_i."""
    p: tuple

    def __post_init__(self):
        ps = tuple(float(v) for v in np.atleast_1d(self.p))
        if not all(0.0 < v < 1.0 for v in ps):
            raise ValueError("every p_i must lie in (0, 1)")
        object.__setattr__(self, "p", ps)

    def vector(self, n):
        if len(self.p) == 1:
            return np.full(n, self.p[0])
        if len(self.p) != n:
            raise ArityError("bias vector length differs from arity")
        return np.array(self.p)


@dataclass(frozen=True)
class MartingaleDeltaReport:
    ordering: tuple
    cubic: np.ndarray
    quadratic: np.ndarray
    partial_sums: np.ndarray
    influences: np.ndarray
    variance: float

    @property
    def increments_below_influence(self):
        return bool(np.all(self.quadratic <= self.influences + 1e-12))

    @property
    def orthogonality_gap(self):
        return float(abs(self.quadratic.sum() - self.variance))


# ---------------------------------------------------------------- indexing

def subset_mask(subset):
    """1-based coordinate collection -> bitmask."""
    mask = 0
    for i in subset:
        mask |= 1 << (int(i) - 1)
    return mask


def mask_subset(mask):
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def popcounts(n):
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out += (idx >> i) & 1
    return out


def cube_points(n):
    """All points of {-1,1}^n as int8 rows in table order."""
    idx = np.arange(1 << n, dtype=np.int64)[:, None]
    bits = (idx >> np.arange(n, dtype=np.int64)[None, :]) & 1
    return (2 * bits - 1).astype(np.int8)


def points_to_index(x):
    x = np.asarray(x)
    weights = 1 << np.arange(x.shape[-1], dtype=np.int64)
    return ((x > 0).astype(np.int64) * weights).sum(axis=-1)


def _check_same_arity(*fs):
    if len({f.n for f in fs}) != 1:
        raise ArityError("functions have different arity")


# ---------------------------------------------------------------- Fourier

def _butterfly(vals, n):
    a = np.ascontiguousarray(vals, dtype=np.float64).copy()
    kernels.wht_inplace(a)
    return a


def wht(f):
    """Fourier coefficients f^(S) = 2^-n sum_x f(x) x_S."""
    n = f.n
    signs = np.where(popcounts(n) % 2 == 1, -1.0, 1.0)
    coeffs = _butterfly(f.values, n) * signs / float(1 << n)
    return FourierExpansion(n, coeffs)


def inverse_wht(fe, codomain=REAL):
    n = fe.n
    signs = np.where(popcounts(n) % 2 == 1, -1.0, 1.0)
    vals = _butterfly(fe.coeffs * signs, n)
    return BooleanFunction(n, vals, codomain)


def influences(f):
    """I_i = sum over S containing i of f^(S)^2, for every coordinate."""
    sq = wht(f).coeffs ** 2
    idx = np.arange(1 << f.n, dtype=np.int64)
    return np.array([sq[(idx >> i) & 1 == 1].sum() for i in range(f.n)])


def influences_by_derivative(f):
    """I_i = E[(d_i f)^2] with d_i f = (f(x, +) - f(x, -))/2."""
    v = f.values
    idx = np.arange(1 << f.n, dtype=np.int64)
    out = np.empty(f.n)
    for i in range(f.n):
        lo = idx[(idx >> i) & 1 == 0]
        d = (v[lo | (1 << i)] - v[lo]) / 2.0
        out[i] = float((d * d).mean())
    return out


def influence(f, i):
    if not 1 <= i <= f.n:
        raise ArityError(f"coordinate {i} outside 1..{f.n}")
    return float(influences(f)[i - 1])


def total_influence(f):
    fe = wht(f)
    return float((popcounts(f.n) * fe.coeffs ** 2).sum())


def _rho_weights(n, rho):
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [-1, 1]")
    return float(rho) ** popcounts(n)


def noise_operator(f, rho):
    """T_rho f as a real-valued table."""
    fe = wht(f)
    return inverse_wht(FourierExpansion(f.n, fe.coeffs * _rho_weights(f.n, rho)))


def noisy_inner_product(f, g, rho):
    """<f, g>_rho = sum_S rho^|S| f^(S) g^(S) = E[f(x) g(y)] for rho-correlated x, y."""
    _check_same_arity(f, g)
    w = _rho_weights(f.n, rho)
    return float((w * wht(f).coeffs * wht(g).coeffs).sum())


def stability(f, rho):
    return noisy_inner_product(f, f, rho)


def correlated_pairs(n, rho, size, rng):
    """Draw ``size`` rho-correlated pairs of uniform ±1 vectors."""
    x = rng.integers(0, 2, size=(size, n), dtype=np.int8) * 2 - 1
    flip = rng.random((size, n)) < (1.0 - rho) / 2.0
    y = np.where(flip, -x, x).astype(np.int8)
    return x, y


def noisy_inner_product_mc(f, g, rho, n, samples, seed, threads=1):
    """Monte Carlo E[f(x) g(y)]; ``f`` and ``g`` map (m, n) ±1 rows to m values."""
    def chunk(rng, size):
        x, y = correlated_pairs(n, rho, size, rng)
        return moments(np.asarray(f(x), float) * np.asarray(g(y), float))
    return mean_estimate(map_chunks(chunk, seed, samples, threads))


# ---------------------------------------------------------------- generators

def _pm(v):
    return np.where(np.asarray(v) > 0, 1.0, -1.0)


def majority(n):
    if n % 2 == 0:
        raise ValueError("majority needs an odd number of voters")
    return BooleanFunction.from_callable(n, lambda x: _pm(x.sum(axis=1)), PM1)


def dictator(n, i=1, sign=1):
    if not 1 <= i <= n:
        raise ArityError("dictator coordinate out of range")
    return BooleanFunction.from_callable(n, lambda x: sign * x[:, i - 1], PM1)


def parity(n):
    return BooleanFunction.from_callable(n, lambda x: np.prod(x, axis=1), PM1)


def constant(n, c=1):
    codomain = PM1 if c in (-1, 1) else REAL
    return BooleanFunction(n, np.full(1 << n, float(c)), codomain)


def and_(n):
    return BooleanFunction.from_callable(n, lambda x: _pm(x.min(axis=1)), PM1)


def or_(n):
    return BooleanFunction.from_callable(n, lambda x: _pm(x.max(axis=1)), PM1)


def tribes(r, m=None):
    """OR of ``m`` disjoint ANDs of width ``r`` (default m = 2^r).

    Tribe t holds coordinates t*r+1 .. t*r+r; it is satisfied when all of
    them equal +1, and the output is +1 iff some tribe is satisfied.
    """
    m = (1 << r) if m is None else m

    def fn(x):
        sat = x.reshape(x.shape[0], m, r).min(axis=2) > 0
        return _pm(sat.any(axis=1))
    return BooleanFunction.from_callable(r * m, fn, PM1)


def electoral_college(n):
    """Majority of sqrt(n) majorities over consecutive blocks; n an odd square."""
    r = isqrt(n)
    if r * r != n or r % 2 == 0:
        raise ValueError("electoral college needs n = r^2 with r odd")
    return recursive_majority(r, 2)


def recursive_majority(r, h):
    """Height-``h`` tree of majorities of fan-in ``r`` over r^h voters."""
    if r % 2 == 0:
        raise ValueError("fan-in must be odd")

    def fn(x):
        cur = x.astype(np.int64)
        for _ in range(h):
            cur = np.where(cur.reshape(cur.shape[0], -1, r).sum(axis=2) > 0, 1, -1)
        return cur[:, 0]
    return BooleanFunction.from_callable(r ** h, fn, PM1)


def first_times_sign_of_rest(n):
    """x_1 * sign(x_2 + ... + x_n) with sign(0) = 0 (real valued)."""
    return BooleanFunction.from_callable(
        n, lambda x: x[:, 0] * np.sign(x[:, 1:].sum(axis=1)), REAL)


def _parse_params(text):
    params = {}
    if text:
        for part in text.split(","):
            key, _, val = part.partition("=")
            params[key.strip()] = int(val)
    return params


def from_spec(spec):
    """Build a function from a name string such as ``"tribes:r=2,m=4"``."""
    name, _, rest = spec.partition(":")
    p = _parse_params(rest)
    name = name.strip().lower()
    if name in ("maj", "majority"):
        return majority(p["n"])
    if name in ("dictator", "dict"):
        return dictator(p["n"], p.get("i", 1), p.get("sign", 1))
    if name == "parity":
        return parity(p["n"])
    if name in ("const", "constant"):
        return constant(p["n"], p.get("c", 1))
    if name == "and":
        return and_(p["n"])
    if name == "or":
        return or_(p["n"])
    if name == "tribes":
        return tribes(p["r"], p.get("m"))
    if name in ("electoral_college", "ec"):
        return electoral_college(p["n"] if "n" in p else p["r"] ** 2)
    if name in ("recursive_majority", "rm"):
        return recursive_majority(p.get("r", 3), p["h"])
    raise ValueError(f"unknown generator {name!r}")


def zoo(max_n=12):
    """Named small instances of every generator, keyed by spec string."""
    specs = [f"maj:n={n}" for n in (3, 5, 7, 9, 11) if n <= max_n]
    specs += [f"dictator:n={n}" for n in (2, 4, 8) if n <= max_n]
    specs += [f"parity:n={n}" for n in (2, 5, 8) if n <= max_n]
    specs += [f"tribes:r={r},m={1 << r}" for r in (1, 2) if r * (1 << r) <= max_n]
    specs += ["electoral_college:n=9"] if max_n >= 9 else []
    specs += ["rm:r=3,h=2"] if max_n >= 9 else []
    return {s: from_spec(s) for s in specs}


# ---------------------------------------------------------------- exact stability

def majority_stability_exact(n, rho):
    """E[maj_n(x) maj_n(y)] by summing over the number of +1 votes in x."""
    eps = (1.0 - rho) / 2.0
    k = np.arange(n + 1)
    px = np.array([comb(n, int(j)) for j in k], float) / 2.0 ** n
    # distribution of #(+1 in y) given k plus-votes in x
    out = 0.0
    from scipy.stats import binom
    for j in k:
        keep = binom.pmf(np.arange(j + 1), j, 1.0 - eps)
        gain = binom.pmf(np.arange(n - j + 1), n - j, eps)
        dist = np.convolve(keep, gain)
        p_plus_y = dist[(n // 2) + 1:].sum()
        sx = 1.0 if j > n // 2 else -1.0
        out += px[j] * sx * (2.0 * p_plus_y - 1.0)
    return float(out)


def tribes_stability_exact(r, m, rho):
    q1 = 0.5 ** r
    q11 = ((1.0 + rho) / 4.0) ** r
    p_diff = 2.0 * ((1.0 - q1) ** m - (1.0 - 2.0 * q1 + q11) ** m)
    return 1.0 - 2.0 * p_diff


def tribes_influence_exact(r, m):
    """Pivot probability of one coordinate of tribes(r, m) as a Fraction.

    Counts, by enumerating a single tribe's 2^r patterns, the patterns of
    the coordinate's own tribe that make it pivotal and the patterns of
    every other tribe that leave it unsatisfied.
    """
    full = (1 << r) - 1
    unsat_count = sum(1 for pat in range(1 << r) if pat != full)
    # own tribe: the coordinate decides it iff its r-1 partners are all +1
    rest_full = (1 << (r - 1)) - 1
    own_pivotal = sum(1 for pat in range(1 << (r - 1)) if pat == rest_full)
    others = Fraction(unsat_count, 1 << r) ** (m - 1)
    return Fraction(own_pivotal, 1 << (r - 1)) * others


def tribes_influence_closed_form(r, m):
    return Fraction(2) ** (1 - r) * (1 - Fraction(1, 1 << r)) ** (m - 1)


def kappa(rho):
    return 1.0 - 2.0 * np.arccos(rho) / np.pi


FAMILY_LIMITS = {
    "majority": lambda rho: kappa(rho),
    "electoral_college": lambda rho: kappa(kappa(rho)),
    "recursive_majority": lambda rho: 0.0 if abs(rho) < 1 else 1.0,
    "parity": lambda rho: 0.0 if abs(rho) < 1 else 1.0,
    "dictator": lambda rho: rho,
    "tribes": lambda rho: (1.0 - 2.0 / np.e) ** 2,
}


def _family_exact(family, size, rho):
    if family == "majority":
        if size % 2 == 0:
            raise ValueError("majority sizes must be odd")
        return majority_stability_exact(size, rho)
    if family == "electoral_college":
        r = isqrt(size)
        if r * r != size or r % 2 == 0:
            raise ValueError("electoral college sizes must be odd squares")
        s = majority_stability_exact(r, rho)
        return majority_stability_exact(r, s)
    if family == "recursive_majority":
        # size is the height h with fan-in 3
        s = rho
        for _ in range(size):
            s = majority_stability_exact(3, s)
        return s
    if family == "parity":
        return rho ** size
    if family == "dictator":
        return rho
    if family == "tribes":
        return tribes_stability_exact(size, 1 << size, rho)
    raise ValueError(f"unknown family {family!r}")


def _family_function(family, size):
    if family == "majority":
        return majority(size)
    if family == "electoral_college":
        return electoral_college(size)
    if family == "recursive_majority":
        return recursive_majority(3, size)
    if family == "parity":
        return parity(size)
    if family == "dictator":
        return dictator(max(size, 1))
    if family == "tribes":
        return tribes(size)
    raise ValueError(f"unknown family {family!r}")


def _dense_arity(family, size):
    return {"recursive_majority": 3 ** size, "tribes": size << size}.get(family, size)


@dataclass(frozen=True)
class StabilityCurve:
    family: str
    rho: float
    sizes: tuple
    values: tuple
    limit: float
    approaching: bool


def stability_curve(family, rho, sizes):
    """Exact stability per size, with the family's limiting value.

    Sizes are arities except for ``recursive_majority`` (tree height, fan-in
    3) and ``tribes`` (tribe width r, with 2^r tribes).  Sizes small enough
    for a dense table go through the Fourier transform; larger ones use the
    family's exact composition formula.
    """
    vals = []
    for s in sizes:
        if _dense_arity(family, s) <= 16:
            vals.append(stability(_family_function(family, s), rho))
        else:
            vals.append(_family_exact(family, s, rho))
    limit = float(FAMILY_LIMITS[family](rho))
    gaps = np.abs(np.array(vals) - limit)
    approaching = bool(np.all(np.diff(gaps) <= 1e-12))
    return StabilityCurve(family, float(rho), tuple(sizes), tuple(vals), limit, approaching)


# ---------------------------------------------------------------- resilience

def _axes_for(n, subset):
    # table reshaped to [2]*n in C order: coordinate i+1 lives on axis n-1-i
    return tuple(n - i for i in subset)


@dataclass(frozen=True)
class ResilienceVerdict:
    resilient: bool
    max_deviation: float
    witness_set: tuple
    witness_values: tuple


def is_resilient(f, r, alpha, max_r=RESILIENCE_MAX_R):
    """Exhaustive check of |E[f | x_S = z] - E f| <= alpha for all |S| <= r."""
    n = f.n
    if r > n:
        raise ValueError("r exceeds the arity")
    if r > max_r:
        raise ValueError(f"enumeration budget exceeded (r > {max_r})")
    table = f.values.reshape([2] * n) if n else f.values
    mean = f.mean()
    best = (0.0, (), ())
    for size in range(1, r + 1):
        for subset in combinations(range(1, n + 1), size):
            keep = _axes_for(n, subset)
            other = tuple(a for a in range(n) if a not in keep)
            cond = table.mean(axis=other)
            # cond axes are the kept axes in increasing axis order
            order = sorted(keep)
            dev = np.abs(cond - mean)
            pos = np.unravel_index(int(np.argmax(dev)), dev.shape)
            if dev[pos] > best[0] + 1e-15:
                bits = {n - ax: int(b) for ax, b in zip(order, pos)}
                z = tuple(2 * bits[i] - 1 for i in subset)
                best = (float(dev[pos]), subset, z)
    return ResilienceVerdict(best[0] <= alpha + 1e-12, best[0], best[1], best[2])


def resilience_from_fourier(f, r, alpha):
    """Sufficient condition max_{0<|S|<=r} |f^(S)| <= 2^-r alpha."""
    fe = wht(f)
    lev = popcounts(f.n)
    sel = (lev > 0) & (lev <= r)
    worst = float(np.abs(fe.coeffs[sel]).max()) if sel.any() else 0.0
    return worst <= 2.0 ** (-r) * alpha + 1e-15


def noisy_influence_sum_bound(f, rho):
    """(sum_i I_i(T_rho f), 1/(1-|rho|), ok) for f bounded in [-1, 1]."""
    fe = wht(f)
    lev = popcounts(f.n)
    lhs = float((lev * float(rho) ** (2 * lev) * fe.coeffs ** 2).sum())
    bound = 1.0 / (1.0 - abs(rho)) if abs(rho) < 1 else float("inf")
    return lhs, bound, lhs <= bound + 1e-12


# ---------------------------------------------------------------- martingale

def martingale_delta(f, ordering=None):
    """Increments of the cascade f_i = E[f | coordinates after the first i]."""
    n = f.n
    order = tuple(range(1, n + 1)) if ordering is None else tuple(ordering)
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("ordering must be a permutation of 1..n")
    idx = np.arange(1 << n, dtype=np.int64)
    cur = f.values.copy()
    cubic, quad = [], []
    for i in order:
        bit = 1 << (i - 1)
        nxt = (cur[idx & ~bit] + cur[idx | bit]) / 2.0
        d = nxt - cur
        cubic.append(float(np.mean(np.abs(d) ** 3)))
        quad.append(float(np.mean(d * d)))
        cur = nxt
    infl = influences_by_derivative(f)[np.array(order, dtype=int) - 1] if n else np.zeros(0)
    cubic = np.array(cubic)
    return MartingaleDeltaReport(order, cubic, np.array(quad), np.cumsum(cubic),
                                 infl, f.variance())


# ---------------------------------------------------------------- hypercontractivity

def _norm(vals, p):
    return float(np.mean(np.abs(vals) ** p) ** (1.0 / p))


def hypercontractivity_check(f, rho, p, q):
    """(||T_rho f||_p, ||f||_q, ok) for 1 <= q <= p and rho^2 <= (q-1)/(p-1)."""
    if not 1.0 <= q <= p:
        raise ValueError("need 1 <= q <= p")
    if p > 1 and rho * rho > (q - 1.0) / (p - 1.0) + 1e-15:
        raise ValueError("rho^2 exceeds (q-1)/(p-1)")
    lhs = _norm(noise_operator(f, rho).values, p)
    rhs = _norm(f.values, q)
    return lhs, rhs, lhs <= rhs + 1e-12 * max(1.0, rhs)


def reverse_hypercontractivity_check(f, rho, p, q):
    """(||T_rho f||_q, ||f||_p, ok) for f > 0, 0 < q < p < 1, rho^2 <= (1-p)/(1-q)."""
    if not 0.0 < q < p < 1.0:
        raise ValueError("need 0 < q < p < 1")
    if rho * rho > (1.0 - p) / (1.0 - q) + 1e-15:
        raise ValueError("rho^2 exceeds (1-p)/(1-q)")
    if not np.all(f.values > 0):
        raise ValueError("reverse hypercontractivity needs a strictly positive f")
    lhs = _norm(noise_operator(f, rho).values, q)
    rhs = _norm(f.values, p)
    return lhs, rhs, lhs >= rhs - 1e-12 * max(1.0, rhs)


def degree2_fourth_moment_check(q_coeffs):
    """Exact (E[q^4], 81 E[q^2]^2, ok) for q(x) = sum_{i<j} q_ij x_i x_j.

    ``q_coeffs`` is an n x n array; only the strict upper triangle is read.
    """
    c = np.triu(np.asarray(q_coeffs, dtype=np.float64), k=1)
    n = c.shape[0]
    if n > 20:
        raise ValueError("exact enumeration limited to n <= 20")
    sym = c + c.T
    m2 = m4 = 0.0
    total = 1 << n
    step = 1 << 16
    for start in range(0, total, step):
        idx = np.arange(start, min(total, start + step), dtype=np.int64)[:, None]
        x = (2 * ((idx >> np.arange(n)) & 1) - 1).astype(np.float64)
        qv = 0.5 * np.einsum("ij,jk,ik->i", x, sym, x)
        q2 = qv * qv
        m2 += q2.sum()
        m4 += (q2 * q2).sum()
    m2 /= total
    m4 /= total
    return m4, 81.0 * m2 * m2, m4 <= 81.0 * m2 * m2 + 1e-9


# ---------------------------------------------------------------- biased measures

def _coordinate_weights(n, p):
    pv = np.asarray(p, dtype=np.float64)
    idx = np.arange(1 << n, dtype=np.int64)
    w = np.ones(1 << n)
    for i in range(n):
        bit = (idx >> i) & 1
        w *= np.where(bit == 1, pv[i], 1.0 - pv[i])
    return w


def biased_expectation(f, mu):
    return float((_coordinate_weights(f.n, mu.vector(f.n)) * f.values).sum())


def prob_plus(f, p):
    """P_p[f = +1] for a ±1 function under the scalar bias ``p``."""
    w = _coordinate_weights(f.n, np.full(f.n, p))
    return float(w[f.values > 0].sum())


def biased_influences(f, mu):
    """I_{p,i} = E_p[Var_p(f | x_{-i})]."""
    pv = mu.vector(f.n)
    w = _coordinate_weights(f.n, pv)
    idx = np.arange(1 << f.n, dtype=np.int64)
    out = np.empty(f.n)
    for i in range(f.n):
        bit = 1 << i
        lo = idx & ~bit
        d = f.values[lo | bit] - f.values[lo]
        out[i] = float((w * pv[i] * (1 - pv[i]) * d * d).sum())
    return out


def biased_variance(f, mu):
    w = _coordinate_weights(f.n, mu.vector(f.n))
    m = (w * f.values).sum()
    return float((w * (f.values - m) ** 2).sum())


def is_monotone(f):
    idx = np.arange(1 << f.n, dtype=np.int64)
    for i in range(f.n):
        lo = idx[(idx >> i) & 1 == 0]
        if np.any(f.values[lo | (1 << i)] < f.values[lo]):
            return False
    return True


def russo_derivative_check(f, h=RUSSO_STEP):
    """(d/dp P_p[f=+1] at 1/2 by central difference, sum of influences, ok)."""
    if f.codomain != PM1:
        raise ValueError("Russo's formula is stated for ±1 functions")
    if not is_monotone(f):
        raise ValueError("Russo's formula needs a monotone function")
    deriv = (prob_plus(f, 0.5 + h) - prob_plus(f, 0.5 - h)) / (2.0 * h)
    isum = float(influences(f).sum())
    return deriv, isum, abs(deriv - isum) <= 1e-6


# ---------------------------------------------------------------- restrictions

def restrict(f, fixed):
    """Substitute fixed coordinate values {i: ±1}; result keeps arity n."""
    idx = np.arange(1 << f.n, dtype=np.int64)
    clear = 0
    setbits = 0
    for i, v in fixed.items():
        clear |= 1 << (i - 1)
        if v > 0:
            setbits |= 1 << (i - 1)
    return BooleanFunction(f.n, f.values[(idx & ~clear) | setbits], f.codomain)


@dataclass(frozen=True)
class CoalitionTrace:
    coalition: tuple
    means: tuple
    step_gains: tuple
    step_floors: tuple

    @property
    def nondecreasing(self):
        return all(b >= a - 1e-12 for a, b in zip(self.means, self.means[1:]))

    @property
    def gains_meet_floor(self):
        return all(g >= fl - 1e-12 for g, fl in zip(self.step_gains, self.step_floors))


def greedy_coalition(f, budget):
    """Repeatedly fix the most influential free coordinate to +1."""
    if not is_monotone(f):
        raise ValueError("greedy coalition needs a monotone function")
    fixed = {}
    cur = f
    means = [cur.mean()]
    gains, floors = [], []
    for _ in range(budget):
        if cur.variance() == 0:
            break
        infl = influences(cur)
        for i in fixed:
            infl[i - 1] = -1.0
        j = int(np.argmax(infl)) + 1
        floors.append(cur.variance() / (4.0 * f.n))
        fixed[j] = 1
        cur = restrict(f, fixed)
        gains.append(cur.mean() - means[-1])
        means.append(cur.mean())
    return CoalitionTrace(tuple(fixed), tuple(means), tuple(gains), tuple(floors))


@dataclass
class TreeStats:
    depth: int
    depth_bound: int
    leaves: int
    bad_mass: float
    high_sum_mass: float
    epsilon: float

    @property
    def ok(self):
        return self.depth <= self.depth_bound and self.bad_mass <= self.epsilon + 1e-12


def decision_tree_regularize(f, tau, epsilon):
    """Split on the top-influence variable until every influence is below tau.

    A leaf is bad when it sits at the depth cap with some influence still
    at least tau.  ``high_sum_mass`` reports leaves whose influence sum
    reaches tau, for information only.
    """
    d = ceil(2.0 + total_influence(f) / (tau * epsilon))
    stats = TreeStats(0, d, 0, 0.0, 0.0, epsilon)

    def grow(fixed, depth):
        g = restrict(f, fixed)
        infl = influences(g)
        stats.depth = max(stats.depth, depth)
        top = float(infl.max()) if f.n else 0.0
        if top < tau or depth >= d:
            stats.leaves += 1
            mass = 2.0 ** (-depth)
            if top >= tau:
                stats.bad_mass += mass
            if infl.sum() >= tau:
                stats.high_sum_mass += mass
            return {"fixed": dict(fixed), "depth": depth, "max_influence": top,
                    "mean": g.mean()}
        j = int(np.argmax(infl)) + 1
        kids = {v: grow({**fixed, j: v}, depth + 1) for v in (1, -1)}
        return {"var": j, "children": kids}

    tree = grow({}, 0)
    return tree, stats


# ---------------------------------------------------------------- FKN

@dataclass(frozen=True)
class FKNReport:
    level1_weight: float
    dictator: int
    sign: int
    distance: float
    bound: float
    mean: float

    @property
    def balanced(self):
        return abs(self.mean) <= 1e-9

    @property
    def ok(self):
        return (not self.balanced) or self.distance <= self.bound + 1e-12


def fkn_analysis(f, constant=FKN_CONSTANT):
    fe = wht(f)
    lvl1 = np.array([fe.coeffs[1 << i] for i in range(f.n)])
    w1 = float((lvl1 ** 2).sum())
    i = int(np.argmax(np.abs(lvl1)))
    sign = 1 if lvl1[i] >= 0 else -1
    d = dictator(f.n, i + 1, sign)
    dist = float(np.mean(f.values != d.values))
    return FKNReport(w1, i + 1, sign, dist, constant * (1.0 - w1), f.mean())
