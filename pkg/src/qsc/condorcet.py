"""Three-alternative paradoxes, Arrow classification and k-alternative
constitutions.

A voter's ranking of {a, b, c} is one of six atoms.  Its pairwise signs
are (x, y, z) = ([a > b], [b > c], [c > a]) written as ±1; the two
excluded sign triples ±(1, 1, 1) are exactly the cyclic preferences.
Atom order is the lexicographic order of rankings:

    0 abc (+,+,-)   1 acb (+,-,-)   2 bac (-,+,-)
    3 bca (-,+,+)   4 cab (+,-,+)   5 cba (-,-,+)
"""
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from . import boolean_core as bc
from . import kernels
from .gaussian import guilbaud_constant, std_normal_cdf, tournament_edges
from .streams import map_chunks, mean_estimate, moments

RHO_SOURCE = -1.0 / 3.0
MAX_EXHAUSTIVE_N = 11


def _ranking_signs(ranking):
    pos = {alt: i for i, alt in enumerate(ranking)}
    x = 1 if pos["a"] < pos["b"] else -1
    y = 1 if pos["b"] < pos["c"] else -1
    z = 1 if pos["c"] < pos["a"] else -1
    return x, y, z


ATOM_RANKINGS = tuple("".join(p) for p in permutations("abc"))
ATOM_SIGNS = np.array([_ranking_signs(r) for r in ATOM_RANKINGS], dtype=np.int8)


@dataclass(frozen=True)
class CondorcetSource:
    """Uniform law on profiles of n rankings of three alternatives."""
    n: int

    def single_voter_moments(self):
        s = ATOM_SIGNS.astype(float)
        means = s.mean(axis=0)
        cross = np.array([(s[:, 0] * s[:, 1]).mean(), (s[:, 1] * s[:, 2]).mean(),
                          (s[:, 2] * s[:, 0]).mean()])
        return means, cross

    def partial_masks(self, voters):
        """x/y/z bitmasks contributed by every atom assignment of ``voters``."""
        count = 6 ** len(voters)
        digits = np.arange(count, dtype=np.int64)
        masks = [np.zeros(count, dtype=np.int64) for _ in range(3)]
        for v in voters:
            atom = digits % 6
            digits = digits // 6
            for c in range(3):
                masks[c] |= (ATOM_SIGNS[atom, c] > 0).astype(np.int64) << v
        return masks

    def sample(self, size, rng):
        """(x, y, z) arrays of shape (size, n) with ±1 entries."""
        atoms = rng.integers(0, 6, size=(size, self.n))
        s = ATOM_SIGNS[atoms]
        return s[..., 0], s[..., 1], s[..., 2]


def agreement_identity_check():
    """1(a=b=c) = (1 + ab + ac + bc)/4 on all eight sign patterns."""
    ok = True
    for a in (-1, 1):
        for b in (-1, 1):
            for c in (-1, 1):
                ok &= float(a == b == c) == (1 + a * b + a * c + b * c) / 4
                za, zb, zc = (1 - a) // 2, (1 - b) // 2, (1 - c) // 2
                ok &= float(a == b == c) == 1 + za * zb + za * zc + zb * zc - za - zb - zc
    return bool(ok)


@dataclass(frozen=True)
class ParadoxResult:
    probability: float
    std_error: float
    mode: str


def _pm_int8(f):
    if f.codomain != bc.PM1:
        raise ValueError("paradox probabilities need ±1-valued functions")
    return np.ascontiguousarray(f.values.astype(np.int8))


def paradox_exhaustive(f, g, h, threads=1):
    """Exact P[f(x) = g(y) = h(z)] by walking all 6^n profiles."""
    bc._check_same_arity(f, g, h)
    n = f.n
    if n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE_N}")
    src = CondorcetSource(n)
    half = n // 2
    lx, ly, lz = src.partial_masks(range(half))
    hx, hy, hz = src.partial_masks(range(half, n))
    count = kernels.triple_agree_count(_pm_int8(f), _pm_int8(g), _pm_int8(h),
                                       lx, ly, lz, hx, hy, hz, threads)
    return count / float(6 ** n)


def paradox_fourier(f, g, h):
    """(1 + <f,g> + <g,h> + <h,f>)/4 with every inner product at rho = -1/3."""
    bc._check_same_arity(f, g, h)
    for fn in (f, g, h):
        _pm_int8(fn)
    r = RHO_SOURCE
    return 0.25 * (1.0 + bc.noisy_inner_product(f, g, r) + bc.noisy_inner_product(g, h, r)
                   + bc.noisy_inner_product(h, f, r))


def paradox_mc(f, g, h, n, samples, seed, threads=1):
    """Monte Carlo estimate; f, g, h are tables or callables on (m, n) ±1 rows."""
    src = CondorcetSource(n)

    def chunk(rng, size):
        x, y, z = src.sample(size, rng)
        a, b, c = f(x), g(y), h(z)
        return moments(((a == b) & (b == c)).astype(float))

    return mean_estimate(map_chunks(chunk, seed, samples, threads, chunk=4096))


def paradox_probability(f, g, h, mode="fourier", samples=100_000, seed=0, threads=1, n=None):
    if mode == "fourier":
        return ParadoxResult(paradox_fourier(f, g, h), 0.0, mode)
    if mode == "exhaustive":
        return ParadoxResult(paradox_exhaustive(f, g, h, threads), 0.0, mode)
    if mode == "mc":
        n = f.n if n is None else n
        est = paradox_mc(f, g, h, n, samples, seed, threads)
        return ParadoxResult(est.mean, est.std_error, mode)
    raise ValueError(f"unknown mode {mode!r}")


def majority_rowwise(x):
    return np.where(x.sum(axis=1) > 0, 1, -1)


# ---------------------------------------------------------------- Arrow

@dataclass(frozen=True)
class ArrowClassification:
    verdict: str
    paradox_probability: float
    certificate: dict
    distances: dict = field(default_factory=dict)


def _dist(f, target_values):
    return float(np.mean(f.values != target_values))


def certificate_distances(f, g, h):
    """Per-function distances to every signed dictator triple and
    opposite-constants pair; returns (best_dictator, best_constants)."""
    n = f.n
    pts = bc.cube_points(n)
    best_d = None
    for i in range(n):
        for s in (1, -1):
            target = s * pts[:, i]
            ds = (_dist(f, target), _dist(g, target), _dist(h, target))
            key = (max(ds), sum(ds))
            if best_d is None or key < best_d[0]:
                best_d = (key, {"voter": i + 1, "sign": s, "distances": ds})
    fns = (f, g, h)
    names = ("f", "g", "h")
    best_c = None
    for p, q in ((0, 1), (1, 2), (2, 0)):
        for c in (1, -1):
            dp = _dist(fns[p], np.full(1 << n, float(c)))
            dq = _dist(fns[q], np.full(1 << n, float(-c)))
            ds = [0.0, 0.0, 0.0]
            ds[p], ds[q] = dp, dq
            key = (max(ds), sum(ds))
            if best_c is None or key < best_c[0]:
                best_c = (key, {"pair": (names[p], names[q]), "values": (c, -c),
                                "distances": tuple(ds)})
    return best_d[1], best_c[1]


def classify_arrow(f, g, h):
    """Certify a paradox-free triple or report how far it is from one."""
    p = paradox_exhaustive(f, g, h) if f.n <= 8 else paradox_fourier(f, g, h)
    best_d, best_c = certificate_distances(f, g, h)
    distances = {"dictator_triple": best_d, "opposite_constants": best_c}
    if p > 1e-12:
        return ArrowClassification("paradoxical", p, {}, distances)
    if max(best_d["distances"]) == 0.0:
        return ArrowClassification("dictator_triple", p,
                                   {"voter": best_d["voter"], "sign": best_d["sign"]}, distances)
    if max(best_c["distances"]) == 0.0:
        return ArrowClassification("opposite_constants", p,
                                   {"pair": best_c["pair"], "values": best_c["values"]}, distances)
    raise AssertionError("paradox-free triple with no certificate: classification theorem violated")


@dataclass(frozen=True)
class KalaiReport:
    epsilon: float
    dictators: tuple
    distances: tuple
    bound: float
    same_dictator: bool
    ok: bool


def kalai_balanced_check(f, g, h, constant=bc.FKN_CONSTANT):
    """Balanced triples with small paradox probability sit near one dictator."""
    for fn in (f, g, h):
        if abs(fn.mean()) > 1e-9:
            raise ValueError("kalai check needs balanced functions")
    eps = paradox_fourier(f, g, h)
    reps = [bc.fkn_analysis(fn) for fn in (f, g, h)]
    dicts = tuple((r.dictator, r.sign) for r in reps)
    dists = tuple(r.distance for r in reps)
    same = len(set(dicts)) == 1
    ok = True
    if eps < 1.0 / 36.0:
        ok = same and all(d <= constant * eps + 1e-12 for d in dists)
    return KalaiReport(eps, dicts, dists, constant * eps, same, bool(ok))


# ---------------------------------------------------------------- reverse hypercontractivity

def correlated_joint_probability(b1, b2, rho):
    """Exact P[x in B1, y in B2] for rho-correlated uniform x, y.

    Sets are boolean tables of length 2^n.  The 2x2 transition kernel is
    applied to 1_{B2} one coordinate at a time.
    """
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    n = int(np.log2(b1.size))
    kern = np.array([[1 + rho, 1 - rho], [1 - rho, 1 + rho]]) / 2.0
    t = b2.reshape([2] * n) if n else b2
    for ax in range(n):
        t = np.moveaxis(np.tensordot(kern, t, axes=([1], [ax])), 0, ax)
    return float((b1 * t.reshape(-1)).mean())


@dataclass(frozen=True)
class BooleanReverseHypReport:
    p_joint: float
    p1: float
    p2: float
    bound: float
    eps_bound: float
    ok: bool


def boolean_reverse_hyp_check(b1, b2, rho):
    from .gaussian import reverse_hyp_bound
    b1 = np.asarray(b1, bool)
    b2 = np.asarray(b2, bool)
    if b1.size > (1 << 14):
        raise ValueError("exact evaluation limited to n <= 14")
    p1, p2 = float(b1.mean()), float(b2.mean())
    joint = correlated_joint_probability(b1, b2, rho)
    bound = reverse_hyp_bound(p1, p2, rho) if p1 > 0 and p2 > 0 else 0.0
    eps = min(p1, p2)
    eps_bound = eps ** (2.0 / (1.0 - abs(rho))) if eps > 0 else 0.0
    ok = joint >= bound - 1e-12 and joint >= eps_bound - 1e-12
    return BooleanReverseHypReport(joint, p1, p2, bound, eps_bound, bool(ok))


def random_monotone_set(n, rng, min_mass=0.25):
    """Up-set generated by random points, grown until its mass reaches ``min_mass``."""
    idx = np.arange(1 << n, dtype=np.int64)
    member = np.zeros(1 << n, dtype=bool)
    while member.mean() < min_mass:
        gen = int(rng.integers(0, 1 << n))
        member |= (idx & gen) == gen
    return member


# ---------------------------------------------------------------- influential voters

@dataclass(frozen=True)
class TwoInfluentialReport:
    paradox_probability: float
    bound: float
    ok: bool


def two_influential_paradox_bound(f, g, h, i, j, eps):
    if i == j:
        raise ValueError("the two voters must differ")
    if not (bc.influence(f, i) > eps and bc.influence(g, j) > eps):
        raise ValueError("precondition I_i(f) > eps and I_j(g) > eps fails")
    if f.n > 8:
        raise ValueError("exact evaluation limited to n <= 8")
    p = paradox_exhaustive(f, g, h)
    bound = eps ** 3 / 36.0
    return TwoInfluentialReport(p, bound, p >= bound - 1e-12)


# ---------------------------------------------------------------- Gaussian Arrow

def _threshold_sign(v, t):
    return np.where(v > t, 1, -1)


@dataclass(frozen=True)
class GaussianArrowReport:
    p_agree: float
    std_error: float
    delta_bound: float
    applicable: bool
    ok: bool


def gaussian_arrow_bound_check(thresholds, eps, samples=200_000, seed=0, threads=1):
    """phi_i(N_i) = sign(N_i - t_i) with pairwise correlations -1/3.

    A threshold of -inf (+inf) gives the constant +1 (-1).
    """
    t = np.asarray(thresholds, float)
    p_plus = std_normal_cdf(-t)
    applicable = True
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            for u_plus in (True, False):
                pi = p_plus[i] if u_plus else 1 - p_plus[i]
                pj = 1 - p_plus[j] if u_plus else p_plus[j]
                applicable &= bool(pi + pj >= 2 * eps)

    def chunk(rng, size):
        e = tournament_edges(3, size, rng)
        n1, n2, n3 = e[:, 0, 1], e[:, 1, 2], e[:, 2, 0]
        a = _threshold_sign(n1, t[0])
        b = _threshold_sign(n2, t[1])
        c = _threshold_sign(n3, t[2])
        return moments(((a == b) & (b == c)).astype(float))

    est = mean_estimate(map_chunks(chunk, seed, samples, threads))
    delta = (eps / 2.0) ** 18
    ok = (not applicable) or est.mean >= delta - 3 * est.std_error
    return GaussianArrowReport(est.mean, est.std_error, delta, applicable, bool(ok))


# ---------------------------------------------------------------- constitutions

@dataclass(frozen=True)
class Constitution:
    """Pairwise rules f^{a>b} for a < b; input bit v is +1 iff voter v puts a above b."""
    k: int
    n: int
    pairwise: dict

    def __post_init__(self):
        for a, b in combinations(range(self.k), 2):
            f = self.pairwise.get((a, b))
            if f is None or f.n != self.n or f.codomain != bc.PM1:
                raise ValueError(f"missing or malformed pairwise rule for ({a}, {b})")

    def rule(self, a, b):
        """f^{a>b} as a table over x^{a>b}, using f^{b>a}(x) = -f^{a>b}(-x)."""
        if a < b:
            return self.pairwise[(a, b)]
        f = self.pairwise[(b, a)]
        flip = (1 << self.n) - 1 - np.arange(1 << self.n)
        return bc.BooleanFunction(self.n, -f.values[flip], bc.PM1)


def uniform_constitution(k, f):
    return Constitution(k, f.n, {(a, b): f for a, b in combinations(range(k), 2)})


def constitution_from_blocks(k, n, blocks, block_rules=None):
    """Member of F_k(n): ordered blocks, each of size >= 3 ruled by a signed
    dictator (voter, sign), each of size 2 by a non-constant function."""
    block_rules = block_rules or {}
    where = {}
    for bi, blk in enumerate(blocks):
        for alt in blk:
            where[alt] = bi
    if sorted(where) != list(range(k)):
        raise ValueError("blocks must partition the alternatives")
    pw = {}
    for a, b in combinations(range(k), 2):
        ba, bb = where[a], where[b]
        if ba != bb:
            pw[(a, b)] = bc.constant(n, 1 if ba < bb else -1)
            continue
        blk = blocks[ba]
        rule = block_rules.get(ba)
        if len(blk) >= 3:
            voter, sign = rule if rule is not None else (1, 1)
            pw[(a, b)] = bc.dictator(n, voter, sign)
        else:
            pw[(a, b)] = rule if rule is not None else bc.dictator(n, 1)
    return Constitution(k, n, pw)


def restriction(con, triple):
    """(f, g, h) on coordinates (a>b, b>c, c>a) for the alternatives in ``triple``."""
    a, b, c = triple
    return con.rule(a, b), con.rule(b, c), con.rule(c, a)


def _profile_pairwise_bits(perms_pos, codes, a, b):
    # codes: (m, n) ranking indices; bit set when the voter ranks a above b
    return perms_pos[codes, a] < perms_pos[codes, b]


@dataclass(frozen=True)
class ConstitutionReport:
    p_nontransitive: float
    std_error: float
    mode: str
    in_family: bool
    partition: tuple
    block_rules: dict


def _tournament_cyclic(con, codes, pos):
    m = codes.shape[0]
    wins = np.zeros((m, con.k), dtype=np.int64)
    weights = 1 << np.arange(con.n, dtype=np.int64)
    for a, b in combinations(range(con.k), 2):
        bits = _profile_pairwise_bits(pos, codes, a, b).astype(np.int64)
        out = con.pairwise[(a, b)].values[(bits * weights).sum(axis=1)]
        wins[:, a] += out > 0
        wins[:, b] += out < 0
    return ~(np.sort(wins, axis=1) == np.arange(con.k)).all(axis=1)


def family_structure(con):
    """Decide membership in F_k(n) constructively; returns (ok, blocks, rules)."""
    k, n = con.k, con.n
    parent = list(range(k))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    const = {}
    for (a, b), f in con.pairwise.items():
        v = f.values
        if np.all(v == v[0]):
            const[(a, b)] = int(v[0])
        else:
            parent[find(a)] = find(b)
    groups = {}
    for alt in range(k):
        groups.setdefault(find(alt), []).append(alt)
    blocks = list(groups.values())
    # constant pairs must agree within a block pair and order the blocks transitively
    bid = {alt: i for i, blk in enumerate(blocks) for alt in blk}
    above = {}
    for (a, b), c in const.items():
        ba, bb = bid[a], bid[b]
        if ba == bb:
            return False, (), {}
        key = (ba, bb) if c > 0 else (bb, ba)
        if above.get((key[1], key[0])):
            return False, (), {}
        above[key] = True
    score = {i: sum(1 for (p, _q) in above if p == i) for i in range(len(blocks))}
    order = sorted(range(len(blocks)), key=lambda i: -score[i])
    for x, y in combinations(order, 2):
        if not above.get((x, y)):
            return False, (), {}
    rules = {}
    for pos_i, bi in enumerate(order):
        blk = sorted(blocks[bi])
        if len(blk) >= 3:
            pts = bc.cube_points(n)
            found = None
            for voter in range(n):
                for sign in (1, -1):
                    target = sign * pts[:, voter]
                    if all(np.array_equal(con.pairwise[(a, b)].values, target)
                           for a, b in combinations(blk, 2)):
                        found = (voter + 1, sign)
            if found is None:
                return False, (), {}
            rules[pos_i] = {"kind": "dictator", "voter": found[0], "sign": found[1]}
        elif len(blk) == 2:
            rules[pos_i] = {"kind": "arbitrary_nonconstant"}
    return True, tuple(tuple(sorted(blocks[bi])) for bi in order), rules


def constitution_check(con, mode="auto", samples=200_000, seed=0, budget=2_000_000, threads=1):
    """Probability of a cyclic social tournament plus F_k(n) membership."""
    from .manipulation import all_rankings, position_table
    perms = all_rankings(con.k)
    pos = position_table(perms, con.k)
    m = len(perms)
    total = m ** con.n
    if mode == "auto":
        mode = "exhaustive" if total <= budget else "mc"
    if mode == "exhaustive":
        if total > budget:
            raise ValueError("profile count exceeds the enumeration budget")
        cyc = 0
        step = 1 << 16
        for start in range(0, total, step):
            idx = np.arange(start, min(total, start + step), dtype=np.int64)
            codes = np.stack([(idx // m ** (con.n - 1 - v)) % m for v in range(con.n)], axis=1)
            cyc += int(_tournament_cyclic(con, codes, pos).sum())
        p, se = cyc / total, 0.0
    else:
        def chunk(rng, size):
            codes = rng.integers(0, m, size=(size, con.n))
            return moments(_tournament_cyclic(con, codes, pos).astype(float))
        est = mean_estimate(map_chunks(chunk, seed, samples, threads))
        p, se = est.mean, est.std_error
    ok, blocks, rules = family_structure(con)
    return ConstitutionReport(p, se, mode, ok, blocks, rules)


GUILBAUD = guilbaud_constant()
