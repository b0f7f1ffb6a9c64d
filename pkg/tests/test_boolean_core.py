import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsc import boolean_core as bc

import oracles


def random_pm(n, seed):
    rng = np.random.default_rng(seed)
    return bc.BooleanFunction(n, rng.choice([-1.0, 1.0], size=1 << n), bc.PM1)


# ---------------------------------------------------------------- representation

def test_bit_order_convention():
    f = bc.dictator(3, 2)
    assert [f.values[i] for i in range(8)] == [oracles.point(i, 3)[1] for i in range(8)]
    assert f(np.array([[-1, 1, -1]])) == 1.0


def test_table_validation():
    with pytest.raises(ValueError):
        bc.BooleanFunction(2, [1, 0, 1, 1], bc.PM1)
    with pytest.raises(ValueError):
        bc.BooleanFunction(2, [1, 1, 1], bc.REAL)
    with pytest.raises(bc.ArityError):
        bc.BooleanFunction(bc.MAX_DENSE_N + 1, np.zeros(1), bc.REAL)


def test_zero_one_round_trip():
    f = bc.majority(3)
    g = bc.to_zero_one(f)
    assert g.values[0] == 1.0 and g.values[-1] == 0.0
    assert np.array_equal(bc.to_plus_minus(g).values, f.values)


@pytest.mark.parametrize("spec", ["maj:n=5", "parity:n=4", "tribes:r=2,m=4", "and:n=3",
                                  "or:n=3", "dictator:n=4,i=3,sign=-1", "ec:n=9",
                                  "rm:r=3,h=2"])
def test_generators_match_loop_definitions(spec):
    f = bc.from_spec(spec)
    n = f.n
    name = spec.split(":")[0]
    defs = {
        "maj": oracles.maj,
        "parity": lambda x: math.prod(x),
        "and": lambda x: 1 if all(v == 1 for v in x) else -1,
        "or": lambda x: 1 if any(v == 1 for v in x) else -1,
        "dictator": lambda x: -x[2],
        "tribes": lambda x: 1 if any(all(v == 1 for v in x[2 * t:2 * t + 2])
                                     for t in range(4)) else -1,
        "ec": lambda x: oracles.maj([oracles.maj(x[3 * t:3 * t + 3]) for t in range(3)]),
        "rm": lambda x: oracles.maj([oracles.maj(x[3 * t:3 * t + 3]) for t in range(3)]),
    }
    assert list(f.values) == oracles.table(defs[name], n)


# ---------------------------------------------------------------- Fourier

@pytest.mark.parametrize("spec", ["maj:n=3", "tribes:r=2,m=2", "and:n=4"])
def test_wht_matches_direct_sums(spec):
    f = bc.from_spec(spec)
    fe = bc.wht(f)
    for mask in range(1 << f.n):
        subset = [i for i in range(f.n) if mask >> i & 1]
        assert fe.coeffs[mask] == pytest.approx(
            oracles.fourier_coefficient(list(f.values), f.n, subset), abs=1e-14)


def test_majority3_coefficients_frozen():
    fe = bc.wht(bc.majority(3))
    assert fe[(1,)] == 0.5 and fe[(1, 2, 3)] == -0.5 and fe[(1, 2)] == 0.0
    assert list(fe.level_weights()) == [0.0, 0.75, 0.0, 0.25]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2 ** 32 - 1))
def test_parseval_and_inversion(n, seed):
    rng = np.random.default_rng(seed)
    f = bc.BooleanFunction(n, rng.standard_normal(1 << n), bc.REAL)
    fe = bc.wht(f)
    assert np.sum(fe.coeffs ** 2) == pytest.approx(np.mean(f.values ** 2), rel=1e-12)
    assert np.allclose(bc.inverse_wht(fe).values, f.values, atol=1e-12)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_influences_three_ways(n):
    f = bc.majority(n)
    loop = [oracles.influence(list(f.values), n, i) for i in range(n)]
    assert np.allclose(bc.influences(f), loop, atol=1e-14)
    assert np.allclose(bc.influences_by_derivative(f), loop, atol=1e-14)
    # pivot probability C(n-1, (n-1)/2) / 2^(n-1)
    assert loop[0] == pytest.approx(math.comb(n - 1, (n - 1) // 2) / 2 ** (n - 1))


def test_total_influence_of_parity():
    assert bc.total_influence(bc.parity(6)) == pytest.approx(6.0)


# ---------------------------------------------------------------- noise

@pytest.mark.parametrize("spec,rho", [("maj:n=3", 0.5), ("tribes:r=2,m=2", -0.3),
                                      ("and:n=3", 0.9)])
def test_stability_matches_pair_enumeration(spec, rho):
    f = bc.from_spec(spec)
    assert bc.stability(f, rho) == pytest.approx(
        oracles.stability_by_pairs(list(f.values), f.n, rho), abs=1e-13)


def test_majority3_stability_frozen():
    # 3/4 rho + 1/4 rho^3 at rho = 1/2
    assert bc.stability(bc.majority(3), 0.5) == pytest.approx(0.40625, abs=1e-15)
    assert bc.majority_stability_exact(3, 0.5) == pytest.approx(0.40625, abs=1e-14)


@pytest.mark.parametrize("n", [5, 9, 13])
def test_majority_stability_closed_sum_matches_fourier(n):
    assert bc.majority_stability_exact(n, 0.3) == pytest.approx(
        bc.stability(bc.majority(n), 0.3), abs=1e-12)


def test_noise_operator_semigroup():
    f = random_pm(6, 1)
    a = bc.noise_operator(bc.noise_operator(f, 0.5), 0.4).values
    assert np.allclose(a, bc.noise_operator(f, 0.2).values, atol=1e-14)


def test_noisy_inner_product_mc_close_to_exact():
    f = bc.majority(5)
    est = bc.noisy_inner_product_mc(f, f, 0.5, 5, 50_000, seed=3)
    assert abs(est.mean - bc.stability(f, 0.5)) < 5 * est.std_error


def test_stability_curves_head_to_limits():
    c = bc.stability_curve("majority", 0.5, [1, 3, 5, 7, 9, 21, 51])
    assert c.approaching and c.limit == pytest.approx(1 / 3)
    c = bc.stability_curve("electoral_college", 0.5, [1, 9, 25])
    assert c.approaching
    assert bc.stability_curve("parity", 0.5, [1, 2, 3]).values == (0.5, 0.25, 0.125)


def test_tribes_stability_formula_matches_table():
    assert bc.tribes_stability_exact(2, 4, 0.4) == pytest.approx(
        bc.stability(bc.tribes(2, 4), 0.4), abs=1e-13)


# ---------------------------------------------------------------- tribes

@pytest.mark.parametrize("r", [1, 2])
def test_tribes_influence_brute_force(r):
    f = bc.tribes(r)
    loop = oracles.influence(list(f.values), f.n, 0)
    assert Fraction(loop).limit_denominator(1 << 20) == bc.tribes_influence_exact(r, 1 << r)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_tribes_influence_closed_form(r):
    m = 1 << r
    assert bc.tribes_influence_exact(r, m) == bc.tribes_influence_closed_form(r, m)
    assert bc.tribes_influence_closed_form(r, m) == \
        Fraction(2) ** (1 - r) * (1 - Fraction(1, m)) ** (m - 1)


# ---------------------------------------------------------------- resilience and friends

def test_resilience_parity_and_majority():
    assert bc.is_resilient(bc.parity(5), 4, 0.0).resilient
    v = bc.is_resilient(bc.majority(3), 1, 0.1)
    assert not v.resilient and v.max_deviation == pytest.approx(0.5)
    assert bc.resilience_from_fourier(bc.parity(5), 4, 0.0)


def test_resilience_witness_is_a_real_conditioning():
    f = bc.majority(5)
    v = bc.is_resilient(f, 2, 0.0)
    fixed = dict(zip(v.witness_set, v.witness_values))
    assert abs(bc.restrict(f, fixed).mean() - f.mean()) == pytest.approx(v.max_deviation)


def test_noisy_influence_sum_bound():
    for seed in range(5):
        lhs, bound, ok = bc.noisy_influence_sum_bound(random_pm(7, seed), 0.7)
        assert ok and lhs <= bound


def test_martingale_delta_quadratic_terms_sum_to_variance():
    f = random_pm(6, 4)
    rep = bc.martingale_delta(f)
    assert rep.quadratic.sum() == pytest.approx(f.variance(), abs=1e-12)


def test_russo_formula_for_monotone():
    for spec in ("maj:n=5", "tribes:r=2,m=2", "and:n=4"):
        d, s, ok = bc.russo_derivative_check(bc.from_spec(spec))
        assert ok, (spec, d, s)


def test_greedy_coalition_gains():
    tr = bc.greedy_coalition(bc.majority(7), 4)
    assert tr.nondecreasing and tr.gains_meet_floor and tr.means[-1] == 1.0


def test_decision_tree_regularity():
    tree, stats = bc.decision_tree_regularize(bc.majority(5), 0.2, 0.5)
    assert stats.ok and stats.leaves >= 2


# ---------------------------------------------------------------- hypercontractivity

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_forward_hypercontractivity(seed):
    rng = np.random.default_rng(seed)
    f = bc.BooleanFunction(6, rng.standard_normal(64), bc.REAL)
    assert bc.hypercontractivity_check(f, 1 / math.sqrt(3), 4, 2)[2]


def test_hypercontractivity_parameter_guard():
    f = bc.majority(3)
    with pytest.raises(ValueError):
        bc.hypercontractivity_check(f, 0.9, 4, 2)
    with pytest.raises(ValueError):
        bc.reverse_hypercontractivity_check(bc.BooleanFunction(1, [0.0, 1.0]), 0.5, 0.5, 0.25)


def test_degree2_fourth_moment():
    # q = x1 x2 + x1 x3 + x2 x3: E q^2 = 3, E q^4 = (2*81 + 6)/8 = 21
    c = np.zeros((3, 3))
    c[0, 1] = c[0, 2] = c[1, 2] = 1.0
    m4, bound, ok = bc.degree2_fourth_moment_check(c)
    loop = sum((x[0] * x[1] + x[0] * x[2] + x[1] * x[2]) ** 4
               for x in (oracles.point(i, 3) for i in range(8))) / 8
    assert m4 == pytest.approx(loop) == 21.0 and ok and bound == 81 * 9


def test_biased_measures():
    f = bc.majority(3)
    assert bc.prob_plus(f, 0.6) == pytest.approx(0.6 ** 3 + 3 * 0.6 ** 2 * 0.4)
    mu = bc.BiasedMeasure((0.6, 0.6, 0.6))
    assert bc.biased_expectation(f, mu) == pytest.approx(2 * 0.648 - 1)
    # I_{p,i} = 4 p (1-p) P[pivotal] with pivot probability 2 p (1-p)
    assert bc.biased_influences(f, mu)[0] == pytest.approx(4 * 0.24 * 2 * 0.24)


# ---------------------------------------------------------------- FKN

@pytest.mark.parametrize("eps", [1 / 256, 1 / 64, 1 / 16])
def test_fkn_recovers_corrupted_dictator(eps):
    rng = np.random.default_rng(11)
    d = bc.dictator(8, 5, -1)
    flip = rng.choice(256, size=int(eps * 256), replace=False)
    vals = d.values.copy()
    vals[flip] *= -1
    rep = bc.fkn_analysis(bc.BooleanFunction(8, vals, bc.PM1))
    assert (rep.dictator, rep.sign) == (5, -1)
    assert rep.distance == eps
    assert rep.level1_weight >= 1 - 8 * eps
