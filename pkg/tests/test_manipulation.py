from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsc import boolean_core as bc
from qsc import manipulation as mp

import oracles

# exact census values, frozen from the loop oracle
CENSUS = {("borda", 3, 2): {None: Fraction(7, 18), 2: Fraction(7, 18)},
          ("borda", 3, 3): {None: Fraction(17, 72)},
          ("plurality", 3, 3): {None: Fraction(1, 6)},
          ("borda", 4, 2): {None: Fraction(29, 48), 2: Fraction(121, 288)}}
ORACLE_RULES = {"borda": oracles.borda_winner, "plurality": oracles.plurality_winner}


# ---------------------------------------------------------------- rankings

@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_ranking_codes_follow_permutations_order(k):
    for code, r in enumerate(permutations(range(k))):
        assert mp.ranking_code(r) == code
    assert [tuple(p) for p in mp.all_rankings(k)] == list(permutations(range(k)))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(1, 3), st.data())
def test_profile_round_trip(k, n, data):
    m = len(mp.all_rankings(k))
    idx = data.draw(st.integers(0, m ** n - 1))
    prof = mp.decode_profile(idx, k, n)
    assert mp.encode_profile(prof, k) == idx
    assert mp.profile_codes([idx], m, n)[0].tolist() == [mp.ranking_code(r) for r in prof]


def test_span_table_matches_loop():
    perms = mp.all_rankings(4)
    tab = mp.span_table(perms)
    for p in range(24):
        for q in range(24):
            assert tab[p, q] == oracles.span(tuple(perms[p]), tuple(perms[q]))


def test_parse_and_format():
    assert mp.parse_ranking("cadb") == (2, 0, 3, 1)
    assert mp.format_ranking((2, 0, 3, 1)) == "cadb"


# ---------------------------------------------------------------- rules

@pytest.mark.parametrize("name", ["borda", "plurality"])
def test_score_rules_match_loop_winners(name):
    f = mp.named_rule(name, 3, 3)
    tab = f.table()
    for idx, prof in enumerate(product(oracles.rankings(3), repeat=3)):
        assert tab[idx] == ORACLE_RULES[name](prof, 3)


def test_copeland_and_veto_small_cases():
    prof = (mp.parse_ranking("abc"), mp.parse_ranking("bca"), mp.parse_ranking("cab"))
    assert mp.copeland(3, 3)(prof) == 0          # three-way tie, lowest index
    assert mp.veto(3, 3)(prof) == 0              # every alternative vetoed once
    prof = (mp.parse_ranking("abc"), mp.parse_ranking("abc"), mp.parse_ranking("bac"))
    assert mp.copeland(3, 3)(prof) == 0 and mp.veto(3, 3)(prof) == 0
    assert mp.plurality(3, 3).tie_mask()[mp.encode_profile(prof, 3)] == False  # noqa: E712


def test_table_budget_and_validation():
    with pytest.raises(ValueError):
        mp.from_table(3, 1, np.array([0, 1, 2, 3, 0, 1]))
    with pytest.raises(ValueError):
        mp.named_rule("approval", 3, 2)


def test_top_h_and_two_valued():
    f = mp.top_h(4, 2, 2, (1, 3))
    prof = (mp.parse_ranking("abcd"), mp.parse_ranking("dcba"))
    assert f(prof) == 3
    g = mp.two_valued(bc.majority(3), 3, 0, 2)
    prof = (mp.parse_ranking("abc"), mp.parse_ranking("cba"), mp.parse_ranking("bac"))
    assert g(prof) == 0


# ---------------------------------------------------------------- manipulation

def test_borda_example():
    f = mp.borda(4, 2)
    truth = (mp.parse_ranking("abcd"), mp.parse_ranking("cadb"))
    lie = (truth[0], mp.parse_ranking("cdba"))
    assert f(truth) == 0 and f(lie) == 2
    rec = mp.is_manipulable_at(f, truth)
    assert rec.voter == 2 and rec.outcome == 0
    assert truth[1].index(rec.new_outcome) < truth[1].index(0)


@pytest.mark.parametrize("key", list(CENSUS))
def test_census_against_loop_oracle(key):
    name, k, n = key
    c = mp.census(mp.named_rule(name, k, n), k)
    for r, frac in CENSUS[key].items():
        got = c.p_manipulable if r is None else c.p_r[r]
        assert got == float(frac)
        if k == 3 and n == 2:
            assert float(oracles.manipulation_census(ORACLE_RULES[name], k, n, r)) == got


def test_census_nested_and_monotone_in_r():
    c = mp.census(mp.plurality(4, 2))
    vals = [c.p_r[r] for r in sorted(c.p_r)]
    assert all(a <= b for a, b in zip(vals, vals[1:])) and vals[-1] == c.p_manipulable


def test_min_span_matches_record_search():
    f = mp.copeland(3, 3)
    ms = mp.min_span_array(f)
    for idx in range(0, f.size, 7):
        rec = mp.is_manipulable_at(f, mp.decode_profile(idx, 3, 3))
        assert ms[idx] == (0 if rec is None else rec.r)


def test_census_mc_close_to_exact():
    f = mp.borda(3, 3)
    est = mp.census_mc(f, samples=3000, seed=1)
    assert abs(est["M"]["estimate"] - 17 / 72) < 4 * est["M"]["std_error"]


def test_pair_sampler():
    f = mp.borda(4, 2)
    a = mp.manipulation_pair_mc(f, samples=5000, seed=3)
    assert a == mp.manipulation_pair_mc(f, samples=5000, seed=3, threads=2)
    assert 0 < a.mean < 1
    with pytest.raises(ValueError):
        mp.manipulation_pair_mc(mp.borda(3, 2))


@pytest.mark.parametrize("k,n", [(3, 2), (3, 3), (4, 2)])
def test_gs_witness_for_zoo(k, n):
    for f in mp.rule_zoo(k, n):
        rec = mp.gs_witness(f)
        prof = rec.profile
        lie = prof[:rec.voter - 1] + (rec.misreport,) + prof[rec.voter:]
        truth = prof[rec.voter - 1]
        assert f(lie) == rec.new_outcome
        assert truth.index(rec.new_outcome) < truth.index(f(prof))


@pytest.mark.parametrize("k,n", [(3, 2), (3, 3), (4, 2)])
def test_nonmanipulable_rules_have_no_points(k, n):
    rules = [mp.dictator(k, n, v) for v in range(1, n + 1)]
    rules += [mp.top_h(k, n, 1, h) for h in combinations(range(k), 2)]
    pts = bc.cube_points(n)
    monotone = [g for g in (bc.BooleanFunction(n, np.array(bits, float), bc.PM1)
                            for bits in product([-1, 1], repeat=1 << n)) if bc.is_monotone(g)]
    rules += [mp.two_valued(g, k, a, b) for g in monotone for a, b in [(0, 1), (2, 0)]]
    for f in rules:
        assert mp.census(f).count == 0, f.name
    assert len(monotone) == {2: 6, 3: 20}[n] and pts.shape[1] == n


def test_gs_preconditions():
    with pytest.raises(ValueError):
        mp.gs_witness(mp.dictator(3, 2))
    with pytest.raises(ValueError):
        mp.gs_witness(mp.two_valued(bc.majority(3), 3, 0, 1))


# ---------------------------------------------------------------- influences

def test_influence_tables_against_loops():
    f = mp.plurality(3, 2)
    tab = mp.ranking_influences(f)
    perms = oracles.rankings(3)
    t = f.table()
    for i in range(2):
        # Inf_i = P[f(sigma) != f(sigma with voter i re-drawn)]
        diff = 0
        for idx, prof in enumerate(product(perms, repeat=2)):
            for r in perms:
                new = list(prof)
                new[i] = r
                diff += t[idx] != t[mp.encode_profile(new, 3)]
        assert tab.inf()[i] == pytest.approx(diff / 6 ** 3)
    assert mp.influence_identities(tab)


def test_plurality_influence_frozen():
    tab = mp.ranking_influences(mp.plurality(3, 3))
    assert tab.inf()[0] == pytest.approx(0.345679, abs=1e-6)


@pytest.mark.parametrize("rule", ["plurality", "borda", "copeland", "veto"])
def test_influence_inequalities(rule):
    f = mp.named_rule(rule, 3, 3)
    assert mp.influence_variance_check(f)[2]
    assert mp.transposition_influence_check(f)
    assert mp.const_distance_check(f)[2]
    assert mp.nonmanip_boundary_audit(f) == 0


def test_boundary_census_consistency():
    f = mp.borda(3, 2)
    bcs = mp.boundary_census(f, 0, 1)
    tab = mp.ranking_influences(f)
    assert np.array_equal(bcs.pair_sizes, tab.pair_counts[:, 0, 1])
    assert bcs.refined_inf_gap == 0.0
    assert np.all((bcs.fiber_fraction >= 0) & (bcs.fiber_fraction <= 1))


def test_fiber_ids():
    f = mp.borda(3, 2)
    fid = mp.fiber_ids(f, 0, 1)
    for idx in range(0, f.size, 5):
        prof = mp.decode_profile(idx, 3, 2)
        expect = sum(1 << v for v, r in enumerate(prof) if r.index(0) < r.index(1))
        assert fid[idx] == expect


# ---------------------------------------------------------------- paths and isoperimetry

def test_canonical_paths():
    s, p = (0, 1, 2, 3), (3, 2, 1, 0)
    path = mp.canonical_path(s, p)
    assert path[0] == s and path[-1] == p and len(path) - 1 == 6
    path = mp.canonical_path((0, 2, 1, 3), (2, 3, 0, 1), variant=2, pair=(0, 1))
    assert all(q.index(0) < q.index(1) for q in path) and path[-1] == (2, 3, 0, 1)
    with pytest.raises(ValueError):
        mp.canonical_path((1, 0, 2), (0, 1, 2), variant=2, pair=(0, 1))


@pytest.mark.parametrize("k", [3, 4])
def test_congestion(k):
    r1 = mp.congestion_census(k)
    assert r1.ok and r1.max_congestion <= k * k * len(mp.all_rankings(k)) // 2
    r2 = mp.congestion_census(k, variant=2)
    assert r2.ok and r2.order_kept
    assert (mp.congestion_census(3).max_congestion, mp.congestion_census(4).max_congestion) \
        == (15, 96)


def test_edge_boundary_against_edge_loop():
    rng = np.random.default_rng(0)
    ell, n = 4, 2
    member = rng.random(ell ** n) < 0.4
    pts = list(product(range(ell), repeat=n))
    cut = 0
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if sum(x != y for x, y in zip(pts[a], pts[b])) == 1:
                cut += member[a] != member[b]
    assert mp.edge_boundary_product_complete(ell, n, member) == cut


def test_isoperimetry_random_sets():
    rng = np.random.default_rng(1)
    for _ in range(50):
        size = int(rng.integers(1, 181))
        member = np.zeros(216, bool)
        member[rng.choice(216, size, replace=False)] = True
        rep = mp.product_complete_graph_isoperimetry(6, 3, member)
        assert rep.applicable and rep.ok


# ---------------------------------------------------------------- local dictators

def test_local_dictators():
    ld = mp.local_dictator_census(mp.dictator(4, 2, 1), 1)
    perms = mp.all_rankings(4)
    pos = mp.position_table(perms, 4)
    for h, mask in ld.by_subset.items():
        ph = pos[:, list(h)]
        # voter 1's top choice decides, so H must fill the top three places
        on_top = ph.max(axis=1) == 2
        assert ld.counts[h] == int(on_top.sum()) * 24 == 144
    assert ld.pair_union(0, 1).sum() > 0
    none = mp.local_dictator_census(mp.dictator(4, 2, 2), 1)
    assert all(v == 0 for v in none.counts.values())


# ---------------------------------------------------------------- distances

def test_monotone_min_cost_against_enumeration():
    rng = np.random.default_rng(2)
    ct, cf = rng.random(8), rng.random(8)
    best = min(float(np.where(np.array(bits) > 0, ct, cf).sum())
               for bits in product([-1, 1], repeat=8)
               if bc.is_monotone(bc.BooleanFunction(3, np.array(bits, float), bc.PM1)))
    assert mp.monotone_min_cost(ct, cf)[0] == pytest.approx(best, abs=1e-12)


def test_sort_monotonize():
    v = np.array([1, -1, 1, -1, -1, 1, 1, -1], float)
    out = mp.sort_monotonize(v, 3)
    assert bc.is_monotone(bc.BooleanFunction(3, out, bc.PM1))
    assert sorted(out) == sorted(v)
    assert mp.monotonicity_violation_rate(out, 3) == 0


def _two_valued_distance_oracle(k, n, winner):
    perms = oracles.rankings(k)
    profiles = list(product(perms, repeat=n))
    table = [winner(p, k) for p in profiles]
    best = 1.0
    for bits in product([-1, 1], repeat=1 << n):
        g = bc.BooleanFunction(n, np.array(bits, float), bc.PM1)
        if not bc.is_monotone(g):
            continue
        for a, b in combinations(range(k), 2):
            wrong = 0
            for prof, w in zip(profiles, table):
                x = sum(1 << v for v, r in enumerate(prof) if r.index(a) < r.index(b))
                wrong += w != (a if g.values[x] > 0 else b)
            best = min(best, wrong / len(profiles))
    return best


def _dictator_distance_oracle(k, n, winner):
    profiles = list(product(oracles.rankings(k), repeat=n))
    best = 1.0
    for v in range(n):
        for size in range(1, k + 1):
            for h in combinations(range(k), size):
                wrong = sum(winner(p, k) != next(a for a in p[v] if a in h) for p in profiles)
                best = min(best, wrong / len(profiles))
    return best


def test_distance_to_nonmanipulable_family():
    f = mp.borda(3, 2)
    d = mp.dist_to_nonmanip(f)
    assert d.two_valued_exact == pytest.approx(_two_valued_distance_oracle(3, 2, oracles.borda_winner))
    assert d.dictator_distance == pytest.approx(_dictator_distance_oracle(3, 2, oracles.borda_winner))
    assert (d.two_valued_exact, d.dictator_distance) == pytest.approx((5 / 18, 13 / 36))
    assert d.two_valued_lower <= d.two_valued_exact <= d.two_valued_upper
    assert d.violation_bound_ok


def test_distance_zero_for_members():
    assert mp.dist_to_nonmanip(mp.dictator(3, 2, 2)).combined == 0
    d = mp.dist_to_nonmanip(mp.two_valued(bc.majority(3), 3, 1, 2))
    assert d.two_valued_exact == 0 and d.pair == (1, 2)


def test_quantitative_gate():
    g = mp.quantitative_gs_gate(mp.plurality(4, 2))
    assert g.ok and g.m4_fraction > 0


# ---------------------------------------------------------------- audits

def test_anonymity_and_neutrality():
    assert mp.anonymity_audit(mp.borda(3, 3)) == 0
    assert mp.anonymity_audit(mp.dictator(3, 3)) > 0
    assert mp.neutrality_audit(mp.borda(3, 3)) == 0
    assert mp.neutrality_audit(mp.dictator(3, 3), untied_only=False) == 0
    assert mp.neutrality_audit(mp.plurality(3, 2), untied_only=False) > 0
