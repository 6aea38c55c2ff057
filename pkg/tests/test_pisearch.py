import pytest

from conftest import trial_division_primes, trial_factor
from rhosigma.errors import TooLargeError
from rhosigma.pisearch import (
    ConflictGraph, admissible, compatible, enumerate_admissible, is_compatible_family,
    max_compatible_family, ratio_csv, ratio_curve, ratio_rows,
)
from rhosigma.product import analyze, sigma_bruteforce, spec_from_qs


def brute_admissible(q):
    """Direct reading of the admissibility conditions, via trial division."""
    fac = trial_factor(q)
    if len(fac) != 1 or fac[0][0] <= 5:
        return False
    big = lambda m: [p for p, _ in trial_factor(m) if p not in (2, 3)]
    return len(big(q - 1)) == 1 and len(big(q + 1)) == 1


def test_admissible_examples():
    a = admissible(29)
    assert (a.r, a.s) == (7, 5) and list(a.reduced_spectrum) == [5, 7, 29]
    assert admissible(31) is None
    b = admissible(121)
    assert (b.p, b.f, b.r, b.s) == (11, 2, 5, 61)
    assert list(b.reduced_spectrum) == [5, 11, 61]


def test_admissible_rejects_non_prime_powers():
    assert admissible(30) is None and admissible(25) is None and admissible(2) is None


def test_record_invariants(small_admissible):
    for a in small_admissible:
        assert len(a.reduced_spectrum) == 3
        assert a.r != a.s
        assert (a.q * a.q - 1) % 6 == 0


def test_enumerate_matches_brute_force():
    expected = [q for q in range(7, 3001) if brute_admissible(q)]
    assert [a.q for a in enumerate_admissible(3000, include_powers=True)] == expected
    primes = set(trial_division_primes(3000))
    assert [a.q for a in enumerate_admissible(3000)] == [q for q in expected if q in primes]


def test_enumerate_examples():
    qs = [a.q for a in enumerate_admissible(100)]
    assert {29, 59, 61, 67} <= set(qs) and 31 not in qs and 37 not in qs
    assert enumerate_admissible(10) == []
    assert enumerate_admissible(6) == []
    assert {29, 67, 157, 227} <= {a.q for a in enumerate_admissible(250)}


def test_enumerate_matches_admissible():
    for a in enumerate_admissible(5000, include_powers=True):
        assert admissible(a.q) == a


def test_compatible_examples():
    assert compatible(admissible(29), admissible(67))
    assert not compatible(admissible(29), admissible(59))
    a = admissible(157)
    assert not compatible(a, a)


def test_compatibility_equals_full_spectrum_meeting_in_2_3(small_admissible):
    nodes = small_admissible[:60]
    full = {a.q: {a.p} | {p for p, _ in trial_factor(a.q**2 - 1)} for a in nodes}
    for a in nodes:
        for b in nodes:
            if a.q != b.q:
                assert compatible(a, b) == (full[a.q] & full[b.q] == {2, 3})


def test_conflict_graph(small_admissible):
    g = ConflictGraph.build(small_admissible)
    for u in range(len(g.nodes)):
        assert u not in g.adjacency[u]
        for v in g.adjacency[u]:
            assert u in g.adjacency[v]
            assert not compatible(g.nodes[u], g.nodes[v])


def test_greedy_family():
    nodes = enumerate_admissible(250)
    fam = max_compatible_family(nodes, "greedy")
    assert len(fam) >= 4
    assert [a.q for a in fam[:4]] == [29, 67, 157, 227]
    assert all(compatible(a, b) for i, a in enumerate(fam) for b in fam[i + 1:])


def test_family_small_cases():
    pair = [admissible(29), admissible(59)]
    for mode in ("greedy", "exact"):
        assert len(max_compatible_family(pair, mode)) == 1
        assert max_compatible_family([], mode) == []


def test_exact_mode_is_maximum(small_admissible):
    import itertools
    nodes = small_admissible[:14]
    best = 0
    for k in range(len(nodes), 0, -1):
        if any(is_compatible_family(c) for c in itertools.combinations(nodes, k)):
            best = k
            break
    fam = max_compatible_family(nodes, "exact")
    assert len(fam) == best
    assert len(fam) >= len(max_compatible_family(nodes, "greedy"))


def test_exact_equals_greedy_when_edgeless():
    fam = max_compatible_family(enumerate_admissible(3000), "greedy")[:12]
    assert max_compatible_family(fam, "exact") == max_compatible_family(fam, "greedy") == fam


def test_exact_guard(small_admissible):
    with pytest.raises(TooLargeError):
        max_compatible_family(small_admissible[:41], "exact")


def test_greedy_prefixes_match_closed_forms_by_bruteforce():
    fam = max_compatible_family(enumerate_admissible(2000), "greedy")
    for n in range(1, 7):
        spec = spec_from_qs(a.q for a in fam[:n])
        report = analyze(spec)
        assert report.rho_size == 3 * n + 2
        assert report.sigma == sigma_bruteforce(spec) == n + 2


def test_ratio_curve():
    rows = ratio_curve(3000, verify_cap=64)
    assert rows[3].rho == 14 and rows[3].sigma == 6
    assert rows[3].ratio == pytest.approx(14 / 6)
    assert rows[0].ratio == pytest.approx(5 / 3)
    assert all(a.ratio < b.ratio < 3 for a, b in zip(rows, rows[1:]))
    assert all(r.verified for r in rows[:64])


def test_ratio_rows_detect_bad_family():
    with pytest.raises(RuntimeError):
        ratio_rows([admissible(29), admissible(59)])


def test_ratio_csv():
    text = ratio_csv(ratio_curve(250))
    lines = text.splitlines()
    assert lines[0] == "n,q,rho,sigma,ratio"
    assert lines[1] == "1,29,5,3,1.666667"
    assert lines[4] == "4,227,14,6,2.333333"


def test_family_json():
    assert admissible(29).to_json() == {"q": 29, "p": 29, "f": 1, "r": 7, "s": 5}


def test_two_million_greedy_clears_2999():
    rows = ratio_curve(2 * 10**6, verify_cap=8)
    assert rows[-1].n >= 3999
    assert rows[-1].ratio > 2.999
    assert is_compatible_family(max_compatible_family(enumerate_admissible(2 * 10**6)))
