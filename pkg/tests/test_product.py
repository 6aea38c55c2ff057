import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhosigma.arith import pi_set
from rhosigma.errors import ParameterError, TooLargeError
from rhosigma.product import (
    GroupSpec, analyze, check_bounds, make_raw, rho, sigma_bruteforce, sigma_exact,
    spec_from_json, spec_from_qs,
)
from rhosigma.psl2 import make_psl2

PI = (29, 67, 157, 227)
PSL_QS = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 49, 59, 61, 67, 121, 157, 227, 343]


def enumerate_witnesses(spec):
    """All optimal tuples in lexicographic order, by exhaustion."""
    best, tuples = -1, []
    for combo in itertools.product(*(f.degrees for f in spec.factors)):
        size = len(set().union(*(set(pi_set(d)) for d in combo))) if combo else 0
        if size > best:
            best, tuples = size, [list(combo)]
        elif size == best:
            tuples.append(list(combo))
    return best, tuples


def random_spec(rng, max_factors=6):
    factors = []
    for _ in range(rng.randint(0, max_factors)):
        if rng.random() < 0.5:
            factors.append(make_psl2(rng.choice(PSL_QS)))
        else:
            degs = {1} | {rng.randint(2, 3000) for _ in range(rng.randint(0, 5))}
            factors.append(make_raw(degs))
    return GroupSpec(tuple(factors))


def test_rho_examples():
    assert len(rho(spec_from_qs(PI))) == 14
    assert list(rho(spec_from_qs([29]))) == [2, 3, 5, 7, 29]
    assert len(rho(GroupSpec())) == 0


def test_sigma_examples():
    assert sigma_exact(spec_from_qs(PI))[0] == 6
    assert sigma_exact(spec_from_qs([29])) == (3, [30])
    assert sigma_exact(GroupSpec()) == (0, [])


def test_bruteforce_examples():
    assert sigma_bruteforce(spec_from_qs([29, 67])) == sigma_exact(spec_from_qs([29, 67]))[0]
    assert sigma_bruteforce(spec_from_qs([29])) == max(len(pi_set(d)) for d in make_psl2(29).degrees)
    assert sigma_bruteforce(spec_from_qs(PI)) == 6


def test_bruteforce_guard():
    spec = spec_from_qs([29] * 11)  # 5**11 > 10**7
    with pytest.raises(TooLargeError):
        sigma_bruteforce(spec)


def test_witness_is_lexicographically_first():
    for qs in ([29], [29, 67], [29, 59], PI, [7, 11, 13]):
        spec = spec_from_qs(qs)
        value, tuples = enumerate_witnesses(spec)
        assert sigma_exact(spec) == (value, tuples[0])


def test_randomized_oracle_agreement():
    rng = random.Random(20240611)
    for _ in range(250):
        spec = random_spec(rng)
        value, witness = sigma_exact(spec)
        assert value == sigma_bruteforce(spec)
        assert len(witness) == len(spec.factors)
        assert all(d in f.degrees for d, f in zip(witness, spec.factors))
        covered = set()
        for d in witness:
            covered |= set(pi_set(d))
        assert len(covered) == value


@given(st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_concatenation_laws(rnd):
    a, b = random_spec(rnd, 3), random_spec(rnd, 3)
    ab = a + b
    assert rho(ab) == rho(a) | rho(b)
    sa, sb, sab = sigma_exact(a)[0], sigma_exact(b)[0], sigma_exact(ab)[0]
    assert max(sa, sb) <= sab <= sa + sb


@given(st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_reordering_invariance(rnd):
    spec = random_spec(rnd, 5)
    shuffled = list(spec.factors)
    rnd.shuffle(shuffled)
    other = GroupSpec(tuple(shuffled))
    assert rho(other) == rho(spec)
    assert sigma_exact(other)[0] == sigma_exact(spec)[0]


def test_raw_factor_validation():
    with pytest.raises(ParameterError):
        make_raw([2, 3])
    with pytest.raises(ParameterError):
        make_raw([0, 1])
    assert make_raw([6, 1, 6]).degrees == (1, 6)


# ---------------------------
# Bounds
# ---------------------------

def verdicts(rho_size, sigma, tf, solv):
    return {v.bound: v for v in check_bounds(rho_size, sigma, tf, solv)}


def test_bounds_counterexample():
    v = verdicts(14, 6, True, False)
    assert v["theoremA(ii)"].holds and v["theoremA(ii)"].tight and v["theoremA(ii)"].rhs == 14
    assert not v["strengthened"].holds and v["strengthened"].rhs == 13
    assert v["huppert"].holds and not v["huppert"].tight
    assert "theoremA(i)" not in v and "theoremB" not in v


def test_bounds_small_sigma():
    v = verdicts(5, 3, True, False)
    assert v["theoremA(i)"].holds and v["theoremA(i)"].rhs == 7


def test_bounds_trivial():
    assert all(x.holds for x in check_bounds(0, 0, True, True))
    assert {x.bound for x in check_bounds(0, 0, True, True)} == {
        "strengthened", "theoremA(i)", "huppert", "theoremB"}


def test_bounds_reject_negative():
    with pytest.raises(ParameterError):
        check_bounds(-1, 0, False, False)


def test_bounds_solvable_violation_detected():
    v = verdicts(10, 3, False, True)
    assert not v["theoremB"].holds


# ---------------------------
# analyze and JSON
# ---------------------------

def test_analyze_examples():
    r = analyze(spec_from_qs(PI))
    assert (r.rho_size, r.sigma) == (14, 6)
    assert not r.theorem_violations
    r = analyze(spec_from_qs([29]))
    assert (r.rho_size, r.sigma) == (5, 3)
    r = analyze(GroupSpec((make_raw([1]),)))
    assert (len(r.rho), r.sigma, r.witness) == (0, 0, [1])


def test_analyze_raw_flags():
    spec = spec_from_json({"factors": [{"type": "degrees", "cd": [1, 30, 77, 13 * 17]}],
                           "solvable": True})
    names = [v.bound for v in analyze(spec).verdicts]
    assert "theoremB" in names and "theoremA(i)" not in names


def test_report_json_shape():
    doc = analyze(spec_from_qs(PI)).to_json()
    assert list(doc) == ["rho", "rho_size", "sigma", "witness", "verdicts"]
    assert doc["rho"] == sorted(doc["rho"])
    assert doc["verdicts"][0] == {"bound": "strengthened", "rhs": 13, "holds": False, "tight": False}


def test_spec_from_json():
    spec = spec_from_json({"factors": [{"type": "psl2", "q": 29}, {"type": "degrees", "cd": [1, 6]}]})
    assert spec.factors[0].q == 29 and spec.factors[1].degrees == (1, 6)
    for bad in ({}, {"factors": [{"type": "x"}]}, {"factors": [{"type": "degrees", "cd": [2]}]}):
        with pytest.raises(ParameterError):
            spec_from_json(bad)
