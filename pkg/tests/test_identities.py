import random

import pytest

from blockising.core import ConstantKernel, LinearKernel
from blockising.identities import (
    FAULTS,
    LEFT_SENTINEL,
    RIGHT_SENTINEL,
    RunProfile,
    Z_J1,
    Z_Ji,
    Z_Ji_rhs,
    brute_force_partition_function,
    closed_run_sums,
    max_runs,
    min_side_cost,
    run_sums,
    sector_mass,
    side_cost,
    side_profiles,
    verify,
)
from blockising.qseries import blocking_partition_product


def test_minimal_side_costs():
    for L in range(6):
        assert min_side_cost(L, LEFT_SENTINEL) == L * (L - 1)
        assert min_side_cost(L, RIGHT_SENTINEL) == L * L
    assert max_runs(12) == (4, 3)


@pytest.mark.parametrize("sentinel", [LEFT_SENTINEL, RIGHT_SENTINEL])
def test_side_profiles_are_complete(sentinel):
    from itertools import product

    budget = 9
    got = dict(side_profiles(budget, sentinel))
    want = {(): 0}
    for length in range(1, 5):
        for parts in product(range(1, 6), repeat=length):
            c = side_cost(parts, sentinel)
            if c <= budget:
                want[parts] = c
    assert got == want


def test_Z_matches_product_and_brute_force():
    assert Z_J1(12) == blocking_partition_product(12)
    from blockising.identities import ising_partition_function

    assert ising_partition_function(10) == brute_force_partition_function(10)


@pytest.mark.parametrize("identity,D", [("thm1", 25), ("cor1_2", 14), ("thm2", 14), ("jtp", 20),
                                        ("lemma4", 7), ("remark2_1", 8)])
def test_identities_verify(identity, D):
    report = verify(identity, D)
    assert report.passed, report.to_json()


def test_beta_zero_sign_discrepancy_is_reported():
    report = verify("remark2_1", 6)
    assert report.details["product_form_matches_brute_force"] is True
    assert report.details["displayed_form_matches_brute_force"] is False
    mm = report.details["displayed_first_mismatch"]
    assert mm["q_degree"] == 1


@pytest.mark.parametrize("fault", FAULTS)
def test_faults_are_detected_at_first_affected_degree(fault):
    report = verify("thm1", 12, fault=fault)
    assert not report.passed
    expected_degree = {"drop_yinv_bracket": 0, "left_sentinel_zero": 0, "geometric_shift": 1}[fault]
    assert report.first_mismatch["q_degree"] == expected_degree


def test_sector_series_constant_term_and_sample():
    for n in range(-2, 4):
        Zn = Z_Ji(n, 8)
        assert Zn.coefficient(0, 0, 0) == 1
        assert Zn == Z_Ji_rhs(n, 8)
    # (3,3,1): omega_{-1} = 1, omega_{-3} = 2, Q-degree 7, y-exponent 2n - 1
    for n in (0, 2):
        assert Z_Ji_rhs(n, 7).coefficient(7, 0, 2 * n - 1) >= 1


def _random_profile(rng, D):
    while True:
        L, R = rng.randint(0, 3), rng.randint(0, 3)
        ells = tuple(rng.randint(1, 3) for _ in range(L))
        ms = tuple(rng.randint(1, 3) for _ in range(R))
        if side_cost(ells, LEFT_SENTINEL) + side_cost(ms, RIGHT_SENTINEL) <= D:
            return RunProfile(ells, ms)


@pytest.mark.parametrize("kernel", [ConstantKernel(), LinearKernel()], ids=["constant", "linear"])
def test_run_sums_closed_forms(kernel):
    rng = random.Random(7)
    D = 10
    for _ in range(50):
        prof = _random_profile(rng, D)
        n = rng.randint(-2, 3)
        direct = run_sums(kernel, n, prof, D, check=False)
        closed = closed_run_sums(kernel, n, prof, D)
        for key in "ABab":
            assert direct[key] == closed[key], (prof, n, key)
        uL = 0 if isinstance(kernel, ConstantKernel) else -2 * prof.L
        uR = 0 if isinstance(kernel, ConstantKernel) else 2 * prof.R
        if sum(prof.ells) <= D:
            assert direct["b"] == direct["B"].shifted(sum(prof.ells), 0, uL)
        if sum(prof.ms) <= D:
            assert direct["a"] == direct["A"].shifted(sum(prof.ms), 0, uR)


@pytest.mark.parametrize("n", [-1, 0, 1, 2])
def test_sector_mass_against_enumeration(n):
    for kernel in (ConstantKernel(), LinearKernel()):
        rep = sector_mass(kernel, n, 7)
        assert rep.matches_brute_force and rep.shift_relation
