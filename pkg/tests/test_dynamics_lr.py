import math
from fractions import Fraction

import pytest

from blockising.core import (
    ConstantKernel,
    LinearKernel,
    LongRangeKernel,
    ModelParams,
    ParticleConfiguration,
    SpinConfiguration,
    TableKernel,
    heat_bath,
    power,
)
from blockising.dynamics_lr import (
    concentration_report,
    fc_particle,
    g_c,
    kappa_exponent,
    kappa_weight,
    lambda_weight,
    lr_ising_rate,
    lr_ising_transitions,
    lr_particle_transitions,
    natural_transitions,
    pair_coupling,
    restricted_transitions,
    swap_energy_change,
)
from blockising.dynamics_nn import aggregate, ising_rate
from blockising.observables import enumerate_spin_sector, field_fc, hamiltonian, particle_configurations, weight
from blockising.reversibility import check_detailed_balance
from blockising.standup import lay_down, stand_up

from conftest import SAMPLE

H, T = Fraction(1, 2), Fraction(1, 3)
LR = LongRangeKernel({1: 1, 2: Fraction(1, 2), 3: 1})


def test_rate_with_no_interaction():
    p = ModelParams(H, T, kernel=LongRangeKernel({1: 0}, range_max=1))
    s = SpinConfiguration(0, (1, -1, -1))
    assert lr_ising_rate(s, 0, 2, p) == Fraction(1, 2) * T ** -2


def test_rate_is_energy_change_heat_bath():
    p = ModelParams(H, T, 0, -1, LR)
    s = SAMPLE
    for k in range(s.start, s.stop + 1):
        for l in range(s.start, s.stop + 1):
            if s[k] == 1 and s[l] == -1:
                dH = hamiltonian(s.swapped(k, l), LR) - hamiltonian(s, LR)
                assert lr_ising_rate(s, k, l, p) == power(T, k - l) * heat_bath(H, dH)


@pytest.mark.parametrize("kernel,u", [(ConstantKernel(), H), (LinearKernel(), Fraction(1, 4))])
def test_nearest_neighbour_embedding(kernel, u):
    from itertools import product

    p = ModelParams(u, T, 0, 0, kernel)
    for pattern in product((1, -1), repeat=4):
        if pattern[1] == pattern[2]:
            continue
        for start in (-3, 0, 2):
            s = SpinConfiguration(start - 3, (1,) * 3 + pattern + (-1,) * 3)
            i = start + 1
            k, l = (i, i + 1) if s[i] == 1 else (i + 1, i)
            assert lr_ising_rate(s, k, l, p) == ising_rate(s, i, p)


def test_hop_onto_stack_merges():
    p = ModelParams(H, T, 0, -1, LR)
    omega = ParticleConfiguration([1, 2, 0, 1])
    moves = [t for t in lr_particle_transitions(omega, p, -1, omega.rank)
             if t.detail.kind == "hop right" and t.detail.origin == 4 and t.detail.target == 1]
    assert len(moves) == 1
    mv = moves[0]
    assert mv.target == ParticleConfiguration({1: 4})
    assert mv.detail.spins == (-2, 3)
    assert mv.detail.distance == 5 and mv.detail.listed_distance == 6
    assert lay_down(mv.target, -1) == SAMPLE.swapped(-2, 3)


def test_exit_from_stack():
    p = ModelParams(H, T, 0, -1, LR)
    omega = ParticleConfiguration([1, 2, 0, 1])
    exits = [t for t in lr_particle_transitions(omega, p, -1, omega.rank)
             if t.detail.kind == "boundary out" and t.detail.origin == 2 and t.detail.m == 2]
    assert exits[0].target == ParticleConfiguration({1: 1, 4: 1})
    assert exits[0].detail.spins == (-4, 0)


def test_restricted_split_of_stack():
    p = ModelParams(H, T, 0, 0, LR)
    omega = ParticleConfiguration({1: 1, 2: 4})
    moves = {t.target for t in restricted_transitions(omega, p, 0, omega.rank)}
    assert ParticleConfiguration({1: 4, 2: 1}) in moves


@pytest.mark.parametrize("kernel,u", [(LR, H), (LongRangeKernel.nearest_neighbour(2), H),
                                      (LinearKernel(), Fraction(1, 4))])
@pytest.mark.parametrize("n", [-2, 0, 2])
def test_particle_side_matches_spin_swaps(kernel, u, n):
    p = ModelParams(u, T, 0, n, kernel)
    D = 5
    for s in enumerate_spin_sector(n, D):
        omega = stand_up(s, n)
        spins = aggregate(type(t)(t.source, stand_up(t.target, n), t.rate, t.move)
                          for t in lr_ising_transitions(s, p, D))
        moves = lr_particle_transitions(omega, p, n, D)
        assert aggregate(moves) == spins
        for t in moves:
            k, l = t.detail.spins
            assert t.detail.distance == abs(k - l)
            assert t.target.rank - omega.rank == k - l


def test_restricted_is_a_sublist():
    p = ModelParams(H, T, 0, 1, LR)
    for omega in particle_configurations(5):
        full = aggregate(lr_particle_transitions(omega, p, 1, 5))
        for t in restricted_transitions(omega, p, 1, 5):
            assert full[t.target] == t.rate
            assert abs(t.detail.origin - t.detail.target) == 1


def test_massaged_rate_breaks_balance():
    """Summing over every site (including k and l) shifts the argument by -2 J(k, l)."""
    p = ModelParams(H, T, 0, 0, LR)
    s = SpinConfiguration(0, (1, -1))
    k, l = 0, 1
    t = s.swapped(k, l)

    def massaged(sig, kk, ll):
        X = swap_energy_change(sig.__getitem__, kk, ll, LR) - 2 * pair_coupling(LR, kk, ll)
        return power(T, kk - ll) * heat_bath(H, X)

    assert weight(s, p) * lr_ising_rate(s, k, l, p) == weight(t, p) * lr_ising_rate(t, l, k, p)
    assert weight(s, p) * massaged(s, k, l) != weight(t, p) * massaged(t, l, k)


def test_natural_rate_examples():
    p = ModelParams(H, T)
    rates = {(t.move, t.detail): t.rate for t in natural_transitions(ParticleConfiguration({1: 2}), p, 6)}
    assert rates[("boundary out", (1, 0, 1))] == Fraction(1, 2) / T
    empty = {t.detail: t.rate for t in natural_transitions(ParticleConfiguration(), p, 6)}
    assert empty[(0, 1, 3)] == T ** 3
    single = {t.detail: t.rate for t in natural_transitions(ParticleConfiguration({2: 1}), p, 6)}
    assert single[(2, 1, 1)] == 1 / T


def test_natural_listed_indices_break_balance():
    """``r_{i+1}`` on right hops and ``r_{i-1}`` on left hops, as literally listed."""
    p = ModelParams(H, T)
    src, dst = ParticleConfiguration([2, 1]), ParticleConfiguration([3])
    r = lambda w, i: max(w[i], 1) if i else 1
    fwd_listed = T ** -1 / (r(src, 2) * r(src, 3))
    back_listed = T / (r(dst, 1) * r(dst, 0))
    kw = lambda w: kappa_weight(w, p, 0)
    assert kw(src) * fwd_listed != kw(dst) * back_listed
    rates = {t.target: t.rate for t in natural_transitions(src, p, 6)}
    back = {t.target: t.rate for t in natural_transitions(dst, p, 6)}
    assert kw(src) * rates[dst] == kw(dst) * back[src]


@pytest.mark.parametrize("n", range(-2, 4))
def test_kappa_dual_evaluation(n):
    for c in (0, Fraction(1, 2), Fraction(-1, 3)):
        assert fc_particle(ParticleConfiguration(), n, c) == n * (n + 1) - 2 * n * c
        for omega in particle_configurations(9):
            assert kappa_exponent(omega, n, c) == field_fc(lay_down(omega, n), c)


def test_g_c_pieces_on_sample():
    omega = stand_up(SAMPLE, -1)
    assert sum(g_c(omega, -1, r) for r in range(0, 7)) == field_fc(SAMPLE, 0) == 18


def test_lambda_and_kappa_agree():
    p = ModelParams(H, T, 0, -1)
    for s in enumerate_spin_sector(-1, 5):
        assert lambda_weight(s, p) == kappa_weight(stand_up(s, -1), p)


@pytest.mark.parametrize("model", ["lr", "restricted", "natural"])
def test_detailed_balance(model):
    for n in (-1, 0, 2):
        p = ModelParams(H, T, 0, n, LR)
        omegas = list(particle_configurations(6))
        if model == "lr":
            states = [lay_down(w, n) for w in omegas]
            gen = lambda s: lr_ising_transitions(s, p, 6)
            wfn = lambda s: weight(s, p, include_z=False)
        elif model == "restricted":
            states, gen = omegas, (lambda w: restricted_transitions(w, p, n, 6))
            wfn = lambda w: weight(lay_down(w, n), p, include_z=False)
        else:
            states, gen = omegas, (lambda w: natural_transitions(w, p, 6))
            wfn = lambda w: kappa_weight(w, p, n)
        rep = check_detailed_balance(states, gen, wfn)
        assert rep.ok and rep.pairs_checked > 0


def test_concentration_verdicts():
    ok = concentration_report(ModelParams(H, T), 60)
    assert ok.verdict == "summable-evidence" and ok.decay_ratio < 1
    affine = concentration_report(ModelParams(H, T, kernel=TableKernel(-1, (3, 1, 3))), 60)  # 2|i| + 1
    assert affine.verdict == "summable-evidence"
    lr = concentration_report(ModelParams(H, T, kernel=LR), 60)
    assert lr.condition == "long-range" and lr.verdict == "summable-evidence"
    # J(i) = i with u < q: the terms for i -> -infinity tend to 1
    lin = concentration_report(ModelParams(Fraction(1, 4), T, kernel=LinearKernel()), 60)
    assert lin.verdict == "diverging-evidence"
    assert all(math.isfinite(x) for x in lin.partial_sums)


def test_nearest_neighbour_long_range_condition_reduces():
    a = concentration_report(ModelParams(H, T), 40, "nearest-neighbour")
    b = concentration_report(ModelParams(H, T, kernel=LongRangeKernel.nearest_neighbour(1)), 40, "long-range")
    assert a.partial_sums == pytest.approx(b.partial_sums)
