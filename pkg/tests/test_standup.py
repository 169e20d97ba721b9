from hypothesis import given, strategies as st

from blockising.core import ParticleConfiguration, step_profile
from blockising.observables import enumerate_spin_sector, rank
from blockising.standup import SectorMismatch, lay_down, spin_site, spin_sites, stand_up

from conftest import SAMPLE

import pytest


def test_sample_round_trip():
    w = stand_up(SAMPLE, -1)
    assert w.as_list() == [1, 2, 0, 1]
    assert spin_site(w, -1, 1) == -4
    assert spin_site(w, -1, 2) == -2
    assert lay_down(w, -1) == SAMPLE


def test_ground_state():
    for n in range(-3, 4):
        assert stand_up(step_profile(n), n) == ParticleConfiguration()
        assert lay_down(ParticleConfiguration(), n) == step_profile(n)
        assert spin_site(ParticleConfiguration(), n, 5) == n + 5


def test_single_particle():
    s = lay_down(ParticleConfiguration({1: 1}), 0)
    assert s.to_string(s.start, s.stop) == "+-" and s.start == 0  # S_1 = 0, S_2 = 2


def test_sector_mismatch():
    with pytest.raises(SectorMismatch):
        stand_up(step_profile(1), 0)


@pytest.mark.parametrize("n", range(-2, 4))
def test_bijection_and_rank(n):
    seen = set()
    for s in enumerate_spin_sector(n, 7):
        w = stand_up(s, n)
        assert lay_down(w, n) == s
        assert w.rank == rank(s)
        seen.add(w)
    assert len(seen) == len(enumerate_spin_sector(n, 7))


@given(st.lists(st.integers(0, 3), max_size=6), st.integers(-3, 3))
def test_gaps_telescope(occ, n):
    w = ParticleConfiguration(occ)
    S = spin_sites(w, n, len(occ) + 1)
    for r in range(1, len(occ) + 1):
        assert S[r + 1] - S[r] - 1 == w[r]
