import io
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from blockising import _gillespie_py
from blockising import reversibility as rev
from blockising.core import ModelParams
from blockising.reversibility import (
    MODELS,
    ClosureError,
    TruncatedChain,
    check_detailed_balance,
    simulate,
    stationarity_check,
    total_variation,
    truncated_model,
    write_trajectory,
)

P = ModelParams(Fraction(1, 2), Fraction(1, 3))


@pytest.mark.parametrize("name", MODELS)
@pytest.mark.parametrize("n", [-1, 0, 2])
def test_models_are_reversible_and_stationary(name, n):
    m = truncated_model(name, P, n, 5)
    assert check_detailed_balance(m.states, m.generator, m.weight).ok
    assert stationarity_check(m.states, m.generator, m.weight) == 0


def test_doubled_rates_are_reported_exactly():
    m = truncated_model("standup", P, 0, 5)
    victims = set()
    for s in m.states[:4]:
        recs = m.generator(s)
        if recs and (recs[0].target, s) not in victims:
            victims.add((s, recs[0].target))

    def faulty(s):
        return [replace(r, rate=2 * r.rate) if (s, r.target) in victims else r for r in m.generator(s)]

    rep = check_detailed_balance(m.states, faulty, m.weight)
    got = {frozenset((x, y)) for x, y, *_ in rep.failures}
    assert got == {frozenset(v) for v in victims}
    assert len(rep.to_json()["failures"]) == len(rep.failures)


def test_missing_reverse_is_a_failure():
    m = truncated_model("standup", P, 0, 4)
    empty = m.states[0]
    drop = lambda s: [r for r in m.generator(s) if r.target != empty]
    assert not check_detailed_balance(m.states, drop, m.weight).ok


def test_float_mode_tolerance():
    m = truncated_model("ising", P.with_(u=0.5, q=1 / 3), 0, 4)
    rep = check_detailed_balance(m.states, m.generator, m.weight, mode="float", tol=1e-12)
    assert rep.ok and rep.tolerance == 1e-12


def test_uncapped_generator_is_rejected():
    from blockising.dynamics_nn import standup_transitions

    m = truncated_model("standup", P, 0, 3)
    with pytest.raises(ClosureError) as err:
        check_detailed_balance(m.states, lambda s: standup_transitions(s, P, 0), m.weight)
    assert err.value.escaping


@pytest.fixture(scope="module")
def chain_and_law():
    m = truncated_model("standup", P, 0, 4)
    chain = TruncatedChain.build(m.states, m.generator)
    return chain, [float(x) for x in m.exact_measure()], m.states.index(m.initial)


def test_simulation_is_deterministic(chain_and_law):
    chain, law, start = chain_and_law
    a = simulate(chain, start, 11, events=2000, exact=law, record=True)
    b = simulate(chain, start, 11, events=2000, exact=law, record=True)
    assert a.trajectory == b.trajectory and a.tv_distance == b.tv_distance
    c = simulate(chain, start, 12, events=2000, exact=law)
    assert c.final_state != a.final_state or c.total_time != a.total_time


def test_backends_agree(chain_and_law, monkeypatch):
    chain, law, start = chain_and_law
    fast = simulate(chain, start, 3, events=5000, exact=law, record=True)
    monkeypatch.setattr(rev, "_run_chunk", _gillespie_py.run_chunk)
    slow = simulate(chain, start, 3, events=5000, exact=law, record=True)
    assert fast.trajectory == slow.trajectory
    assert np.allclose(fast.occupation, slow.occupation, rtol=1e-12, atol=0)


def test_chunk_boundaries_do_not_matter(chain_and_law, monkeypatch):
    chain, law, start = chain_and_law
    whole = simulate(chain, start, 5, events=3000, record=True)
    monkeypatch.setattr(rev, "CHUNK", 512)
    pieces = simulate(chain, start, 5, events=3000, record=True)
    assert whole.trajectory == pieces.trajectory


def test_zero_length_and_horizon(chain_and_law):
    chain, law, start = chain_and_law
    z = simulate(chain, start, 0, events=0, exact=law)
    assert z.events == 0 and z.empirical[start] == 1.0
    h = simulate(chain, start, 0, t_max=50.0)
    assert h.total_time == pytest.approx(50.0)
    with pytest.raises(ValueError):
        simulate(chain, start, 0)


def test_tv_shrinks_with_run_length(chain_and_law):
    chain, law, start = chain_and_law
    short = np.median([simulate(chain, start, s, events=1000, exact=law).tv_distance for s in range(5)])
    long = np.median([simulate(chain, start, s, events=200_000, exact=law).tv_distance for s in range(5)])
    assert long < short and long < 0.02


def test_trajectory_csv(chain_and_law):
    chain, law, start = chain_and_law
    stats = simulate(chain, start, 1, events=10, record=True)
    buf = io.StringIO()
    write_trajectory(buf, stats)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "time,state_id" and len(lines) == 12
    times = [float(l.split(",")[0]) for l in lines[1:]]
    assert times == sorted(times)


def test_total_variation():
    assert total_variation([1, 0], [0, 1]) == 1.0
    assert total_variation([0.5, 0.5], [0.5, 0.5]) == 0.0
