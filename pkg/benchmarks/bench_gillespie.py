"""Time the compiled and pure-Python Gillespie loops on the same chain and seed.

    python benchmarks/bench_gillespie.py --events 1000000 --rank 6
"""

import argparse
import time
from fractions import Fraction

import numpy as np

from blockising import _gillespie_py
from blockising import reversibility as rev
from blockising.core import ConstantKernel, ModelParams


def run(chunk_fn, chain, events, seed):
    saved = rev._run_chunk
    rev._run_chunk = chunk_fn
    try:
        t0 = time.perf_counter()
        stats = rev.simulate(chain, 0, seed, events=events)
        return time.perf_counter() - t0, stats
    finally:
        rev._run_chunk = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="standup", choices=rev.MODELS)
    ap.add_argument("--rank", type=int, default=6)
    ap.add_argument("--events", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    params = ModelParams(Fraction(1, 2), Fraction(1, 3), 0, 0, ConstantKernel())
    model = rev.truncated_model(args.model, params, 0, args.rank)
    chain = rev.TruncatedChain.build(model.states, model.generator)
    print(f"{args.model}, rank <= {args.rank}: {len(chain)} states, {len(chain.targets)} edges, "
          f"{args.events} events")

    t_py, s_py = run(_gillespie_py.run_chunk, chain, args.events, args.seed)
    print(f"python : {t_py:8.3f} s  ({args.events / t_py:,.0f} events/s)")
    try:
        from blockising._gillespie import run_chunk
    except ImportError:
        print("cython : extension not built")
        return
    t_cy, s_cy = run(run_chunk, chain, args.events, args.seed)
    print(f"cython : {t_cy:8.3f} s  ({args.events / t_cy:,.0f} events/s)  speed-up {t_py / t_cy:.1f}x")
    same = s_py.final_state == s_cy.final_state and np.array_equal(s_py.occupation, s_cy.occupation)
    print("identical trajectories:", same)


if __name__ == "__main__":
    main()
