"""Pure-Python Gillespie loop; same contract as the compiled ``_gillespie`` module."""

import math


def run_chunk(indptr, targets, cumrates, totals, occupation, uniforms, state, clock, horizon, n,
              times, visited):
    """Run up to ``n`` jumps, consuming ``uniforms[2k], uniforms[2k+1]`` for jump ``k``.

    Returns ``(state, clock, jumps_done, absorbed)``. Holding times are added
    to ``occupation`` in place; when ``times`` is nonempty the jump times and
    new states are written to ``times`` and ``visited``.
    """
    record = len(times) > 0
    k = 0
    while k < n:
        total = totals[state]
        if total <= 0.0:
            return state, clock, k, True
        dt = -math.log(1.0 - uniforms[2 * k]) / total
        if clock + dt >= horizon:
            occupation[state] += horizon - clock
            return state, horizon, k, False
        occupation[state] += dt
        clock += dt
        x = uniforms[2 * k + 1] * total
        j, end = indptr[state], indptr[state + 1] - 1
        while j < end and cumrates[j] <= x:
            j += 1
        state = int(targets[j])
        if record:
            times[k] = clock
            visited[k] = state
        k += 1
    return state, clock, k, False
