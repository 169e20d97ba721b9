# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gillespie loop over a CSR rate table."""

from libc.math cimport log


def run_chunk(const long long[::1] indptr, const long long[::1] targets,
              const double[::1] cumrates, const double[::1] totals,
              double[::1] occupation, const double[::1] uniforms,
              long long state, double clock, double horizon, long long n,
              double[::1] times, long long[::1] visited):
    cdef long long k = 0, j, end
    cdef double total, dt, x
    cdef bint record = times.shape[0] > 0
    cdef bint absorbed = False
    with nogil:
        while k < n:
            total = totals[state]
            if total <= 0.0:
                absorbed = True
                break
            dt = -log(1.0 - uniforms[2 * k]) / total
            if clock + dt >= horizon:
                occupation[state] += horizon - clock
                clock = horizon
                break
            occupation[state] += dt
            clock += dt
            x = uniforms[2 * k + 1] * total
            j = indptr[state]
            end = indptr[state + 1] - 1
            while j < end and cumrates[j] <= x:
                j += 1
            state = targets[j]
            if record:
                times[k] = clock
                visited[k] = state
            k += 1
    return state, clock, k, absorbed
