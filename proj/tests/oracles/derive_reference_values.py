#!/usr/bin/env python3
"""Independent reference values frozen into the C++ tests.

Run with plain python3; nothing here imports the library under test.
"""
import math
from fractions import Fraction
from itertools import product


def sampler_mean(mean):
    # E[max(1, ceil(X))] for X ~ Exp(mean) = sum_{k>=0} P(ceil(X) > k) with the
    # k = 0 term forced to 1, i.e. the geometric series sum_k exp(-k / mean).
    return 1.0 / (1.0 - math.exp(-1.0 / mean))


def sinusoid_range(mean, amp, period):
    vals = [max(0.0, mean + amp * math.sin(2 * math.pi * t / period)) for t in range(period)]
    return min(vals), max(vals)


def chain_start_vectors(durations, horizon):
    """Brute-force count of feasible start vectors for a chain on one machine."""
    k = len(durations)
    count = 0
    for starts in product(range(horizon), repeat=k):
        ok = True
        for i in range(k):
            if starts[i] + durations[i] > horizon:
                ok = False
            if i and starts[i] < starts[i - 1] + durations[i - 1]:
                ok = False
        count += ok
    return count


def binom_count(durations, horizon):
    return math.comb(horizon - sum(durations) + len(durations), len(durations))


def greedy_fig2():
    # Jobs J1 = chain(3,2,4), J2 = chain(2,3), both arriving at 0, two identical
    # machines. Earliest-start list scheduling, ties by (job, task) then machine.
    jobs = {1: [3, 2, 4], 2: [2, 3]}
    free = [0, 0]
    nxt = {1: 0, 2: 0}
    ready_at = {1: 0, 2: 0}
    finish = 0
    while any(nxt[j] < len(jobs[j]) for j in jobs):
        best = None
        for j in sorted(jobs):
            if nxt[j] >= len(jobs[j]):
                continue
            s = min(max(ready_at[j], f) for f in free)
            if best is None or s < best[0]:
                best = (s, j)
        s, j = best
        d = jobs[j][nxt[j]]
        m = min(range(2), key=lambda m: (max(ready_at[j], free[m]) + d, m))
        start = max(ready_at[j], free[m])
        free[m] = start + d
        ready_at[j] = start + d
        nxt[j] += 1
        finish = max(finish, start + d)
    return finish


def one_task_carbon(trace, start, length, kw):
    return sum(Fraction(kw) * Fraction(1, 4) * trace[t] for t in range(start, start + length))


if __name__ == "__main__":
    print("sampler mean (mean 7):", repr(sampler_mean(7)))
    print("sinusoid 300/250/96 range:", sinusoid_range(300, 250, 96))
    for d, h in [([1, 1], 3), ([2, 1], 6), ([1, 2, 1], 7), ([3], 5)]:
        print("chain", d, "H", h, "brute", chain_start_vectors(d, h), "formula", binom_count(d, h))
    print("greedy makespan J1(3,2,4) J2(2,3) on 2 machines:", greedy_fig2())
    print("energy base 10 on 2 kW speed 2:", Fraction(2) * Fraction(1, 4) * math.ceil(Fraction(10) / 2), "kWh")
    print("carbon [100,300] start 0:", one_task_carbon([100, 300], 0, 2, 1), "g")
    print("carbon [100,300,300] start 1:", one_task_carbon([100, 300, 300], 1, 2, 1), "g")
    costs = [one_task_carbon([300, 300, 100, 100], s, 2, 1) for s in range(3)]
    print("one task on [300,300,100,100] by start:", costs)
    print("processing times base 10:", [math.ceil(Fraction(10) / s) for s in
                                        (Fraction(1, 3), Fraction(1, 2), 1, Fraction(4, 3), 2)])
