"""Independent brute-force oracles used to pin expected values.

Everything here is written in the most literal style possible (plain loops,
cmath, itertools), deliberately sharing no code with the library's vectorized
paths, so that agreement between the two is evidence and not tautology.
"""

import cmath
import itertools
import math

TAU = 2.0 * math.pi


def naive_amplitude(phi_rows, ports, outcome):
    """(1/sqrt(M))^(N+1) * sum_m exp(i sum_l phi_l^m) * prod_n gamma^(m*k_n)."""
    particles = len(phi_rows)
    gamma = cmath.exp(2j * math.pi / ports)
    total = 0j
    for m in range(ports):
        term = cmath.exp(1j * sum(row[m] for row in phi_rows))
        for k in outcome:
            term *= gamma ** (m * k)
        total += term
    return total * (1.0 / math.sqrt(ports)) ** (particles + 1)


def naive_probability(phi_rows, ports, outcome):
    return abs(naive_amplitude(phi_rows, ports, outcome)) ** 2


def naive_probability_cosine(phi_rows, ports, outcome):
    """The cosine-expansion route, per-station delta phases spelled out."""
    particles = len(phi_rows)
    total = float(ports)
    for m in range(ports):
        for mp in range(m):
            phase = 0.0
            for l in range(particles):
                phase += (
                    phi_rows[l][m]
                    - phi_rows[l][mp]
                    + (TAU / ports) * outcome[l] * (m - mp)
                )
            total += 2.0 * math.cos(phase)
    return total * (1.0 / ports) ** (particles + 1)


def naive_correlation(phi_rows, ports):
    """sum over all outcomes of prod_l gamma^(k_l) times the probability."""
    particles = len(phi_rows)
    gamma = cmath.exp(2j * math.pi / ports)
    total = 0j
    for outcome in itertools.product(range(ports), repeat=particles):
        value = 1 + 0j
        for k in outcome:
            value *= gamma**k
        total += value * naive_probability(phi_rows, ports, outcome)
    return total


def naive_marginal(phi_rows, ports, station):
    """Single-station marginal by summing the joint table."""
    particles = len(phi_rows)
    marginal = [0.0] * ports
    for outcome in itertools.product(range(ports), repeat=particles):
        marginal[outcome[station]] += naive_probability(phi_rows, ports, outcome)
    return marginal


def enumerate_models(setting_counts, ports, constraints):
    """Count assignment tables satisfying every (pattern, required) pair.

    ``constraints`` is a list of (pattern, required_value) with 0-based
    setting indices. Returns (count, first satisfying table or None) walking
    tables in lexicographic order.
    """
    cells = sum(setting_counts)
    count = 0
    first = None
    for flat in itertools.product(range(ports), repeat=cells):
        tables = []
        cursor = 0
        for n in setting_counts:
            tables.append(flat[cursor : cursor + n])
            cursor += n
        ok = True
        for pattern, required in constraints:
            total = sum(tables[l][s] for l, s in enumerate(pattern))
            if total % ports != required:
                ok = False
                break
        if ok:
            count += 1
            if first is None:
                first = tuple(tables)
    return count, first
