"""Shared helpers for the test suite: random generators and brute oracles."""

from fractions import Fraction
from itertools import combinations, permutations, product

from linaff import MultiAffinePoly, TableOracle, evaluate


def rand_elem(ring, rng):
    if ring.is_finite:
        return ring.element_from_encoding(rng.randrange(ring.size))
    return ring.elem(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))


def rand_nonzero(ring, rng):
    while True:
        e = rand_elem(ring, rng)
        if not e.is_zero:
            return e


def rand_poly(ring, n, rng, density=0.6):
    coeffs = {}
    for mask in range(1 << n):
        if rng.random() < density:
            coeffs[mask] = rand_elem(ring, rng)
    return MultiAffinePoly(ring, n, coeffs)


def rand_affine_poly(ring, n, rng):
    coeffs = {mask: rand_elem(ring, rng) for mask in [0] + [1 << i for i in range(n)]}
    return MultiAffinePoly(ring, n, coeffs)


def rand_nonaffine_poly(ring, n, rng):
    """Random polynomial with at least one nonzero coefficient of degree >= 2."""
    poly = rand_poly(ring, n, rng)
    high = [m for m in range(1 << n) if m.bit_count() >= 2]
    mask = rng.choice(high)
    coeffs = dict(poly.coeffs)
    coeffs[mask] = rand_nonzero(ring, rng)
    return MultiAffinePoly(ring, n, coeffs)


def all_points(ring, n):
    return list(product(ring.elements(), repeat=n))


def table_from_poly(poly) -> TableOracle:
    table = {pt: evaluate(poly, pt) for pt in all_points(poly.ring, poly.arity)}
    return TableOracle(poly.ring, poly.arity, table)


def table_from_function(ring, n, func) -> TableOracle:
    return TableOracle(ring, n, {pt: func(pt) for pt in all_points(ring, n)})


def perm_determinant(rows, ring):
    """Independent determinant oracle: signed permutation expansion."""
    n = len(rows)
    total = ring.zero
    for perm in permutations(range(n)):
        term = ring.one
        for i in range(n):
            term = term * rows[i][perm[i]]
        inversions = sum(
            1 for a, b in combinations(range(n), 2) if perm[a] > perm[b]
        )
        total = total + (term if inversions % 2 == 0 else -term)
    return total


def psi_by_inclusion_exclusion(f, base):
    """Independent extraction oracle: the alternating-sum formula, term by term."""
    ring, n = f.ring, f.arity
    coeffs = {}
    for mask in range(1 << n):
        acc = ring.zero
        sub = mask
        while True:
            point = tuple(
                base[i] + ring.one if sub >> i & 1 else base[i] for i in range(n)
            )
            term = f.value(point)
            if (mask.bit_count() - sub.bit_count()) % 2:
                term = -term
            acc = acc + term
            if sub == 0:
                break
            sub = (sub - 1) & mask
        coeffs[mask] = acc
    return {m: c for m, c in coeffs.items() if not c.is_zero}


def is_pointwise_affine(f) -> bool:
    """Brute oracle: does any affine function match f everywhere?

    The candidate is forced by the values at 0 and the basis vectors, so a
    single pass decides it.
    """
    ring, n = f.ring, f.arity
    zero = (ring.zero,) * n
    c0 = f.value(zero)
    cs = []
    for i in range(n):
        e_i = tuple(ring.one if j == i else ring.zero for j in range(n))
        cs.append(f.value(e_i) - c0)
    for pt in all_points(ring, n):
        want = c0
        for c, x in zip(cs, pt):
            want = want + c * x
        if f.value(pt) != want:
            return False
    return True
