"""Multi-affine polynomials, hypercube coefficient extraction, line checks.

A multi-affine polynomial has degree at most one in each variable; its
coefficients are indexed by subsets of {1..n}, stored as bitmasks.  The
extraction operation recovers all coefficients of such a polynomial from
the function values on the 2^n vertices of a unit hypercube by exact
inclusion-exclusion (a finite-difference transform), and the line check
decides whether a function restricted to one affine line is affine with
a unique slope.

Points are plain tuples of RingElem.  Function oracles come in two
flavours: exhaustive tables over a finite ring, and symbolic multi-affine
polynomials (the only option over the rationals).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ArityError,
    InconsistencyError,
    MissingPointError,
    PreconditionError,
    UnsupportedRingError,
)
from .rings import Ring, RingElem

MAX_ARITY = 16

Point = tuple  # tuple[RingElem, ...]


def mask_to_subset(mask: int) -> tuple[int, ...]:
    """Bitmask -> ascending 1-based variable indices."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subset_to_mask(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def zero_point(ring: Ring, n: int) -> Point:
    return (ring.zero,) * n


def unit_point(ring: Ring, n: int, axis: int) -> Point:
    """Standard basis vector e_axis (1-based axis)."""
    return tuple(ring.one if i == axis - 1 else ring.zero for i in range(n))


def point_add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def point_scale(r: RingElem, v: Point) -> Point:
    return tuple(r * x for x in v)


class MultiAffinePoly:
    """Sparse multi-affine polynomial: sum over subsets J of a_J * prod_{j in J} x_j."""

    __slots__ = ("ring", "arity", "coeffs")

    def __init__(self, ring: Ring, arity: int, coeffs: dict[int, RingElem]):
        if not 1 <= arity <= MAX_ARITY:
            raise PreconditionError(f"arity must be in 1..{MAX_ARITY}, got {arity}")
        clean: dict[int, RingElem] = {}
        for mask, c in coeffs.items():
            if not 0 <= mask < (1 << arity):
                raise PreconditionError(f"mask {mask} out of range for arity {arity}")
            if c.ring != ring:
                raise PreconditionError("coefficient ring mismatch")
            if not c.is_zero:
                clean[mask] = c
        self.ring = ring
        self.arity = arity
        self.coeffs = clean

    def coeff(self, mask: int) -> RingElem:
        return self.coeffs.get(mask, self.ring.zero)

    def terms(self):
        """Coefficients in (popcount, subset-lex) order."""
        return sorted(
            self.coeffs.items(), key=lambda kv: (kv[0].bit_count(), mask_to_subset(kv[0]))
        )

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, MultiAffinePoly)
            and self.ring == other.ring
            and self.arity == other.arity
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for mask, c in self.terms():
            txt = self.ring.format_element(c)
            if mask:
                txt += "*" + "".join(f"x{i}" for i in mask_to_subset(mask))
            parts.append(txt)
        return " + ".join(parts)


def evaluate(poly: MultiAffinePoly, x: Point) -> RingElem:
    """Exact value of the polynomial at a point of matching arity."""
    if len(x) != poly.arity:
        raise ArityError(f"point has arity {len(x)}, poly has {poly.arity}")
    total = poly.ring.zero
    for mask, c in poly.coeffs.items():
        term = c
        m = mask
        i = 0
        while m:
            if m & 1:
                term = term * x[i]
            m >>= 1
            i += 1
        total = total + term
    return total


class TableOracle:
    """Function given by an exhaustive point -> value table over a finite ring."""

    def __init__(self, ring: Ring, arity: int, table: dict[Point, RingElem]):
        if not ring.is_finite:
            raise UnsupportedRingError("table oracles need a finite ring; use a poly oracle")
        if not 1 <= arity <= MAX_ARITY:
            raise PreconditionError(f"arity must be in 1..{MAX_ARITY}, got {arity}")
        expected = ring.size**arity
        if len(table) != expected:
            raise PreconditionError(
                f"table has {len(table)} entries, needs all {expected} points"
            )
        self.ring = ring
        self.arity = arity
        self.table = table

    def value(self, x: Point) -> RingElem:
        try:
            return self.table[x]
        except KeyError:
            coords = " ".join(self.ring.format_element(c) for c in x)
            raise MissingPointError(f"no table entry for point {coords}") from None


class PolyOracle:
    """Function given symbolically by a multi-affine polynomial."""

    def __init__(self, poly: MultiAffinePoly):
        self.poly = poly
        self.ring = poly.ring
        self.arity = poly.arity

    def value(self, x: Point) -> RingElem:
        return evaluate(self.poly, x)


FunctionOracle = TableOracle | PolyOracle


@dataclass(frozen=True)
class Line:
    """Affine line base + R*dir; the direction must be nonzero."""

    base: Point
    dir: Point

    def __post_init__(self):
        if len(self.base) != len(self.dir):
            raise ArityError("line base and direction have different arities")
        if all(c.is_zero for c in self.dir):
            raise PreconditionError("line direction must be nonzero")


@dataclass(frozen=True)
class LineCheck:
    """Outcome of a per-line affinity check: a slope, or a refuting triple."""

    slope: RingElem | None
    witness: tuple[RingElem, RingElem, RingElem] | None

    @property
    def ok(self) -> bool:
        return self.witness is None


def _check_arity(f: FunctionOracle, line: Line):
    if len(line.base) != f.arity:
        raise ArityError(f"line arity {len(line.base)} != oracle arity {f.arity}")


def line_affine_check(f: FunctionOracle, line: Line) -> LineCheck:
    """Decide whether f restricted to the line is affine.

    The candidate slope is forced to be f(base+dir) - f(base); over a
    finite ring every parameter value is checked, over the rationals the
    restriction is inspected symbolically.  On failure the witness is the
    parameter triple (0, 1, r) with r the first refuting parameter in
    canonical order.
    """
    _check_arity(f, line)
    ring = f.ring
    if ring.is_finite:
        f0 = f.value(line.base)
        slope = f.value(point_add(line.base, line.dir)) - f0
        for r in ring.elements():
            if f.value(point_add(line.base, point_scale(r, line.dir))) != f0 + slope * r:
                return LineCheck(None, (ring.zero, ring.one, r))
        return LineCheck(slope, None)
    if not isinstance(f, PolyOracle):
        raise UnsupportedRingError("line checks over the rationals need a poly oracle")
    shifted = shift_poly(f.poly, line.base)
    b = restrict_radial(shifted, line.dir)
    if all(b[k].is_zero for k in range(2, len(b))):
        return LineCheck(b[1], None)
    # the residual polynomial vanishes at 0 and 1 and has degree <= n, so
    # a refuting integer parameter is found within n+1 further tries
    f0 = b[0]
    slope = f.value(point_add(line.base, line.dir)) - f0
    for t in range(2, len(b) + 2):
        r = ring.from_int(t)
        acc = ring.zero
        for coef in reversed(b):
            acc = acc * r + coef
        if acc != f0 + slope * r:
            return LineCheck(None, (ring.zero, ring.one, r))
    raise InconsistencyError("nonzero residual polynomial refuted nowhere")


def psi_extract(f: FunctionOracle, base: Point | None = None) -> MultiAffinePoly:
    """Hypercube coefficients of f at the given base point.

    The coefficient at subset J is the alternating sum of f over the
    sub-hypercube spanned by J (inclusion-exclusion); the empty subset
    carries f(base).  Computed with an in-place finite-difference
    transform over all 2^n vertex values.
    """
    n = f.arity
    ring = f.ring
    if base is None:
        base = zero_point(ring, n)
    if len(base) != n:
        raise ArityError(f"base point arity {len(base)} != oracle arity {n}")
    vals = []
    for mask in range(1 << n):
        point = tuple(
            base[i] + ring.one if mask >> i & 1 else base[i] for i in range(n)
        )
        vals.append(f.value(point))
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                vals[mask] = vals[mask] - vals[mask ^ bit]
    return MultiAffinePoly(ring, n, {m: v for m, v in enumerate(vals) if not v.is_zero})


def restrict_radial(poly: MultiAffinePoly, v: Point) -> list[RingElem]:
    """Coefficients (b_0..b_n) of r -> poly(r*v): b_k = sum over |J|=k of a_J prod_{j in J} v_j."""
    if len(v) != poly.arity:
        raise ArityError(f"direction arity {len(v)} != poly arity {poly.arity}")
    ring = poly.ring
    b = [ring.zero] * (poly.arity + 1)
    for mask, c in poly.coeffs.items():
        term = c
        m = mask
        i = 0
        while m:
            if m & 1:
                term = term * v[i]
            m >>= 1
            i += 1
        k = mask.bit_count()
        b[k] = b[k] + term
    return b


def is_affine_poly(poly: MultiAffinePoly) -> bool:
    """True iff every stored coefficient sits on a subset of size <= 1."""
    return all(mask.bit_count() <= 1 for mask in poly.coeffs)


def shift_poly(poly: MultiAffinePoly, base: Point) -> MultiAffinePoly:
    """The polynomial x -> poly(base + x), again multi-affine."""
    if len(base) != poly.arity:
        raise ArityError("shift base arity mismatch")
    n = poly.arity
    ring = poly.ring
    dense = [ring.zero] * (1 << n)
    for mask, c in poly.coeffs.items():
        dense[mask] = c
    for i in range(n):
        if base[i].is_zero:
            continue
        bit = 1 << i
        for mask in range(1 << n):
            if not mask & bit:
                dense[mask] = dense[mask] + dense[mask | bit] * base[i]
    return MultiAffinePoly(ring, n, {m: v for m, v in enumerate(dense) if not v.is_zero})


def affine_poly(ring: Ring, constant: RingElem, linear) -> MultiAffinePoly:
    """Build c0 + sum c_i x_i from a constant and a linear coefficient list."""
    coeffs = {0: constant}
    for i, c in enumerate(linear, start=1):
        coeffs[1 << (i - 1)] = c
    return MultiAffinePoly(ring, len(linear), coeffs)
