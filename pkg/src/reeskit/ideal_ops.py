"""Ideal-level algebra: membership, equality, sum, colon, saturation,
elimination, intersection, radical membership, Krull dimension, and height.

Colon and saturation follow the tag-variable constructions: I cap (f) via a
single auxiliary variable and a block elimination order, saturation I : f^oo
via the ideal I + (1 - y*f).  Heights are codimensions, which is valid because
every ambient ring here is a polynomial ring over a field.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .groebner import GroebnerBasis, buchberger, normal_form
from .polyring import (
    DEGREVLEX,
    MonomialOrder,
    Polynomial,
    RingMismatch,
    VarSet,
    elimination_order,
    mono_div,
    mono_divides,
    mono_mul,
)


class ZeroIdealDivisor(ValueError):
    """Colon or saturation by the zero ideal."""


class UnitIdeal(ValueError):
    """Dimension/height of the unit ideal is undefined here."""


class IdealHandle:
    """Finitely generated ideal: generator list plus cached reduced bases.

    Immutable except for the basis cache, whose inserts are idempotent (the
    reduced basis for a fixed order is canonical), so concurrent reads and
    inserts are harmless.
    """

    __slots__ = ("ring", "generators", "_gb_cache")

    def __init__(self, ring: VarSet, generators):
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatch("generator outside the ideal's ring")
            if g:
                gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "_gb_cache", {})

    def __setattr__(self, *args):
        raise AttributeError("IdealHandle is immutable")

    def __repr__(self):
        inner = ", ".join(str(g) for g in self.generators[:6])
        if len(self.generators) > 6:
            inner += f", ... ({len(self.generators)} gens)"
        return f"Ideal({inner})"

    def gb(self, order: MonomialOrder = DEGREVLEX) -> GroebnerBasis:
        cached = self._gb_cache.get(order)
        if cached is None:
            if not self.generators:
                cached = GroebnerBasis(self.ring, order, ())
            else:
                cached = buchberger(self.generators, order)
            self._gb_cache[order] = cached
        return cached

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return not self.is_zero() and self.gb().is_unit_ideal()


def ideal(ring: VarSet, generators) -> IdealHandle:
    return IdealHandle(ring, list(generators))


def ideal_sum(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    if I.ring != J.ring:
        raise RingMismatch("ideal sum requires one ring")
    return IdealHandle(I.ring, list(I.generators) + list(J.generators))


def ideal_product(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    if I.ring != J.ring:
        raise RingMismatch("ideal product requires one ring")
    return IdealHandle(I.ring, [f * g for f in I.generators for g in J.generators])


def contains(I: IdealHandle, p: Polynomial) -> bool:
    if p.ring != I.ring:
        raise RingMismatch("membership test requires one ring")
    if p.is_zero():
        return True
    if I.is_zero():
        return False
    return normal_form(p, I.gb(), DEGREVLEX).is_zero()


def ideal_contains(I: IdealHandle, J: IdealHandle) -> bool:
    return all(contains(I, g) for g in J.generators)


def ideal_equal(I: IdealHandle, J: IdealHandle) -> bool:
    if I.ring != J.ring:
        raise RingMismatch("ideal comparison requires one ring")
    return ideal_contains(I, J) and ideal_contains(J, I)


# -------------------------------------------------------------- ring moves

def _prepend_ring(I: IdealHandle, names) -> tuple:
    big = I.ring.prepend(names)
    return big, [g.rehome(big) for g in I.generators]


def eliminate(I: IdealHandle, drop) -> IdealHandle:
    """Generators of I intersected with the subring without the dropped block.

    The dropped variables must be a prefix of the ring's variable order (the
    convention throughout: auxiliary tags first, x-block before T-block), so a
    lex-over-degrevlex block order eliminates them.
    """
    drop = list(drop)
    k = len(drop)
    if set(drop) != set(I.ring.names[:k]):
        raise ValueError(f"dropped variables {drop} are not a prefix block of {I.ring.names}")
    kept = VarSet(I.ring.names[k:])
    if I.is_zero():
        return IdealHandle(kept, [])
    G = I.gb(elimination_order(k))
    out = []
    for g in G.generators:
        if all(all(m[i] == 0 for i in range(k)) for m in g.terms):
            out.append(g.rehome(kept))
    return IdealHandle(kept, out)


def intersect(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I cap J via the tag construction t*I + (1-t)*J and elimination of t."""
    if I.ring != J.ring:
        raise RingMismatch("intersection requires one ring")
    if I.is_zero() or J.is_zero():
        return IdealHandle(I.ring, [])
    tag = I.ring.fresh_name("t@")
    big, gens_i = _prepend_ring(I, (tag,))
    t = Polynomial.variable(big, tag)
    one_minus_t = Polynomial.constant(big, 1) - t
    gens = [t * g for g in gens_i]
    gens += [one_minus_t * h.rehome(big) for h in J.generators]
    elim = eliminate(IdealHandle(big, gens), (tag,))
    return IdealHandle(I.ring, [g.rehome(I.ring) for g in elim.generators])


def _divide_exact(p: Polynomial, f: Polynomial) -> Polynomial:
    """Exact quotient p / f; raises when f does not divide p."""
    if f.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    order = DEGREVLEX
    lm_f = f.leading_monomial(order)
    lc_f = f.leading_coefficient(order)
    work = dict(p.terms)
    quot = {}
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        if not mono_divides(lm_f, m):
            raise ArithmeticError("inexact polynomial division")
        qm = mono_div(m, lm_f)
        qc = c / lc_f
        quot[qm] = qc
        for bm, bc in f.terms.items():
            if bm == lm_f:
                continue
            mm = mono_mul(bm, qm)
            v = work.get(mm, Fraction(0)) - qc * bc
            if v:
                work[mm] = v
            else:
                work.pop(mm, None)
    return Polynomial._raw(p.ring, quot)


def _colon_single(I: IdealHandle, f: Polynomial) -> IdealHandle:
    """I : (f) = (1/f) * (I cap (f))."""
    meet = intersect(I, IdealHandle(I.ring, [f]))
    return IdealHandle(I.ring, [_divide_exact(g, f) for g in meet.generators])


def colon(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """Ideal quotient I : J, intersecting the single-generator quotients."""
    if I.ring != J.ring:
        raise RingMismatch("colon requires one ring")
    if J.is_zero():
        raise ZeroIdealDivisor("colon by the zero ideal")
    result = None
    for f in J.generators:
        part = _colon_single(I, f)
        result = part if result is None else intersect(result, part)
    return result


def _saturate_single(I: IdealHandle, f: Polynomial) -> IdealHandle:
    """I : f^oo via one auxiliary variable y and the ideal I + (1 - y*f)."""
    tag = I.ring.fresh_name("y@")
    big, gens = _prepend_ring(I, (tag,))
    y = Polynomial.variable(big, tag)
    gens.append(Polynomial.constant(big, 1) - y * f.rehome(big))
    elim = eliminate(IdealHandle(big, gens), (tag,))
    return IdealHandle(I.ring, [g.rehome(I.ring) for g in elim.generators])


def saturate(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """Saturation I : J^oo, intersected over the generators of J."""
    if I.ring != J.ring:
        raise RingMismatch("saturation requires one ring")
    if J.is_zero():
        raise ZeroIdealDivisor("saturation by the zero ideal")
    result = None
    for f in J.generators:
        part = _saturate_single(I, f)
        result = part if result is None else intersect(result, part)
    return result


def saturation_exponent(I: IdealHandle, J: IdealHandle, cap: int = 32) -> int:
    """Smallest N with I : J^N = I : J^oo (iterated-colon cross-check mode).

    Returns 0 when I is already saturated.
    """
    target = saturate(I, J)
    current = I
    for n in range(cap + 1):
        if ideal_equal(current, target):
            return n
        current = colon(current, J)
    raise RuntimeError(f"saturation exponent exceeds cap {cap}")


def radical_member(f: Polynomial, I: IdealHandle) -> bool:
    """Rabinowitsch test: f in sqrt(I) iff 1 in I + (1 - y*f)."""
    if f.ring != I.ring:
        raise RingMismatch("radical membership requires one ring")
    if f.is_zero():
        return True
    tag = I.ring.fresh_name("y@")
    big, gens = _prepend_ring(I, (tag,))
    y = Polynomial.variable(big, tag)
    gens.append(Polynomial.constant(big, 1) - y * f.rehome(big))
    return buchberger(gens, DEGREVLEX).is_unit_ideal()


# ------------------------------------------------------- dimension / height

def _minimal_supports(lms, nvars: int):
    supports = set()
    for m in lms:
        supports.add(frozenset(i for i in range(nvars) if m[i]))
    minimal = []
    for s in sorted(supports, key=lambda s: (len(s), sorted(s))):
        if not any(t <= s for t in minimal):
            minimal.append(s)
    return minimal


def _min_hitting_set(supports, nvars: int) -> int:
    """Smallest variable set meeting every support, by branch and bound."""
    best = [nvars]

    def search(idx: int, chosen: frozenset, size: int):
        if size >= best[0]:
            return
        while idx < len(supports) and supports[idx] & chosen:
            idx += 1
        if idx == len(supports):
            best[0] = size
            return
        for v in sorted(supports[idx]):
            search(idx + 1, chosen | {v}, size + 1)

    search(0, frozenset(), 0)
    return best[0]


def dimension(I: IdealHandle) -> int:
    """Krull dimension of ring/I: the largest variable subset containing no
    support of a minimal generator of the degrevlex leading-term ideal."""
    if I.is_zero():
        return len(I.ring)
    G = I.gb(DEGREVLEX)
    if G.is_unit_ideal():
        raise UnitIdeal("dimension of the unit ideal")
    supports = _minimal_supports(G.leading_monomials(), len(I.ring))
    return len(I.ring) - _min_hitting_set(supports, len(I.ring))


def height(I: IdealHandle) -> int:
    """Codimension: variable count minus dimension (polynomial ring over a field)."""
    return len(I.ring) - dimension(I)


def radical_equals_variable_prime(I: IdealHandle, vars) -> bool:
    """True iff sqrt(I) equals the prime generated by the given variables.

    Checks I is contained in (vars) by substituting the variables to zero in
    every generator, and that each variable passes the Rabinowitsch test.
    """
    vars = list(vars)
    if not vars:
        raise ValueError("variable list is empty")
    for g in I.generators:
        if not g.substitute_zero(vars).is_zero():
            return False
    return all(radical_member(Polynomial.variable(I.ring, v), I) for v in vars)


def radical_prime_witness(I: IdealHandle, vars) -> dict:
    """Like radical_equals_variable_prime, but reports what failed."""
    vars = list(vars)
    for g in I.generators:
        if not g.substitute_zero(vars).is_zero():
            return {"passed": False, "reason": "containment", "witness": str(g)}
    for v in vars:
        if not radical_member(Polynomial.variable(I.ring, v), I):
            return {"passed": False, "reason": "radical_membership", "witness": v}
    return {"passed": True, "reason": None, "witness": None}


def colon_via_combination(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """Cross-check route for colon: I : J = (I R[t] : sum_i t^(i-1) f_i) cap R."""
    if J.is_zero():
        raise ZeroIdealDivisor("colon by the zero ideal")
    tag = I.ring.fresh_name("t@")
    big, gens = _prepend_ring(I, (tag,))
    t = Polynomial.variable(big, tag)
    comb = Polynomial.zero(big)
    power = Polynomial.constant(big, 1)
    for f in J.generators:
        comb = comb + power * f.rehome(big)
        power = power * t
    quo = _colon_single(IdealHandle(big, gens), comb)
    elim = eliminate(quo, (tag,))
    return IdealHandle(I.ring, [g.rehome(I.ring) for g in elim.generators])
