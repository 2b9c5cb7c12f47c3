"""Division algorithm, Buchberger's algorithm, and reduced Groebner bases.

The public surface works with exact rational polynomials.  Internally the
Buchberger loop runs on primitive integer-coefficient term dicts keyed by
packed-integer monomials: the bit layout realizes the monomial order as native
integer comparison, multiplication is integer addition (complement fields
subtract a fixed offset), and divisibility is a guard-bit borrow test.  Pair
selection is the normal strategy (minimal lcm degree, then lexicographic pair
index) with the coprime and chain criteria applied during the Gebauer-Moeller
update, so results are deterministic and independent of the input generator
ordering.
"""

from __future__ import annotations

import heapq
from bisect import insort
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from operator import itemgetter

from .polyring import (
    DEGREVLEX,
    MonomialOrder,
    Polynomial,
    RingMismatch,
    VarSet,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic generators, mutually irreducible,
    sorted ascending by leading monomial."""

    ring: VarSet
    order: MonomialOrder
    generators: tuple

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def leading_monomials(self):
        return tuple(g.leading_monomial(self.order) for g in self.generators)

    def is_unit_ideal(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    def is_zero_ideal(self) -> bool:
        return not self.generators


# ------------------------------------------------------- rational division

def normal_form(p: Polynomial, basis, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """Full remainder of p on division by a polynomial sequence.

    Reducer selection is the first divisor in sequence order, so the result is
    deterministic for arbitrary sequences and canonical when the sequence is a
    reduced Groebner basis.  p - normal_form(p) lies in the ideal generated by
    the sequence, and no remainder term is divisible by any leading term.
    """
    if isinstance(basis, GroebnerBasis):
        basis = basis.generators
    basis = [g for g in basis if g]
    for g in basis:
        if g.ring != p.ring:
            raise RingMismatch("division requires a single ring")
    keyf = order.key
    info = [(g.leading_monomial(order), g.leading_coefficient(order), g.terms) for g in basis]
    work = dict(p.terms)
    remainder = {}
    while work:
        m = max(work, key=keyf)
        c = work.pop(m)
        hit = None
        for lm, lc, terms in info:
            if mono_divides(lm, m):
                hit = (lm, lc, terms)
                break
        if hit is None:
            remainder[m] = c
            continue
        lm, lc, terms = hit
        shift = mono_div(m, lm)
        factor = c / lc
        for bm, bc in terms.items():
            if bm == lm:
                continue
            mm = mono_mul(bm, shift)
            v = work.get(mm, Fraction(0)) - factor * bc
            if v:
                work[mm] = v
            else:
                work.pop(mm, None)
    return Polynomial._raw(p.ring, remainder)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    lmf = f.leading_monomial(order)
    lmg = g.leading_monomial(order)
    L = mono_lcm(lmf, lmg)
    mf = Polynomial._raw(f.ring, {mono_div(L, lmf): 1 / f.leading_coefficient(order)})
    mg = Polynomial._raw(g.ring, {mono_div(L, lmg): 1 / g.leading_coefficient(order)})
    return mf * f - mg * g


# ----------------------------------------------------- packed monomial specs

_EXP_CAP = 1 << 16
_W = 24  # value bits per field
_MAXC = (1 << _W) - 1


class _PackSpec:
    """Bit layout for one (variable count, order) pair.

    Fields sit most-significant-first in the order's comparison sequence, each
    `_W` bits wide with one spare guard bit; "comp" fields store MAXC - e so
    that bigger-int equals bigger-monomial, "plain" fields store e directly,
    and degree fields cache block degrees for the comparison only.
    """

    __slots__ = (
        "nvars", "order", "fields", "shifts", "mul_offset",
        "all_guards", "comp_mask", "plain_mask", "deg_shift",
    )

    def __init__(self, nvars: int, order: MonomialOrder):
        self.nvars = nvars
        self.order = order
        fields = []
        if order.kind == "degrevlex":
            fields.append(("deg", -1))
            for i in reversed(range(nvars)):
                fields.append(("comp", i))
        elif order.kind == "lex":
            for i in range(nvars):
                fields.append(("plain", i))
        else:
            k = order.split
            for i in range(k):
                fields.append(("plain", i))
            fields.append(("deg2", k))
            for i in reversed(range(k, nvars)):
                fields.append(("comp", i))
        self.fields = fields
        # assign bit positions, least-significant field last in `fields`
        shifts = []
        pos = 0
        for _ in reversed(fields):
            shifts.append(pos)
            pos += _W + 1
        shifts.reverse()
        self.shifts = shifts
        self.mul_offset = sum(
            _MAXC << s for (kind, _), s in zip(fields, shifts) if kind == "comp"
        )
        self.all_guards = sum(1 << (s + _W) for s in shifts)
        self.comp_mask = sum(
            1 << (s + _W) for (kind, _), s in zip(fields, shifts) if kind == "comp"
        )
        self.plain_mask = sum(
            1 << (s + _W) for (kind, _), s in zip(fields, shifts) if kind == "plain"
        )
        self.deg_shift = shifts[0] if fields[0][0] == "deg" else None

    def pack(self, m) -> int:
        v = 0
        for (kind, idx), s in zip(self.fields, self.shifts):
            if kind == "deg":
                val = sum(m)
            elif kind == "deg2":
                val = sum(m[idx:])
            elif kind == "plain":
                val = m[idx]
            else:
                val = _MAXC - m[idx]
            v |= val << s
        return v

    def pack_terms(self, terms: dict) -> dict:
        if any(e >= _EXP_CAP for m in terms for e in m):
            raise OverflowError(f"monomial exponent exceeds the packing cap {_EXP_CAP}")
        return {self.pack(m): c for m, c in terms.items()}

    def unpack(self, v: int):
        exps = [0] * self.nvars
        for (kind, idx), s in zip(self.fields, self.shifts):
            if kind in ("deg", "deg2"):
                continue
            val = (v >> s) & _MAXC
            exps[idx] = val if kind == "plain" else _MAXC - val
        return tuple(exps)

    def divides(self, a: int, b: int) -> bool:
        if self.comp_mask and ((a | self.all_guards) - b) & self.comp_mask != self.comp_mask:
            return False
        if self.plain_mask and ((b | self.all_guards) - a) & self.plain_mask != self.plain_mask:
            return False
        return True

    def mul(self, a: int, b: int) -> int:
        return a + b - self.mul_offset

    def div(self, a: int, b: int) -> int:
        return a - b + self.mul_offset

    def deg(self, a: int) -> int:
        if self.deg_shift is not None:
            return a >> self.deg_shift
        return sum(self.unpack(a))

    def lcm(self, a: int, b: int) -> int:
        return self.pack(mono_lcm(self.unpack(a), self.unpack(b)))

    def coprime(self, a: int, b: int) -> bool:
        ea, eb = self.unpack(a), self.unpack(b)
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))


_SPECS: dict = {}


def _spec_for(nvars: int, order: MonomialOrder) -> _PackSpec:
    key = (nvars, order)
    spec = _SPECS.get(key)
    if spec is None:
        spec = _PackSpec(nvars, order)
        _SPECS[key] = spec
    return spec


# ------------------------------------------------- integer engine internals

def _int_terms(p: Polynomial, spec: _PackSpec) -> dict:
    """Packed, denominator-free, content-free terms with positive lead."""
    if not p.terms:
        return {}
    den = 1
    for c in p.terms.values():
        d = c.denominator
        den = den // gcd(den, d) * d
    terms = {m: int(c * den) for m, c in p.terms.items()}
    return _primitive(spec.pack_terms(terms))


def _primitive(terms: dict) -> dict:
    if not terms:
        return terms
    g = 0
    for c in terms.values():
        g = gcd(g, c)
        if g == 1:
            break
    if terms[max(terms)] < 0:
        g = -g
    if g != 1:
        terms = {m: c // g for m, c in terms.items()}
    return terms


def _reduce_packed(work: dict, reducers: list, spec: _PackSpec, full: bool = True) -> dict:
    """Normal form of a packed integer term dict, content-free throughout.

    `reducers` is a list of (lm | guards, terms) pairs sorted ascending by
    leading monomial; the scan cuts off early because a divisor never exceeds
    its multiple in a global order.  The current lead is tracked through a
    lazy max-heap instead of rescanning the dict.  With full=False, stops once
    the leading monomial is irreducible.  The reducer-choice rule (smallest
    dividing lead) is deterministic; the reduced basis it feeds is canonical.
    """
    cmask = spec.comp_mask
    pmask = spec.plain_mask
    allg = spec.all_guards
    work = dict(work)
    heap = [-m for m in work]
    heapq.heapify(heap)
    out = {}
    while heap:
        m = -heap[0]
        c = work.get(m)
        if not c:
            heapq.heappop(heap)
            continue
        hit = None
        mg = m | allg
        for lmg, terms in reducers:
            if lmg > mg:
                break
            if cmask and (lmg - m) & cmask != cmask:
                continue
            if pmask and (mg - (lmg ^ allg)) & pmask != pmask:
                continue
            hit = (lmg ^ allg, terms)
            break
        if hit is None:
            if not full:
                work.update(out)
                return _primitive(work)
            heapq.heappop(heap)
            out[m] = work.pop(m)
            continue
        del work[m]
        heapq.heappop(heap)
        lm, terms = hit
        lc = terms[lm]
        g = gcd(c, lc)
        scale_self = lc // g
        scale_other = c // g
        if scale_self < 0:
            scale_self, scale_other = -scale_self, -scale_other
        if scale_self != 1:
            for k in work:
                work[k] *= scale_self
            for k in out:
                out[k] *= scale_self
        shift = m - lm  # packed offsets cancel in (bm + shift)
        for bm, bc in terms.items():
            if bm == lm:
                continue
            mm = bm + shift
            old = work.get(mm, 0)
            v = old - scale_other * bc
            if v:
                work[mm] = v
                if not old:
                    heapq.heappush(heap, -mm)
            else:
                work.pop(mm, None)
    return _primitive(out)


def _spoly_packed(fa: dict, la: int, fb: dict, lb: int, spec: _PackSpec) -> dict:
    L = spec.lcm(la, lb)
    ca, cb = fa[la], fb[lb]
    g = gcd(ca, cb)
    ma, mb = cb // g, ca // g
    sa = L - la
    sb = L - lb
    res = {}
    for m, c in fa.items():
        res[m + sa] = c * ma
    for m, c in fb.items():
        mm = m + sb
        v = res.get(mm, 0) - c * mb
        if v:
            res[mm] = v
        else:
            res.pop(mm, None)
    return _primitive(res)


def _update_pairs(heap, dead, lms, t: int, spec: _PackSpec):
    """Gebauer-Moeller pair update after appending generator index t.

    Applies the chain criterion to surviving old pairs and the multiple /
    equal-lcm / coprime criteria to candidate new pairs.  Old-pair removal is
    recorded in `dead` and skipped lazily when popping.
    """
    tau = lms[t]
    for entry in heap:
        _, i, j, L = entry
        if (i, j) in dead:
            continue
        if spec.divides(tau, L) and spec.lcm(lms[i], tau) != L and spec.lcm(lms[j], tau) != L:
            dead.add((i, j))
    cand = [(spec.lcm(lms[i], tau), i) for i in range(t)]
    keep = []
    for L, i in cand:
        dominated = False
        for L2, j in cand:
            if j != i and L2 != L and spec.divides(L2, L):
                dominated = True
                break
        if not dominated:
            keep.append((L, i))
    classes: dict = {}
    for L, i in keep:
        classes.setdefault(L, []).append(i)
    for L in sorted(classes):
        members = sorted(classes[L])
        if any(spec.coprime(lms[i], tau) for i in members):
            continue
        heapq.heappush(heap, (spec.deg(L), members[0], t, L))


def buchberger(gens, order: MonomialOrder = DEGREVLEX) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `gens`.

    Idempotent, and the output is independent of the ordering (and exact
    scaling) of the input generators.
    """
    gens = [g for g in gens if isinstance(g, Polynomial)]
    if not gens:
        raise ValueError("buchberger needs at least one polynomial to fix the ring")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatch("generators must share one ring")
    spec = _spec_for(len(ring), order)
    allg = spec.all_guards

    seed = []
    seen = set()
    for g in gens:
        t = _int_terms(g, spec)
        if not t:
            continue
        key = frozenset(t.items())
        if key not in seen:
            seen.add(key)
            seed.append(t)
    seed.sort(key=lambda t: sorted(t.items()))

    lms: list = []
    polys: list = []
    reducers: list = []  # (lm | guards, terms), kept sorted by leading monomial
    heap: list = []
    dead: set = set()

    def push(terms):
        polys.append(terms)
        lm = max(terms)
        lms.append(lm)
        insort(reducers, (lm | allg, terms), key=itemgetter(0))
        _update_pairs(heap, dead, lms, len(polys) - 1, spec)

    for t in seed:
        r = _reduce_packed(t, reducers, spec)
        if r:
            push(r)

    while heap:
        _, i, j, L = heapq.heappop(heap)
        if (i, j) in dead:
            continue
        s = _spoly_packed(polys[i], lms[i], polys[j], lms[j], spec)
        if not s:
            continue
        r = _reduce_packed(s, reducers, spec)
        if r:
            push(r)

    return _interreduce(ring, order, spec, lms, polys)


def _interreduce(ring, order, spec, lms, polys) -> GroebnerBasis:
    keyf = order.key
    idx = sorted(range(len(polys)), key=lambda i: lms[i])
    kept = []
    for i in idx:
        if not any(spec.divides(lms[j], lms[i]) for j in kept):
            kept.append(i)
    frac = [
        Polynomial._raw(
            ring, {spec.unpack(m): Fraction(c) for m, c in polys[i].items()}
        ).monic(order)
        for i in kept
    ]
    changed = True
    while changed:
        changed = False
        for i in range(len(frac)):
            others = frac[:i] + frac[i + 1:]
            r = normal_form(frac[i], others, order).monic(order)
            if r != frac[i]:
                frac[i] = r
                changed = True
    frac.sort(key=lambda g: keyf(g.leading_monomial(order)))
    return GroebnerBasis(ring, order, tuple(frac))


def leading_term_ideal(G: GroebnerBasis):
    """Minimal monomial generators of the initial ideal of a reduced basis."""
    return G.leading_monomials()
