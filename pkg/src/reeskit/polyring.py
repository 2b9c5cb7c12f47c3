"""Exact multivariate polynomials over Q: named variables, monomial orders, parsing.

Everything in this module is immutable and pure.  A polynomial is a canonical
map from dense exponent tuples to nonzero rational coefficients, so two equal
polynomials are equal term-by-term and hash alike.  No floating point anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

# A monomial is a dense exponent tuple, one entry per ring variable.
Monomial = tuple

EXPONENT_LIMIT = 1 << 20


class RingMismatch(ValueError):
    """Operands belong to different variable sets."""


class UnknownVariable(ValueError):
    """An expression or operation referenced a variable the ring does not declare."""


class PolyParseError(ValueError):
    """Malformed polynomial expression; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonIntegerExponent(PolyParseError):
    """Exponents must be plain nonnegative integer literals."""


# ----------------------------------------------------------------- monomials

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b, i.e. a's exponents are entrywise <= b's."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def mono_deg(a: Monomial) -> int:
    return sum(a)


# ------------------------------------------------------------------ varsets

@dataclass(frozen=True)
class VarSet:
    """Ordered list of distinct variable names.

    Ordering matters: block (elimination) orders treat a prefix of the list as
    the eliminated block, so auxiliary variables are always prepended and the
    x-block precedes the T-block in combined rings.
    """

    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise ValueError("variable list is empty")
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be pairwise distinct: {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} not in ring {self.names}") from None

    def prepend(self, new_names) -> "VarSet":
        return VarSet(tuple(new_names) + self.names)

    def extend(self, new_names) -> "VarSet":
        return VarSet(self.names + tuple(new_names))

    def restrict(self, keep) -> "VarSet":
        keep = set(keep)
        return VarSet(tuple(n for n in self.names if n in keep))

    def fresh_name(self, base: str) -> str:
        """A name derived from `base` that does not collide with the ring."""
        if base not in self._index:
            return base
        k = 0
        while f"{base}{k}" in self._index:
            k += 1
        return f"{base}{k}"


# ------------------------------------------------------------------- orders

def _drl_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class MonomialOrder:
    """Total multiplicative well-order on monomials, given by a sort key.

    kind "block" compares the first `split` exponents lexicographically and
    the remainder by degrevlex, which makes the prefix block an elimination
    block: any monomial touching it beats every monomial in the tail block.
    """

    kind: str = "degrevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order kind {self.kind!r}")
        if self.kind == "block" and self.split <= 0:
            raise ValueError("block order needs a positive eliminated-block size")

    def key(self, m: Monomial):
        if self.kind == "degrevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        if self.kind == "lex":
            return m
        s = self.split
        return (m[:s], _drl_key(m[s:]))

    def describe(self) -> str:
        if self.kind == "block":
            return f"block(lex on first {self.split}, degrevlex on rest)"
        return self.kind


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def elimination_order(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


# -------------------------------------------------------------- polynomials

def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial over Q in a fixed VarSet, stored canonically."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: VarSet, terms=()):
        nvars = len(ring)
        cleaned = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for mono, coeff in items:
            mono = tuple(mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent tuple {mono} for ring of {nvars} variables")
            c = cleaned.get(mono, Fraction(0)) + _coerce(coeff)
            if c:
                cleaned[mono] = c
            else:
                cleaned.pop(mono, None)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "_hash", None)

    # construction helpers -------------------------------------------------

    @staticmethod
    def _raw(ring: VarSet, terms: dict) -> "Polynomial":
        """Internal fast path: takes ownership of a clean terms dict."""
        p = object.__new__(Polynomial)
        object.__setattr__(p, "ring", ring)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    @classmethod
    def zero(cls, ring: VarSet) -> "Polynomial":
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring: VarSet, c) -> "Polynomial":
        c = _coerce(c)
        if not c:
            return cls.zero(ring)
        return cls._raw(ring, {(0,) * len(ring): c})

    @classmethod
    def variable(cls, ring: VarSet, name: str) -> "Polynomial":
        i = ring.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(ring)))
        return cls._raw(ring, {mono: Fraction(1)})

    def __setattr__(self, *args):
        raise AttributeError("Polynomial is immutable")

    # predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def is_linear_form(self) -> bool:
        """True iff every term has total degree exactly 1 (zero counts)."""
        return all(sum(m) == 1 for m in self.terms)

    def total_degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    # arithmetic ------------------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(
                f"operands in different rings: {self.ring.names} vs {other.ring.names}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        self._check_ring(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, Fraction(0)) + c
            if v:
                res[m] = v
            else:
                res.pop(m, None)
        return Polynomial._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            if not c:
                return Polynomial.zero(self.ring)
            return Polynomial._raw(self.ring, {m: v * c for m, v in self.terms.items()})
        self._check_ring(other)
        res = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = res.get(m, Fraction(0)) + c1 * c2
                if v:
                    res[m] = v
                else:
                    del res[m]
        return Polynomial._raw(self.ring, res)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # queries ---------------------------------------------------------------

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = DEGREVLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return Polynomial._raw(self.ring, {m: c / lc for m, c in self.terms.items()})

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX, reverse: bool = True):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=reverse)

    def sort_key(self, order: MonomialOrder = DEGREVLEX):
        """Deterministic total sort key for polynomial sequences."""
        return tuple((order.key(m), c) for m, c in self.sorted_terms(order))

    # substitution ----------------------------------------------------------

    def substitute_zero(self, names) -> "Polynomial":
        """Drop every term that involves any of the given variables."""
        idx = [self.ring.index(n) for n in names]
        res = {m: c for m, c in self.terms.items() if all(m[i] == 0 for i in idx)}
        return Polynomial._raw(self.ring, res)

    def substitute(self, images: dict, target: VarSet | None = None) -> "Polynomial":
        """Ring map sending each variable to a polynomial image.

        Variables without an image must exist in the target ring and map to
        themselves.  Exact, no sharing of intermediate state.
        """
        target = target if target is not None else self.ring
        cache = {}
        for i, name in enumerate(self.ring.names):
            if name in images:
                img = images[name]
                if img.ring != target:
                    raise RingMismatch("substitution image lives in the wrong ring")
                cache[i] = img
            else:
                cache[i] = Polynomial.variable(target, name)
        out = Polynomial.zero(target)
        for m, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * cache[i] ** e
            out = out + term
        return out

    def rehome(self, target: VarSet) -> "Polynomial":
        """Reinterpret in another ring by variable name.

        Every variable actually occurring must exist in the target; unused
        source variables may be absent (this is how elimination results move
        to the subring).
        """
        if target == self.ring:
            return self
        pos = [target._index.get(n) for n in self.ring.names]
        width = len(target)
        res = {}
        for m, c in self.terms.items():
            out = [0] * width
            for i, e in enumerate(m):
                if e:
                    if pos[i] is None:
                        raise UnknownVariable(
                            f"variable {self.ring.names[i]!r} not in ring {target.names}"
                        )
                    out[pos[i]] = e
            res[tuple(out)] = c
        return Polynomial._raw(target, res)

    def variables_used(self):
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ring.names[i])
        return used

    # identity --------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        return poly_to_text(self)

    def __repr__(self):
        return f"Polynomial({poly_to_text(self)!r})"


# ------------------------------------------------------------------ printer

def _mono_text(ring: VarSet, m: Monomial) -> str:
    parts = []
    for name, e in zip(ring.names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def poly_to_text(p: Polynomial, order: MonomialOrder = DEGREVLEX) -> str:
    """Canonical text form; re-parses to an equal polynomial."""
    if p.is_zero():
        return "0"
    chunks = []
    for m, c in p.sorted_terms(order):
        mono = _mono_text(p.ring, m)
        mag = abs(c)
        coeff = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{coeff}*{mono}"
        else:
            body = coeff
        sign = "-" if c < 0 else "+"
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    text = first_body if first_sign == "+" else f"-{first_body}"
    for sign, body in chunks[1:]:
        text += f" {sign} {body}"
    return text


# ------------------------------------------------------------------- parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_{}]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PolyParseError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: expr := sign? term (('+'|'-') term)*;
    term := factor ('*' factor)*; factor := base ('^' uint)?;
    base := var | number | '(' expr ')'.

    Number literals may be integers or p/q rationals so that printed canonical
    forms (monic Groebner generators) round-trip.
    """

    def __init__(self, text: str, ring: VarSet):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"trailing input {val!r}", pos)
        return p

    def expr(self) -> Polynomial:
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            negate = val == "-"
            self.advance()
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                acc = acc - rhs if val == "-" else acc + rhs
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.advance()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            k2, v2, p2 = self.peek()
            if k2 != "num":
                raise NonIntegerExponent("exponent must be an integer literal", p2)
            if "/" in v2:
                raise NonIntegerExponent("exponent must be an integer, not a fraction", p2)
            self.advance()
            e = int(v2)
            if e > EXPONENT_LIMIT:
                raise PolyParseError(f"exponent {e} exceeds limit {EXPONENT_LIMIT}", p2)
            return base ** e
        return base

    def base(self) -> Polynomial:
        kind, val, pos = self.advance()
        if kind == "num":
            if "/" in val:
                num, den = val.split("/")
                if int(den) == 0:
                    raise PolyParseError("zero denominator", pos)
                return Polynomial.constant(self.ring, Fraction(int(num), int(den)))
            return Polynomial.constant(self.ring, int(val))
        if kind == "name":
            if val not in self.ring:
                raise UnknownVariable(f"variable {val!r} not in ring {self.ring.names}")
            return Polynomial.variable(self.ring, val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise PolyParseError(f"expected a variable, number, or '('", pos)


def parse_poly(text: str, ring: VarSet) -> Polynomial:
    """Parse an expression string into a canonical polynomial."""
    return _Parser(text, ring).parse()
