"""Core constructions around the Rees algebra of a linearly presented input:
the symmetric-algebra ideal, the Jacobian dual and its distinguished blocks,
the closed-form defining ideal (linear part plus the (d-1)-minors of the
truncated dual), the independent saturation oracle, the residual-intersection
identity, the special fiber, and the seeded rational Bourbaki specialization
that reduces rank-e inputs to the ideal case.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .hypotheses import HypothesisReport, PresentationInput, check_setting
from .ideal_ops import (
    IdealHandle,
    colon,
    contains,
    dimension,
    eliminate,
    height,
    ideal,
    ideal_contains,
    ideal_equal,
    ideal_product,
    ideal_sum,
    saturate,
    saturation_exponent,
)
from .polymatrix import (
    PolyMatrix,
    extract_linear_coeffs,
    field_row_col_ops,
    minor_list,
    rat_identity,
    rat_inverse,
    rat_is_invertible,
)
from .polyring import Polynomial, VarSet


class BlockFormViolation(ValueError):
    """The Jacobian dual does not have the required last row (0, ..., 0, T_n)."""


class NotCertified(ValueError):
    """Operation requires a context whose hypotheses all passed."""


class SpecializationDegenerate(RuntimeError):
    """Every retry drew a singular specialization matrix; re-seed required."""


def t_names(n: int) -> tuple:
    return tuple(f"T{i}" for i in range(1, n + 1))


@dataclass
class ReesContext:
    """Assembled data for one presentation: combined ring, linear relations,
    Jacobian dual blocks, and the hypothesis report that produced it."""

    base: PresentationInput
    report: HypothesisReport | None
    certified: bool
    block_form_ok: bool
    bigring: VarSet
    tring: VarSet
    ells: tuple
    L: IdealHandle
    B: PolyMatrix
    Bprime: PolyMatrix | None
    Bdoubleprime: PolyMatrix

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def e(self) -> int:
        return self.base.rank_e

    def x_vars(self):
        return self.base.ring.names

    def prime_vars(self):
        return self.base.ring.names[:-1]

    def prime_ideal(self) -> IdealHandle:
        return ideal(self.bigring, [Polynomial.variable(self.bigring, v) for v in self.prime_vars()])

    def maximal_ideal(self) -> IdealHandle:
        return ideal(self.bigring, [Polynomial.variable(self.bigring, v) for v in self.x_vars()])


@dataclass
class IdentityResult:
    name: str
    passed: bool | None  # None when recorded without assertion
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0


@dataclass
class Certificate:
    kind: str
    identities: list
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(r.passed for r in self.identities if r.passed is not None)

    def identity(self, name: str) -> IdentityResult:
        for r in self.identities:
            if r.name == name:
                return r
        raise KeyError(name)


# -------------------------------------------------------------------- build

def build_context(source, force: bool = False) -> ReesContext:
    """Assemble the combined ring, linear forms, and Jacobian dual blocks.

    `source` is a HypothesisReport (normal route: uses its normalized matrix
    and certification verdict) or a bare PresentationInput (diagnostic route).
    With force=True a violated block form is recorded instead of raised, which
    is how negative controls are inspected.
    """
    if isinstance(source, HypothesisReport):
        report = source
        P = report.normalized.presentation if report.normalized else report.input
        certified = report.passed
    else:
        report = None
        P = source
        certified = False
    d, n, m = P.d, P.n, P.m
    tv = t_names(n)
    for name in tv:
        if name in P.ring:
            raise ValueError(f"ring uses reserved generator variable {name!r}")
    bigring = VarSet(P.ring.names + tv)
    tring = VarSet(tv)
    T = [Polynomial.variable(bigring, name) for name in tv]
    phi = P.matrix.rehome(bigring)
    ells = tuple(
        sum((T[i] * phi.entry(i, j) for i in range(n)), Polynomial.zero(bigring))
        for j in range(m)
    )
    L = ideal(bigring, ells)
    # Jacobian dual: entries of the matrix collect the x-coefficients of the
    # linear forms, so [x_1 ... x_d] * B = [ell_1 ... ell_m] by construction.
    coeffs = extract_linear_coeffs(P.matrix, P.ring.names)
    rows = []
    for k in range(d):
        row = []
        for j in range(m):
            p = Polynomial.zero(bigring)
            for i in range(n):
                c = coeffs.coeff(i, j, k)
                if c:
                    p = p + c * T[i]
            row.append(p)
        rows.append(row)
    B = PolyMatrix(bigring, rows)
    expected_corner = T[n - 1]
    last = B.entries[d - 1]
    block_ok = all(p.is_zero() for p in last[: m - 1]) and last[m - 1] == expected_corner
    if not block_ok and not force:
        raise BlockFormViolation(
            f"last row of the Jacobian dual is {[str(p) for p in last]}, expected (0, ..., 0, T{n})"
        )
    if not block_ok:
        certified = False
    Bprime = None
    if d >= 2 and m >= 2:
        Bprime = PolyMatrix(bigring, [row[: m - 1] for row in rows[: d - 1]])
    brow = [Polynomial.zero(bigring)] * (m - 1) + [Polynomial.constant(bigring, 1)]
    Bdoubleprime = PolyMatrix(bigring, rows[: d - 1] + [brow])
    return ReesContext(
        base=P,
        report=report,
        certified=certified,
        block_form_ok=block_ok,
        bigring=bigring,
        tring=tring,
        ells=ells,
        L=L,
        B=B,
        Bprime=Bprime,
        Bdoubleprime=Bdoubleprime,
    )


def _minor_gens_or_empty(M: PolyMatrix | None, t: int):
    if M is None or t < 1 or t > min(M.rows, M.cols):
        return []
    return minor_list(M, t)


def fiber_block_minors(C: ReesContext) -> IdealHandle:
    """I_{d-1}(B') inside the combined ring."""
    return ideal(C.bigring, _minor_gens_or_empty(C.Bprime, C.d - 1))


def defining_ideal_closed_form(C: ReesContext, allow_uncertified: bool = False) -> IdealHandle:
    """Closed form L + I_{d-1}(B'); when n = d + e the nonlinear part is the
    single determinant of the square block."""
    if not C.certified and not allow_uncertified:
        raise NotCertified("closed form requires a fully certified context")
    return ideal_sum(C.L, fiber_block_minors(C))


def oracle_defining_ideal(C: ReesContext) -> IdealHandle:
    """Independent ground truth: the saturation L : (x_1..x_{d-1})^oo.

    For rank e > 1 the same x-block saturation is used; certificates label the
    module-case oracle as saturation-based.
    """
    return saturate(C.L, C.prime_ideal())


def special_fiber(C: ReesContext, J: IdealHandle, asserted: bool = True) -> dict:
    """Eliminate the x-block from J + (x-block): the fiber ideal in the
    T-subring, its dimension (the analytic spread), and comparison with
    I_{d-1}(B')."""
    total = ideal_sum(J, C.maximal_ideal())
    fiber = eliminate(total, C.x_vars())
    spread = dimension(fiber)
    bp = ideal(C.tring, [g.rehome(C.tring) for g in fiber_block_minors(C).generators])
    return {
        "fiber": fiber,
        "spread": spread,
        "equals_fiber_block": ideal_equal(fiber, bp),
        "fiber_height": height(fiber) if fiber.generators else 0,
        "asserted": asserted,
    }


# ------------------------------------------------------------- certificates

def _timed(entries, name, fn, record_only=False):
    t0 = time.perf_counter()
    passed, details = fn()
    entries.append(
        IdentityResult(
            name=name,
            passed=None if record_only else passed,
            details=details,
            elapsed=time.perf_counter() - t0,
        )
    )
    if record_only:
        entries[-1].details["observed"] = passed


def verify_theorem(C: ReesContext) -> Certificate:
    """Certificate for the defining-ideal identities on a built context.

    On a certified context all structural identities are asserted.  On a
    diagnostic context (hypotheses failed or forced) only the two closed-form
    equalities and the containment are run, without structural expectations.
    """
    d, n, m, e = C.d, C.n, C.m, C.e
    entries = []
    notes = []
    if e > 1:
        notes.append(
            "rank e > 1: oracle is the x-block saturation of the symmetric-algebra "
            "ideal (saturation-based torsion)"
        )
    notes.append(
        "perfection of the cokernel is assumed from the height-two maximal-minor "
        "structure, not certified by a resolution"
    )

    xs = [Polynomial.variable(C.bigring, v) for v in C.x_vars()]

    def assembly():
        lhs = [
            sum((xs[k] * C.B.entry(k, j) for k in range(d)), Polynomial.zero(C.bigring))
            for j in range(m)
        ]
        ok = all(lhs[j] == C.ells[j] for j in range(m))
        return ok, {"columns": m}

    _timed(entries, "jacobian_dual_assembly", assembly)

    closed = defining_ideal_closed_form(C, allow_uncertified=True)
    single = colon(C.L, C.prime_ideal())
    sat = saturate(C.L, C.prime_ideal())

    _timed(
        entries,
        "closed_form_equals_single_colon",
        lambda: (ideal_equal(closed, single), {"closed_gens": len(closed.generators)}),
    )
    _timed(
        entries,
        "closed_form_equals_saturation",
        lambda: (ideal_equal(closed, sat), {}),
    )

    def cramer():
        # Straight Cramer gives I_d(B) inside the saturation unconditionally;
        # the sharper containment of the truncated-dual minors needs the block
        # form (it divides the last dual row by T_n inside a prime).
        full_dual = ideal(C.bigring, _minor_gens_or_empty(C.B, d))
        ok = ideal_contains(sat, full_dual)
        details = {}
        if C.block_form_ok:
            ok = ok and ideal_contains(sat, closed)
        else:
            details["truncated_containment_observed"] = ideal_contains(sat, closed)
            details["note"] = "block form violated: only the full-dual containment is asserted"
        return ok, details

    _timed(entries, "cramer_containment", cramer)

    def stabilization():
        N = saturation_exponent(C.L, C.prime_ideal())
        return True, {"exponent": N}

    _timed(entries, "saturation_stabilization_exponent", stabilization, record_only=True)

    if not C.certified:
        notes.append("context not certified: structural identities skipped")
        return Certificate("defining_ideal", entries, notes)

    def hgt_dim():
        dim = dimension(closed)
        ht = len(C.bigring) - dim
        ok = dim == d + e and ht == n - e
        return ok, {"dimension": dim, "height": ht, "expected_dimension": d + e, "expected_height": n - e}

    _timed(entries, "defining_ideal_height_dimension", hgt_dim)

    def fiber_block_height():
        bp = ideal(C.tring, [g.rehome(C.tring) for g in fiber_block_minors(C).generators])
        h = height(bp)
        return h == n - d - e + 1, {"height": h, "expected": n - d - e + 1}

    _timed(entries, "fiber_block_height", fiber_block_height)

    def residual():
        tn = Polynomial.variable(C.bigring, C.tring.names[-1])
        K = ideal(
            C.bigring,
            [Polynomial.variable(C.bigring, v) for v in C.prime_vars()]
            + [xs[-1] * tn],
        )
        lhs = colon(C.L, K)
        rhs = ideal_sum(C.L, ideal(C.bigring, _minor_gens_or_empty(C.Bdoubleprime, d)))
        return ideal_equal(lhs, rhs), {}

    _timed(entries, "residual_intersection_identity", residual)

    def unit_block():
        lhs = fiber_block_minors(C)
        rhs = ideal(C.bigring, _minor_gens_or_empty(C.Bdoubleprime, d))
        return ideal_equal(lhs, rhs), {}

    _timed(entries, "truncated_dual_minor_identity", unit_block)

    def full_dual_factorization():
        tn = ideal(C.bigring, [Polynomial.variable(C.bigring, C.tring.names[-1])])
        lhs = ideal_product(tn, fiber_block_minors(C))
        rhs = ideal(C.bigring, _minor_gens_or_empty(C.B, d))
        return ideal_equal(lhs, rhs), {}

    _timed(entries, "full_dual_factorization", full_dual_factorization)

    def fiber_identity():
        rec = special_fiber(C, sat)
        ok = rec["equals_fiber_block"] and rec["spread"] == d + e - 1
        return ok, {
            "spread": rec["spread"],
            "expected_spread": d + e - 1,
            "fiber_height": rec["fiber_height"],
            "fiber_gens": [str(g) for g in rec["fiber"].generators],
        }

    _timed(entries, "fiber_ideal_identity", fiber_identity)

    return Certificate("defining_ideal", entries, notes)


# ---------------------------------------------------- Bourbaki specialization

@dataclass
class SpecializationRecord:
    seed: int
    draws: int
    Z: tuple  # n x (e-1) rationals, Z[i][j]
    G: tuple  # n x n change of generators
    psi: PresentationInput  # ideal-case presentation (raw, un-normalized)
    y_forms: tuple  # Y_j = sum_i Z[i][j] T_i in the module combined ring


def bourbaki_specialize(
    C: ReesContext, seed: int, retries: int = 5, coeff_bound: int = 10**4
) -> SpecializationRecord:
    """Specialize a rank-e presentation (e >= 2) to the ideal case by factoring
    out e-1 random combinations of the generators.

    Draws integer coefficients uniformly from [-coeff_bound, coeff_bound] with
    a seeded generator; redraws (bounded) when the change-of-generators matrix
    is singular.
    """
    P = C.base
    e, n, m = P.rank_e, P.n, P.m
    if e < 2:
        raise ValueError("specialization applies to rank e >= 2 only")
    rng = random.Random(seed)
    for attempt in range(1, retries + 1):
        Z = tuple(
            tuple(Fraction(rng.randint(-coeff_bound, coeff_bound)) for _ in range(e - 1))
            for _ in range(n)
        )
        G = [[Z[i][j] for i in range(n)] for j in range(e - 1)]
        G += [[Fraction(1 if i == k else 0) for i in range(n)] for k in range(e - 1, n)]
        if rat_is_invertible(G):
            break
    else:
        raise SpecializationDegenerate(
            f"no invertible specialization in {retries} draws from seed {seed}"
        )
    Gt_inv = rat_inverse(tuple(zip(*G)))
    phi_new = field_row_col_ops(P.matrix, Gt_inv, rat_identity(m))
    psi_rows = phi_new.entries[e - 1:]
    psi = PresentationInput(P.ring, PolyMatrix(P.ring, psi_rows), 1)
    T = [Polynomial.variable(C.bigring, nm) for nm in C.tring.names]
    y_forms = tuple(
        sum((Z[i][j] * T[i] for i in range(n) if Z[i][j]), Polynomial.zero(C.bigring))
        for j in range(e - 1)
    )
    return SpecializationRecord(
        seed=seed, draws=attempt, Z=Z, G=tuple(tuple(r) for r in G), psi=psi, y_forms=y_forms
    )


def _ideal_to_module_map(C_mod: ReesContext, C_ideal: ReesContext, spec: SpecializationRecord):
    """Substitution carrying ideal-side polynomials into the module ring.

    x-variables map by name.  The ideal side was normalized by a row transform
    U on the specialized presentation, which re-mixes its generators: its r-th
    generator variable corresponds to sum_s (U^-1)[s][r] T_{e-1+s} upstairs.
    """
    e = C_mod.e
    U = C_ideal.report.normalized.U if (C_ideal.report and C_ideal.report.normalized) else None
    n_psi = C_ideal.n
    Uinv = rat_inverse(U) if U is not None else rat_identity(n_psi)
    T_mod = [Polynomial.variable(C_mod.bigring, nm) for nm in C_mod.tring.names]
    images = {}
    for name in C_ideal.base.ring.names:
        images[name] = Polynomial.variable(C_mod.bigring, name)
    for r, name in enumerate(C_ideal.tring.names):
        img = Polynomial.zero(C_mod.bigring)
        for s in range(n_psi):
            c = Uinv[s][r]
            if c:
                img = img + c * T_mod[e - 1 + s]
        images[name] = img
    return images


def verify_deformation(
    C_mod: ReesContext, C_ideal: ReesContext, spec: SpecializationRecord
) -> Certificate:
    """Check, at the drawn specialization, that the symmetric-algebra ideal and
    the closed form deform as expected when the e-1 generic combinations are
    added.  A failure flags a non-generic draw; re-run with a fresh seed."""
    entries = []
    e = C_mod.e
    if e == 1:
        entries.append(IdentityResult("no_specialization_needed", True, {"e": 1}))
        return Certificate("deformation", entries, ["rank one: nothing to specialize"])
    notes = [f"specialization seed {spec.seed}, draws used {spec.draws}"]

    Y = ideal(C_mod.bigring, list(spec.y_forms))
    T_mod = [Polynomial.variable(C_mod.bigring, nm) for nm in C_mod.tring.names]
    psi_big = spec.psi.matrix.rehome(C_mod.bigring)
    ells_psi = [
        sum(
            (T_mod[e - 1 + s] * psi_big.entry(s, j) for s in range(spec.psi.n)),
            Polynomial.zero(C_mod.bigring),
        )
        for j in range(spec.psi.m)
    ]
    L_psi_raw = ideal(C_mod.bigring, ells_psi)

    def symmetric_ideal_specializes():
        lhs = ideal_sum(C_mod.L, Y)
        rhs = ideal_sum(L_psi_raw, Y)
        return ideal_equal(lhs, rhs), {}

    _timed(entries, "symmetric_ideal_specialization", symmetric_ideal_specializes)

    def closed_form_specializes():
        images = _ideal_to_module_map(C_mod, C_ideal, spec)
        mapped = [
            g.substitute(images, C_mod.bigring)
            for g in list(C_ideal.L.generators)
            + _minor_gens_or_empty(C_ideal.Bprime, C_ideal.d - 1)
        ]
        lhs = ideal_sum(ideal_sum(C_mod.L, fiber_block_minors(C_mod)), Y)
        rhs = ideal_sum(ideal(C_mod.bigring, mapped), Y)
        return ideal_equal(lhs, rhs), {}

    _timed(entries, "closed_form_specialization", closed_form_specializes)
    return Certificate("deformation", entries, notes)


def specialize_and_certify(C_mod: ReesContext, seed: int, retries: int = 5):
    """Full module-case reduction: draw a specialization, run the ideal-case
    pipeline on it, and verify the deformation identities.  Retries with fresh
    seeds when the draw is non-generic."""
    last_error = None
    for k in range(retries):
        spec = bourbaki_specialize(C_mod, seed + k)
        rep = check_setting(spec.psi)
        if not rep.passed:
            last_error = f"seed {seed + k}: specialized input failed {rep.failing()}"
            continue
        C_ideal = build_context(rep)
        cert = verify_deformation(C_mod, C_ideal, spec)
        if cert.verdict:
            return spec, C_ideal, cert
        last_error = f"seed {seed + k}: deformation identities failed"
    raise SpecializationDegenerate(last_error or "specialization failed")
