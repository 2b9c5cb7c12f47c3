from fractions import Fraction

import pytest

from reeskit.hypotheses import (
    HypothesisFailure,
    PresentationInput,
    RankNotOne,
    apply_coordinate_change,
    check_gs,
    check_height_profile,
    check_setting,
    find_distinguished_prime,
    gs_breakpoint,
    normalize_block_form,
)
from reeskit.polymatrix import matrix_from_strings, rat_identity
from reeskit.polyring import VarSet, parse_poly

XYZ = VarSet(("x", "y", "z"))


def koszul_xy():
    # Koszul presentation of (x, y) inside Q[x, y, z]
    return PresentationInput(XYZ, matrix_from_strings(XYZ, [["y"], ["-x"]]), 1)


class TestPresentationInput:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            PresentationInput(XYZ, matrix_from_strings(XYZ, [["x", "y"]]), 1)
        with pytest.raises(ValueError):
            PresentationInput(XYZ, matrix_from_strings(XYZ, [["x"], ["y"]]), 0)

    def test_dimension_accessors(self, f1_presentation):
        assert (f1_presentation.d, f1_presentation.n, f1_presentation.m) == (3, 4, 3)


class TestCheckGs:
    def test_complete_intersection_is_g_infinity(self):
        K = koszul_xy()
        for s in (1, 2, 3, 5, 9):
            assert check_gs(K, s)

    def test_f1_breakpoint(self, f1_presentation):
        assert check_gs(f1_presentation, 2)
        assert not check_gs(f1_presentation, 3)
        assert gs_breakpoint(f1_presentation) == 2

    def test_example_38_breakpoint(self, ex38_presentation):
        assert check_gs(ex38_presentation, 2)
        assert not check_gs(ex38_presentation, 3)

    def test_monotone(self, ex39_presentation):
        # once G_s fails it stays failed for larger s
        failed = False
        for s in range(1, 5):
            ok = check_gs(ex39_presentation, s)
            if failed:
                assert not ok
            if not ok:
                failed = True


class TestHeightProfile:
    def test_f1_profile(self, f1_presentation):
        prof = check_height_profile(f1_presentation)
        assert prof["ht_fitt_lower"] == 2
        assert prof["ht_fitt_upper"] == 2

    def test_requires_breakpoint_at_d_minus_1(self):
        with pytest.raises(HypothesisFailure):
            check_height_profile(koszul_xy())


class TestDistinguishedPrime:
    def test_f1_prime(self, f1_presentation):
        prime, witnesses = find_distinguished_prime(f1_presentation)
        assert prime == ("x", "y")
        assert witnesses[("x", "y")]["passed"]

    def test_example_39_prime(self, ex39_presentation):
        prime, _ = find_distinguished_prime(ex39_presentation)
        assert prime == ("x1", "x2")

    def test_example_38_not_found_with_witnesses(self, ex38_presentation):
        prime, witnesses = find_distinguished_prime(ex38_presentation)
        assert prime is None
        assert witnesses[("x1", "x2")]["reason"] == "radical_membership"
        assert witnesses[("x1", "x2")]["witness"] == "x1"
        assert witnesses[("x2", "x3")]["reason"] == "radical_membership"
        assert witnesses[("x2", "x3")]["witness"] == "x3"


class TestNormalizeBlockForm:
    def test_f1_sign_flip(self, f1_presentation):
        nf = normalize_block_form(f1_presentation, ("x", "y"))
        assert nf.permutation == ("x", "y", "z")
        assert nf.U == tuple(
            tuple(Fraction(v) for v in row)
            for row in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]
        )
        assert nf.V == rat_identity(3)
        assert str(nf.presentation.matrix.entry(3, 2)) == "z"

    def test_idempotent_on_normalized(self, f1_presentation):
        once = normalize_block_form(f1_presentation, ("x", "y"))
        again = normalize_block_form(once.presentation, ("x", "y"))
        assert again.U == rat_identity(4)
        assert again.V == rat_identity(3)
        assert again.presentation.matrix == once.presentation.matrix

    def test_rank_two_rejected(self, ex39_presentation):
        with pytest.raises(RankNotOne):
            normalize_block_form(ex39_presentation, ("x1", "x2"))

    def test_block_form_invariants(self, f1_presentation):
        nf = normalize_block_form(f1_presentation, ("x", "y"))
        mat = nf.presentation.matrix
        for i in range(mat.rows):
            for j in range(mat.cols):
                img = mat.entry(i, j).substitute_zero(("x", "y"))
                if (i, j) == (mat.rows - 1, mat.cols - 1):
                    assert str(img) == "z"
                else:
                    assert img.is_zero()

    def test_minor_ideals_preserved(self, f1_presentation):
        from reeskit.ideal_ops import ideal_equal
        from reeskit.polymatrix import minors

        nf = normalize_block_form(f1_presentation, ("x", "y"))
        out = nf.presentation.matrix.rehome(f1_presentation.ring)
        for t in (1, 2, 3):
            assert ideal_equal(minors(f1_presentation.matrix, t), minors(out, t))

    def test_column_three_mod_prime(self, f1_presentation):
        # column 3 of the raw bidiagonal matrix reduces to (0, 0, 0, -z)
        col = [f1_presentation.matrix.entry(i, 2).substitute_zero(("x", "y"))
               for i in range(4)]
        assert [str(p) for p in col] == ["0", "0", "0", "-z"]

    def test_prime_height_matches_subset_size(self, f1_presentation):
        from reeskit.hypotheses import _fitting_handle
        from reeskit.ideal_ops import height

        prime, _ = find_distinguished_prime(f1_presentation)
        F = _fitting_handle(f1_presentation, f1_presentation.d + f1_presentation.rank_e - 2)
        assert height(F) == len(prime) == f1_presentation.d - 1


class TestCheckSetting:
    def test_f1_all_pass(self, f1_report):
        assert f1_report.passed
        assert [c.name for c in f1_report.checks] == [
            "entries_linear",
            "entry_ideal_is_maximal",
            "sizes",
            "maximal_minors_height_two",
            "g_d_minus_1_holds",
            "g_d_fails",
            "height_profile",
            "distinguished_prime",
            "rank_one_mod_prime",
            "block_normal_form",
        ]
        assert f1_report.prime == ("x", "y")
        assert f1_report.normalized is not None

    def test_example_39_fails_at_rank(self, ex39_presentation):
        rep = check_setting(ex39_presentation)
        assert not rep.passed
        assert rep.failing() == ["rank_one_mod_prime"]
        assert rep.check("rank_one_mod_prime").witness["rank"] == 2

    def test_example_38_fails_at_prime(self, ex38_presentation):
        rep = check_setting(ex38_presentation)
        assert not rep.passed
        assert rep.failing() == ["distinguished_prime"]

    def test_nonlinear_entry_stops_early(self):
        P = PresentationInput(
            XYZ, matrix_from_strings(XYZ, [["x^2"], ["y"]]), 1
        )
        rep = check_setting(P)
        assert rep.failing() == ["entries_linear"]
        assert len(rep.checks) == 1

    def test_koszul_fails_sizes(self):
        rep = check_setting(koszul_xy())
        assert not rep.passed
        assert "sizes" in rep.failing()

    def test_deterministic(self, f1_presentation):
        a = check_setting(f1_presentation)
        b = check_setting(f1_presentation)
        assert [c.name for c in a.checks] == [c.name for c in b.checks]
        assert a.prime == b.prime
        assert a.normalized.U == b.normalized.U

    def test_coordinate_change_applies(self, f1_presentation):
        # relabel x <-> y; the pipeline should still pass with prime (x, y)
        C = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
        rep = check_setting(f1_presentation, coordinate_change=C)
        assert rep.passed
        assert rep.prime == ("x", "y")

    def test_coordinate_change_shape_guard(self, f1_presentation):
        with pytest.raises(ValueError):
            apply_coordinate_change(f1_presentation, [[1, 0], [0, 1]])
