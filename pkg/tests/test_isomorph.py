from fractions import Fraction

import pytest

from markoff.arrangements import Arrangement, tree_isomorph
from markoff.errors import (
    DegenerateArrangementError,
    ExcludedRootError,
    MismatchedDominantError,
    NonIntegralParameterError,
    NotAnIsomorphError,
    ParityError,
)
from markoff.divisibility import fg_factorization
from markoff.isomorph import (
    IsomorphFamily,
    J3,
    congruence_replay,
    conic_arrangements,
    cross_context,
    find_integral_parameter,
    make_pair_context,
    n_isomorph,
    same_arrangement_context,
    solve_params,
    t_factors,
    t_matrix,
)
from markoff.linalg import IDENTITY, Mat3, SHIFT, ZERO, diag, inverse3, exp_half_r
from markoff.nilpotent import r_matrix, s_matrix
from markoff.tree import enumerate_below
from markoff.verify import base_pairs, random_unimodular, realizable_contexts

from conftest import random_fraction

M15 = make_pair_context((3, 3, 6), (6, 3, 3))


class TestTMatrix:
    def test_root_display(self):
        t = t_matrix((3, 3, 3))
        assert t == Mat3(((3, 135, 162), (6, -81, -162), (3, 27, 162)))
        assert t.det() == -(54 ** 3) == -157464

    def test_first_column_and_det(self):
        t = t_matrix((3, 3, 6))
        assert tuple(t[i, 0] for i in range(3)) == (6, 15, 3)
        assert t.det() == -((18 * 15) ** 3)

    def test_shift_relation_sweep(self):
        from markoff.arrangements import mt_arrangements

        for tr in enumerate_below(10 ** 3):
            for arr in mt_arrangements(tr):
                t = t_matrix(arr)
                assert s_matrix(*arr.as_tuple()) * t == t * SHIFT

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateArrangementError):
            t_matrix((0, 0, 0))


class TestTFactors:
    def test_diagonal_factors_at_root(self):
        fac = t_factors((3, 3, 3))
        assert fac.B == diag(9, 1, 1)
        assert fac.D == diag(1, 9, 54)

    def test_product_recovers_t(self):
        fac = t_factors((3, 3, 3))
        assert fac.A * fac.B * fac.C * fac.D == t_matrix((3, 3, 3))

    def test_a_inverse_via_fkl(self):
        fac = t_factors((3, 3, 6))
        m2 = 15 ** 2
        a_inv = (fac.F * fac.K * fac.L).scale(Fraction(1, m2))
        assert (fac.A * a_inv).normalized() == IDENTITY

    def test_v_inverse_display(self):
        fac = t_factors((3, 3, 6))
        assert (fac.V * fac.V_inv).normalized() == IDENTITY
        assert fac.U == (fac.V * fac.B * fac.C * fac.D).normalized()
        assert fac.U == (Arrangement(3, 3, 6).matrix * fac.T).normalized()


class TestPairContext:
    def test_m15_values(self):
        assert M15.m == 15
        assert M15.r == 1
        assert M15.alpha == 0
        assert M15.frak_m == 5

    def test_m39_values(self):
        ctx = make_pair_context((3, 6, 15), (15, 6, 3))
        assert ctx.m == 39 and ctx.r == 1 and ctx.alpha == 0 and ctx.frak_m == 13

    def test_identical_arrangements(self):
        ctx = make_pair_context((3, 3, 6), (3, 3, 6))
        assert ctx.m == 15 and ctx.r == 1 and ctx.alpha == 0

    def test_mismatched_dominant_rejected(self):
        with pytest.raises(MismatchedDominantError):
            make_pair_context((3, 3, 6), (3, 6, 15))

    def test_root_m_excluded(self):
        with pytest.raises(ExcludedRootError):
            make_pair_context((3, 3, 3), (3, 3, 3))
        ctx = same_arrangement_context((3, 3, 3))  # the extended escape hatch
        assert ctx.m == 6

    def test_det_r_gmat(self):
        for ctx in realizable_contexts(10 ** 3):
            assert ctx.g_mat.scale(ctx.r).det() == 1


class TestDecompositions:
    def test_alpha_zero_kills_gamma1(self):
        assert M15.dec.gamma1 == ZERO

    def test_phi_outer_product(self):
        assert M15.dec.phi_t == Mat3(((18, 45, 9), (-18, -45, -9), (36, 90, 18)))

    def test_gamma2_theta2(self):
        for ctx in realizable_contexts(10 ** 3):
            assert ctx.dec.gamma2 == ctx.dec.theta2 == diag(0, 1, 0)

    def test_cross_identities_sweep(self):
        for ctx in realizable_contexts(10 ** 3):
            dec = ctx.dec
            m = ctx.m
            assert dec.gamma0.T == dec.theta0
            assert dec.gamma1.T == (-dec.theta1).normalized()
            assert dec.gamma1.T == dec.phi.scale(ctx.alpha).normalized()
            assert dec.gamma2.T == dec.theta2
            assert dec.omega1.T + dec.lambda1 == dec.phi + dec.x_sparse
            assert dec.omega0.T + dec.lambda0 == dec.x_sparse.scale(-m)


class TestNIsomorph:
    def test_identity_at_zero(self):
        ctx = make_pair_context((3, 3, 6), (3, 3, 6))
        assert n_isomorph(ctx, 0) == IDENTITY

    def test_half_parameter_congruence(self):
        n = n_isomorph(M15, Fraction(1, 2))
        assert (n.T * M15.m2_mat * n).normalized() == M15.m1_mat
        assert n.det() == 1

    def test_root_automorph_via_extended_context(self):
        ctx = same_arrangement_context((3, 3, 3))
        n = n_isomorph(ctx, Fraction(2, 3))
        assert n == Mat3(((6, 8, 3), (-3, -3, -1), (1, 0, 0)))
        assert n == exp_half_r(r_matrix(3, 3, 3), Fraction(2, 3))

    def test_three_forms_and_congruence_random(self, rng):
        for ctx in realizable_contexts(600):
            for _ in range(5):
                s = random_fraction(rng)
                n = n_isomorph(ctx, s)  # internal three-form comparison
                assert (n.T * ctx.m2_mat * n).normalized() == ctx.m1_mat
                assert n.det() == 1


class TestTriangularRepresentation:
    def test_n_equals_triangular_sandwich(self, rng):
        # N(s) = r T_2 [[1,0,0],[s,1,0],[t,s,1]] T_1^{-1} at the constrained t
        for ctx in (M15, make_pair_context((3, 6, 15), (15, 6, 3))):
            s = random_fraction(rng)
            t = (s * s - s) / 2 - ctx.alpha / ctx.m
            tri = Mat3(((1, 0, 0), (s, 1, 0), (t, s, 1)))
            sandwich = (ctx.t2 * tri * ctx.t1_inv).scale(ctx.r).normalized()
            assert sandwich == n_isomorph(ctx, s)

    def test_balance_identity_at_constraint(self, rng):
        # the two sandwich routes agree exactly when t sits on the constraint
        ctx = M15
        s = random_fraction(rng)
        t = (s * s - s) / 2 - ctx.alpha / ctx.m
        upper = Mat3(((1, s, t), (0, 1, s), (0, 0, 1)))
        lower = Mat3(((1, 0, 0), (-s, 1, 0), (s * s - t, -s, 1)))
        lhs = (inverse3(ctx.t1.T) * upper * ctx.t2.T).scale(ctx.r)
        rhs = (ctx.u1 * lower * inverse3(ctx.m2_mat * ctx.t2)).scale(1 / ctx.r)
        assert lhs.normalized() == rhs.normalized()
        # and disagree off it
        bad = Mat3(((1, s, t + 1), (0, 1, s), (0, 0, 1)))
        assert (inverse3(ctx.t1.T) * bad * ctx.t2.T).scale(ctx.r).normalized() != rhs.normalized()

    def test_shifted_product_identity(self, rng):
        # S_2 N(s) = (1/m)(Omega0 + m Omega1) + s Phi^t
        ctx = M15
        s = random_fraction(rng)
        dec = ctx.dec
        lhs = (ctx.s2_mat * n_isomorph(ctx, s)).normalized()
        rhs = ((dec.omega0 + dec.omega1.scale(ctx.m)).scale(Fraction(1, ctx.m))
               + dec.phi_t.scale(s)).normalized()
        assert lhs == rhs


class TestSolveParams:
    def test_trivial(self):
        ctx = make_pair_context((3, 3, 6), (3, 3, 6))
        p = solve_params(IDENTITY, ctx)
        assert (p.s, p.t) == (0, 0)

    def test_root_automorph_parameters(self):
        ctx = same_arrangement_context((3, 3, 3))
        q = Mat3(((6, 8, 3), (-3, -3, -1), (1, 0, 0)))
        p = solve_params(q, ctx)
        assert (p.s, p.t) == (Fraction(2, 3), Fraction(-1, 9))
        assert p.t == (p.s * p.s - p.s) / 2

    def test_tree_isomorph_lands_in_family(self):
        q = tree_isomorph(Arrangement(6, 3, 3), Arrangement(3, 3, 6))
        p = solve_params(q, M15)
        # denominator law: s = n/(9 frak_m) with n coprime to frak_m
        assert (p.s * 45).denominator == 1
        n = int(p.s * 45)
        from math import gcd
        assert gcd(n, 5) == 1
        assert n_isomorph(M15, p.s) == q

    def test_round_trip_random(self, rng):
        for ctx in realizable_contexts(600):
            for _ in range(5):
                s = random_fraction(rng)
                p = solve_params(n_isomorph(ctx, s, check=False), ctx)
                assert p.s == s
                assert p.t == (s * s - s) / 2 - ctx.alpha / ctx.m

    def test_rejects_random_unimodular(self, rng):
        for _ in range(25):
            q = random_unimodular(rng)
            if (q.T * M15.m2_mat * q).normalized() == M15.m1_mat:
                continue
            with pytest.raises(NotAnIsomorphError):
                solve_params(q, M15)

    def test_rejects_wrong_t(self):
        # inside span{E, S2, S2^2} but off the constraint surface
        s2 = M15.s2_mat
        q = ((IDENTITY + s2.scale(Fraction(1, 2)) + (s2 * s2).scale(Fraction(1, 3)))
             * M15.g_mat).normalized()
        if q.det() == 1:
            with pytest.raises(NotAnIsomorphError):
                solve_params(q, M15)

    def test_cross_context_generalized_representation(self):
        # arrangements with different m still admit the (s, t) representation
        src, dst = Arrangement(3, 3, 3), Arrangement(3, 3, 6)
        q = tree_isomorph(src, dst)
        ctx = cross_context(dst, src)
        p = solve_params(q, ctx)
        s2 = ctx.s2_mat
        rebuilt = ((IDENTITY + s2.scale(p.s) + (s2 * s2).scale(p.t)) * ctx.g_mat) \
            .scale(ctx.rho).normalized()
        assert rebuilt == q
        assert ctx.rho == 5  # r = 2 times the m-ratio 15/6


class TestFamily:
    def test_identity_member(self):
        fam = IsomorphFamily((3, 3, 6), (6, 3, 3))
        assert fam.n(1, 1, 0) == IDENTITY

    def test_inverse_law_at_third(self):
        fam = IsomorphFamily((3, 3, 6), (6, 3, 3))
        s = Fraction(1, 3)
        assert fam.n(-1, 1, s) == inverse3(fam.n(1, -1, -s)).normalized()

    def test_composition_law(self):
        fam = IsomorphFamily((3, 3, 6), (6, 3, 3))
        s, t = Fraction(1, 4), Fraction(1, 5)
        lhs = fam.n(1, 1, s + t)
        rhs = (fam.n(-1, 1, s) * fam.n(1, -1, t)).normalized()
        assert lhs == rhs

    def test_reflection_law(self):
        fam = IsomorphFamily((3, 3, 6), (6, 3, 3))
        s = Fraction(2, 7)
        for (i, j) in ((1, 2), (1, -1), (2, -2), (-1, 2)):
            assert fam.n(-i, -j, s) == (J3 * fam.n(i, j, -s) * J3).normalized()

    def test_involutions(self):
        for base, rev in base_pairs(600):
            fam = IsomorphFamily(base, rev)
            for i in (1, -1, 2, -2):
                w = fam.involution(i)
                ri = r_matrix(*fam.slot(i).as_tuple())
                assert (w * w).normalized() == IDENTITY
                assert (w * ri * w).normalized() == -ri
                assert (w * J3).normalized() == (J3 * fam.involution(-i)).normalized()


class TestIntegralParameters:
    def test_automorph_at_root(self):
        fam = IsomorphFamily((3, 3, 3), (3, 3, 3))
        p = find_integral_parameter(fam, 1, 1)
        assert p.s == Fraction(1, 3)
        assert p.matrix == Mat3(((3, 3, 1), (-1, 0, 0), (0, -1, 0)))

    def test_m15_denominators(self):
        fam = IsomorphFamily((3, 3, 6), (6, 3, 3))
        from math import gcd
        p = find_integral_parameter(fam, 1, -1)
        assert p.denominator == 45 and gcd(p.n, 5) == 1
        p12 = find_integral_parameter(fam, 1, 2)
        assert p12.denominator == 45  # 9g with g = 5
        p21 = find_integral_parameter(fam, 2, -1)
        assert p21.denominator == 9  # 9f with f = 1

    def test_integrality_propagation(self):
        for base, rev in base_pairs(10 ** 3):
            fam = IsomorphFamily(base, rev)
            sp = find_integral_parameter(fam, 2, -1).s
            sm = find_integral_parameter(fam, 1, 2).s
            assert fam.n(1, -1, sp + sm, check=False).is_integral()
            assert fam.n(2, -2, sp - sm, check=False).is_integral()
            assert fam.n(1, -2, sp, check=False).is_integral()
            assert fam.n(2, 1, -sm, check=False).is_integral()

    def test_tree_isomorph_is_a_smallest_member(self):
        """The reversal-pair tree isomorph shows up in the family at one of
        the two smallest-magnitude integral parameters."""
        fam = IsomorphFamily((3, 3, 6), (6, 3, 3))
        q = tree_isomorph(Arrangement(6, 3, 3), Arrangement(3, 3, 6))
        p = solve_params(q, fam.context(1, 2))
        best = find_integral_parameter(fam, 1, 2)
        assert abs(p.s) == abs(best.s)  # the sign is data, not a law


class TestCongruenceReplay:
    def test_m15_reassembly_and_verdicts(self):
        fg = fg_factorization(M15)
        fam = IsomorphFamily((3, 3, 6), (6, 3, 3))
        sp = find_integral_parameter(fam, 2, -1).s
        sm = find_integral_parameter(fam, 1, 2).s
        rep = congruence_replay(M15, sp, sm, fg.f, fg.g)
        assert rep.reassembles()
        assert rep.c_matches_display  # odd m
        assert rep.n1 == rep.n_plus * fg.g + rep.n_minus * fg.f
        assert rep.n2 == rep.n_plus * fg.g - rep.n_minus * fg.f
        v = rep.verdicts
        assert v["contradiction"] is False
        assert v["b_zero_mod_g2"] is True
        assert v["c_zero_mod_g"] is True
        assert v["n_s_minus_integral"] is True

    def test_vanishing_parameters(self):
        fg = fg_factorization(M15)
        rep = congruence_replay(M15, 0, 0, fg.f, fg.g)
        assert rep.n2 == 0
        assert rep.piece_d == ZERO
        assert rep.lhs == rep.piece_a + rep.piece_b + rep.piece_c

    def test_even_m_needs_flag(self):
        ctx = make_pair_context((3, 15, 39), (39, 15, 3))
        assert ctx.m == 102
        with pytest.raises(ParityError):
            congruence_replay(ctx, 0, 0, 1, ctx.frak_m)
        rep = congruence_replay(ctx, 0, 0, 1, ctx.frak_m, even_adjust=True)
        assert rep.reassembles()

    def test_non_integral_parameters_rejected(self):
        with pytest.raises(NonIntegralParameterError):
            congruence_replay(M15, Fraction(1, 7), 0, 1, 5)


class TestRationalContexts:
    """General-r contexts from rational points of a^2 + c^2 = m(ac - m)."""

    def rational_context(self):
        base = Arrangement(3, 3, 6)
        other = conic_arrangements(base, [Fraction(1, 2)])[0]
        return make_pair_context(base, other)

    def test_conic_points_share_m(self):
        base = Arrangement(3, 3, 6)
        for arr in conic_arrangements(base, [1, 2, Fraction(1, 2), Fraction(2, 3)]):
            assert arr.m == 15

    def test_alpha_nonzero_machinery(self):
        ctx = self.rational_context()
        assert ctx.r != 1 and ctx.alpha != 0
        assert ctx.dec.gamma1 != ZERO  # construction re-verifies reassembly
        assert ctx.g_mat.scale(ctx.r).det() == 1

    def test_isomorphs_over_the_rationals(self, rng):
        ctx = self.rational_context()
        for _ in range(6):
            s = random_fraction(rng)
            n = n_isomorph(ctx, s)
            assert (n.T * ctx.m2_mat * n).normalized() == ctx.m1_mat
            assert n.det() == 1
            p = solve_params(n, ctx)
            assert p.s == s and p.t == (s * s - s) / 2 - ctx.alpha / 15

    def test_family_laws_hold(self):
        base = Arrangement(3, 3, 6)
        other = conic_arrangements(base, [2])[0]
        fam = IsomorphFamily(base, other)
        s, t = Fraction(1, 3), Fraction(-2, 5)
        assert fam.n(1, 1, s + t) == (fam.n(2, 1, s) * fam.n(1, 2, t)).normalized()
        assert fam.n(2, 1, s) == inverse3(fam.n(1, 2, -s)).normalized()
        assert fam.n(-1, -2, s) == (J3 * fam.n(1, 2, -s) * J3).normalized()

    def test_cross_term_identity_rational(self):
        from markoff.divisibility import cross_term_identity

        ctx = self.rational_context()
        lhs, rhs = cross_term_identity(ctx)
        assert lhs == rhs
