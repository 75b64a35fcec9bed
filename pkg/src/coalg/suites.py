"""Identity suites: every verified claim of the model family, by theme.

Suites
------
coalgebra     dilation-algebra closure at mixed stages, Heisenberg rows,
              Casimir identities, curvature coincidences
radial        one-variable factorization, intertwining, scheduled ladder
              powers, the quadratic symmetry algebra, adjointness
nd-integrals  higher-dimensional constants of motion and the vector-valued
              angular ladders (including printed variants the engine
              corrects)
ccm           metamorphosis partner system and its intertwining ladders
reduction     4D -> 2D sector reduction: reduced generators, the diagonal
              sector family, reduced ladders and integrals, the gauge
appendix      the bracket lemmas behind the angular ladder theorem

Each case records a descriptive anchor.  Cases whose printed source is
corrected by the engine carry expect="discrepant" and a note with the
engine-computed form.
"""

from __future__ import annotations

from fractions import Fraction

from . import catalog as cat
from .classical import (casimir_function, classical_ctx, hamiltonian_function,
                        poisson, sl2_functions)
from .coeff import Coeff
from .context import cartesian_ctx, polar_ctx, radial_ctx, reduced_ctx
from .errors import GaugeFailure, UnknownSuite
from .operators import (MatrixOperator, OperatorElement, commutator,
                        flat_adjoint, formal_adjoint, gamma_to_matrix,
                        multiply)
from .scalars import HALF, I, K, MINUS_I, kint, krat, mpq
from .verifier import IdentityCase, run_suite

SUITE_NAMES = ("coalgebra", "radial", "nd-integrals", "ccm", "reduction", "appendix")


def _hb(ctx):
    return Coeff.var(ctx, "hbar")


def _ihbar(op, ctx, factor=1):
    hb = _hb(ctx)
    return op.scale(I * kint(factor)).map_coeffs(lambda c: c * hb)


# -- coalgebra suite -----------------------------------------------------------------------


def coalgebra_cases(dim=4):
    ctx = cartesian_ctx(dim)
    cases = []

    def sl2(mn):
        m, n = mn
        jm_m, jp_m, j3_m = cat.sl2_generators(ctx, m)
        jm_n, jp_n, j3_n = cat.sl2_generators(ctx, n)
        low = min(m, n)
        jm_l, jp_l, j3_l = cat.sl2_generators(ctx, low)
        return (jm_m, jp_m, j3_m), (jm_n, jp_n, j3_n), (jm_l, jp_l, j3_l)

    for m in range(1, dim + 1):
        for n in range(1, dim + 1):
            def b_j3jp(m=m, n=n):
                (_, jp_m, _), (_, _, j3_n), (_, jp_l, _) = sl2((m, n))
                return commutator(j3_n, jp_m), _ihbar(jp_l, ctx, 2)

            def b_j3jm(m=m, n=n):
                (jm_n, _, _), (_, _, j3_m), (jm_l, _, _) = sl2((n, m))
                return commutator(j3_m, jm_n), _ihbar(jm_l, ctx, -2)

            def b_jmjp(m=m, n=n):
                (_, jp_m, _), (jm_n, _, _), (_, _, j3_l) = sl2((m, n))
                return commutator(jm_n, jp_m), _ihbar(j3_l, ctx, 4)

            cases.append(IdentityCase(
                "sl2-closure-j3-jp-%d-%d" % (n, m),
                "[J3(%d), J+(%d)] = 2 i hbar J+(%d)" % (n, m, min(m, n)), b_j3jp))
            cases.append(IdentityCase(
                "sl2-closure-j3-jm-%d-%d" % (m, n),
                "[J3(%d), J-(%d)] = -2 i hbar J-(%d)" % (m, n, min(m, n)), b_j3jm))
            cases.append(IdentityCase(
                "sl2-closure-jm-jp-%d-%d" % (n, m),
                "[J-(%d), J+(%d)] = 4 i hbar J3(%d)" % (n, m, min(m, n)), b_jmjp))

    def b_frule_plus():
        _, jp2, _ = cat.sl2_generators(ctx, 2)
        _, _, j3 = cat.sl2_generators(ctx, 3)
        _, jp_l, _ = cat.sl2_generators(ctx, 2)
        lhs = commutator(j3, multiply(jp2, jp2))
        return lhs, _ihbar(multiply(jp_l, jp2), ctx, 4)

    cases.append(IdentityCase(
        "sl2-derivation-jp-square",
        "[J3(3), (J+(2))^2] = 4 i hbar J+(2) J+(2)", b_frule_plus))

    def b_frule_minus():
        jm2, _, _ = cat.sl2_generators(ctx, 2)
        _, _, j3 = cat.sl2_generators(ctx, 4)
        lhs = commutator(j3, multiply(jm2, jm2))
        return lhs, _ihbar(multiply(jm2, jm2), ctx, -4)

    cases.append(IdentityCase(
        "sl2-derivation-jm-square",
        "[J3(4), (J-(2))^2] = -4 i hbar J-(2) J-(2)", b_frule_minus))

    for n in (2, 4):
        for k in (1, min(n + 1, dim)):
            inside = k <= n

            def b_jp_x(n=n, k=k, inside=inside):
                _, jp, _ = cat.sl2_generators(ctx, n)
                lhs = commutator(jp, cat.position(ctx, k))
                rhs = _ihbar(cat.momentum(ctx, k), ctx, -2) if inside \
                    else OperatorElement.zero(ctx)
                return lhs, rhs

            def b_jm_p(n=n, k=k, inside=inside):
                jm, _, _ = cat.sl2_generators(ctx, n)
                lhs = commutator(jm, cat.momentum(ctx, k))
                rhs = _ihbar(cat.position(ctx, k), ctx, 2) if inside \
                    else OperatorElement.zero(ctx)
                return lhs, rhs

            def b_j3_x(n=n, k=k, inside=inside):
                _, _, j3 = cat.sl2_generators(ctx, n)
                lhs = commutator(j3, cat.position(ctx, k))
                rhs = _ihbar(cat.position(ctx, k), ctx, -1) if inside \
                    else OperatorElement.zero(ctx)
                return lhs, rhs

            def b_j3_p(n=n, k=k, inside=inside):
                _, _, j3 = cat.sl2_generators(ctx, n)
                lhs = commutator(j3, cat.momentum(ctx, k))
                rhs = _ihbar(cat.momentum(ctx, k), ctx, 1) if inside \
                    else OperatorElement.zero(ctx)
                return lhs, rhs

            tag = "in" if inside else "out"
            cases.append(IdentityCase("heisenberg-jp-x-%d-%d" % (n, k),
                                      "[J+(%d), x%d] (%s of stage)" % (n, k, tag), b_jp_x))
            cases.append(IdentityCase("heisenberg-jm-p-%d-%d" % (n, k),
                                      "[J-(%d), p%d] (%s of stage)" % (n, k, tag), b_jm_p))
            cases.append(IdentityCase("heisenberg-j3-x-%d-%d" % (n, k),
                                      "[J3(%d), x%d] (%s of stage)" % (n, k, tag), b_j3_x))
            cases.append(IdentityCase("heisenberg-j3-p-%d-%d" % (n, k),
                                      "[J3(%d), p%d] (%s of stage)" % (n, k, tag), b_j3_p))

    def b_jp_p():
        _, jp, _ = cat.sl2_generators(ctx, 3)
        return commutator(jp, cat.momentum(ctx, 2)), OperatorElement.zero(ctx)

    def b_jm_x():
        jm, _, _ = cat.sl2_generators(ctx, 3)
        return commutator(jm, cat.position(ctx, 2)), OperatorElement.zero(ctx)

    cases.append(IdentityCase("heisenberg-jp-p", "[J+(n), p_k] = 0", b_jp_p))
    cases.append(IdentityCase("heisenberg-jm-x", "[J-(n), x_k] = 0", b_jm_x))

    def b_px_printed():
        lhs = commutator(cat.momentum(ctx, 1), cat.position(ctx, 1))
        rhs = _ihbar(OperatorElement.identity(ctx), ctx, -2)
        return lhs, rhs

    cases.append(IdentityCase(
        "canonical-pair-printed", "[p_k, x_k] = -2 i hbar (as printed)",
        b_px_printed, expect="discrepant",
        note="engine computes [p_k, x_k] = -i hbar delta_kl"))

    def b_px_computed():
        lhs = commutator(cat.momentum(ctx, 1), cat.position(ctx, 1))
        return lhs, _ihbar(OperatorElement.identity(ctx), ctx, -1)

    cases.append(IdentityCase("canonical-pair-computed",
                              "[p_k, x_k] = -i hbar", b_px_computed))

    def b_px_off():
        return (commutator(cat.momentum(ctx, 1), cat.position(ctx, 2)),
                OperatorElement.zero(ctx))

    cases.append(IdentityCase("canonical-pair-offdiagonal",
                              "[p_1, x_2] = 0", b_px_off))

    for m in range(2, dim + 1):
        def b_casforms(m=m):
            jm, jp, j3 = cat.sl2_generators(ctx, m)
            hb = _hb(ctx)
            j3i = j3 + OperatorElement.from_coeff(hb.scale(I))
            alt = (multiply(jm, jp) - multiply(j3i, j3i)
                   - OperatorElement.from_coeff(hb * hb))
            return cat.casimir(ctx, m), alt

        cases.append(IdentityCase(
            "casimir-two-forms-%d" % m,
            "(J+J- + J-J+)/2 - J3^2 = J-J+ - (J3+i hbar)^2 - hbar^2 (stage %d)" % m,
            b_casforms))

    for m in range(2, dim + 1):
        for which, gen_idx in (("jm", 0), ("jp", 1), ("j3", 2)):
            for rev in (False, True):
                def b_cc(m=m, gen_idx=gen_idx, rev=rev):
                    gens = cat.sl2_generators(ctx)
                    return (commutator(gens[gen_idx], cat.casimir(ctx, m, reverse=rev)),
                            OperatorElement.zero(ctx))

                cases.append(IdentityCase(
                    "casimir-commutes-%s-%d%s" % (which, m, "-rev" if rev else ""),
                    "[%s(N), C(%d)%s] = 0" % (which.upper(), m, " reversed" if rev else ""),
                    b_cc))

    def b_hforms():
        H = cat.hamiltonian(ctx)
        jm, jp, j3 = cat.sl2_generators(ctx)
        one = Coeff.one(ctx)
        kap = Coeff.var(ctx, "kappa")
        rho = Coeff.var(ctx, "r", 2)
        inv_r = Coeff.var(ctx, "r", -1)
        curved = one + kap * rho
        alt = (OperatorElement.from_coeff((curved * curved).scale(HALF)) * jp
               - OperatorElement.from_coeff(Coeff.var(ctx, "mu") * (one - kap * rho) * inv_r))
        return H, alt

    cases.append(IdentityCase(
        "hamiltonian-kinetic-form",
        "(1+kappa J-)^2/2 J+ - mu(1-kappa J-)/sqrt(J-) equals the angular-split form",
        b_hforms))

    def b_curv2():
        flat, curved = cat.curvature(2, mpq(3, 2))
        return (OperatorElement.from_coeff(curved - flat),
                OperatorElement.zero(flat.ctx))

    cases.append(IdentityCase(
        "curvature-coincides-2d",
        "deformed scalar curvature equals the round one in two dimensions",
        b_curv2))

    def b_curvb1():
        flat, curved = cat.curvature(3, 1)
        return (OperatorElement.from_coeff(curved - flat),
                OperatorElement.zero(flat.ctx))

    cases.append(IdentityCase(
        "curvature-undeformed",
        "winding ratio one leaves the scalar curvature unchanged", b_curvb1))

    for n in (2, 3, 4):
        def b_l2(n=n):
            c = cartesian_ctx(n)
            L = cat.angular_vector(c)
            hb = _hb(c)
            return (multiply(L, L),
                    cat.casimir(c) + OperatorElement.from_coeff(hb * hb))

        cases.append(IdentityCase(
            "vector-square-casimir-%dd" % n,
            "L^2 = Casimir + hbar^2 in %d dimensions" % n, b_l2))

    def b_classical_mirror():
        cc = classical_ctx(3)
        jm, jp, j3 = sl2_functions(cc)
        checks = [poisson(j3, jp) - jp.scale(kint(2)),
                  poisson(j3, jm) - jm.scale(kint(-2)),
                  poisson(jm, jp) - j3.scale(kint(4)),
                  poisson(hamiltonian_function(cc), casimir_function(cc, 2))]
        bad = [c for c in checks if not c.is_zero]
        flag = OperatorElement.zero(cartesian_ctx(3)) if not bad else \
            OperatorElement.identity(cartesian_ctx(3))
        return flag, OperatorElement.zero(cartesian_ctx(3))

    cases.append(IdentityCase(
        "classical-mirror-brackets",
        "Poisson closure {J3,J+}=2J+, {J3,J-}=-2J-, {J-,J+}=4J3 and {H,C}=0",
        b_classical_mirror))
    return cases


# -- radial suite -----------------------------------------------------------------------


def radial_cases(betas=("1", "2", "1/2", "2/3")):
    cases = []
    for btxt in betas:
        beta = mpq(btxt)
        ctx = radial_ctx(beta)
        tag = btxt.replace("/", "over")
        m, n = int(beta.numerator), int(beta.denominator)

        def pref_sq(ctx=ctx):
            Lb = cat.spectral_symbol(ctx).scale(K(1 / ctx.beta))
            p = Lb + _hb(ctx).scale(HALF)
            return OperatorElement.from_coeff(p * p)

        def b_fact(ctx=ctx):
            return (multiply(pref_sq(ctx), cat.hamiltonian(ctx)),
                    multiply(cat.ladder(ctx, "Adag"), cat.ladder(ctx, "A"))
                    + cat.companion_scalar(ctx))

        def b_fact_partner(ctx=ctx):
            H1 = cat.hamiltonian_shifted(ctx, 1)
            return (multiply(pref_sq(ctx), H1),
                    multiply(cat.ladder(ctx, "A"), cat.ladder(ctx, "Adag"))
                    + cat.companion_scalar(ctx))

        def b_raise(ctx=ctx):
            return (multiply(cat.ladder(ctx, "A"), cat.hamiltonian(ctx)),
                    multiply(cat.hamiltonian_shifted(ctx, 1), cat.ladder(ctx, "A")))

        def b_lower(ctx=ctx):
            return (multiply(cat.ladder(ctx, "Adag"), cat.hamiltonian_shifted(ctx, 1)),
                    multiply(cat.hamiltonian(ctx), cat.ladder(ctx, "Adag")))

        def b_power(ctx=ctx, m=m, n=n):
            An = cat.ladder_power(ctx, "A", n)
            return (multiply(An, cat.hamiltonian(ctx)),
                    multiply(cat.hamiltonian(ctx).shift_spectral(m), An))

        def b_power_adj(ctx=ctx, m=m, n=n):
            Adn = cat.ladder_power(ctx, "Adag", n)
            return (multiply(Adn, cat.hamiltonian(ctx).shift_spectral(m)),
                    multiply(cat.hamiltonian(ctx), Adn))

        def b_adjoint(ctx=ctx):
            one = Coeff.one(ctx)
            r = Coeff.var(ctx, "r")
            kap = Coeff.var(ctx, "kappa")
            w = r / ((one + kap * r * r) ** 2)
            return (formal_adjoint(cat.ladder(ctx, "A"), w),
                    cat.ladder(ctx, "Adag"))

        def b_radial_coalg(ctx=ctx):
            # the one-variable ladder equals the generator-built expression
            # realised on the half line ((J3 + i hbar)/sqrt(J-) -> p_r)
            from .scalars import INV_SQRT2
            one = Coeff.one(ctx)
            r = Coeff.var(ctx, "r")
            kap = Coeff.var(ctx, "kappa")
            hb = _hb(ctx)
            Lb = cat.spectral_symbol(ctx).scale(K(1 / ctx.beta))
            pref = Lb + hb.scale(HALF)
            pr = cat.radial_momentum(ctx)
            curved_over_root = (one + kap * r * r) / r
            t1 = OperatorElement.from_coeff(-(pref * curved_over_root)) \
                * (OperatorElement.from_coeff(r) * pr)
            t2 = OperatorElement.from_coeff(
                (Lb * pref * (one - kap * r * r) / r).scale(MINUS_I))
            mu = Coeff.var(ctx, "mu")
            coalg = (t1 + t2 + OperatorElement.from_coeff(mu.scale(I))).scale(INV_SQRT2)
            return coalg, cat.ladder(ctx, "A")

        cases.append(IdentityCase("factorization-%s" % tag,
                                  "(L/b + hbar/2)^2 H(L) = Ad A + G, beta=%s" % btxt, b_fact))
        cases.append(IdentityCase("factorization-partner-%s" % tag,
                                  "(L/b + hbar/2)^2 H(L+hbar b) = A Ad + G, beta=%s" % btxt,
                                  b_fact_partner))
        cases.append(IdentityCase("intertwine-raise-%s" % tag,
                                  "A H(L) = H(L + hbar b) A, beta=%s" % btxt, b_raise))
        cases.append(IdentityCase("intertwine-lower-%s" % tag,
                                  "Ad H(L + hbar b) = H(L) Ad, beta=%s" % btxt, b_lower))
        cases.append(IdentityCase("ladder-power-shift-%s" % tag,
                                  "(A)^n H(L) = H(L + hbar m) (A)^n, beta=%s" % btxt, b_power))
        cases.append(IdentityCase("ladder-power-shift-adj-%s" % tag,
                                  "(Ad)^n H(L + hbar m) = H(L) (Ad)^n, beta=%s" % btxt,
                                  b_power_adj))
        cases.append(IdentityCase("adjoint-pair-%s" % tag,
                                  "A and Ad are mutual adjoints for weight r/(1+kappa r^2)^2",
                                  b_adjoint))
        cases.append(IdentityCase("ladder-coalgebraic-form-%s" % tag,
                                  "generator-built ladder equals the printed radial one",
                                  b_radial_coalg))

    # quadratic symmetry algebra at beta = 1
    ctx = radial_ctx(1)

    def b_rr():
        Rp, Rm = cat.runge_lenz(ctx)
        H = cat.hamiltonian(ctx)
        L = Coeff.var(ctx, "L")
        hb = _hb(ctx)
        kap = Coeff.var(ctx, "kappa")
        target = multiply(
            OperatorElement.from_coeff((L * hb).scale(MINUS_I)),
            H.scale(kint(2)) - OperatorElement.from_coeff(
                kap * (L * L * kint(8) + hb * hb)))
        return commutator(Rp, Rm), target

    def b_rl_plus():
        Rp, Rm = cat.runge_lenz(ctx)
        return (commutator(Rp, OperatorElement.from_coeff(Coeff.var(ctx, "L"))),
                _ihbar(Rm, ctx, -1))

    def b_rl_minus():
        Rp, Rm = cat.runge_lenz(ctx)
        return (commutator(Rm, OperatorElement.from_coeff(Coeff.var(ctx, "L"))),
                _ihbar(Rp, ctx, 1))

    def b_hr():
        Rp, Rm = cat.runge_lenz(ctx)
        H = cat.hamiltonian(ctx)
        return commutator(H, Rp) + commutator(H, Rm), OperatorElement.zero(ctx)

    def b_hla():
        H = cat.hamiltonian(ctx)
        la = multiply(OperatorElement.shift(ctx, 1), cat.ladder(ctx, "A"))
        return commutator(H, la), OperatorElement.zero(ctx)

    def b_so3_flat():
        Rp, Rm = cat.runge_lenz(ctx)
        H = cat.hamiltonian(ctx)
        L = Coeff.var(ctx, "L")
        lhs = commutator(Rp, Rm).substitute_param("kappa", 0)
        rhs = multiply(OperatorElement.from_coeff((L * _hb(ctx)).scale(MINUS_I)),
                       H.substitute_param("kappa", 0).scale(kint(2)))
        return lhs, rhs

    def b_g_flat():
        g = cat.companion_scalar(ctx).substitute_param("kappa", 0)
        mu = Coeff.var(ctx, "mu")
        return g, OperatorElement.from_coeff(-(mu * mu).scale(HALF))

    cases.append(IdentityCase("quadratic-algebra-rr",
                              "[R+, R-] = -i hbar L (2H - kappa(8 L^2 + hbar^2))", b_rr))
    cases.append(IdentityCase("quadratic-algebra-rl-plus", "[R+, L] = -i hbar R-", b_rl_plus))
    cases.append(IdentityCase("quadratic-algebra-rl-minus", "[R-, L] = i hbar R+", b_rl_minus))
    cases.append(IdentityCase("hamiltonian-commutes-r", "[H, R+] = [H, R-] = 0", b_hr))
    cases.append(IdentityCase("hamiltonian-commutes-shift-ladder", "[H, S+ A] = 0", b_hla))
    cases.append(IdentityCase("quadratic-algebra-flat",
                              "flat structure constants: [R+, R-] = -2 i hbar L H at kappa=0",
                              b_so3_flat))
    cases.append(IdentityCase("companion-scalar-flat",
                              "G reduces to -mu^2/2 at kappa=0", b_g_flat))
    return cases


# -- nd-integrals suite --------------------------------------------------------------------


def nd_cases(dim=3, betas=("1",)):
    cases = []
    for btxt in betas:
        beta = mpq(btxt)
        ctx = cartesian_ctx(dim, beta)
        tag = "%dd-%s" % (dim, btxt.replace("/", "over"))

        def b_hc(ctx=ctx):
            H = cat.hamiltonian(ctx)
            res = OperatorElement.zero(ctx)
            for stage in range(2, ctx.N + 1):
                res = res + commutator(H, cat.casimir(ctx, stage))
            for stage in range(2, ctx.N):
                res = res + commutator(H, cat.casimir(ctx, stage, reverse=True))
            return res, OperatorElement.zero(ctx)

        def b_hx(ctx=ctx):
            H = cat.hamiltonian(ctx)
            X, _ = cat.runge_lenz_parts(ctx, 1)
            return commutator(H, X), OperatorElement.zero(ctx)

        def b_hy(ctx=ctx):
            H = cat.hamiltonian(ctx)
            _, Y = cat.runge_lenz_parts(ctx, 1)
            return commutator(H, Y), OperatorElement.zero(ctx)

        def b_grades(ctx=ctx):
            H = cat.hamiltonian(ctx)
            res = OperatorElement.zero(ctx)
            for comp in cat.scalar_integral_components(ctx, 1).values():
                res = res + commutator(H, comp)
            return res, OperatorElement.zero(ctx)

        cases.append(IdentityCase("h-commutes-casimirs-%s" % tag,
                                  "[H, C(m)] = [H, C(m) reversed] = 0", b_hc))
        cases.append(IdentityCase("h-commutes-ladder-product-%s" % tag,
                                  "[H, (Lk+)^m (A)^n] = 0", b_hx))
        cases.append(IdentityCase("h-commutes-ladder-product-adj-%s" % tag,
                                  "[H, (Ad)^n (Lk-)^m] = 0", b_hy))
        cases.append(IdentityCase("h-commutes-grade-components-%s" % tag,
                                  "every Clifford grade of (Lk+)^m (A)^n commutes with H",
                                  b_grades))

    ctx = cartesian_ctx(dim)

    def b_hrpm():
        H = cat.hamiltonian(ctx)
        Rp, Rm = cat.runge_lenz(ctx, 1)
        return (commutator(H, Rp) + commutator(H, Rm),
                OperatorElement.zero(ctx))

    cases.append(IdentityCase("h-commutes-runge-lenz-%dd" % dim,
                              "[H, R+] = [H, R-] = 0", b_hrpm))

    def b_cart_intertwine():
        H = cat.hamiltonian(ctx)
        Hs = cat.hamiltonian_shifted(ctx, 1)
        A = cat.ladder(ctx, "A")
        return multiply(A, H), multiply(Hs, A)

    cases.append(IdentityCase("cartesian-intertwine-%dd" % dim,
                              "generator-built A intertwines H and its shifted copy",
                              b_cart_intertwine))

    def b_cart_fact():
        H = cat.hamiltonian(ctx)
        Lv = cat.angular_vector(ctx)
        pref = Lv + OperatorElement.from_coeff(_hb(ctx).scale(HALF))
        lhs = multiply(multiply(pref, pref), H)
        rhs = multiply(cat.ladder(ctx, "Adag"), cat.ladder(ctx, "A")) \
            + cat.companion_scalar(ctx)
        return lhs, rhs

    cases.append(IdentityCase("cartesian-factorization-%dd" % dim,
                              "(L + hbar/2)^2 H = Ad A + G with the vector-valued L",
                              b_cart_fact))

    for k in range(1, dim + 1):
        def b_lkL(k=k):
            L = cat.angular_vector(ctx)
            lkp = cat.angular_ladder(ctx, k, +1)
            lkm = cat.angular_ladder(ctx, k, -1)
            hb = _hb(ctx)
            res = (commutator(lkp, L) + lkp.map_coeffs(lambda c: c * hb)
                   + commutator(lkm, L) - lkm.map_coeffs(lambda c: c * hb))
            return res, OperatorElement.zero(ctx)

        cases.append(IdentityCase(
            "angular-ladder-bracket-%dd-k%d" % (dim, k),
            "[Lk+, L] = -hbar Lk+ and [Lk-, L] = +hbar Lk- (component %d)" % k, b_lkL))

    def b_lkL_theorem_print():
        L = cat.angular_vector(ctx)
        lkp = cat.angular_ladder(ctx, 1, +1)
        lkm = cat.angular_ladder(ctx, 1, -1)
        hb = _hb(ctx)
        return commutator(lkp, L), lkm.map_coeffs(lambda c: -(c * hb))

    cases.append(IdentityCase(
        "angular-ladder-bracket-theorem-print-%dd" % dim,
        "[Lk+, L] = -hbar Lk- (superscript as printed in the theorem display)",
        b_lkL_theorem_print, expect="discrepant",
        note="engine computes [Lk+, L] = -hbar Lk+ (same superscript)"))

    def b_lkL_text_print():
        L = cat.angular_vector(ctx)
        lkp = cat.angular_ladder(ctx, 1, +1)
        hb = _hb(ctx)
        return commutator(L, lkp), lkp.map_coeffs(lambda c: -(c * hb))

    cases.append(IdentityCase(
        "angular-ladder-bracket-text-print-%dd" % dim,
        "[L, Lk+] = -hbar Lk+ (operand order of the running text)",
        b_lkL_text_print, expect="discrepant",
        note="engine computes [L, Lk+] = +hbar Lk+"))

    def b_lk_adjoint():
        lkp = cat.angular_ladder(ctx, 1, +1)
        lkm = cat.angular_ladder(ctx, 1, -1)
        return flat_adjoint(lkp), lkm

    cases.append(IdentityCase("angular-ladder-adjoint-%dd" % dim,
                              "(Lk+)^dagger = Lk- for the flat pairing", b_lk_adjoint))

    ctx2 = cartesian_ctx(2)

    def b_mix_printed():
        return (cat.angular_ladder(ctx2, 2, +1),
                cat.angular_ladder(ctx2, 1, -1).scale(I))

    cases.append(IdentityCase(
        "planar-ladder-mixing-printed",
        "L2+ = i L1- in two dimensions (as printed)", b_mix_printed,
        expect="discrepant",
        note="engine computes L2+ = -i s L1+ and L2- = +i s L1- with the "
             "chirality s = -i gamma1 gamma2"))

    def b_mix_computed():
        s = multiply(OperatorElement.gamma(ctx2, 1),
                     OperatorElement.gamma(ctx2, 2)).scale(MINUS_I)
        lhs = (cat.angular_ladder(ctx2, 2, +1)
               + multiply(s, cat.angular_ladder(ctx2, 1, +1)).scale(I))
        rhs = OperatorElement.zero(ctx2)
        lhs2 = (cat.angular_ladder(ctx2, 2, -1)
                - multiply(s, cat.angular_ladder(ctx2, 1, -1)).scale(I))
        return lhs + lhs2, rhs

    cases.append(IdentityCase(
        "planar-ladder-mixing-computed",
        "L2+ = -i s L1+ and L2- = +i s L1- with s the planar chirality",
        b_mix_computed))
    return cases


# -- ccm suite -----------------------------------------------------------------------------


def ccm_cases(betas=("1", "1/2")):
    cases = []
    for btxt in betas:
        beta = mpq(btxt)
        ctx = radial_ctx(beta)
        tag = btxt.replace("/", "over")
        m, n = int(beta.numerator), int(beta.denominator)

        def b_raise(ctx=ctx):
            H = cat.hamiltonian(ctx, "ccm")
            Hs = cat.hamiltonian_shifted(ctx, 1, "ccm")
            A = cat.ladder(ctx, "Ahat", kind="ccm")
            return multiply(A, H), multiply(Hs, A)

        def b_lower(ctx=ctx):
            H = cat.hamiltonian(ctx, "ccm")
            Hs = cat.hamiltonian_shifted(ctx, 1, "ccm")
            Ad = cat.ladder(ctx, "Ahatdag", kind="ccm")
            return multiply(Ad, Hs), multiply(H, Ad)

        def b_power(ctx=ctx, m=m, n=n):
            An = cat.ladder_power(ctx, "Ahat", n, kind="ccm")
            H = cat.hamiltonian(ctx, "ccm")
            return (multiply(An, H), multiply(H.shift_spectral(m), An))

        cases.append(IdentityCase("ccm-intertwine-raise-%s" % tag,
                                  "Ahat H(L) = H(L + hbar b) Ahat, beta=%s" % btxt, b_raise))
        cases.append(IdentityCase("ccm-intertwine-lower-%s" % tag,
                                  "Ahatdag H(L + hbar b) = H(L) Ahatdag, beta=%s" % btxt,
                                  b_lower))
        cases.append(IdentityCase("ccm-ladder-power-shift-%s" % tag,
                                  "(Ahat)^n H(L) = H(L + hbar m) (Ahat)^n, beta=%s" % btxt,
                                  b_power))

    ctx = radial_ctx(1)

    def b_zeroing():
        H = cat.hamiltonian(ctx, "ccm")
        z = H.substitute_param("delta", 0).substitute_param("kappa", 0)
        pr = cat.radial_momentum(ctx)
        r = Coeff.var(ctx, "r")
        L = Coeff.var(ctx, "L")
        hb = _hb(ctx)
        expected = (OperatorElement.from_coeff(r.scale(HALF))
                    * (multiply(pr, pr)
                       + OperatorElement.from_coeff((hb / r).scale(MINUS_I)) * pr
                       + OperatorElement.from_coeff(L * L / (r * r)))
                    + OperatorElement.from_coeff(Coeff.var(ctx, "mutilde") * r.scale(HALF)))
        return z, expected

    cases.append(IdentityCase(
        "ccm-parameter-zeroing",
        "metamorphosis Hamiltonian at kappa=delta=0 is the flat r-multiplied form",
        b_zeroing))
    return cases


# -- reduction suite -------------------------------------------------------------------------


def reduction_cases(betas=("2", "1")):
    from . import reduction as red
    cases = []
    rctx0 = reduced_ctx(1)
    ctx40 = cartesian_ctx(4, 1)

    def b_red_sl2():
        gens = red.reduced_generators(rctx0)
        jm = gamma_to_matrix(gens["Jm"])
        jp = gamma_to_matrix(gens["Jp"])
        j3 = gamma_to_matrix(gens["J3"])
        hb = _hb(rctx0)
        two_i = OperatorElement.from_coeff(hb.scale(I * kint(2)))
        four_i = OperatorElement.from_coeff(hb.scale(I * kint(4)))
        r1 = j3.commutator(jp) - jp * two_i
        r2 = j3.commutator(jm) + jm * two_i
        r3 = jm.commutator(jp) - j3 * four_i
        total = r1 + r2 + r3
        return total, MatrixOperator.zero(rctx0)

    cases.append(IdentityCase("reduced-sl2-closure",
                              "reduced triple satisfies the dilation algebra", b_red_sl2))

    for name, builder4 in (("jm", lambda: cat.sl2_generators(ctx40)[0]),
                           ("jp", lambda: cat.sl2_generators(ctx40)[1]),
                           ("j3", lambda: cat.sl2_generators(ctx40)[2]),
                           ("lvec", lambda: cat.angular_vector(ctx40))):
        def b_match(name=name, builder4=builder4):
            gens = red.reduced_generators(rctx0)
            tgt = {"jm": "Jm", "jp": "Jp", "j3": "J3", "lvec": "L"}[name]
            return (red.gauge_reduce(builder4(), rctx0),
                    gamma_to_matrix(gens[tgt]))

        cases.append(IdentityCase("reduced-generator-%s" % name,
                                  "sector reduction of %s matches its printed reduced form"
                                  % name.upper(), b_match))

    def b_linear_blocks():
        gens = red.reduced_generators(rctx0)
        g = lambda i: OperatorElement.gamma(ctx40, i)
        blocks = [
            (multiply(cat.position(ctx40, 1), g(1))
             + multiply(cat.position(ctx40, 2), g(2)), "x1"),
            (multiply(cat.position(ctx40, 3), g(3))
             + multiply(cat.position(ctx40, 4), g(4)), "x2"),
            (multiply(g(1), cat.momentum(ctx40, 1))
             + multiply(g(2), cat.momentum(ctx40, 2)), "p1"),
            (multiply(g(3), cat.momentum(ctx40, 3))
             + multiply(g(4), cat.momentum(ctx40, 4)), "p2"),
        ]
        total = None
        for op4, tgt in blocks:
            d = red.gauge_reduce(op4, rctx0) - gamma_to_matrix(gens[tgt])
            total = d if total is None else total + d
        return total, MatrixOperator.zero(rctx0)

    cases.append(IdentityCase("reduced-linear-blocks",
                              "position- and momentum-linear Clifford blocks reduce "
                              "to their printed forms", b_linear_blocks))

    def b_diag():
        diag = red.diagonalize_jplus(rctx0)
        gens = red.reduced_generators(rctx0)
        return diag, gamma_to_matrix(gens["Jp"])

    cases.append(IdentityCase("diagonal-sector-family",
                              "the reduced kinetic generator is the diagonal sector family "
                              "with labels shifted by the gauge", b_diag))

    def b_l2_red():
        gens = red.reduced_generators(rctx0)
        lt = gamma_to_matrix(gens["L"])
        sum_l2 = OperatorElement.zero(ctx40)
        for j in range(1, 5):
            for k in range(j + 1, 5):
                ljk = cat.angular_momentum(ctx40, j, k)
                sum_l2 = sum_l2 + multiply(ljk, ljk)
        rhs = red.gauge_reduce(sum_l2, rctx0)
        hb = _hb(rctx0)
        ident = MatrixOperator.identity(rctx0) * OperatorElement.from_coeff(hb * hb)
        return lt * lt, rhs + ident

    cases.append(IdentityCase("reduced-vector-square",
                              "the reduced angular vector squares to the reduced scalar "
                              "total plus hbar^2", b_l2_red))

    for j in (1, 2):
        def b_shift(j=j):
            gens = red.reduced_generators(rctx0)
            lt = gamma_to_matrix(gens["L"])
            lp = red.reduced_ladder(rctx0, j, +1)
            hb = _hb(rctx0)
            two_h = MatrixOperator.identity(rctx0) * OperatorElement.from_coeff(
                hb.scale(kint(2)))
            return lt * lp, lp * (lt + two_h)

        cases.append(IdentityCase(
            "reduced-ladder-shift-j%d" % j,
            "the squared ladder raises the reduced angular label by 2 hbar (pair %d)" % j,
            b_shift))

    def b_gauge_printed():
        blocks = red.gauge_building_blocks(ctx40)
        try:
            for b in blocks:
                mat = gamma_to_matrix(red.to_bipolar(b, rctx0))
                red._reduce_matrix(mat, rctx0, red.printed_gauge())
        except GaugeFailure:
            # expected: report a nonzero marker so the verdict shows the
            # printed gauge does not work
            return OperatorElement.identity(rctx0), OperatorElement.zero(rctx0)
        return OperatorElement.zero(rctx0), OperatorElement.zero(rctx0)

    cases.append(IdentityCase(
        "gauge-as-printed", "the printed gauge matrix leaves angular frequencies",
        b_gauge_printed, expect="discrepant",
        note="GaugeFailure raised; the engine-solved gauge is "
             "diag(e^{-i(phi1+phi2)/2}, e^{-i(phi1-phi2)/2}, e^{i(phi1-phi2)/2}, "
             "e^{i(phi1+phi2)/2})"))

    def b_gauge_solved():
        blocks = red.gauge_building_blocks(ctx40)
        gauge = red.solve_gauge(ctx40, rctx0)
        for b in blocks:
            mat = gamma_to_matrix(red.to_bipolar(b, rctx0))
            red._reduce_matrix(mat, rctx0, gauge)
        return OperatorElement.zero(rctx0), OperatorElement.zero(rctx0)

    cases.append(IdentityCase(
        "gauge-solved", "the engine-solved gauge leaves every building block phase-free",
        b_gauge_solved))

    for btxt in betas:
        beta = mpq(btxt)
        rctx = reduced_ctx(beta)
        tag = btxt.replace("/", "over")

        def b_partner(rctx=rctx):
            part = red.partner_hamiltonians(rctx)
            rp, rm = red.reduced_integrals(rctx, 1)
            return part.commutator(rp) + part.commutator(rm), MatrixOperator.zero(rctx)

        cases.append(IdentityCase(
            "partner-commutes-integrals-%s" % tag,
            "the diagonal partner family commutes with the reduced integrals, beta=%s" % btxt,
            b_partner))
    return cases


# -- appendix suite --------------------------------------------------------------------------


def appendix_cases(dims=(3, 4)):
    cases = []
    for dim in dims:
        ctx = cartesian_ctx(dim)
        hb = _hb(ctx)

        def b_ljk_comm(ctx=ctx):
            l12 = cat.angular_momentum(ctx, 1, 2)
            l23 = cat.angular_momentum(ctx, 2, 3)
            l13 = cat.angular_momentum(ctx, 1, 3)
            return commutator(l12, l23), _ihbar(l13, ctx, -1)

        cases.append(IdentityCase("pair-bracket-%dd" % dim,
                                  "[L12, L23] = -i hbar L13", b_ljk_comm))

        def b_xls(ctx=ctx):
            res = OperatorElement.zero(ctx)
            from itertools import combinations
            for a, b, c in combinations(range(1, ctx.N + 1), 3):
                res = res + (multiply(cat.position(ctx, a), cat.angular_momentum(ctx, b, c))
                             - multiply(cat.position(ctx, b), cat.angular_momentum(ctx, a, c))
                             + multiply(cat.position(ctx, c), cat.angular_momentum(ctx, a, b)))
            return res, OperatorElement.zero(ctx)

        cases.append(IdentityCase("position-cycle-%dd" % dim,
                                  "x_a L_bc - x_b L_ac + x_c L_ab = 0", b_xls))

        for m in range(1, dim + 1):
            def b_sum(ctx=ctx, m=m):
                lhs = OperatorElement.zero(ctx)
                for j in range(1, ctx.N + 1):
                    if j != m:
                        lhs = lhs + multiply(cat.position(ctx, j),
                                             cat.angular_momentum(ctx, m, j))
                gens = cat.sl2_generators(ctx)
                jm, j3 = gens[0], gens[2]
                rhs = (multiply(cat.position(ctx, m), j3)
                       - multiply(jm, cat.momentum(ctx, m))
                       + cat.position(ctx, m).scale(I * krat(ctx.N, 2)).map_coeffs(
                           lambda c: c * _hb(ctx)))
                return lhs, rhs

            cases.append(IdentityCase(
                "radial-carrier-%dd-m%d" % (dim, m),
                "sum_j x_j L_mj = x_m J3 - J- p_m + i hbar N x_m / 2", b_sum))

        def _rm(ctx, m):
            gens = cat.sl2_generators(ctx)
            jm, j3 = gens[0], gens[2]
            return (multiply(cat.position(ctx, m), j3)
                    - multiply(jm, cat.momentum(ctx, m))
                    + cat.position(ctx, m).scale(I * krat(ctx.N, 2)).map_coeffs(
                        lambda c: c * _hb(ctx)))

        def b_xml_corrected(ctx=ctx):
            L = cat.angular_vector(ctx)
            m = 1
            xm = cat.position(ctx, m)
            lhs = commutator(multiply(xm, L), L)
            first = commutator(xm, L).scale(krat(ctx.N - 2, 2)).map_coeffs(
                lambda c: c * _hb(ctx))
            s = OperatorElement.zero(ctx)
            for j in range(1, ctx.N + 1):
                if j != m:
                    s = s + multiply(cat.position(ctx, j),
                                     commutator(cat.angular_momentum(ctx, m, j), L))
            rhs = first - _ihbar(_rm(ctx, m), ctx, 1) + s.scale(I)
            return lhs, rhs

        cases.append(IdentityCase(
            "carrier-bracket-corrected-%dd" % dim,
            "[x_m L, L] = (hbar(N-2)/2)[x_m, L] - i hbar R_m + i sum_j x_j [L_mj, L]",
            b_xml_corrected))

        def b_xml_printed(ctx=ctx):
            L = cat.angular_vector(ctx)
            m = 1
            xm = cat.position(ctx, m)
            lhs = commutator(multiply(xm, L), L)
            first = commutator(xm, L).scale(krat(ctx.N - 2, 2)).map_coeffs(
                lambda c: c * _hb(ctx))
            s = OperatorElement.zero(ctx)
            for j in range(1, ctx.N + 1):
                if j != m:
                    s = s + multiply(cat.position(ctx, j),
                                     commutator(cat.angular_momentum(ctx, m, j), L))
            rhs = first - _ihbar(_rm(ctx, m), ctx, 1) - s.scale(I)
            return lhs, rhs

        cases.append(IdentityCase(
            "carrier-bracket-printed-%dd" % dim,
            "[x_m L, L] with the printed sign of the sum term", b_xml_printed,
            expect="discrepant",
            note="engine computes + i sum_j x_j [L_mj, L] (printed sign flipped)"))

        def b_rml(ctx=ctx):
            L = cat.angular_vector(ctx)
            m = 1
            xm = cat.position(ctx, m)
            s = OperatorElement.zero(ctx)
            for j in range(1, ctx.N + 1):
                if j != m:
                    s = s + multiply(cat.position(ctx, j),
                                     commutator(cat.angular_momentum(ctx, m, j), L))
            rhs = (_ihbar(multiply(xm, L), ctx, 1)
                   - xm.scale(I * krat(ctx.N - 2, 2)).map_coeffs(
                       lambda c: c * _hb(ctx) * _hb(ctx))
                   + s)
            return commutator(_rm(ctx, m), L), rhs

        cases.append(IdentityCase(
            "carrier-angular-bracket-%dd" % dim,
            "[R_m, L] = i hbar x_m L - i hbar^2 (N-2)/2 x_m + sum_j x_j [L_mj, L]",
            b_rml))

        def b_l2_const(ctx=ctx):
            L = cat.angular_vector(ctx)
            s = OperatorElement.zero(ctx)
            for j in range(1, ctx.N + 1):
                for k in range(j + 1, ctx.N + 1):
                    ljk = cat.angular_momentum(ctx, j, k)
                    s = s + multiply(ljk, ljk)
            const = OperatorElement.from_coeff(
                (_hb(ctx) * _hb(ctx)).scale(krat((ctx.N - 2) ** 2, 4)))
            return multiply(L, L) - s, const

        cases.append(IdentityCase(
            "vector-square-constant-%dd" % dim,
            "L^2 - sum L_jk^2 = hbar^2 (N-2)^2 / 4", b_l2_const))

        def b_lpm(ctx=ctx):
            L = cat.angular_vector(ctx)
            hb = _hb(ctx)
            res = OperatorElement.zero(ctx)
            for k in range(1, ctx.N + 1):
                lkp = cat.angular_ladder(ctx, k, +1)
                lkm = cat.angular_ladder(ctx, k, -1)
                res = (res + commutator(lkp, L) + lkp.map_coeffs(lambda c: c * hb)
                       + commutator(lkm, L) - lkm.map_coeffs(lambda c: c * hb))
            return res, OperatorElement.zero(ctx)

        cases.append(IdentityCase(
            "ladder-theorem-%dd" % dim,
            "[Lk+, L] = -hbar Lk+ and [Lk-, L] = +hbar Lk- for every component",
            b_lpm))

    ctx4 = cartesian_ctx(4)

    def b_ljksym():
        def l(a, b):
            return cat.angular_momentum(ctx4, a, b)
        lhs = (multiply(l(1, 2), l(3, 4)) - multiply(l(1, 3), l(2, 4))
               + multiply(l(1, 4), l(2, 3)))
        return lhs, OperatorElement.zero(ctx4)

    cases.append(IdentityCase(
        "pair-cycle-4d", "L_ab L_cd - L_ac L_bd + L_ad L_bc = 0", b_ljksym))

    def b_l2_printed():
        L = cat.angular_vector(ctx4)
        s = OperatorElement.zero(ctx4)
        for j in range(1, 5):
            for k in range(j + 1, 5):
                ljk = cat.angular_momentum(ctx4, j, k)
                s = s + multiply(ljk, ljk)
        hb = _hb(ctx4)
        const = OperatorElement.from_coeff((hb * hb).scale(krat(4 - 2, 4)))
        return multiply(L, L) - s, const

    cases.append(IdentityCase(
        "vector-square-constant-printed-4d",
        "L^2 - sum L_jk^2 = hbar^2 (N-2)/4 (linear variant as printed)",
        b_l2_printed, expect="discrepant",
        note="engine computes hbar^2 (N-2)^2/4; both prints agree only at N=3"))
    return cases


# -- assembly ---------------------------------------------------------------------------------


def suite_cases(name, heavy=False):
    if name == "coalgebra":
        return coalgebra_cases()
    if name == "radial":
        return radial_cases()
    if name == "nd-integrals":
        cases = nd_cases(3, betas=("1",))
        if heavy:
            cases += nd_cases(3, betas=("2", "1/2"))
            cases += nd_cases(4, betas=("1", "2", "1/2"))
        return cases
    if name == "ccm":
        return ccm_cases()
    if name == "reduction":
        return reduction_cases()
    if name == "appendix":
        return appendix_cases()
    raise UnknownSuite("unknown suite %r" % name)


def run(name, heavy=False, threads=None, oracle_degree=0):
    if name == "all":
        reports = [run(n, heavy=heavy, threads=threads, oracle_degree=oracle_degree)
                   for n in SUITE_NAMES]
        cases = [e for r in reports for e in r["cases"]]
        summary = {"pass": 0, "fail": 0, "discrepant": 0, "error": 0}
        for r in reports:
            for k in summary:
                summary[k] += r["summary"][k]
        return {"schema_version": reports[0]["schema_version"], "suite": "all",
                "cases": cases, "summary": summary}
    return run_suite(name, suite_cases(name, heavy=heavy), threads=threads,
                     oracle_degree=oracle_degree)


MANIFEST = {
    "coalgebra": {
        "covers": "dilation-triple closure at all mixed stages, derivation rule on "
                  "functions of the generators, position/momentum rows, the canonical "
                  "pair (engine-corrected constant), both Casimir spellings, Casimir "
                  "centrality, the kinetic split of the Hamiltonian, curvature "
                  "coincidences, Poisson mirrors",
        "notes": [
            "metric line elements: only the two printed curvature scalars are in scope",
            "sphere-coordinate motivation: out of scope",
        ],
    },
    "radial": {
        "covers": "factorization pair, intertwining both directions, scheduled ladder "
                  "powers, companion scalar, adjointness, quadratic symmetry algebra "
                  "and its flat limit, generator spelling of the ladders",
        "notes": ["spectral solvability discussion: motivational, out of scope"],
    },
    "nd-integrals": {
        "covers": "Casimir and Runge-Lenz commutation in N dimensions, Clifford-grade "
                  "splitting, vector ladder brackets (printed variants corrected), "
                  "planar mixing relations, flat adjointness of the vector ladders",
        "notes": [],
    },
    "ccm": {
        "covers": "metamorphosis Hamiltonian, hatted ladder intertwining, scheduled "
                  "powers, parameter zeroing",
        "notes": [],
    },
    "reduction": {
        "covers": "reduced generators against the gauge reduction, diagonal sector "
                  "family, reduced vector square, ladder shift by 2 hbar, partner "
                  "commutation with the reduced integrals, the printed gauge failure",
        "notes": [
            "polar-chart equivalences are numeric and live in the acceptance tests",
        ],
    },
    "appendix": {
        "covers": "pair brackets, position and pair cycles, the radial carrier "
                  "identity, both carrier bracket lemmas (one sign corrected), the "
                  "vector-square constant (quadratic variant certified)",
        "notes": [],
    },
}
