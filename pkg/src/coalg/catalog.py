"""Constructors for every named operator of the model family.

Quantum side only; the commuting (Poisson) counterparts live in
coalg.classical.  All constructors are pure and cached per context.

Conventions
-----------
* p_i = -i hbar d_i, and on the half-line p_r = -i hbar d_r.
* The dilation triple at stage m is
      Jm = sum_{i<=m} x_i^2,  Jp = -hbar^2 sum d_i^2,
      J3 = -i hbar (sum x_i d_i + m/2),
  with the reverse embedding using the last m positions instead.
* The winding ratio beta is bound to an exact positive rational per
  context; ladder constructions shift the spectral label in steps of
  beta*hbar.
* kappa is the curvature-like coupling (the square of the printed
  deformation parameter); it may be negative.
"""

from __future__ import annotations

from .coeff import Coeff
from .context import cartesian_ctx, polar_ctx, radial_ctx  # re-export convenience
from .errors import IndexRange, MissingHamiltonian, ModeMismatch
from .operators import OperatorElement, multiply
from .scalars import HALF, I, INV_SQRT2, K, MINUS_I, ONE, SQRT2, kint, krat, mpq


def _cached(ctx, key, build):
    got = ctx._cache.get(key)
    if got is None:
        got = build()
        ctx._cache[key] = got
    return got


def _cv(ctx, name, exp=1):
    return Coeff.var(ctx, name, exp)


def position(ctx, i):
    return OperatorElement.from_coeff(_cv(ctx, "x%d" % i))


def momentum(ctx, i):
    """p_i = -i hbar d_i."""
    c = _cv(ctx, "hbar").scale(MINUS_I)
    return OperatorElement.from_coeff(c) * OperatorElement.deriv(ctx, "x%d" % i)


def radial_momentum(ctx, direction="r"):
    c = _cv(ctx, "hbar").scale(MINUS_I)
    return OperatorElement.from_coeff(c) * OperatorElement.deriv(ctx, direction)


def _stage_indices(ctx, stage, reverse):
    N = ctx.N
    if stage is None:
        stage = N
    if not 1 <= stage <= N:
        raise IndexRange("stage %d outside 1..%d" % (stage, N))
    return (range(N - stage + 1, N + 1) if reverse else range(1, stage + 1)), stage


def sl2_generators(ctx, stage=None, reverse=False):
    """The dilation sl(2) triple (Jm, Jp, J3) at the given stage."""
    ctx.require_mode("cartesian")
    idx, stage = _stage_indices(ctx, stage, reverse)
    idx = tuple(idx)

    def build():
        zero_d = (0,) * len(ctx.deriv_dirs)
        # the full-stage position square is the radical square; spelling it
        # r^2 keeps every downstream coefficient small
        if len(idx) == ctx.N:
            jm = _cv(ctx, "r", 2)
        else:
            jm = Coeff.zero(ctx)
            for i in idx:
                jm = jm + _cv(ctx, "x%d" % i, 2)
        jp = OperatorElement(ctx)
        j3 = OperatorElement(ctx)
        hbar = _cv(ctx, "hbar")
        h2 = hbar * hbar
        for i in idx:
            d2 = tuple(2 if name == "x%d" % i else 0 for name in ctx.deriv_dirs)
            jp._put(((), 0, d2), h2.scale(-ONE))
            d1 = tuple(1 if name == "x%d" % i else 0 for name in ctx.deriv_dirs)
            j3._put(((), 0, d1), (_cv(ctx, "x%d" % i) * hbar).scale(MINUS_I))
        j3._put(((), 0, zero_d), hbar.scale(MINUS_I * krat(stage, 2)))
        return (OperatorElement.from_coeff(jm), jp, j3)

    return _cached(ctx, ("sl2", idx), build)


def casimir(ctx, stage=None, reverse=False):
    """Quantum Casimir (JpJm + JmJp)/2 - J3^2 of the chosen stage."""
    ctx.require_mode("cartesian")
    idx, stage = _stage_indices(ctx, stage, reverse)
    if stage < 2:
        raise IndexRange("Casimir stages start at 2")

    def build():
        jm, jp, j3 = sl2_generators(ctx, stage, reverse)
        sym = (multiply(jp, jm) + multiply(jm, jp)).scale(HALF)
        return sym - multiply(j3, j3)

    return _cached(ctx, ("casimir", tuple(idx)), build)


def angular_momentum(ctx, j, k):
    """L_jk = x_j p_k - x_k p_j."""
    return (multiply(position(ctx, j), momentum(ctx, k))
            - multiply(position(ctx, k), momentum(ctx, j)))


def angular_vector(ctx):
    """The Clifford-valued square root of the total angular momentum.

    L = hbar (N-2)/2 - i sum_{j<k} gamma_j gamma_k L_jk; its square is the
    scalar total angular momentum C + hbar^2.
    """
    ctx.require_mode("cartesian")

    def build():
        N = ctx.N
        out = OperatorElement.from_coeff(_cv(ctx, "hbar").scale(krat(N - 2, 2)))
        for j in range(1, N + 1):
            for k in range(j + 1, N + 1):
                gjk = multiply(OperatorElement.gamma(ctx, j), OperatorElement.gamma(ctx, k))
                out = out + multiply(gjk, angular_momentum(ctx, j, k)).scale(MINUS_I)
        return out

    return _cached(ctx, ("angular_vector",), build)


def _with_offset(ctx, lop, steps):
    """lop + steps*beta*hbar (steps an exact rational)."""
    steps = mpq(steps)
    if not steps:
        return lop
    shift = _cv(ctx, "hbar").scale(K(steps * ctx.beta))
    return lop + OperatorElement.from_coeff(shift)


def spectral_symbol(ctx, steps=0):
    """The commuting spectral label L + steps*beta*hbar (radial contexts)."""
    ctx.require_mode("radial")
    out = _cv(ctx, "L")
    steps = mpq(steps)
    if steps:
        out = out + _cv(ctx, "hbar").scale(K(steps * ctx.beta))
    return out


def hamiltonian(ctx, kind="bertrand"):
    """The deformed Coulomb Hamiltonian, or its metamorphosis partner.

    Radial contexts give the one-variable realisation in (r, p_r, L); in
    cartesian contexts the angular square is realised as Casimir + hbar^2.
    """
    if kind not in ("bertrand", "ccm"):
        raise ModeMismatch("unknown Hamiltonian kind %r" % kind)

    def build():
        one = Coeff.one(ctx)
        kap = _cv(ctx, "kappa")
        hbar = _cv(ctx, "hbar")
        beta2 = K(ctx.beta * ctx.beta)
        if ctx.mode == "radial":
            r = _cv(ctx, "r")
            L = _cv(ctx, "L")
            pr = radial_momentum(ctx)
            curved = one + kap * r * r
            kin = (multiply(pr, pr)
                   + OperatorElement.from_coeff((hbar / r).scale(MINUS_I)) * pr
                   + OperatorElement.from_coeff((L * L) / (r * r).scale(beta2)))
            if kind == "bertrand":
                front = (curved * curved).scale(HALF)
                pot = -(_cv(ctx, "mu") * (one - kap * r * r) / r)
            else:
                q = one - kap * r * r - _cv(ctx, "delta") * r * kint(4)
                front = r * curved * curved / q.scale(kint(2))
                pot = _cv(ctx, "mutilde") * r / q.scale(kint(2))
            return OperatorElement.from_coeff(front) * kin + OperatorElement.from_coeff(pot)
        ctx.require_mode("cartesian")
        jm, jp, j3 = sl2_generators(ctx)
        rho = _cv(ctx, "r", 2)
        inv_rho = _cv(ctx, "r", -2)
        inv_r = _cv(ctx, "r", -1)
        j3i = j3 + OperatorElement.from_coeff(hbar.scale(I))
        l2 = casimir(ctx) + OperatorElement.from_coeff(hbar * hbar)
        kin = multiply(j3i, j3i) + l2.scale(beta2.inverse())
        curved = one + kap * rho
        if kind == "bertrand":
            front = (curved * curved * inv_rho).scale(HALF)
            pot = -(_cv(ctx, "mu") * (one - kap * rho) * inv_r)
        else:
            q = one - kap * rho - _cv(ctx, "delta") * _cv(ctx, "r") * kint(4)
            front = _cv(ctx, "r") * curved * curved * inv_rho / q.scale(kint(2))
            pot = _cv(ctx, "mutilde") * _cv(ctx, "r") / q.scale(kint(2))
        return OperatorElement.from_coeff(front) * kin + OperatorElement.from_coeff(pot)

    return _cached(ctx, ("hamiltonian", kind), build)


def hamiltonian_shifted(ctx, steps, kind="bertrand"):
    """H with the angular label L replaced by L + steps*beta*hbar.

    In radial contexts this is a plain spectral substitution; in cartesian
    ones the square of the shifted vector is expanded through
    L^2 = Casimir + hbar^2.
    """
    steps = mpq(steps)
    if not steps:
        return hamiltonian(ctx, kind)
    if ctx.mode == "radial":
        return hamiltonian(ctx, kind).shift_spectral(steps * ctx.beta)

    def build():
        ctx.require_mode("cartesian")
        if kind != "bertrand":
            raise ModeMismatch("cartesian shifted Hamiltonian only for the direct system")
        base = hamiltonian(ctx, kind)
        hbar = _cv(ctx, "hbar")
        one = Coeff.one(ctx)
        kap = _cv(ctx, "kappa")
        rho = _cv(ctx, "r", 2)
        inv_rho = _cv(ctx, "r", -2)
        front = ((one + kap * rho) ** 2 * inv_rho).scale(HALF)
        a = K(steps * ctx.beta)
        # (L + a hbar)^2 - L^2 = 2 a hbar L + a^2 hbar^2
        extra = (OperatorElement.from_coeff(hbar).scale(a * kint(2)) * angular_vector(ctx)
                 + OperatorElement.from_coeff(hbar * hbar).scale(a * a))
        beta2inv = K(1 / (ctx.beta * ctx.beta))
        return base + OperatorElement.from_coeff(front) * extra.scale(beta2inv)

    return _cached(ctx, ("hamiltonian_shifted", steps, kind), build)


def ladder(ctx, which, steps=0, kind="bertrand"):
    """First-order spectral ladder operators.

    which is one of "A", "Adag", "Ahat", "Ahatdag"; steps shifts the
    spectral label by steps*beta*hbar before building (the n-fold ladder
    compositions need the shifted copies).  The hatted pair embeds the
    metamorphosis Hamiltonian in place of the coupling constant and is only
    defined for kind="ccm".
    """
    hatted = which in ("Ahat", "Ahatdag")
    if hatted and kind != "ccm":
        raise MissingHamiltonian(
            "hatted ladders require the metamorphosis Hamiltonian (kind='ccm')")
    if which not in ("A", "Adag", "Ahat", "Ahatdag"):
        raise ModeMismatch("unknown ladder %r" % which)
    steps = mpq(steps)

    def build():
        one = Coeff.one(ctx)
        kap = _cv(ctx, "kappa")
        hbar = _cv(ctx, "hbar")
        mu = _cv(ctx, "mu")
        binv = K(mpq(1) / ctx.beta)
        if ctx.mode == "radial":
            r = _cv(ctx, "r")
            pr = radial_momentum(ctx)
            Lb = spectral_symbol(ctx, steps).scale(binv)
            pref = Lb + hbar.scale(HALF)
            curved = one + kap * r * r
            flat = one / r - kap * r
            raising = which in ("Adag", "Ahatdag")
            t1 = OperatorElement.from_coeff(-(pref * curved).scale(INV_SQRT2)) * pr
            if raising:
                t2 = ((Lb + hbar) * pref * flat).scale(I * INV_SQRT2)
            else:
                t2 = (Lb * pref * flat).scale(MINUS_I * INV_SQRT2)
            out = t1 + OperatorElement.from_coeff(t2)
            if not hatted:
                tail = mu.scale(MINUS_I * INV_SQRT2 if raising else I * INV_SQRT2)
                return out + OperatorElement.from_coeff(tail)
            h = hamiltonian(ctx, "ccm")
            h = h.shift_spectral((steps + 1) * ctx.beta) if raising \
                else h.shift_spectral(steps * ctx.beta)
            return out + h.scale(MINUS_I * INV_SQRT2 if raising else I * INV_SQRT2)
        ctx.require_mode("cartesian")
        jm, jp, j3 = sl2_generators(ctx)
        rho = _cv(ctx, "r", 2)
        inv_r = _cv(ctx, "r", -1)
        hbar_op = OperatorElement.from_coeff(hbar)
        Lb = _with_offset(ctx, angular_vector(ctx), steps).scale(binv)
        pref = Lb + hbar_op.scale(HALF)
        j3i = j3 + hbar_op.scale(I)
        c_curved = ((one + kap * rho) * inv_r)   # (1 + kappa Jm)/sqrt(Jm)
        c_flat = ((one - kap * rho) * inv_r)     # (1 - kappa Jm)/sqrt(Jm)
        raising = which in ("Adag", "Ahatdag")
        t1 = multiply(pref, OperatorElement.from_coeff(c_curved) * j3i).scale(-INV_SQRT2)
        if raising:
            t2 = multiply(Lb + hbar_op,
                          OperatorElement.from_coeff(c_flat) * pref).scale(I * INV_SQRT2)
        else:
            t2 = multiply(Lb, OperatorElement.from_coeff(c_flat) * pref) \
                .scale(MINUS_I * INV_SQRT2)
        out = t1 + t2
        if not hatted:
            tail = mu.scale(MINUS_I * INV_SQRT2 if raising else I * INV_SQRT2)
            return out + OperatorElement.from_coeff(tail)
        raise ModeMismatch("hatted ladders are built in radial contexts")

    return _cached(ctx, ("ladder", which, steps, kind), build)


def ladder_power(ctx, base, count, kind="bertrand"):
    """The scheduled n-fold ladder composition.

    (A)^n  = A(L + (n-1) beta hbar) ... A(L + beta hbar) A(L)
    (Ad)^n = Ad(L) Ad(L + beta hbar) ... Ad(L + (n-1) beta hbar)

    Internally the 1/sqrt2 normalisations are cleared before multiplying
    (rational coefficients multiply much faster) and restored on the result.
    """
    if count < 1:
        raise IndexRange("ladder power needs count >= 1")
    raising = base in ("Adag", "Ahatdag")
    out = None
    order = range(count) if raising else range(count - 1, -1, -1)
    for j in order:
        step = ladder(ctx, base, steps=j, kind=kind).scale(SQRT2)
        out = step if out is None else multiply(out, step)
    half_powers, odd = divmod(count, 2)
    scale = K(mpq(1, 2 ** half_powers))
    if odd:
        scale = scale * INV_SQRT2
    return out.scale(scale)


def angular_ladder(ctx, k, sign):
    """The vector-valued angular raising/lowering operators."""
    ctx.require_mode("cartesian")
    if not 1 <= k <= ctx.N:
        raise IndexRange("component %d outside 1..%d" % (k, ctx.N))

    def build():
        jm, jp, j3 = sl2_generators(ctx)
        rho = _cv(ctx, "r", 2)
        xk = _cv(ctx, "x%d" % k)
        inv_r = _cv(ctx, "r", -1)           # 1/sqrt(Jm)
        L = angular_vector(ctx)
        hbar = _cv(ctx, "hbar")
        xk_j3 = OperatorElement.from_coeff(xk) * j3
        jm_pk = OperatorElement.from_coeff(rho) * momentum(ctx, k)
        if sign < 0:
            bracket = xk_j3 - jm_pk + OperatorElement.from_coeff((hbar * xk).scale(I))
            return (OperatorElement.from_coeff(xk * inv_r) * L
                    - OperatorElement.from_coeff(inv_r) * bracket.scale(I))
        bracket = xk_j3 - jm_pk
        return (L * OperatorElement.from_coeff(xk * inv_r)
                + OperatorElement.from_coeff(inv_r) * bracket.scale(I))

    return _cached(ctx, ("angular_ladder", k, sign), build)


def angular_ladder_power(ctx, k, sign, count):
    out = None
    op = angular_ladder(ctx, k, sign)
    for _ in range(count):
        out = op if out is None else multiply(out, op)
    return out


def shift_generator(ctx, sign):
    """Formal spectral shift generator (radial contexts)."""
    return OperatorElement.shift(ctx, 1 if sign > 0 else -1)


def runge_lenz_parts(ctx, k=1, kind="bertrand"):
    """The pair X = (Lk+)^m (A)^n and Y = (Ad)^n (Lk-)^m with beta = m/n."""
    m = ctx.beta_num
    n = ctx.beta_den

    def build():
        if ctx.mode == "radial":
            up = OperatorElement.shift(ctx, m)
            down = OperatorElement.shift(ctx, -m)
        else:
            up = angular_ladder_power(ctx, k, +1, m)
            down = angular_ladder_power(ctx, k, -1, m)
        x = multiply(up, ladder_power(ctx, "Ahat" if kind == "ccm" else "A", n, kind))
        y = multiply(ladder_power(ctx, "Ahatdag" if kind == "ccm" else "Adag", n, kind),
                     down)
        return x, y

    return _cached(ctx, ("runge_lenz_parts", k, kind), build)


def runge_lenz(ctx, k=1, kind="bertrand"):
    """The two Hermitian higher-order constants of motion (R+, R-).

    With beta = m/n the building block is (Lk+)^m (A)^n; in radial contexts
    the angular ladders are the formal shift generators, in cartesian ones
    the vector-valued ladders of component k.
    """
    def build():
        x, y = runge_lenz_parts(ctx, k, kind)
        rp = (x + y).scale(INV_SQRT2)
        rm = (x - y).scale(MINUS_I * INV_SQRT2)
        return rp, rm

    return _cached(ctx, ("runge_lenz", k, kind), build)


def scalar_integral_components(ctx, k=1, kind="bertrand"):
    """Clifford-grade components of (Lk+)^m (A)^n; each commutes with H."""
    ctx.require_mode("cartesian")
    m = ctx.beta_num
    n = ctx.beta_den
    x = multiply(angular_ladder_power(ctx, k, +1, m),
                 ladder_power(ctx, "A", n, kind))
    return x.gamma_grade_split()


def companion_scalar(ctx, steps=0):
    """G = 2 kappa (L/b)(L/b + hbar)(L/b + hbar/2)^2 - mu^2/2."""
    binv = K(mpq(1) / ctx.beta)
    hbar = _cv(ctx, "hbar")
    mu = _cv(ctx, "mu")
    kap = _cv(ctx, "kappa")
    if ctx.mode == "radial":
        Lb = spectral_symbol(ctx, steps).scale(binv)
        g = (kap * Lb * (Lb + hbar) * (Lb + hbar.scale(HALF)) ** 2).scale(kint(2)) \
            - (mu * mu).scale(HALF)
        return OperatorElement.from_coeff(g)
    ctx.require_mode("cartesian")
    Lb = _with_offset(ctx, angular_vector(ctx), steps).scale(binv)
    hbar_op = OperatorElement.from_coeff(hbar)
    prod = multiply(Lb, multiply(Lb + hbar_op,
                                 (Lb + hbar_op.scale(HALF)) ** 2))
    return (OperatorElement.from_coeff(kap) * prod).scale(kint(2)) \
        - OperatorElement.from_coeff((mu * mu).scale(HALF))


def curvature(N, beta, ctx=None):
    """Scalar curvature of the base space and of its winding deformation.

    Returns (R, R_beta) as coefficient functions of r in a polar context:
    R = -4 N (N-1) kappa and
    R_beta = (N-2)(N-1)(1 - 1/beta^2)(1 + kappa r^2)^2 / r^2 + R.
    """
    if ctx is None:
        ctx = polar_ctx(beta)
    one = Coeff.one(ctx)
    kap = _cv(ctx, "kappa")
    r = _cv(ctx, "r")
    flat = kap.scale(kint(-4 * N * (N - 1)))
    beta = mpq(beta)
    coef = K(mpq(N - 2) * mpq(N - 1) * (1 - 1 / (beta * beta)))
    curved = one + kap * r * r
    rb = (curved * curved / (r * r)).scale(coef) + flat
    return flat, rb
