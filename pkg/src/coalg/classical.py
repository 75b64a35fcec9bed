"""Commuting counterpart: Poisson brackets, orbits, independence ranks.

Phase functions are coefficient functions over a classical context
(x1..xN, r, p1..pN, L, parameters).  The symbol L stands for the magnitude
of total angular momentum and satisfies L^2 = C (the classical Casimir);
`angular_split` reduces even powers of L so the higher-order constants of
motion split into a pair of honest rational phase functions.

Orbit integration works in the two-variable polar chart of the deformed
Coulomb Hamiltonian

    H = (1 + kappa r^2)^2 / 2 * (p_r^2 + p_theta^2 / (beta^2 r^2))
        - mu (1 - kappa r^2) / r

with an adaptive 8th-order Runge-Kutta scheme (DOP853) and dense output for
return-distance detection.
"""

from __future__ import annotations

import csv
import json
import math

from .coeff import Coeff
from .context import classical_ctx
from .errors import (InsufficientSpan, PoleEvaluation, SingularEncounter)
from .poly import Poly
from .scalars import HALF, I, INV_SQRT2, K, MINUS_I, ONE, ZERO, kint, krat, mpq

__all__ = [
    "classical_ctx", "poisson", "sl2_functions", "casimir_function",
    "hamiltonian_function", "ladder_function", "angular_ladder_function",
    "angular_split", "runge_lenz_split", "integral_set",
    "independence_rank", "independence_rank_sampled",
    "Trajectory", "OrbitParams", "integrate_orbit", "closure_test",
    "circular_momentum",
]


def _cv(ctx, name, exp=1):
    return Coeff.var(ctx, name, exp)


# -- Poisson structure ---------------------------------------------------------------


def poisson(f, g):
    """{f, g} = sum_i d_xi f d_pi g - d_xi g d_pi f."""
    f.ctx.require(g.ctx)
    ctx = f.ctx
    out = Coeff.zero(ctx)
    for i in range(1, ctx.N + 1):
        xi, pi = "x%d" % i, "p%d" % i
        out = (out + f.differentiate(xi) * g.differentiate(pi)
               - g.differentiate(xi) * f.differentiate(pi))
    return out


# -- catalog of phase functions ---------------------------------------------------------


def _stage(ctx, stage, reverse):
    n = ctx.N if stage is None else stage
    return range(ctx.N - n + 1, ctx.N + 1) if reverse else range(1, n + 1)


def sl2_functions(ctx, stage=None, reverse=False):
    """Classical dilation triple (Jm, Jp, J3) as phase functions."""
    idx = list(_stage(ctx, stage, reverse))
    if len(idx) == ctx.N:
        jm = _cv(ctx, "r", 2)
    else:
        jm = Coeff.zero(ctx)
        for i in idx:
            jm = jm + _cv(ctx, "x%d" % i, 2)
    jp = Coeff.zero(ctx)
    j3 = Coeff.zero(ctx)
    for i in idx:
        jp = jp + _cv(ctx, "p%d" % i, 2)
        j3 = j3 + _cv(ctx, "x%d" % i) * _cv(ctx, "p%d" % i)
    return jm, jp, j3


def casimir_function(ctx, stage=None, reverse=False):
    """Classical Casimir Jp Jm - J3^2 of the chosen stage."""
    jm, jp, j3 = sl2_functions(ctx, stage, reverse)
    return jp * jm - j3 * j3


def hamiltonian_function(ctx):
    """The deformed Coulomb Hamiltonian on the full phase space."""
    one = Coeff.one(ctx)
    kap = _cv(ctx, "kappa")
    mu = _cv(ctx, "mu")
    jm, jp, j3 = sl2_functions(ctx)
    beta2 = K(ctx.beta * ctx.beta)
    c = casimir_function(ctx)
    curved = one + kap * jm
    kin = (j3 * j3 + c.scale(beta2.inverse())) * _cv(ctx, "r", -2)
    return ((curved * curved * kin).scale(HALF)
            - mu * (one - kap * jm) * _cv(ctx, "r", -1))


def ladder_function(ctx):
    """Classical spectral ladder A as a polynomial in the symbol L."""
    one = Coeff.one(ctx)
    kap = _cv(ctx, "kappa")
    mu = _cv(ctx, "mu")
    jm, jp, j3 = sl2_functions(ctx)
    binv = K(mpq(1) / ctx.beta)
    Lb = _cv(ctx, "L").scale(binv)
    inv_r = _cv(ctx, "r", -1)
    return (-(Lb * (one + kap * jm) * inv_r * j3)
            - Lb * Lb * (one - kap * jm) * inv_r * I
            + mu * I).scale(INV_SQRT2)


def angular_ladder_function(ctx, k, sign):
    """Classical vector angular ladder for component k."""
    jm, jp, j3 = sl2_functions(ctx)
    xk = _cv(ctx, "x%d" % k)
    pk = _cv(ctx, "p%d" % k)
    inv_r = _cv(ctx, "r", -1)
    L = _cv(ctx, "L")
    bracket = xk * j3 - jm * pk
    if sign > 0:
        return L * xk * inv_r + bracket * inv_r * I
    return L * xk * inv_r - bracket * inv_r * I


def angular_split(f, ctx):
    """Split a polynomial in L into (even, odd) parts with L^2 -> Casimir.

    Returns (a, b) with f = a + L*b after the reduction; a and b are
    L-free rational phase functions.
    """
    c = casimir_function(ctx)
    li = ctx.var("L")
    even = Coeff.zero(ctx)
    odd = Coeff.zero(ctx)
    groups = {}
    for mono, coeff in f.num.terms.items():
        e = mono[li]
        base = mono[:li] + (0,) + mono[li + 1:]
        groups.setdefault(e, {})[base] = coeff
    for e, terms in groups.items():
        part = Coeff(ctx, Poly(ctx, dict(terms)), f.den)
        k, rem = divmod(e, 2)
        piece = part * c ** k if k else part
        if rem:
            odd = odd + piece
        else:
            even = even + piece
    return even, odd


def runge_lenz_split(ctx, k=1):
    """(even, odd) parts of (Lk+)^m A^n; each Poisson-commutes with H."""
    m = ctx.beta_num
    n = ctx.beta_den
    x = angular_ladder_function(ctx, k, +1) ** m * ladder_function(ctx) ** n
    return angular_split(x, ctx)


def integral_set(ctx, k=1, which="auto"):
    """H, intermediate Casimirs of both embeddings, and a Runge-Lenz part.

    The last entry is a real combination of the odd component of the ladder
    product: a rational higher-order constant of motion.  2N - 1 functions
    in total.
    """
    fs = [hamiltonian_function(ctx)]
    for stage in range(2, ctx.N + 1):
        fs.append(casimir_function(ctx, stage))
    for stage in range(2, ctx.N):
        fs.append(casimir_function(ctx, stage, reverse=True))
    even, odd = runge_lenz_split(ctx, k)
    conj = odd.conjugate()
    re = (odd + conj).scale(HALF)
    im = (odd - conj).scale(MINUS_I * HALF)
    if which == "auto":
        # one of the two real combinations can vanish identically
        # (the ladder product may be purely imaginary); pick the live one
        fs.append(im if not im.is_zero else re)
    else:
        fs.append(re if which == "re" else im)
    return fs


# -- exact rank over Q(i, sqrt2, sqrt(rho)) -----------------------------------------------


def _sqrt_class(rho):
    """Classify sqrt(rho) over Q(sqrt2): rational, sqrt2-multiple, or new."""
    num = rho.numerator * rho.denominator
    root = math.isqrt(int(num))
    if root * root == num:
        return K(mpq(root, rho.denominator))
    if num % 2 == 0:
        half = num // 2
        root = math.isqrt(int(half))
        if root * root == half:
            return K(mpq(0), mpq(0), mpq(root, rho.denominator))
    return None


class _Ext:
    """Arithmetic in K + K*sqrt(rho) for a fixed non-square rational rho."""

    __slots__ = ("rho",)

    def __init__(self, rho):
        self.rho = K(rho)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def sub(self, x, y):
        return (x[0] - y[0], x[1] - y[1])

    def mul(self, x, y):
        return (x[0] * y[0] + self.rho * x[1] * y[1],
                x[0] * y[1] + x[1] * y[0])

    def inv(self, x):
        nrm = x[0] * x[0] - self.rho * x[1] * x[1]
        if nrm.is_zero:
            raise ZeroDivisionError("zero norm in quadratic extension")
        ninv = nrm.inverse()
        return (x[0] * ninv, -(x[1] * ninv))

    def is_zero(self, x):
        return x[0].is_zero and x[1].is_zero


def _eval_ext(coeff, vals, ext, rfid_vals):
    """Evaluate a Coeff at K-valued bindings with r adjoined as sqrt(rho)."""
    ctx = coeff.ctx
    ri = ctx.radical_index

    r_val = (ZERO, ONE)
    r_inv = ext.inv(r_val)

    def poly_val(p):
        tot = (ZERO, ZERO)
        for mono, c in p.terms.items():
            acc = (c, ZERO)
            for i, e in enumerate(mono):
                if not e:
                    continue
                if i == ri:
                    step = r_val if e > 0 else r_inv
                    for _ in range(abs(e)):
                        acc = ext.mul(acc, step)
                else:
                    acc = ext.mul(acc, (vals[i] ** e, ZERO))
            tot = ext.add(tot, acc)
        return tot

    num = poly_val(coeff.num)
    for fid, e in coeff.den:
        fv = rfid_vals.get(fid)
        if fv is None:
            fv = poly_val(ctx._factors[fid])
            rfid_vals[fid] = fv
        if ext.is_zero(fv):
            raise PoleEvaluation("denominator vanished at sample point")
        for _ in range(e):
            num = ext.mul(num, ext.inv(fv))
    return num


def _rank_ext(rows, ext):
    """Exact rank of a matrix with entries in the quadratic extension."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for rr in range(rank, len(rows)):
            if not ext.is_zero(rows[rr][col]):
                piv = rr
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ext.inv(rows[rank][col])
        for rr in range(rank + 1, len(rows)):
            if ext.is_zero(rows[rr][col]):
                continue
            factor = ext.mul(rows[rr][col], inv)
            rows[rr] = [ext.sub(a, ext.mul(factor, b))
                        for a, b in zip(rows[rr], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def independence_rank(functions, point):
    """Exact Jacobian rank of phase functions at a rational phase point.

    point maps x1..xN, p1..pN (and optionally parameters) to exact
    rationals.  The radical r = sqrt(sum x^2) is adjoined symbolically, so
    no floating point is involved.  Raises PoleEvaluation when the point
    hits a pole; callers resample.
    """
    ctx = functions[0].ctx
    vals = [None] * ctx.nvars()
    for name, v in point.items():
        vals[ctx.var(name)] = v if isinstance(v, K) else K(mpq(v))
    for name in ("kappa", "mu"):
        if vals[ctx.var(name)] is None:
            vals[ctx.var(name)] = ONE
    rho = ZERO
    for i in ctx.position_indices:
        if vals[i] is None:
            raise PoleEvaluation("phase point must bind all positions")
        rho = rho + vals[i] * vals[i]
    if not rho.is_gaussian or rho.b:
        raise PoleEvaluation("positions must be rational")
    direct = _sqrt_class(rho.a)
    ext = _Ext(rho.a)
    grad_vars = ["x%d" % i for i in range(1, ctx.N + 1)] + \
                ["p%d" % i for i in range(1, ctx.N + 1)]
    rfid_vals = {}
    rows = []
    for f in functions:
        row = []
        for v in grad_vars:
            df = f.differentiate(v)
            val = _eval_ext(df, vals, ext, rfid_vals)
            if direct is not None:
                # sqrt(rho) lies in K itself; collapse the pair
                val = (val[0] + direct * val[1], ZERO)
            row.append(val)
        rows.append(row)
    return _rank_ext(rows, ext)


def independence_rank_sampled(functions, npoints=5, seed=7, low=1, high=9):
    """Max Jacobian rank over several random small-rational phase points."""
    import random
    rng = random.Random(seed)
    ctx = functions[0].ctx
    best = 0
    tries = 0
    while tries < npoints:
        point = {}
        for i in range(1, ctx.N + 1):
            point["x%d" % i] = rng.randint(low, high)
            point["p%d" % i] = rng.randint(low, high) * (1 if rng.random() < .5 else -1)
        try:
            best = max(best, independence_rank(functions, point))
        except (PoleEvaluation, ZeroDivisionError):
            continue
        tries += 1
    return best


# -- orbit integration ----------------------------------------------------------------


class OrbitParams:
    """Numeric parameters of the polar-chart Hamiltonian."""

    __slots__ = ("kappa", "mu", "beta")

    def __init__(self, kappa, mu, beta):
        self.kappa = float(kappa)
        self.mu = float(mu)
        self.beta = mpq(beta)
        if self.beta <= 0:
            raise ValueError("beta must be positive")


class Trajectory:
    """Sampled orbit with conserved-quantity tracking and closure records."""

    def __init__(self, params, t, states, integrals, crossings, radial_periods):
        self.params = params
        self.t = t
        self.states = states            # columns r, theta, p_r, p_theta
        self.integrals = integrals      # dict name -> array
        self.crossings = crossings      # list of (rev, time, return_distance)
        self.radial_periods = radial_periods

    def drift(self, name):
        """Spread of a conserved quantity relative to its natural scale.

        The higher-order integral oscillates around a value that can sit
        at zero, so it is normalised by the modulus of the underlying
        ladder product instead of by itself.
        """
        vals = self.integrals[name]
        if name == "Rplus" and "Rscale" in self.integrals:
            scale = max(1.0, float(max(self.integrals["Rscale"])))
        else:
            scale = max(1.0, float(max(abs(v) for v in vals)))
        return float(max(vals) - min(vals)) / scale

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "r", "theta", "p_r", "p_theta", "H", "ptheta", "Rplus"])
            for i, t in enumerate(self.t):
                r, th, pr, pth = (self.states[j][i] for j in range(4))
                w.writerow([t, r, th, pr, pth,
                            self.integrals["H"][i], self.integrals["ptheta"][i],
                            self.integrals["Rplus"][i]])

    def closure_summary(self, tol=1e-6):
        closed, revs, dist = closure_test(self, tol)
        return {
            "kappa": self.params.kappa,
            "mu": self.params.mu,
            "beta": [int(self.params.beta.numerator), int(self.params.beta.denominator)],
            "closed": closed,
            "revolutions": revs,
            "return_distance": dist,
            "radial_periods": self.radial_periods,
            "drift": {k: self.drift(k) for k in ("H", "ptheta", "Rplus")},
        }

    def closure_json(self, path, tol=1e-6):
        with open(path, "w") as fh:
            json.dump(self.closure_summary(tol), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _hamiltonian_rhs(params):
    kap, mu, b2 = params.kappa, params.mu, float(params.beta) ** 2

    def rhs(t, y):
        r, th, pr, pth = y
        curved = 1.0 + kap * r * r
        c2 = curved * curved
        dr = c2 * pr
        dth = c2 * pth / (b2 * r * r)
        dT_dr = (2.0 * kap * r * curved * (pr * pr + pth * pth / (b2 * r * r))
                 - c2 * pth * pth / (b2 * r ** 3))
        dV_dr = mu * (1.0 / (r * r) + kap)
        dpr = -(dT_dr + dV_dr)
        return [dr, dth, dpr, 0.0]

    return rhs


def energy(params, r, pr, pth):
    kap, mu = params.kappa, params.mu
    b2 = float(params.beta) ** 2
    curved = 1.0 + kap * r * r
    return (curved * curved * 0.5 * (pr * pr + pth * pth / (b2 * r * r))
            - mu * (1.0 - kap * r * r) / r)


def circular_momentum(params, r0):
    """p_theta putting an orbit of radius r0 at the effective minimum."""
    kap, mu = params.kappa, params.mu
    val = mu * float(params.beta) ** 2 * r0 / (1.0 - kap * r0 * r0)
    if val <= 0:
        raise ValueError("no circular orbit at r0 = %r" % r0)
    return math.sqrt(val)


def _ladder_value(params, r, pr, pth):
    kap, mu = params.kappa, params.mu
    lb = pth / float(params.beta)
    return (-(lb * (1.0 + kap * r * r) * pr)
            - 1j * (lb * lb * (1.0 / r - kap * r) - mu)) / math.sqrt(2.0)


def runge_lenz_value(params, r, th, pr, pth):
    """sqrt2 * Re(e^{i m theta} A^n): the classical higher-order integral."""
    m, n = int(params.beta.numerator), int(params.beta.denominator)
    a = _ladder_value(params, r, pr, pth)
    return math.sqrt(2.0) * ((a ** n) * complex(math.cos(m * th), math.sin(m * th))).real


def runge_lenz_scale(params, r, pr, pth):
    """Natural magnitude sqrt2 |A|^n of the higher-order integral."""
    n = int(params.beta.denominator)
    return math.sqrt(2.0) * abs(_ladder_value(params, r, pr, pth)) ** n


def integrate_orbit(params, initial=None, revolutions=16, rtol=1e-12, atol=1e-12,
                    samples=4000):
    """Integrate the polar-chart flow and record closure candidates.

    initial defaults to r=1, p_r=0, p_theta = 0.8 * circular value (bounded,
    non-circular).  Integration stops after the requested number of full
    revolutions of the polar angle; a metric singularity raises
    SingularEncounter carrying the partial trajectory.
    """
    from scipy.integrate import solve_ivp
    from scipy.optimize import brentq

    if initial is None:
        pth = 0.8 * circular_momentum(params, 1.0)
        initial = (1.0, 0.0, 0.0, pth)
    r0, th0, pr0, pth0 = (float(v) for v in initial)
    if pth0 == 0.0:
        raise ValueError("need nonzero angular momentum for revolution counting")
    rhs = _hamiltonian_rhs(params)
    sign = 1.0 if pth0 > 0 else -1.0
    span = 2.0 * math.pi * (revolutions + 0.25)

    def angle_done(t, y):
        return sign * (y[1] - th0) - span

    angle_done.terminal = True

    def singular_metric(t, y):
        return 1.0 + params.kappa * y[0] * y[0] - 1e-9

    singular_metric.terminal = True

    def singular_origin(t, y):
        return y[0] - 1e-9

    singular_origin.terminal = True

    # rough time scale from the angular speed at the initial point
    w0 = abs((1.0 + params.kappa * r0 * r0) ** 2 * pth0
             / (float(params.beta) ** 2 * r0 * r0))
    horizon = span / w0 * 8.0
    sol = solve_ivp(rhs, (0.0, horizon), [r0, th0, pr0, pth0], method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True,
                    events=[angle_done, singular_metric, singular_origin])
    tend = sol.t[-1]

    def angle(t):
        return sign * (sol.sol(t)[1] - th0)

    total = angle(tend)
    crossings = []
    k = 1
    while 2.0 * math.pi * k <= total:
        target = 2.0 * math.pi * k
        tk = brentq(lambda t, target=target: angle(t) - target,
                    0.0, tend, xtol=1e-13 * max(1.0, tend))
        rk, _, prk, _ = sol.sol(tk)
        dist = math.hypot(rk - r0, prk - pr0)
        crossings.append((k, float(tk), float(dist)))
        k += 1

    ts = [tend * i / samples for i in range(samples + 1)]
    states = [[], [], [], []]
    H_vals, pth_vals, rl_vals, sc_vals = [], [], [], []
    perihelia = 0
    prev_pr = None
    for t in ts:
        r, th, pr, pth = sol.sol(t)
        for j, v in enumerate((r, th, pr, pth)):
            states[j].append(float(v))
        H_vals.append(energy(params, r, pr, pth))
        pth_vals.append(float(pth))
        rl_vals.append(runge_lenz_value(params, r, th, pr, pth))
        sc_vals.append(runge_lenz_scale(params, r, pr, pth))
        if prev_pr is not None and prev_pr < 0.0 <= pr:
            perihelia += 1
        prev_pr = pr
    traj = Trajectory(params, ts, states,
                      {"H": H_vals, "ptheta": pth_vals, "Rplus": rl_vals,
                       "Rscale": sc_vals},
                      crossings, perihelia)
    hit_singularity = any(len(te) for te in sol.t_events[1:])
    if hit_singularity and len(crossings) < revolutions:
        raise SingularEncounter("flow reached a metric singularity", partial=traj)
    return traj


def closure_test(traj, tol=1e-6, revolutions=None):
    """Smallest revolution count whose return distance is below tol."""
    if revolutions is not None and len(traj.crossings) < revolutions:
        raise InsufficientSpan("trajectory spans %d revolutions, need %d"
                               % (len(traj.crossings), revolutions))
    if not traj.crossings:
        raise InsufficientSpan("trajectory never completes a revolution")
    for rev, t, dist in traj.crossings:
        if dist < tol:
            return True, rev, dist
    best = min(c[2] for c in traj.crossings)
    return False, 0, best