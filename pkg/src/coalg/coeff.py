"""Coefficient functions: exact rational functions in a model context.

A CoefficientFunction is numerator polynomial / product of registered monic
denominator factors.  Internally the radical relation r^2 = rho is kept
lazy (see coalg.poly): r is a Laurent unit, so 1/r and 1/rho are plain
monomials and the hot arithmetic paths never expand rho powers.  The
canonical form of the contract -- numerator with r-exponent 0 or 1,
radical-free denominators, reduced fractions -- is produced by
``normalize()`` and used for display, exact evaluation and reporting.

Zero testing (`is_zero`) is value-based: it reduces the numerator against
the radical relation, so operator equality stays decidable and exact.
"""

from __future__ import annotations

import math

from .errors import (DegenerateDenominator, PoleEvaluation, RadicalMismatch,
                     UnsupportedDerivative)
from .poly import Poly, radical_square, radical_square_pow
from .scalars import K, ONE, ZERO, mpq


def _register_factor(ctx, poly):
    """Intern a monic factor polynomial, returning its id."""
    key = poly.key()
    fid = ctx._factor_ids.get(key)
    if fid is not None:
        return fid
    with ctx._lock:
        fid = ctx._factor_ids.get(key)
        if fid is None:
            fid = len(ctx._factors)
            ctx._factors.append(poly)
            ctx._factor_ids[key] = fid
    return fid


def _factor_pow(ctx, fid, k):
    if k == 0:
        return Poly.const(ctx, ONE)
    if k == 1:
        return ctx._factors[fid]
    got = ctx._factor_pows.get((fid, k))
    if got is None:
        got = ctx._factors[fid] ** k
        with ctx._lock:
            ctx._factor_pows[(fid, k)] = got
    return got


def _den_expand(ctx, den):
    out = Poly.const(ctx, ONE)
    for fid, e in den:
        out = out * _factor_pow(ctx, fid, e)
    return out


def _merge_dens(d1, d2):
    out = dict(d1)
    for fid, e in d2:
        out[fid] = out.get(fid, 0) + e
    return tuple(sorted(out.items()))


class Coeff:
    __slots__ = ("ctx", "num", "den", "_dcache", "_zero")

    def __init__(self, ctx, num, den=()):
        self.ctx = ctx
        self.num = num
        self.den = den
        self._dcache = None
        self._zero = None

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero(ctx):
        return Coeff(ctx, Poly.zero(ctx))

    @staticmethod
    def const(ctx, c):
        return Coeff(ctx, Poly.const(ctx, c))

    @staticmethod
    def one(ctx):
        return Coeff(ctx, Poly.const(ctx, ONE))

    @staticmethod
    def var(ctx, name, exp=1, coeff=ONE):
        if exp >= 0 or ctx.var(name) in ctx.signed_indices:
            return Coeff(ctx, Poly.var(ctx, name, exp, coeff))
        return Coeff.const(ctx, coeff) / Coeff(ctx, Poly.var(ctx, name, -exp))

    @staticmethod
    def from_poly(p):
        return Coeff(p.ctx, p)

    # -- predicates --------------------------------------------------------------

    @property
    def is_zero(self):
        z = self._zero
        if z is None:
            z = self._zero = self.num.is_zero
        return z

    @property
    def is_constant(self):
        return not self.den and self.num.is_constant

    def constant_value(self):
        if self.den:
            raise ValueError("coefficient has a denominator")
        return self.num.constant_value()

    def __bool__(self):
        return not self.is_zero

    # -- normalisation -----------------------------------------------------------

    def _reduced(self):
        """Peel denominator factors that exactly divide the numerator."""
        if not self.den or self.num.is_syntactically_zero:
            if self.num.is_syntactically_zero and self.den:
                return Coeff(self.ctx, self.num)
            return self
        num = self.num
        den = []
        changed = False
        for fid, e in self.den:
            f = self.ctx._factors[fid]
            while e > 0:
                q = num.exact_div(f)
                if q is None:
                    break
                num = q
                e -= 1
                changed = True
            if e:
                den.append((fid, e))
        if not changed:
            return self
        return Coeff(self.ctx, num, tuple(den))

    def normalize(self):
        """Contract canonical form: numerator r-exponent in {0, 1}, all
        denominator factors radical-free, fraction reduced."""
        ctx = self.ctx
        ri = ctx.radical_index
        c = self._reduced()
        if ri is None:
            return c
        num = c.num
        needs = False
        if num.terms:
            lo = min(m[ri] for m in num.terms)
            hi = max(m[ri] for m in num.terms)
            needs = lo < 0 or hi > 1
        else:
            lo = 0
        if not needs and not any(ctx._factors[fid].uses(ri) for fid, _ in c.den):
            return c
        shift = (-lo + 1) // 2 if lo < 0 else 0
        reduced = num.reduce_radical()       # equals num * rho^shift
        out = Coeff(ctx, reduced)
        if shift:
            out = out / Coeff(ctx, radical_square_pow(ctx, shift))
        for fid, e in c.den:
            f = ctx._factors[fid]
            if f.uses(ri):
                f = f.reduce_radical()
            for _ in range(e):
                out = out / Coeff(ctx, f)
        return out

    # -- arithmetic -------------------------------------------------------------------

    def __add__(self, o):
        if not isinstance(o, Coeff):
            return NotImplemented
        self.ctx.require(o.ctx)
        if self.den == o.den:
            return Coeff(self.ctx, self.num + o.num, self.den)
        common = dict(self.den)
        for fid, e in o.den:
            common[fid] = max(common.get(fid, 0), e)
        mine = dict(self.den)
        theirs = dict(o.den)
        n1 = self.num
        n2 = o.num
        for fid, e in common.items():
            d1 = e - mine.get(fid, 0)
            d2 = e - theirs.get(fid, 0)
            if d1:
                n1 = n1 * _factor_pow(self.ctx, fid, d1)
            if d2:
                n2 = n2 * _factor_pow(self.ctx, fid, d2)
        return Coeff(self.ctx, n1 + n2, tuple(sorted(common.items())))

    def __sub__(self, o):
        return self + (-o)

    def __neg__(self):
        return Coeff(self.ctx, -self.num, self.den)

    def scale(self, c):
        return Coeff(self.ctx, self.num.scale(c), self.den)

    def __mul__(self, o):
        if not isinstance(o, Coeff):
            if isinstance(o, K):
                return self.scale(o)
            return NotImplemented
        self.ctx.require(o.ctx)
        if not self.den and not o.den:
            return Coeff(self.ctx, self.num * o.num)
        return Coeff(self.ctx, self.num * o.num,
                     _merge_dens(self.den, o.den))

    def __truediv__(self, o):
        if not isinstance(o, Coeff):
            return NotImplemented
        self.ctx.require(o.ctx)
        if o.is_zero:
            raise DegenerateDenominator("division by zero coefficient")
        num = self.num * _den_expand(self.ctx, o.den)
        return _divide_by_poly(Coeff(self.ctx, num, self.den), o.num)

    def inverse(self):
        return Coeff.one(self.ctx) / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = Coeff.one(self.ctx)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, Coeff):
            return NotImplemented
        if self.ctx is not o.ctx:
            return False
        if self.den == o.den and self.num.terms == o.num.terms:
            return True
        return (self - o).is_zero

    def __hash__(self):
        return hash((self.num.key(), self.den))

    # -- calculus -----------------------------------------------------------------

    def differentiate(self, direction):
        """Partial derivative along a differentiation direction name."""
        spec = self.ctx.deriv_specs.get(direction)
        if spec is None:
            raise UnsupportedDerivative(
                "%r is not a differentiation direction of the %s context"
                % (direction, self.ctx.mode))
        cache = self._dcache
        if cache is None:
            cache = self._dcache = {}
        got = cache.get(direction)
        if got is not None:
            return got
        kind, idx = spec
        if kind == "phase":
            out = Coeff(self.ctx, self.num.deriv_phase(idx), self.den)
        else:
            out = self._diff_var(idx)
        cache[direction] = out
        return out

    def _diff_var(self, idx):
        ctx = self.ctx
        dnum = self.num.deriv_position(idx)
        out = Coeff(ctx, dnum, self.den)
        for fid, e in self.den:
            df = ctx._factors[fid].deriv_position(idx)
            if df.is_syntactically_zero:
                continue
            piece_num = self.num.scale(K.of(-e)) * df
            piece_den = _merge_dens(self.den, ((fid, 1),))
            out = out + Coeff(ctx, piece_num, piece_den)
        return out

    # -- substitution -----------------------------------------------------------------

    def shift_spectral(self, amount):
        """Substitute L -> L + amount*hbar (amount an exact rational)."""
        ctx = self.ctx
        amount = mpq(amount)
        if not amount:
            return self
        li = ctx.index.get("L")
        if li is None:
            return self
        hi = ctx.var("hbar")
        rep = Poly.from_terms(ctx, {
            tuple(1 if j == li else 0 for j in range(ctx.nvars())): ONE,
            tuple(1 if j == hi else 0 for j in range(ctx.nvars())): K(amount),
        })
        return self.substitute_var("L", rep)

    def substitute_var(self, name, rep):
        """Substitute a symbol by a polynomial or exact constant."""
        ctx = self.ctx
        idx = ctx.var(name)
        if not isinstance(rep, Poly):
            rep = Poly.const(ctx, K.of(rep))
        if not self.num.uses(idx) and not any(
                ctx._factors[fid].uses(idx) for fid, _ in self.den):
            return self
        num = self.num.substitute(idx, rep)
        out = Coeff(ctx, num)
        for fid, e in self.den:
            f = ctx._factors[fid].substitute(idx, rep)
            for _ in range(e):
                out = out / Coeff(ctx, f)
        return out

    def conjugate(self):
        out = Coeff(self.ctx, self.num.conjugate())
        for fid, e in self.den:
            f = self.ctx._factors[fid].conjugate()
            for _ in range(e):
                out = out / Coeff(self.ctx, f)
        return out

    # -- evaluation ----------------------------------------------------------------

    def used_indices(self):
        used = set()
        for m in self.num.terms:
            used.update(i for i, e in enumerate(m) if e)
        for fid, _ in self.den:
            for m in self.ctx._factors[fid].terms:
                used.update(i for i, e in enumerate(m) if e)
        return used

    def evaluate(self, bindings, radical_tol=1e-9):
        """Evaluate at symbol bindings; exact K when all bindings are exact.

        bindings maps symbol names to exact rationals / K values or floats /
        complex.  In radical contexts a bound r must satisfy r^2 = rho; in
        float mode an unbound r is derived from the positions.
        """
        ctx = self.ctx
        vals, exact = _binding_values(ctx, bindings)
        _resolve_radical(ctx, vals, exact, radical_tol)
        used = self.used_indices()
        for i in sorted(used):
            if vals[i] is None:
                raise KeyError("missing binding for symbol %r" % ctx.var_names[i])
        try:
            num = _poly_eval(self.num, vals, exact)
            den = ONE if exact else complex(1.0)
            for fid, e in self.den:
                fv = _poly_eval(ctx._factors[fid], vals, exact)
                if (fv.is_zero if exact else fv == 0):
                    raise PoleEvaluation("denominator factor vanished at binding")
                for _ in range(e):
                    den = den * fv
            if exact and den.is_zero:
                raise PoleEvaluation("denominator vanished at binding")
            return num / den
        except ZeroDivisionError:
            raise PoleEvaluation("evaluation hit a pole") from None

    def __repr__(self):
        from .printing import coeff_str
        return coeff_str(self)


def _divide_by_poly(c, d):
    """c / d for a polynomial divisor, preserving representability."""
    ctx = c.ctx
    if d.is_zero:
        raise DegenerateDenominator("division by zero polynomial")
    if d.is_constant:
        return Coeff(ctx, c.num.scale(d.constant_value().inverse()), c.den)
    ri = ctx.radical_index
    if ri is not None and d.uses(ri):
        if d.is_single_term():
            pass  # handled below: r powers are units
        else:
            # d * r^(2t) = E + r O with E, O radical-free; conjugate by E - r O
            shift, even, odd = d.radical_split()
            if odd.is_syntactically_zero and shift == 0 and not even.uses(ri):
                return _divide_by_poly(c, even)
            odd_r = Poly(ctx, {m[:ri] + (1,) + m[ri + 1:]: cc
                               for m, cc in odd.terms.items()})
            conj = even - odd_r
            d2 = even * even - (odd * odd) * radical_square(ctx)
            if d2.is_zero:
                raise DegenerateDenominator("denominator annihilated by conjugation")
            num = c.num * conj
            if shift:
                num = num * Poly.var(ctx, ctx.var_names[ri], 2 * shift)
            return _divide_by_poly(Coeff(ctx, num, c.den), d2)
    if d.is_single_term():
        (mono, dc), = d.terms.items()
        inv_sc = dc.inverse()
        extra = {}
        num = c.num
        # signed symbols (phase units, the radical) are units; other
        # symbols become denominator factors
        shift = [0] * ctx.nvars()
        for i, e in enumerate(mono):
            if not e:
                continue
            if i in ctx.signed_indices:
                shift[i] = -e
            else:
                fid = _register_factor(ctx, Poly.var(ctx, ctx.var_names[i]))
                extra[fid] = extra.get(fid, 0) + e
        if any(shift):
            num = Poly(ctx, {tuple(a + b for a, b in zip(m, shift)): cc
                             for m, cc in num.terms.items()})
        den = _merge_dens(c.den, tuple(extra.items()))
        return Coeff(ctx, num.scale(inv_sc), den)._reduced()
    monic, lead = d.monic()
    num = c.num.scale(lead.inverse()) if lead != ONE else c.num
    # peel off known factors first
    factors = {}
    rest = monic
    for fid, f in enumerate(list(ctx._factors)):
        if f.is_constant:
            continue
        while True:
            q = rest.exact_div(f)
            if q is None:
                break
            rest = q
            factors[fid] = factors.get(fid, 0) + 1
            if rest.is_constant:
                break
        if rest.is_constant:
            break
    if rest.is_constant:
        cv = rest.constant_value()
        if not cv == ONE:
            num = num.scale(cv.inverse())
    else:
        rest_monic, lead2 = rest.monic()
        if lead2 != ONE:
            num = num.scale(lead2.inverse())
        fid = _register_factor(ctx, rest_monic)
        factors[fid] = factors.get(fid, 0) + 1
    den = _merge_dens(c.den, tuple(factors.items()))
    return Coeff(ctx, num, den)._reduced()


def _binding_values(ctx, bindings):
    """Resolve bindings to a per-symbol value list; returns (values, exact)."""
    exact = True
    vals = [None] * ctx.nvars()
    for name, v in bindings.items():
        idx = ctx.var(name)
        if isinstance(v, K):
            vals[idx] = v
        elif isinstance(v, (float, complex)):
            vals[idx] = complex(v)
            exact = False
        else:
            vals[idx] = K(mpq(v))
    if not exact:
        vals = [(_to_c(v) if v is not None else None) for v in vals]
    return vals, exact


def _resolve_radical(ctx, vals, exact, radical_tol):
    """Derive or validate the radical binding r^2 = rho in place."""
    ri = ctx.radical_index
    if ri is None:
        return
    pos = [vals[i] for i in ctx.position_indices]
    if any(v is None for v in pos):
        return  # nothing to validate against
    rv = vals[ri]
    if exact:
        rho = ZERO
        for v in pos:
            rho = rho + v * v
        if rv is None:
            return  # only an error if r is actually used (caught later)
        if not (rv * rv - rho).is_zero:
            raise RadicalMismatch("r binding does not satisfy r^2 = sum of squares")
    else:
        rho = sum((v * v for v in pos), complex(0.0))
        if rv is None:
            vals[ri] = complex(math.sqrt(rho.real))
            return
        scale = max(1.0, abs(rho))
        if abs(rv * rv - rho) > radical_tol * scale:
            raise RadicalMismatch("r binding does not satisfy r^2 = sum of squares")


def _to_c(v):
    if isinstance(v, K):
        return v.to_complex()
    return complex(v)


def _poly_eval(p, vals, exact):
    if exact:
        total = ZERO
        for m, c in p.terms.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    base = vals[i]
                    term = term * (base ** e if e > 0 else base.inverse() ** (-e))
            total = total + term
        return total
    total = complex(0.0)
    for m, c in p.terms.items():
        term = c.to_complex()
        for i, e in enumerate(m):
            if e:
                term *= vals[i] ** e
        total += term
    return total
