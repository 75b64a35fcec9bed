"""Sparse multivariate polynomials over the exact scalar field.

Monomials are exponent tuples over the context's symbol list.  Exponents are
non-negative except for the Laurent phase units of reduced contexts and the
radical symbol r: where a context defines r^2 = rho (the sum of squared
positions), r is kept as a Laurent unit and the relation is applied lazily.
Arithmetic therefore works in the localised quotient ring

    Q(i, sqrt2)[x..][r, r^-1] / (r^2 - rho),

with `reduce_radical` producing the even/odd-split canonical image
(r-exponent 0 or 1, compensated by powers of rho) only where a caller needs
it: value-zero testing, canonical display, exact evaluation.  Keeping the
relation lazy is what makes large operator products cheap: coefficients
never expand their rho powers during multiplication.
"""

from __future__ import annotations

import heapq
from operator import add as _iadd, sub as _isub

from .scalars import K, ZERO, ONE, mpq


def _mono_mul(m1, m2):
    return tuple(map(_iadd, m1, m2))


def _grlex_key(m):
    return (sum(m), m)


def _merge_term(out, key, c):
    v = out.get(key)
    if v is None:
        out[key] = c
    else:
        v = v + c
        if v.is_zero:
            del out[key]
        else:
            out[key] = v


class Poly:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        # terms must be free of zero coefficients (syntactically)
        self.ctx = ctx
        self.terms = terms

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(ctx):
        return Poly(ctx, {})

    @staticmethod
    def const(ctx, c):
        c = K.of(c)
        if c.is_zero:
            return Poly(ctx, {})
        return Poly(ctx, {(0,) * ctx.nvars(): c})

    @staticmethod
    def var(ctx, name, exp=1, coeff=ONE):
        i = ctx.var(name)
        if exp < 0 and i not in ctx.signed_indices:
            raise ValueError("negative exponent for non-invertible symbol %r" % name)
        mono = tuple(exp if j == i else 0 for j in range(ctx.nvars()))
        return Poly(ctx, {mono: K.of(coeff)})

    @staticmethod
    def from_terms(ctx, terms):
        clean = {m: K.of(c) for m, c in terms.items() if not K.of(c).is_zero}
        return Poly(ctx, clean)

    # -- predicates ------------------------------------------------------------

    @property
    def is_zero(self):
        """Value-zero test (modulo the radical relation when one exists)."""
        if not self.terms:
            return True
        ri = self.ctx.radical_index
        if ri is None:
            return False
        lo = hi = 0
        for m in self.terms:
            e = m[ri]
            if e < lo:
                lo = e
            if e > hi:
                hi = e
        if lo >= 0 and hi <= 1:
            return False
        return not self.reduce_radical().terms

    @property
    def is_syntactically_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        if not self.terms:
            return True
        if len(self.terms) > 1:
            return False
        (m, _), = self.terms.items()
        return not any(m)

    def constant_value(self):
        if not self.terms:
            return ZERO
        (m, c), = self.terms.items()
        if any(m):
            raise ValueError("polynomial is not constant")
        return c

    def is_single_term(self):
        return len(self.terms) == 1

    def degree_in(self, idx):
        return max((m[idx] for m in self.terms), default=0)

    def uses(self, idx):
        return any(m[idx] for m in self.terms)

    def __bool__(self):
        return bool(self.terms)

    # -- the radical relation -----------------------------------------------------

    def reduce_radical(self):
        """Canonical image with r-exponents in {0, 1}.

        Negative powers are cleared first by multiplying through with an
        even power of the unit r; the result therefore equals the original
        times rho^k for some k >= 0, which preserves zero-ness and is
        divided back out by callers that need the exact value.
        """
        ri = self.ctx.radical_index
        if ri is None or not self.terms:
            return self
        lo = min(m[ri] for m in self.terms)
        shift = (-lo + 1) // 2 * 2 if lo < 0 else 0
        out = {}
        for m, c in self.terms.items():
            e = m[ri] + shift
            k, t = divmod(e, 2)
            if k == 0:
                _merge_term(out, m[:ri] + (t,) + m[ri + 1:], c)
                continue
            base = m[:ri] + (t,) + m[ri + 1:]
            rho_k = radical_square_pow(self.ctx, k)
            for m2, c2 in rho_k.terms.items():
                _merge_term(out, _mono_mul(base, m2), c * c2)
        return Poly(self.ctx, out)

    def radical_split(self):
        """(shift k, even part, odd part): self * r^(2k) = even + r * odd,
        with both parts free of the radical symbol (rho substituted in)."""
        ri = self.ctx.radical_index
        reduced = self.reduce_radical()
        lo = min((m[ri] for m in self.terms), default=0)
        shift = (-lo + 1) // 2 if lo < 0 else 0
        even = {}
        odd = {}
        for m, c in reduced.terms.items():
            if m[ri]:
                odd[m[:ri] + (0,) + m[ri + 1:]] = c
            else:
                even[m] = c
        return shift, Poly(self.ctx, even), Poly(self.ctx, odd)

    # -- ring operations ---------------------------------------------------------

    def __add__(self, o):
        if not isinstance(o, Poly):
            return NotImplemented
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for m, c in b.items():
            _merge_term(out, m, c)
        return Poly(self.ctx, out)

    def __sub__(self, o):
        return self + (-o)

    def __neg__(self):
        return Poly(self.ctx, {m: -c for m, c in self.terms.items()})

    def scale(self, c):
        c = K.of(c)
        if c.is_zero:
            return Poly(self.ctx, {})
        return Poly(self.ctx, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, o):
        if not isinstance(o, Poly):
            return NotImplemented
        a, b = self.terms, o.terms
        if not a or not b:
            return Poly(self.ctx, {})
        if len(a) > len(b):
            a, b = b, a
        if len(a) * len(b) >= 64:
            return self._mul_packed(a, b)
        out = {}
        get = out.get
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                key = tuple(map(_iadd, m1, m2))
                v = get(key)
                if v is None:
                    out[key] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v.is_zero:
                        del out[key]
                    else:
                        out[key] = v
        return Poly(self.ctx, out)

    def _mul_packed(self, a, b):
        """Product via packed-integer monomials (one machine add per pair)."""
        pack, unpack = _packers(self.ctx)
        pa = [(pack(m), c) for m, c in a.items()]
        pb = [(pack(m), c) for m, c in b.items()]
        out = {}
        get = out.get
        for m1, c1 in pa:
            for m2, c2 in pb:
                key = m1 + m2
                v = get(key)
                if v is None:
                    out[key] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v.is_zero:
                        del out[key]
                    else:
                        out[key] = v
        return Poly(self.ctx, {unpack(k): v for k, v in out.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(self.ctx, ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, o):
        if not (isinstance(o, Poly) and self.ctx is o.ctx):
            return NotImplemented
        if self.terms == o.terms:
            return True
        return (self - o).is_zero

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(sorted(self.terms.items(), key=lambda t: _grlex_key(t[0])))

    # -- leading data / division --------------------------------------------------

    def leading(self):
        m = max(self.terms, key=_grlex_key)
        return m, self.terms[m]

    def monic(self):
        """Scale to leading coefficient one; returns (monic, leading coeff)."""
        m, c = self.leading()
        if c == ONE:
            return self, ONE
        inv = c.inverse()
        return Poly(self.ctx, {mm: cc * inv for mm, cc in self.terms.items()}), c

    def exact_div(self, d):
        """Exact quotient self/d in the free Laurent ring, or None.

        Division does not use the radical relation, so it can miss
        quotients that exist only modulo r^2 - rho; callers treat it as an
        opportunistic simplification.
        """
        if d.is_syntactically_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return self
        signed = self.ctx.signed_indices
        dm, dc = d.leading()
        dinv = dc.inverse()
        n = dict(self.terms)
        heap = [(-sum(m), tuple(-e for e in m)) for m in n]
        heapq.heapify(heap)
        q = {}
        dd = d.terms
        pop = heapq.heappop
        push = heapq.heappush
        nget = n.get
        while heap:
            _, negm = pop(heap)
            m = tuple(-e for e in negm)
            c = nget(m)
            if c is None or c.is_zero:
                continue
            qm = tuple(map(_isub, m, dm))
            if any(e < 0 and i not in signed for i, e in enumerate(qm)):
                return None
            qc = c * dinv
            q[qm] = qc
            for m2, c2 in dd.items():
                key = tuple(map(_iadd, qm, m2))
                v = nget(key)
                if v is None:
                    nv = -(qc * c2)
                    if not nv.is_zero:
                        n[key] = nv
                        push(heap, (-sum(key), tuple(-e for e in key)))
                else:
                    v = v - qc * c2
                    if v.is_zero:
                        del n[key]
                    else:
                        n[key] = v
        if any(not c.is_zero for c in n.values()):
            return None
        return Poly(self.ctx, q)

    # -- calculus ------------------------------------------------------------------

    def deriv_plain(self, idx):
        """Formal partial derivative treating every symbol as independent."""
        out = {}
        for m, c in self.terms.items():
            e = m[idx]
            if e:
                key = m[:idx] + (e - 1,) + m[idx + 1:]
                _merge_term(out, key, c * K.of(e))
        return Poly(self.ctx, out)

    def deriv_position(self, idx):
        """d/dx_idx with the radical chain rule dr/dx = x r^{-1}."""
        ctx = self.ctx
        ri = ctx.radical_index
        out = {}
        for m, c in self.terms.items():
            e = m[idx]
            if e:
                key = m[:idx] + (e - 1,) + m[idx + 1:]
                _merge_term(out, key, c * K.of(e))
            if ri is not None and idx in ctx.position_indices:
                s = m[ri]
                if s:
                    key = list(m)
                    key[idx] += 1
                    key[ri] -= 2
                    _merge_term(out, tuple(key), c * K.of(s))
        return Poly(self.ctx, out)

    def deriv_phase(self, widx):
        """d/dphi on the half-angle unit at widx: w^e -> (i e / 2) w^e."""
        out = {}
        for m, c in self.terms.items():
            e = m[widx]
            if e:
                out[m] = c * K(mpq(0), mpq(e, 2))
        return Poly(self.ctx, out)

    # -- substitution / conjugation ---------------------------------------------------

    def substitute(self, idx, rep):
        """Replace the symbol at idx with the polynomial rep."""
        groups = {}
        for m, c in self.terms.items():
            e = m[idx]
            base = m[:idx] + (0,) + m[idx + 1:]
            groups.setdefault(e, {})[base] = c
        out = Poly(self.ctx, {})
        pows = {0: Poly.const(self.ctx, ONE)}
        maxe = max(groups)
        for e in range(1, maxe + 1):
            pows[e] = pows[e - 1] * rep
        for e, terms in groups.items():
            if e < 0:
                raise ValueError("cannot substitute into a negative exponent")
            out = out + Poly(self.ctx, dict(terms)) * pows[e]
        return out

    def conjugate(self):
        """Complex conjugation: i -> -i and phase units inverted."""
        laurent = self.ctx.laurent_indices
        out = {}
        for m, c in self.terms.items():
            if laurent:
                m = tuple(-e if i in laurent else e for i, e in enumerate(m))
            out[m] = c.conjugate()
        return Poly(self.ctx, out)

    def __repr__(self):
        from .printing import poly_str
        return poly_str(self)


_FIELD_BITS = 24


def _packers(ctx):
    """Pack/unpack closures mapping exponent tuples to single integers.

    Non-negative symbols occupy the low fields in symbol order; symbols
    that can go negative (phase units, the radical) sit in the topmost
    fields so their borrows never corrupt a lower field read.
    """
    got = ctx._cache.get("packers")
    if got is not None:
        return got
    nv = ctx.nvars()
    signed = sorted(ctx.signed_indices)
    plain = [i for i in range(nv) if i not in ctx.signed_indices]
    order = plain + signed           # field position by symbol index
    shifts = [0] * nv
    for pos, i in enumerate(order):
        shifts[i] = _FIELD_BITS * pos
    desc = sorted(range(nv), key=lambda i: -shifts[i])

    def pack(mono):
        out = 0
        for e, s in zip(mono, shifts):
            if e:
                out += e << s
        return out

    def unpack(x):
        es = [0] * nv
        for i in desc:
            s = shifts[i]
            e = x >> s
            es[i] = e
            x -= e << s
        return tuple(es)

    got = (pack, unpack)
    ctx._cache["packers"] = got
    return got


def radical_square(ctx):
    """The polynomial rho with r^2 = rho (sum of squared positions)."""
    nv = ctx.nvars()
    terms = {}
    for i in ctx.position_indices:
        mono = tuple(2 if j == i else 0 for j in range(nv))
        terms[mono] = ONE
    return Poly(ctx, terms)


def radical_square_pow(ctx, k):
    pows = ctx._rad_pows
    got = pows.get(k)
    if got is not None:
        return got
    with ctx._lock:
        got = pows.get(k)
        if got is not None:
            return got
        if not pows:
            pows[0] = Poly.const(ctx, ONE)
            pows[1] = radical_square(ctx)
        top = max(pows)
        for e in range(top + 1, k + 1):
            pows[e] = pows[e - 1] * pows[1]
        return pows[k]
