"""Noncommutative operator kernel: normal ordering and friends.

An operator element is a finite sum of terms

    coefficient(x, r, L, params) * gamma word * shift power * derivative multi-index

kept in normal order (coefficients left, derivatives right).  Products are
normal-ordered with

* the Leibniz rule   d_i o f = f o d_i + (d_i f),
* Clifford relations gamma_i gamma_j = -gamma_j gamma_i (i != j), gamma_i^2 = 1,
* the spectral shift rule  S^s o f(L) = f(L - s*hbar) o S^s  where S^s means
  (L+)^s for s > 0 and (L-)^(-s) for s < 0, with L+ L- = L- L+ = 1.

Equality of operators as maps on the shared test-function space is equality
of normal forms, so `a == b` and `is_zero` are decidable and exact.
"""

from __future__ import annotations

from math import comb
from operator import add as _tadd

from .coeff import Coeff
from .errors import (DegenerateWeight, ModeMismatch, UnsupportedRepresentation,
                     UnsupportedTestFunction)
from .poly import Poly
from .scalars import I, K, MINUS_I, ONE, ZERO, kint


def gamma_mul(w1, w2):
    """Product of two strictly increasing Clifford words -> (word, sign)."""
    out = list(w1)
    sign = 1
    for g in w2:
        i = len(out)
        while i > 0 and out[i - 1] > g:
            i -= 1
        passes = len(out) - i
        if passes & 1:
            sign = -sign
        if i > 0 and out[i - 1] == g:
            out.pop(i - 1)
        else:
            out.insert(i, g)
    return tuple(out), sign


def gamma_reversal_sign(word):
    """Sign of reversing a Clifford word: (-1)^(k(k-1)/2)."""
    k = len(word)
    return -1 if (k * (k - 1) // 2) & 1 else 1


class OperatorElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = terms if terms is not None else {}

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero(ctx):
        return OperatorElement(ctx)

    @staticmethod
    def identity(ctx):
        return OperatorElement.from_coeff(Coeff.one(ctx))

    @staticmethod
    def from_coeff(c):
        if c.is_zero:
            return OperatorElement(c.ctx)
        zero_d = (0,) * len(c.ctx.deriv_dirs)
        return OperatorElement(c.ctx, {((), 0, zero_d): c})

    @staticmethod
    def from_scalar(ctx, k):
        return OperatorElement.from_coeff(Coeff.const(ctx, k))

    @staticmethod
    def deriv(ctx, direction, order=1):
        dirs = ctx.deriv_dirs
        if direction not in dirs:
            raise ModeMismatch("%r is not a derivative direction of %s context"
                               % (direction, ctx.mode))
        d = tuple(order if name == direction else 0 for name in dirs)
        return OperatorElement(ctx, {((), 0, d): Coeff.one(ctx)})

    @staticmethod
    def gamma(ctx, i):
        if not 1 <= i <= ctx.gamma_count:
            raise UnsupportedRepresentation(
                "gamma index %d outside 1..%d" % (i, ctx.gamma_count))
        zero_d = (0,) * len(ctx.deriv_dirs)
        return OperatorElement(ctx, {((i,), 0, zero_d): Coeff.one(ctx)})

    @staticmethod
    def shift(ctx, s=1):
        if not ctx.shift_allowed:
            raise ModeMismatch("shift generators only exist in radial contexts")
        zero_d = (0,) * len(ctx.deriv_dirs)
        return OperatorElement(ctx, {((), s, zero_d): Coeff.one(ctx)})

    # -- bookkeeping --------------------------------------------------------------

    def _put(self, key, c):
        # syntactic zero checks only: value-zero coefficients (nonzero dicts
        # that vanish under the radical relation) are caught by is_zero/prune
        if c.num.is_syntactically_zero:
            return
        old = self.terms.get(key)
        if old is None:
            self.terms[key] = c
        else:
            s = old + c
            if s.num.is_syntactically_zero:
                del self.terms[key]
            else:
                self.terms[key] = s

    @property
    def is_zero(self):
        if not self.terms:
            return True
        return all(c.is_zero for c in self.terms.values())

    def pruned(self):
        """Drop value-zero coefficients (the normal form term set)."""
        out = OperatorElement(self.ctx)
        for key, c in self.terms.items():
            if not c.is_zero:
                out.terms[key] = c
        return out

    def term_count(self):
        return sum(0 if c.is_zero else 1 for c in self.terms.values())

    def max_deriv_order(self):
        return max((sum(d) for (_, _, d) in self.terms), default=0)

    def __bool__(self):
        return bool(self.terms)

    # -- linear structure ------------------------------------------------------------

    def __add__(self, o):
        if not isinstance(o, OperatorElement):
            return NotImplemented
        self.ctx.require(o.ctx)
        out = OperatorElement(self.ctx, dict(self.terms))
        for key, c in o.terms.items():
            out._put(key, c)
        return out

    def __sub__(self, o):
        return self + (-o)

    def __neg__(self):
        return OperatorElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def scale(self, k):
        k = K.of(k)
        if k.is_zero:
            return OperatorElement(self.ctx)
        return OperatorElement(self.ctx, {key: c.scale(k) for key, c in self.terms.items()})

    def scale_coeff(self, c):
        if c.is_zero:
            return OperatorElement(self.ctx)
        out = OperatorElement(self.ctx)
        for key, cc in self.terms.items():
            out._put(key, c * cc)
        return out

    # -- the product ---------------------------------------------------------------------

    def __mul__(self, o):
        if isinstance(o, OperatorElement):
            return multiply(self, o)
        if isinstance(o, (K, int)):
            return self.scale(K.of(o))
        if isinstance(o, Coeff):
            # right multiplication by a coefficient = product with its wrap
            return multiply(self, OperatorElement.from_coeff(o))
        return NotImplemented

    def __rmul__(self, o):
        if isinstance(o, (K, int)):
            return self.scale(K.of(o))
        if isinstance(o, Coeff):
            return self.scale_coeff(o)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative operator power")
        out = OperatorElement.identity(self.ctx)
        for _ in range(n):
            out = multiply(out, self)
        return out

    def __eq__(self, o):
        if not isinstance(o, OperatorElement):
            return NotImplemented
        if self.ctx is not o.ctx:
            return False
        return (self - o).is_zero

    # -- coefficient maps ------------------------------------------------------------------

    def normalize(self):
        """Canonicalise every coefficient (reduce against denominators)."""
        return self.map_coeffs(lambda c: c.normalize())

    def map_coeffs(self, fn):
        out = OperatorElement(self.ctx)
        for key, c in self.terms.items():
            out._put(key, fn(c))
        return out

    def shift_spectral(self, amount):
        """Substitute L -> L + amount*hbar in every coefficient."""
        return self.map_coeffs(lambda c: c.shift_spectral(amount))

    def substitute_param(self, name, value):
        return self.map_coeffs(lambda c: c.substitute_var(name, value))

    def conjugate_coeffs(self):
        return self.map_coeffs(lambda c: c.conjugate())

    # -- grading ---------------------------------------------------------------------------

    def gamma_grade_split(self):
        """Partition by Clifford word; the parts sum back to the operator."""
        parts = {}
        for key, c in self.terms.items():
            gw = key[0]
            part = parts.get(gw)
            if part is None:
                part = parts[gw] = OperatorElement(self.ctx)
            part.terms[key] = c
        return parts

    def gamma_free(self):
        return all(not key[0] for key in self.terms)

    def shift_free(self):
        return all(not key[1] for key in self.terms)

    def __repr__(self):
        from .printing import operator_str
        return operator_str(self)


def multiply(a, b, prune_zeros=True, skip_top=False):
    """Normal-ordered operator product.

    Contributions are accumulated per (term key, denominator) as raw
    numerator dicts, so repeated collisions merge polynomial terms in place
    instead of re-aligning denominators each time.  prune_zeros=False skips
    the value-zero test on the result's coefficients; commutators use it
    because their callers zero-test the whole residual anyway.  skip_top
    omits the pass-through Leibniz piece (coefficients unscathed, all
    derivatives to the right) of every term pair; commutators of operators
    whose top pieces cancel pairwise use it (see `commutator`).
    """
    a.ctx.require(b.ctx)
    ctx = a.ctx
    acc = {}  # key -> {den: numerator term dict}
    bterms = list(b.terms.items())
    for (g1, s1, d1), c1 in a.terms.items():
        any_d1 = any(d1)
        for (g2, s2, d2), c2 in bterms:
            c2s = c2.shift_spectral(-s1) if s1 else c2
            if g1 and g2:
                gw, sign = gamma_mul(g1, g2)
            elif g1 or g2:
                gw, sign = (g1 or g2), 1
            else:
                gw, sign = (), 1
            s = s1 + s2
            if not any_d1:
                if skip_top:
                    continue
                pieces = ((d2, c2s),)
            else:
                pieces = tuple((tuple(map(_tadd, beta, d2)), piece)
                               for beta, piece in _leibniz(ctx, c2s, d1)
                               if not (skip_top and beta == d1))
            for deriv, piece in pieces:
                c = c1 * piece
                num = c.num.terms
                if not num:
                    continue
                slot = acc.setdefault((gw, s, deriv), {})
                tgt = slot.get(c.den)
                if tgt is None:
                    if sign < 0:
                        slot[c.den] = {m: -v for m, v in num.items()}
                    else:
                        slot[c.den] = dict(num)
                elif sign < 0:
                    for m, v in num.items():
                        cur = tgt.get(m)
                        nv = -v if cur is None else cur - v
                        if nv.is_zero:
                            tgt.pop(m, None)
                        else:
                            tgt[m] = nv
                else:
                    for m, v in num.items():
                        cur = tgt.get(m)
                        nv = v if cur is None else cur + v
                        if nv.is_zero:
                            tgt.pop(m, None)
                        else:
                            tgt[m] = nv
    out = OperatorElement(ctx)
    for key, slot in acc.items():
        total = None
        for den, terms in slot.items():
            if not terms:
                continue
            piece = Coeff(ctx, Poly(ctx, terms), den)
            total = piece if total is None else total + piece
        if total is None or total.num.is_syntactically_zero:
            continue
        if prune_zeros and total.is_zero:
            continue
        out.terms[key] = total
    return out


def _leibniz(ctx, c, alpha):
    """Expand d^alpha o c as sum of (beta, binom * d^(alpha-beta) c)."""
    pieces = [((), c)]
    dirs = ctx.deriv_dirs
    for k, a in enumerate(alpha):
        if not a:
            pieces = [(b + (0,), cc) for b, cc in pieces]
            continue
        name = dirs[k]
        new = []
        for b, cc in pieces:
            chain = [cc]
            for _ in range(a):
                nxt = chain[-1].differentiate(name)
                chain.append(nxt)
                if nxt.num.is_syntactically_zero:
                    break
            for j in range(a + 1):
                # j derivatives remain operators; a - j land on the coefficient
                on_c = a - j
                if on_c >= len(chain):
                    continue
                dc = chain[on_c]
                if dc.num.is_syntactically_zero:
                    continue
                m = comb(a, j)
                new.append((b + (j,), dc if m == 1 else dc.scale(kint(m))))
        pieces = new
    return pieces


def commutator(a, b):
    # When both operands are shift-free and one carries no Clifford content,
    # the pass-through Leibniz pieces of ab and ba are identical
    # (coefficients commute and the words merge with sign +1 on both sides),
    # so they can be skipped before they are ever multiplied out.
    if (a.shift_free() and b.shift_free()
            and (a.gamma_free() or b.gamma_free())):
        return (multiply(a, b, prune_zeros=False, skip_top=True)
                - multiply(b, a, prune_zeros=False, skip_top=True))
    return multiply(a, b, prune_zeros=False) - multiply(b, a, prune_zeros=False)


def anticommutator(a, b):
    return multiply(a, b, prune_zeros=False) + multiply(b, a, prune_zeros=False)


# -- application to test functions ------------------------------------------------------------


def apply_op(op, f):
    """Apply a gamma-free, shift-free operator to a coefficient function."""
    ctx = op.ctx
    ctx.require(f.ctx)
    out = Coeff.zero(ctx)
    for (gw, s, d), c in op.terms.items():
        if gw:
            raise UnsupportedTestFunction(
                "operator has Clifford content; use apply_vector")
        if s:
            raise UnsupportedTestFunction(
                "operator has shift content; use apply_shifted")
        g = f
        for name, n in zip(ctx.deriv_dirs, d):
            for _ in range(n):
                g = g.differentiate(name)
        out = out + c * g
    return out


def apply_shifted(op, f):
    """Apply a radial operator to a shift-graded test function.

    f maps an integer marker m (an accumulated power of the shift generator)
    to a coefficient function; the result is in the same form.
    """
    ctx = op.ctx
    out = {}
    for (gw, s, d), c in op.terms.items():
        if gw:
            raise UnsupportedTestFunction("Clifford content in radial apply")
        for m, fm in f.items():
            g = fm
            for name, n in zip(ctx.deriv_dirs, d):
                for _ in range(n):
                    g = g.differentiate(name)
            if s:
                g = g.shift_spectral(-s)
            g = c * g
            key = m + s
            cur = out.get(key)
            tot = g if cur is None else cur + g
            if tot.is_zero:
                out.pop(key, None)
            else:
                out[key] = tot
    return out


def apply_vector(op, vec):
    """Apply an operator with Clifford content to a 4-component test vector."""
    mat = gamma_to_matrix(op)
    return [sum((apply_op(mat.entry(i, j), vec[j]) for j in range(4)),
                Coeff.zero(op.ctx)) for i in range(4)]


# -- gamma matrices ----------------------------------------------------------------------------


def _kron(A, B):
    n, m = len(A), len(B)
    out = [[ZERO] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    out[i * m + k][j * m + l] = A[i][j] * B[k][l]
    return tuple(tuple(row) for row in out)


_S1 = ((ZERO, ONE), (ONE, ZERO))
_S2 = ((ZERO, MINUS_I), (I, ZERO))
_S3 = ((ONE, ZERO), (ZERO, -ONE))
_ID2 = ((ONE, ZERO), (ZERO, ONE))

GAMMA_MATRICES = {
    1: _kron(_S1, _ID2),
    2: _kron(_S2, _ID2),
    3: _kron(_S3, _S1),
    4: _kron(_S3, _S2),
}
_ID4 = _kron(_ID2, _ID2)


def _mat_mul(A, B):
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(4)), ZERO)
                       for j in range(4)) for i in range(4))


def gamma_word_matrix(word):
    out = _ID4
    for g in word:
        if g > 4:
            raise UnsupportedRepresentation("no 4x4 representation for gamma_%d" % g)
        out = _mat_mul(out, GAMMA_MATRICES[g])
    return out


class MatrixOperator:
    """A 4x4 matrix of gamma-free operator elements over one context."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx, rows):
        self.ctx = ctx
        self.rows = [list(r) for r in rows]

    @staticmethod
    def zero(ctx):
        return MatrixOperator(ctx, [[OperatorElement.zero(ctx) for _ in range(4)]
                                    for _ in range(4)])

    @staticmethod
    def identity(ctx):
        m = MatrixOperator.zero(ctx)
        for i in range(4):
            m.rows[i][i] = OperatorElement.identity(ctx)
        return m

    @staticmethod
    def diagonal(entries):
        ctx = entries[0].ctx
        m = MatrixOperator.zero(ctx)
        for i in range(4):
            m.rows[i][i] = entries[i]
        return m

    @staticmethod
    def scalar(op):
        m = MatrixOperator.zero(op.ctx)
        for i in range(4):
            m.rows[i][i] = op
        return m

    def entry(self, i, j):
        return self.rows[i][j]

    def __add__(self, o):
        return MatrixOperator(self.ctx, [[a + b for a, b in zip(r1, r2)]
                                         for r1, r2 in zip(self.rows, o.rows)])

    def __sub__(self, o):
        return MatrixOperator(self.ctx, [[a - b for a, b in zip(r1, r2)]
                                         for r1, r2 in zip(self.rows, o.rows)])

    def __neg__(self):
        return MatrixOperator(self.ctx, [[-a for a in r] for r in self.rows])

    def scale(self, k):
        return MatrixOperator(self.ctx, [[a.scale(k) for a in r] for r in self.rows])

    def __mul__(self, o):
        if isinstance(o, MatrixOperator):
            rows = []
            for i in range(4):
                row = []
                for j in range(4):
                    acc = OperatorElement.zero(self.ctx)
                    for k in range(4):
                        if self.rows[i][k].is_zero or o.rows[k][j].is_zero:
                            continue
                        acc = acc + multiply(self.rows[i][k], o.rows[k][j])
                    row.append(acc)
                rows.append(row)
            return MatrixOperator(self.ctx, rows)
        if isinstance(o, OperatorElement):
            return self * MatrixOperator.scalar(o)
        return NotImplemented

    def __rmul__(self, o):
        if isinstance(o, OperatorElement):
            return MatrixOperator.scalar(o) * self
        return NotImplemented

    def commutator(self, o):
        return self * o - o * self

    @property
    def is_zero(self):
        return all(a.is_zero for r in self.rows for a in r)

    def __eq__(self, o):
        if not isinstance(o, MatrixOperator):
            return NotImplemented
        return (self - o).is_zero

    def map_entries(self, fn):
        return MatrixOperator(self.ctx, [[fn(a) for a in r] for r in self.rows])

    def __repr__(self):
        nz = sum(0 if a.is_zero else 1 for r in self.rows for a in r)
        return "<MatrixOperator %d nonzero entries>" % nz


def gamma_to_matrix(op):
    """Faithful 4x4 matrix realisation (sigma (x) sigma basis) of an operator."""
    if op.ctx.gamma_count > 4:
        raise UnsupportedRepresentation("more than four Clifford generators")
    out = MatrixOperator.zero(op.ctx)
    for (gw, s, d), c in op.terms.items():
        mat = gamma_word_matrix(gw)
        for i in range(4):
            for j in range(4):
                k = mat[i][j]
                if k.is_zero:
                    continue
                out.rows[i][j]._put(((), s, d), c.scale(k))
    return out


# -- adjoints ------------------------------------------------------------------------------------


def log_derivative(w, direction):
    return w.differentiate(direction) / w


def formal_adjoint(op, weight):
    """Adjoint of a radial operator for the pairing integral(conj(f) g w dr).

    Integration by parts gives (d_r)^dagger = -d_r - w'/w; coefficients are
    conjugated with r, L and all parameters treated as real.
    """
    ctx = op.ctx
    ctx.require_mode("radial")
    if weight.is_zero:
        raise DegenerateWeight("adjoint weight is identically zero")
    if not op.gamma_free() or not op.shift_free():
        raise ModeMismatch("formal_adjoint expects gamma-free, shift-free input")
    dlog = log_derivative(weight, "r")
    Dd = OperatorElement(ctx, {((), 0, (1,)): Coeff.const(ctx, -ONE)})
    Dd = Dd + OperatorElement.from_coeff(-dlog)
    powers = {0: OperatorElement.identity(ctx)}
    out = OperatorElement.zero(ctx)
    for (_, _, d), c in op.terms.items():
        n = d[0]
        if n not in powers:
            m = max(powers)
            for e in range(m + 1, n + 1):
                powers[e] = multiply(powers[e - 1], Dd)
        out = out + multiply(powers[n], OperatorElement.from_coeff(c.conjugate()))
    return out


def flat_adjoint(op):
    """Adjoint for the flat cartesian pairing: x self-adjoint, d -> -d, i -> -i."""
    ctx = op.ctx
    ctx.require_mode("cartesian", "reduced")
    out = OperatorElement.zero(ctx)
    for (gw, s, d), c in op.terms.items():
        if s:
            raise ModeMismatch("flat adjoint does not support shift generators")
        sign = gamma_reversal_sign(gw)
        if (sum(d)) & 1:
            sign = -sign
        dop = OperatorElement(ctx, {((), 0, d): Coeff.one(ctx)})
        gop = OperatorElement(ctx, {(gw, 0, (0,) * len(ctx.deriv_dirs)): Coeff.one(ctx)})
        piece = multiply(dop, multiply(gop, OperatorElement.from_coeff(c.conjugate())))
        out = out + (piece.scale(K.of(-1)) if sign < 0 else piece)
    return out
