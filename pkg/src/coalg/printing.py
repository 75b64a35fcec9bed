"""Deterministic text rendering for scalars, polynomials and operators.

Term order is fixed (graded-lex on the derivative multi-index, then the
Clifford word, then the shift power, then graded-lex monomial order inside
coefficients) so rendered normal forms are reproducible byte-for-byte.
Cartesian and radial operators are rendered with momentum symbols
(p1..p4, pr) so the output re-parses through the expression grammar.
"""

from __future__ import annotations

from .scalars import I, K, ONE, mpq


def scalar_str(c):
    """Render an exact scalar as a grammar-compatible expression."""
    parts = []
    for comp, unit in ((c.a, ""), (c.b, "i"), (c.c, "sqrt2"), (c.d, "i*sqrt2")):
        if not comp:
            continue
        sign = "-" if comp < 0 else "+"
        mag = -comp if comp < 0 else comp
        if unit and mag == 1:
            body = unit
        elif unit:
            body = "%s*%s" % (mag, unit)
        else:
            body = str(mag)
        parts.append((sign, body))
    if not parts:
        return "0"
    out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sign, body in parts[1:]:
        out += " %s %s" % (sign, body)
    return out


def _is_simple(c):
    """True when the scalar renders without an internal + or -."""
    nonzero = [x for x in (c.a, c.b, c.c, c.d) if x]
    return len(nonzero) <= 1


def mono_str(ctx, mono):
    parts = []
    for i, e in enumerate(mono):
        if not e:
            continue
        name = ctx.var_names[i]
        parts.append(name if e == 1 else "%s^%d" % (name, e))
    return "*".join(parts)


def _term_str(ctx, mono, c, lead):
    ms = mono_str(ctx, mono)
    simple = _is_simple(c)
    cs = scalar_str(c)
    if ms and c == ONE:
        body, neg = ms, False
    elif ms and c == -ONE:
        body, neg = ms, True
    else:
        neg = False
        if simple and cs.startswith("-"):
            cs, neg = cs[1:], True
        if not simple:
            cs = "(" + cs + ")"
        body = "%s*%s" % (cs, ms) if ms else cs
    if lead:
        return ("-" if neg else "") + body
    return ("- " if neg else "+ ") + body


def poly_str(p):
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    out = _term_str(p.ctx, items[0][0], items[0][1], True)
    for m, c in items[1:]:
        out += " " + _term_str(p.ctx, m, c, False)
    return out


def den_str(ctx, den):
    parts = []
    for fid, e in den:
        f = ctx._factors[fid]
        fs = poly_str(f)
        if len(f.terms) > 1:
            fs = "(" + fs + ")"
        parts.append(fs if e == 1 else "%s^%d" % (fs, e))
    return "*".join(parts)


def coeff_str(c):
    c = c.normalize()
    ns = poly_str(c.num)
    if not c.den:
        return ns
    if len(c.num.terms) > 1:
        ns = "(" + ns + ")"
    return "%s/(%s)" % (ns, den_str(c.ctx, c.den))


def _deriv_symbols(ctx):
    if ctx.mode == "cartesian":
        return {d: ("p%d" % (i + 1), True) for i, d in enumerate(ctx.deriv_dirs)}
    if ctx.mode == "radial":
        return {"r": ("pr", True)}
    out = {}
    for d in ctx.deriv_dirs:
        out[d] = ("d" + d, False)
    return out


def operator_str(op):
    """Render an operator normal form; '0' when empty."""
    from .scalars import MINUS_I
    ctx = op.ctx
    if not op.terms:
        return "0"
    dsym = _deriv_symbols(ctx)
    keys = sorted(op.terms, key=lambda k: ((sum(k[2]), k[2]), k[0], k[1]), reverse=True)
    pieces = []
    for key in keys:
        gw, shift, deriv = key
        coeff = op.terms[key]
        factors = []
        # momentum convention: d/dv = (i/hbar) p_v
        conv = None
        for d, n in zip(ctx.deriv_dirs, deriv):
            if not n:
                continue
            name, as_momentum = dsym[d]
            factors.append(name if n == 1 else "%s^%d" % (name, n))
            if as_momentum:
                conv = (conv or 0) + n
        if conv:
            hbar = type(coeff).var(ctx, "hbar", 1)
            coeff = coeff.scale(I ** conv) / hbar ** conv
        if shift:
            factors.insert(0, ("Lp" if shift > 0 else "Lm")
                           + ("" if abs(shift) == 1 else "^%d" % abs(shift)))
        for g in reversed(gw):
            factors.insert(0, "g%d" % g)
        cs = coeff_str(coeff)
        if factors:
            if len(coeff.num.terms) > 1 or coeff.den:
                if not (cs.startswith("(") and cs.endswith(")")):
                    cs = "(" + cs + ")"
            body = cs + "*" + "*".join(factors) if cs != "1" else "*".join(factors)
            if cs == "-1":
                body = "-" + "*".join(factors)
        else:
            body = cs
        pieces.append(body)
    out = pieces[0]
    for p in pieces[1:]:
        if p.startswith("-"):
            out += " - " + p[1:].lstrip()
        else:
            out += " + " + p
    return out


def operator_to_json(op):
    """JSON-ready tree of an operator: explicit term list with coeff strings."""
    ctx = op.ctx
    terms = []
    keys = sorted(op.terms, key=lambda k: ((sum(k[2]), k[2]), k[0], k[1]), reverse=True)
    for key in keys:
        gw, shift, deriv = key
        terms.append({
            "gamma": list(gw),
            "shift": shift,
            "deriv": {d: n for d, n in zip(ctx.deriv_dirs, deriv) if n},
            "coeff": coeff_str(op.terms[key]),
        })
    return {"mode": ctx.mode, "terms": terms}


def matrix_to_json(mat):
    return {"shape": [4, 4],
            "entries": [[operator_to_json(mat.entry(i, j)) for j in range(4)]
                        for i in range(4)]}
