"""Pure-Python kernels: sparse term products and weighted term minima.

Same contract as the compiled module; used when the extension is absent or
explicitly disabled.  Exponents are machine-word integers with overflow
detection at 2**62.
"""

EXP_LIMIT = 2**62


def backend() -> str:
    return "pure"


def mul_terms(ea, ca, eb, cb, p):
    """Sparse product of two term lists.

    ea/eb: lists of exponent tuples; ca/cb: integer coefficients, residues
    mod p when p > 0 and arbitrary ints when p == 0.  Returns a dict from
    exponent tuple to nonzero coefficient.
    """
    if ea and eb:
        n = len(ea[0])
        for k in range(n):
            ma = max(e[k] for e in ea)
            mb = max(e[k] for e in eb)
            if ma + mb >= EXP_LIMIT:
                raise OverflowError("exponent overflow in polynomial product")
    out = {}
    if p:
        for e1, c1 in zip(ea, ca):
            for e2, c2 in zip(eb, cb):
                key = tuple(x + y for x, y in zip(e1, e2))
                v = (out.get(key, 0) + c1 * c2) % p
                if v:
                    out[key] = v
                elif key in out:
                    del out[key]
    else:
        for e1, c1 in zip(ea, ca):
            for e2, c2 in zip(eb, cb):
                key = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(key, 0) + c1 * c2
                if v:
                    out[key] = v
                elif key in out:
                    del out[key]
    return out


def _quad_sign_int(a, b, d):
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    sa = 1 if a > 0 else -1
    sb = 1 if b > 0 else -1
    if sa == sb:
        return sa
    return sa if a * a > b * b * d else sb


def term_mins(exps, levels):
    """Indices of the terms of minimal weighted value, plus that minimum.

    exps: nonempty list of exponent tuples.  levels: per lexicographic
    level a triple (arow, brow, d) of integer weight numerators over a
    shared per-level denominator; the value of a term e at one level is
    (e . arow) + (e . brow) * sqrt(d), compared exactly.

    Returns (argmins, best) with argmins the sorted index list of all
    minimizers and best the per-level (a, b) numerator pairs of the
    minimum.
    """
    pairs = []
    for e in exps:
        row = []
        for arow, brow, d in levels:
            sa = 0
            sb = 0
            for x, wa, wb in zip(e, arow, brow):
                if x:
                    sa += x * wa
                    sb += x * wb
            row.append((sa, sb))
        pairs.append(row)
    best = pairs[0]
    argmins = [0]
    for i in range(1, len(pairs)):
        row = pairs[i]
        cmp = 0
        for (sa, sb), (ba, bb), (arow, brow, d) in zip(row, best, levels):
            cmp = _quad_sign_int(sa - ba, sb - bb, d)
            if cmp:
                break
        if cmp < 0:
            best = row
            argmins = [i]
        elif cmp == 0:
            argmins.append(i)
    return argmins, tuple(best)
