"""Writing a skew Laurent series as a product of two commutators.

Every nonzero series f (and zero too, trivially) over k((sigma;x)) is
decomposed as

    f = [b1, w1] * [b2, w2] + O(x^prec),

where the four witnesses are again skew Laurent series.  The route
depends on the order of sigma:

* infinite order: peel off a central-free power of x and lift both
  factors through the bracket with the designated moved element;
* order n >= 5: split the valuation s = u + v so that n divides none of
  u, v, u - v, factor f accordingly, and lift both factors through the
  bracket with a normal-basis element;
* order 4: as above when the valuation is not 2 mod 4; otherwise factor
  f into two series whose coefficients lie in L = Im(sigma - 1) and lift
  both through the bracket with x itself, conjugating first when the
  leading coefficient sits in the obstruction line k1;
* orders 2 and 3 are rejected (UnsupportedOrder).

The resulting Certificate is self-contained and re-checkable: verify
multiplies the commutators back out and compares coefficients below
check_prec.  decompose() verifies every certificate before returning it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    DecompositionError,
    IdentityAutomorphism,
    K1Input,
    K1Leading,
    NoSplit,
    PrecisionExceeded,
    UnsupportedOrder,
    WitnessFixed,
    ZeroInput,
)
from .field_tower import kernel_from_columns
from .skew_series import SkewSeries, commutator, conjugate, term, zero

_CONJ_SEED = "conjugator-search"


@dataclass(frozen=True)
class Certificate:
    """A decomposition f = [b1, w1]*[b2, w2] + O(x^check_prec)."""

    input: SkewSeries
    pairs: tuple
    method: str
    check_prec: int
    experimental: bool = False

    @property
    def ctx(self):
        return self.input.ctx


def verify_certificate(cert):
    """Re-multiply the commutators and compare against the input.

    Returns False when the witnesses do not reproduce the input below
    check_prec, or when they are too imprecise to be checked at all.
    Mixing coefficient fields raises FieldMismatch.
    """
    f = cert.input
    if len(cert.pairs) != 2:
        return False
    brackets = []
    for b, w in cert.pairs:
        f._check_ctx(b)
        f._check_ctx(w)
        brackets.append(commutator(b, w))
    prod = brackets[0] * brackets[1]
    if prod.prec < cert.check_prec or f.prec < cert.check_prec:
        return False
    try:
        return prod.eq_to_prec(f, cert.check_prec)
    except PrecisionExceeded:
        return False


# ---------------------------------------------------------------------------
# bracket preimages: solve [b, w] = g


def bracket_preimage_term(b, a, i, prec):
    """w with [b*x^0, w] = a*x^i + O(x^prec), for b moved by sigma^i.

    Since coefficients commute, [b, c*x^i] = (b - sigma^i(b))*c*x^i, so
    w is the single term with c = (b - sigma^i(b))^(-1) * a.
    """
    ctx = b.ctx
    d = b - ctx.sigma(b, i)
    if not d:
        raise WitnessFixed(i, f"sigma^{i} fixes the chosen witness")
    if isinstance(a, int):
        a = ctx.from_int(a)
    return term(ctx, d.inverse() * a, i, prec)


def bracket_preimage(b, g):
    """w with [b*x^0, w] = g, coefficient by coefficient.

    Requires sigma^j(b) != b for every exponent j in the support of g;
    otherwise WitnessFixed(j) is raised.
    """
    ctx = g.ctx
    out = []
    for idx, c in enumerate(g.coeffs):
        if not c:
            out.append(c)
            continue
        j = g.val + idx
        d = b - ctx.sigma(b, j)
        if not d:
            raise WitnessFixed(j, f"sigma^{j} fixes the chosen witness")
        out.append(d.inverse() * c)
    return SkewSeries(ctx, g.val, out, g.prec)


def x_bracket_preimage(g):
    """w with [x, w] = g, for g whose coefficients all lie in Im(sigma - 1).

    [x, z*x^(i-1)] = (sigma(z) - z)*x^i, so each coefficient is lifted
    through sigma - 1 and shifted one slot left.
    """
    ctx = g.ctx
    out = [
        ctx.sigma_minus_one_preimage(c) if c else c for c in g.coeffs
    ]
    return SkewSeries(ctx, g.val - 1, out, g.prec - 1)


# ---------------------------------------------------------------------------
# infinite order


def _pairs_infinite(f):
    ctx = f.ctx
    s = f.val
    prec = f.prec
    n = -abs(s) - 1
    m = s - n  # >= 1, so x^n and the shifted remainder both miss exponent 0
    t = ctx.find_witness(1)
    shifted = SkewSeries(
        ctx, m, [ctx.sigma(c, -n) for c in f.coeffs], prec - n
    )
    w1 = bracket_preimage_term(t, 1, n, prec - m)
    b1 = term(ctx, t, 0, prec - m - n)
    w2 = bracket_preimage(t, shifted)
    b2 = term(ctx, t, 0, prec - n - m)
    return ((b1, w1), (b2, w2)), "InfiniteWitness"


# ---------------------------------------------------------------------------
# finite order >= 4, valuation splittable


def split_exponent(s, n):
    """u + v = s with n dividing none of u, v, u - v.

    No such split exists when n = 4 and s = 2 mod 4 (NoSplit); orders
    below 4 are rejected outright.
    """
    if n < 4:
        raise UnsupportedOrder(n, f"no exponent split for sigma of order {n}")
    r = s % n
    if n == 4 and r == 2:
        raise NoSplit("s = 2 mod 4 admits no split avoiding multiples of 4")
    if r in (n - 1, n - 2):
        return s - 1, 1
    return s + 1, -1


def factor_avoiding_multiples(f, u, v):
    """f = g*h with g, h supported away from exponents divisible by n.

    Needs val(f) = u + v and n dividing none of u, v, u - v.  The
    factors are built coefficient by coefficient: at each step exactly
    one of the two candidate slots survives the support constraint, so
    the triangular system stays solvable.  g has precision prec - v and
    h has precision prec - u.
    """
    ctx = f.ctx
    n = ctx.sigma_order
    s = f.val
    if u + v != s:
        raise ValueError("split exponents must sum to the valuation")
    width = f.prec - s
    bs = [ctx.zero()] * width  # bs[t] is the coefficient of x^(u+t) in g
    cs = [ctx.zero()] * width  # cs[t] is the coefficient of x^(v+t) in h
    bs[0] = f.coeffs[0]
    cs[0] = ctx.one()
    b0_inv = bs[0].inverse()
    for t in range(1, width):
        acc = f.coeffs[t]
        for r in range(1, t):
            if bs[r] and cs[t - r]:
                acc = acc - bs[r] * ctx.sigma(cs[t - r], u + r)
        if (u + t) % n:
            bs[t] = acc
        else:
            cs[t] = ctx.sigma(b0_inv * acc, -u)
    g = SkewSeries(ctx, u, bs, f.prec - v)
    h = SkewSeries(ctx, v, cs, f.prec - u)
    return g, h


def _pairs_split(f, y, method):
    ctx = f.ctx
    prec = f.prec
    u, v = split_exponent(f.val, ctx.sigma_order)
    g, h = factor_avoiding_multiples(f, u, v)
    w1 = bracket_preimage(y, g)
    b1 = term(ctx, y, 0, prec - v - u)
    w2 = bracket_preimage(y, h)
    b2 = term(ctx, y, 0, prec - u - v)
    return ((b1, w1), (b2, w2)), method


# ---------------------------------------------------------------------------
# order 4, valuation 2 mod 4


def _l_pair_ok(o4, a, b, c):
    ctx = o4.ctx
    if a * b != c or not (o4.in_l(a) and o4.in_l(b)):
        return False
    return all(ctx.is_k0_independent([a, ctx.sigma(b, i)]) for i in range(4))


def factor_into_l_pair(o4, c):
    """c = a*b with a, b in L and {a, sigma^i(b)} independent for all i.

    The independence postcondition is what keeps the series-level
    factorisation solvable at every later coefficient, so it is checked
    here for each candidate and certified by construction.
    """
    ctx = o4.ctx
    if not c:
        raise ZeroInput("cannot factor zero into an L-pair")
    if o4.in_k1(c):
        raise K1Input("elements of k1 admit no L-pair factorisation")
    e2, se2 = o4.k2_basis
    scalars = ctx.k0_scalars()
    k0_elems = ctx.k0_scalar_elements()
    if ctx.sigma(c, 2) == c:
        # c is sigma^2-fixed: both factors can be taken inside k2
        for cand in _k2_lines(ctx, o4, k0_elems):
            a = cand
            b = a.inverse() * c
            if _l_pair_ok(o4, a, b, c):
                return a, b
    else:
        # choose z in k2 with c*z back inside L, then split off z^(-1)
        cols = [
            (o4.full_coords(c * e2)[3],),
            (o4.full_coords(c * se2)[3],),
        ]
        kb = kernel_from_columns(cols, scalars)
        for vec in _kernel_lines(kb, k0_elems, scalars):
            z = ctx.k0_scalar_to_elem(vec[0]) * e2 + ctx.k0_scalar_to_elem(vec[1]) * se2
            if not z:
                continue
            a = z.inverse()
            b = c * z
            if _l_pair_ok(o4, a, b, c):
                return a, b
    raise DecompositionError("no valid L-pair factorisation was found")


def _k2_lines(ctx, o4, k0_elems):
    """One representative of each k0-line of k2 = span(e2, sigma(e2))."""
    e2, se2 = o4.k2_basis
    yield e2
    yield se2
    for lam in k0_elems:
        scaled = ctx.k0_scalar_to_elem(lam) * e2
        if scaled:
            yield scaled + se2


def _kernel_lines(kb, k0_elems, scalars):
    """Line representatives inside the span of the kernel basis kb."""
    if not kb:
        return
    yield kb[0]
    if len(kb) > 1:
        v1, v2 = kb[0], kb[1]
        for lam in k0_elems:
            yield tuple(
                scalars.add(b, scalars.mul(lam, a)) for a, b in zip(v1, v2)
            )


def factor_with_l_coeffs(f):
    """f = f1*f2 with every coefficient of f1 and of f2 inside L.

    Requires order 4 and a leading coefficient outside k1 (K1Leading
    otherwise).  f1 keeps the full precision of f; f2 has valuation 0
    and precision prec - val.
    """
    ctx = f.ctx
    o4 = ctx.build_order4_ctx()
    s = f.val
    prec = f.prec
    lead = f.coeffs[0]
    if o4.in_k1(lead):
        raise K1Leading("leading coefficient lies in k1; conjugate first")
    a0, b0 = factor_into_l_pair(o4, lead)
    width = prec - s
    l_basis = o4.l_basis
    bs = [a0] + [ctx.zero()] * (width - 1)  # coefficients of f1 at x^(s+t)
    cps = [b0] + [ctx.zero()] * (width - 1)  # cps[t] = sigma^s(coeff of f2 at x^t)
    col_cache = {}
    for t in range(1, width):
        acc = f.coeffs[t]
        for r in range(1, t):
            if bs[r] and cps[t - r]:
                acc = acc - bs[r] * ctx.sigma(cps[t - r], r)
        tm = t % 4
        cols = col_cache.get(tm)
        if cols is None:
            sb0 = ctx.sigma(b0, tm)
            cols = [ctx.k0_vec(a0 * l) for l in l_basis] + [
                ctx.k0_vec(l * sb0) for l in l_basis
            ]
            col_cache[tm] = cols
        sol = ctx.solve_k0_linear(cols, ctx.k0_vec(acc))
        if sol is None:
            raise DecompositionError("L-pair independence failed mid-factorisation")
        cp = ctx.zero()
        bt = ctx.zero()
        for j in range(3):
            cp = cp + ctx.k0_scalar_to_elem(sol[j]) * l_basis[j]
            bt = bt + ctx.k0_scalar_to_elem(sol[3 + j]) * l_basis[j]
        cps[t] = cp
        bs[t] = bt
    f1 = SkewSeries(ctx, s, bs, prec)
    f2 = SkewSeries(ctx, 0, [ctx.sigma(c, -s) for c in cps], prec - s)
    return f1, f2


def _pairs_order4_l(f):
    ctx = f.ctx
    s = f.val
    prec = f.prec
    f1, f2 = factor_with_l_coeffs(f)
    one = ctx.one()
    w1 = x_bracket_preimage(f1)
    x1 = term(ctx, one, 1, prec - w1.val)
    w2 = x_bracket_preimage(f2)
    x2 = term(ctx, one, 1, prec - s - w2.val)
    return ((x1, w1), (x2, w2)), "Order4L"


def _conjugator(f, o4):
    """A unit u with u*lead*sigma^s(u)^(-1) outside k1.

    The map u -> u*sigma^s(u)^(-1) is a nontrivial multiplicative
    character times the identity, so failures form a proper subgroup;
    the normal-basis element is tried first, then seeded random picks.
    """
    ctx = f.ctx
    lead = f.coeffs[0]
    s = f.val

    def good(u):
        return u and not o4.in_k1(lead * u * ctx.sigma(u, s).inverse())

    if good(o4.y):
        return o4.y
    rng = random.Random(f"{_CONJ_SEED}:{ctx.field_spec()}:{ctx.sigma_spec()}")
    for _ in range(256):
        u = ctx.random_elem(rng)
        if good(u):
            return u
    raise DecompositionError("no conjugator moved the leading coefficient off k1")


def _pairs_order4_conjugated(f, o4):
    ctx = f.ctx
    s = f.val
    prec = f.prec
    u = _conjugator(f, o4)
    big = prec - s + 2
    fwd = term(ctx, u, 0, big)
    g = fwd * f * fwd.inverse()
    inner, _ = _pairs_order4_l(g)
    back = term(ctx, u.inverse(), 0, big)
    pairs = tuple(
        (conjugate(b, back), conjugate(w, back)) for b, w in inner
    )
    return pairs, "Order4Conjugated"


def _pairs_order4(f):
    o4 = f.ctx.build_order4_ctx()
    if f.val % 4 != 2:
        return _pairs_split(f, o4.y, "Order4Split")
    if not o4.in_k1(f.coeffs[0]):
        return _pairs_order4_l(f)
    return _pairs_order4_conjugated(f, o4)


# ---------------------------------------------------------------------------
# dispatch


def _pairs_zero(f):
    ctx = f.ctx
    pz = max(f.prec, 1)
    b = term(ctx, ctx.gen(), 0, pz)
    w = zero(ctx, pz)
    return ((b, w), (b, w)), "ZeroInput"


def decompose(f):
    """Certificate that f is a product of two commutators, to f's precision.

    Raises UnsupportedOrder for sigma of order 2 or 3, where no such
    certificate is constructed.  Certificates over order-4 fields of
    characteristic 2 are marked experimental (they are still verified).
    """
    ctx = f.ctx
    n = ctx.sigma_order
    if n == 1:
        raise IdentityAutomorphism("sigma is the identity; the ring is commutative")
    if f.is_zero:
        pairs, method = _pairs_zero(f)
    elif n is None:
        pairs, method = _pairs_infinite(f)
    elif n >= 5:
        # full-degree witness: sigma^j must move it for every j not divisible
        # by n, and the factor supports can hit any such j
        pairs, method = _pairs_split(f, ctx.find_witness(n), "DegreeAtLeast5")
    elif n == 4:
        pairs, method = _pairs_order4(f)
    else:
        raise UnsupportedOrder(
            n, f"sigma has order {n}; certificates need order at least 4"
        )
    cert = Certificate(
        input=f,
        pairs=pairs,
        method=method,
        check_prec=f.prec,
        experimental=bool(n == 4 and ctx.characteristic == 2),
    )
    if not verify_certificate(cert):
        raise DecompositionError(
            "internal failure: a constructed certificate did not verify"
        )
    return cert
