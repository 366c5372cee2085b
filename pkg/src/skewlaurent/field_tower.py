"""Coefficient fields carrying a distinguished automorphism sigma.

Two concrete families are provided:

* ``FiniteFieldCtx``: GF(p^m) with sigma a power of the Frobenius map
  a -> a^(p^e).  The order of sigma is m / gcd(m, e) and its fixed field
  k0 is GF(p^gcd(m, e)).
* ``RationalFunctionCtx``: Q(t) with sigma the shift t -> t + 1 or the
  scaling t -> q*t for a rational q outside {0, 1, -1}.  Both have
  infinite order and fixed field Q.

Elements are exact: packed base-p integers for finite fields (with
exp/log/Zech tables when the field is small enough), reduced fractions
of Fraction-coefficient polynomials for Q(t).

The module also hosts the exact k0-linear algebra (Gaussian elimination
over k0) and the order-4 subspace context used by the decomposition
engine: the image L of sigma - 1, the line k1 = {z : sigma(z) = -z} and
the plane k2 = {z : sigma^2(z) = -z}.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd

from .errors import (
    FieldMismatch,
    FieldSpecError,
    IdentityAutomorphism,
    InfiniteOrder,
    NoWitness,
    NotInL,
    NotInSpan,
    UnsupportedOrder,
    ZeroNotInvertible,
)

_TABLE_LIMIT = 1 << 16
_WITNESS_SEED = "normal-basis-search"


# ---------------------------------------------------------------------------
# polynomials over GF(p): tuples of ints, ascending degree, trailing-trimmed


def _ptrim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _ptrim(
        ((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)
    )


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], -1, p)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv_lead) % p
        if c:
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return _ptrim(q), _ptrim(a)


def _pmulmod(a, b, mod, p):
    return _pdivmod(_pmul(a, b, p), mod, p)[1]


def _ppowmod(a, e, mod, p):
    out = (1,)
    base = _pdivmod(a, mod, p)[1]
    while e:
        if e & 1:
            out = _pmulmod(out, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return out


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = tuple(c * inv % p for c in a)
    return a


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(mod, p):
    """Rabin's test for a monic polynomial over GF(p)."""
    m = len(mod) - 1
    if m < 1:
        return False
    x = (0, 1)
    for r in _prime_factors(m):
        h = _ppowmod(x, p ** (m // r), mod, p)
        h = _padd(h, tuple(-c % p for c in x), p)
        if len(_pgcd(h, mod, p)) > 1:
            return False
    h = _ppowmod(x, p**m, mod, p)
    return h == x


def _search_irreducible(p, m):
    """First monic irreducible of degree m, by lexicographic constant-first scan."""
    for v in range(p**m):
        cs, rem = [], v
        for _ in range(m):
            rem, d = divmod(rem, p)
            cs.append(d)
        cand = tuple(cs) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise FieldSpecError(f"no irreducible polynomial of degree {m} over GF({p})")


# Standard (Conway) polynomials for common small fields; ascending coefficients.
_STANDARD_POLYS = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
}


def default_modulus(p, m):
    poly = _STANDARD_POLYS.get((p, m))
    if poly is None:
        poly = _search_irreducible(p, m)
    return poly


# ---------------------------------------------------------------------------
# exact Gaussian elimination, generic over a small scalar-field adapter


class _ModPScalars:
    """GF(p) scalars as plain ints."""

    __slots__ = ("p", "zero", "one")

    def __init__(self, p):
        self.p = p
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0


class _ElemScalars:
    """Field elements of a ctx used as scalars (k0 elements embedded in k)."""

    __slots__ = ("zero", "one")

    def __init__(self, ctx):
        self.zero = ctx.zero()
        self.one = ctx.one()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inverse()

    def is_zero(self, a):
        return not a


def _rref(rows, scalars):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    pivots = []
    r = 0
    for c in range(len(rows[0])):
        pr = None
        for i in range(r, len(rows)):
            if not scalars.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = scalars.inv(rows[r][c])
        rows[r] = [scalars.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not scalars.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [scalars.sub(v, scalars.mul(f, w)) for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_from_columns(columns, rhs, scalars):
    """Particular solution x of sum_j x[j]*columns[j] = rhs (free vars zero), or None."""
    k = len(columns)
    rows = [[col[i] for col in columns] + [rhs[i]] for i in range(len(rhs))]
    red, pivots = _rref(rows, scalars)
    if k in pivots:
        return None
    x = [scalars.zero] * k
    for row, c in zip(red, pivots):
        x[c] = row[k]
    return x


def kernel_from_columns(columns, scalars):
    """Echelon basis of {x : sum_j x[j]*columns[j] = 0}."""
    k = len(columns)
    if k == 0:
        return []
    rows = [[col[i] for col in columns] for i in range(len(columns[0]))]
    red, pivots = _rref(rows, scalars)
    basis = []
    for f in range(k):
        if f in pivots:
            continue
        v = [scalars.zero] * k
        v[f] = scalars.one
        for row, c in zip(red, pivots):
            v[c] = scalars.neg(row[f])
        basis.append(v)
    return basis


def rank_of_vectors(vectors, scalars):
    if not vectors:
        return 0
    return len(_rref(vectors, scalars)[1])


def invert_matrix(rows, scalars):
    """Inverse of a square matrix given as a list of rows."""
    n = len(rows)
    aug = [
        list(r) + [scalars.one if i == j else scalars.zero for j in range(n)]
        for i, r in enumerate(rows)
    ]
    red, pivots = _rref(aug, scalars)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def _dot(row, vec, scalars):
    acc = scalars.zero
    for a, b in zip(row, vec):
        acc = scalars.add(acc, scalars.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# base context


class FieldCtx:
    """Shared behaviour of coefficient-field contexts.

    Subclasses provide element arithmetic, ``sigma``, and (for finite
    order) a faithful k0-linear vectorisation ``k0_vec`` of k together
    with the matching scalar adapter ``k0_scalars``.
    """

    sigma_order = None  # int for finite order, None for infinite

    def sigma(self, a, i):
        raise NotImplementedError

    def field_spec(self):
        raise NotImplementedError

    def sigma_spec(self):
        raise NotImplementedError

    # -- sigma-degree and witnesses --------------------------------------

    def sigma_degree(self, a, cap):
        """Least j in 1..cap with sigma^j(a) = a, or None if there is none."""
        b = a
        for j in range(1, cap + 1):
            b = self.sigma(b, 1)
            if b == a:
                return j
        return None

    def find_witness(self, min_degree):
        """An element moved by every relevant power of sigma.

        For infinite order this is the designated generator (t); for
        finite order n >= min_degree it is a normal-basis element, whose
        sigma-degree is exactly n.  Raises NoWitness when n < min_degree.
        """
        if self.sigma_order is None:
            return self._designated_witness()
        if self.sigma_order < min_degree:
            raise NoWitness(
                f"sigma has order {self.sigma_order}, below the requested degree {min_degree}"
            )
        return self._normal_basis_elem()

    def _designated_witness(self):
        raise InfiniteOrder("no designated witness for this context")

    def _normal_basis_elem(self):
        raise InfiniteOrder("normal bases require finite sigma order")

    # -- k0-linear algebra ------------------------------------------------

    def k0_vec(self, a):
        """Coordinates of a over k0 as a tuple of k0 scalars."""
        raise InfiniteOrder("k0-linear algebra requires finite sigma order")

    def k0_scalars(self):
        raise InfiniteOrder("k0-linear algebra requires finite sigma order")

    def k0_vec_basis(self):
        """Elements of k whose k0_vec images are the standard basis vectors."""
        raise InfiniteOrder("k0-linear algebra requires finite sigma order")

    def k0_basis(self):
        return self.k0_vec_basis()

    def k0_scalar_to_elem(self, c):
        raise InfiniteOrder("k0-linear algebra requires finite sigma order")

    def coords(self, a, basis):
        """Coordinates of a against a k0-independent basis, or NotInSpan."""
        scalars = self.k0_scalars()
        cols = [self.k0_vec(b) for b in basis]
        sol = solve_from_columns(cols, self.k0_vec(a), scalars)
        if sol is None:
            raise NotInSpan("element is not in the k0-span of the given basis")
        return sol

    def solve_k0_linear(self, columns, rhs):
        """Particular solution over k0 (free variables zero), or None."""
        return solve_from_columns(columns, rhs, self.k0_scalars())

    def k0_span_dim(self, elems):
        return rank_of_vectors([self.k0_vec(a) for a in elems], self.k0_scalars())

    def is_k0_independent(self, elems):
        return self.k0_span_dim(elems) == len(elems)

    def sigma_minus_one_preimage(self, c):
        """Some z with sigma(z) - z = c, free coordinates pinned to zero."""
        basis = self.k0_vec_basis()
        cols = getattr(self, "_sig_minus_one_cols", None)
        if cols is None:
            cols = [self.k0_vec(self.sigma(b, 1) - b) for b in basis]
            self._sig_minus_one_cols = cols
        sol = solve_from_columns(cols, self.k0_vec(c), self.k0_scalars())
        if sol is None:
            raise NotInL("element is not in the image of sigma - 1")
        z = self.zero()
        for ci, bi in zip(sol, basis):
            z = z + self.k0_scalar_to_elem(ci) * bi
        return z

    def build_order4_ctx(self):
        if self.sigma_order is None:
            raise InfiniteOrder("order-4 context requires sigma of order 4")
        if self.sigma_order != 4:
            raise UnsupportedOrder(
                self.sigma_order, "order-4 context requires sigma of order 4"
            )
        cached = getattr(self, "_order4_ctx", None)
        if cached is None:
            cached = Order4Ctx(self)
            self._order4_ctx = cached
        return cached


# ---------------------------------------------------------------------------
# finite fields


class FFElem:
    """Element of GF(p^m), stored as a packed base-p integer."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx, value):
        self.ctx = ctx
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElem(self.ctx, self.ctx._add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElem(self.ctx, self.ctx._add(self.value, self.ctx._neg(o.value)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return FFElem(self.ctx, self.ctx._neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElem(self.ctx, self.ctx._mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        return FFElem(self.ctx, self.ctx._pow(self.value, k))

    def inverse(self):
        return FFElem(self.ctx, self.ctx._inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.value == o.value

    def __hash__(self):
        return hash((self.ctx.key, self.value))

    def __str__(self):
        return self.ctx.format_elem(self)

    def __repr__(self):
        return f"FFElem({self.ctx.format_elem(self)})"


class FiniteFieldCtx(FieldCtx):
    """GF(p^m) with sigma = Frobenius^e.

    Arithmetic uses exp/log and Zech-logarithm tables (plus per-power
    sigma permutation tables) when p^m is small; otherwise it falls back
    to polynomial arithmetic modulo the defining polynomial, with sigma
    applied as a precomputed GF(p)-linear matrix.
    """

    def __init__(self, p, m, frob_power=1, modulus=None):
        if not _is_prime(p):
            raise FieldSpecError(f"{p} is not prime")
        if m < 1:
            raise FieldSpecError("extension degree must be positive")
        if frob_power < 1:
            raise FieldSpecError("Frobenius power must be a positive integer")
        e = frob_power % m
        if e == 0:
            raise IdentityAutomorphism(
                f"frob^{frob_power} is the identity on GF({p}^{m})"
            )
        if modulus is None:
            modulus = default_modulus(p, m)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise FieldSpecError(f"modulus must be monic of degree {m}")
        if not _is_irreducible(modulus, p):
            raise FieldSpecError(f"modulus {list(modulus)} is reducible over GF({p})")

        self.p = p
        self.m = m
        self.q = p**m
        self.frob_power = frob_power
        self.e = e
        self.modulus = modulus
        self.subfield_degree = gcd(m, e)  # k0 = GF(p^subfield_degree)
        self.sigma_order = m // self.subfield_degree
        self.key = ("gf", p, m, e, modulus)
        self._qm1 = self.q - 1
        self._exp = None
        self._log = None
        self._zech = None
        self._sig_tabs = None
        self._sig_mats = None
        self._moore = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()
        else:
            self._build_sigma_matrices()

    # -- representation helpers ------------------------------------------

    def _digits(self, v):
        out = []
        for _ in range(self.m):
            v, d = divmod(v, self.p)
            out.append(d)
        return tuple(out)

    def _pack(self, ds):
        v = 0
        for d in reversed(tuple(ds)):
            v = v * self.p + d % self.p
        return v

    def _build_tables(self):
        p, q, qm1, mod = self.p, self.q, self._qm1, self.modulus
        fac = _prime_factors(qm1) if qm1 > 1 else []
        alpha = None
        for cand in range(p, q):  # the generator polynomial x is packed as p
            poly = _ptrim(self._digits(cand))
            if all(_ppowmod(poly, qm1 // f, mod, p) != (1,) for f in fac):
                alpha = poly
                break
        if alpha is None:
            for cand in range(2, p):
                poly = (cand,)
                if all(_ppowmod(poly, qm1 // f, mod, p) != (1,) for f in fac):
                    alpha = poly
                    break
        exp = [0] * qm1
        cur = (1,)
        for i in range(qm1):
            exp[i] = self._pack(cur + (0,) * (self.m - len(cur)))
            cur = _pmulmod(cur, alpha, mod, p)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        one_digits = self._digits(1)
        zech = [0] * qm1
        for d in range(qm1):
            summed = _padd(one_digits, self._digits(exp[d]), p)
            s = self._pack(summed + (0,) * (self.m - len(summed)))
            zech[d] = log[s] if s else -1
        self._exp, self._log, self._zech = exp, log, zech
        self._neg_log = 0 if p == 2 else qm1 // 2
        tabs = []
        for j in range(self.sigma_order):
            mult = pow(p, (self.e * j) % self.m, qm1) if qm1 > 1 else 0
            tab = [0] * q
            for i in range(qm1):
                tab[exp[i]] = exp[(i * mult) % qm1]
            tabs.append(tab)
        self._sig_tabs = tabs

    def _build_sigma_matrices(self):
        p, mod, m = self.p, self.modulus, self.m
        base = _ppowmod((0, 1), p**self.e, mod, p)
        cols = []
        img = (1,)
        for _ in range(m):
            cols.append(tuple(img) + (0,) * (m - len(img)))
            img = _pmulmod(img, base, mod, p)
        mat1 = [[cols[c][r] for c in range(m)] for r in range(m)]
        mats = [[[1 if r == c else 0 for c in range(m)] for r in range(m)]]
        cur = mats[0]
        for _ in range(1, self.sigma_order):
            cur = [
                [sum(mat1[r][k] * cur[k][c] for k in range(m)) % p for c in range(m)]
                for r in range(m)
            ]
            mats.append(cur)
        self._sig_mats = mats

    # -- packed arithmetic -------------------------------------------------

    def _add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        if self._log is not None:
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % self._qm1]
            if z < 0:
                return 0
            return self._exp[(la + z) % self._qm1]
        s = _padd(self._digits(a), self._digits(b), self.p)
        return self._pack(s + (0,) * (self.m - len(s)))

    def _neg(self, a):
        if a == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._neg_log) % self._qm1]
        return self._pack(tuple(-d % self.p for d in self._digits(a)))

    def _mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % self._qm1]
        prod = _pmulmod(_ptrim(self._digits(a)), _ptrim(self._digits(b)), self.modulus, self.p)
        return self._pack(prod + (0,) * (self.m - len(prod)))

    def _inv(self, a):
        if a == 0:
            raise ZeroNotInvertible("0 has no inverse")
        if self._log is not None:
            return self._exp[-self._log[a] % self._qm1]
        return self._pow(a, self._qm1 - 1)

    def _pow(self, a, k):
        if a == 0:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise ZeroNotInvertible("0 has no negative powers")
        if self._log is not None:
            return self._exp[(self._log[a] * k) % self._qm1]
        k %= self._qm1
        out, base = (1,), _ptrim(self._digits(a))
        while k:
            if k & 1:
                out = _pmulmod(out, base, self.modulus, self.p)
            base = _pmulmod(base, base, self.modulus, self.p)
            k >>= 1
        return self._pack(out + (0,) * (self.m - len(out)))

    def sigma(self, a, i=1):
        j = i % self.sigma_order
        if j == 0:
            return a
        if self._sig_tabs is not None:
            return FFElem(self, self._sig_tabs[j][a.value])
        mat = self._sig_mats[j]
        ds = self._digits(a.value)
        out = tuple(sum(row[c] * ds[c] for c in range(self.m)) % self.p for row in mat)
        return self._pack_elem(out)

    def _pack_elem(self, ds):
        return FFElem(self, self._pack(ds))

    # -- constructors ------------------------------------------------------

    def zero(self):
        return FFElem(self, 0)

    def one(self):
        return FFElem(self, 1)

    def from_int(self, v):
        return FFElem(self, v % self.p)

    def gen(self):
        """The residue of the generator polynomial (printed as g)."""
        return FFElem(self, self.p % self.q)

    def elem(self, coeffs):
        """Element from GF(p) coefficients of 1, g, g^2, ..."""
        ds = [c % self.p for c in coeffs]
        if len(ds) > self.m:
            raise FieldSpecError("too many coefficients")
        ds += [0] * (self.m - len(ds))
        return FFElem(self, self._pack(ds))

    def elements(self):
        return (FFElem(self, v) for v in range(self.q))

    def random_elem(self, rng):
        return FFElem(self, rng.randrange(self.q))

    def k0_scalar_elements(self):
        """All scalars of k0, in a fixed order, as k0_scalars() values."""
        cached = getattr(self, "_k0_scalar_elems", None)
        if cached is not None:
            return cached
        if self.subfield_degree == 1:
            out = list(range(self.p))
        else:
            # k0 = Fix(sigma): kernel of sigma - 1 as a GF(p)-linear map
            mod_p = _ModPScalars(self.p)
            cols = []
            for i in range(self.m):
                b = FFElem(self, self.p**i)
                cols.append(self._digits((self.sigma(b, 1) - b).value))
            kb = kernel_from_columns(cols, mod_p)
            out = []
            for combo in itertools.product(range(self.p), repeat=len(kb)):
                ds = [0] * self.m
                for c, vec in zip(combo, kb):
                    for idx, d in enumerate(vec):
                        ds[idx] = (ds[idx] + c * d) % self.p
                out.append(FFElem(self, self._pack(ds)))
        self._k0_scalar_elems = out
        return out

    @property
    def characteristic(self):
        return self.p

    def __eq__(self, other):
        return isinstance(other, FiniteFieldCtx) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FiniteFieldCtx({self.field_spec()!r}, {self.sigma_spec()!r})"

    # -- formatting ----------------------------------------------------------

    def format_elem(self, a):
        ds = self._digits(a.value)
        parts = []
        for i in range(self.m - 1, -1, -1):
            c = ds[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("g" if c == 1 else f"{c}*g")
            else:
                parts.append(f"g^{i}" if c == 1 else f"{c}*g^{i}")
        return "+".join(parts) if parts else "0"

    def field_spec(self):
        poly = ",".join(str(c) for c in self.modulus)
        return f"gf({self.p}^{self.m});poly={poly}"

    def sigma_spec(self):
        return "frob" if self.frob_power == 1 else f"frob^{self.frob_power}"

    # -- witnesses and k0 vectorisation ------------------------------------

    def _normal_basis_elem(self):
        cached = getattr(self, "_normal_elem", None)
        if cached is not None:
            return cached
        n = self.sigma_order
        rng = random.Random(f"{_WITNESS_SEED}:{self.field_spec()}:{self.sigma_spec()}")
        scalars = _ElemScalars(self)
        for _ in range(256):
            y = self.random_elem(rng)
            if not y:
                continue
            conj = [self.sigma(y, j) for j in range(n)]
            rows = [[self.sigma(c, j) for c in conj] for j in range(n)]
            if rank_of_vectors(rows, scalars) == n:
                self._normal_elem = y
                return y
        raise NoWitness("normal basis search exhausted its retry budget")

    def k0_vec(self, a):
        if self.subfield_degree == 1:
            return self._digits(a.value)
        moore = self._k0_moore()
        basis, inv_rows, scalars = moore
        rhs = [self.sigma(a, j) for j in range(self.sigma_order)]
        return tuple(_dot(row, rhs, scalars) for row in inv_rows)

    def _k0_moore(self):
        if self._moore is None:
            n = self.sigma_order
            y = self._normal_basis_elem()
            basis = [self.sigma(y, i) for i in range(n)]
            rows = [[self.sigma(b, j) for b in basis] for j in range(n)]
            scalars = _ElemScalars(self)
            inv_rows = invert_matrix(rows, scalars)
            self._moore = (basis, inv_rows, scalars)
        return self._moore

    def k0_scalars(self):
        if self.subfield_degree == 1:
            return _ModPScalars(self.p)
        return _ElemScalars(self)

    def k0_vec_basis(self):
        if self.subfield_degree == 1:
            return [FFElem(self, self.p**i) for i in range(self.m)]
        return list(self._k0_moore()[0])

    def k0_scalar_to_elem(self, c):
        if isinstance(c, FFElem):
            return c
        return self.from_int(c)


# ---------------------------------------------------------------------------
# rational functions over Q


_QONE = (Fraction(1),)


def _qtrim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _qadd(a, b):
    n = max(len(a), len(b))
    return _qtrim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _qneg(a):
    return tuple(-c for c in a)


def _qmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _qtrim(out)


def _qdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        if c:
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _qtrim(q), _qtrim(a)


def _qgcd(a, b):
    while b:
        a, b = b, _qdivmod(a, b)[1]
    if a and a[-1] != 1:
        inv = 1 / a[-1]
        a = tuple(c * inv for c in a)
    return a


def _qshift(cs, j):
    """Substitute t -> t + j into a polynomial (Horner form)."""
    if len(cs) <= 1 or j == 0:
        return cs
    res = ()
    for c in reversed(cs):
        shifted = [Fraction(0)] * (len(res) + 1)
        for k, rk in enumerate(res):
            shifted[k + 1] += rk
            shifted[k] += rk * j
        shifted[0] += c
        res = _qtrim(shifted)
    return res


def _qscale_sub(cs, factor):
    """Substitute t -> factor * t into a polynomial."""
    out = []
    f = Fraction(1)
    for c in cs:
        out.append(c * f)
        f *= factor
    return _qtrim(out)


class RatFunc:
    """Reduced fraction of polynomials over Q, denominator monic."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx, num, den=_QONE, reduce=True):
        num = _qtrim(num)
        den = _qtrim(den)
        if not den:
            raise ZeroNotInvertible("zero denominator")
        if not num:
            den = _QONE
        elif den != _QONE:
            if reduce:
                g = _qgcd(num, den)
                if len(g) > 1:
                    num = _qdivmod(num, g)[0]
                    den = _qdivmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                inv = 1 / lead
                num = tuple(c * inv for c in num)
                den = tuple(c * inv for c in den)
            if len(den) == 1:
                den = _QONE
        self.ctx = ctx
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_fraction(Fraction(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == _QONE and o.den == _QONE:
            return RatFunc(self.ctx, _qadd(self.num, o.num), reduce=False)
        num = _qadd(_qmul(self.num, o.den), _qmul(o.num, self.den))
        return RatFunc(self.ctx, num, _qmul(self.den, o.den))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RatFunc(self.ctx, _qneg(self.num), self.den, reduce=False)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == _QONE and o.den == _QONE:
            return RatFunc(self.ctx, _qmul(self.num, o.num), reduce=False)
        return RatFunc(self.ctx, _qmul(self.num, o.num), _qmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self):
        if not self.num:
            raise ZeroNotInvertible("0 has no inverse")
        return RatFunc(self.ctx, self.den, self.num, reduce=False)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den == _QONE:
            return _qpoly_str(self.num)
        return f"({_qpoly_str(self.num)})/({_qpoly_str(self.den)})"

    def __repr__(self):
        return f"RatFunc({self})"


def _qpoly_str(cs):
    if not cs:
        return "0"
    parts = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            sym = "t" if i == 1 else f"t^{i}"
            if c == 1:
                parts.append(sym)
            elif c == -1:
                parts.append(f"-{sym}")
            else:
                parts.append(f"{c}*{sym}")
    out = parts[0]
    for part in parts[1:]:
        out += part if part.startswith("-") else "+" + part
    return out


class RationalFunctionCtx(FieldCtx):
    """Q(t) with sigma(t) = t + 1 (shift) or sigma(t) = q*t (scale)."""

    def __init__(self, kind, scale=None):
        if kind == "shift":
            if scale is not None:
                raise FieldSpecError("shift takes no scale parameter")
            self.scale = None
        elif kind == "scale":
            scale = Fraction(scale)
            if scale == 0 or scale == 1 or scale == -1:
                raise FieldSpecError("scale factor must lie outside {0, 1, -1}")
            self.scale = scale
        else:
            raise FieldSpecError(f"unknown automorphism kind {kind!r}")
        self.kind = kind
        self.sigma_order = None
        self.key = ("qt", kind, self.scale)

    def sigma(self, a, i=1):
        if i == 0 or (len(a.num) <= 1 and a.den == _QONE):
            return a
        if self.kind == "shift":
            j = Fraction(i)
            return RatFunc(self, _qshift(a.num, j), _qshift(a.den, j), reduce=False)
        f = self.scale**i
        return RatFunc(self, _qscale_sub(a.num, f), _qscale_sub(a.den, f), reduce=False)

    def zero(self):
        return RatFunc(self, ())

    def one(self):
        return RatFunc(self, _QONE, reduce=False)

    def from_int(self, v):
        return RatFunc(self, (Fraction(v),), reduce=False)

    def from_fraction(self, fr):
        return RatFunc(self, (Fraction(fr),), reduce=False)

    def gen(self):
        """The independent variable t."""
        return RatFunc(self, (Fraction(0), Fraction(1)), reduce=False)

    def random_elem(self, rng):
        """Small random rational function (degrees kept low for speed)."""
        num = tuple(Fraction(rng.randint(-4, 4)) for _ in range(rng.randint(1, 3)))
        if rng.random() < 0.5:
            return RatFunc(self, num)
        den = (Fraction(rng.randint(-3, 3)), Fraction(1))
        return RatFunc(self, num, den)

    @property
    def characteristic(self):
        return 0

    def _designated_witness(self):
        return self.gen()

    def field_spec(self):
        return "qt"

    def sigma_spec(self):
        return "shift" if self.kind == "shift" else f"scale:{self.scale}"

    def __eq__(self, other):
        return isinstance(other, RationalFunctionCtx) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"RationalFunctionCtx({self.sigma_spec()!r})"

    def format_elem(self, a):
        return str(a)


# ---------------------------------------------------------------------------
# order-4 subspace context


class Order4Ctx:
    """Subspaces of k attached to an order-4 sigma.

    Built from a normal-basis element y:

    * ``l_basis`` spans L = Im(sigma - 1), dimension 3;
    * ``e1`` spans k1 = {z : sigma(z) = -z};
    * ``e2`` and sigma(e2) span k2 = {z : sigma^2(z) = -z}.

    Both k1 and k2 sit inside L, and k2 is closed under inversion of its
    nonzero elements.
    """

    def __init__(self, ctx):
        self.ctx = ctx
        y = ctx._normal_basis_elem()
        sy = ctx.sigma(y, 1)
        s2 = ctx.sigma(y, 2)
        s3 = ctx.sigma(y, 3)
        self.y = y
        self.l_basis = (y - sy, sy - s2, s2 - s3)
        self.e1 = y - sy + s2 - s3
        self.e2 = y - s2
        self.k2_basis = (self.e2, ctx.sigma(self.e2, 1))
        scalars = ctx.k0_scalars()
        full = list(self.l_basis) + [y]
        vecs = [ctx.k0_vec(b) for b in full]
        if len(vecs[0]) != 4:
            raise UnsupportedOrder(ctx.sigma_order, "order-4 context needs [k:k0] = 4")
        rows = [[vecs[j][i] for j in range(4)] for i in range(4)]
        self._scalars = scalars
        self._inv_rows = invert_matrix(rows, scalars)

    def full_coords(self, a):
        """Coordinates of a against (l_basis[0], l_basis[1], l_basis[2], y)."""
        vec = self.ctx.k0_vec(a)
        return tuple(_dot(row, vec, self._scalars) for row in self._inv_rows)

    def in_l(self, a):
        return self._scalars.is_zero(self.full_coords(a)[3])

    def l_coords(self, a):
        fc = self.full_coords(a)
        if not self._scalars.is_zero(fc[3]):
            raise NotInL("element is not in the image of sigma - 1")
        return fc[:3]

    def in_k1(self, a):
        # k1 is spanned by e1 = l_basis[0] + l_basis[2]
        c1, c2, c3, cy = self.full_coords(a)
        s = self._scalars
        return s.is_zero(c2) and s.is_zero(cy) and s.is_zero(s.sub(c1, c3))
