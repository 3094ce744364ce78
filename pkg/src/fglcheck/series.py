"""Truncated multivariate power series over an exact coefficient ring.

A TruncSeries stores a sparse map from exponent tuples to nonzero
coefficients, truncated at a fixed total degree bound D.  Multiplication,
composition, reversion and Weierstrass preparation are all exact at the
bound.  PolyTruncRing wraps these series as a coefficient ring in their own
right, which is how Lubin-Tate style base rings W[u_1..u_{n-1}] are built.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact_arith import Ring


class ContextMismatch(ValueError):
    """Series do not share ring, variables and degree bound."""


class NonzeroConstantTerm(ValueError):
    def __init__(self, index):
        super().__init__(f"substituted series #{index} has a nonzero constant term")
        self.index = index


class NonUnitLinearCoefficient(ValueError):
    """Reversion requires the linear coefficient to be a unit."""


class ResidueZero(ValueError):
    """Series reduces to zero mod the maximal ideal; preparation impossible."""


class DegreeOverflow(ValueError):
    """Distinguished degree exceeds the truncation bound."""


class TruncSeries:
    __slots__ = ("ring", "vars", "bound", "terms")

    def __init__(self, ring, vars, bound, terms):
        self.ring = ring
        self.vars = tuple(vars)
        self.bound = bound
        clean = {}
        for e, c in terms.items():
            if sum(e) <= bound and not ring.is_zero(c):
                clean[tuple(e)] = c
        self.terms = clean

    # constructors

    @staticmethod
    def zero(ring, vars, bound):
        return TruncSeries(ring, vars, bound, {})

    @staticmethod
    def const(ring, vars, bound, c):
        return TruncSeries(ring, vars, bound, {(0,) * len(vars): c})

    @staticmethod
    def one(ring, vars, bound):
        return TruncSeries.const(ring, vars, bound, ring.one())

    @staticmethod
    def var(ring, vars, bound, name):
        i = tuple(vars).index(name)
        e = tuple(1 if j == i else 0 for j in range(len(vars)))
        return TruncSeries(ring, vars, bound, {e: ring.one()})

    @staticmethod
    def from_int_terms(ring, vars, bound, int_terms):
        return TruncSeries(ring, vars, bound,
                           {tuple(e): ring.from_int(c) for e, c in int_terms.items()})

    # context

    def same_context(self, other):
        return (self.vars == other.vars and self.bound == other.bound
                and self.ring.same_ring(other.ring))

    def check_context(self, other):
        if not self.same_context(other):
            raise ContextMismatch(f"{self.vars}/{self.bound} vs {other.vars}/{other.bound}")

    # ring operations

    def __add__(self, other):
        self.check_context(other)
        R = self.ring
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                out[e] = R.add(out[e], c)
            else:
                out[e] = c
        return TruncSeries(R, self.vars, self.bound, out)

    def __neg__(self):
        R = self.ring
        return TruncSeries(R, self.vars, self.bound,
                           {e: R.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.int_scalar(other)
        self.check_context(other)
        R = self.ring
        out = {}
        b = self.bound
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > b:
                    continue
                e = tuple(a + bb for a, bb in zip(e1, e2))
                p = R.mul(c1, c2)
                if e in out:
                    out[e] = R.add(out[e], p)
                else:
                    out[e] = p
        return TruncSeries(R, self.vars, self.bound, out)

    __rmul__ = __mul__

    def scalar(self, c):
        R = self.ring
        return TruncSeries(R, self.vars, self.bound,
                           {e: R.mul(c, v) for e, v in self.terms.items()})

    def int_scalar(self, n):
        return self.scalar(self.ring.from_int(n))

    def __pow__(self, n):
        assert n >= 0
        out = TruncSeries.one(self.ring, self.vars, self.bound)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if not self.same_context(other):
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.ring.eq(c, other.terms[e]) for e, c in self.terms.items())

    def __hash__(self):
        return hash((self.vars, self.bound, tuple(sorted(self.terms))))

    # inspection

    def is_zero(self):
        return not self.terms

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.ring.zero())

    def constant_term(self):
        return self.coefficient((0,) * len(self.vars))

    def min_degree(self):
        """Lowest total degree of a nonzero term, or None for the zero series."""
        return min((sum(e) for e in self.terms), default=None)

    def items_sorted(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        chunks = []
        for e, c in self.items_sorted():
            mono = "*".join(f"{v}^{k}" if k > 1 else v
                            for v, k in zip(self.vars, e) if k)
            cc = repr(c)
            chunks.append(f"{cc}*{mono}" if mono else cc)
        return " + ".join(chunks)

    # coefficient maps

    def map_coefficients(self, fn, ring=None):
        R = ring or self.ring
        return TruncSeries(R, self.vars, self.bound,
                           {e: fn(c) for e, c in self.terms.items()})

    def rename(self, new_vars):
        assert len(new_vars) == len(self.vars)
        return TruncSeries(self.ring, tuple(new_vars), self.bound, dict(self.terms))

    def truncate(self, new_bound):
        assert new_bound <= self.bound
        return TruncSeries(self.ring, self.vars, new_bound,
                           {e: c for e, c in self.terms.items() if sum(e) <= new_bound})

    # serialization

    def to_json(self):
        enc = self.ring.encode
        return {"vars": list(self.vars), "D": self.bound,
                "terms": [[list(e), enc(c)] for e, c in self.items_sorted()]}

    @staticmethod
    def from_json(ring, data):
        dec = ring.decode
        return TruncSeries(ring, tuple(data["vars"]), data["D"],
                           {tuple(e): dec(c) for e, c in data["terms"]})


def substitute(f, gs):
    """Formal composition f(g_1, .., g_k), truncated at the g's bound.

    Every g_i must share a context and have zero constant term, so that the
    composition is finitely computable.
    """
    gs = list(gs)
    if len(gs) != len(f.vars):
        raise ContextMismatch(f"need {len(f.vars)} series, got {len(gs)}")
    for i, g in enumerate(gs):
        gs[0].check_context(g)
        if not g.ring.is_zero(g.constant_term()):
            raise NonzeroConstantTerm(i)
    if not f.ring.same_ring(gs[0].ring):
        raise ContextMismatch("coefficient rings differ")
    ctx = gs[0]
    R, vars, bound = ctx.ring, ctx.vars, ctx.bound
    # cache powers of each g_i up to the largest exponent appearing in f
    max_e = [0] * len(gs)
    for e in f.terms:
        for i, k in enumerate(e):
            max_e[i] = max(max_e[i], k)
    powers = []
    for g, me in zip(gs, max_e):
        pw = [TruncSeries.one(R, vars, bound)]
        for _ in range(me):
            pw.append(pw[-1] * g)
        powers.append(pw)
    out = TruncSeries.zero(R, vars, bound)
    for e, c in f.terms.items():
        term = TruncSeries.const(R, vars, bound, c)
        for i, k in enumerate(e):
            if k:
                term = term * powers[i][k]
        out = out + term
    return out


def reversion(f):
    """Compositional inverse of a one-variable series u*x + O(x^2), u a unit."""
    if len(f.vars) != 1:
        raise ContextMismatch("reversion needs a one-variable series")
    R, bound = f.ring, f.bound
    if not R.is_zero(f.constant_term()):
        raise NonzeroConstantTerm(0)
    u = f.coefficient((1,))
    if not R.is_unit(u):
        raise NonUnitLinearCoefficient(f"linear coefficient {u!r} is not a unit")
    uinv = R.inv(u)
    # g(f(x)) = x solved degree by degree; powers of f are reused.
    fpow = [TruncSeries.one(R, f.vars, bound), f]
    for _ in range(bound - 1):
        fpow.append(fpow[-1] * f)
    g = {}
    for k in range(1, bound + 1):
        acc = R.one() if k == 1 else R.zero()
        for j in range(1, k):
            if j in g:
                acc = R.sub(acc, R.mul(g[j], fpow[j].coefficient((k,))))
        gk = R.mul(acc, R.pow(uinv, k))
        if not R.is_zero(gk):
            g[k] = gk
    return TruncSeries(R, f.vars, bound, {(k,): c for k, c in g.items()})


def inverse(f):
    """Multiplicative inverse of a series with unit constant term."""
    R = f.ring
    c0 = f.constant_term()
    if not R.is_unit(c0):
        raise NonUnitLinearCoefficient(f"constant term {c0!r} is not a unit")
    one = TruncSeries.one(R, f.vars, f.bound)
    b = TruncSeries.const(R, f.vars, f.bound, R.inv(c0))
    two = one + one
    for _ in range(max(1, f.bound.bit_length()) + 2):
        b = b * (two - f * b)
        if f * b == one:
            break
    assert f * b == one, "series inversion failed to converge"
    return b


@dataclass
class WeierstrassFactorization:
    unit: TruncSeries
    distinguished: TruncSeries  # monic polynomial of the stated degree
    degree: int


def weierstrass_prepare(f):
    """Factor f = unit * distinguished over a local ring, exactly at the bound.

    The distinguished factor is monic of degree d (the lowest degree of the
    residue reduction of f) with all other coefficients in the maximal ideal.
    Classical successive division: with f = x^d*U + P (U a unit series, P the
    low part with ideal coefficients), the quotient q of x^d by f is the fixed
    point of q -> highdiv(x^d - q*P) * U^{-1}, which converges because every
    correction picks up a factor from the maximal ideal, nilpotent at finite
    precision.
    """
    R = f.ring
    if len(f.vars) != 1:
        raise ContextMismatch("weierstrass_prepare needs a one-variable series")
    if not R.is_local():
        raise ValueError(f"{R!r} does not declare a maximal ideal")
    bound = f.bound
    res = f.map_coefficients(R.residue, ring=R.residue_ring())
    if res.is_zero():
        raise ResidueZero("series is zero modulo the maximal ideal")
    d = res.min_degree()
    if d > bound:
        raise DegreeOverflow(f"distinguished degree {d} exceeds bound {bound}")
    one = TruncSeries.one(R, f.vars, bound)
    if d == 0:
        return WeierstrassFactorization(unit=f, distinguished=one, degree=0)

    def highdiv(h):
        return TruncSeries(R, f.vars, bound,
                           {(e[0] - d,): c for e, c in h.terms.items() if e[0] >= d})

    U = highdiv(f)
    P = TruncSeries(R, f.vars, bound,
                    {e: c for e, c in f.terms.items() if e[0] < d})
    Uinv = inverse(U)
    xd = TruncSeries(R, f.vars, bound, {(d,): R.one()})
    q = TruncSeries.zero(R, f.vars, bound)
    for _ in range(_nilpotency_margin(R) + bound + 4):
        q_next = highdiv(xd - q * P) * Uinv
        if q_next == q:
            break
        q = q_next
    else:
        raise ArithmeticError("weierstrass division did not stabilize")
    r = xd - q * f
    assert all(e[0] < d for e in r.terms), "division remainder has high terms"
    assert all(R.in_max_ideal(c) for c in r.terms.values())
    distinguished = xd - r
    unit = inverse(q)
    assert unit * distinguished == f, "weierstrass recomposition failed"
    return WeierstrassFactorization(unit=unit, distinguished=distinguished, degree=d)


def _nilpotency_margin(R):
    try:
        n = R.chain_length()
    except NotImplementedError:
        n = getattr(R, "nilpotency_hint", 8)
    return n + 2


class PolyTruncRing(Ring):
    """base[v_1..v_k] truncated at a total degree bound, used as a coefficient ring.

    Local whenever the base is, with maximal ideal (max(base), v_1..v_k);
    residue passes through the constant term.
    """

    def __init__(self, base, vars, ubound):
        self.base = base
        self.vars = tuple(vars)
        self.ubound = ubound
        self.nilpotency_hint = ubound + 1 + (base.chain_length()
                                             if _has_chain(base) else 1)

    def zero(self):
        return TruncSeries.zero(self.base, self.vars, self.ubound)

    def from_int(self, n):
        return TruncSeries.const(self.base, self.vars, self.ubound, self.base.from_int(n))

    def from_base(self, c):
        return TruncSeries.const(self.base, self.vars, self.ubound, c)

    def var(self, name):
        return TruncSeries.var(self.base, self.vars, self.ubound, name)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return self.base.is_unit(a.constant_term())

    def inv(self, a):
        return inverse(a)

    def is_local(self):
        return self.base.is_local()

    def in_max_ideal(self, a):
        c0 = a.constant_term()
        return self.base.in_max_ideal(c0) if self.base.is_local() else a.is_zero()

    def residue_ring(self):
        return self.base.residue_ring()

    def residue(self, a):
        return self.base.residue(a.constant_term())

    def rand(self, rng):
        terms = {}
        for _ in range(rng.randrange(1, 4)):
            e = tuple(rng.randrange(0, self.ubound + 1) for _ in self.vars)
            if sum(e) <= self.ubound:
                terms[e] = self.base.rand(rng)
        return TruncSeries(self.base, self.vars, self.ubound, terms)

    def descriptor(self):
        return {"poly_over": self.base.descriptor(), "vars": list(self.vars),
                "ubound": self.ubound}

    def encode(self, a):
        return a.to_json()["terms"]

    def decode(self, s):
        return TruncSeries(self.base, self.vars, self.ubound,
                           {tuple(e): self.base.decode(c) for e, c in s})

    def __repr__(self):
        return f"{self.base!r}[{','.join(self.vars)}]<={self.ubound}"


def _has_chain(R):
    try:
        R.chain_length()
        return True
    except NotImplementedError:
        return False
