"""Exact arithmetic in truncated p-adic rings and their unramified extensions.

The central object is ``WittCoefRing``: the ring W(F_{p^f}) truncated at
precision N, represented concretely as (Z/p^N)[t]/(m) for a monic lift m of an
irreducible polynomial over F_p.  The case f=1 is plain Z/p^N.  Every ring in
this library implements the small ``Ring`` interface so that series and matrix
code can stay generic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction


class RingMismatch(ValueError):
    """Operands belong to different rings."""


class HenselFailure(ArithmeticError):
    """Newton refinement impossible: derivative not a unit at the start point."""


class NotDivisible(ArithmeticError):
    """Exact division by p requested on an element not congruent to 0 mod p."""

    def __init__(self, witness):
        super().__init__("not divisible by p, residue witness %r" % (witness,))
        self.witness = witness


def is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Ring:
    """Interface for exact coefficient rings.

    Elements are opaque values; all arithmetic goes through the ring object.
    Subclasses override what they support; optional structure (locality,
    valuations, finite enumeration) raises by default.
    """

    def zero(self):
        raise NotImplementedError

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def is_zero(self, a):
        raise NotImplementedError

    def is_unit(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        r = self.one()
        b = a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def scalar(self, n, a):
        """n*a for an integer n."""
        return self.mul(self.from_int(n), a)

    # local-ring structure (declared, not inferred)

    def is_local(self):
        return False

    def in_max_ideal(self, a):
        raise NotImplementedError(f"{self!r} has no declared maximal ideal")

    def residue_ring(self):
        raise NotImplementedError

    def residue(self, a):
        raise NotImplementedError

    # chain-ring structure: a = unit * p^v, used by Smith normal form

    def val_unit(self, a):
        raise NotImplementedError(f"{self!r} is not a chain ring")

    def chain_length(self):
        raise NotImplementedError

    # finite enumeration (small rings only)

    def elements(self):
        raise NotImplementedError(f"{self!r} is not finitely enumerable")

    def size(self):
        raise NotImplementedError

    def rand(self, rng):
        raise NotImplementedError

    # serialization

    def descriptor(self):
        raise NotImplementedError

    def encode(self, a):
        raise NotImplementedError

    def decode(self, s):
        raise NotImplementedError

    def same_ring(self, other):
        return isinstance(other, Ring) and self.descriptor() == other.descriptor()

    def check_same(self, other):
        if not self.same_ring(other):
            raise RingMismatch(f"{self!r} vs {other!r}")


@dataclass(frozen=True)
class WittElem:
    """Element of a WittCoefRing: tuple of residues in [0, p^N), low to high in t."""

    ring: "WittCoefRing"
    coeffs: tuple

    def __post_init__(self):
        q = self.ring.modulus
        assert len(self.coeffs) == self.ring.f
        assert all(isinstance(c, int) and 0 <= c < q for c in self.coeffs)

    def _coerce(self, other):
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, WittElem):
            self.ring.check_same(other.ring)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return self.ring.neg(self)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        return self.ring.pow(self, n)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, WittElem):
            return NotImplemented
        return self.ring.same_ring(other.ring) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                v = "t" if i == 1 else f"t^{i}"
                terms.append(v if c == 1 else f"{c}*{v}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} mod {self.ring.p}^{self.ring.N}>"


def _poly_mul_mod(a, b, lift, q):
    """Multiply coefficient tuples a, b mod (m, q) for the monic lift m."""
    f = len(lift) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % q
    # reduce by the monic polynomial: x^f = -(lift[0] + ... + lift[f-1] x^{f-1})
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c == 0:
            continue
        prod[k] = 0
        for j in range(f):
            prod[k - f + j] = (prod[k - f + j] - c * lift[j]) % q
    prod = prod[:f] + [0] * (f - len(prod))
    return tuple(c % q for c in prod[:f])


def _fp_poly_divmod(num, den, p):
    """Division with remainder in F_p[t]; polynomials as low-to-high int lists."""
    num = [c % p for c in num]
    den = [c % p for c in den]
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError
    dlead = pow(den[-1], -1, p)
    deg_d = len(den) - 1
    quo = [0] * max(1, len(num) - deg_d)
    rem = list(num)
    for k in range(len(rem) - 1, deg_d - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        q = (c * dlead) % p
        quo[k - deg_d] = q
        for j in range(deg_d + 1):
            rem[k - deg_d + j] = (rem[k - deg_d + j] - q * den[j]) % p
    while rem and rem[-1] == 0:
        rem.pop()
    return quo, rem


def _fp_irreducible(poly, p):
    """Brute-force irreducibility over F_p for small degree (f <= 8)."""
    poly = [c % p for c in poly]
    f = len(poly) - 1
    if f < 1 or poly[-1] % p != 1:
        return False
    for d in range(1, f // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            den = list(tail) + [1]
            _, rem = _fp_poly_divmod(poly, den, p)
            if not rem:
                return False
    return True


class WittCoefRing(Ring):
    """W(F_{p^f}) at p-adic precision N, as (Z/p^N)[t]/(m).

    ``ext`` is the mod-p extension polynomial, low-to-high including the
    leading 1 (length f+1); omit for f=1 (plain Z/p^N).  ``lift`` optionally
    replaces the default integer-coefficient lift of ``ext`` by another monic
    lift mod p^N.
    """

    def __init__(self, p, N, ext=None, lift=None):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if not isinstance(N, int) or N < 1:
            raise ValueError(f"precision N={N} must be >= 1")
        self.p = p
        self.N = N
        self.modulus = p ** N
        if ext is None:
            self.ext = None
            self.f = 1
            self.lift = None
        else:
            ext = [c % p for c in ext]
            if len(ext) < 2 or ext[-1] != 1:
                raise ValueError("extension polynomial must be monic of degree >= 1")
            if not _fp_irreducible(ext, p):
                raise ValueError(f"extension polynomial {ext} is reducible mod {p}")
            self.ext = tuple(ext)
            self.f = len(ext) - 1
            if lift is None:
                lift = list(ext)
            lift = [c % self.modulus for c in lift]
            if len(lift) != len(ext) or lift[-1] != 1:
                raise ValueError("lift must be monic of the same degree as ext")
            if [c % p for c in lift] != list(ext):
                raise ValueError("lift does not reduce to ext mod p")
            self.lift = tuple(lift)
        self._frob = None

    # construction helpers

    def elem(self, coeffs):
        if isinstance(coeffs, int):
            coeffs = (coeffs,) + (0,) * (self.f - 1)
        coeffs = tuple(c % self.modulus for c in coeffs)
        if len(coeffs) < self.f:
            coeffs = coeffs + (0,) * (self.f - len(coeffs))
        assert len(coeffs) == self.f
        return WittElem(self, coeffs)

    def gen(self):
        """The class of t (only meaningful when f > 1)."""
        if self.f == 1:
            return self.one()
        return self.elem((0, 1))

    def zero(self):
        return self.elem(0)

    def from_int(self, n):
        return self.elem(n % self.modulus)

    def add(self, a, b):
        return self.elem(tuple((x + y) % self.modulus for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a):
        return self.elem(tuple((-x) % self.modulus for x in a.coeffs))

    def mul(self, a, b):
        if self.f == 1:
            return self.elem((a.coeffs[0] * b.coeffs[0]) % self.modulus)
        return self.elem(_poly_mul_mod(a.coeffs, b.coeffs, self.lift, self.modulus))

    def is_zero(self, a):
        return all(c == 0 for c in a.coeffs)

    def is_unit(self, a):
        return any(c % self.p for c in a.coeffs)

    def inv(self, a):
        """Inverse of a unit: residue-field inverse lifted by Newton iteration."""
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a!r} is not a unit")
        p = self.p
        if self.f == 1:
            b = self.elem(pow(a.coeffs[0] % p, -1, p))
        else:
            # extended Euclid in F_p[t] mod ext
            r0, r1 = list(self.ext), [c % p for c in a.coeffs]
            s0, s1 = [0], [1]
            while True:
                while r1 and r1[-1] == 0:
                    r1.pop()
                if len(r1) == 1:
                    c = pow(r1[0], -1, p)
                    binv = [(c * x) % p for x in s1]
                    break
                q, r = _fp_poly_divmod(r0, r1, p)
                qs = [0] * (len(q) + len(s1) - 1)
                for i, x in enumerate(q):
                    for j, y in enumerate(s1):
                        qs[i + j] = (qs[i + j] + x * y) % p
                s_new = [(x - y) % p for x, y in itertools.zip_longest(s0, qs, fillvalue=0)]
                r0, r1, s0, s1 = r1, r, s1, s_new
            binv = _fp_poly_divmod(binv, list(self.ext), p)[1] or [0]
            b = self.elem(tuple(binv))
        two = self.from_int(2)
        for _ in range(max(1, self.N.bit_length()) + 1):
            b = self.mul(b, self.sub(two, self.mul(a, b)))
        assert self.eq(self.mul(a, b), self.one())
        return b

    # local structure: maximal ideal is (p)

    def is_local(self):
        return True

    def in_max_ideal(self, a):
        return all(c % self.p == 0 for c in a.coeffs)

    def residue_ring(self):
        if self.N == 1:
            return self
        return WittCoefRing(self.p, 1, self.ext)

    def residue(self, a):
        r = self.residue_ring()
        return r.elem(tuple(c % self.p for c in a.coeffs))

    def val_unit(self, a):
        """Write a = u * p^v with u a unit; returns (None, zero) for a = 0."""
        if self.is_zero(a):
            return None, a
        v = min((self._ival(c) for c in a.coeffs if c), default=self.N)
        u = self.elem(tuple(c // self.p ** v for c in a.coeffs))
        return v, u

    def _ival(self, c):
        v = 0
        while c % self.p == 0:
            c //= self.p
            v += 1
        return v

    def chain_length(self):
        return self.N

    # enumeration

    def elements(self):
        for coeffs in itertools.product(range(self.modulus), repeat=self.f):
            yield WittElem(self, coeffs)

    def size(self):
        return self.modulus ** self.f

    def rand(self, rng):
        return self.elem(tuple(rng.randrange(self.modulus) for _ in range(self.f)))

    # precision handling

    def lower(self, drop=1):
        """The same ring at precision N - drop."""
        if self.N - drop < 1:
            raise ValueError(f"cannot drop to precision {self.N - drop}")
        return WittCoefRing(self.p, self.N - drop, self.ext, None)

    def truncate_to(self, other, a):
        """Reduce a into the lower-precision ring ``other``."""
        return other.elem(tuple(c % other.modulus for c in a.coeffs))

    def divide_by_p(self, a):
        """Exact division by p; the result lives one precision digit lower."""
        for c in a.coeffs:
            if c % self.p != 0:
                raise NotDivisible(c % self.p)
        low = self.lower()
        return low.elem(tuple(c // self.p for c in a.coeffs))

    def frobenius_lift(self):
        """The ring endomorphism sigma with sigma(x) = x^p mod p, sigma^f = id.

        Constructed by Hensel refinement: the root t of m is moved to the root
        congruent to t^p mod p, and sigma is evaluation of coordinates there.
        For f = 1 this is the identity.
        """
        if self._frob is None:
            self._frob = FrobeniusLift._build(self)
        return self._frob

    def descriptor(self):
        d = {"p": self.p, "N": self.N}
        if self.ext is not None:
            d["ext"] = list(self.ext)
            if self.lift != tuple(c % self.modulus for c in self.ext):
                d["lift"] = list(self.lift)
        return d

    def encode(self, a):
        if self.f == 1:
            return str(a.coeffs[0])
        return [str(c) for c in a.coeffs]

    def decode(self, s):
        if isinstance(s, str):
            return self.elem(int(s))
        return self.elem(tuple(int(c) for c in s))

    def __repr__(self):
        if self.f == 1:
            return f"Z/{self.p}^{self.N}"
        return f"W(F_{self.p}^{self.f}; prec {self.N})"


def ring_from_descriptor(d):
    return WittCoefRing(d["p"], d["N"], d.get("ext"), d.get("lift"))


class FrobeniusLift:
    """Frobenius lift on a WittCoefRing, applied by evaluating t at a Hensel root."""

    def __init__(self, ring, root):
        self.ring = ring
        self.root = root
        pw = [ring.one()]
        for _ in range(ring.f - 1):
            pw.append(ring.mul(pw[-1], root))
        self._root_powers = pw

    @staticmethod
    def _build(ring):
        if ring.f == 1:
            return FrobeniusLift(ring, ring.one())
        p, q = ring.p, ring.modulus
        t = ring.gen()
        s = ring.pow(t, p)
        mprime = _poly_derivative(ring.lift, q)
        dval = _poly_eval(ring, mprime, s)
        if not ring.is_unit(dval):
            raise HenselFailure("m'(t^p) is not a unit; extension not separable?")
        for _ in range(max(1, ring.N.bit_length()) + 1):
            fs = _poly_eval(ring, ring.lift, s)
            ds = _poly_eval(ring, mprime, s)
            s = ring.sub(s, ring.mul(fs, ring.inv(ds)))
        if not ring.is_zero(_poly_eval(ring, ring.lift, s)):
            raise HenselFailure("Newton iteration failed to converge")
        return FrobeniusLift(ring, s)

    def __call__(self, a):
        r = self.ring
        out = r.zero()
        for i, c in enumerate(a.coeffs):
            if c:
                out = r.add(out, r.scalar(c, self._root_powers[i]))
        return out

    def power(self, k):
        """sigma^k as a plain function (k may be negative; sigma^f = id)."""
        k = k % self.ring.f

        def apply(a, _k=k):
            for _ in range(_k):
                a = self(a)
            return a

        return apply

    def __repr__(self):
        return f"Frobenius lift on {self.ring!r} (t -> {self.root!r})"


def _poly_derivative(coeffs, q):
    return tuple((i * c) % q for i, c in enumerate(coeffs))[1:] or (0,)


def _poly_eval(ring, coeffs, x):
    out = ring.zero()
    for c in reversed(coeffs):
        out = ring.add(ring.mul(out, x), ring.from_int(c))
    return out


class IntegerRing(Ring):
    """Exact integers; used by tests and as a sanity base ring."""

    def zero(self):
        return 0

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        return a

    def descriptor(self):
        return {"ring": "Z"}

    def encode(self, a):
        return str(a)

    def decode(self, s):
        return int(s)

    def rand(self, rng):
        return rng.randrange(-20, 21)

    def __repr__(self):
        return "Z"


class RationalField(Ring):
    """Exact rationals (Fraction); the working field for Honda-style logarithms."""

    def zero(self):
        return Fraction(0)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        return 1 / Fraction(a)

    def descriptor(self):
        return {"ring": "Q"}

    def encode(self, a):
        return str(a)

    def decode(self, s):
        return Fraction(s)

    def rand(self, rng):
        return Fraction(rng.randrange(-12, 13), rng.choice([1, 2, 3, 5]))

    def __repr__(self):
        return "Q"
