"""The omega-twisted Z/2-graded tensor category on finite free modules.

Objects are pairs of free modules; the tensor product twists the odd-odd
block by a fixed rank-1 symmetric object omega:

    (M (x) N)^0 = M^0 (x) N^0  (+)  M^1 (x) N^1 (x) omega
    (M (x) N)^1 = M^0 (x) N^1  (+)  M^1 (x) N^0

The interchange carries a -1 on the odd-odd block; the associator is the
block permutation repositioning the omega factor.  Coherence (pentagon,
triangle, symmetry involution, hexagon) is checked by exact matrix equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .linalg import Mat
from .report import CheckResult, CongruenceReport
from .series import ContextMismatch


class SizeLimit(ValueError):
    """Coherence suite guard against combinatorial blowup."""


class NotInvertible(ValueError):
    """Z-graded assembly needs the twisting object declared invertible."""


@dataclass(frozen=True)
class GradedObj:
    ring: object
    basis0: tuple
    basis1: tuple

    def __post_init__(self):
        names = list(self.basis0) + list(self.basis1)
        if len(set(names)) != len(names):
            raise ValueError("basis names must be distinct across both degrees")

    @property
    def rank0(self):
        return len(self.basis0)

    @property
    def rank1(self):
        return len(self.basis1)

    def ranks(self):
        return (self.rank0, self.rank1)

    def __repr__(self):
        return f"GradedObj(rank {self.rank0}|{self.rank1})"

    def to_json(self):
        return {"basis0": [str(b) for b in self.basis0],
                "basis1": [str(b) for b in self.basis1]}


@dataclass(frozen=True)
class SymObject:
    """The twisting object: a rank-1 free module with trivial self-interchange."""

    ring: object
    gen: str = "w"

    def __post_init__(self):
        # swap on a rank-1 square is the 1x1 identity; assert the triviality
        swap = Mat.identity(self.ring, 1)
        assert swap == Mat.identity(self.ring, 1)

    def as_object(self):
        return GradedObj(self.ring, (self.gen,), ())


def unit_obj(ring):
    return GradedObj(ring, ("1",), ())


def omega_obj(ring, gen="w"):
    return SymObject(ring, gen).as_object()


def omega_sqrt(ring, gen="h"):
    """The odd square root {0, k} of omega."""
    return GradedObj(ring, (), (gen,))


@dataclass(frozen=True)
class GradedMap:
    source: GradedObj
    target: GradedObj
    m0: Mat
    m1: Mat

    def __post_init__(self):
        assert self.m0.shape == (self.target.rank0, self.source.rank0)
        assert self.m1.shape == (self.target.rank1, self.source.rank1)

    @staticmethod
    def identity(obj):
        return GradedMap(obj, obj, Mat.identity(obj.ring, obj.rank0),
                         Mat.identity(obj.ring, obj.rank1))

    def compose(self, other):
        """self after other."""
        assert other.target.ranks() == self.source.ranks()
        return GradedMap(other.source, self.target,
                         self.m0 @ other.m0, self.m1 @ other.m1)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return self.m0 == other.m0 and self.m1 == other.m1

    def __hash__(self):
        raise TypeError("GradedMap is unhashable")

    def is_identity(self):
        ring = self.m0.ring
        return (self.m0 == Mat.identity(ring, self.m0.nrows)
                and self.m1 == Mat.identity(ring, self.m1.nrows))

    def to_json(self):
        return {"m0": self.m0.to_json(), "m1": self.m1.to_json()}


def twisted_tensor(M, N):
    """The omega-twisted tensor object, with summand bookkeeping in the labels.

    Plain pairs are labeled ("t", a, b); the odd-odd block, which carries the
    omega factor, is labeled ("tw", a, b).
    """
    if not M.ring.same_ring(N.ring):
        raise ContextMismatch("objects over different rings")
    b0 = tuple(("t", a, b) for a in M.basis0 for b in N.basis0) + \
        tuple(("tw", a, b) for a in M.basis1 for b in N.basis1)
    b1 = tuple(("t", a, b) for a in M.basis0 for b in N.basis1) + \
        tuple(("t", a, b) for a in M.basis1 for b in N.basis0)
    return GradedObj(M.ring, b0, b1)


def tensor_map(f, g):
    """f (x) g on twisted tensor objects, blockwise Kronecker products."""
    ring = f.m0.ring
    src = twisted_tensor(f.source, g.source)
    tgt = twisted_tensor(f.target, g.target)
    m0 = _block_diag(ring, [f.m0.kron(g.m0), f.m1.kron(g.m1)])
    m1 = _block_diag(ring, [f.m0.kron(g.m1), f.m1.kron(g.m0)])
    return GradedMap(src, tgt, m0, m1)


def _block_diag(ring, blocks):
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    z = ring.zero()
    rows = [[z] * m for _ in range(n)]
    i0 = j0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[i0 + i][j0 + j] = b.rows[i][j]
        i0 += b.nrows
        j0 += b.ncols
    return Mat(ring, rows)


def _perm_matrix(ring, src_basis, tgt_basis, image, signs=None):
    """Matrix of a signed permutation src -> tgt given by an image map on labels."""
    z, one = ring.zero(), ring.one()
    idx = {lbl: i for i, lbl in enumerate(tgt_basis)}
    rows = [[z] * len(src_basis) for _ in range(len(tgt_basis))]
    for j, lbl in enumerate(src_basis):
        out = image(lbl)
        s = one
        if signs is not None:
            sg = signs(lbl)
            s = one if sg >= 0 else ring.neg(one)
        rows[idx[out]][j] = s
    return Mat(ring, rows)


def interchange(M, N):
    """tau: M (x) N -> N (x) M; the odd-odd block picks up a -1."""
    src = twisted_tensor(M, N)
    tgt = twisted_tensor(N, M)
    ring = M.ring

    def image(lbl):
        kind, a, b = lbl
        return (kind, b, a)

    def sign0(lbl):
        return -1 if lbl[0] == "tw" else 1

    m0 = _perm_matrix(ring, src.basis0, tgt.basis0, image, sign0)
    m1 = _perm_matrix(ring, src.basis1, tgt.basis1, image)
    return GradedMap(src, tgt, m0, m1)


def _flatten(lbl):
    """(atoms in left-to-right order, number of omega factors)."""
    if isinstance(lbl, tuple) and len(lbl) == 3 and lbl[0] in ("t", "tw"):
        a_atoms, a_w = _flatten(lbl[1])
        b_atoms, b_w = _flatten(lbl[2])
        return a_atoms + b_atoms, a_w + b_w + (1 if lbl[0] == "tw" else 0)
    return (lbl,), 0


def _match_by_flattening(ring, src_basis, tgt_basis):
    tgt = {}
    for lbl in tgt_basis:
        key = _flatten(lbl)
        assert key not in tgt, f"ambiguous flattening {key}"
        tgt[key] = lbl
    return _perm_matrix(ring, src_basis, tgt_basis, lambda l: tgt[_flatten(l)])


def associator(M, N, P):
    """alpha: (M (x) N) (x) P -> M (x) (N (x) P).

    A pure block permutation: atoms keep their order and only the omega
    factor is repositioned (via the untwisted interchange, which is sign-free
    because omega is symmetric).
    """
    src = twisted_tensor(twisted_tensor(M, N), P)
    tgt = twisted_tensor(M, twisted_tensor(N, P))
    m0 = _match_by_flattening(M.ring, src.basis0, tgt.basis0)
    m1 = _match_by_flattening(M.ring, src.basis1, tgt.basis1)
    return GradedMap(src, tgt, m0, m1)


def left_unitor(M):
    """1 (x) M -> M."""
    src = twisted_tensor(unit_obj(M.ring), M)
    image = lambda lbl: lbl[2]
    return GradedMap(src, M,
                     _perm_matrix(M.ring, src.basis0, M.basis0, image),
                     _perm_matrix(M.ring, src.basis1, M.basis1, image))


def right_unitor(M):
    """M (x) 1 -> M."""
    src = twisted_tensor(M, unit_obj(M.ring))
    image = lambda lbl: lbl[1]
    return GradedMap(src, M,
                     _perm_matrix(M.ring, src.basis0, M.basis0, image),
                     _perm_matrix(M.ring, src.basis1, M.basis1, image))


def from_z_graded(ring, ranks, omega_invertible=True):
    """Assemble {M^0, M^1} from a finitely supported Z-graded free module.

    M^0 collects M_{2k} (x) omega^k and M^1 collects M_{2k-1} (x) omega^k;
    labels remember (degree, index) so the assembly can be inverted.
    """
    if not omega_invertible:
        raise NotInvertible("omega must be invertible to absorb Z-gradings")
    b0, b1 = [], []
    for q in sorted(ranks):
        r = ranks[q]
        if r < 0:
            raise ValueError("ranks must be nonnegative")
        target = b0 if q % 2 == 0 else b1
        for i in range(r):
            target.append(("zg", q, i))
    return GradedObj(ring, tuple(b0), tuple(b1))


def to_z_graded(obj):
    """Inverse of from_z_graded on objects carrying ("zg", q, i) labels."""
    ranks = {}
    for lbl in list(obj.basis0) + list(obj.basis1):
        assert lbl[0] == "zg", "object was not built by from_z_graded"
        ranks[lbl[1]] = ranks.get(lbl[1], 0) + 1
    return ranks


def verify_coherence(ring, objects, interchange_fn=None, max_objects=5,
                     max_rank=3):
    """Pentagon, unit triangle, symmetry involution, hexagon and odd-sign checks.

    All diagrams are compared as exact matrices; the report records the first
    failing diagram with both composite matrices.  interchange_fn allows fault
    injection in tests.
    """
    if len(objects) > max_objects or any(max(o.ranks()) > max_rank for o in objects):
        raise SizeLimit(f"at most {max_objects} objects of rank <= {max_rank}")
    tau = interchange_fn or interchange
    checks = []

    def record(name, lhs, rhs):
        ok = lhs == rhs
        witness = None
        if not ok:
            witness = f"lhs0={lhs.m0.to_json()} rhs0={rhs.m0.to_json()} " \
                      f"lhs1={lhs.m1.to_json()} rhs1={rhs.m1.to_json()}"
        checks.append(CheckResult(name=name, passed=ok, witness=witness))

    for i, (A, B) in enumerate(itertools.product(objects, repeat=2)):
        pair = tau(B, A).compose(tau(A, B))
        record(f"symmetry[{i}]", pair, GradedMap.identity(twisted_tensor(A, B)))
        tri_lhs = tensor_map(GradedMap.identity(A), left_unitor(B)).compose(
            associator(A, unit_obj(ring), B))
        tri_rhs = tensor_map(right_unitor(A), GradedMap.identity(B))
        record(f"triangle[{i}]", tri_lhs, tri_rhs)

    for i, (A, B, C) in enumerate(itertools.product(objects, repeat=3)):
        lhs = associator(B, C, A).compose(tau(A, twisted_tensor(B, C))).compose(
            associator(A, B, C))
        rhs = tensor_map(GradedMap.identity(B), tau(A, C)).compose(
            associator(B, A, C)).compose(
            tensor_map(tau(A, B), GradedMap.identity(C)))
        record(f"hexagon[{i}]", lhs, rhs)

    for i, (A, B, C, D) in enumerate(itertools.product(objects, repeat=4)):
        lhs = associator(A, B, twisted_tensor(C, D)).compose(
            associator(twisted_tensor(A, B), C, D))
        rhs = tensor_map(GradedMap.identity(A), associator(B, C, D)).compose(
            associator(A, twisted_tensor(B, C), D)).compose(
            tensor_map(associator(A, B, C), GradedMap.identity(D)))
        record(f"pentagon[{i}]", lhs, rhs)

    for i, X in enumerate(objects):
        if X.ranks() == (0, 1):
            t = tau(X, X)
            minus_id = Mat.identity(ring, 1).scale(ring.neg(ring.one()))
            record(f"odd_square_sign[{i}]", t,
                   GradedMap(t.source, t.target, minus_id,
                             Mat.zeros(ring, 0, 0)))
    return CongruenceReport.from_checks(checks, meta={"objects": len(objects)})


def flip_sign(gmap, degree, i, j):
    """Return gmap with entry (i, j) of the chosen degree negated (fault injection)."""
    ring = gmap.m0.ring
    mats = {0: gmap.m0, 1: gmap.m1}
    m = mats[degree]
    rows = [list(r) for r in m.rows]
    rows[i][j] = ring.neg(rows[i][j])
    mats[degree] = Mat(ring, rows)
    return GradedMap(gmap.source, gmap.target, mats[0], mats[1])
