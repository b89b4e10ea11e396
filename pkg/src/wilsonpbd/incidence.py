"""Pairwise balanced designs, group divisible designs and Latin squares.

Points are always dense 0-based integers.  Blocks are stored as sorted
tuples and block lists sorted lexicographically, so equal designs compare
equal and serialized output is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from math import gcd

from .errors import (
    BadParams,
    BlockTooSmall,
    DegenerateCase,
    DesignError,
    GDDAxiomViolation,
    NotUniform,
    PairDoubleCovered,
    PairUncovered,
    ResultNotPBD,
    SizeMismatch,
)
from .fields import field


def _canon_block(b) -> tuple[int, ...]:
    return tuple(sorted(set(int(p) for p in b)))


@dataclass(frozen=True)
class PBD:
    """A pairwise balanced design: every point pair lies in exactly one block."""

    num_points: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def points(self) -> range:
        return range(self.num_points)

    @property
    def is_degenerate(self) -> bool:
        # the cases excluded from the definition of a PBD but still usable
        # as operational objects behind the allow_degenerate escape hatch
        if self.num_points <= 1:
            return True
        if not self.blocks:
            return True
        return len(self.blocks) == 1 and len(self.blocks[0]) == self.num_points

    @property
    def block_sizes(self) -> set[int]:
        return {len(b) for b in self.blocks}

    def uniform_block_size(self) -> int:
        sizes = self.block_sizes
        if len(sizes) != 1:
            raise NotUniform(f"block sizes {sorted(sizes)} are not uniform")
        return sizes.pop()

    @cached_property
    def _pair_block(self) -> dict[tuple[int, int], int]:
        table = {}
        for bi, b in enumerate(self.blocks):
            for p, q in combinations(b, 2):
                table[(p, q)] = bi
        return table

    @cached_property
    def block_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << p for p in b) for b in self.blocks)

    def block_through(self, p: int, q: int) -> tuple[int, ...]:
        if p == q:
            raise BadParams("block_through needs two distinct points")
        key = (p, q) if p < q else (q, p)
        return self.blocks[self._pair_block[key]]

    def block_mask_through(self, p: int, q: int) -> int:
        key = (p, q) if p < q else (q, p)
        return self.block_masks[self._pair_block[key]]

    def __str__(self):
        return f"PBD(v={self.num_points}, blocks={len(self.blocks)})"


@dataclass(frozen=True)
class GDD:
    """Group divisible design: each pair lies in exactly one group or one block."""

    num_points: int
    groups: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, ...], ...]

    @property
    def points(self) -> range:
        return range(self.num_points)

    def __str__(self):
        return f"GDD(v={self.num_points}, groups={len(self.groups)}, blocks={len(self.blocks)})"


@dataclass(frozen=True)
class LatinSquare:
    order: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = self.order
        syms = set(range(m))
        if len(self.cells) != m or any(len(r) != m for r in self.cells):
            raise BadParams(f"cells must be a {m}x{m} array")
        for r in self.cells:
            if set(r) != syms:
                raise BadParams("a row is not a permutation of the symbols")
        for j in range(m):
            if {self.cells[i][j] for i in range(m)} != syms:
                raise BadParams("a column is not a permutation of the symbols")


def cyclic_latin(m: int) -> LatinSquare:
    """Cayley table of Z_m."""
    if m < 1:
        raise BadParams("order must be positive")
    return LatinSquare(m, tuple(tuple((i + j) % m for j in range(m)) for i in range(m)))


def validate_pbd(num_points: int, raw_blocks, allow_degenerate: bool = False) -> PBD:
    """Check the PBD axioms and return the canonical form.

    Raises PairUncovered / PairDoubleCovered with the offending pair,
    BlockTooSmall for blocks of size < 2, and DegenerateCase for the
    excluded degenerate designs unless allow_degenerate is set.
    """
    if num_points < 1:
        raise BadParams("a design needs at least one point")
    canon = []
    for b in raw_blocks:
        cb = _canon_block(b)
        if any(p < 0 or p >= num_points for p in cb):
            raise BadParams(f"block {cb} contains points outside 0..{num_points - 1}")
        if len(cb) < 2:
            raise BlockTooSmall(f"block {cb} has fewer than 2 points")
        canon.append(cb)
    canon.sort()
    seen: dict[tuple[int, int], int] = {}
    for bi, b in enumerate(canon):
        for p, q in combinations(b, 2):
            if (p, q) in seen:
                raise PairDoubleCovered(p, q)
            seen[(p, q)] = bi
    for p, q in combinations(range(num_points), 2):
        if (p, q) not in seen:
            raise PairUncovered(p, q)
    pbd = PBD(num_points, tuple(canon))
    if pbd.is_degenerate and not allow_degenerate:
        raise DegenerateCase(
            f"v={num_points} with {len(canon)} block(s) is one of the excluded degenerate cases"
        )
    return pbd


def trivial_pbd(k: int) -> PBD:
    """The degenerate single-block design on k points (escape-hatch object)."""
    if k < 2:
        raise BadParams("trivial design needs at least 2 points")
    return validate_pbd(k, [range(k)], allow_degenerate=True)


def validate_gdd(num_points: int, groups, blocks) -> GDD:
    """Check the GDD axioms: groups partition the points and every pair is in
    exactly one group or exactly one block, never both."""
    g = sorted(_canon_block(x) for x in groups)
    b = sorted(_canon_block(x) for x in blocks)
    covered = [0] * num_points
    for grp in g:
        for p in grp:
            if p < 0 or p >= num_points:
                raise BadParams("group point out of range")
            covered[p] += 1
    if any(c != 1 for c in covered):
        raise GDDAxiomViolation("groups do not partition the point set")
    in_group = {}
    for gi, grp in enumerate(g):
        for p, q in combinations(grp, 2):
            in_group[(p, q)] = gi
    in_block = {}
    for bi, blk in enumerate(b):
        if len(blk) < 2:
            raise BlockTooSmall(f"block {blk} has fewer than 2 points")
        if any(p < 0 or p >= num_points for p in blk):
            raise BadParams("block point out of range")
        for p, q in combinations(blk, 2):
            if (p, q) in in_block:
                raise GDDAxiomViolation(f"pair ({p},{q}) in two blocks")
            in_block[(p, q)] = bi
    for p, q in combinations(range(num_points), 2):
        g_hit = (p, q) in in_group
        b_hit = (p, q) in in_block
        if g_hit and b_hit:
            raise GDDAxiomViolation(f"pair ({p},{q}) in both a group and a block")
        if not g_hit and not b_hit:
            raise GDDAxiomViolation(f"pair ({p},{q}) in no group and no block")
    return GDD(num_points, tuple(g), tuple(b))


# ---------------------------------------------------------------------------
# named constructions
# ---------------------------------------------------------------------------

def complete_graph(n: int) -> PBD:
    """The unique design with all blocks of size 2."""
    if n < 3:
        raise DegenerateCase("complete_graph needs n >= 3")
    return validate_pbd(n, combinations(range(n), 2))


def near_pencil(n: int) -> PBD:
    """n+1 points: one long block {1..n} plus every pair through point 0."""
    if n < 3:
        raise DegenerateCase("near_pencil needs n >= 3")
    blocks = [tuple(range(1, n + 1))] + [(0, i) for i in range(1, n + 1)]
    return validate_pbd(n + 1, blocks)


def projective_points(n: int, q: int) -> list[tuple[int, ...]]:
    """Canonical representatives (first nonzero coordinate 1) of the
    1-dimensional subspaces of F_q^{n+1}, sorted."""
    field(q)  # reject unsupported orders up front
    reps = []
    for vec in product(range(q), repeat=n + 1):
        nz = next((i for i, c in enumerate(vec) if c != 0), None)
        if nz is not None and vec[nz] == 1 and all(c == 0 for c in vec[:nz]):
            reps.append(vec)
    return sorted(reps)


def projective_space(n: int, q: int) -> PBD:
    """Projective n-space over F_q: points are lines through the origin of
    F_q^{n+1}, blocks are the planes through the origin."""
    if n < 2:
        raise BadParams("projective_space needs n >= 2")
    F = field(q)
    pts = projective_points(n, q)
    index = {v: i for i, v in enumerate(pts)}

    def rep(vec):
        nz = next(i for i, c in enumerate(vec) if c != 0)
        # scale so the first nonzero coordinate becomes 1
        inv = next(c for c in range(q) if F.mul(c, vec[nz]) == 1)
        return F.vec_scale(inv, vec)

    blocks = set()
    for i, j in combinations(range(len(pts)), 2):
        u, v = pts[i], pts[j]
        span = set()
        for a in range(q):
            for b in range(q):
                w = F.vec_add(F.vec_scale(a, u), F.vec_scale(b, v))
                if any(c != 0 for c in w):
                    span.add(index[rep(w)])
        blocks.add(tuple(sorted(span)))
    return validate_pbd(len(pts), blocks)


def affine_points(n: int, q: int) -> list[tuple[int, ...]]:
    return sorted(product(range(q), repeat=n))


def affine_space(n: int, q: int) -> PBD:
    """Affine n-space over F_q: blocks are all lines (cosets of 1-dim subspaces)."""
    if n < 2:
        raise BadParams("affine_space needs n >= 2")
    F = field(q)
    pts = affine_points(n, q)
    index = {v: i for i, v in enumerate(pts)}
    dirs = []
    for vec in product(range(q), repeat=n):
        nz = next((i for i, c in enumerate(vec) if c != 0), None)
        if nz is not None and vec[nz] == 1 and all(c == 0 for c in vec[:nz]):
            dirs.append(vec)
    blocks = set()
    for d in dirs:
        for v in pts:
            line = tuple(sorted(index[F.vec_add(v, F.vec_scale(t, d))] for t in range(q)))
            blocks.add(line)
    return validate_pbd(len(pts), blocks)


# 0-based relabeling of Hall's 6-point plane: paper point i (1-based) is our i-1.
_HALL_TRIPLES_1BASED = ((1, 2, 3), (1, 5, 6), (3, 4, 5))


def hall_plane6() -> PBD:
    """Hall's {2,3}-design on 6 points: three triples plus every uncovered pair.

    The classical description uses points 1..6; here point i becomes i-1.
    """
    triples = [tuple(p - 1 for p in t) for t in _HALL_TRIPLES_1BASED]
    covered = {frozenset(pair) for t in triples for pair in combinations(t, 2)}
    pairs = [p for p in combinations(range(6), 2) if frozenset(p) not in covered]
    return validate_pbd(6, triples + pairs)


def td3_from_latin(L: LatinSquare) -> GDD:
    """TD(3,m) from a Latin square: rows 0..m-1, columns m..2m-1, symbols 2m..3m-1,
    one block {i, m+j, 2m+L(i,j)} per cell."""
    m = L.order
    if m < 2:
        raise BadParams("need order >= 2")
    groups = [tuple(range(m)), tuple(range(m, 2 * m)), tuple(range(2 * m, 3 * m))]
    blocks = [(i, m + j, 2 * m + L.cells[i][j]) for i in range(m) for j in range(m)]
    return validate_gdd(3 * m, groups, blocks)


def gdd_to_pbd(g: GDD) -> PBD:
    """Turn groups of size >= 2 into blocks; groups of size 1 are dropped."""
    blocks = list(g.blocks) + [grp for grp in g.groups if len(grp) >= 2]
    return validate_pbd(g.num_points, blocks)


def pbd_to_gdd(x: PBD, group_blocks) -> GDD:
    """Inverse of gdd_to_pbd: distinguish a partial partition of blocks as groups."""
    chosen = {_canon_block(b) for b in group_blocks}
    for b in chosen:
        if b not in set(x.blocks):
            raise BadParams(f"{b} is not a block of the design")
    used = set()
    for b in chosen:
        if used & set(b):
            raise BadParams("chosen groups are not disjoint")
        used |= set(b)
    groups = sorted(chosen) + [(p,) for p in x.points if p not in used]
    blocks = [b for b in x.blocks if b not in chosen]
    return validate_gdd(x.num_points, groups, blocks)


def pbd_z(m: int = 7) -> PBD:
    """The {3,m}-design on 3m points built from the Cayley table of Z_m:
    three blocks of size m (the groups of the TD) plus the m^2 cell triples."""
    return gdd_to_pbd(td3_from_latin(cyclic_latin(m)))


def break_block(x: PBD, block, replacement: PBD, embedding) -> PBD:
    """Replace one block by an embedded copy of a smaller design on its points.

    embedding maps each point of the replacement onto a member of the block,
    bijectively.  The result is re-validated; a replacement that is itself a
    PBD on the block's points always yields a PBD.
    """
    blk = _canon_block(block)
    if blk not in set(x.blocks):
        raise BadParams(f"{blk} is not a block of the design")
    if replacement.is_degenerate:
        raise DegenerateCase("replacement must be a non-degenerate PBD")
    emb = dict(embedding) if not isinstance(embedding, dict) else dict(embedding)
    if sorted(emb.keys()) != list(range(replacement.num_points)):
        raise SizeMismatch("embedding must be defined on every replacement point")
    if sorted(emb.values()) != list(blk):
        raise SizeMismatch("embedding must map bijectively onto the block")
    new_blocks = [b for b in x.blocks if b != blk]
    new_blocks += [tuple(sorted(emb[p] for p in rb)) for rb in replacement.blocks]
    try:
        return validate_pbd(x.num_points, new_blocks)
    except DesignError as exc:
        raise ResultNotPBD(str(exc)) from exc


def cyclic_sts(v: int, base_blocks) -> PBD:
    """Develop base blocks mod v and validate.  No number-theoretic
    preconditions: any base family is developed and then checked."""
    blocks = set()
    for base in base_blocks:
        base = _canon_block(base)
        for i in range(v):
            blocks.add(tuple(sorted((p + i) % v for p in base)))
    try:
        return validate_pbd(v, blocks)
    except DesignError as exc:
        raise ResultNotPBD(str(exc)) from exc


def fano_plane() -> PBD:
    """The Fano plane in its projective labeling: point i is the i-th nonzero
    vector of F_2^3 in sorted order, lines are the 2-dimensional subspaces."""
    return projective_space(2, 2)


def wilson_sts19(L: LatinSquare) -> PBD:
    """STS on 19 points from an order-6 Latin square: the TD(3,6) triples plus
    a hub point 18, with each group+hub 7-set carrying a Fano plane.

    Points: rows 0..5, columns 6..11, symbols 12..17, hub 18.
    """
    if L.order != 6:
        raise BadParams("wilson_sts19 needs a Latin square of order 6")
    td = td3_from_latin(L)
    hub = 18
    blocks = list(td.blocks)
    fano = fano_plane()
    for grp in td.groups:
        emb = dict(enumerate(list(grp) + [hub]))
        blocks += [tuple(sorted(emb[p] for p in b)) for b in fano.blocks]
    return validate_pbd(19, blocks)


def sts21() -> PBD:
    """STS on 21 points: the {3,7}-design from Z_7 with each 7-block broken
    up by a copy of the Fano plane."""
    x = pbd_z(7)
    fano = fano_plane()
    for blk in [b for b in x.blocks if len(b) == 7]:
        x = break_block(x, blk, fano, dict(enumerate(blk)))
    return x


def cyclic_sts13() -> PBD:
    """One of the two STS(13), the cyclic one with bases {0,1,4} and {0,2,7}."""
    return cyclic_sts(13, [(0, 1, 4), (0, 2, 7)])


# ---------------------------------------------------------------------------
# arithmetic checks
# ---------------------------------------------------------------------------

def necessary_conditions(K, v: int) -> bool:
    """The classical congruential conditions: alpha(K) | v-1 and beta(K) | v(v-1)."""
    K = sorted(set(int(k) for k in K))
    if not K or any(k < 2 for k in K):
        raise BadParams("K must be a nonempty set of block sizes >= 2")
    alpha = 0
    beta = 0
    for k in K:
        alpha = gcd(alpha, k - 1)
        beta = gcd(beta, k * (k - 1))
    return (v - 1) % alpha == 0 and (v * (v - 1)) % beta == 0


def subsystem_bound_check(x: PBD, u: int) -> bool:
    """Whether a proper subsystem of order u is permitted by v >= (k-1)u + 1."""
    k = x.uniform_block_size()
    v = x.num_points
    return u < v and v >= (k - 1) * u + 1
