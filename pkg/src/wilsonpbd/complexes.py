"""Simplicial complexes, Moore families, flats, truncation and erection.

Complexes store only their facets; face membership is containment in some
facet.  Set families use frozensets of points externally and bitmasks
internally, where the scans demand it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, permutations

from .errors import (
    BadParams,
    DegenerateCase,
    NotCircuitHyperplane,
    NotSimpleRank3Matroid,
    TooLarge,
)
from .incidence import PBD, validate_pbd

GENERAL_EPSILON_CAP = 16   # 2^v subset scans with the unrestricted face test
SUBSET_SCAN_CAP = 22       # 2^v scans with the early-exit pair test


def _mask(points) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SimplicialComplex:
    num_points: int
    facets: frozenset[frozenset[int]]

    @cached_property
    def facet_masks(self) -> tuple[int, ...]:
        return tuple(sorted(_mask(f) for f in self.facets))

    def is_face(self, xs) -> bool:
        m = _mask(xs)
        return any(m & fm == m for fm in self.facet_masks)

    def faces_of_size(self, k: int):
        for xs in combinations(range(self.num_points), k):
            if self.is_face(xs):
                yield xs

    def __str__(self):
        return f"SimplicialComplex(v={self.num_points}, facets={len(self.facets)})"


@dataclass(frozen=True)
class MooreFamily:
    num_points: int
    members: frozenset[frozenset[int]]

    def __post_init__(self):
        ground = frozenset(range(self.num_points))
        if ground not in self.members:
            raise BadParams("a Moore family must contain the ground set")
        for a in self.members:
            for b in self.members:
                if a & b not in self.members:
                    raise BadParams(f"family not closed under intersection: {set(a)} & {set(b)}")

    @cached_property
    def member_masks(self) -> frozenset[int]:
        return frozenset(_mask(m) for m in self.members)

    def sorted_members(self) -> list[frozenset[int]]:
        return sorted(self.members, key=lambda s: (len(s), sorted(s)))

    def __str__(self):
        return f"MooreFamily(v={self.num_points}, members={len(self.members)})"


@dataclass(frozen=True)
class LatticeView:
    """A Moore family ordered by inclusion, with its cover relation."""

    moore: MooreFamily
    members: tuple[frozenset[int], ...]
    covers: tuple[tuple[int, ...], ...]  # covers[i] = indices covered by member i


def complex_from_faces(num_points: int, faces) -> SimplicialComplex:
    """Reduce a face family to its facet antichain; the empty face is implicit."""
    fs = {frozenset(f) for f in faces}
    fs.add(frozenset())
    facets = {f for f in fs if not any(f < g for g in fs)}
    return SimplicialComplex(num_points, frozenset(facets))


def rank(s: SimplicialComplex) -> int:
    return max(len(f) for f in s.facets)


def is_pure(s: SimplicialComplex) -> bool:
    return len({len(f) for f in s.facets}) == 1


def is_simple(s: SimplicialComplex) -> bool:
    """All singletons and all pairs independent."""
    if s.num_points >= 1 and not all(s.is_face((p,)) for p in range(s.num_points)):
        return False
    return all(s.is_face(pq) for pq in combinations(range(s.num_points), 2))


def all_faces(s: SimplicialComplex):
    """Every face, grouped by size: returns list indexed by size."""
    r = rank(s)
    by_size = [[] for _ in range(r + 1)]
    seen = set()
    for f in s.facets:
        for k in range(len(f) + 1):
            for sub in combinations(sorted(f), k):
                if sub not in seen:
                    seen.add(sub)
                    by_size[k].append(sub)
    return by_size


def is_matroid(s: SimplicialComplex) -> bool:
    """Exhaustive exchange-property check over all face pairs with |I| = |J|+1."""
    by_size = all_faces(s)
    for k in range(len(by_size) - 1):
        bigger = by_size[k + 1]
        for j_face in by_size[k]:
            jset = set(j_face)
            for i_face in bigger:
                if not any(x not in jset and s.is_face(j_face + (x,)) for x in i_face):
                    return False
    return True


# ---------------------------------------------------------------------------
# the PBD <-> rank-3 matroid correspondence
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def matroid_from_pbd(x: PBD) -> SimplicialComplex:
    """Independent sets: everything of size <= 2 plus the non-collinear triples."""
    if x.is_degenerate:
        raise DegenerateCase("matroid_from_pbd needs a genuine PBD")
    faces = list(combinations(range(x.num_points), 2))
    for t in combinations(range(x.num_points), 3):
        bm = x.block_mask_through(t[0], t[1])
        if not (bm >> t[2]) & 1:
            faces.append(t)
    return complex_from_faces(x.num_points, faces)


def pbd_from_matroid(m: SimplicialComplex) -> PBD:
    """Blocks are the distinct closures of 2-element sets."""
    if rank(m) != 3 or not is_simple(m) or not is_matroid(m):
        raise NotSimpleRank3Matroid("need a simple matroid of rank 3")
    v = m.num_points
    blocks = set()
    for x, y in combinations(range(v), 2):
        cl = {x, y}
        cl.update(p for p in range(v) if p not in cl and not m.is_face((x, y, p)))
        blocks.add(tuple(sorted(cl)))
    return validate_pbd(v, blocks)


# ---------------------------------------------------------------------------
# flats, closure, transversals
# ---------------------------------------------------------------------------

def flats(s: SimplicialComplex) -> MooreFamily:
    """All X such that every independent subset of X extends by every outside point."""
    v = s.num_points
    if v > GENERAL_EPSILON_CAP:
        raise TooLarge(f"flats() scans 2^{v} subsets; cap is {GENERAL_EPSILON_CAP} points")
    by_size = all_faces(s)
    face_masks = [[(_mask(f), f) for f in level] for level in by_size]
    members = []
    for xm in range(1 << v):
        outside = [p for p in range(v) if not (xm >> p) & 1]
        ok = True
        for level in face_masks:
            for fm, f in level:
                if fm & xm == fm:
                    for p in outside:
                        if not s.is_face(f + (p,)):
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            members.append(frozenset(_bits(xm)))
    return MooreFamily(v, frozenset(members))


def closure(f: MooreFamily, xs) -> frozenset[int]:
    """Smallest member containing xs (the ground set always qualifies)."""
    target = frozenset(xs)
    out = frozenset(range(f.num_points))
    for m in f.members:
        if target <= m and m < out:
            out = m
    return out


@lru_cache(maxsize=None)
def _closure_fn(f: MooreFamily):
    masks = sorted(f.member_masks)
    full = (1 << f.num_points) - 1

    @lru_cache(maxsize=None)
    def cl(xm: int) -> int:
        out = full
        for mm in masks:
            if xm & mm == xm and mm & out == mm:
                out = mm
        return out

    return cl


def is_transversal(f: MooreFamily, xs) -> bool:
    """Whether xs admits an ordering that is transversal to the successive
    differences of some chain in f.

    Equivalent formulation used here: an ordering x_1..x_k exists with each
    x_i outside the closure of {x_1..x_{i-1}}.  The search memoizes on the
    set of placed points.
    """
    xs = tuple(sorted(set(xs)))
    cl = _closure_fn(f)
    failed: set[int] = set()

    def extend(placed_mask: int, remaining: tuple[int, ...]) -> bool:
        if not remaining:
            return True
        if placed_mask in failed:
            return False
        c = cl(placed_mask)
        for x in remaining:
            if not (c >> x) & 1:
                nxt = tuple(y for y in remaining if y != x)
                if extend(placed_mask | (1 << x), nxt):
                    return True
        failed.add(placed_mask)
        return False

    return extend(0, xs)


def is_transversal_bruteforce(f: MooreFamily, xs) -> bool:
    """Reference oracle: try every ordering of xs and every chain in f.

    Exponential in |xs| and |f|; intended for |xs| <= 6.
    """
    xs = tuple(sorted(set(xs)))
    members = list(f.members)
    if not xs:
        return bool(members)

    def chain_search(seq, i, prev):
        if i == len(seq):
            return True
        for m in members:
            if prev < m and seq[i] in m and seq[i] not in prev:
                if chain_search(seq, i + 1, m):
                    return True
        return False

    for perm in permutations(xs):
        for f0 in members:
            if perm[0] not in f0 and chain_search(perm, 0, f0):
                return True
    return False


def chain_height(f: MooreFamily) -> int:
    """Length (number of strict inclusions) of the longest chain in f."""
    members = sorted(f.members, key=len)
    best = {m: 0 for m in members}
    for i, m in enumerate(members):
        for n in members[:i]:
            if n < m:
                best[m] = max(best[m], best[n] + 1)
    return max(best.values(), default=0)


def transversals(f: MooreFamily, max_size: int) -> SimplicialComplex:
    """The complex Tr(f) restricted to faces of at most max_size points."""
    v = f.num_points
    faces = [()]
    for k in range(1, max_size + 1):
        found = [xs for xs in combinations(range(v), k) if is_transversal(f, xs)]
        if not found:
            break
        faces.extend(found)
    return complex_from_faces(v, faces)


def is_boolean_representable(s: SimplicialComplex) -> bool:
    """Whether the faces are exactly the transversals of the lattice of flats."""
    ls = flats(s)
    depth = chain_height(ls)
    limit = max(rank(s), depth)
    for k in range(limit + 1):
        for xs in combinations(range(s.num_points), k):
            if s.is_face(xs) != is_transversal(ls, xs):
                return False
    return True


# ---------------------------------------------------------------------------
# truncation and erection
# ---------------------------------------------------------------------------

def truncate(s: SimplicialComplex, k: int) -> SimplicialComplex:
    if k < 1:
        raise BadParams("truncation level must be >= 1")
    faces = []
    for f in s.facets:
        if len(f) <= k:
            faces.append(f)
        else:
            faces.extend(combinations(sorted(f), k))
    return complex_from_faces(s.num_points, faces)


def _epsilon_general(s: SimplicialComplex) -> list[int]:
    """Subset scan with the unrestricted defining condition."""
    v = s.num_points
    r = rank(s)
    small_faces = all_faces(s)[:r]  # faces of size <= r-1
    tagged = [[(_mask(f), f) for f in lvl] for lvl in small_faces]
    members = []
    for xm in range(1 << v):
        outside = [p for p in range(v) if not (xm >> p) & 1]
        ok = True
        for level in tagged:
            for fm, f in level:
                if fm & xm == fm and any(not s.is_face(f + (p,)) for p in outside):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            members.append(xm)
    return members


def _epsilon_rank3_simple(s: SimplicialComplex, workers: int = 1) -> list[int]:
    """Early-exit pair test: X belongs iff for every pair in X the points whose
    addition breaks independence also lie in X."""
    v = s.num_points
    dep = {}
    for x, y in combinations(range(v), 2):
        m = (1 << x) | (1 << y)
        for p in range(v):
            if p != x and p != y and not s.is_face((x, y, p)):
                m |= 1 << p
        dep[(x, y)] = m
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        total = 1 << v
        step = (total + workers - 1) // workers
        ranges = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_epsilon_pair_chunk, [(v, dep, lo, hi) for lo, hi in ranges])
        out: list[int] = []
        for part in parts:
            out.extend(part)
        return out
    return _epsilon_pair_chunk((v, dep, 0, 1 << v))


def _epsilon_pair_chunk(args) -> list[int]:
    v, dep, lo, hi = args
    members = []
    for xm in range(lo, hi):
        bits = []
        m = xm
        ok = True
        while m:
            low = m & -m
            x = low.bit_length() - 1
            for y in bits:
                if dep[(y, x)] & ~xm:
                    ok = False
                    break
            if not ok:
                break
            bits.append(x)
            m ^= low
        if ok:
            members.append(xm)
    return members


def epsilon(s: SimplicialComplex, workers: int = 1) -> MooreFamily:
    """The erection family: all X whose small independent subsets extend by
    every outside point.  Uses the pair test for simple rank-3 complexes and
    the general subset scan otherwise."""
    v = s.num_points
    if rank(s) == 3 and is_simple(s):
        if v > SUBSET_SCAN_CAP:
            raise TooLarge(f"epsilon() caps at {SUBSET_SCAN_CAP} points")
        masks = _epsilon_rank3_simple(s, workers)
    else:
        if v > GENERAL_EPSILON_CAP:
            raise TooLarge(f"general epsilon() caps at {GENERAL_EPSILON_CAP} points")
        masks = _epsilon_general(s)
    return MooreFamily(v, frozenset(frozenset(_bits(m)) for m in masks))


# ---------------------------------------------------------------------------
# subsystems of a PBD
# ---------------------------------------------------------------------------

def pair_closure(x: PBD, seed) -> frozenset[int]:
    """Smallest subsystem containing seed: repeatedly adjoin the block
    through every inside pair until stable."""
    cur = _mask(seed)
    changed = True
    while changed:
        changed = False
        bits = list(_bits(cur))
        for i, p in enumerate(bits):
            for q in bits[:i]:
                bm = x.block_mask_through(p, q)
                if bm & ~cur:
                    cur |= bm
                    changed = True
    return frozenset(_bits(cur))


@lru_cache(maxsize=None)
def subsystems(x: PBD) -> MooreFamily:
    """Every pair-closed subset, built bottom-up from the point closures."""
    v = x.num_points
    if v > SUBSET_SCAN_CAP:
        raise TooLarge(f"subsystems() caps at {SUBSET_SCAN_CAP} points")
    found = {frozenset(), frozenset(range(v))}
    frontier = [frozenset()]
    for p in range(v):
        s = frozenset([p])
        if s not in found:
            found.add(s)
            frontier.append(s)
    while frontier:
        cur = frontier.pop()
        for p in range(v):
            if p not in cur:
                nxt = pair_closure(x, cur | {p})
                if nxt not in found:
                    found.add(nxt)
                    frontier.append(nxt)
    return MooreFamily(v, frozenset(found))


def trivial_subsystems(x: PBD) -> frozenset[frozenset[int]]:
    """The subsystems every design has: empty set, points, blocks, everything."""
    fam = {frozenset(), frozenset(range(x.num_points))}
    fam.update(frozenset([p]) for p in range(x.num_points))
    fam.update(frozenset(b) for b in x.blocks)
    return frozenset(fam)


def is_subsystem_free(x: PBD) -> bool:
    return subsystems(x).members == trivial_subsystems(x)


def open_sets(x: PBD) -> frozenset[frozenset[int]]:
    """Complements of subsystems."""
    ground = frozenset(range(x.num_points))
    return frozenset(ground - s for s in subsystems(x).members)


# ---------------------------------------------------------------------------
# specific matroids
# ---------------------------------------------------------------------------

K5_EDGES = tuple((i, j) for i in range(5) for j in range(i + 1, 5))


def graphic_matroid_k5() -> SimplicialComplex:
    """Independent sets are the forests among the 10 edges of K5."""
    def is_forest(edge_idxs):
        parent = list(range(5))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for ei in edge_idxs:
            u, w = K5_EDGES[ei]
            ru, rw = find(u), find(w)
            if ru == rw:
                return False
            parent[ru] = rw
        return True

    faces = []
    for k in range(1, 5):
        faces.extend(e for e in combinations(range(10), k) if is_forest(e))
    return complex_from_faces(10, faces)


def desargues_matroid() -> SimplicialComplex:
    """Rank-3 truncation of the graphic matroid of K5."""
    return truncate(graphic_matroid_k5(), 3)


def relax(m: SimplicialComplex, xs) -> SimplicialComplex:
    """Adjoin a circuit-hyperplane as a new basis."""
    x = frozenset(xs)
    if m.is_face(x):
        raise NotCircuitHyperplane(f"{set(x)} is independent, not a circuit")
    if not all(m.is_face(sub) for sub in combinations(sorted(x), len(x) - 1)):
        raise NotCircuitHyperplane(f"{set(x)} is not a circuit")
    if x not in flats(m).members:
        raise NotCircuitHyperplane(f"{set(x)} is not a flat")
    # a circuit has rank |x|-1, so hyperplane means |x| = rank(m)
    if len(x) != rank(m):
        raise NotCircuitHyperplane(f"{set(x)} is not a hyperplane")
    return SimplicialComplex(m.num_points, m.facets | {x})


# ---------------------------------------------------------------------------
# lattice views
# ---------------------------------------------------------------------------

def lattice_view(f: MooreFamily) -> LatticeView:
    members = tuple(f.sorted_members())
    n = len(members)
    below = [[j for j in range(n) if members[j] < members[i]] for i in range(n)]
    covers = []
    for i in range(n):
        cov = [j for j in below[i]
               if not any(members[j] < members[k] for k in below[i] if k != j)]
        covers.append(tuple(sorted(cov)))
    return LatticeView(f, members, tuple(covers))


def _chain_length_sets(lv: LatticeView) -> list[set[int]]:
    """For each member, the set of lengths of maximal chains from a minimal
    element up to it (DP over the cover DAG)."""
    n = len(lv.members)
    lengths: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):  # members sorted by size, so covers come earlier
        if not lv.covers[i]:
            lengths[i] = {0}
        else:
            acc = set()
            for j in lv.covers[i]:
                acc.update(l + 1 for l in lengths[j])
            lengths[i] = acc
    return lengths


def is_graded_lattice(lv: LatticeView) -> bool:
    """All maximal chains from bottom to top have the same length."""
    lengths = _chain_length_sets(lv)
    return len(lengths[-1]) == 1


def maximal_chain_lengths(lv: LatticeView) -> set[int]:
    return _chain_length_sets(lv)[-1]


def is_maximal_chain(lv: LatticeView, chain) -> bool:
    """Whether the given member sequence is a maximal bottom-to-top chain."""
    seq = [frozenset(c) for c in chain]
    index = {m: i for i, m in enumerate(lv.members)}
    if any(c not in index for c in seq):
        return False
    ids = [index[c] for c in seq]
    # bottom must cover nothing; top must be covered by nothing
    if lv.covers[ids[0]]:
        return False
    if any(ids[-1] in cov for cov in lv.covers):
        return False
    return all(ids[k] in lv.covers[ids[k + 1]] for k in range(len(ids) - 1))


def lattice_stats(f: MooreFamily) -> dict:
    lv = lattice_view(f)
    lengths = maximal_chain_lengths(lv)
    bottom = lv.members[0]
    atoms = sum(1 for i, cov in enumerate(lv.covers) if cov == (0,)) if lv.members else 0
    return {
        "members": len(lv.members),
        "height": max(lengths),
        "graded": len(lengths) == 1,
        "atoms": atoms,
        "bottom_size": len(bottom),
    }
