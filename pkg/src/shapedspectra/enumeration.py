"""Counting labelled plane trees attached to a self-conjugate diagram.

A tree here is a rooted plane tree whose vertices carry labels in
``1..length`` such that every edge's label pair is a box of the diagram.
The number of such trees on k+1 vertices, divided by the diagram length,
is the k-th moment of the limiting spectral distribution of the matrix
model in :mod:`shapedspectra.matrix_mc`.

Four independent routes to the same numbers live here: a block
recurrence, a composition summation, a terminating hypergeometric sum
for two-block shapes, and exhaustive generation.  All arithmetic is over
exact integers; moments are exact rationals.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, ceil, floor

from .partitions import Partition, PartitionError


class BudgetError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed its budget."""

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def _comb0(n, m):
    """Binomial with boundary conventions: choosing 0 is always 1, while
    negative or oversized lower indices give 0.

    The m = 0 case matters: compositions whose tail blocks are empty hit
    a negative upper index with m = 0, and the empty product must count
    as one for the composition sum to reproduce the tree counts.
    """
    if m == 0:
        return 1
    if m < 0 or n < 0 or m > n:
        return 0
    return comb(n, m)


# ---------------------------------------------------------------------------
# labelled plane trees
# ---------------------------------------------------------------------------

class PlaneTree:
    """Rooted plane tree plus vertex labels, both in DFS preorder.

    ``child_counts[v]`` is the number of children of the v-th vertex in
    preorder; ``labels[v]`` its label.  The child-count sequence must
    describe exactly one rooted plane tree.
    """

    __slots__ = ("child_counts", "labels")

    def __init__(self, child_counts, labels):
        child_counts = tuple(int(c) for c in child_counts)
        labels = tuple(int(x) for x in labels)
        if len(child_counts) != len(labels):
            raise ValueError("child_counts and labels must have equal length")
        _parents(child_counts)  # validates the preorder structure
        self.child_counts = child_counts
        self.labels = labels

    @property
    def n_vertices(self):
        return len(self.child_counts)

    def parents(self):
        return _parents(self.child_counts)

    def edges(self):
        """Parent-child vertex index pairs in preorder."""
        par = _parents(self.child_counts)
        return [(par[v], v) for v in range(1, len(par))]

    def __eq__(self, other):
        return (isinstance(other, PlaneTree)
                and self.child_counts == other.child_counts
                and self.labels == other.labels)

    def __hash__(self):
        return hash((self.child_counts, self.labels))

    def __repr__(self):
        return f"PlaneTree({list(self.child_counts)}, {list(self.labels)})"


def _parents(child_counts):
    """Parent index of each vertex of a preorder child-count sequence.

    Raises ValueError when the sequence does not describe one tree.
    """
    n = len(child_counts)
    if n == 0:
        raise ValueError("empty tree")
    parents = [-1] * n
    stack = []  # (vertex, children still expected)
    pending = child_counts[0]
    if pending:
        stack.append([0, pending])
    for v in range(1, n):
        if not stack:
            raise ValueError(f"dangling vertex {v}: no open parent")
        parents[v] = stack[-1][0]
        stack[-1][1] -= 1
        if stack[-1][1] == 0:
            stack.pop()
        if child_counts[v]:
            stack.append([v, child_counts[v]])
    if stack:
        raise ValueError("unfinished tree: children still expected")
    return parents


def is_valid_tree(p, tree):
    """Whether every label is in range and every edge's label pair is a
    box of the (self-conjugate) diagram."""
    if not p.is_self_conjugate():
        raise PartitionError("tree labels are constrained by a self-conjugate diagram")
    ell = p.length
    if any(not 1 <= x <= ell for x in tree.labels):
        return False
    parts = p.parts
    for u, v in tree.edges():
        if tree.labels[v] > parts[tree.labels[u] - 1]:
            return False
    return True


# ---------------------------------------------------------------------------
# route 1: block recurrence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentTable:
    """Tree counts and the derived moment sequence of one diagram."""

    partition: Partition
    counts: tuple
    moments: tuple

    def __post_init__(self):
        ell = self.partition.length
        if self.counts[0] != ell:
            raise RuntimeError("count of one-vertex trees must equal the length")
        if len(self.counts) > 1 and self.counts[1] != self.partition.size:
            raise RuntimeError("count of two-vertex trees must equal the size")
        for k, c in enumerate(self.counts):
            if c > ell ** (k + 1) * catalan(k):
                raise RuntimeError(f"count at k={k} exceeds the label-free bound")


def count_recurrence(p, kmax):
    """Count trees on k+1 vertices for k = 0..kmax by the root-splitting
    recurrence, reduced to one unknown per block.

    Removing the edge from the root to its leftmost child splits a tree
    into two rooted trees, the child's label being at most the part
    indexed by the root's label.  Rooted counts only depend on the
    root's block, which gives r coupled convolution recurrences.
    """
    if not p.is_self_conjugate():
        raise PartitionError("tree counting requires a self-conjugate partition")
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    a = p.heights
    r = len(a)
    # rooted[u][k]: trees on k+1 vertices whose root has any fixed label in block u
    rooted = [[1] + [0] * kmax for _ in range(r)]
    mixed = [[0] * (kmax + 1) for _ in range(r)]  # weighted child sums per block
    for u in range(r):
        mixed[u][0] = sum(a[v] * rooted[v][0] for v in range(r - u))
    for k in range(1, kmax + 1):
        for u in range(r):
            rooted[u][k] = sum(rooted[u][n] * mixed[u][k - 1 - n]
                               for n in range(k))
        for u in range(r):
            mixed[u][k] = sum(a[v] * rooted[v][k] for v in range(r - u))
    counts = tuple(sum(a[u] * rooted[u][k] for u in range(r))
                   for k in range(kmax + 1))
    ell = p.length
    moments = tuple(Fraction(c, ell) for c in counts)
    return MomentTable(p, counts, moments)


def moment_sequence(p, kmax):
    """Exact moments: tree count at k over the diagram length."""
    return count_recurrence(p, kmax).moments


# ---------------------------------------------------------------------------
# route 2: composition summation
# ---------------------------------------------------------------------------

def refined_count(composition):
    """Number of block-labelled plane trees with exactly
    ``composition[j-1]`` vertices labelled j, for labels such that pairs
    along edges sum to at most r+1.

    Evaluated by two different binomial product formulas (a single
    product with an indicator shift, and a split two-product form); the
    results must agree and the 1/k prefactor must divide exactly.
    Binomials with negative or oversized indices are zero.
    """
    ls = tuple(int(x) for x in composition)
    if any(x < 0 for x in ls):
        raise ValueError("composition entries must be nonnegative")
    r = len(ls)
    k = sum(ls) - 1
    if k < 1:
        raise ValueError("composition must sum to at least 2")

    def le(i):  # l_1 + ... + l_i
        return sum(ls[:i])

    def ge(i):  # l_i + ... + l_r
        return sum(ls[i - 1:])

    prod_single = 1
    for j in range(1, r + 1):
        shift = 1 if j <= ceil(r / 2) else 0
        prod_single *= _comb0(ge(j) + le(r - j + 1) - 1 - shift, ls[j - 1])
    prod_split = 1
    for j in range(1, ceil(r / 2) + 1):
        prod_split *= _comb0(ge(j) + le(r - j + 1) - 2, ls[j - 1])
    for j in range(1, floor(r / 2) + 1):
        prod_split *= _comb0(le(j) + ge(r - j + 1) - 1, ls[r - j])
    if prod_single != prod_split:
        raise RuntimeError(
            f"the two product formulas disagree on {ls}: "
            f"{prod_single} vs {prod_split}")
    if prod_single % k:
        raise RuntimeError(f"product {prod_single} not divisible by k={k} on {ls}")
    return prod_single // k


def _compositions(total, parts):
    """Weak compositions of ``total`` into ``parts`` ordered slots."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def count_summation(heights, k):
    """Count trees on k+1 vertices by summing the refined block counts
    over all weak compositions of k+1, weighted by block heights."""
    a = tuple(int(x) for x in heights)
    if any(x < 1 for x in a):
        raise ValueError("heights must be positive")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return sum(a)
    r = len(a)
    total = 0
    for ls in _compositions(k + 1, r):
        t = refined_count(ls)
        if t:
            w = 1
            for ai, li in zip(a, ls):
                w *= ai ** li
            total += t * w
    return total


# ---------------------------------------------------------------------------
# route 3: hypergeometric closed form for two-block shapes
# ---------------------------------------------------------------------------

def count_fat_hook(a1, a2, k):
    """Count trees for the two-block shape with heights (a1, a2) via the
    terminating hypergeometric sum Catalan(k) * a1^(k+1) * 2F1(-k-1,-k;k;a2/a1).

    The series terminates at j = k, so the sum is a finite rational
    computation; the result is always a nonnegative integer.
    """
    if a1 < 1 or a2 < 1:
        raise ValueError("heights must be positive")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return a1 + a2
    x = Fraction(a2, a1)
    term = Fraction(1)
    total = Fraction(1)
    for j in range(k + 1):
        # Pochhammer update: (-k-1+j)(-k+j) / ((k+j)(j+1))
        term *= Fraction((-k - 1 + j) * (-k + j), (k + j) * (j + 1)) * x
        total += term
        if term == 0:
            break
    value = Fraction(catalan(k)) * Fraction(a1) ** (k + 1) * total
    if value.denominator != 1 or value < 0:
        raise RuntimeError(f"hypergeometric count not a nonnegative integer: {value}")
    return int(value)


# ---------------------------------------------------------------------------
# route 4: exhaustive generation
# ---------------------------------------------------------------------------

def _structures(n):
    """All preorder child-count sequences of plane trees on n vertices,
    in lexicographic order."""
    seq = [0] * n

    def rec(i, pending):
        if i == n:
            yield tuple(seq)
            return
        rest = n - i - 1
        lo_pending = 1 if rest > 0 else 0
        for d in range(n - i):
            pend2 = pending - 1 + d
            if pend2 < lo_pending or pend2 > rest:
                continue
            seq[i] = d
            yield from rec(i + 1, pend2)

    yield from rec(0, 1)


def brute_force_bound(p, k):
    """Upper bound on the enumeration size: labellings of all plane trees."""
    return p.length ** (k + 1) * catalan(k)


def iter_trees(p, k):
    """Yield every valid labelled tree on k+1 vertices, in lexicographic
    order of (structure, labels).  No budget guard; see enumerate_brute."""
    if not p.is_self_conjugate():
        raise PartitionError("tree enumeration requires a self-conjugate partition")
    if k < 0:
        raise ValueError("k must be nonnegative")
    ell = p.length
    parts = p.parts
    n = k + 1
    labels = [0] * n
    for structure in _structures(n):
        par = _parents(structure)

        def assign(v):
            if v == n:
                yield PlaneTree(structure, tuple(labels))
                return
            hi = ell if v == 0 else parts[labels[par[v]] - 1]
            for lab in range(1, hi + 1):
                labels[v] = lab
                yield from assign(v + 1)

        yield from assign(0)


def enumerate_brute(p, k, budget=10 ** 8):
    """Materialise every valid labelled tree on k+1 vertices.

    Refuses when the structural bound length^(k+1) * Catalan(k) exceeds
    the budget, reporting the bound.
    """
    bound = brute_force_bound(p, k)
    if bound > budget:
        raise BudgetError(
            f"enumeration bound {bound} exceeds budget {budget}", bound)
    return list(iter_trees(p, k))


def count_trees_exhaustive(p, k):
    """Count valid labelled trees by walking every plane tree structure
    and multiplying per-vertex label choices bottom-up.

    Label candidates of a child are the prefix 1..parts[parent_label-1],
    so per structure the count is a product of prefix sums.  Shares no
    code with the recurrence or summation routes.
    """
    if not p.is_self_conjugate():
        raise PartitionError("tree enumeration requires a self-conjugate partition")
    ell = p.length
    parts = p.parts
    n = k + 1
    total = 0
    for structure in _structures(n):
        par = _parents(structure)
        children = [[] for _ in range(n)]
        for v in range(1, n):
            children[par[v]].append(v)
        # ways[v][lab-1]: labellings of v's subtree when v carries lab
        ways = [None] * n
        for v in range(n - 1, -1, -1):
            row = [1] * ell
            for c in children[v]:
                prefix = 0
                pref = [0] * (ell + 1)
                for lab in range(ell):
                    prefix += ways[c][lab]
                    pref[lab + 1] = prefix
                for lab in range(ell):
                    row[lab] *= pref[parts[lab]]
            ways[v] = row
        total += sum(ways[0])
    return total
