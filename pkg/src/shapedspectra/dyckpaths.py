"""Location-decorated Dyck paths and their bijection with labelled trees.

A path of length 2k is a sequence of triples (i, j, h), t = 0..2k: the
location (i, j) stays inside the diagram and alternates row moves with
column moves, while the height h walks a Dyck path.  Paths whose height
excursions all start and end pointing at the same box are in bijection
with the labelled trees of :mod:`shapedspectra.enumeration`, and the
conversion is the classical contour walk.
"""

from dataclasses import dataclass

from .partitions import PartitionError
from .enumeration import (PlaneTree, BudgetError, brute_force_bound,
                          is_valid_tree, _parents)


class DyckPath:
    """Step triples (i, j, h) for t = 0..2k; 2k+1 triples in total.

    A zero-length path with no diagonal box available is stored with an
    empty step list plus the bare ``label``; otherwise ``label`` is None
    and the k=0 path is the single triple (i, i, 0).
    """

    __slots__ = ("steps", "label")

    def __init__(self, steps, label=None):
        steps = tuple((int(i), int(j), int(h)) for i, j, h in steps)
        if steps and label is not None:
            raise ValueError("label is only for the empty-step degenerate path")
        if not steps and label is None:
            raise ValueError("empty path needs its root label")
        self.steps = steps
        self.label = label

    @property
    def length(self):
        """Number of unit time steps, 2k."""
        return max(len(self.steps) - 1, 0)

    def heights(self):
        return tuple(h for _, _, h in self.steps)

    def to_payload(self):
        """JSON-ready dict: steps as [i, j, h] rows."""
        return {"steps": [list(s) for s in self.steps], "label": self.label}

    @classmethod
    def from_payload(cls, payload):
        return cls(payload.get("steps", []), payload.get("label"))

    def __eq__(self, other):
        return (isinstance(other, DyckPath) and self.steps == other.steps
                and self.label == other.label)

    def __hash__(self):
        return hash((self.steps, self.label))

    def __repr__(self):
        if self.label is not None:
            return f"DyckPath([], label={self.label})"
        return f"DyckPath({[list(s) for s in self.steps]})"


@dataclass(frozen=True)
class PathCheck:
    """Outcome of validating a path: earliest violation, if any."""

    ok: bool
    reason: str = None
    time: int = None
    malformed: bool = False

    def __bool__(self):
        return self.ok


def validate_path(p, path):
    """Check all defining conditions, reporting the earliest violation.

    Structural defects (wrong list shape, non-unit height moves) are
    flagged as malformed, distinct from semantic violations (location
    outside the diagram, broken alternation, height dipping negative,
    endpoint mismatch, unbalanced excursion).
    """
    if not p.is_self_conjugate():
        raise PartitionError("paths are defined over a self-conjugate partition")

    def bad(reason, t, malformed=False):
        return PathCheck(False, reason, t, malformed)

    steps = path.steps
    if not steps:
        lab = path.label
        if not 1 <= lab <= p.length:
            return bad(f"root label {lab} outside 1..{p.length}", 0)
        return PathCheck(True)
    if len(steps) % 2 == 0:
        return bad("step list must hold an odd number of triples (t = 0..2k)",
                   len(steps) - 1, malformed=True)
    for t, (_, _, h) in enumerate(steps):
        if t and abs(h - steps[t - 1][2]) != 1:
            return bad(f"height increment not +-1 at t={t}", t, malformed=True)

    last = len(steps) - 1
    parts = p.parts
    ell = p.length
    open_excursions = []  # time of each unmatched up-step
    for t, (i, j, h) in enumerate(steps):
        if not (1 <= i <= ell and j <= parts[i - 1] and j >= 1):
            return bad(f"location ({i},{j}) is not a box of the diagram", t)
        if t == 0:
            if h != 0:
                return bad("height must start at 0", t)
            continue
        pi, pj, ph = steps[t - 1]
        if t % 2 == 1 and i != pi:
            return bad(f"row changed on an odd step at t={t}", t)
        if t % 2 == 0 and j != pj:
            return bad(f"column changed on an even step at t={t}", t)
        if h < 0:
            return bad(f"height dips below 0 at t={t}", t)
        if h > ph:
            open_excursions.append(t)
        else:
            a_up = open_excursions.pop()
            if (steps[a_up][0], steps[a_up][1]) != (i, j):
                return bad(
                    f"unbalanced excursion at [{a_up - 1},{t}]: first step "
                    f"points to {steps[a_up][:2]}, last to {(i, j)}", t)
    if steps[last][2] != 0:
        return bad("height must end at 0", last)
    if (steps[0][0], steps[0][1]) != (steps[last][0], steps[last][1]):
        return bad("start and end locations differ", last)
    return PathCheck(True)


def _contour(tree):
    """Vertex visit sequence w_0..w_2k of the contour walk."""
    n = tree.n_vertices
    par = _parents(tree.child_counts)
    children = [[] for _ in range(n)]
    for v in range(1, n):
        children[par[v]].append(v)
    walk = [0]

    def descend(v):
        for c in children[v]:
            walk.append(c)
            descend(c)
            walk.append(v)

    descend(0)
    return walk


def tree_to_path(p, tree):
    """Contour walk of a valid labelled tree, as a path of length 2k.

    Heights record the distance from the root; the location at odd t is
    (previous label, current label) and at even t the transpose, with
    the start pinned to (first label, second-to-last label).
    """
    if not is_valid_tree(p, tree):
        raise ValueError("not a valid labelled tree for this diagram")
    k = tree.n_vertices - 1
    if k == 0:
        lab = tree.labels[0]
        if lab <= p.parts[lab - 1]:  # diagonal box exists
            return DyckPath([(lab, lab, 0)])
        return DyckPath([], label=lab)
    walk = _contour(tree)
    c = [tree.labels[v] for v in walk]
    steps = [(c[0], c[2 * k - 1], 0)]
    h = 0
    depth = [0] * tree.n_vertices
    par = _parents(tree.child_counts)
    for v in range(1, tree.n_vertices):
        depth[v] = depth[par[v]] + 1
    for t in range(1, 2 * k + 1):
        h = depth[walk[t]]
        loc = (c[t - 1], c[t]) if t % 2 == 1 else (c[t], c[t - 1])
        steps.append((loc[0], loc[1], h))
    path = DyckPath(steps)
    check = validate_path(p, path)
    if not check:
        raise RuntimeError(f"contour produced an invalid path: {check.reason}")
    return path


def path_to_tree(p, path):
    """Invert the contour construction.

    The height sequence rebuilds the plane tree; the label of a vertex
    is read off any of its visit times (column of the triple at odd
    times, row at even times), which balancedness makes consistent.
    """
    check = validate_path(p, path)
    if not check:
        raise ValueError(f"invalid path: {check.reason} (t={check.time})")
    steps = path.steps
    if not steps:
        return PlaneTree((0,), (path.label,))
    if len(steps) == 1:
        return PlaneTree((0,), (steps[0][0],))
    k = (len(steps) - 1) // 2
    labels = [steps[0][0]]
    child_counts = [0]
    stack = [0]
    for t in range(1, 2 * k + 1):
        i, j, h = steps[t]
        if h > steps[t - 1][2]:
            v = len(labels)
            labels.append(j if t % 2 == 1 else i)
            child_counts.append(0)
            child_counts[stack[-1]] += 1
            stack.append(v)
        else:
            lab = j if t % 2 == 1 else i
            stack.pop()
            if labels[stack[-1]] != lab:
                raise RuntimeError("inconsistent vertex label on revisit")
    tree = PlaneTree(child_counts, labels)
    if not is_valid_tree(p, tree):
        raise RuntimeError("inversion produced an invalid tree")
    return tree


def count_paths(p, k, budget=10 ** 8):
    """Count valid paths of length 2k by exhaustive search over step
    choices, pruning on height feasibility.

    Down-step locations are forced (each must close its excursion on
    the box the excursion opened with), so branching only happens on
    up-steps and on the start location.
    """
    if not p.is_self_conjugate():
        raise PartitionError("paths are defined over a self-conjugate partition")
    if k < 0:
        raise ValueError("k must be nonnegative")
    bound = brute_force_bound(p, k)
    if bound > budget:
        raise BudgetError(f"path search bound {bound} exceeds budget {budget}",
                          bound)
    if k == 0:
        return p.length
    parts = p.parts
    ell = p.length
    col_height = [sum(1 for q in parts if q >= j) for j in range(1, ell + 1)]
    total = 0
    twok = 2 * k

    def rec(t, i, j, stack, i0, j0):
        nonlocal total
        if t == twok + 1:
            total += 1
            return
        h = len(stack)
        remaining = twok - t + 1
        odd = t % 2 == 1
        # up-step: height h+1 must still come back down in time
        if h + 1 <= remaining - 1:
            if odd:
                for jj in range(1, parts[i - 1] + 1):
                    stack.append((i, jj))
                    rec(t + 1, i, jj, stack, i0, j0)
                    stack.pop()
            else:
                for ii in range(1, col_height[j - 1] + 1):
                    stack.append((ii, j))
                    rec(t + 1, ii, j, stack, i0, j0)
                    stack.pop()
        # down-step: forced location, must respect alternation and the end
        if h >= 1:
            ci, cj = stack[-1]
            if odd and ci != i:
                return
            if not odd and cj != j:
                return
            if h == 1 and (ci, cj) != (i0, j0) and t == twok:
                return
            stack.pop()
            rec(t + 1, ci, cj, stack, i0, j0)
            stack.append((ci, cj))

    for i0 in range(1, ell + 1):
        for j0 in range(1, parts[i0 - 1] + 1):
            rec(1, i0, j0, [], i0, j0)
    return total
