"""Integer partitions as Young diagrams, with block coordinates.

Partitions are stored together with their multirectangular coordinates
(block heights and bases) and the row-to-block lookup table, since every
downstream formula consumes those.  All values are immutable.
"""

from math import gcd


class PartitionError(ValueError):
    pass


class BlockMap:
    """Row index -> block index table of a partition.

    ``values[i-1]`` is the index (1-based) of the rectangular block that
    contains row ``i``.  Non-decreasing and surjective onto ``1..r``.
    """

    __slots__ = ("values", "blocks")

    def __init__(self, values):
        values = tuple(values)
        if not values:
            raise PartitionError("block map must be nonempty")
        r = values[-1]
        if any(v2 < v1 for v1, v2 in zip(values, values[1:])):
            raise PartitionError("block map must be non-decreasing")
        if sorted(set(values)) != list(range(1, r + 1)):
            raise PartitionError("block map must attain every value in 1..r")
        self.values = values
        self.blocks = r

    def __call__(self, i):
        return self.values[i - 1]

    def __eq__(self, other):
        return isinstance(other, BlockMap) and self.values == other.values

    def __repr__(self):
        return f"BlockMap({list(self.values)})"


class Partition:
    """A partition with positive non-increasing parts.

    Attributes
    ----------
    parts : tuple of int
        The parts, non-increasing, all positive.
    heights, bases : tuple of int
        Multirectangular coordinates: ``parts`` equals ``bases[0]``
        repeated ``heights[0]`` times, then ``bases[1]`` repeated
        ``heights[1]`` times, and so on; bases strictly decreasing.
    length : int
        Number of parts.
    size : int
        Sum of parts.
    block_map : BlockMap
        Row index to block index table.
    """

    __slots__ = ("parts", "heights", "bases", "length", "size", "block_map",
                 "_self_conjugate")

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise PartitionError("partition must have at least one part")
        for pos, p in enumerate(parts, start=1):
            if p <= 0:
                raise PartitionError(f"non-positive part at index {pos}")
        for pos in range(1, len(parts)):
            if parts[pos] > parts[pos - 1]:
                raise PartitionError(f"increasing at index {pos + 1}")
        self.parts = parts
        heights, bases = [], []
        for p in parts:
            if bases and bases[-1] == p:
                heights[-1] += 1
            else:
                bases.append(p)
                heights.append(1)
        self.heights = tuple(heights)
        self.bases = tuple(bases)
        self.length = len(parts)
        self.size = sum(parts)
        values = []
        for j, a in enumerate(self.heights, start=1):
            values.extend([j] * a)
        self.block_map = BlockMap(values)
        self._self_conjugate = None

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def __str__(self):
        return ",".join(str(p) for p in self.parts)

    @property
    def blocks(self):
        """Number of rectangular blocks, often written r."""
        return len(self.heights)

    def is_self_conjugate(self):
        # Full conjugation check, not the base-sum shortcut: cheap and safe.
        if self._self_conjugate is None:
            self._self_conjugate = conjugate(self) == self
        return self._self_conjugate


def parse_partition(text):
    """Parse ``"p1,p2,...,pk"`` (spaces tolerated) into a Partition."""
    if not isinstance(text, str) or not text.strip():
        raise PartitionError("empty partition text")
    fields = [f.strip() for f in text.split(",")]
    parts = []
    for pos, f in enumerate(fields, start=1):
        if not f:
            raise PartitionError(f"empty entry at index {pos}")
        try:
            parts.append(int(f))
        except ValueError:
            raise PartitionError(f"non-integer entry {f!r} at index {pos}") from None
    return Partition(parts)


def conjugate(p):
    """Transpose of the Young diagram: row j of the result counts the
    rows of ``p`` with at least j boxes."""
    return Partition(tuple(sum(1 for q in p.parts if q >= j)
                           for j in range(1, p.parts[0] + 1)))


def self_conjugate_from_heights(heights):
    """Build the self-conjugate partition whose block heights are given.

    The j-th block has base ``heights[0] + ... + heights[r-j]``, so the
    result always equals its own conjugate.
    """
    heights = tuple(int(a) for a in heights)
    if not heights:
        raise PartitionError("empty height vector")
    if any(a <= 0 for a in heights):
        raise PartitionError("heights must be positive")
    r = len(heights)
    parts = []
    for j, a in enumerate(heights, start=1):
        base = sum(heights[: r - j + 1])
        parts.extend([base] * a)
    p = Partition(parts)
    if not p.is_self_conjugate():
        raise PartitionError("internal error: construction not self-conjugate")
    return p


def contains_cell(p, i, j):
    """Whether box (i, j) lies in the (self-conjugate) diagram.

    Evaluates both the direct test ``j <= parts[i-1]`` and the block
    criterion ``f(i) + f(j) <= r + 1`` and insists they agree.
    """
    if not 1 <= i <= p.length or not 1 <= j <= p.length:
        raise PartitionError(f"cell index ({i},{j}) out of range 1..{p.length}")
    if not p.is_self_conjugate():
        raise PartitionError("block-map cell test requires a self-conjugate partition")
    direct = j <= p.parts[i - 1]
    f = p.block_map
    by_blocks = f(i) + f(j) <= p.blocks + 1
    if direct != by_blocks:
        raise RuntimeError(
            f"cell criterion mismatch at ({i},{j}) for {p}: "
            f"direct={direct} blocks={by_blocks}")
    return direct


def dilate(p, n):
    """Repeat every part n times and multiply it by n (each box becomes
    an n-by-n grid)."""
    if n < 1:
        raise PartitionError("dilation factor must be a positive integer")
    parts = []
    for q in p.parts:
        parts.extend([n * q] * n)
    return Partition(parts)


def is_minimal(p):
    """True when p is not a dilation of a smaller partition, i.e. the gcd
    of all heights and bases is 1."""
    g = 0
    for v in p.heights + p.bases:
        g = gcd(g, v)
    return g == 1


def null_space_dim(p):
    """Almost-sure kernel dimension of a matrix with i.i.d. continuous
    entries on the cells of the (self-conjugate) diagram.

    Counts rows with ``parts[i-1] < length - i + 1`` and cross-checks the
    equivalent block-coordinate sum.
    """
    if not p.is_self_conjugate():
        raise PartitionError("null space formula requires a self-conjugate partition")
    ell = p.length
    direct = sum(1 for i in range(1, ell + 1) if p.parts[i - 1] < ell - i + 1)
    a = p.heights
    r = len(a)
    by_blocks = 0
    for j in range(2, r + 1):
        a_ge_j = sum(a[j - 1:])
        a_le = sum(a[: r - j + 1])
        by_blocks += max(0, min(a_ge_j - a_le, a[j - 1]))
    if direct != by_blocks:
        raise RuntimeError(f"null space formulas disagree for {p}: "
                           f"{direct} vs {by_blocks}")
    return direct
