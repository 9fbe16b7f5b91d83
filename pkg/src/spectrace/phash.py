"""Perceptual fingerprints of behavior images and category clustering.

Each channel plane is downscaled to 9 columns by 8 rows with exact area
averaging, then one bit per horizontal neighbor pair records whether the
left cell is strictly brighter than the right. The 64 bits pack row-major,
most significant first, and the three channel hashes concatenate R|G|B into
a 192-bit fingerprint. Categories are the single-linkage connected
components of the graph whose edges join fingerprints within a Hamming
cutoff.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codec import BehaviorImage

HASH_BITS = 192
CHANNEL_HASH_BITS = 64
DEFAULT_CUTOFF = 74


def _overlap_lengths(src: int, dst: int) -> np.ndarray:
    """(dst, src) integer matrix of box overlaps, scaled by dst.

    Target cell k spans [k*src, (k+1)*src) and source pixel a spans
    [a*dst, (a+1)*dst) once the axis is scaled by dst, so every overlap is
    an exact integer and each row sums to src.
    """
    lengths = np.zeros((dst, src), dtype=np.int64)
    for k in range(dst):
        lo, hi = k * src, (k + 1) * src
        first = lo // dst
        last = min(-(-hi // dst), src)
        for a in range(first, last):
            lengths[k, a] = max(0, min(hi, (a + 1) * dst) - max(lo, a * dst))
    return lengths


def _downscale_numerators(plane: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Box averages times H*W. Exact integers for integer pixel planes."""
    lr = _overlap_lengths(plane.shape[0], rows)
    lc = _overlap_lengths(plane.shape[1], cols)
    if np.issubdtype(plane.dtype, np.integer) or plane.dtype == np.bool_:
        return lr @ plane.astype(np.int64) @ lc.T
    return lr.astype(np.float64) @ plane.astype(np.float64) @ lc.T.astype(np.float64)


def area_downscale(plane: np.ndarray, rows: int = 8, cols: int = 9) -> np.ndarray:
    """Box-average downscale of a 2D plane.

    Integer planes go through pure integer arithmetic, so equal true
    averages stay exactly equal; the hash below inherits that.
    """
    plane = np.asarray(plane)
    return _downscale_numerators(plane, rows, cols) / (plane.shape[0] * plane.shape[1])


def dhash_channel(plane: np.ndarray) -> int:
    """64-bit difference hash of one channel plane.

    Bit (r, c) is 1 iff the 9x8 area downscale satisfies
    p[r][c] > p[r][c+1]; ties give 0. Bits pack row-major with (0, 0) as
    the most significant. Comparisons run on the exact integer numerators
    of the averages whenever the plane is integer valued.
    """
    plane = np.asarray(plane)
    if plane.ndim != 2 or min(plane.shape) < 2:
        raise ValueError(f"need a 2D plane with side >= 2, got shape {plane.shape}")
    small = _downscale_numerators(plane, 8, 9)
    bits = 0
    for r in range(8):
        for c in range(8):
            bits = (bits << 1) | int(small[r, c] > small[r, c + 1])
    return bits


@dataclass(frozen=True)
class PerceptualHash:
    """192-bit fingerprint: dHash(R) | dHash(G) | dHash(B), R in the high bits."""

    bits: int
    source_id: str = ""

    def hex(self) -> str:
        return f"{self.bits:048x}"

    @classmethod
    def from_hex(cls, digits: str, source_id: str = "") -> "PerceptualHash":
        return cls(int(digits, 16), source_id)


def hash192(image: BehaviorImage | np.ndarray, source_id: str = "") -> PerceptualHash:
    """Concatenated per-channel difference hash of an RGB raster."""
    pixels = image.pixels if isinstance(image, BehaviorImage) else np.asarray(image)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise ValueError(f"expected an RGB raster, got shape {pixels.shape}")
    bits = 0
    for channel in range(3):
        bits = (bits << CHANNEL_HASH_BITS) | dhash_channel(pixels[:, :, channel])
    return PerceptualHash(bits, source_id)


def hamming(a: PerceptualHash | int, b: PerceptualHash | int) -> int:
    """Number of differing bits between two fingerprints."""
    x = a.bits if isinstance(a, PerceptualHash) else int(a)
    y = b.bits if isinstance(b, PerceptualHash) else int(b)
    return (x ^ y).bit_count()


class _DisjointSet:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


@dataclass
class CategoryPartition:
    """Disjoint groups of source ids under a Hamming cutoff."""

    groups: list[list[str]]
    cutoff: int

    def group_count(self) -> int:
        return len(self.groups)

    def group_of(self) -> dict[str, int]:
        return {sid: gi for gi, group in enumerate(self.groups) for sid in group}


def cluster(hashes: Sequence[PerceptualHash], cutoff: int = DEFAULT_CUTOFF) -> CategoryPartition:
    """Single-linkage components over pairs within the Hamming cutoff."""
    if not 0 <= cutoff <= HASH_BITS:
        raise ValueError(f"cutoff must be in [0, {HASH_BITS}], got {cutoff}")
    items = list(hashes)
    dsu = _DisjointSet(len(items))
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if hamming(items[i], items[j]) <= cutoff:
                dsu.union(i, j)
    members: dict[int, list[str]] = {}
    for idx, item in enumerate(items):
        members.setdefault(dsu.find(idx), []).append(item.source_id)
    groups = [members[root] for root in sorted(members, key=lambda r: min(members[r]) if members[r] else "")]
    return CategoryPartition(groups, cutoff)


def distance_matrix(hashes: Sequence[PerceptualHash]) -> np.ndarray:
    """Full pairwise Hamming distance matrix."""
    items = list(hashes)
    out = np.zeros((len(items), len(items)), dtype=np.int64)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            out[i, j] = out[j, i] = hamming(items[i], items[j])
    return out


def distance_histogram(hashes: Sequence[PerceptualHash]) -> dict[int, int]:
    """Counts of pairwise distances at bin width 1 over all unordered pairs."""
    counts: dict[int, int] = {}
    items = list(hashes)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            d = hamming(items[i], items[j])
            counts[d] = counts.get(d, 0) + 1
    return counts
