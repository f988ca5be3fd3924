"""Pure-Python kernels.

Reference implementation of everything in ``_kernels.pyx``; it is used when
the extension is not built, when ``FERRERS_PURE_PYTHON`` is set, and always
for computations over the rationals (characteristic 0).

All complexes are handed over as levelled cells: level 0 is the empty face,
level ``k`` holds cells with ``k`` vertices (simplicial), ``|S|+|T|-1`` for
product cells, or ``k`` generators for Taylor cells. Each function returns the
reduced Betti numbers per level.
"""
from __future__ import annotations

from math import gcd


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int):
    k = 0
    while x:
        if x & 1:
            yield k
        x >>= 1
        k += 1


def _reduce_modp(columns, p, skip):
    """Column reduction over GF(p); returns (rank, pivot rows)."""
    pivots: dict[int, dict[int, int]] = {}
    lows = []
    for j, col in enumerate(columns):
        if j in skip:
            continue
        c = {r: v % p for r, v in col.items() if v % p}
        while c:
            low = max(c)
            other = pivots.get(low)
            if other is None:
                break
            f = c[low] * pow(other[low], -1, p) % p
            for r, v in other.items():
                nv = (c.get(r, 0) - f * v) % p
                if nv:
                    c[r] = nv
                else:
                    c.pop(r, None)
        if c:
            pivots[low] = c
            lows.append(low)
    return len(lows), lows


def _reduce_rational(columns, skip):
    """Fraction-free column reduction over Q; entries stay integral."""
    pivots: dict[int, dict[int, int]] = {}
    lows = []
    for j, col in enumerate(columns):
        if j in skip:
            continue
        c = {r: v for r, v in col.items() if v}
        while c:
            low = max(c)
            other = pivots.get(low)
            if other is None:
                break
            a, b = other[low], c[low]
            new = {r: a * v for r, v in c.items()}
            for r, v in other.items():
                nv = new.get(r, 0) - b * v
                if nv:
                    new[r] = nv
                else:
                    new.pop(r, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
            c = {r: v // g for r, v in new.items()} if g > 1 else new
        if c:
            pivots[low] = c
            lows.append(low)
    return len(lows), lows


def chain_betti(counts: list[int], boundaries: list[list[dict[int, int]]], p: int) -> list[int]:
    """Betti numbers of a levelled chain complex.

    ``boundaries[k]`` lists the columns of the map from level ``k`` to level
    ``k-1`` (``boundaries[0]`` is ignored). Reduction runs top-down and skips
    columns already known to reduce to zero (clearing).
    """
    top = len(counts) - 1
    ranks = [0] * (top + 2)
    cleared: set[int] = set()
    for k in range(top, 0, -1):
        if p:
            r, lows = _reduce_modp(boundaries[k], p, cleared)
        else:
            r, lows = _reduce_rational(boundaries[k], cleared)
        ranks[k] = r
        cleared = set(lows)
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]


def _index_levels(cells, level_of):
    levels: dict[int, list[int]] = {}
    for c in cells:
        levels.setdefault(level_of(c), []).append(c)
    top = max(levels) if levels else -1
    index = {}
    for k in range(top + 1):
        for pos, c in enumerate(levels.get(k, ())):
            index[c] = pos
    return levels, index, top


def simplicial_betti(masks, p: int) -> list[int]:
    """Reduced Betti numbers of a simplicial complex given by face bitmasks.

    The empty face (mask 0) must be present unless the complex is void, in
    which case an empty list is returned.
    """
    masks = [int(x) for x in masks]
    if not masks:
        return []
    levels, index, top = _index_levels(masks, _popcount)
    counts = [len(levels.get(k, ())) for k in range(top + 1)]
    boundaries: list[list[dict[int, int]]] = [[]]
    for k in range(1, top + 1):
        cols = []
        for face in levels.get(k, ()):
            col = {}
            for t, b in enumerate(_bits(face)):
                sub = face & ~(1 << b)
                if sub not in index:
                    raise ValueError("face set is not closed under taking faces")
                col[index[sub]] = -1 if t % 2 else 1
            cols.append(col)
        boundaries.append(cols)
    return chain_betti(counts, boundaries, p)


def cell_betti(rows, cols, p: int) -> list[int]:
    """Reduced Betti numbers of a subcomplex of a product of two simplices.

    Cells are pairs of bitmasks (S, T); the product orientation gives
    d(S x T) = dS x T + (-1)^(|S|-1) S x dT, augmented to the empty cell.
    """
    cells = [(int(s), int(t)) for s, t in zip(rows, cols)]
    if not cells:
        return []
    cells.append((0, 0))
    levels, index, top = _index_levels(cells, lambda c: _popcount(c[0]) + _popcount(c[1]) - 1 if c != (0, 0) else 0)
    counts = [len(levels.get(k, ())) for k in range(top + 1)]
    boundaries: list[list[dict[int, int]]] = [[]]
    for k in range(1, top + 1):
        columns = []
        for s, t in levels.get(k, ()):
            col = {}
            ns, nt = _popcount(s), _popcount(t)
            if ns == 1 and nt == 1:
                col[index[(0, 0)]] = 1
            if ns >= 2:
                for pos, b in enumerate(_bits(s)):
                    face = (s & ~(1 << b), t)
                    if face not in index:
                        raise ValueError("cell set is not closed under taking faces")
                    col[index[face]] = -1 if pos % 2 else 1
            if nt >= 2:
                base = -1 if (ns - 1) % 2 else 1
                for pos, b in enumerate(_bits(t)):
                    face = (s, t & ~(1 << b))
                    if face not in index:
                        raise ValueError("cell set is not closed under taking faces")
                    col[index[face]] = -base if pos % 2 else base
            columns.append(col)
        boundaries.append(columns)
    return chain_betti(counts, boundaries, p)


def taylor_betti(keys, p: int) -> dict[int, list[int]]:
    """Homology of the Taylor complex tensored with the residue field.

    ``keys[mask]`` is an integer encoding lcm of the generators in ``mask``.
    In each multidegree only subsets with that exact lcm survive, and the
    surviving differential entries are the +-1 signs. Returns, per lcm key
    (except the empty subset's), Betti numbers indexed by subset size.
    """
    keys = [int(k) for k in keys]
    groups: dict[int, list[int]] = {}
    for mask, key in enumerate(keys):
        if mask:
            groups.setdefault(key, []).append(mask)
    out = {}
    for key in sorted(groups):
        masks = groups[key]
        levels, index, top = _index_levels(masks, _popcount)
        counts = [len(levels.get(k, ())) for k in range(top + 1)]
        boundaries: list[list[dict[int, int]]] = [[]]
        for k in range(1, top + 1):
            cols = []
            for face in levels.get(k, ()):
                col = {}
                for t, b in enumerate(_bits(face)):
                    sub = face & ~(1 << b)
                    if sub and keys[sub] == key:
                        col[index[sub]] = -1 if t % 2 else 1
                cols.append(col)
            boundaries.append(cols)
        out[key] = chain_betti(counts, boundaries, p)
    return out
