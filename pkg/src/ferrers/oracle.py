"""Brute-force Betti numbers and invariants of arbitrary monomial ideals.

Two independent routes: reduced homology of upper Koszul simplicial complexes
over the lcm lattice, and homology of the Taylor complex tensored with the
residue field. Neither looks at any cell complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import kernels
from .complex import join_closure
from .core import Monomial, MonomialIdeal, minimize
from .errors import ZeroIdeal
from .resolution import BettiTable, ChainComplex, Entry, parse_field

TAYLOR_MAX_GENERATORS = 20


@dataclass(frozen=True)
class SimplicialComplex:
    """Faces as bitmasks over ``vertices`` (bit k is vertices[k]).

    ``faces`` empty means the void complex; ``{0}`` is the complex whose only
    face is the empty one.
    """

    vertices: tuple[int, ...]
    faces: frozenset[int]

    @property
    def is_void(self) -> bool:
        return not self.faces

    def face_sets(self) -> list[tuple[int, ...]]:
        out = []
        for f in sorted(self.faces, key=lambda x: (x.bit_count(), x)):
            out.append(tuple(v for k, v in enumerate(self.vertices) if f >> k & 1))
        return out

    def reduced_betti(self, field=2, backend: str | None = None) -> list[int]:
        """Reduced Betti numbers, index d+1 for dimension d (index 0 is H~_{-1})."""
        p = parse_field(field)
        if self.is_void:
            return []
        masks = np.array(sorted(self.faces), dtype=np.int64)
        return kernels.simplicial_betti(masks, p, backend)


def _gen_array(ideal: MonomialIdeal) -> np.ndarray:
    return np.array([g.exps for g in ideal.generators], dtype=np.int64).reshape(len(ideal), ideal.nvars)


def upper_koszul_complex(ideal: MonomialIdeal, a: Sequence[int]) -> SimplicialComplex:
    """Squarefree b <= a (as subsets of supp a) with x^(a-b) in the ideal."""
    a = np.asarray(a, dtype=np.int64)
    support = tuple(int(k) for k in np.flatnonzero(a))
    s = len(support)
    subsets = np.arange(1 << s, dtype=np.int64)
    b = np.zeros((1 << s, len(a)), dtype=np.int64)
    for k, var in enumerate(support):
        b[:, var] = (subsets >> k) & 1
    gens = _gen_array(ideal)
    rest = a[None, :] - b
    member = (gens[None, :, :] <= rest[:, None, :]).all(axis=2).any(axis=1)
    return SimplicialComplex(support, frozenset(int(x) for x in subsets[member]))


def lcm_lattice(ideal: MonomialIdeal) -> list[tuple[int, ...]]:
    return join_closure((g.exps for g in ideal.generators), ideal.nvars)


def betti_oracle(ideal: MonomialIdeal, field=2, backend: str | None = None) -> BettiTable:
    """beta_{i+1,a}(S/I) = dim H~_{i-1}(K^a(I)) over the lcm lattice."""
    p = parse_field(field)
    ideal = minimize(ideal)
    counts = {}
    for a in lcm_lattice(ideal):
        if not any(a):
            continue
        rb = upper_koszul_complex(ideal, a).reduced_betti(p, backend)
        for i, v in enumerate(rb):
            if v:
                counts[(i + 1, a)] = v
    return BettiTable.from_counts(ideal.nvars, counts)


def _subset_lcm_keys(gens: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """lcm of every subset (indexed by bitmask) and an integer key encoding it."""
    nvars = gens.shape[1]
    lcms = np.zeros((1, nvars), dtype=np.int64)
    for g in gens:
        lcms = np.concatenate([lcms, np.maximum(lcms, g)])
    base = int(gens.max()) + 1 if gens.size else 1
    weights = base ** np.arange(nvars, dtype=np.int64)
    return lcms, lcms @ weights, base


def taylor_betti(ideal: MonomialIdeal, field=2, backend: str | None = None) -> BettiTable:
    """Betti numbers from the Taylor complex modulo the maximal ideal.

    In multidegree a the surviving cells are the generator subsets with lcm
    exactly a, joined by the +-1 entries between subsets of equal lcm.
    """
    p = parse_field(field)
    ideal = minimize(ideal)
    g = len(ideal)
    if g > TAYLOR_MAX_GENERATORS:
        raise ValueError(f"Taylor oracle limited to {TAYLOR_MAX_GENERATORS} generators (got {g})")
    gens = _gen_array(ideal)
    lcms, keys, base = _subset_lcm_keys(gens)
    if base ** ideal.nvars >= 2**62:
        raise ValueError("multidegrees too large to encode")
    first = {}
    for mask in range(len(keys) - 1, 0, -1):
        first[int(keys[mask])] = mask
    counts = {}
    for key, betti in kernels.taylor_betti(keys, p, backend).items():
        a = tuple(int(v) for v in lcms[first[key]])
        for size, v in enumerate(betti):
            if v:
                counts[(size, a)] = v
    return BettiTable.from_counts(ideal.nvars, counts)


def taylor_chain_complex(ideal: MonomialIdeal) -> ChainComplex:
    """The Taylor resolution with monomial entries (small ideals only)."""
    ideal = minimize(ideal)
    gens = _gen_array(ideal)
    g = len(ideal)
    if g > 16:
        raise ValueError("Taylor chain complex limited to 16 generators")
    lcms, _, _ = _subset_lcm_keys(gens)
    by_size: list[list[int]] = [[] for _ in range(g + 1)]
    for mask in range(1 << g):
        by_size[mask.bit_count()].append(mask)
    position = {mask: k for level in by_size for k, mask in enumerate(level)}
    labels = tuple(tuple(tuple(int(v) for v in lcms[mask]) for mask in level) for level in by_size)
    diffs = []
    for s in range(1, g + 1):
        entries = []
        for mask in by_size[s]:
            t = 0
            for k in range(g):
                if mask >> k & 1:
                    sub = mask & ~(1 << k)
                    mono = tuple(int(v) for v in lcms[mask] - lcms[sub])
                    entries.append(Entry(position[sub], position[mask], -1 if t % 2 else 1, mono))
                    t += 1
        diffs.append(tuple(entries))
    return ChainComplex(ideal.context, labels, tuple(diffs))


def height(ideal: MonomialIdeal) -> int:
    """Smallest number of variables meeting every generator's support."""
    ideal = minimize(ideal)
    if ideal.is_zero():
        raise ZeroIdeal("the zero ideal has height 0 and no generators")
    supports = [frozenset(g.support()) for g in ideal.generators]
    if any(not s for s in supports):
        return 0  # unit ideal
    variables = sorted(set().union(*supports))
    masks = [sum(1 << variables.index(v) for v in s) for s in supports]
    for size in range(1, len(variables) + 1):
        for combo in combinations(range(len(variables)), size):
            cover = sum(1 << k for k in combo)
            if all(m & cover for m in masks):
                return size
    return len(variables)


@dataclass(frozen=True)
class InvariantReport:
    """Invariants of S/I. ``reg`` is the regularity of the ideal I."""

    nvars: int
    betti_totals: tuple[int, ...]
    graded: dict = field(hash=False)
    pdim: int
    depth: int
    height: int
    dim: int
    reg: int
    cohen_macaulay: bool
    betti: BettiTable | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "betti": list(self.betti_totals),
            "graded": [{"i": i, "d": d, "rank": v} for (i, d), v in self.graded.items()],
            "pdim": self.pdim,
            "depth": self.depth,
            "height": self.height,
            "dim": self.dim,
            "reg": self.reg,
            "cohen_macaulay": self.cohen_macaulay,
        }


def report_from_betti(table: BettiTable, ht: int) -> InvariantReport:
    pdim = table.pdim
    depth = table.nvars - pdim
    dim = table.nvars - ht
    return InvariantReport(
        nvars=table.nvars,
        betti_totals=table.totals(),
        graded=table.z_graded(),
        pdim=pdim,
        depth=depth,
        height=ht,
        dim=dim,
        reg=table.regularity(),
        cohen_macaulay=depth == dim,
        betti=table,
    )


def invariants_oracle(ideal: MonomialIdeal, field=2, method: str = "koszul", backend: str | None = None) -> InvariantReport:
    """pdim from Betti numbers, depth by Auslander-Buchsbaum, height by cover search."""
    if ideal.is_zero():
        raise ZeroIdeal("invariants of the zero ideal are not computed")
    betti = (taylor_betti if method == "taylor" else betti_oracle)(ideal, field, backend)
    return report_from_betti(betti, height(ideal))


def cross_validate(ideal: MonomialIdeal, fields: Sequence = (2, 32003), oracle: str = "both",
                   backend: str | None = None) -> tuple[BettiTable, list[str]]:
    """Run the selected oracles over all fields; return a table and any disagreements."""
    methods = ["koszul", "taylor"] if oracle == "both" else [oracle]
    tables = {}
    for f in fields:
        p = parse_field(f)
        for method in methods:
            fn = taylor_betti if method == "taylor" else betti_oracle
            tables[(method, p)] = fn(ideal, p, backend)
    ref_key = next(iter(tables))
    ref = tables[ref_key]
    problems = [f"{m} over {p} differs from {ref_key[0]} over {ref_key[1]}" for (m, p), t in tables.items() if t != ref]
    return ref, problems
