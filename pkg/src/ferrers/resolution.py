"""Cellular chain complexes, Betti tables and the acyclicity check."""
from __future__ import annotations

import warnings
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import kernels
from .complex import LabeledCellComplex, lcm_lattice_degrees
from .core import Shape, VariableContext
from .errors import MalformedInput, NotGuaranteedMinimal

Q = 0  # characteristic used for the rationals


def parse_field(value) -> int:
    """Return the characteristic: a prime p, or 0 for the rationals ("Q")."""
    if isinstance(value, str):
        if value.strip().upper() in ("Q", "QQ", "0"):
            return Q
        try:
            value = int(value)
        except ValueError:
            raise MalformedInput(f"unknown field {value!r}") from None
    p = int(value)
    if p == 0:
        return Q
    if p < 2 or p >= 2**31 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise MalformedInput(f"field characteristic {p} is not a prime below 2^31")
    return p


def field_name(p: int) -> str:
    return "Q" if p == Q else f"GF({p})"


@dataclass(frozen=True)
class Entry:
    row: int
    col: int
    sign: int
    monomial: tuple[int, ...]


@dataclass(frozen=True)
class ChainComplex:
    """Free complex F_d -> ... -> F_1 -> F_0 = ring.

    ``differentials[k]`` is the map F_{k+1} -> F_k as a list of entries;
    ``basis_labels[k]`` holds the multidegree of each basis element of F_k.
    """

    context: VariableContext
    basis_labels: tuple[tuple[tuple[int, ...], ...], ...]
    differentials: tuple[tuple[Entry, ...], ...]

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.basis_labels)

    def composition_is_zero(self) -> bool:
        for k in range(1, len(self.differentials)):
            lower = defaultdict(list)
            for e in self.differentials[k - 1]:
                lower[e.col].append(e)
            acc: dict[tuple, int] = defaultdict(int)
            for e in self.differentials[k]:
                for f in lower[e.row]:
                    mono = tuple(a + b for a, b in zip(e.monomial, f.monomial))
                    acc[(f.row, e.col, mono)] += e.sign * f.sign
            if any(acc.values()):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "context": list(self.context.names),
            "ranks": list(self.ranks),
            "differentials": [
                {
                    "degree": k,
                    "rows": len(self.basis_labels[k]),
                    "cols": len(self.basis_labels[k + 1]),
                    "entries": [
                        {"row": e.row, "col": e.col, "sign": e.sign, "monomial": list(e.monomial)} for e in d
                    ],
                }
                for k, d in enumerate(self.differentials)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChainComplex":
        ctx = VariableContext(tuple(data["context"]))
        ranks = data["ranks"]
        diffs = tuple(
            tuple(Entry(e["row"], e["col"], e["sign"], tuple(e["monomial"])) for e in d["entries"])
            for d in data["differentials"]
        )
        # basis labels are not serialized; rebuild them from the entries
        zero = tuple([0] * len(ctx))
        labels = [[zero] * r for r in ranks]
        for k, d in enumerate(diffs):
            for e in d:
                row_lab = labels[k][e.row]
                labels[k + 1][e.col] = tuple(a + b for a, b in zip(row_lab, e.monomial))
        return cls(ctx, tuple(tuple(l) for l in labels), diffs)


def cellular_chain_complex(X: LabeledCellComplex) -> ChainComplex:
    """The complex F_X: faces of dimension d span F_{d+1}, F_0 is the ring."""
    zero = tuple([0] * len(X.context))
    top = X.dim
    basis = [[zero]] + [[] for _ in range(top + 1)]
    position: dict = {}
    for f, lab in zip(X.faces, X.labels):
        position[f] = len(basis[f.dim + 1])
        basis[f.dim + 1].append(lab)
    diffs = []
    for k in range(top + 1):
        entries = []
        for f in X.faces_of_dim(k):
            col = position[f]
            lab = X.label(f)
            if k == 0:
                entries.append(Entry(0, col, 1, lab))
                continue
            for g, sign in f.boundary():
                glab = X.label(g)
                entries.append(Entry(position[g], col, sign, tuple(a - b for a, b in zip(lab, glab))))
        entries.sort(key=lambda e: (e.col, e.row))
        diffs.append(tuple(entries))
    return ChainComplex(X.context, tuple(tuple(b) for b in basis), tuple(diffs))


def check_minimal(C: ChainComplex) -> bool:
    """True iff no differential beyond the first has a unit entry."""
    return all(sum(e.monomial) >= 1 for d in C.differentials[1:] for e in d)


@dataclass(frozen=True)
class BettiTable:
    """Graded Betti numbers of the quotient ring, keyed by (i, multidegree).

    ``guaranteed`` is False when the table was read off a complex that is
    not known to be a minimal resolution.
    """

    nvars: int
    entries: dict = field(hash=False)
    guaranteed: bool = field(default=True, compare=False)

    @classmethod
    def from_counts(cls, nvars: int, counts, guaranteed: bool = True) -> "BettiTable":
        data = {(0, tuple([0] * nvars)): 1}
        for key, v in counts.items():
            if v:
                data[key] = data.get(key, 0) + v
        return cls(nvars, dict(sorted(data.items(), key=lambda kv: (kv[0][0], sum(kv[0][1]), kv[0][1]))), guaranteed)

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.nvars == other.nvars and self.entries == other.entries

    def __hash__(self):
        return hash((self.nvars, tuple(self.entries.items())))

    def totals(self) -> tuple[int, ...]:
        top = max(i for i, _ in self.entries)
        out = [0] * (top + 1)
        for (i, _), v in self.entries.items():
            out[i] += v
        return tuple(out)

    def z_graded(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (i, a), v in self.entries.items():
            out[(i, sum(a))] += v
        return dict(sorted(out.items()))

    @property
    def pdim(self) -> int:
        return max(i for i, _ in self.entries)

    def regularity(self) -> int:
        """Castelnuovo-Mumford regularity of the ideal: max |a| - i + 1 over i >= 1."""
        return max((d - i + 1 for (i, d) in self.z_graded() if i >= 1), default=0)

    def is_linear(self, degree: int = 2) -> bool:
        """True iff beta_{i,d} != 0 forces d = i + degree - 1 for i >= 1."""
        return all(d == i + degree - 1 for (i, d) in self.z_graded() if i >= 1)

    def to_json(self) -> dict:
        z = self.z_graded()
        top_i = self.pdim
        degrees = sorted({d for _, d in z})
        return {
            "multigraded": [{"i": i, "degree": list(a), "rank": v} for (i, a), v in self.entries.items()],
            "graded": {
                "rows": list(range(top_i + 1)),
                "cols": degrees,
                "matrix": [[z.get((i, d), 0) for d in degrees] for i in range(top_i + 1)],
            },
            "totals": list(self.totals()),
            "guaranteed_minimal": self.guaranteed,
        }

    def format_text(self) -> str:
        """Macaulay2-style table: row r lists beta_{i, i+r}."""
        z = self.z_graded()
        top = self.pdim
        shifts = sorted({d - i for i, d in z})
        width = max(len(str(v)) for v in z.values()) + 1
        lines = ["       " + "".join(f"{i:>{width}}" for i in range(top + 1))]
        lines.append("total: " + "".join(f"{t:>{width}}" for t in self.totals()))
        for r in shifts:
            cells = []
            for i in range(top + 1):
                v = z.get((i, i + r), 0)
                cells.append(f"{v if v else '.':>{width}}")
            lines.append(f"{r:>5}: " + "".join(cells))
        return "\n".join(lines)


def minimality_guaranteed(X: LabeledCellComplex) -> bool | None:
    """Whether F_X is known to be minimal: True/False for Ferrers-type complexes, None otherwise."""
    if X.kind == "ferrers":
        return True
    if X.kind == "specialized" and X.shape is not None:
        return X.shape.lifting_hypothesis()
    return None


def betti_from_faces(X: LabeledCellComplex) -> BettiTable:
    """beta_{i,a} = number of (i-1)-dimensional faces labeled a."""
    guaranteed = minimality_guaranteed(X)
    if guaranteed is False:
        warnings.warn(
            f"mu={X.shape.mu} violates mu_i >= i-1; face counts need not be Betti numbers",
            NotGuaranteedMinimal,
            stacklevel=2,
        )
    counts: dict = defaultdict(int)
    for f, lab in zip(X.faces, X.labels):
        counts[(f.dim + 1, lab)] += 1
    return BettiTable.from_counts(len(X.context), counts, guaranteed=bool(guaranteed))


graded_betti = betti_from_faces


def betti_closed_form(shape: Shape, i: int) -> int:
    """sum_j C(lambda_j - mu_j + j - 1, i) - C(n, i + 1) for i >= 1."""
    if i < 1:
        raise ValueError("closed form is stated for i >= 1")
    n = shape.n
    return sum(comb(shape.lam[j] - shape.mu[j] + j, i) for j in range(n)) - comb(n, i + 1)


def betti_closed_form_totals(shape: Shape) -> tuple[int, ...]:
    out = [1]
    i = 1
    while True:
        b = betti_closed_form(shape, i)
        if b == 0:
            break
        out.append(b)
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Defect:
    degree: tuple[int, ...]
    dim: int
    rank: int


@dataclass(frozen=True)
class VerificationReport:
    """Degrees c at which the restriction X_{<=c} has non-zero reduced homology."""

    field: int
    degrees_checked: int
    defects: tuple[Defect, ...]

    @property
    def ok(self) -> bool:
        return not self.defects

    def to_json(self) -> dict:
        return {
            "field": field_name(self.field),
            "degrees_checked": self.degrees_checked,
            "defects": [{"degree": list(d.degree), "dim": d.dim, "rank": d.rank} for d in self.defects],
        }


def _restriction_defects(labels, rows, cols, degrees, p, backend=None):
    out = []
    for c in degrees:
        keep = (labels <= np.asarray(c)).all(axis=1)
        if not keep.any():
            continue  # empty restriction counts as acyclic
        betti = kernels.cell_betti(rows[keep], cols[keep], p, backend)
        for level, b in enumerate(betti):
            if b:
                out.append(Defect(tuple(c), level - 1, b))
    return out


def verify_resolution(X: LabeledCellComplex, field=2, jobs: int = 1, backend: str | None = None) -> VerificationReport:
    """Acyclicity of every X_{<=c}, c ranging over the lcm lattice of the vertex labels."""
    p = parse_field(field)
    degrees = lcm_lattice_degrees(X)
    labels = X.label_array
    rows, cols = X.face_arrays()
    if jobs > 1 and len(degrees) > 4 * jobs:
        chunks = [degrees[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = pool.map(_restriction_defects, *zip(*[(labels, rows, cols, ch, p, backend) for ch in chunks]))
            defects = [d for part in parts for d in part]
        order = {c: k for k, c in enumerate(degrees)}
        defects.sort(key=lambda d: (order[d.degree], d.dim))
    else:
        defects = _restriction_defects(labels, rows, cols, degrees, p, backend)
    return VerificationReport(p, len(degrees), tuple(defects))
