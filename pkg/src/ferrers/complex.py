"""Labeled subcomplexes of the product of two simplices.

A face is a pair (S, T) of non-empty index sets, stored as bitmasks (bit
``i-1`` stands for index ``i``); it is the product of the simplex on the rows
in S with the simplex on the columns in T and has dimension |S|+|T|-2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import Shape, Substitution, VariableContext
from .errors import MalformedInput


def _bits(mask: int) -> tuple[int, ...]:
    out, k = [], 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


@dataclass(frozen=True)
class Face:
    rows: int
    cols: int

    @classmethod
    def of(cls, rows: Iterable[int], cols: Iterable[int]) -> "Face":
        return cls(_mask(rows), _mask(cols))

    @property
    def row_set(self) -> tuple[int, ...]:
        return _bits(self.rows)

    @property
    def col_set(self) -> tuple[int, ...]:
        return _bits(self.cols)

    @property
    def dim(self) -> int:
        return self.rows.bit_count() + self.cols.bit_count() - 2

    def sort_key(self):
        return (self.dim, self.row_set, self.col_set)

    def boundary(self) -> Iterator[tuple["Face", int]]:
        """Facets with incidence signs (product orientation)."""
        rows, cols = self.row_set, self.col_set
        s = len(rows)
        if s >= 2:
            for k, i in enumerate(rows):
                yield Face(self.rows & ~(1 << (i - 1)), self.cols), (-1) ** k
        if len(cols) >= 2:
            for k, j in enumerate(cols):
                yield Face(self.rows, self.cols & ~(1 << (j - 1))), (-1) ** (s - 1 + k)

    def facets(self) -> list["Face"]:
        return [f for f, _ in self.boundary()]

    def vertices(self) -> Iterator[tuple[int, int]]:
        for i in self.row_set:
            for j in self.col_set:
                yield i, j

    def __repr__(self) -> str:
        return f"Face({set(self.row_set)}, {set(self.col_set)})"


@dataclass(frozen=True, eq=False)
class LabeledCellComplex:
    """Faces in canonical order with their lcm labels (exponent tuples).

    ``kind`` records where the complex came from: ``"ferrers"`` for X_{n,m}
    and X_{lambda-mu}, ``"specialized"`` for their identity specialization,
    ``"other"`` otherwise. Together with ``shape`` it decides whether the
    supported complex is known to be a minimal resolution.
    """

    context: VariableContext
    n: int
    m: int
    faces: tuple[Face, ...]
    labels: tuple[tuple[int, ...], ...]
    shape: Shape | None = field(default=None)
    kind: str = field(default="other")

    def __eq__(self, other):
        if not isinstance(other, LabeledCellComplex):
            return NotImplemented
        return (self.context, self.faces, self.labels) == (other.context, other.faces, other.labels)

    def __hash__(self):
        return hash((self.context, self.faces, self.labels))

    def __len__(self) -> int:
        return len(self.faces)

    @classmethod
    def from_vertex_labels(cls, context, n, m, faces, vertex_label, **meta) -> "LabeledCellComplex":
        """Build a complex whose face labels are the lcms of the vertex labels."""
        faces = sorted(set(faces), key=Face.sort_key)
        labels = []
        for f in faces:
            lab = [0] * len(context)
            for v in f.vertices():
                for k, e in enumerate(vertex_label[v]):
                    if e > lab[k]:
                        lab[k] = e
            labels.append(tuple(lab))
        return cls(context, n, m, tuple(faces), tuple(labels), **meta)

    @cached_property
    def label_array(self) -> np.ndarray:
        return np.array(self.labels, dtype=np.int64).reshape(len(self.faces), len(self.context))

    @cached_property
    def _index(self) -> dict[Face, int]:
        return {f: k for k, f in enumerate(self.faces)}

    def label(self, face: Face) -> tuple[int, ...]:
        return self.labels[self._index[face]]

    def __contains__(self, face: Face) -> bool:
        return face in self._index

    @property
    def dim(self) -> int:
        return max((f.dim for f in self.faces), default=-1)

    def faces_of_dim(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dim == d]

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dim + 1)
        for f in self.faces:
            counts[f.dim] += 1
        return tuple(counts)

    def vertices(self) -> list[Face]:
        return self.faces_of_dim(0)

    def vertex_labels(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {(v.row_set[0], v.col_set[0]): self.label(v) for v in self.vertices()}

    def maximal_faces(self) -> list[Face]:
        covered = set()
        for f in self.faces:
            covered.update(f.facets())
        return [f for f in self.faces if f not in covered]

    def is_closed(self) -> bool:
        return all(g in self._index for f in self.faces for g in f.facets())

    def labels_are_lcms(self) -> bool:
        vl = self.vertex_labels()
        for f, lab in zip(self.faces, self.labels):
            expect = tuple(max(vl[v][k] for v in f.vertices()) for k in range(len(self.context)))
            if expect != lab:
                return False
        return True

    def face_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.array([f.rows for f in self.faces], dtype=np.int64),
                np.array([f.cols for f in self.faces], dtype=np.int64))

    def subcomplex(self, keep: Sequence[bool] | np.ndarray) -> "LabeledCellComplex":
        faces = tuple(f for f, k in zip(self.faces, keep) if k)
        labels = tuple(lab for lab, k in zip(self.labels, keep) if k)
        return LabeledCellComplex(self.context, self.n, self.m, faces, labels, self.shape, self.kind)

    def to_json(self) -> dict:
        return {
            "context": list(self.context.names),
            "n": self.n,
            "m": self.m,
            "faces": [
                {"rows": list(f.row_set), "cols": list(f.col_set), "dim": f.dim, "label": list(lab)}
                for f, lab in zip(self.faces, self.labels)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LabeledCellComplex":
        """Load an exported complex; face labels are recomputed from vertex labels and checked."""
        try:
            ctx = VariableContext(tuple(data["context"]))
            entries = [(Face.of(f["rows"], f["cols"]), tuple(int(e) for e in f["label"])) for f in data["faces"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad complex file: {exc}") from None
        if any(not f.rows or not f.cols for f, _ in entries):
            raise MalformedInput("faces need non-empty rows and cols")
        n = data.get("n") or max(max(f.row_set) for f, _ in entries)
        m = data.get("m") or max(max(f.col_set) for f, _ in entries)
        vlabels = {}
        for f, lab in entries:
            if f.dim == 0:
                vlabels[(f.row_set[0], f.col_set[0])] = lab
        faces = [f for f, _ in entries]
        for f in faces:
            if any(v not in vlabels for v in f.vertices()):
                raise MalformedInput(f"{f} has an unlabeled vertex")
        cx = cls.from_vertex_labels(ctx, n, m, faces, vlabels)
        given = dict(entries)
        if any(given[f] != lab for f, lab in zip(cx.faces, cx.labels)):
            raise MalformedInput("face labels are not the lcm of their vertex labels")
        if not cx.is_closed():
            raise MalformedInput("face set is not closed under taking facets")
        return cx

    def to_dot(self) -> str:
        lines = ["graph complex {"]
        for v in self.vertices():
            name = f"v{v.row_set[0]}_{v.col_set[0]}"
            lines.append(f'  {name} [label="{self.context.format(self.label(v))}"];')
        for e in self.faces_of_dim(1):
            a, b = [f"v{i}_{j}" for i, j in e.vertices()]
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _xy_vertex_labels(n: int, m: int, cells: Iterable[tuple[int, int]]) -> dict:
    out = {}
    for i, j in cells:
        exps = [0] * (n + m)
        exps[i - 1] = 1
        exps[n + j - 1] = 1
        out[(i, j)] = tuple(exps)
    return out


def build_bipartite_complex(n: int, m: int) -> LabeledCellComplex:
    """The product of simplices X_{n,m} with vertex (i, j) labeled x_i*y_j."""
    if n < 1 or m < 1:
        raise MalformedInput("n and m must be positive")
    faces = [Face(s, t) for s in range(1, 1 << n) for t in range(1, 1 << m)]
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, m + 1)]
    return LabeledCellComplex.from_vertex_labels(
        VariableContext.xy(n, m), n, m, faces, _xy_vertex_labels(n, m, cells), kind="ferrers"
    )


def shape_faces(shape: Shape) -> Iterator[Face]:
    """Faces (S, T) with S x T inside the diagram, generated by pivot row r = max S.

    Since mu increases and lambda decreases, S x T fits iff
    mu_r < min T and max T <= lambda_r.
    """
    for r in range(1, shape.n + 1):
        lo, hi = shape.mu[r - 1], shape.lam[r - 1]
        col_range = ((1 << hi) - 1) & ~((1 << lo) - 1)
        top = 1 << (r - 1)
        for low_rows in range(1 << (r - 1)):
            s = top | low_rows
            t = col_range
            while t:
                yield Face(s, t)
                t = (t - 1) & col_range


def build_shape_complex(shape: Shape) -> LabeledCellComplex:
    n, m = shape.n, shape.m
    return LabeledCellComplex.from_vertex_labels(
        VariableContext.xy(n, m), n, m, shape_faces(shape), _xy_vertex_labels(n, m, shape.cells()),
        shape=shape, kind="ferrers",
    )


def specialize_labels(X: LabeledCellComplex, substitution: Substitution | None = None) -> LabeledCellComplex:
    """Same faces, labels pushed through the substitution y_j -> x_sigma(j)."""
    n, m = X.context.split_xy()
    if substitution is None:
        substitution = Substitution.identity(m)
    k = max(n, m, substitution.target_size)
    labels = tuple(substitution.apply(lab, n, k) for lab in X.labels)
    kind = "specialized" if X.kind == "ferrers" and substitution.is_identity() else "other"
    return LabeledCellComplex(VariableContext.x(k), X.n, X.m, X.faces, labels, X.shape, kind)


def restrict(X: LabeledCellComplex, c: Sequence[int]) -> LabeledCellComplex:
    """Subcomplex of faces whose label divides the multidegree ``c``."""
    c = np.asarray(c, dtype=np.int64)
    if c.shape != (len(X.context),):
        raise MalformedInput("degree does not match the variable context")
    keep = (X.label_array <= c).all(axis=1) if len(X) else np.zeros(0, dtype=bool)
    return X.subcomplex(keep)


def lift_degree(cbar: Sequence[int], shape: Shape) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lift a degree over x1..xm to (a, b) over x1..xn, y1..ym.

    a_i = max(0, c_i - 1) and b_i = c_i - a_i for i <= n, b_i = c_i for n < i <= m.
    """
    n, m = shape.n, shape.m
    if len(cbar) != m:
        raise MalformedInput(f"degree must have {m} entries")
    a = tuple(max(0, c - 1) for c in cbar[:n])
    b = tuple(cbar[i] - a[i] if i < n else cbar[i] for i in range(m))
    return a, b


def join_closure(degrees: Iterable[Sequence[int]], nvars: int) -> list[tuple[int, ...]]:
    """All joins (componentwise maxima) of subsets, including the empty join 0."""
    lattice = {tuple([0] * nvars)}
    for d in degrees:
        d = tuple(d)
        lattice |= {tuple(max(x, y) for x, y in zip(l, d)) for l in lattice}
    return sorted(lattice, key=lambda v: (sum(v), v))


def lcm_lattice_degrees(X: LabeledCellComplex) -> list[tuple[int, ...]]:
    return join_closure({X.label(v) for v in X.vertices()}, len(X.context))


def lifting_claim_failures(shape: Shape, cbars: Iterable[Sequence[int]] | None = None) -> list[tuple[int, ...]]:
    """Degrees where restricting then specializing differs from specializing then restricting.

    For each cbar (default: the lcm lattice of the specialized complex) this
    compares the specialized labels of X restricted to lift_degree(cbar) with
    the specialized complex restricted to cbar', the join of its vertex labels
    dividing cbar.
    """
    X = build_shape_complex(shape)
    Xbar = specialize_labels(X)
    if cbars is None:
        cbars = lcm_lattice_degrees(Xbar)
    vlabels = np.array([Xbar.label(v) for v in Xbar.vertices()], dtype=np.int64)
    bad = []
    for cbar in cbars:
        cbar = tuple(int(v) for v in cbar)
        below = vlabels[(vlabels <= np.array(cbar)).all(axis=1)]
        cprime = tuple(below.max(axis=0)) if len(below) else tuple([0] * shape.m)
        a, b = lift_degree(cbar, shape)
        lifted = specialize_labels(restrict(X, a + b))
        direct = restrict(Xbar, cprime)
        if lifted != direct:
            bad.append(cbar)
    return bad
