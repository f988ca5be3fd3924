"""Shapes, monomials, monomial ideals and the specialization substitution.

Variables are 1-indexed to follow the usual notation ``x1..xn, y1..ym``;
exponent vectors are plain tuples ordered like the variable context.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .errors import (
    LengthMismatch,
    MalformedInput,
    MuOutOfRange,
    MuTooSmall,
    NotAPartition,
    WidthLessThanHeight,
)

_NAME = re.compile(r"^([a-z]+)(\d+)$")


@dataclass(frozen=True)
class VariableContext:
    names: tuple[str, ...]

    @classmethod
    def xy(cls, n: int, m: int) -> "VariableContext":
        return cls(tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"y{j}" for j in range(1, m + 1)))

    @classmethod
    def x(cls, k: int) -> "VariableContext":
        return cls(tuple(f"x{i}" for i in range(1, k + 1)))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def split_xy(self) -> tuple[int, int]:
        """Return ``(n, m)`` if the context is exactly ``x1..xn, y1..ym``."""
        n = sum(1 for v in self.names if v.startswith("x"))
        m = len(self.names) - n
        if not n or not m or self != VariableContext.xy(n, m):
            raise MalformedInput(f"context {self.names} is not of the form x1..xn,y1..ym")
        return n, m

    def format(self, exps: Sequence[int]) -> str:
        parts = []
        for name, e in zip(self.names, exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def parse(self, text: str) -> "Monomial":
        """Parse ``x1*y3^2`` (``*`` optional between factors) into a monomial."""
        exps = [0] * len(self.names)
        text = text.replace(" ", "")
        if text in ("", "1"):
            return Monomial(tuple(exps))
        for token in re.findall(r"[a-z]+\d+(?:\^\d+)?", text):
            name, _, power = token.partition("^")
            try:
                exps[self.index(name)] += int(power or 1)
            except ValueError:
                raise MalformedInput(f"unknown variable {name!r}") from None
        if re.sub(r"[a-z]+\d+(?:\^\d+)?|\*", "", text):
            raise MalformedInput(f"cannot parse monomial {text!r}")
        return Monomial(tuple(exps))


@dataclass(frozen=True, order=True)
class Monomial:
    exps: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(max(a, b) for a, b in zip(self.exps, other.exps)))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, e in enumerate(self.exps) if e)


def _canonical(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    # descending lex: x1y2 before x1y3 before x2y3
    return tuple(sorted(set(gens), reverse=True))


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by a (sorted, deduplicated) set of generators."""

    context: VariableContext
    generators: tuple[Monomial, ...]

    def __post_init__(self):
        for g in self.generators:
            if len(g.exps) != len(self.context):
                raise MalformedInput("generator length does not match the variable context")
        object.__setattr__(self, "generators", _canonical(self.generators))

    @classmethod
    def from_strings(cls, context: VariableContext, gens: Iterable[str]) -> "MonomialIdeal":
        return cls(context, tuple(context.parse(g) for g in gens))

    @property
    def nvars(self) -> int:
        return len(self.context)

    def __len__(self) -> int:
        return len(self.generators)

    def contains(self, mono: Monomial) -> bool:
        return any(g.divides(mono) for g in self.generators)

    def is_minimal(self) -> bool:
        return len(minimize(self)) == len(self)

    def minimize(self) -> "MonomialIdeal":
        return minimize(self)

    def is_zero(self) -> bool:
        return not self.generators

    def format(self) -> list[str]:
        return [self.context.format(g.exps) for g in self.generators]

    def to_json(self) -> dict:
        return {"variables": list(self.context.names), "generators": [list(g.exps) for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> "MonomialIdeal":
        try:
            ctx = VariableContext(tuple(data["variables"]))
            gens = tuple(Monomial(tuple(int(e) for e in g)) for g in data["generators"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad ideal file: {exc}") from None
        if any(e < 0 for g in gens for e in g.exps):
            raise MalformedInput("negative exponent")
        return cls(ctx, gens)


def minimize(ideal: MonomialIdeal) -> MonomialIdeal:
    """Drop every generator divisible by another one."""
    gens = sorted(set(ideal.generators), key=lambda g: (g.degree, g.exps))
    kept: list[Monomial] = []
    for g in gens:
        if not any(h.divides(g) for h in kept):
            kept.append(g)
    return MonomialIdeal(ideal.context, tuple(kept))


@dataclass(frozen=True)
class Shape:
    """A pair (lambda, mu) describing the diagram cells mu_i < j <= lambda_i."""

    lam: tuple[int, ...]
    mu: tuple[int, ...]

    def __post_init__(self):
        lam, mu = tuple(self.lam), tuple(self.mu)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        if len(lam) != len(mu) or not lam:
            raise LengthMismatch("lambda and mu must have the same positive length")
        if any(not isinstance(v, int) for v in lam + mu):
            raise MalformedInput("lambda and mu must be integer sequences")
        if any(a < b for a, b in zip(lam, lam[1:])) or lam[-1] < 1:
            raise NotAPartition(f"lambda={lam} is not a partition")
        if mu[0] < 0 or any(a > b for a, b in zip(mu, mu[1:])) or mu[-1] >= lam[-1]:
            raise MuOutOfRange(f"mu={mu} must satisfy 0 <= mu_1 <= ... <= mu_n < lambda_n")
        if lam[0] < len(lam):
            raise WidthLessThanHeight(f"lambda_1={lam[0]} is smaller than n={len(lam)}")

    @property
    def n(self) -> int:
        return len(self.lam)

    @property
    def m(self) -> int:
        return self.lam[0]

    def contains(self, i: int, j: int) -> bool:
        return 1 <= i <= self.n and self.mu[i - 1] < j <= self.lam[i - 1]

    def cells(self) -> Iterator[tuple[int, int]]:
        for i in range(1, self.n + 1):
            for j in range(self.mu[i - 1] + 1, self.lam[i - 1] + 1):
                yield i, j

    @property
    def size(self) -> int:
        return sum(self.lam) - sum(self.mu)

    def lifting_hypothesis(self) -> bool:
        """True when mu_i >= i - 1 for every row."""
        return all(u >= i for i, u in enumerate(self.mu))

    def diagram(self) -> str:
        rows = []
        for u, l in zip(self.mu, self.lam):
            rows.append("." * u + "#" * (l - u))
        return "\n".join(rows)

    def to_json(self) -> dict:
        return {"lambda": list(self.lam), "mu": list(self.mu)}

    @classmethod
    def from_json(cls, data: dict) -> "Shape":
        try:
            lam, mu = data["lambda"], data.get("mu", [0] * len(data["lambda"]))
        except (KeyError, TypeError):
            raise MalformedInput("shape file needs a 'lambda' list") from None
        return validate_shape(lam, mu)


def validate_shape(lam: Sequence[int], mu: Sequence[int]) -> Shape:
    return Shape(tuple(lam), tuple(mu))


@dataclass(frozen=True)
class Substitution:
    """Map y_j -> x_{assignment[j-1]} (1-based target indices)."""

    assignment: tuple[int, ...]
    target_size: int = field(default=0)

    def __post_init__(self):
        if any(a < 1 for a in self.assignment):
            raise MalformedInput("substitution targets are 1-based")
        k = max(self.target_size, max(self.assignment, default=0))
        object.__setattr__(self, "target_size", k)

    @classmethod
    def identity(cls, m: int) -> "Substitution":
        return cls(tuple(range(1, m + 1)), m)

    def is_identity(self) -> bool:
        return self.assignment == tuple(range(1, len(self.assignment) + 1))

    def apply(self, exps: Sequence[int], n: int, k: int) -> tuple[int, ...]:
        """Push an exponent vector over ``x1..xn, y1..ym`` to ``x1..xk``."""
        out = list(exps[:n]) + [0] * (k - n)
        for j, e in enumerate(exps[n:]):
            out[self.assignment[j] - 1] += e
        return tuple(out)


def generators(shape: Shape) -> MonomialIdeal:
    """The generalized Ferrers ideal: x_i*y_j for every cell of the diagram."""
    n, m = shape.n, shape.m
    ctx = VariableContext.xy(n, m)
    gens = []
    for i, j in shape.cells():
        exps = [0] * (n + m)
        exps[i - 1] = 1
        exps[n + j - 1] = 1
        gens.append(Monomial(tuple(exps)))
    return MonomialIdeal(ctx, tuple(gens))


def specialize(ideal: MonomialIdeal, substitution: Substitution | None = None) -> MonomialIdeal:
    """Substitute y-variables by x-variables and minimize the result."""
    n, m = ideal.context.split_xy()
    if substitution is None:
        substitution = Substitution.identity(m)
    if len(substitution.assignment) != m:
        raise MalformedInput(f"substitution must assign all {m} y-variables")
    k = max(m, n, substitution.target_size)
    gens = tuple(Monomial(substitution.apply(g.exps, n, k)) for g in ideal.generators)
    return minimize(MonomialIdeal(VariableContext.x(k), gens))


def generator_count_predicted(shape: Shape) -> int:
    if not shape.lifting_hypothesis():
        raise MuTooSmall(f"mu={shape.mu} has mu_i < i-1; generator count not guaranteed")
    return shape.size


def enumerate_shapes(max_n: int, max_m: int, lifting: bool = False) -> Iterator[Shape]:
    """Every valid shape with n <= max_n and m <= max_m, optionally only those with mu_i >= i-1."""
    for m in range(1, max_m + 1):
        for n in range(1, min(max_n, m) + 1):
            for rest in combinations_with_replacement(range(m, 0, -1), n - 1):
                lam = (m,) + rest
                for mu in combinations_with_replacement(range(lam[-1]), n):
                    if lifting and any(u < i for i, u in enumerate(mu)):
                        continue
                    yield Shape(lam, mu)
