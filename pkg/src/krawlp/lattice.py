"""The lattice of subspaces of F_q^n.

Every subspace is stored once, by its reduced row-echelon basis, and is
identified by its position in the canonical order: by dimension, then by the
flattened basis compared lexicographically.  Containment is kept as int
bitsets so upward and downward sums cost one pass over the set bits.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ResourceLimitError
from .field import FieldSpec, Vector, hamming_weight

DEFAULT_MAX_SUBSPACES = 10**5
DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def mobius_closed_form(codim: int, q: int) -> int:
    """mu(S, T) for S <= T with dim(T/S) = codim."""
    return (-1) ** codim * q ** (codim * (codim - 1) // 2)


def rref(spec: FieldSpec, vectors: Iterable[Sequence[int]], n: int) -> tuple[Vector, ...]:
    """Reduced row-echelon basis (leading ones, zero rows dropped) of the span."""
    rows = [list(v) for v in vectors]
    for v in rows:
        if len(v) != n:
            raise ValueError(f"expected vectors of length {n}, got {len(v)}")
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = spec.inv(rows[r][col])
        rows[r] = [spec.mul(inv, a) for a in rows[r]]
        for i in range(len(rows)):
            c = rows[i][col]
            if i != r and c:
                rows[i] = [spec.sub(a, spec.mul(c, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r])


def format_vector(v: Sequence[int]) -> str:
    return "".join(DIGITS[a] for a in v)


@dataclass(frozen=True)
class Subspace:
    dim: int
    basis: tuple[Vector, ...]
    pivots: tuple[int, ...]

    def rows(self) -> list[str]:
        return [format_vector(r) for r in self.basis]


def _rref_bases(q: int, n: int, k: int) -> Iterable[tuple[Vector, ...]]:
    for pivots in itertools.combinations(range(n), k):
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, n) if j not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), a in zip(free, values):
                rows[i][j] = a
            yield tuple(tuple(r) for r in rows)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Lattice:
    """All subspaces of F_q^n with containment, duals and minimum weights.

    Build it with :func:`enumerate_subspaces`.  Subspaces are referred to by
    int ids (positions in ``spaces``).
    """

    def __init__(self, spec: FieldSpec, n: int, spaces: Sequence[Subspace]):
        self.spec = spec
        self.n = n
        self.spaces = tuple(spaces)
        self._index = {s.basis: i for i, s in enumerate(self.spaces)}
        self._all_vectors = list(spec.vectors(n))

        self._elements: list[frozenset[int]] = []
        self._min_weight: list[float] = []
        for s in self.spaces:
            codes = set()
            weight = math.inf
            for coeffs in itertools.product(range(spec.q), repeat=s.dim):
                v = (0,) * n
                for c, row in zip(coeffs, s.basis):
                    if c:
                        v = spec.vec_add(v, spec.vec_scale(c, row))
                codes.add(spec.vector_index(v))
                if any(v):
                    weight = min(weight, hamming_weight(v))
            self._elements.append(frozenset(codes))
            self._min_weight.append(weight)

        self._covers = [self._find_covers(i) for i in range(len(self.spaces))]
        lower: list[list[int]] = [[] for _ in self.spaces]
        for i, cs in enumerate(self._covers):
            for j in cs:
                lower[j].append(i)
        self._lower_covers = [tuple(sorted(x)) for x in lower]

        size = len(self.spaces)
        up = [0] * size
        for i in reversed(range(size)):
            m = 1 << i
            for j in self._covers[i]:
                m |= up[j]
            up[i] = m
        down = [0] * size
        for j in range(size):
            m = 1 << j
            for i in self._lower_covers[j]:
                m |= down[i]
            down[j] = m
        self._up, self._down = up, down
        self._up_ids = [tuple(_bits(m)) for m in up]
        self._down_ids = [tuple(_bits(m)) for m in down]
        self._dual = [self._compute_dual(i) for i in range(size)]

    # construction helpers

    def _find_covers(self, i: int) -> tuple[int, ...]:
        s = self.spaces[i]
        if s.dim == self.n:
            return ()
        seen = set(self._elements[i])
        found = []
        for code, v in enumerate(self._all_vectors):
            if code in seen:
                continue
            j = self._index[rref(self.spec, s.basis + (v,), self.n)]
            found.append(j)
            seen |= self._elements[j]
        return tuple(sorted(found))

    def _compute_dual(self, i: int) -> int:
        s, spec, n = self.spaces[i], self.spec, self.n
        rows = []
        for f in range(n):
            if f in s.pivots:
                continue
            v = [0] * n
            v[f] = 1
            for r, p in enumerate(s.pivots):
                v[p] = spec.neg(s.basis[r][f])
            rows.append(v)
        return self._index[rref(spec, rows, n)]

    # queries

    def __len__(self) -> int:
        return len(self.spaces)

    @property
    def zero(self) -> int:
        return 0

    @property
    def full(self) -> int:
        return len(self.spaces) - 1

    def dim(self, i: int) -> int:
        return self.spaces[i].dim

    def order(self, i: int) -> int:
        """Number of vectors in subspace ``i``."""
        return self.spec.q ** self.spaces[i].dim

    def ids_of_dim(self, k: int) -> list[int]:
        return [i for i, s in enumerate(self.spaces) if s.dim == k]

    def leq(self, i: int, j: int) -> bool:
        return bool((self._up[i] >> j) & 1)

    def up(self, i: int) -> tuple[int, ...]:
        """Ids of all T >= S, in canonical order."""
        return self._up_ids[i]

    def down(self, j: int) -> tuple[int, ...]:
        """Ids of all S <= T, in canonical order."""
        return self._down_ids[j]

    def interval(self, lo: int, hi: int) -> list[int]:
        return _bits(self._up[lo] & self._down[hi])

    def covers(self, i: int) -> tuple[int, ...]:
        return self._covers[i]

    def lower_covers(self, j: int) -> tuple[int, ...]:
        return self._lower_covers[j]

    def contains_vector(self, i: int, v: Vector) -> bool:
        return self.spec.vector_index(v) in self._elements[i]

    def vectors(self, i: int) -> list[Vector]:
        return [self._all_vectors[c] for c in sorted(self._elements[i])]

    def min_weight(self, i: int) -> float:
        """Least weight of a nonzero vector of ``i``; ``math.inf`` for the zero space."""
        return self._min_weight[i]

    def dual(self, i: int) -> int:
        return self._dual[i]

    def canonicalize(self, vectors: Iterable[Sequence[int]]) -> int:
        return self._index[rref(self.spec, vectors, self.n)]

    def id_of_basis(self, basis: Sequence[Sequence[int]]) -> int:
        return self.canonicalize(basis)

    def mobius(self, i: int, j: int) -> int:
        if not self.leq(i, j):
            return 0
        return mobius_closed_form(self.dim(j) - self.dim(i), self.spec.q)

    def _check_keys(self, values: Mapping[int, object]) -> None:
        for k in values:
            if not 0 <= k < len(self.spaces):
                raise KeyError(f"unknown subspace id {k}")

    def zeta_transform(self, point_mass: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """out[S] = sum over T >= S of point_mass[T] (missing ids count as zero)."""
        self._check_keys(point_mass)
        return {
            s: sum((Fraction(point_mass[t]) for t in self._up_ids[s] if t in point_mass), Fraction(0))
            for s in range(len(self.spaces))
        }

    def mobius_transform(self, cumulative: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Inverse of :meth:`zeta_transform`."""
        self._check_keys(cumulative)
        q = self.spec.q
        out = {}
        for s in range(len(self.spaces)):
            ds = self.dim(s)
            acc = Fraction(0)
            for t in self._up_ids[s]:
                if t in cumulative:
                    acc += mobius_closed_form(self.dim(t) - ds, q) * Fraction(cumulative[t])
            out[s] = acc
        return out

    def dump_lines(self) -> list[str]:
        """One ``id dim rows`` line per subspace; ``-`` stands for the empty basis."""
        return [f"{i} {s.dim} {','.join(s.rows()) or '-'}" for i, s in enumerate(self.spaces)]


def max_subspaces_from_env(default: int = DEFAULT_MAX_SUBSPACES) -> int:
    return int(os.environ.get("KRAWLP_MAX_SUBSPACES", default))


def enumerate_subspaces(spec: FieldSpec, n: int, max_subspaces: int | None = None) -> Lattice:
    """Enumerate every subspace of F_q^n.

    Raises :class:`ResourceLimitError` before doing any work when the total
    count exceeds ``max_subspaces`` (default 10^5, or ``KRAWLP_MAX_SUBSPACES``).
    """
    if n < 0:
        raise ValueError("blocklength must be nonnegative")
    cap = max_subspaces_from_env() if max_subspaces is None else max_subspaces
    total = subspace_count(n, spec.q)
    if total > cap:
        raise ResourceLimitError(f"F_{spec.q}^{n} has {total} subspaces, above the cap of {cap}")
    spaces = []
    for k in range(n + 1):
        bases = sorted(_rref_bases(spec.q, n, k), key=lambda b: tuple(itertools.chain.from_iterable(b)))
        for b in bases:
            pivots = tuple(next(j for j, a in enumerate(row) if a) for row in b)
            spaces.append(Subspace(k, b, pivots))
    return Lattice(spec, n, spaces)
