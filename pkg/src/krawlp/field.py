"""Arithmetic in small finite fields F_q and vectors over them.

Field elements are plain ints in ``range(q)``.  For q = p^e with e > 1 the
int encodes the coefficient list of a polynomial over F_p, constant term in
the least significant base-p digit, so in F_4 = F_2[x]/(x^2+x+1) the element
``x`` is 2 and ``x + 1`` is 3.

Vectors are tuples of such ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import UnsupportedFieldError

Vector = tuple[int, ...]

MAX_FIELD_SIZE = 36  # one digit per coordinate in the text formats


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"field size must be >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"field size must be a prime power, got {q}")
    return p, e


def _poly_rem(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of ``num`` modulo the monic polynomial ``den`` over F_p."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    out = [c % p for c in num[:dd]]
    return out + [0] * (dd - len(out))


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    deg = len(poly) - 1
    for k in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not any(_poly_rem(list(poly), list(low) + [1], p)):
                return False
    return True


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree ``e`` over F_p.

    "Smallest" compares coefficient lists read from the constant term up as
    base-p numbers, giving x^2+x+1 for F_4, x^3+x+1 for F_8 and x^2+1 for F_9.
    """
    for code in range(p**e):
        low = [(code // p**i) % p for i in range(e)]
        poly = tuple(low) + (1,)
        if low[0] and _is_irreducible(poly, p):
            return poly
    raise AssertionError("an irreducible polynomial always exists")


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q, with q = p^e.

    ``modulus`` lists the coefficients of the defining polynomial from the
    constant term up; it is ``None`` for prime fields.
    """

    q: int
    p: int
    e: int
    modulus: tuple[int, ...] | None = None
    _exp: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)
    _log: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)
    _add: tuple[tuple[int, ...], ...] = field(default=(), init=False, repr=False, compare=False)

    @classmethod
    def of(cls, q: int, modulus: Sequence[int] | None = None) -> FieldSpec:
        p, e = _factor_prime_power(q)
        if e > 1 and modulus is None:
            modulus = default_modulus(p, e)
        return cls(q, p, e, tuple(modulus) if modulus is not None else None)

    def __post_init__(self) -> None:
        if self.q > MAX_FIELD_SIZE:
            raise UnsupportedFieldError(f"q={self.q} exceeds the supported maximum {MAX_FIELD_SIZE}")
        if self.p**self.e != self.q or _factor_prime_power(self.q) != (self.p, self.e):
            raise ValueError(f"inconsistent field parameters q={self.q}, p={self.p}, e={self.e}")
        if self.e == 1:
            if self.modulus is not None:
                raise ValueError("prime fields take no modulus")
            return
        mod = self.modulus
        if mod is None or len(mod) != self.e + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.e}")
        if any(not 0 <= c < self.p for c in mod) or not _is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is not irreducible over F_{self.p}")
        self._build_tables()

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def _undigits(self, digits: Sequence[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(digits))

    def _poly_mul(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        return self._undigits(_poly_rem(prod, self.modulus, self.p))

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        add = tuple(
            tuple(self._undigits([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))]) for b in range(q))
            for a in range(q)
        )
        for g in range(2, q):
            powers = [1]
            while len(powers) < q - 1:
                powers.append(self._poly_mul(powers[-1], g))
            if len(set(powers)) == q - 1:
                break
        log = [0] * q
        for i, v in enumerate(powers):
            log[v] = i
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_exp", tuple(powers))
        object.__setattr__(self, "_log", tuple(log))

    # element arithmetic

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.q
        return self._add[a][b]

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.q
        return self._undigits([-c % self.p for c in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.e == 1:
            return pow(a, -1, self.q)
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # vectors

    def vec_add(self, u: Vector, v: Vector) -> Vector:
        return tuple(self.add(a, b) for a, b in zip(u, v))

    def vec_scale(self, c: int, v: Vector) -> Vector:
        return tuple(self.mul(c, a) for a in v)

    def dot(self, u: Vector, v: Vector) -> int:
        acc = 0
        for a, b in zip(u, v):
            acc = self.add(acc, self.mul(a, b))
        return acc

    def vectors(self, n: int) -> Iterator[Vector]:
        """All of F_q^n, first coordinate most significant."""
        return itertools.product(range(self.q), repeat=n)

    def vector_index(self, v: Vector) -> int:
        idx = 0
        for a in v:
            idx = idx * self.q + a
        return idx


def hamming_weight(v: Sequence[int]) -> int:
    return sum(1 for a in v if a)


def char_value(spec: FieldSpec, alpha: Sequence[Vector], x: Sequence[Vector]) -> int:
    """The sign (-1)^(sum_i alpha_i . x_i) of the product character on (F_2^n)^l."""
    if spec.q != 2:
        raise UnsupportedFieldError("characters are implemented as signs for q = 2 only")
    if len(alpha) != len(x):
        raise ValueError("alpha and x must have the same number of components")
    parity = 0
    for a, y in zip(alpha, x):
        if len(a) != len(y):
            raise ValueError("vector lengths differ")
        parity ^= sum(s & t for s, t in zip(a, y)) & 1
    return -1 if parity else 1
