"""Tiny finite-field backend.

Supports every prime q (arithmetic mod q) and the prime powers 4, 8, 9
through table-driven polynomial arithmetic.  Larger prime powers are
rejected; the geometric constructions in this package only ever need
small fields.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import UnsupportedField

# (p, k, irreducible poly coefficients c_0..c_{k-1} of x^k + ... + c_1 x + c_0)
_PRIME_POWERS = {
    4: (2, 2, (1, 1)),   # x^2 + x + 1
    8: (2, 3, (1, 1, 0)),  # x^3 + x + 1
    9: (3, 2, (1, 0)),   # x^2 + 1
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class GF:
    """Finite field with elements encoded as integers 0..q-1.

    For prime q the encoding is the residue itself; for q in {4, 8, 9}
    an element is the base-p digit packing of its polynomial coefficients,
    so 0 and 1 are always the additive and multiplicative identities.
    """

    def __init__(self, q: int):
        if q in _PRIME_POWERS:
            p, k, poly = _PRIME_POWERS[q]
        elif _is_prime(q):
            p, k, poly = q, 1, None
        else:
            raise UnsupportedField(f"q={q} is not a supported field order")
        self.q = q
        self.p = p
        self.k = k
        self._add = [[self._poly_add(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._poly_mul(a, b, poly) for b in range(q)] for a in range(q)]
        self._neg = [next(b for b in range(q) if self._add[a][b] == 0) for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _pack(self, digits) -> int:
        val = 0
        for c in reversed(digits):
            val = val * self.p + c
        return val

    def _poly_add(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        return self._pack([(x + y) % self.p for x, y in zip(da, db)])

    def _poly_mul(self, a: int, b: int, poly) -> int:
        if self.k == 1:
            return (a * b) % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        # reduce modulo x^k + poly
        for i in range(len(prod) - 1, self.k - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, pc in enumerate(poly):
                    prod[i - self.k + j] = (prod[i - self.k + j] - c * pc) % self.p
        return self._pack(prod[: self.k])

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def elements(self):
        return range(self.q)

    # vector helpers over tuples
    def vec_add(self, u, v):
        return tuple(self._add[a][b] for a, b in zip(u, v))

    def vec_scale(self, c, u):
        return tuple(self._mul[c][a] for a in u)

    def mat_vec(self, m, u):
        out = []
        for row in m:
            acc = 0
            for a, b in zip(row, u):
                acc = self._add[acc][self._mul[a][b]]
            out.append(acc)
        return tuple(out)


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
