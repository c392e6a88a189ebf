"""Prime field arithmetic.

Elements are plain Python ints in ``range(p)``; the :class:`PrimeField`
object only carries the modulus and a few helpers.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PRIME = 32003

# numpy elimination keeps products of two residues in int64
MAX_PRIME = 2**31 - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit integers."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p > MAX_PRIME:
            raise ValueError(f"prime {self.p} exceeds supported maximum {MAX_PRIME}")

    def __call__(self, value: int) -> int:
        return value % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def frac(self, num: int, den: int) -> int:
        """Residue of the rational ``num/den``."""
        return num % self.p * self.inv(den) % self.p
