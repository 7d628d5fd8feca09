"""Classical arithmetic support.

gcd, modular exponentiation by repeated squaring, brute-force
multiplicative order (the test oracle for both factoring routes), and
continued-fraction convergents for recovering a period from a measured
ratio.  Python integers are arbitrary precision, so nothing here can
overflow; everything stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two nonnegative integers, not both zero."""
    if a < 0 or b < 0:
        raise ValueError("gcd arguments must be nonnegative")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


def modpow(y: int, e: int, modulus: int) -> int:
    """y**e mod modulus by square-and-multiply, O(log e) multiplications."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    result = 1
    base = y % modulus
    while e:
        if e & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        e >>= 1
    return result


def order_bruteforce(y: int, modulus: int) -> int:
    """Least r >= 1 with y**r = 1 mod modulus; requires gcd(y, modulus) = 1."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    y %= modulus
    if math.gcd(y, modulus) != 1:
        raise ValueError(f"{y} is not coprime to {modulus}")
    acc = y
    r = 1
    while acc != 1:
        acc = (acc * y) % modulus
        r += 1
    return r


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def order_from_multiple(y: int, modulus: int, multiple: int) -> int:
    """Exact multiplicative order of y given any verified multiple of it.

    Strips each prime factor of ``multiple`` while y**(reduced) stays 1;
    what remains is the order.  Guards order finders against returning a
    proper multiple when a candidate exponent happens to verify.
    """
    if multiple < 1 or modpow(y, multiple, modulus) != 1:
        raise ValueError("multiple does not annihilate y")
    r = multiple
    for p in _prime_factors(multiple):
        while r % p == 0 and modpow(y, r // p, modulus) == 1:
            r //= p
    return r


@dataclass(frozen=True)
class Convergent:
    """A reduced fraction numerator/denominator from a continued-fraction expansion."""

    numerator: int
    denominator: int


def convergents(c: int, q: int) -> list[Convergent]:
    """All continued-fraction convergents of c/q, in order, ending at c/q reduced."""
    if q < 1 or c < 0:
        raise ValueError("need q >= 1 and c >= 0")
    # Euclid on (c, q) yields the partial quotients of c/q.
    out = []
    h_prev, h = 0, 1  # numerators h_{-2}, h_{-1}
    k_prev, k = 1, 0  # denominators
    num, den = c, q
    while den:
        a, rem = divmod(num, den)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        out.append(Convergent(h, k))
        num, den = den, rem
    return out


def best_rational(c: int, q: int, bound: int) -> Convergent:
    """The convergent of c/q with the largest denominator <= bound.

    When some fraction k/r with r <= bound lies within 1/(2*bound**2) of
    c/q it is unique, it is a convergent, and it is what gets returned.
    Convergent denominators increase, so "largest <= bound" also breaks
    ties toward the better approximation.
    """
    if not 0 <= c < q:
        raise ValueError("need 0 <= c < q")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    best = Convergent(0, 1)
    for conv in convergents(c, q):
        if conv.denominator > bound:
            break
        best = conv
    return best
