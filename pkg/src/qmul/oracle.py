"""Classical reference arithmetic used as ground truth by every circuit test.

Everything here is plain big-integer arithmetic, deliberately independent of
the circuit constructions.  The Montgomery product is computed along two
separate routes (direct modular arithmetic and the word-by-word windowed
reduction loop) and both must agree.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache


class OracleError(ValueError):
    """Raised on out-of-range operands or invalid parameters."""


# deterministic Miller-Rabin witness sets (Sinclair/Jaeschke bounds)
_MR_WITNESSES = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (9080191, (31, 73)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (4759123141, (2, 7, 61)),
    (1122004669633, (2, 13, 23, 1662803)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)


def is_prime(n: int) -> bool:
    """Miller-Rabin test, deterministic below ~3.3e24 and with fixed extra
    witnesses above (adequate for the moduli handled here)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for bound, witnesses in _MR_WITNESSES:
        if n < bound:
            basis = witnesses
            break
    else:
        basis = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)
    for a in basis:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes p with lo < p < hi (exclusive bounds)."""
    return [p for p in range(lo + 1, hi) if is_prime(p)]


def school_product(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise OracleError("operands must be non-negative")
    return x * y


def mod2n_product(x: int, y: int, n: int) -> int:
    if n < 1:
        raise OracleError("width must be positive")
    if not (0 <= x < 2 ** n and 0 <= y < 2 ** n):
        raise OracleError("operands out of range")
    return (x * y) % (2 ** n)


@dataclass(frozen=True)
class MontgomeryContext:
    """Fixed-modulus context: p odd, R = 2^n with 2^(n-1) < p < 2^n.

    ``strict`` additionally requires p prime; otherwise a composite odd
    modulus is accepted with a warning (the reduction only needs p odd).
    """

    p: int
    n: int

    def __post_init__(self) -> None:
        if self.p % 2 == 0:
            raise OracleError("modulus must be odd")
        if self.n < 2:
            raise OracleError("width must be at least 2")
        if not 2 ** (self.n - 1) < self.p < 2 ** self.n:
            raise OracleError(
                f"modulus {self.p} does not satisfy 2^{self.n - 1} < p < 2^{self.n}"
            )

    @classmethod
    def create(cls, p: int, n: int, strict: bool = False) -> "MontgomeryContext":
        ctx = cls(p, n)
        if not is_prime(p):
            if strict:
                raise OracleError(f"{p} is not prime")
            warnings.warn(f"modulus {p} is odd but not prime", stacklevel=2)
        return ctx

    @property
    def R(self) -> int:
        return 2 ** self.n

    @property
    def R_inv(self) -> int:
        return pow(self.R, -1, self.p)

    @property
    def p_inv(self) -> int:
        # p^-1 mod R; per-window inverses are reductions of this
        return pow(self.p, -1, self.R)

    def window_sizes(self, w: int) -> list[int]:
        """Window widths consumed per reduction step; the final window is
        truncated when w does not divide n."""
        if not 1 <= w <= self.n:
            raise OracleError("window size out of range")
        sizes = [w] * (self.n // w)
        if self.n % w:
            sizes.append(self.n % w)
        return sizes


def lookup_entries(ctx: MontgomeryContext, w: int) -> list[int]:
    """Reduction table: entry[t] = ((-t) * p^-1 mod 2^w) * p.

    Adding entry[t] to an accumulator whose low w bits read t clears those
    bits, enabling the exact divide-by-2^w relabelling.
    """
    if not 1 <= w <= ctx.n:
        raise OracleError("window size out of range")
    mask = 2 ** w
    inv = ctx.p_inv % mask
    return [((-t * inv) % mask) * ctx.p for t in range(mask)]


def montgomery_step(ctx: MontgomeryContext, u: int, w: int) -> int:
    """One windowed reduction step: (u + m*p) / 2^w with m chosen so the low
    w bits of the sum vanish."""
    mask = 2 ** w
    m = (-u * ctx.p_inv) % mask
    total = u + m * ctx.p
    assert total % mask == 0
    return total // mask


def montgomery_product(ctx: MontgomeryContext, x: int, y: int) -> int:
    """x * y * R^-1 mod p, computed two independent ways that must agree."""
    if not 0 <= x < ctx.p or not 0 <= y < ctx.p:
        raise OracleError("operands must be reduced mod p")
    direct = (x * y * ctx.R_inv) % ctx.p

    # windowed route mirroring the circuit's step structure; every valid w
    # must give the same residue
    for w in sorted({1, min(4, ctx.n), ctx.n}):
        z = 0
        consumed = 0
        for size in ctx.window_sizes(w):
            window = (x >> consumed) & (2 ** size - 1)
            z = montgomery_step(ctx, z + window * y, size)
            consumed += size
        assert z < 2 * ctx.p
        if z >= ctx.p:
            z -= ctx.p
        if z != direct:
            raise AssertionError(
                f"montgomery routes disagree: direct={direct} windowed={z} "
                f"(p={ctx.p}, n={ctx.n}, w={w}, x={x}, y={y})"
            )
    return direct


def to_montgomery(ctx: MontgomeryContext, x: int) -> int:
    if not 0 <= x < ctx.p:
        raise OracleError("operand must be reduced mod p")
    return (x * ctx.R) % ctx.p


def from_montgomery(ctx: MontgomeryContext, x: int) -> int:
    if not 0 <= x < ctx.p:
        raise OracleError("operand must be reduced mod p")
    return (x * ctx.R_inv) % ctx.p


@lru_cache(maxsize=None)
def _cached_ctx(p: int, n: int) -> MontgomeryContext:
    return MontgomeryContext(p, n)


def context(p: int, n: int) -> MontgomeryContext:
    return _cached_ctx(p, n)
