"""SplitMix64 generator.

State is a single 64-bit word. Each draw adds the golden-ratio increment
0x9E3779B97F4A7C15 and mixes with the two multiply/xorshift rounds

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

all modulo 2^64. Bounded integers use rejection sampling on the top bits, so
sequences are reproducible bit-for-bit from the seed alone.
"""
from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        bits = (n - 1).bit_length()
        while True:
            if bits <= 64:
                x = self.next_u64() >> (64 - bits)
            else:
                x = 0
                for _ in range((bits + 63) // 64):
                    x = (x << 64) | self.next_u64()
                x >>= (64 * ((bits + 63) // 64) - bits)
            if x < n:
                return x

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def fraction(self, max_den: int) -> Fraction:
        """Rational p/q in [0, 1) with q uniform in [1, max_den]."""
        q = self.integer(1, max_den)
        return Fraction(self.below(q), q)

    def subset(self, items, p: float = 0.5):
        return [x for x in items if self.random() < p]

    def sample(self, items, k: int):
        pool = list(items)
        out = []
        for _ in range(min(k, len(pool))):
            j = self.below(len(pool))
            out.append(pool[j])
            pool[j] = pool[-1]
            pool.pop()
        return out
