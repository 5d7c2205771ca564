"""SplitMix64, the 64-bit generator behind every sampled check and probe.

State advances by the golden-gamma constant; each output is the state passed
through the two xor-shift-multiply rounds from Steele, Lea & Flood (2014).
Streams for independent tasks are keyed with ``SplitMix64.for_task``.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed=0):
        self.state = seed & MASK64

    @classmethod
    def for_task(cls, seed, index):
        # distinct, reproducible stream per (seed, index)
        return cls(mix64((seed & MASK64) ^ mix64(index + GOLDEN_GAMMA)))

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def below(self, n):
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n <= 1 << 64:
            limit = (1 << 64) - ((1 << 64) % n)
            while True:
                r = self.next_u64()
                if r < limit:
                    return r % n
        bits = (n - 1).bit_length()
        words = -(-bits // 64)
        while True:
            r = 0
            for _ in range(words):
                r = (r << 64) | self.next_u64()
            r >>= 64 * words - bits
            if r < n:
                return r

    def integer(self, lo, hi):
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def u128(self):
        return (self.next_u64() << 64) | self.next_u64()

    def uniform(self):
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53
