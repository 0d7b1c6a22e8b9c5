"""Portable seeded random source for simulation runs.

Streams come from numpy's PCG64 bit generator (PCG XSL-RR 128/64), whose raw
64-bit output sequence is fixed for a given seed on every platform and numpy
release. Seeds are expanded with ``SeedSequence(seed).spawn(n)`` so the
topology stream and the protocol stream of a run never interfere.

Doubles are built from the top 53 bits of one raw output:
``(raw >> 11) * 2**-53``, uniform on [0, 1).
"""

import math

import numpy as np

_BUFFER = 1024
_DOUBLE_SCALE = 1.0 / 9007199254740992.0  # 2**-53


class PortableRandom:
    def __init__(self, seed_sequence: np.random.SeedSequence):
        self._bits = np.random.PCG64(seed_sequence)
        self._buffer: list[int] = []
        self._cursor = 0

    @classmethod
    def streams(cls, seed: int, count: int = 2) -> list["PortableRandom"]:
        return [cls(child) for child in np.random.SeedSequence(seed).spawn(count)]

    def raw(self) -> int:
        if self._cursor >= len(self._buffer):
            self._buffer = self._bits.random_raw(_BUFFER).tolist()
            self._cursor = 0
        value = self._buffer[self._cursor]
        self._cursor += 1
        return value

    def random(self) -> float:
        return (self.raw() >> 11) * _DOUBLE_SCALE

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def bernoulli(self, p: float) -> bool:
        if p >= 1.0:
            return True
        if p <= 0.0:
            return False
        return self.random() < p

    def poisson(self, lam: float) -> int:
        # Knuth's multiplication method; fine for the per-round rates used here
        if lam <= 0.0:
            return 0
        limit = math.exp(-lam)
        count = 0
        product = self.random()
        while product > limit:
            count += 1
            product *= self.random()
        return count
