"""Self-contained deterministic randomness for the experiments.

Published seeds must reproduce byte-identical outputs forever, so the
generator is pinned here instead of relying on a library whose stream may
change between releases.  The algorithm is SplitMix64 (Steele, Lea and
Vigna's 64-bit counter generator with a xorshift-multiply finalizer):

    state_t   = seed + (t + 1) * 0x9E3779B97F4A7C15   (mod 2^64)
    output_t  = mix(state_t)

Per-trial sub-seeds reuse the same stream: sub_seed(master, t) is simply the
t-th output of SplitMix64(master), which makes trial results independent of
evaluation order and safe to compute in parallel.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream over 64-bit unsigned outputs."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n


def sub_seed(master_seed: int, trial: int) -> int:
    """Deterministic per-trial seed: the trial-th output of SplitMix64(master)."""
    state = (int(master_seed) + (int(trial) + 1) * _GAMMA) & _MASK
    return _mix(state)


def random_subset(p: int, k: int, seed: int) -> tuple[int, ...]:
    """Uniform random k-subset of {0, ..., p-1} in draw order.

    Partial Fisher-Yates shuffle driven by SplitMix64(seed); the first k
    slots of the shuffled range are returned, so the subset and its order
    are a pure function of (p, k, seed).
    """
    if not 0 < k <= p:
        raise ValueError(f"need 0 < k <= p, got k={k}, p={p}")
    rng = SplitMix64(seed)
    arr = list(range(p))
    for i in range(k):
        j = i + rng.below(p - i)
        arr[i], arr[j] = arr[j], arr[i]
    return tuple(arr[:k])
