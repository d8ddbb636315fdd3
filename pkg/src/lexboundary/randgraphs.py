"""Seeded G(n, p) sampling and stringency statistics.

The generator is SplitMix64 used in counter mode, so any draw can be
computed directly from (seed, index):

    z  = (seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2^64
    z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z  = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    out = z ^ (z >> 31)

Draw i of a sample decides the i-th vertex pair in lexicographic order
(0,1), (0,2), ..., (n-2,n-1). With u = out >> 11 (53 bits) and p = a/b in
lowest terms, the pair is an edge iff u * b < a * 2^53.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Union

from .graphs import Graph
from .structure import is_asymmetric, is_prime

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
DEFAULT_ATTEMPTS = 10_000


class SamplingError(RuntimeError):
    pass


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def splitmix_draw(seed: int, i: int) -> int:
    return _mix((seed + (i + 1) * GOLDEN) & MASK64)


def derive_seed(seed: int, *path: int) -> int:
    """Child seed reached by hashing each path component into the parent."""
    s = seed & MASK64
    for part in path:
        s = splitmix_draw(s ^ (part & MASK64), 0)
    return s


def as_probability(p: Union[Fraction, float, int, str]) -> Fraction:
    if isinstance(p, float):
        p = Fraction(repr(p))
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError(f"edge probability {p} is not in (0, 1)")
    return p


def sample_gnp(n: int, p, seed: int) -> Graph:
    if n < 1:
        raise ValueError("n must be at least 1")
    p = as_probability(p)
    a, b = p.numerator, p.denominator
    threshold = a << 53
    adj = [0] * n
    i = 0
    for u in range(n):
        for v in range(u + 1, n):
            if (splitmix_draw(seed, i) >> 11) * b < threshold:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            i += 1
    return Graph._unchecked(n, tuple(adj))


def trial_seed(seed: int, trial: int) -> int:
    return (seed ^ trial) & MASK64


def prime_failure_bound(n: int, p) -> Fraction:
    """Union bound on the probability that G(n, p) has a homogeneous set of size 2..n-1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    p = as_probability(p)
    q = 1 - p
    return sum(
        (comb(n, k) * (q ** k + p ** k) ** (n - k) for k in range(2, n)), Fraction(0)
    )


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    prime: bool
    asymmetric: bool

    @property
    def stringent(self) -> bool:
        return self.prime and self.asymmetric


def stringent_trials(n: int, p, trials: int, seed: int) -> Iterator[TrialRecord]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    for t in range(trials):
        s = trial_seed(seed, t)
        g = sample_gnp(n, p, s)
        prime = is_prime(g)
        yield TrialRecord(t, s, prime, is_asymmetric(g))


def estimate_stringent_rate(n: int, p, trials: int, seed: int) -> tuple[Fraction, list[int]]:
    """Fraction of stringent samples and the seeds of the failing ones."""
    records = list(stringent_trials(n, p, trials, seed))
    failures = [r.seed for r in records if not r.stringent]
    return Fraction(trials - len(failures), trials), failures


def find_stringent(n: int, p, seed: int, attempts: int = DEFAULT_ATTEMPTS) -> Graph:
    """First stringent graph in the stream of samples seeded ``seed ^ i``."""
    if n < 6:
        raise ValueError("no stringent graphs exist below 6 vertices")
    not_prime = not_asym = 0
    for i in range(attempts):
        g = sample_gnp(n, p, trial_seed(seed, i))
        if not is_prime(g):
            not_prime += 1
        elif not is_asymmetric(g):
            not_asym += 1
        else:
            return g
    raise SamplingError(
        f"no stringent G({n}, {as_probability(p)}) sample in {attempts} attempts "
        f"({not_prime} not prime, {not_asym} prime but symmetric)"
    )
