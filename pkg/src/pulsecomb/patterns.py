"""Bit patterns on an N-bit circular shift register and their equivalences.

A pattern is a cyclic sequence of N bits; loaded into a circulating shift
register it repeats forever, so everything here is invariant under cyclic
indexing.  Patterns are grouped into classes that generate identical tone
spectra: rotations and mirror images always coincide, bitwise complements
(duals) coincide everywhere except at multiples of the clock frequency, and
occasional "homometric" pairs coincide despite not being related by any of
those symmetries.  The authoritative arbiter of class membership is the
magnitude spectrum itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

# Enumeration is exponential in n_bits; beyond this it is not worth the wait.
MAX_ENUM_BITS = 24

# Two tone powers closer than this (relative to the maximum) are the same tone.
SPECTRAL_REL_TOL = 1e-9


@dataclass(frozen=True, order=True)
class Pattern:
    """Cyclic sequence of bits; bit k sits in register cell k."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("pattern needs at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("pattern bits must be 0 or 1")

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        """Build a pattern from a '0'/'1' string; spaces are ignored.

        The first character is cell k=0.
        """
        cleaned = text.replace(" ", "")
        if not cleaned or set(cleaned) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in cleaned))

    @property
    def n_bits(self) -> int:
        return len(self.bits)

    @property
    def set_bits(self) -> int:
        return sum(self.bits)

    @property
    def is_silent(self) -> bool:
        """True for the all-zero pattern, which emits nothing."""
        return self.set_bits == 0

    def bit(self, k: int) -> int:
        return self.bits[k % len(self.bits)]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __iter__(self):
        return iter(self.bits)


def rotate(p: Pattern, shift: int) -> Pattern:
    """Cyclic left shift: cell k of the result holds bit (k + shift) mod N."""
    n = p.n_bits
    shift %= n
    return Pattern(p.bits[shift:] + p.bits[:shift])


def mirror(p: Pattern) -> Pattern:
    """Time reversal of the circulating train."""
    return Pattern(p.bits[::-1])


def dual(p: Pattern) -> Pattern:
    """Bitwise complement; set-bit counts of p and dual(p) sum to N."""
    return Pattern(tuple(1 - b for b in p.bits))


def distance_set(p: Pattern) -> tuple[int, ...]:
    """Cyclic gaps between consecutive set bits, from the lowest-set index.

    A gap of 1 means two adjacent set bits.  The gaps sum to N and there are
    exactly as many of them as set bits.
    """
    positions = [k for k, b in enumerate(p.bits) if b]
    if not positions:
        raise ValueError("no set bits")
    n = p.n_bits
    gaps = []
    for i, pos in enumerate(positions):
        nxt = positions[(i + 1) % len(positions)]
        gaps.append((nxt - pos) % n or n)
    return tuple(gaps)


def canonicalize(p: Pattern) -> Pattern:
    """Lexicographically smallest bit string over all rotations and reversals.

    Two patterns canonicalize identically iff they are related by some
    combination of cyclic shifts and mirroring (bracelet equivalence).
    """
    s = str(p)
    doubled = s + s
    rev = s[::-1]
    rev_doubled = rev + rev
    n = p.n_bits
    best = min(
        min(doubled[i : i + n] for i in range(n)),
        min(rev_doubled[i : i + n] for i in range(n)),
    )
    return Pattern.parse(best)


def power_signature(p: Pattern) -> np.ndarray:
    """Tone powers |c_k|^2 on the grid k = 0..N-1 (absolute, unnormalized)."""
    return np.abs(np.fft.fft(np.asarray(p.bits, dtype=float))) ** 2


def relative_signature(p: Pattern) -> np.ndarray:
    """Tone powers normalized to the strongest tone."""
    powers = power_signature(p)
    peak = powers.max()
    if peak == 0.0:
        return powers
    return powers / peak


def spectrally_equivalent(p1: Pattern, p2: Pattern, rel_tol: float = SPECTRAL_REL_TOL) -> bool:
    """Whether two same-length patterns generate indistinguishable tone sets.

    Compares relative tone powers (normalized to each pattern's maximum) at
    every grid point k = 0..N-1.  Duals of unequal weight differ at k = 0 and
    therefore compare unequal.
    """
    if p1.n_bits != p2.n_bits:
        raise ValueError("patterns must have equal length")
    return bool(np.all(np.abs(relative_signature(p1) - relative_signature(p2)) <= rel_tol))


def _signature_key(p: Pattern) -> tuple[float, ...]:
    # Rounded absolute powers; distinct values for n <= MAX_ENUM_BITS are far
    # apart compared to fft rounding noise, so this is a stable dict key.
    return tuple(round(float(x), 9) for x in power_signature(p))


@dataclass(frozen=True)
class EquivalenceClass:
    """One spectrally unique pattern class.

    ``representatives`` holds one canonical pattern per bracelet orbit merged
    into the class (more than one only for homometric coincidences);
    ``canonical`` is the smallest of them.
    """

    canonical: Pattern
    set_bits: int
    distance_set: tuple[int, ...]
    signature: tuple[float, ...]
    representatives: tuple[Pattern, ...]

    @property
    def members(self) -> frozenset[Pattern]:
        """Every pattern in the class (expanded on demand; up to 2N per orbit)."""
        out = set()
        for rep in self.representatives:
            for q in (rep, mirror(rep)):
                for r in range(q.n_bits):
                    out.add(rotate(q, r))
        return frozenset(out)

    def to_record(self) -> dict:
        """JSON-ready record used by the catalog output."""
        return {
            "canonical": str(self.canonical),
            "set_bits": self.set_bits,
            "distance_set": list(self.distance_set),
            "signature": list(self.signature),
        }


def _bracelet_transversal(n: int) -> set[Pattern]:
    """Canonical patterns of every bracelet class with 1 <= set bits <= n/2.

    Generated from distance compositions: a pattern with s set bits is, up to
    rotation, an arrangement of s positive gaps summing to n, so placing s-1
    cut points in 1..n-1 reaches every such class.
    """
    found: set[Pattern] = set()
    for s in range(1, n // 2 + 1):
        for cuts in combinations(range(1, n), s - 1):
            bits = [0] * n
            bits[0] = 1
            for c in cuts:
                bits[c] = 1
            found.add(canonicalize(Pattern(tuple(bits))))
    return found


def enumerate_unique(n: int) -> list[EquivalenceClass]:
    """All spectrally unique pattern classes of an n-bit register.

    Walks set-bit counts s = 1..n/2 through distance compositions, dedupes
    cyclic shifts and mirrors via bracelet canonicalization, attaches the dual
    of every class (duals keep the same off-DC tones but a different DC tone,
    so both halves count), adds the all-ones pattern, and finally merges any
    classes whose full power signatures coincide.  The last step is what makes
    the output agree with exhaustive grouping of all 2^n - 1 patterns by
    spectrum: a few arrangements share all pairwise gap statistics without
    being rotations or mirrors of each other (n=8 already has such a pair).

    Cost grows exponentially with n; capped at MAX_ENUM_BITS.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_ENUM_BITS:
        raise ValueError(f"enumeration capped at {MAX_ENUM_BITS} bits")

    transversal = _bracelet_transversal(n)
    candidates = set(transversal)
    candidates.update(canonicalize(dual(p)) for p in transversal)
    candidates.add(Pattern(tuple([1] * n)))

    by_signature: dict[tuple[float, ...], list[Pattern]] = {}
    for cand in candidates:
        by_signature.setdefault(_signature_key(cand), []).append(cand)

    classes = []
    for key, reps in by_signature.items():
        reps.sort()
        canonical = reps[0]
        classes.append(
            EquivalenceClass(
                canonical=canonical,
                set_bits=canonical.set_bits,
                distance_set=distance_set(canonical),
                signature=tuple(float(x) for x in relative_signature(canonical)),
                representatives=tuple(reps),
            )
        )
    classes.sort(key=lambda c: (c.set_bits, str(c.canonical)))
    return classes


@lru_cache(maxsize=None)
def _distinct_partition_count(n: int) -> int:
    # Number of subsets of {1..n} summing to n, i.e. partitions with distinct
    # parts.  n stays small so plain recursion is fine.
    def rec(remaining: int, min_part: int) -> int:
        if remaining == 0:
            return 1
        return sum(rec(remaining - part, part + 1) for part in range(min_part, remaining + 1))

    return rec(n, 1)


def _necklace_count(n: int) -> int:
    # Binary necklaces of length n (cyclic arrangements), by Burnside's lemma.
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            m = n // d
            phi = sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)
            total += phi * 2**d
    return total // n


def count_bounds(n: int) -> tuple[int, int]:
    """Quick bracket on the number of unique classes without enumerating.

    Lower bound: distance sets with all-distinct gaps, one per subset of
    {1..n} summing to n.  Upper bound: every cyclically distinct arrangement
    of every gap multiset, which is the count of nonzero binary necklaces;
    mirrors, duals and homometric merges only ever shrink that.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _distinct_partition_count(n), _necklace_count(n) - 1
