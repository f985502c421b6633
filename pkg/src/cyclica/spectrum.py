"""Analysis of exponent sequences.

Hadamard lacunarity, difference multiplicity, residue-class coverage modulo N,
bounded-block structure, and the two polydisc sparseness conditions (bounded
multi-index difference multiplicity, componentwise gap divergence).

Spectra are 1-indexed: ``term(1)`` is the first exponent, matching the usual
n_1 < n_2 < ... notation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from . import constructions
from .verdicts import NO_WITNESS, PROVEN, YES_AT_HORIZON, Verdict

__all__ = [
    "IntegerSpectrum",
    "MultiSpectrum",
    "lacunarity_ratio",
    "is_hadamard_lacunary",
    "difference_multiplicity",
    "residues_hit",
    "spectrum_admits_SstarN",
    "bounded_block_check",
    "polydisc_c1",
    "polydisc_c2",
]


class IntegerSpectrum:
    """A strictly increasing sequence of nonnegative integer exponents.

    Backed either by an explicit list or by one of three named lazy
    generators.  Generator evaluation is deterministic and restartable, and
    residues modulo N are streamed so that factorial-scale exponents never
    need to be materialized unless explicitly requested via ``term``.
    """

    def __init__(self, kind, *, values=None, base=None, crt_spec=None):
        if kind not in ("explicit", "geometric", "factorial_plus_k", "crt"):
            raise ValueError(f"unknown spectrum kind {kind!r}")
        self.kind = kind
        self.base = base
        self.crt_spec = crt_spec
        if kind == "explicit":
            vals = [int(v) for v in values]
            if any(v < 0 for v in vals):
                raise ValueError("exponents must be nonnegative")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError("exponents must be strictly increasing")
            self.values = tuple(vals)
        elif kind == "geometric":
            if base is None or base < 2:
                raise ValueError("geometric base must be an integer >= 2")
            self.values = None
        elif kind == "crt":
            if crt_spec is None:
                raise ValueError("crt spectrum needs a CrtSequenceSpec")
            self.values = None
        else:
            self.values = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def explicit(cls, values):
        return cls("explicit", values=values)

    @classmethod
    def geometric(cls, a):
        return cls("geometric", base=int(a))

    @classmethod
    def factorial_plus_k(cls):
        return cls("factorial_plus_k")

    @classmethod
    def crt(cls, spec):
        return cls("crt", crt_spec=spec)

    # -- evaluation ---------------------------------------------------------
    def __len__(self):
        if self.kind == "explicit":
            return len(self.values)
        raise TypeError("generator-backed spectra are unbounded")

    @property
    def is_finite(self):
        return self.kind == "explicit"

    def term(self, k: int) -> int:
        """The k-th exponent (1-indexed), as an exact integer."""
        if k < 1:
            raise IndexError("spectra are 1-indexed")
        if self.kind == "explicit":
            if k > len(self.values):
                raise IndexError(f"spectrum has only {len(self.values)} terms")
            return self.values[k - 1]
        if self.kind == "geometric":
            return self.base**k
        if self.kind == "factorial_plus_k":
            # arbitrary-precision on explicit request
            import math

            return math.factorial(k + 1) + k
        return constructions.crt_sequence_value(self.crt_spec, k)

    def terms(self, horizon: int):
        return [self.term(k) for k in range(1, horizon + 1)]

    def residue(self, k: int, modulus: int) -> int:
        """term(k) mod modulus via streaming modular arithmetic."""
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        if self.kind == "geometric":
            return pow(self.base, k, modulus)
        if self.kind == "factorial_plus_k":
            return constructions.factorial_residue(k, modulus)
        if self.kind == "crt":
            return constructions.crt_sequence_residue(self.crt_spec, k, modulus)
        return self.term(k) % modulus

    def _horizon(self, horizon):
        if self.kind == "explicit":
            return min(horizon, len(self.values))
        return horizon


def lacunarity_ratio(s: IntegerSpectrum, horizon: int) -> float:
    """min over k < horizon of n_{k+1}/n_k."""
    vals = s.terms(s._horizon(horizon))
    if len(vals) < 2:
        raise ValueError("need at least 2 terms for a lacunarity ratio")
    if vals[0] == 0:
        raise ValueError("ratio undefined for a zero term")
    return min(b / a for a, b in zip(vals, vals[1:]))


def is_hadamard_lacunary(s: IntegerSpectrum, d: float, horizon: int = 32) -> bool:
    return lacunarity_ratio(s, horizon) >= d


def difference_multiplicity(s: IntegerSpectrum, horizon: int) -> int:
    """max over I > 0 of the number of pairs with n_j - n_k = I (first terms)."""
    vals = s.terms(s._horizon(horizon))
    counts = Counter(
        vals[j] - vals[k] for k in range(len(vals)) for j in range(k + 1, len(vals))
    )
    return max(counts.values(), default=0)


def residues_hit(s: IntegerSpectrum, modulus: int, from_k: int = 1, window: int = 32):
    """{n_k mod N : from_k <= k < from_k + window}."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    last = from_k + window - 1
    if s.kind == "explicit":
        last = min(last, len(s.values))
    return {s.residue(k, modulus) for k in range(from_k, last + 1)}


def spectrum_admits_SstarN(s: IntegerSpectrum, N: int, horizon: int = 64) -> Verdict:
    """Does every tail of the spectrum hit all residue classes modulo N?

    Proven outcomes are generator-specific: the factorial sequence satisfies
    n_k = k (mod N) for k >= N-1, and the CRT sequence covers exactly the
    divisor closure of its defining set.  Explicit and geometric spectra are
    checked tail-by-tail up to the horizon; a missing class in some tail is
    returned as a concrete witness.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N == 1:
        return Verdict(PROVEN, "proven", detail={"argument": "single residue class"})
    if s.kind == "factorial_plus_k":
        return Verdict(
            PROVEN, "proven",
            detail={"argument": f"n_k = k (mod {N}) for every k >= {N - 1}"},
        )
    if s.kind == "crt":
        closure = s.crt_spec.divisor_set.closure
        if N in closure:
            return Verdict(
                PROVEN, "proven",
                detail={"argument": f"{N} lies in the divisor closure"},
            )
        miss = _missing_residue_witness(s, N, horizon)
        if miss is not None:
            m, missing = miss
            return Verdict(NO_WITNESS, "at-horizon", witness=m,
                           detail={"missing_residues": sorted(missing)})
        return Verdict(NO_WITNESS, "proven", witness=None,
                       detail={"argument": f"{N} outside the divisor closure"})
    miss = _missing_residue_witness(s, N, horizon)
    if miss is not None:
        m, missing = miss
        return Verdict(NO_WITNESS, "at-horizon", witness=m,
                       detail={"missing_residues": sorted(missing)})
    return Verdict(YES_AT_HORIZON, "at-horizon", detail={"horizon": horizon})


def _missing_residue_witness(s, N, horizon):
    """First tail start m (<= horizon/2) whose residues miss a class mod N."""
    K = s._horizon(horizon)
    res = [s.residue(k, N) for k in range(1, K + 1)]
    full = set(range(N))
    # only tails of length >= K/2 are meaningful evidence
    for m in range(1, max(K // 2, 1) + 1):
        seen = set(res[m - 1 : K])
        if seen != full:
            return m, full - seen
    return None


def bounded_block_check(s: IntegerSpectrum, N: int, horizon: int, d_min: float) -> bool:
    """Do the block indices {floor(n/N)} form a lacunary sequence?

    Duplicate block indices (several exponents inside one width-N block) are
    collapsed; a leading zero block is skipped for the ratio test.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if d_min <= 1:
        raise ValueError("d_min must exceed 1")
    vals = s.terms(s._horizon(horizon))
    blocks = []
    for n in vals:
        q = n // N
        if not blocks or q != blocks[-1]:
            blocks.append(q)
    if any(b <= a for a, b in zip(blocks, blocks[1:])):
        return False
    positive = [b for b in blocks if b > 0]
    if len(positive) < 2:
        return len(positive) >= 1
    return all(b / a >= d_min for a, b in zip(positive, positive[1:]))


@dataclass(frozen=True)
class MultiSpectrum:
    """An ordered, duplicate-free list of multi-indices in Z_+^n.

    The order is fixed by the caller and defines the enumeration (alpha_j)
    against which the gap condition is evaluated.
    """

    entries: tuple
    poly_dim: int

    def __init__(self, entries, poly_dim=None):
        ents = tuple(tuple(int(c) for c in e) for e in entries)
        if not ents:
            raise ValueError("MultiSpectrum needs at least one entry")
        n = poly_dim if poly_dim is not None else len(ents[0])
        if any(len(e) != n for e in ents):
            raise ValueError("all multi-indices must have the same length")
        if any(c < 0 for e in ents for c in e):
            raise ValueError("multi-indices must be nonnegative")
        if len(set(ents)) != len(ents):
            raise ValueError("multi-indices must be pairwise distinct")
        object.__setattr__(self, "entries", ents)
        object.__setattr__(self, "poly_dim", int(n))

    def __len__(self):
        return len(self.entries)


def polydisc_c1(ms: MultiSpectrum) -> int:
    """max over beta != 0 in Z_+^n of #{(alpha, alpha') : alpha - alpha' = beta}."""
    counts = Counter()
    for a in ms.entries:
        for b in ms.entries:
            if a == b:
                continue
            diff = tuple(x - y for x, y in zip(a, b))
            if all(c >= 0 for c in diff):
                counts[diff] += 1
    return max(counts.values(), default=0)


def polydisc_c2(ms: MultiSpectrum):
    """Per-component consecutive gaps along the enumeration, with a verdict.

    The divergence requirement "gaps tend to infinity in every component" is
    operationalized as: strictly increasing over the final half of the
    enumeration, reported at-horizon only.

    Returns (gap profile as a list per component, Verdict).
    """
    n = ms.poly_dim
    gaps = [
        [ms.entries[j + 1][k] - ms.entries[j][k] for j in range(len(ms) - 1)]
        for k in range(n)
    ]
    ok = True
    bad_component = None
    for k in range(n):
        g = gaps[k]
        tail = g[len(g) // 2 :]
        if len(tail) >= 2 and any(b <= a for a, b in zip(tail, tail[1:])):
            ok = False
            bad_component = k
            break
    if ok:
        v = Verdict(YES_AT_HORIZON, "at-horizon", detail={"components": n})
    else:
        v = Verdict(NO_WITNESS, "at-horizon", witness=bad_component,
                    detail={"reason": "gaps not eventually increasing"})
    return gaps, v
