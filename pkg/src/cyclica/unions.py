"""Families supported on finite unions of shifted lacunary spectra.

A d-tuple of scalar series whose spectra are shifts of one lacunary base
sequence is handled by removing the shifts (monomial multipliers reduce to
backward shifts) and stacking the coefficients along the base sequence; the
stacked tail-span criterion then decides cyclicity.  A sufficient stacked
criterion, the polynomial-multiplier reduction, a randomized construction
with prescribed per-coordinate spectra, and a declared-value ledger for the
degree of cyclicity round out the module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coefspace import TailModel, cyclicity_single
from .core import Tolerances, VectorSeries, span_of_matrix
from .spectrum import IntegerSpectrum
from .verdicts import (
    CYCLIC,
    CYCLIC_SUFFICIENT,
    INCONCLUSIVE,
    NON_CYCLIC,
    Verdict,
)

__all__ = [
    "ShiftedSpectrumFamily",
    "DcLedger",
    "shifted_stack_cyclicity",
    "multiplier_reduce",
    "stacked_sufficient",
    "construct_prescribed_spectra",
    "dc_checks",
]


@dataclass(frozen=True)
class ShiftedSpectrumFamily:
    """d scalar series f_i with spectra inside Lambda + m_i, min shift 0."""

    base: IntegerSpectrum
    shifts: tuple
    components: tuple

    def __init__(self, base, shifts, components):
        shifts = tuple(int(m) for m in shifts)
        components = tuple(components)
        if len(shifts) != len(components) or not components:
            raise ValueError("need one shift per component")
        if min(shifts) != 0:
            raise ValueError("shifts must be normalized so the smallest is 0")
        if any(f.dim != 1 for f in components):
            raise ValueError("components must be scalar series")
        lam = set(base.terms(len(base)) if base.is_finite else base.terms(64))
        for m, f in zip(shifts, components):
            bad = [int(e) for e in f.exponents if int(e) - m not in lam]
            if bad:
                raise ValueError(
                    f"component exponents {bad} do not land in the base "
                    f"spectrum after removing the shift {m}"
                )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "components", components)

    @property
    def dim(self):
        return len(self.components)


def _stack_on_base(base_terms, shifted_components):
    """C^d-valued series on the base spectrum from already-deshifted scalars."""
    d = len(shifted_components)
    coeffs = np.zeros((len(base_terms), d), dtype=complex)
    for i, f in enumerate(shifted_components):
        lookup = {int(e): c[0] for e, c in zip(f.exponents, f.coeffs)}
        for j, n in enumerate(base_terms):
            coeffs[j, i] = lookup.get(n, 0.0)
    return VectorSeries(d, base_terms, coeffs)


def shifted_stack_cyclicity(fam: ShiftedSpectrumFamily,
                            tol: Tolerances = Tolerances(),
                            model: TailModel = None) -> Verdict:
    """Cyclicity of the family via backward-shifting each component by its m_i.

    The deshifted components share the base spectrum; their coefficient
    stacks (f_1^(n + m_1), ..., f_d^(n + m_d)) form a vector series whose
    tail-span criterion decides cyclicity of the original family.
    """
    from .core import backward_shift

    deshifted = [backward_shift(f, m) for f, m in zip(fam.components, fam.shifts)]
    if fam.base.is_finite:
        base_terms = list(fam.base.values)
    else:
        # enumerate just far enough to cover the stored truncations
        top = max(
            (int(f.exponents[-1]) for f in deshifted if len(f)), default=0
        )
        base_terms = []
        for k in range(1, 64 + 1):
            t = fam.base.term(k)
            if t > top:
                break
            base_terms.append(t)
    stacked = _stack_on_base(base_terms, deshifted)
    return cyclicity_single(stacked, tol, model=model)


def multiplier_reduce(components, multipliers):
    """Componentwise projection P_+(conj-multiplier * f): a correlation.

    Each multiplier is a nonzero scalar polynomial given by its coefficient
    list; output coefficient j of a component is
    sum_l conj(theta^(l)) f^(j + l), computed exactly on the truncation.
    Cyclicity verdicts are invariant under this transformation.
    """
    components = list(components)
    multipliers = [np.asarray(t, dtype=complex).ravel() for t in multipliers]
    if len(components) != len(multipliers):
        raise ValueError("need one multiplier per component")
    if any(np.all(t == 0) for t in multipliers):
        raise ValueError("multipliers must be nonzero polynomials")
    out = []
    for f, th in zip(components, multipliers):
        acc = {}
        for e, a in zip(f.exponents, f.coeffs):
            for l, t in enumerate(th):
                if t == 0:
                    continue
                j = int(e) - l
                if j >= 0:
                    acc[j] = acc.get(j, 0.0) + np.conj(t) * a
        if acc:
            exps = sorted(acc)
            coeffs = np.array([acc[j] for j in exps])
            out.append(VectorSeries(f.dim, exps, coeffs, f.truncation_degree))
        else:
            out.append(VectorSeries(f.dim, [], np.zeros((0, f.dim)), 0))
    return out


def stacked_sufficient(phis, tol: Tolerances = Tolerances()) -> Verdict:
    """Sufficient criterion for a list of C^d-valued series phi_1..phi_r.

    With sigma(phi_i) inside Lambda + (i-1) for a lacunary base Lambda, the
    family is cyclic when the stacks
    (phi_1^(n_k), phi_2^(n_k + 1), ..., phi_r^(n_k + r - 1)) span C^{d r}
    along every tail.  The converse fails, so a deficient stack is only
    Inconclusive.
    """
    phis = list(phis)
    if not phis:
        raise ValueError("empty family")
    d = phis[0].dim
    if any(p.dim != d for p in phis):
        raise ValueError("mixed dimensions")
    r = len(phis)
    base = sorted({int(e) - i for i, p in enumerate(phis) for e in p.exponents})
    for i, p in enumerate(phis):
        if any(int(e) - i not in set(base) for e in p.exponents):
            raise ValueError("component spectrum leaves the shifted base")
    lookups = [
        {int(e): c for e, c in zip(p.exponents, p.coeffs)} for p in phis
    ]
    stacks = []
    for n in base:
        v = np.zeros(d * r, dtype=complex)
        for i in range(r):
            c = lookups[i].get(n + i)
            if c is not None:
                v[i * d : (i + 1) * d] = c
        stacks.append(v)
    for m in range(len(stacks) // 2 + 1):
        span = span_of_matrix(stacks[m:], d * r, tol)
        if not span.is_full:
            return Verdict(INCONCLUSIVE, "at-horizon", witness=m,
                           detail={"dim_stack_span": span.dim, "dim": d * r})
    return Verdict(CYCLIC_SUFFICIENT, "at-horizon")


def construct_prescribed_spectra(spectra, seed: int = 0, horizon: int = 16,
                                 tol: Tolerances = Tolerances(),
                                 max_attempts: int = 16):
    """A cyclic d-tuple whose i-th component has exactly the i-th spectrum.

    Coefficients are drawn seeded-uniformly on complex circles with a
    square-summable radial profile; the candidate is accepted when the
    stacked coefficient tails along the union enumeration span C^d at every
    window (at-horizon certificate).  Spectra must be generator-backed
    (infinite); a finite explicit list violates the precondition.

    Returns (stacked VectorSeries, list of scalar components, Verdict).
    """
    spectra = list(spectra)
    d = len(spectra)
    if d < 1:
        raise ValueError("need at least one spectrum")
    for s in spectra:
        if s.is_finite:
            raise ValueError("prescribed spectra must be infinite (generator-backed)")
    rng = np.random.default_rng(seed)
    exps_per = [s.terms(horizon) for s in spectra]
    union = sorted({e for ex in exps_per for e in ex})
    for attempt in range(max_attempts):
        comps = []
        for i, ex in enumerate(exps_per):
            radial = 2.0 ** (-np.arange(1, len(ex) + 1, dtype=float))
            c = radial * np.exp(2j * np.pi * rng.uniform(size=len(ex)))
            comps.append(VectorSeries(1, ex, c))
        coeffs = np.zeros((len(union), d), dtype=complex)
        for i, f in enumerate(comps):
            lookup = {int(e): v[0] for e, v in zip(f.exponents, f.coeffs)}
            for j, n in enumerate(union):
                if n in lookup:
                    coeffs[j, i] = lookup[n]
        stacked = VectorSeries(d, union, coeffs)
        ok = True
        for m in range(len(union) // 2 + 1):
            if not span_of_matrix(list(stacked.coeffs[m:]), d, tol).is_full:
                ok = False
                break
        if ok:
            v = Verdict(CYCLIC, "at-horizon",
                        detail={"seed": seed, "attempt": attempt})
            return stacked, comps, v
    raise RuntimeError(
        f"no cyclic candidate found after {max_attempts} draws; "
        "the prescribed spectra may interleave degenerately"
    )


@dataclass(frozen=True)
class DcLedger:
    """Declared degree-of-cyclicity values with recorded relations.

    ``values`` maps a name to its declared dc; ``subset_relations`` lists
    pairs (A, B) meaning A is a subfamily of B; ``sum_relations`` lists
    triples (A, B, C) meaning C is the sum family of A and B.
    """

    dim: int
    values: dict
    subset_relations: tuple = ()
    sum_relations: tuple = ()
    notes: dict = field(default_factory=dict)


def dc_checks(ledger: DcLedger):
    """Evaluate range, monotonicity and subadditivity on the declared values."""
    out = []
    for name, v in ledger.values.items():
        ok = 0 <= v <= ledger.dim
        out.append({
            "check": "range", "entries": (name,), "satisfied": ok,
            "note": f"dc({name}) = {v} must lie in [0, {ledger.dim}]",
        })
    for a, b in ledger.subset_relations:
        ok = ledger.values[a] <= ledger.values[b]
        out.append({
            "check": "monotonicity", "entries": (a, b), "satisfied": ok,
            "note": f"{a} within {b} requires dc({a}) <= dc({b})",
        })
    for a, b, c in ledger.sum_relations:
        ok = ledger.values[c] <= ledger.values[a] + ledger.values[b]
        out.append({
            "check": "subadditivity", "entries": (a, b, c), "satisfied": ok,
            "note": f"dc({c}) <= dc({a}) + dc({b})",
        })
    return out
