"""Tail-span analysis of the coefficient sequence in C^d.

The central object is the intersection of the spans of coefficient tails,

    X_* = intersection over m of span{a_k : k >= m},

which is full exactly when the (lacunary) series is cyclic for the backward
shift.  X_* is an infinite-tail object, so it is computed exactly only under
a declared :class:`TailModel` (transient coefficients + recurrent directions);
raw truncations get an at-horizon estimate from a sliding window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Subspace,
    Tolerances,
    VectorSeries,
    numerical_span,
    project_vector,
    span_of_matrix,
)
from .verdicts import (
    CYCLIC,
    NON_CYCLIC,
    NOT_CYCLIC,
    POSSIBLY_CYCLIC,
    Verdict,
)

__all__ = [
    "TailModel",
    "CyclicityReport",
    "tail_span",
    "x_star",
    "decompose",
    "cyclicity_single",
    "cyclicity_family",
    "necessary_condition",
]


@dataclass(frozen=True)
class TailModel:
    """Declared structure of a coefficient sequence (a_k).

    ``transient`` lists finitely many exceptional terms as (term position,
    coefficient vector) with strictly increasing 0-based positions; every
    other coefficient is asserted to lie in span(``recurrent``), and each
    recurrent direction is asserted to occur for infinitely many k.
    """

    dim: int
    recurrent: tuple
    transient: tuple = ()
    spectrum: object = None  # optional IntegerSpectrum

    def __init__(self, dim, recurrent, transient=(), spectrum=None):
        d = int(dim)
        rec = tuple(np.asarray(v, dtype=complex) for v in recurrent)
        if not rec:
            raise ValueError("recurrent set must be nonempty")
        if any(v.shape != (d,) for v in rec):
            raise ValueError("recurrent vectors must have length dim")
        if any(np.linalg.norm(v) == 0 for v in rec):
            raise ValueError("recurrent vectors must be nonzero")
        tra = tuple((int(k), np.asarray(v, dtype=complex)) for k, v in transient)
        if any(v.shape != (d,) for _, v in tra):
            raise ValueError("transient vectors must have length dim")
        ks = [k for k, _ in tra]
        if any(b <= a for a, b in zip(ks, ks[1:])) or any(k < 0 for k in ks):
            raise ValueError("transient positions must be strictly increasing and >= 0")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "recurrent", rec)
        object.__setattr__(self, "transient", tra)
        object.__setattr__(self, "spectrum", spectrum)

    def coefficient(self, k):
        """The declared coefficient at position k (recurrent span not resolved)."""
        for j, v in self.transient:
            if j == k:
                return v
        return None

    def check_consistency(self, f: VectorSeries, tol: Tolerances = Tolerances()):
        """Stored coefficients must match the declared structure.

        Transient positions must reproduce the stored coefficient; every
        other stored coefficient must lie in span(recurrent) with relative
        residual below tol_rank.  Raises ValueError on violation.
        """
        if f.dim != self.dim:
            raise ValueError("dimension mismatch between series and tail model")
        rec = numerical_span(self.recurrent, tol)
        tra = dict((k, v) for k, v in self.transient)
        for k in range(len(f)):
            a = f.coeffs[k]
            if k in tra:
                if np.linalg.norm(a - tra[k]) > 1e-8 * max(np.linalg.norm(a), 1.0):
                    raise ValueError(
                        f"transient coefficient at position {k} does not match the series"
                    )
                continue
            r = a - project_vector(a, rec)
            if np.linalg.norm(r) > tol.tol_rank * max(np.linalg.norm(a), 1.0):
                raise ValueError(
                    f"coefficient at position {k} leaves span(recurrent) "
                    f"(residual {np.linalg.norm(r):.3e})"
                )


@dataclass(frozen=True)
class CyclicityReport:
    x_star: Subspace
    n_of_f: int
    p: VectorSeries
    verdict: Verdict
    mode: str  # "exact" | "at-horizon"
    deg_p_exponent: int  # largest exponent appearing in p (-1 if p = 0)
    deg_p_index: int  # N(f) - 1, the index-count convention


def tail_span(f, m: int, tol: Tolerances = Tolerances()) -> Subspace:
    """Orthonormal basis of span{a_k : k >= m}.

    Accepts a VectorSeries (stored coefficients) or a TailModel (recurrent
    directions plus transient terms at positions >= m).
    """
    if isinstance(f, TailModel):
        vecs = list(f.recurrent) + [v for k, v in f.transient if k >= m]
        return span_of_matrix(vecs, f.dim, tol)
    return span_of_matrix(list(f.coeffs[m:]), f.dim, tol)


def x_star(model, tol: Tolerances = Tolerances(), window=None) -> Subspace:
    """X_* = span(recurrent) for a TailModel; sliding-window estimate otherwise.

    For a raw VectorSeries the estimate is the span of the last-half
    coefficients (or the last ``window`` of them), an at-horizon quantity.
    """
    if isinstance(model, TailModel):
        return numerical_span(model.recurrent, tol)
    n = len(model)
    w = window if window is not None else max(n - n // 2, 1)
    return span_of_matrix(list(model.coeffs[max(n - w, 0) :]), model.dim, tol)


def _split(f: VectorSeries, xs: Subspace, tol: Tolerances):
    """Coefficients of p = f - P_{X_*} f, zeroing numerically tiny residuals."""
    proj = xs.basis @ (xs.basis.conj().T @ f.coeffs.T)  # (d, n)
    resid = f.coeffs - proj.T
    norms = np.linalg.norm(resid, axis=1)
    scale = np.linalg.norm(f.coeffs, axis=1)
    resid[norms <= tol.tol_orth * np.maximum(scale, 1.0)] = 0.0
    return resid


def decompose(f: VectorSeries, model, tol: Tolerances = Tolerances()) -> CyclicityReport:
    """Split f = (f - p) + p with p = projection of f onto the X_* complement.

    In exact (TailModel) mode the model is first checked for consistency with
    the stored coefficients; p is then supported on transient positions only.
    """
    exact = isinstance(model, TailModel)
    if exact:
        model.check_consistency(f, tol)
        xs = numerical_span(model.recurrent, tol)
    else:
        xs = x_star(f, tol)
    resid = _split(f, xs, tol)
    p = VectorSeries(f.dim, f.exponents, resid, f.truncation_degree)
    nonzero = np.flatnonzero(np.linalg.norm(resid, axis=1) > 0)
    n_of_f = int(nonzero[-1]) + 1 if nonzero.size else 0
    deg_exp = int(f.exponents[nonzero[-1]]) if nonzero.size else -1
    mode = "exact" if exact else "at-horizon"
    status = CYCLIC if xs.is_full else NON_CYCLIC
    verdict = Verdict(status, mode, detail={"dim_x_star": xs.dim, "dim": f.dim})
    return CyclicityReport(
        x_star=xs,
        n_of_f=n_of_f,
        p=p,
        verdict=verdict,
        mode=mode,
        deg_p_exponent=deg_exp,
        deg_p_index=n_of_f - 1,
    )


def cyclicity_single(f, tol: Tolerances = Tolerances(), model=None) -> Verdict:
    """Cyclic iff X_* is all of C^d (lacunary series, finite d)."""
    if model is not None:
        xs = numerical_span(model.recurrent, tol)
        mode = "exact"
        d = model.dim
    else:
        if isinstance(f, TailModel):
            return cyclicity_single(None, tol, model=f)
        xs = x_star(f, tol)
        mode = "at-horizon"
        d = f.dim
    status = CYCLIC if xs.dim == d else NON_CYCLIC
    return Verdict(status, mode, detail={"dim_x_star": xs.dim, "dim": d})


def cyclicity_family(family, tol: Tolerances = Tolerances()) -> Verdict:
    """Cyclic iff the union of the members' X_* spaces spans C^d."""
    family = list(family)
    if not family:
        raise ValueError("empty family")
    dims = {m.dim for m in family}
    if len(dims) != 1:
        raise ValueError(f"mixed dimensions in family: {sorted(dims)}")
    d = dims.pop()
    exact = all(isinstance(m, TailModel) for m in family)
    vecs = []
    for m in family:
        vecs.extend(x_star(m, tol).basis.T)
    union = span_of_matrix(vecs, d, tol)
    mode = "exact" if exact else "at-horizon"
    status = CYCLIC if union.is_full else NON_CYCLIC
    return Verdict(status, mode, detail={"dim_union": union.dim, "dim": d})


def necessary_condition(family, tol: Tolerances = Tolerances()) -> Verdict:
    """Lemma-level necessary check: a proper family tail span forbids cyclicity.

    Returns NotCyclic with the first witness index m whose tail span
    X_m = span{a_k : k >= m, all members} is a proper subspace; otherwise
    PossiblyCyclic.  No lacunarity is assumed.
    """
    family = [family] if isinstance(family, (VectorSeries, TailModel)) else list(family)
    if not family:
        raise ValueError("empty family")
    d = family[0].dim
    if any(m.dim != d for m in family):
        raise ValueError("mixed dimensions in family")
    exact = all(isinstance(m, TailModel) for m in family)
    if exact:
        m_max = max((k for mem in family for k, _ in mem.transient), default=-1) + 1
        candidates = range(m_max + 1)
    else:
        n = max(len(mem) if isinstance(mem, VectorSeries) else 0 for mem in family)
        candidates = range(n // 2 + 1)
    for m in candidates:
        vecs = []
        for mem in family:
            vecs.extend(tail_span(mem, m, tol).basis.T)
        union = span_of_matrix(vecs, d, tol)
        if not union.is_full:
            return Verdict(
                NOT_CYCLIC,
                "exact" if exact else "at-horizon",
                witness=m,
                detail={"dim_tail_span": union.dim, "dim": d},
            )
    return Verdict(POSSIBLY_CYCLIC, "exact" if exact else "at-horizon")
