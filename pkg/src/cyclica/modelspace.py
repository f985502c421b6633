"""Finite Blaschke products with matrix values and their model spaces.

The backward-shift span E_p of a C^d-valued polynomial p with independent
orbit is a model space K_Theta = H^2 (-) Theta H^2, where Theta is an
ordered product of rank-one factors (1 - P) + z P, P = <., x> x, with
dim Ker Theta(0)* = 1.  This module computes the factorization by a peeling
algorithm (extract the constants of the orbit span, deflate, recurse),
assembles and verifies the product, and inverts the construction (factor
vectors -> Theta -> cyclic generator).

All subspace work happens in the (N+1)*d-dimensional coefficient space of
polynomials of degree at most N; polynomials are stacked with coefficient j
occupying entries j*d .. (j+1)*d - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tolerances, VectorSeries

__all__ = [
    "MatrixPolynomial",
    "PotapovProduct",
    "DegenerateInputError",
    "NotCyclicGeneratorError",
    "factorize_Ep",
    "verify_potapov",
    "synthesize_from_vectors",
    "kernel_dim_theta0star",
    "model_space_basis",
]


class DegenerateInputError(ValueError):
    """The orbit of the input polynomial is linearly dependent."""


class NotCyclicGeneratorError(ValueError):
    """Peeling found a constants space of dimension != 1."""


@dataclass(frozen=True)
class MatrixPolynomial:
    """sum_m coeffs[m] z^m with d x d complex matrix coefficients."""

    dim: int
    coeffs: np.ndarray  # (M+1, d, d)

    def __init__(self, dim, coeffs):
        d = int(dim)
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[1:] != (d, d):
            raise ValueError(f"coefficients must have shape (M+1, {d}, {d})")
        # trim trailing zero coefficients, keeping at least the constant
        last = c.shape[0]
        while last > 1 and np.all(c[last - 1] == 0):
            last -= 1
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "coeffs", c[:last].copy())

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def __call__(self, z):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        zp = 1.0 + 0.0j
        for m in range(self.coeffs.shape[0]):
            out += self.coeffs[m] * zp
            zp *= z
        return out

    def __matmul__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        a, b = self.coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1, self.dim, self.dim),
                       dtype=complex)
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                out[i + j] += a[i] @ b[j]
        return MatrixPolynomial(self.dim, out)

    @classmethod
    def identity(cls, dim):
        return cls(dim, np.eye(dim, dtype=complex)[None, :, :])

    @classmethod
    def blaschke_factor(cls, x):
        """(1 - P) + z P with P the projection onto the unit vector x."""
        x = np.asarray(x, dtype=complex)
        n = np.linalg.norm(x)
        if n == 0:
            raise ValueError("factor vector must be nonzero")
        x = x / n
        P = np.outer(x, x.conj())
        I = np.eye(x.shape[0], dtype=complex)
        return cls(x.shape[0], np.stack([I - P, P]))


@dataclass(frozen=True)
class PotapovProduct:
    """Ordered unit factor vectors and the assembled matrix polynomial.

    Factors are stored in assembly order: the first vector's Blaschke factor
    is the leftmost in the matrix product.
    """

    dim: int
    factors: tuple
    assembled: MatrixPolynomial

    def __init__(self, dim, factors):
        d = int(dim)
        fs = tuple(np.asarray(x, dtype=complex) / np.linalg.norm(x) for x in factors)
        if any(x.shape != (d,) for x in fs):
            raise ValueError("factor vectors must have length dim")
        theta = MatrixPolynomial.identity(d)
        for x in fs:
            theta = theta @ MatrixPolynomial.blaschke_factor(x)
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "factors", fs)
        object.__setattr__(self, "assembled", theta)

    @property
    def n_factors(self):
        return len(self.factors)


def _stack(series: VectorSeries, N: int) -> np.ndarray:
    v = np.zeros((N + 1) * series.dim, dtype=complex)
    for e, a in zip(series.exponents, series.coeffs):
        if e > N:
            raise ValueError("polynomial degree exceeds the stacking degree")
        v[int(e) * series.dim : (int(e) + 1) * series.dim] = a
    return v


def _orth(cols, tol_rank):
    """Orthonormal basis of the column span with a relative SVD cutoff."""
    m = np.column_stack(cols) if len(cols) else np.zeros((0, 0))
    if m.size == 0:
        return m
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return u[:, :0]
    return u[:, s >= tol_rank * s[0]]


def factorize_Ep(p: VectorSeries, tol: Tolerances = Tolerances()) -> PotapovProduct:
    """Peel the orbit span of p into an ordered product of rank-one factors.

    Requires {S*^n p : 0 <= n <= N} independent (N the degree of p).  At
    each stage the constants inside the current orbit span form a line; its
    unit vector is emitted as a factor, the span is deflated by one
    dimension, and the process repeats.  The factor extracted first is the
    leftmost in the assembled product.
    """
    if p.is_zero:
        raise DegenerateInputError("zero polynomial")
    d = p.dim
    N = int(p.exponents[-1])
    # orbit stacks
    from .core import backward_shift

    cols = []
    q = p
    for _ in range(N + 1):
        cols.append(_stack(q, N))
        q = backward_shift(q, 1)
    s = np.linalg.svd(np.column_stack(cols), compute_uv=False)
    if s[-1] < tol.tol_rank * s[0]:
        raise DegenerateInputError(
            f"orbit of the polynomial is numerically dependent "
            f"(relative smallest singular value {s[-1] / s[0]:.3e})"
        )
    B = _orth(cols, tol.tol_rank)
    factors = []
    for _ in range(N + 1):
        r = B.shape[1]
        # constants inside span(B): kernel of the degree >= 1 part
        H = B[d:, :]
        if H.shape[0]:
            _, sv, vh = np.linalg.svd(H, full_matrices=True)
            # B is orthonormal, so singular values of H live on an O(1)
            # scale; an absolute cutoff also catches the all-constant case
            # where H vanishes entirely
            small = sv <= tol.tol_rank * max(float(sv[0]) if sv.size else 0.0, 1.0)
            null_dim = int(np.sum(small)) + (r - len(sv))
            if null_dim != 1:
                raise NotCyclicGeneratorError(
                    f"constants space has dimension {null_dim} at stage "
                    f"{len(factors)}; the orbit span is not singly generated"
                )
            cvec = vh.conj().T[:, r - 1]
        else:
            if r != 1:
                raise NotCyclicGeneratorError(
                    f"constants space has dimension {r} at the final stage"
                )
            cvec = np.ones(1, dtype=complex)
        const_elem = B @ cvec  # stacked constant polynomial in M
        e = const_elem[:d]
        e = e / np.linalg.norm(e)
        factors.append(e)
        if r == 1:
            break
        # deflate: complement of the constant inside M, then
        # g |-> (1 - P)g + S*(P g) coefficientwise
        comp = B @ _orth_complement(cvec)
        P = np.outer(e, e.conj())
        mapped = np.zeros_like(comp)
        for c in range(comp.shape[1]):
            g = comp[:, c].reshape(N + 1, d)
            out = np.zeros_like(g)
            for j in range(N + 1):
                out[j] = g[j] - P @ g[j]
                if j + 1 <= N:
                    out[j] += P @ g[j + 1]
            mapped[:, c] = out.ravel()
        B = _orth(list(mapped.T), tol.tol_rank)
        if B.shape[1] != r - 1:
            raise NotCyclicGeneratorError(
                f"deflation changed the dimension from {r} to {B.shape[1]} "
                f"instead of {r - 1}"
            )
    return PotapovProduct(d, factors)


def _orth_complement(v):
    """Orthonormal basis of the orthocomplement of a unit vector v."""
    n = v.shape[0]
    m = np.eye(n, dtype=complex) - np.outer(v, v.conj()) / np.vdot(v, v)
    u, s, _ = np.linalg.svd(m)
    return u[:, : n - 1]


def kernel_dim_theta0star(theta: MatrixPolynomial,
                          tol: Tolerances = Tolerances()) -> int:
    """Numerical nullity of the adjoint of the constant coefficient."""
    s = np.linalg.svd(theta.coeffs[0].conj().T, compute_uv=False)
    if s.size == 0:
        return theta.dim
    # Theta is boundary-unitary, so Theta(0) lives on an O(1) scale; an
    # absolute cutoff also handles the pure-monomial case Theta(0) ~ 0
    return int(np.sum(s < tol.tol_rank * max(float(s[0]), 1.0)))


def model_space_basis(pp: PotapovProduct, tol: Tolerances = Tolerances()):
    """Orthonormal basis of K_Theta inside polynomials of degree < n_factors.

    K_Theta is the orthocomplement of Theta H^2; on polynomials of degree at
    most N = n_factors - 1 the constraints are the degree-(<= N) truncations
    of Theta z^j v over 0 <= j <= N and basis vectors v.
    """
    d = pp.dim
    n = pp.n_factors
    if n == 0:
        return np.zeros((d, 0), dtype=complex)
    N = n - 1
    T = pp.assembled.coeffs  # (deg+1, d, d)
    constraints = []
    for j in range(N + 1):
        for v in range(d):
            w = np.zeros((N + 1) * d, dtype=complex)
            for t in range(j, N + 1):
                m = t - j
                if m < T.shape[0]:
                    w[t * d : (t + 1) * d] = T[m][:, v]
            constraints.append(w)
    C = np.column_stack(constraints)
    u, s, _ = np.linalg.svd(C, full_matrices=True)
    # absolute scale: the constraint columns are truncations of the
    # boundary-unitary Theta, so genuine constraints have O(1) norm
    rank = int(np.sum(s >= tol.tol_rank * max(float(s[0]), 1.0))) if s.size else 0
    return u[:, rank:]


def verify_potapov(pp: PotapovProduct, trials: int = 32, seed: int = 0,
                   tol: Tolerances = Tolerances(), generator: VectorSeries = None):
    """Structural checks on an assembled product; failures live in the report.

    Checks: boundary unitarity at sampled circle points; det Theta equal to
    a unimodular constant times z^{n_factors}; dim Ker Theta(0)* = 1; the
    nested-factor condition (Theta(0) singular with a one-dimensional kernel,
    i.e. the partial product is injective on the orthocomplement of the last
    factor vector); and, when a generator is supplied, orthogonality of its
    orbit to Theta H^2 plus equality of K_Theta with the orbit span.
    """
    rng = np.random.default_rng(seed)
    theta = pp.assembled
    d = pp.dim
    n = pp.n_factors
    report = {}

    defect = 0.0
    for _ in range(trials):
        zeta = np.exp(2j * np.pi * rng.uniform())
        m = theta(zeta)
        defect = max(defect, float(np.abs(m.conj().T @ m - np.eye(d)).max()))
    report["unitarity_defect"] = defect
    report["unitary_on_boundary"] = defect < tol.tol_unitary

    # det Theta = gamma z^n by monomial fit at n + 3 points
    pts = 0.7 * np.exp(2j * np.pi * (np.arange(n + 3) + 0.25) / (n + 3))
    gammas = np.array([np.linalg.det(theta(z)) / z**n for z in pts])
    gamma = complex(np.mean(gammas))
    report["det_gamma"] = gamma
    report["det_monomial_defect"] = float(np.max(np.abs(gammas - gamma))) if n else 0.0
    report["det_gamma_unimodular_defect"] = abs(abs(gamma) - 1.0)
    report["det_ok"] = (
        report["det_monomial_defect"] < tol.tol_unitary
        and report["det_gamma_unimodular_defect"] < tol.tol_unitary
    )

    report["kernel_dim_theta0star"] = kernel_dim_theta0star(theta, tol)
    report["kernel_ok"] = (report["kernel_dim_theta0star"] == 1) if n else (
        report["kernel_dim_theta0star"] == 0
    )

    if n:
        s0 = np.linalg.svd(theta.coeffs[0], compute_uv=False)
        report["nesting_defect"] = float(s0[-1] / max(float(s0[0]), 1.0))
        if n >= 2:
            A = np.eye(d, dtype=complex)
            for x in pp.factors[:-1]:
                A = A @ (np.eye(d) - np.outer(x, x.conj()))
            W = _orth_complement(pp.factors[-1])
            sv = np.linalg.svd(A @ W, compute_uv=False)
            report["nesting_margin"] = float(sv[-1]) if sv.size else 1.0
        else:
            report["nesting_margin"] = 1.0
        report["nesting_ok"] = (
            report["nesting_defect"] < 1e-7 and report["nesting_margin"] > tol.tol_rank
        )
    else:
        report["nesting_defect"] = 0.0
        report["nesting_margin"] = 1.0
        report["nesting_ok"] = True

    if generator is not None:
        from .core import backward_shift

        N = n - 1
        orbit = []
        q = generator
        for _ in range(n):
            orbit.append(_stack(q, N))
            q = backward_shift(q, 1)
        K = model_space_basis(pp, tol)
        O = _orth(orbit, tol.tol_rank)
        # mutual projection defect between K_Theta and the orbit span
        d1 = float(np.linalg.norm(O - K @ (K.conj().T @ O), 2)) if O.size else 0.0
        d2 = float(np.linalg.norm(K - O @ (O.conj().T @ K), 2)) if K.size else 0.0
        report["model_space_defect"] = max(d1, d2)
        report["model_space_ok"] = report["model_space_defect"] < 1e-7
        # orthogonality of the orbit to Theta H^2 on the stored degrees
        T = theta.coeffs
        maxdot = 0.0
        for j in range(N + 1):
            for v in range(d):
                w = np.zeros((N + 1) * d, dtype=complex)
                for t in range(j, N + 1):
                    if t - j < T.shape[0]:
                        w[t * d : (t + 1) * d] = T[t - j][:, v]
                for o in orbit:
                    maxdot = max(maxdot, abs(np.vdot(w, o)))
        report["orbit_orthogonality_defect"] = maxdot
        report["orbit_orthogonality_ok"] = maxdot < 1e-7

    report["all_ok"] = all(
        bool(report[k]) for k in report if k.endswith("_ok")
    )
    return report


def synthesize_from_vectors(vectors, seed: int = 0,
                            tol: Tolerances = Tolerances()):
    """Assemble a product from factor vectors and find a cyclic generator.

    The product must be of nested type: its constant coefficient needs a
    one-dimensional kernel.  A generator is drawn as a seeded random
    combination of a model-space basis and accepted once its orbit has full
    rank; the round trip through :func:`factorize_Ep` reproduces the same
    model space.
    """
    vectors = list(vectors)
    if not vectors:
        raise ValueError("need at least one factor vector")
    d = len(np.atleast_1d(vectors[0]))
    pp = PotapovProduct(d, vectors)
    n = pp.n_factors
    s0 = np.linalg.svd(pp.assembled.coeffs[0], compute_uv=False)
    nullity = int(np.sum(s0 < tol.tol_rank * max(float(s0[0]), 1.0))) if s0.size else d
    if nullity != 1:
        raise ValueError(
            f"factor vectors violate the nesting condition: Theta(0) has "
            f"kernel dimension {nullity}, need 1"
        )
    K = model_space_basis(pp, tol)
    if K.shape[1] != n:
        raise ValueError(
            f"model space has dimension {K.shape[1]}, expected {n}"
        )
    N = n - 1
    rng = np.random.default_rng(seed)
    from .core import backward_shift

    for _ in range(16):
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        stack = K @ c
        exps, coeffs = [], []
        for j in range(N + 1):
            a = stack[j * d : (j + 1) * d]
            if np.linalg.norm(a) > 0:
                exps.append(j)
                coeffs.append(a)
        p = VectorSeries(d, exps, np.array(coeffs))
        if p.is_zero or int(p.exponents[-1]) != N:
            continue
        orbit = []
        q = p
        for _ in range(n):
            orbit.append(_stack(q, N))
            q = backward_shift(q, 1)
        s = np.linalg.svd(np.column_stack(orbit), compute_uv=False)
        if s[-1] >= tol.tol_rank * s[0]:
            return pp, p
    raise RuntimeError("no cyclic generator found after 16 seeded draws")
