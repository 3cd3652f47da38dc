"""Dense complex linear algebra for small multi-copy operator spaces.

Everything here works on plain ``numpy`` arrays of complex128.  The cyclic
shift operator and its defining trace identity

    Tr(V_(n) A_1 (x) ... (x) A_n) = Tr(A_1 A_2 ... A_n)

are the workhorses: they let multi-copy expectation values collapse to
products of the small single-copy matrices, so nothing of dimension
``local_dim**n`` ever needs to be built on the fast path.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

#: max absolute deviation from m == m.conj().T accepted as "Hermitian"
HERMITICITY_TOL = 1e-9

#: eigenvalues above -PSD_CLAMP are treated as nonnegative
PSD_CLAMP = 1e-9

#: largest dimension at which shift operators may be materialized
SHIFT_DIM_CAP = 4096


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a finite square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Max absolute entry of m - m^dagger."""
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    a = as_complex_matrix(m)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    return a


def tensor(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices, first factor slowest index."""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    out = as_complex_matrix(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_complex_matrix(f))
    return out


def partial_transpose(m, dims: tuple[int, int], subsystem: str = "B") -> np.ndarray:
    """Transpose the indices of one tensor factor only.

    Parameters
    ----------
    m : array_like
        Square matrix on a dimA*dimB space, A the slow index.
    dims : (dimA, dimB)
    subsystem : "A" or "B"
        Which factor's indices are transposed.

    The operation is a pure index permutation: on exact (binary rational)
    inputs it is bit-exact, trace preserving, Hermiticity preserving and an
    involution.
    """
    a = as_complex_matrix(m)
    da, db = int(dims[0]), int(dims[1])
    if da * db != a.shape[0]:
        raise ValueError(f"dims {dims} do not match matrix dimension {a.shape[0]}")
    t = a.reshape(da, db, da, db)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError("subsystem must be 'A' or 'B'")
    return t.reshape(da * db, da * db)


def herm_eigen(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).  The input is
    rejected if it deviates from Hermiticity by more than HERMITICITY_TOL.
    """
    a = require_hermitian(m)
    w, v = np.linalg.eigh(a)
    return w, v


def herm_eigenvalues(m) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix."""
    return np.linalg.eigvalsh(require_hermitian(m))


def general_eigenvalues(m) -> np.ndarray:
    """Unordered complex spectrum of an arbitrary square matrix.

    Convergence failures of the underlying QR iteration are reported as
    ValueError rather than leaking the backend exception type.
    """
    a = as_complex_matrix(m)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise ValueError(f"eigenvalue iteration failed to converge: {exc}") from exc


def matrix_sqrt_psd(m) -> np.ndarray:
    """Hermitian PSD square root of a Hermitian PSD matrix.

    Eigenvalues in [-PSD_CLAMP, 0) are clamped to zero; anything more
    negative is an error.
    """
    a = require_hermitian(m)
    w, v = np.linalg.eigh(a)
    if w[0] < -PSD_CLAMP:
        raise ValueError(f"matrix has significantly negative spectrum (min {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w = herm_eigenvalues(m)
    return float(np.sum(np.abs(w)))


def cyclic_trace(factors) -> complex:
    """Tr(A_1 A_2 ... A_n) for equally sized square factors.

    Equals Tr(V_(n) A_1 (x) ... (x) A_n) by the shift-operator identity;
    this is the implicit fast path that avoids the local_dim**n space.
    """
    mats = [as_complex_matrix(f) for f in factors]
    if not mats:
        raise ValueError("cyclic_trace needs at least one factor")
    dim = mats[0].shape[0]
    for f in mats[1:]:
        if f.shape[0] != dim:
            raise ValueError("all factors must share one dimension")
    prod = mats[0]
    for f in mats[1:]:
        prod = prod @ f
    return complex(np.trace(prod))


def cyclic_shift_matrix(n: int, local_dim: int, cap: int = SHIFT_DIM_CAP) -> np.ndarray:
    """Explicit cyclic shift operator V_(n) on n factors of size local_dim.

    Basis action: |j1 j2 ... jn> -> |j2 ... jn j1>.  This direction is the
    one for which Tr(V (x)_i A_i) equals the left-to-right product trace
    Tr(A_1 ... A_n); the opposite rotation yields the reversed product.
    """
    if n < 1 or local_dim < 1:
        raise ValueError("n and local_dim must be positive")
    dim = local_dim**n
    if dim > cap:
        raise ValueError(f"shift operator dimension {dim} exceeds cap {cap}")
    block = local_dim ** (n - 1)
    src = np.arange(dim)
    dest = (src % block) * local_dim + src // block
    v = np.zeros((dim, dim), dtype=complex)
    v[dest, src] = 1.0
    return v


def _exact_parts(m: np.ndarray):
    """Entrywise exact rationals of a float matrix, symmetrized so the
    result is exactly Hermitian: re[i][j] = re[j][i], im[i][j] = -im[j][i]."""
    d = m.shape[0]
    re = [[Fraction(0)] * d for _ in range(d)]
    im = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            a = (Fraction(m[i, j].real) + Fraction(m[j, i].real)) / 2
            b = (Fraction(m[i, j].imag) - Fraction(m[j, i].imag)) / 2
            re[i][j] = re[j][i] = a
            im[i][j] = b
            im[j][i] = -b
    return re, im


def _exact_matmul(a, b):
    are, aim = a
    bre, bim = b
    d = len(are)
    cre = [[Fraction(0)] * d for _ in range(d)]
    cim = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for k in range(d):
            x, y = are[i][k], aim[i][k]
            if not x and not y:
                continue
            rr, ri = bre[k], bim[k]
            for j in range(d):
                cre[i][j] += x * rr[j] - y * ri[j]
                cim[i][j] += x * ri[j] + y * rr[j]
    return cre, cim


def exact_power_traces(m, n_max: int) -> list[Fraction]:
    """Tr(m^n) for n = 1..n_max in exact rational arithmetic.

    Entries of ``m`` are binary floats, hence exact rationals; the traces
    returned are the mathematically exact power traces of the (exactly
    symmetrized) stored matrix.  Needed where float64 accumulation would
    bury the signal carried by the high-order traces of a tightly
    clustered spectrum.
    """
    a = _exact_parts(require_hermitian(m))
    d = len(a[0])
    p = (([row[:] for row in a[0]]), ([row[:] for row in a[1]]))
    traces = [sum(p[0][i][i] for i in range(d))]
    for _ in range(2, n_max + 1):
        p = _exact_matmul(p, a)
        traces.append(sum(p[0][i][i] for i in range(d)))
    return traces


def exact_product_power_traces(a, b, n_max: int) -> list[Fraction]:
    """Re Tr((ab)^n) for n = 1..n_max, exactly, for Hermitian a and b.

    Both factors are exactly symmetrized first, which makes every trace of
    a power of ab an exactly real rational (trace equals its transpose's).
    This is the noise-free limit of the moment ladder: the product of the
    state with its spin flip is not Hermitian, but its power traces are.
    """
    ea = _exact_parts(require_hermitian(a))
    eb = _exact_parts(require_hermitian(b))
    ab = _exact_matmul(ea, eb)
    d = len(ab[0])
    p = (([row[:] for row in ab[0]]), ([row[:] for row in ab[1]]))
    traces = [sum(p[0][i][i] for i in range(d))]
    for _ in range(2, n_max + 1):
        p = _exact_matmul(p, ab)
        traces.append(sum(p[0][i][i] for i in range(d)))
    return traces
