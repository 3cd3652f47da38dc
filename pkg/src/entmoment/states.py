"""Bipartite density matrices: construction, validation, serialization, RNG.

State families used throughout the test and simulation pipelines:

- ``bell``          maximally entangled (|00> + |11>)/sqrt(2) projector
- ``werner``        p |Phi+><Phi+| + (1-p) I/4 on two qubits
- ``isotropic``     same mixture with the d-dimensional |Phi+> on d (x) d
- ``product-pure``  |a><a| (x) |b><b| with Haar-random local kets
- ``random-pure``   projector onto a normalized complex Gaussian vector
- ``random-mixed``  G G^dagger / Tr(G G^dagger), square complex Gaussian G
                    (the Hilbert-Schmidt ensemble)
- ``explicit``      caller-supplied matrix
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import as_complex_matrix, hermiticity_defect

HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
EIGENVALUE_TOL = 1e-9

FAMILIES = (
    "bell",
    "werner",
    "isotropic",
    "product-pure",
    "random-pure",
    "random-mixed",
    "explicit",
)


def rng_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Deterministic generator for (seed, stream).

    Identical pairs give identical draw sequences; distinct stream ids give
    statistically independent streams, which is how parallel estimators and
    per-moment samplers stay reproducible under partial re-runs.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


@dataclass(frozen=True)
class StateDiagnostics:
    """Residuals of the three density-matrix invariants."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def violations(self) -> tuple[str, ...]:
        out = []
        if self.hermiticity_defect > HERMITICITY_TOL:
            out.append("hermiticity")
        if self.trace_defect > TRACE_TOL:
            out.append("trace")
        if self.min_eigenvalue < -EIGENVALUE_TOL:
            out.append("positivity")
        return tuple(out)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_state(matrix) -> StateDiagnostics:
    """Report hermiticity defect, trace defect and minimum eigenvalue."""
    m = as_complex_matrix(matrix)
    herm = hermiticity_defect(m)
    trace = float(abs(np.trace(m) - 1.0))
    sym = (m + m.conj().T) / 2.0
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    return StateDiagnostics(herm, trace, min_eig)


@dataclass(frozen=True)
class DensityMatrix:
    """A bipartite quantum state: complex matrix plus (dimA, dimB) split."""

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = as_complex_matrix(self.matrix)
        da, db = int(self.dims[0]), int(self.dims[1])
        if da < 1 or db < 1 or da * db != m.shape[0]:
            raise ValueError(f"dims {self.dims} incompatible with matrix dimension {m.shape[0]}")
        diag = validate_state(m)
        if not diag.ok:
            raise ValueError(f"not a density matrix: {', '.join(diag.violations)} violated ({diag})")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", (da, db))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def diagnostics(self) -> StateDiagnostics:
        return validate_state(self.matrix)


def _ket_projector(psi: np.ndarray) -> np.ndarray:
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def max_entangled_ket(d: int) -> np.ndarray:
    """(|00> + |11> + ... )/sqrt(d) on a d (x) d space."""
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return psi


def bell_state() -> DensityMatrix:
    return DensityMatrix(_ket_projector(max_entangled_ket(2)), (2, 2))


def werner_state(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1-p) I/4; entangled iff p > 1/3."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"werner weight must lie in [0, 1], got {p}")
    m = p * _ket_projector(max_entangled_ket(2)) + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(m, (2, 2))


def isotropic_state(d: int, p: float) -> DensityMatrix:
    """p |Phi+_d><Phi+_d| + (1-p) I/d^2 on d (x) d."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"isotropic weight must lie in [0, 1], got {p}")
    m = p * _ket_projector(max_entangled_ket(d)) + (1.0 - p) * np.eye(d * d) / (d * d)
    return DensityMatrix(m, (d, d))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_pure_state(dims: tuple[int, int], rng: np.random.Generator) -> DensityMatrix:
    d = dims[0] * dims[1]
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return DensityMatrix(_ket_projector(psi), dims)


def random_mixed_state(dims: tuple[int, int], rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt ensemble: normalized G G^dagger with square Ginibre G."""
    d = dims[0] * dims[1]
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dims)


def product_pure_state(dims: tuple[int, int], rng: np.random.Generator) -> DensityMatrix:
    kets = []
    for d in dims:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        kets.append(v / np.linalg.norm(v))
    return DensityMatrix(_ket_projector(np.kron(kets[0], kets[1])), dims)


def make_state(
    family: str,
    dims: tuple[int, int] = (2, 2),
    p: float | None = None,
    rng: np.random.Generator | None = None,
    matrix=None,
) -> DensityMatrix:
    """Dispatch constructor over the named state families."""
    if family == "bell":
        return bell_state()
    if family == "werner":
        if p is None:
            raise ValueError("werner family needs the mixing weight p")
        return werner_state(p)
    if family == "isotropic":
        if p is None:
            raise ValueError("isotropic family needs the mixing weight p")
        if dims[0] != dims[1]:
            raise ValueError("isotropic states need equal local dimensions")
        return isotropic_state(dims[0], p)
    if family in ("product-pure", "random-pure", "random-mixed"):
        if rng is None:
            raise ValueError(f"{family} family needs an rng")
        fn = {
            "product-pure": product_pure_state,
            "random-pure": random_pure_state,
            "random-mixed": random_mixed_state,
        }[family]
        return fn(dims, rng)
    if family == "explicit":
        if matrix is None:
            raise ValueError("explicit family needs a matrix")
        return DensityMatrix(matrix, dims)
    raise ValueError(f"unknown state family {family!r}; known: {', '.join(FAMILIES)}")


# ----------------------------------------------------------------- file format

def state_to_json(state: DensityMatrix) -> str:
    """Portable text record: {"dims": [dA, dB], "re": grid, "im": grid}.

    Floats are emitted with shortest round-trip repr, so the record is
    lossless at binary64 precision.
    """
    m = state.matrix
    payload = {
        "dims": [state.dims[0], state.dims[1]],
        "re": [[float(x) for x in row] for row in m.real],
        "im": [[float(x) for x in row] for row in m.imag],
    }
    return json.dumps(payload)


def _parse_grid(raw, name: str, dim: int) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != dim:
        raise ValueError(f"state record: '{name}' must be a {dim}-row grid")
    rows = []
    for row in raw:
        if not isinstance(row, list) or len(row) != dim:
            raise ValueError(f"state record: '{name}' grid is not rectangular {dim}x{dim}")
        rows.append([float(x) for x in row])
    return np.array(rows, dtype=float)


def state_from_json(text: str) -> DensityMatrix:
    """Parse a state record; rejects malformed shapes and invalid states."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"state record is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError("state record must be a JSON object")
    for key in ("dims", "re", "im"):
        if key not in payload:
            raise ValueError(f"state record is missing '{key}'")
    dims = payload["dims"]
    if not isinstance(dims, list) or len(dims) != 2:
        raise ValueError("state record: 'dims' must be [dimA, dimB]")
    da, db = int(dims[0]), int(dims[1])
    dim = da * db
    re = _parse_grid(payload["re"], "re", dim)
    im = _parse_grid(payload["im"], "im", dim)
    matrix = re + 1j * im
    diag = validate_state(matrix)
    if not diag.ok:
        raise ValueError(
            f"parsed matrix violates state invariants ({', '.join(diag.violations)}): {diag}"
        )
    return DensityMatrix(matrix, (da, db))
