"""Structural physical approximation of the partial transpose.

Mixing enough white noise into a positive-but-not-completely-positive map
yields a legitimate quantum channel.  For the partial transpose on a
d (x) d system the critical mixing weight has the closed form 1/(d^3 + 1),
which the Choi-positivity bisection here reproduces and which doubles as
the normative definition whenever no closed form is known (d != d').

The channel output spectrum is an affine image of the partial-transpose
spectrum, so measuring the output spectrum measures the PT spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import cyclic_trace, partial_transpose
from .measures import spin_flip
from .states import DensityMatrix

#: min Choi eigenvalue tolerated as "still positive semidefinite"
CHOI_PSD_TOL = 1e-10


def spa_shrink(d: int) -> float:
    """Signal attenuation 1/(d^3 + 1) of the partial-transpose SPA."""
    return 1.0 / (d**3 + 1.0)


def affine_map(pt_eigenvalue: float, d: int) -> float:
    """Channel-output eigenvalue produced by a PT eigenvalue."""
    return d / (d**3 + 1.0) + pt_eigenvalue / (d**3 + 1.0)


def inverse_affine(channel_eigenvalue: float, d: int) -> float:
    """Exact inverse of :func:`affine_map`."""
    return (d**3 + 1.0) * channel_eigenvalue - d


@dataclass(frozen=True)
class SpaChannel:
    """Descriptor of a white-noise structural approximation.

    noise_weight is the weight of the maximally mixed output and shrink the
    weight of the approximated map; for the built-in partial transpose on
    d (x) d these are d^3/(d^3+1) and 1/(d^3+1).
    """

    dims: tuple[int, int]
    noise_weight: float
    shrink: float
    map_tag: str = "partial-transpose-b"

    @classmethod
    def partial_transpose_channel(cls, d: int) -> "SpaChannel":
        s = spa_shrink(d)
        return cls(dims=(d, d), noise_weight=1.0 - s, shrink=s)

    def apply(self, state: DensityMatrix) -> DensityMatrix:
        if self.map_tag != "partial-transpose-b":
            raise ValueError(f"no apply rule for map {self.map_tag!r}")
        if state.dims != self.dims:
            raise ValueError(f"channel expects dims {self.dims}, state has {state.dims}")
        dim = state.dim
        pt = partial_transpose(state.matrix, state.dims, "B")
        out = self.noise_weight * np.eye(dim) / dim + self.shrink * pt
        return DensityMatrix(out, state.dims)


def apply_spa_pt(state: DensityMatrix) -> DensityMatrix:
    """Approximate partial transpose as a channel on a d (x) d state.

    Output = [d/(d^3+1)] I + [1/(d^3+1)] rho^T_B, a valid state whose
    spectrum is the affine image of the PT spectrum.
    """
    da, db = state.dims
    if da != db:
        raise ValueError(
            f"closed-form SPA needs equal local dimensions, got {state.dims}; "
            "use spa_threshold_by_choi for the general weight"
        )
    return SpaChannel.partial_transpose_channel(da).apply(state)


def choi_matrix(map_fn: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """Choi operator: apply the map to one half of the unnormalized
    maximally entangled projector on the doubled input space."""
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    basis = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            basis[i, j] = 1.0
            block = map_fn(basis.copy())
            out[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim] = block
            basis[i, j] = 0.0
    return out


def _builtin_map(tag: str, dims: tuple[int, int]) -> Callable[[np.ndarray], np.ndarray]:
    if tag == "partial-transpose-b":
        return lambda m: partial_transpose(m, dims, "B")
    if tag == "identity":
        return lambda m: m
    raise ValueError(f"unknown map tag {tag!r}")


def spa_threshold_by_choi(
    dims: tuple[int, int],
    target="partial-transpose-b",
    tol: float = 1e-8,
    psd_tol: float = CHOI_PSD_TOL,
) -> float:
    """Largest weight of the target map that keeps the mixture a channel.

    Bisects the mixing weight p of  (1-p) * white-noise + p * target  until
    the Choi matrix stops being PSD (min eigenvalue >= -psd_tol), to
    precision ``tol``.  For the partial transpose on d (x) d the result is
    1/(d^3 + 1); an already-CP target returns 1.
    """
    dim = dims[0] * dims[1]
    map_fn = _builtin_map(target, dims) if isinstance(target, str) else target
    choi_target = choi_matrix(map_fn, dim)
    choi_noise = np.eye(dim * dim, dtype=complex) / dim

    def psd_at(p: float) -> bool:
        choi = (1.0 - p) * choi_noise + p * choi_target
        return float(np.linalg.eigvalsh((choi + choi.conj().T) / 2)[0]) >= -psd_tol

    if psd_at(1.0):
        return 1.0
    lo, hi = 0.0, 1.0  # psd_at(lo) holds: pure white noise is a channel
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if psd_at(mid):
            lo = mid
        else:
            hi = mid
    return lo


class GroupChannelOutput:
    """Implicit value object for the k-th group channel output.

    The 2k-copy channel output equals

        [d_k/(d_k^3+1)] I + [1/(d_k^3+1)] (rho (x) rho~)^(x k),  d_k = 4^k,

    a matrix of dimension 16^k that is never materialized here (k = 4 would
    need ~68 GiB).  Every quantity the estimation pipeline consumes reduces
    through the shift-operator identity to traces of products of the two
    4 x 4 matrices rho and rho~.
    """

    def __init__(self, state: DensityMatrix, k: int):
        if state.dims != (2, 2):
            raise ValueError("group channels are defined on two-qubit input")
        if not 1 <= k <= 4:
            raise ValueError(f"group index must be 1..4, got {k}")
        self.rho = state.matrix
        self.rho_tilde = spin_flip(state)
        self.k = k
        self.d = 4**k
        self.copies = 2 * k
        self.shrink = 1.0 / (self.d**3 + 1.0)

    def trace(self) -> float:
        return 1.0

    def power_sum(self) -> float:
        """p_k = Tr((rho rho~)^k), the moment the group encodes."""
        return cyclic_trace([self.rho, self.rho_tilde] * self.k).real

    def shift_trace(self) -> float:
        """Re Tr(V_(2k) rho_k) without touching the 16^k space.

        The identity block contributes Tr(V) = 4 (constant basis strings of
        one four-level factor), the signal block contributes p_k.
        """
        return (4.0 * self.d + self.power_sum()) / (self.d**3 + 1.0)


def group_channel_output(state: DensityMatrix, k: int) -> GroupChannelOutput:
    return GroupChannelOutput(state, k)
