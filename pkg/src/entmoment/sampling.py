"""Finite-shot simulation of the binary-observable estimation runs.

The interferometric readout behind each collective observable is a
two-outcome measurement whose success probability encodes one parameter:

    p+ = (1 + Re Tr(V rho_k)) / 2.

Gate-level simulation of the multi-copy circuits would add cost without
coverage, so sampling happens at the statistics level: the exact Bernoulli
parameter is computed through the implicit channel representation and the
outcome counts are drawn from the corresponding binomial.  Everything is
reproducible from (state, config, seed); independent estimates use
independent seed streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import herm_eigenvalues, tensor
from .measures import ConcurrenceBreakdown, concurrence_breakdown
from .protocols import (
    MomentVector,
    exact_moment_fractions,
    SpectrumEstimate,
    _order_flags,
    concurrence_from_moments,
    moment_observable_spec,
    spectrum_from_channel_moments,
    spectrum_protocol,
)
from .spa import apply_spa_pt, group_channel_output
from .states import DensityMatrix, rng_stream

MODES = ("ideal", "sampled")


def _clamp01(p: float) -> float:
    """Guard Bernoulli parameters against float dust outside [0, 1]."""
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True)
class ShotRecord:
    """Outcome counts of one binary estimation run."""

    shots: int
    successes: int
    target_mean: float  # the exact Bernoulli parameter sampled from

    @property
    def estimate(self) -> float:
        return self.successes / self.shots


@dataclass(frozen=True)
class MomentSample:
    """One sampled moment: counts, derived estimate, copy accounting."""

    k: int
    record: ShotRecord
    p_plus: float
    shift_trace_estimate: float
    moment_estimate: float
    copies_consumed: int  # protocol copies: shots * 2k
    ancillas_consumed: int  # one readout ancilla per shot


def moment_success_probability(state: DensityMatrix, k: int) -> float:
    """Exact p+ for group k via the implicit channel output."""
    return (1.0 + group_channel_output(state, k).shift_trace()) / 2.0


def moment_standard_error(k: int, p_plus: float, shots: int) -> float:
    """Propagated shot-noise std of the moment estimate.

    The count fraction has std sqrt(p+ (1-p+) / N); the chain to the moment
    multiplies by 2 (the +-1 relabeling) and by the shrink amplification
    d_k^3 + 1.  The amplification makes high k impractical: at k = 4 one
    binary-outcome shot noise unit costs 2 * 16777217 moment units.
    """
    spec = moment_observable_spec(k)
    return 2.0 * spec.amplification * math.sqrt(p_plus * (1.0 - p_plus) / shots)


def sample_moment_povm(
    state: DensityMatrix, k: int, shots: int, rng: np.random.Generator
) -> MomentSample:
    """Draw one binomial run for group k and push it through the estimate chain."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    spec = moment_observable_spec(k)
    p_plus = moment_success_probability(state, k)
    successes = int(rng.binomial(shots, _clamp01(p_plus)))
    record = ShotRecord(shots=shots, successes=successes, target_mean=p_plus)
    shift_hat = 2.0 * record.estimate - 1.0
    moment_hat = spec.amplification * shift_hat - spec.offset
    return MomentSample(
        k=k,
        record=record,
        p_plus=p_plus,
        shift_trace_estimate=shift_hat,
        moment_estimate=moment_hat,
        copies_consumed=shots * spec.copies,
        ancillas_consumed=shots,
    )


@dataclass(frozen=True)
class EstimatorRun:
    """Full provenance of one concurrence-protocol run."""

    samples: tuple[MomentSample, ...] | None  # None in ideal mode
    moments: MomentVector
    breakdown: ConcurrenceBreakdown
    flags: tuple[str, ...]
    config: dict

    @property
    def copies_consumed(self) -> int:
        if self.samples is None:
            return 0
        return sum(s.copies_consumed for s in self.samples)


def run_concurrence_protocol(
    state: DensityMatrix,
    shots=10**6,
    seed: int = 0,
    mode: str = "sampled",
) -> EstimatorRun:
    """Estimate C and E_f from the four group observables.

    ideal mode plugs the exact success probabilities into the chain (shot
    noise off); sampled mode draws each moment from its binomial with an
    independent stream derived from the master seed by stream id = k.
    ``shots`` is uniform per moment by default; a 4-sequence allocates
    each group its own budget.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    per_group = [int(shots)] * 4 if np.isscalar(shots) else [int(s) for s in shots]
    if len(per_group) != 4:
        raise ValueError("shots must be a single count or one count per group")
    config = {"protocol": "concurrence-moments", "shots": per_group, "seed": seed, "mode": mode}
    if mode == "ideal":
        # noise-free limit: the expectation values themselves, held exactly
        # (float64 storage of the k = 3, 4 means already costs ~1e-9)
        fractions = exact_moment_fractions(state)
        p = tuple(float(x) for x in fractions)
        moments = MomentVector(p=p, provenance="spa-ideal", flags=_order_flags(p))
        samples = None
        breakdown, flags = concurrence_from_moments(fractions)
        flags = tuple(flags) + moments.flags
    else:
        samples = tuple(
            sample_moment_povm(state, k, per_group[k - 1], rng_stream(seed, stream=k))
            for k in (1, 2, 3, 4)
        )
        p = tuple(s.moment_estimate for s in samples)
        moments = MomentVector(p=p, provenance="spa-sampled", flags=_order_flags(p))
        breakdown, flags = concurrence_from_moments(moments)
    return EstimatorRun(
        samples=samples,
        moments=moments,
        breakdown=breakdown,
        flags=flags,
        config=config,
    )


@dataclass(frozen=True)
class SpectrumRun:
    """One run of the negativity pipeline."""

    samples: tuple[ShotRecord, ...] | None
    estimate: SpectrumEstimate
    flags: tuple[str, ...]
    config: dict


def run_spectrum_protocol(
    state: DensityMatrix,
    shots: int = 10**6,
    seed: int = 0,
    mode: str = "sampled",
) -> SpectrumRun:
    """Estimate the PT spectrum and E_c of a d (x) d state.

    Orders n = 2..D are estimated from binary runs with exact parameters
    p+(n) = (1 + Tr(sigma^n))/2 computed from the channel output spectrum;
    the trace itself is known, not measured.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    d = state.dims[0]
    config = {"protocol": "spectrum", "d": d, "shots": shots, "seed": seed, "mode": mode}
    if mode == "ideal":
        estimate = spectrum_protocol(state, exact=True)
        return SpectrumRun(samples=None, estimate=estimate, flags=estimate.flags, config=config)
    sigma = apply_spa_pt(state)
    lam = herm_eigenvalues(sigma.matrix)
    dim = sigma.dim
    records = []
    psums = [1.0]
    for n in range(2, dim + 1):
        p_plus = _clamp01((1.0 + float(np.sum(lam**n))) / 2.0)
        rng = rng_stream(seed, stream=n)
        successes = int(rng.binomial(shots, p_plus))
        record = ShotRecord(shots=shots, successes=successes, target_mean=p_plus)
        records.append(record)
        psums.append(2.0 * record.estimate - 1.0)
    estimate = spectrum_from_channel_moments(psums, d)
    return SpectrumRun(samples=tuple(records), estimate=estimate, flags=estimate.flags, config=config)


# ------------------------------------------------------------- tomography

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli_pairs() -> list[tuple[str, np.ndarray]]:
    """The 15 non-identity two-qubit Pauli products, II excluded."""
    out = []
    for a in "IXYZ":
        for b in "IXYZ":
            if a == b == "I":
                continue
            out.append((a + b, tensor(_PAULI[a], _PAULI[b])))
    return out


@dataclass(frozen=True)
class TomographyRun:
    """Linear-inversion reconstruction from 15 Pauli-pair expectations."""

    expectations: dict
    shots: int
    rho_hat: DensityMatrix
    breakdown: ConcurrenceBreakdown
    config: dict

    @property
    def copies_consumed(self) -> int:
        return 15 * self.shots


def run_tomography_baseline(
    state: DensityMatrix,
    shots: int = 10**4,
    seed: int = 0,
    mode: str = "sampled",
) -> TomographyRun:
    """Reconstruction baseline the collective protocols are compared against.

    Each Pauli pair has outcomes +-1; N outcomes are drawn per observable
    (one independent stream each), the state is rebuilt by linear inversion
    with the identity term fixed, then projected onto the PSD trace-one
    cone by clamping negative eigenvalues and renormalizing.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if state.dims != (2, 2):
        raise ValueError("the tomography baseline is two-qubit only")
    config = {"protocol": "tomography", "shots": shots, "seed": seed, "mode": mode}
    rho = state.matrix
    expectations = {}
    rebuilt = np.eye(4, dtype=complex)
    for idx, (label, op) in enumerate(pauli_pairs()):
        value = float(np.trace(rho @ op).real)
        if mode == "sampled":
            p_plus = _clamp01((1.0 + value) / 2.0)
            rng = rng_stream(seed, stream=idx)
            successes = int(rng.binomial(shots, p_plus))
            value = 2.0 * (successes / shots) - 1.0
        expectations[label] = value
        rebuilt = rebuilt + value * op
    rebuilt /= 4.0
    w, v = np.linalg.eigh((rebuilt + rebuilt.conj().T) / 2.0)
    w = np.clip(w, 0.0, None)
    w /= np.sum(w)
    rho_hat = DensityMatrix((v * w) @ v.conj().T, (2, 2))
    return TomographyRun(
        expectations=expectations,
        shots=shots,
        rho_hat=rho_hat,
        breakdown=concurrence_breakdown(rho_hat),
        config=config,
    )
