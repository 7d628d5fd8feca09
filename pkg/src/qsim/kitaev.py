"""Order finding by measuring eigenvalues of the multiplication operator.

The unitary U|m> = |m*y mod N> on a dimension-N register has eigenvalues
exp(-2j*pi*k/r) where r is the order of y, with eigenstates supported on
the orbit of 1; the innocent basis state |1> is the uniform eigenstate
mixture, so estimating one eigenphase of U on |1> reveals a random k/r.
No Fourier transform of size ~N^2 is needed, only a controlled-U and
one-qubit interference.

Conventions.  PROC produces a 0-bit with probability (1+cos(2*pi*phi))/2
for eigenvalue exp(2j*pi*phi); for the multiplication operator we define
phi = (-k/r) mod 1 at this boundary.  The cosine alone cannot separate
phi from 1-phi (both quadratures of the same interference pattern), so
each estimation stage also runs PROC with a quarter-turn phase shift on
the control, giving (1+sin(2*pi*phi))/2; together they pin the angle.

Simulation strategy.  After any number of PROC rounds the joint state is
block diagonal over eigenvalues, so reusing the X register is
distributionally identical to collapsing onto one eigenstate first and
then drawing i.i.d. control bits.  For the multiplication operator the
eigenstructure is exact (cycles of the permutation), and estimate_phase
uses that collapse-first shortcut; the full entangled-register
simulation is kept as the validating oracle and as the fallback for
black-box unitaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceededError, ReconciliationError
from .numtheory import best_rational, modpow, order_from_multiple
from .simulator import (
    StateVector,
    apply_permutation,
    init_basis,
    make_layout,
    measure_register,
    probabilities,
)
from .fourier import hadamard_n


@dataclass(frozen=True)
class MultUnitary:
    """U|m> = |m*y mod N>, a permutation of Z_N fixing |0>."""

    y: int
    N: int

    def permutation(self) -> np.ndarray:
        return (np.arange(self.N) * self.y) % self.N

    @property
    def dim(self) -> int:
        return self.N


def mult_unitary(y: int, N: int) -> MultUnitary:
    """Validated multiplication-by-y operator (2 <= y < N, coprime)."""
    if not 2 <= y < N:
        raise ValueError("need 2 <= y < N")
    if math.gcd(y, N) != 1:
        raise ValueError(f"{y} is not coprime to {N}; multiplication is not a permutation")
    return MultUnitary(y=y, N=N)


def mult_power_oracle(u: MultUnitary) -> Callable[[int], MultUnitary]:
    """j -> U^(2^j), realized as multiplication by y^(2^j) via repeated squaring."""
    powers = [u.y % u.N]

    def oracle(j: int) -> MultUnitary:
        while len(powers) <= j:
            powers.append((powers[-1] * powers[-1]) % u.N)
        return MultUnitary(y=powers[j], N=u.N)

    return oracle


def matrix_power_oracle(matrix: np.ndarray) -> Callable[[int], np.ndarray]:
    """Power oracle for a dense unitary, by j repeated matrix squarings."""
    powers = [np.asarray(matrix, dtype=np.complex128)]

    def oracle(j: int) -> np.ndarray:
        while len(powers) <= j:
            powers.append(powers[-1] @ powers[-1])
        return powers[j]

    return oracle


def eigenstate_lambda_k(y: int, N: int, r: int, k: int) -> StateVector:
    """|lambda_k> = r**-0.5 sum_l exp(2j*pi*l*k/r) |y^l mod N>.

    Satisfies U|lambda_k> = exp(-2j*pi*k/r)|lambda_k>; summing all of
    them with weight r**-0.5 reconstructs the plain basis state |1>.
    """
    if math.gcd(y, N) != 1:
        raise ValueError(f"{y} is not coprime to {N}")
    if r < 1 or modpow(y, r, N) != 1 or any(modpow(y, d, N) == 1 for d in range(1, r)):
        raise ValueError(f"{r} is not the order of {y} mod {N}")
    if not 0 <= k < r:
        raise ValueError("need 0 <= k < r")
    amps = np.zeros(N, dtype=np.complex128)
    label = 1 % N
    for l in range(r):
        amps[label] += np.exp(2j * np.pi * ((l * k) % r) / r)
        label = (label * y) % N
    return StateVector(make_layout((N,)), amps / np.sqrt(r))


# --- controlled-U ----------------------------------------------------------------


def _fixes_zero(u: MultUnitary | np.ndarray) -> bool:
    if isinstance(u, MultUnitary):
        return True  # 0*y mod N = 0
    matrix = np.asarray(u)
    target = np.zeros(matrix.shape[0])
    target[0] = 1.0
    return bool(np.allclose(matrix[:, 0], target, atol=1e-12))


def _u_dim(u: MultUnitary | np.ndarray) -> int:
    return u.dim if isinstance(u, MultUnitary) else np.asarray(u).shape[0]


def _apply_u(state: StateVector, reg: int, u: MultUnitary | np.ndarray) -> StateVector:
    if isinstance(u, MultUnitary):
        return apply_permutation(state, (reg,), u.permutation())
    matrix = np.asarray(u, dtype=np.complex128)
    moved = np.moveaxis(state.tensor(), reg, -1)
    out = moved @ matrix.T
    return StateVector(state.layout, np.moveaxis(out, -1, reg).reshape(-1))


def apply_controlled_u(
    state: StateVector, c_reg: int, x_reg: int, u: MultUnitary | np.ndarray
) -> StateVector:
    """Directly built Lambda(U): |0>|x> -> |0>|x>, |1>|x> -> |1>U|x>."""
    d = _u_dim(u)
    if isinstance(u, MultUnitary):
        x = np.arange(d)
        image = np.concatenate([x, d + u.permutation()])
        return apply_permutation(state, (c_reg, x_reg), image)
    tens = state.tensor().copy()
    moved = np.moveaxis(tens, (c_reg, x_reg), (0, -1))
    moved[1] = moved[1] @ np.asarray(u, dtype=np.complex128).T
    return StateVector(state.layout, np.moveaxis(moved, (0, -1), (c_reg, x_reg)).reshape(-1))


@dataclass(frozen=True)
class ControlledUGadget:
    """Lambda(U) built from controlled register additions and one bare U.

    The sequence (negate C; add X into Y; subtract Y from X; U on X;
    add Y into X; subtract X from Y; negate C), with every add/subtract
    controlled on C, swaps X into the |0...0>-initialized ancilla Y
    exactly when the original control is |0>, so the unconditional U
    only ever acts on |0...0>, which it fixes.  On power-of-two
    dimensions the additions are bitwise XOR (self-inverse, so add and
    subtract coincide); otherwise they are mod-d register additions.
    """

    u: MultUnitary | np.ndarray

    @property
    def dim(self) -> int:
        return _u_dim(self.u)

    def _pair_images(self) -> list[np.ndarray]:
        d = self.dim
        use_xor = d & (d - 1) == 0
        c = np.arange(2)[:, None, None]
        x = np.arange(d)[None, :, None]
        y = np.arange(d)[None, None, :]

        def img(new_x, new_y):
            return ((c * d + new_x) * d + new_y).reshape(-1)

        if use_xor:
            add_xy = img(x + 0 * y, np.where(c == 1, x ^ y, y))
            sub_yx = img(np.where(c == 1, x ^ y, x), y + 0 * x)
            add_yx = sub_yx
            sub_xy = add_xy
        else:
            add_xy = img(x + 0 * y, np.where(c == 1, (y + x) % d, y))
            sub_yx = img(np.where(c == 1, (x - y) % d, x), y + 0 * x)
            add_yx = img(np.where(c == 1, (x + y) % d, x), y + 0 * x)
            sub_xy = img(x + 0 * y, np.where(c == 1, (y - x) % d, y))
        return [add_xy, sub_yx, add_yx, sub_xy]

    def apply(self, state: StateVector, c_reg: int, x_reg: int, y_reg: int) -> StateVector:
        dims = state.layout.dims
        d = self.dim
        if dims[c_reg] != 2 or dims[x_reg] != d or dims[y_reg] != d:
            raise ValueError("gadget registers must have dimensions (2, d, d)")
        negate = np.array([1, 0])
        add_xy, sub_yx, add_yx, sub_xy = self._pair_images()
        regs = (c_reg, x_reg, y_reg)
        s = apply_permutation(state, (c_reg,), negate)
        s = apply_permutation(s, regs, add_xy)
        s = apply_permutation(s, regs, sub_yx)
        s = _apply_u(s, x_reg, self.u)
        s = apply_permutation(s, regs, add_yx)
        s = apply_permutation(s, regs, sub_xy)
        return apply_permutation(s, (c_reg,), negate)


def controlled_u_gadget(u: MultUnitary | np.ndarray) -> ControlledUGadget:
    """Build the ancilla-based Lambda(U); requires U|0...0> = |0...0>."""
    if not _fixes_zero(u):
        raise ValueError("gadget construction needs U to fix |0...0>")
    return ControlledUGadget(u=u)


# --- PROC and eigenphase estimation ------------------------------------------------


def make_proc_state(x_state: StateVector) -> StateVector:
    """|0>_C tensor x, the layout PROC operates on."""
    if len(x_state.layout.dims) != 1:
        raise ValueError("x register state must be a single-register state")
    d = x_state.layout.dims[0]
    amps = np.zeros(2 * d, dtype=np.complex128)
    amps[:d] = x_state.amps
    return StateVector(make_layout((2, d)), amps)


def proc_once(
    u: MultUnitary | np.ndarray,
    state: StateVector,
    rng: np.random.Generator,
    quadrature: str = "cos",
) -> tuple[int, StateVector]:
    """One PROC round: H on C, Lambda(U), H on C, measure C.

    On an eigenstate with eigenvalue exp(2j*pi*phi) the control reads 0
    with probability (1+cos(2*pi*phi))/2.  quadrature="sin" inserts a
    quarter-turn phase on the control before the final H, turning the
    cosine into a sine.  The control is re-zeroed after readout (a fresh
    control qubit), so the returned state is ready for the next round;
    the X register is never corrupted.
    """
    if quadrature not in ("cos", "sin"):
        raise ValueError("quadrature must be 'cos' or 'sin'")
    if state.layout.dims[0] != 2 or len(state.layout.dims) != 2:
        raise ValueError("PROC state must have layout (2, d)")
    if state.layout.dims[1] != _u_dim(u):
        raise ValueError("X register dimension does not match U")
    s = hadamard_n(state, 0)
    s = apply_controlled_u(s, 0, 1, u)
    if quadrature == "sin":
        amps = s.amps.copy()
        d = state.layout.dims[1]
        amps[d:] *= -1j
        s = StateVector(s.layout, amps)
    s = hadamard_n(s, 0)
    outcome, s = measure_register(s, 0, rng)
    if outcome.value == 1:
        s = apply_permutation(s, (0,), np.array([1, 0]))
    return outcome.value, s


def estimate_p0(
    u: MultUnitary | np.ndarray,
    eigenstate: StateVector,
    t: int,
    rng: np.random.Generator,
) -> float:
    """Run PROC t times reusing the X register; return the fraction of 0s."""
    if t < 1:
        raise ValueError("t must be >= 1")
    state = make_proc_state(eigenstate)
    zeros = 0
    for _ in range(t):
        bit, state = proc_once(u, state, rng)
        zeros += 1 - bit
    return zeros / t


def eigenphase_distribution(
    u: MultUnitary, x_state: StateVector
) -> list[tuple[float, Fraction]]:
    """Exact spectral weights of a state: [(|a|^2, phi)] with lambda = exp(2j*pi*phi).

    The permutation splits into cycles; each length-L cycle carries the
    L eigenphases (-k/L mod 1) with eigenvector amplitudes given by the
    cycle's size-L discrete Fourier coefficients.
    """
    if x_state.layout.dims != (u.N,):
        raise ValueError("state dimension does not match U")
    perm = u.permutation()
    amps = x_state.amps
    seen = np.zeros(u.N, dtype=bool)
    out: list[tuple[float, Fraction]] = []
    for start in range(u.N):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        cur = int(perm[start])
        while cur != start:
            cycle.append(cur)
            seen[cur] = True
            cur = int(perm[cur])
        s = amps[cycle]
        if np.max(np.abs(s)) < 1e-15:
            continue
        length = len(cycle)
        l_idx = np.arange(length)
        w = np.exp(-2j * np.pi * np.outer(l_idx, l_idx) / length)
        coeffs = (w.T @ s) / np.sqrt(length)
        for k in range(length):
            prob = float(np.abs(coeffs[k]) ** 2)
            if prob > 1e-15:
                out.append((prob, Fraction((length - k) % length, length)))
    return out


def sample_eigenphase(
    u: MultUnitary, x_state: StateVector, rng: np.random.Generator
) -> Fraction:
    """Collapse the input onto one eigenvalue, sampled by spectral weight."""
    dist = eigenphase_distribution(u, x_state)
    probs = np.array([p for p, _ in dist])
    idx = int(rng.choice(len(dist), p=probs / probs.sum()))
    return dist[idx][1]


@dataclass(frozen=True)
class StageRecord:
    j: int
    t: int
    y_count: int
    p0_hat: float
    sin_y_count: int
    sin_p0_hat: float
    bits: tuple[int, int]


@dataclass(frozen=True)
class PhaseEstimate:
    """A dyadic estimate numerator/denominator of phi with its bit readout."""

    bits: tuple[int, ...]
    per_stage_p0: tuple[float, ...]
    error_budget: float
    numerator: int
    denominator: int
    stages: tuple[StageRecord, ...]
    queries: int


def stage_sample_count(l: int, epsilon: float) -> int:
    """Per-quadrature PROC repetitions per stage, from the sampling tail bound.

    Solves (2/sqrt(2*pi)) * exp(-delta^2 t / (2 p0 p1)) = epsilon/(2l)
    at delta = 1/8 with the conservative p0 p1 <= 1/4, then rounds up to
    a power of two.  Doubling the precision (halving delta) would
    quadruple t; the stage ladder sidesteps that by re-targeting
    2^j * phi instead.
    """
    if l < 1 or not 0 < epsilon < 1:
        raise ValueError("need l >= 1 and 0 < epsilon < 1")
    delta = 1 / 8
    per_quadrature = epsilon / (2 * l)
    raw = math.log((2 / math.sqrt(2 * math.pi)) / per_quadrature) / (2 * delta**2)
    t = 1
    while t < raw:
        t *= 2
    return t


def _circular_distance(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def _stitch_bits(theta_hats: Sequence[float], l: int) -> Fraction:
    """Combine per-stage angle estimates into one dyadic phase.

    Builds the estimate from the least significant end: the last stage
    fixes the tail to the nearest 1/8, and each earlier stage chooses
    the bit b for which (alpha + b)/2 stays consistent with its own
    angle, halving the inherited error per step.  When every stage meets
    its 1/8 target the chosen candidate is within ~0.12 turns, so a
    best distance beyond 3/16 means some stage missed its precision and
    the stitch reports failure instead of guessing.
    """
    alpha = Fraction(round(theta_hats[l - 1] * 8) % 8, 8)
    for j in range(l - 2, -1, -1):
        candidates = (alpha / 2, alpha / 2 + Fraction(1, 2))
        dists = [_circular_distance(float(c), theta_hats[j]) for c in candidates]
        pick = int(dists[1] < dists[0])
        if dists[pick] > 3 / 16:
            raise ReconciliationError(
                f"stage {j} estimate {theta_hats[j]:.4f} matches neither bit candidate"
            )
        alpha = candidates[pick]
    return alpha


def estimate_phase(
    power_oracle: Callable[[int], MultUnitary | np.ndarray],
    input_state: StateVector,
    l: int,
    epsilon: float,
    rng: np.random.Generator,
    t: int | None = None,
) -> PhaseEstimate:
    """Estimate l bits of phi with total failure probability <= epsilon.

    Stage j measures both quadratures of 2^j * phi mod 1 (eigenphase of
    U^(2^j)) to precision 1/8, contributing bits j and j+1; stages are
    stitched least-significant-first.  On a superposition input the
    state collapses once, and every stage reports that same eigenvalue.

    For MultUnitary oracles the sampling uses the exact collapse-first
    shortcut; black-box unitaries fall back to running PROC on the full
    register state, reusing the X register throughout.
    """
    if l < 1:
        raise ValueError("need at least one stage")
    if t is None:
        t = stage_sample_count(l, epsilon)
    base = power_oracle(0)
    stage_counts: list[tuple[int, int]] = []
    if isinstance(base, MultUnitary):
        phi = sample_eigenphase(base, input_state, rng)
        for j in range(l):
            theta = Fraction((phi.numerator << j) % phi.denominator, phi.denominator)
            p_cos = min(1.0, max(0.0, (1 + math.cos(2 * math.pi * theta)) / 2))
            p_sin = min(1.0, max(0.0, (1 + math.sin(2 * math.pi * theta)) / 2))
            stage_counts.append((int(rng.binomial(t, p_cos)), int(rng.binomial(t, p_sin))))
    else:
        state = make_proc_state(input_state)
        for j in range(l):
            u_j = power_oracle(j)
            cos_zeros = 0
            for _ in range(t):
                bit, state = proc_once(u_j, state, rng, "cos")
                cos_zeros += 1 - bit
            sin_zeros = 0
            for _ in range(t):
                bit, state = proc_once(u_j, state, rng, "sin")
                sin_zeros += 1 - bit
            stage_counts.append((cos_zeros, sin_zeros))

    theta_hats = []
    for cos_zeros, sin_zeros in stage_counts:
        cos_est = 2 * (cos_zeros / t) - 1
        sin_est = 2 * (sin_zeros / t) - 1
        theta_hats.append(math.atan2(sin_est, cos_est) / (2 * math.pi) % 1.0)

    alpha = _stitch_bits(theta_hats, l)
    denominator = 1 << (l + 2)
    numerator = int(alpha * denominator)
    bits_ext = tuple((numerator >> (l + 2 - 1 - i)) & 1 for i in range(l + 2))
    stages = tuple(
        StageRecord(
            j=j,
            t=t,
            y_count=stage_counts[j][0],
            p0_hat=stage_counts[j][0] / t,
            sin_y_count=stage_counts[j][1],
            sin_p0_hat=stage_counts[j][1] / t,
            bits=(bits_ext[j], bits_ext[j + 1]),
        )
        for j in range(l)
    )
    return PhaseEstimate(
        bits=bits_ext[:l],
        per_stage_p0=tuple(s.p0_hat for s in stages),
        error_budget=epsilon,
        numerator=numerator,
        denominator=denominator,
        stages=stages,
        queries=2 * t * l,
    )


# --- order finding ------------------------------------------------------------------


@dataclass
class KitaevRun:
    """Record of one eigenvalue-measurement order-finding run."""

    N: int
    y: int
    l: int
    epsilon: float
    attempts: int = 0
    queries: int = 0
    estimate: PhaseEstimate | None = None
    recovered_r: int | None = None


def default_precision_bits(N: int) -> int:
    """1 + ceil(log2 N) bits: enough to pin k/r exactly since r < N."""
    return 1 + math.ceil(math.log2(N))


def kitaev_order_run(
    y: int,
    N: int,
    rng: np.random.Generator,
    l: int | None = None,
    epsilon: float = 0.05,
    max_attempts: int = 32,
) -> KitaevRun:
    """Phase-estimate U on |1>, round to k/r by continued fractions, verify.

    A zero estimate carries no denominator information (the collapsed
    k was 0), so it is retried like a verification failure.  A phase
    reconciliation failure doubles the per-stage sample count.  The
    verified candidate is reduced to the exact order before returning.
    """
    if math.gcd(y, N) != 1:
        raise ValueError(f"{y} is not coprime to {N}")
    y %= N
    if l is None:
        l = default_precision_bits(N)
    run = KitaevRun(N=N, y=y, l=l, epsilon=epsilon)
    if y == 1:
        # Multiplication by 1 is the identity; its order is 1 outright and
        # the gadget precondition 2 <= y does not apply.
        run.recovered_r = 1
        return run
    oracle = mult_power_oracle(mult_unitary(y, N))
    x_state = init_basis(make_layout((N,)), (1,))
    t = stage_sample_count(l, epsilon)
    for attempt in range(max_attempts):
        run.attempts = attempt + 1
        try:
            estimate = estimate_phase(oracle, x_state, l, epsilon, rng, t=t)
        except ReconciliationError:
            t *= 2
            continue
        run.queries += estimate.queries
        run.estimate = estimate
        conv = best_rational(estimate.numerator, estimate.denominator, N)
        if conv.numerator == 0:
            continue
        candidate = conv.denominator
        if modpow(y, candidate, N) == 1:
            run.recovered_r = order_from_multiple(y, N, candidate)
            return run
    return run


def kitaev_order(
    y: int,
    N: int,
    rng: np.random.Generator,
    l: int | None = None,
    epsilon: float = 0.05,
    max_attempts: int = 32,
) -> int:
    run = kitaev_order_run(y, N, rng, l=l, epsilon=epsilon, max_attempts=max_attempts)
    if run.recovered_r is None:
        raise BudgetExceededError(f"no verified order within {max_attempts} attempts")
    return run.recovered_r


# --- validating oracles for the collapse-first shortcut ------------------------------


def proc_joint_distribution_full(
    u: MultUnitary | np.ndarray, x_state: StateVector, t: int
) -> np.ndarray:
    """Exact joint distribution of t control bits, all PROCs before any readout.

    Simulates t control qubits entangled with the X register and only
    then marginalizes; nothing collapses early.
    """
    d = _u_dim(u)
    if x_state.layout.dims != (d,):
        raise ValueError("state dimension does not match U")
    layout = make_layout((2,) * t + (d,))
    amps = np.zeros(layout.size, dtype=np.complex128)
    amps[:d] = x_state.amps  # all controls |0>
    state = StateVector(layout, amps)
    for i in range(t):
        state = hadamard_n(state, i)
        state = apply_controlled_u(state, i, t, u)
        state = hadamard_n(state, i)
    probs = np.abs(state.amps.reshape(1 << t, d)) ** 2
    return probs.sum(axis=1)


def proc_joint_distribution_collapsed(
    u: MultUnitary, x_state: StateVector, t: int
) -> np.ndarray:
    """The shortcut's prediction: mix i.i.d. bit strings over eigenvalues."""
    out = np.zeros(1 << t)
    for prob, phi in eigenphase_distribution(u, x_state):
        p0 = (1 + math.cos(2 * math.pi * phi)) / 2
        joint = np.array([1.0])
        for _ in range(t):
            joint = np.kron(joint, np.array([p0, 1 - p0]))
        out += prob * joint
    return out
