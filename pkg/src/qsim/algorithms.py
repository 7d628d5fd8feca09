"""Oracle-decision and period-finding algorithms, end to end.

Bit-string functions are handled through integer labels: the label of a
bit string is its mixed-radix index, i.e. ordinary binary with the first
bit most significant.  The dot product x.y is the parity of the AND of
the labels, which does not depend on bit order.

Each algorithm comes in two layers where that helps testing: a builder
that returns the exact pre-measurement state (so tests can assert on
amplitudes) and a driver that samples, post-processes, and returns the
answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError
from .groups import GroupSpec, TruthTable, make_group
from .numtheory import Convergent, best_rational, gcd, modpow, order_from_multiple
from .simulator import (
    StateVector,
    apply_oracle_modadd,
    apply_oracle_xor,
    init_basis,
    make_layout,
    measure_register,
    probabilities,
)
from .fourier import dft_q, hadamard_n

# --- bit-string plumbing -------------------------------------------------------


def bn_group(n: int) -> GroupSpec:
    """The group of n-bit strings under XOR."""
    return make_group((2,) * n)


def bits_to_label(bits: str) -> int:
    """'0110' -> 6; first character is the most significant bit."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a bit string: {bits!r}")
    return int(bits, 2)


def label_to_bits(label: int, n: int) -> str:
    if not 0 <= label < (1 << n):
        raise ValueError(f"label {label} out of range for {n} bits")
    return format(label, f"0{n}b")


def dot_mod2(a: int, b: int) -> int:
    """Parity of the AND of two bit-string labels."""
    return (a & b).bit_count() & 1


def constant_table(n: int, value: int) -> TruthTable:
    if value not in (0, 1):
        raise ValueError("constant value must be a bit")
    return TruthTable(bn_group(n), (value,) * (1 << n))


def random_balanced_table(n: int, rng: np.random.Generator) -> TruthTable:
    """A uniformly random f: B^n -> B taking each value 2^{n-1} times."""
    size = 1 << n
    values = np.zeros(size, dtype=int)
    ones = rng.choice(size, size=size // 2, replace=False)
    values[ones] = 1
    return TruthTable(bn_group(n), tuple(int(v) for v in values))


def linear_fk_table(n: int, k: int) -> TruthTable:
    """f_k(x) = k.x, the Fourier basis functions on bit strings."""
    return TruthTable(bn_group(n), tuple(dot_mod2(k, x) for x in range(1 << n)))


# --- Deutsch's XOR problem and its promise generalization ----------------------


@dataclass(frozen=True)
class DeutschVerdict:
    outcome: str  # "constant" | "balanced" | "inconclusive"
    queries_used: int


def deutsch_xor_state(table: TruthTable) -> StateVector:
    """State of the original one-query XOR circuit, just before readout.

    Register 0 carries the query superposition, register 1 the function
    value; register 1 has already been rotated so that a standard
    measurement reads the dual basis (outcome 0 means 0').
    """
    state = init_basis(make_layout((2, 2)), (0, 0))
    state = hadamard_n(state, 0)
    state = apply_oracle_xor(state, table, 0, 1)
    return hadamard_n(state, 1)


def deutsch_xor_original(table: TruthTable, rng: np.random.Generator) -> DeutschVerdict:
    """One oracle query; succeeds with probability exactly 1/2.

    Reads the function qubit in the dual basis.  Outcome 0' erases all
    information about f (inconclusive); outcome 1' makes the dual-basis
    readout of the query qubit a certain constant/balanced decision.
    """
    state = deutsch_xor_state(table)
    out, state = measure_register(state, 1, rng)
    if out.value == 0:
        return DeutschVerdict("inconclusive", 1)
    state = hadamard_n(state, 0)
    out, _ = measure_register(state, 0, rng)
    return DeutschVerdict("constant" if out.value == 0 else "balanced", 1)


def deutsch_jozsa_state(table: TruthTable, n: int) -> StateVector:
    """Pre-measurement state of the improved one-query circuit.

    The output register is set to (|0>-|1>)/sqrt(2) before the single
    oracle call, which kicks (-1)^{f(x)} onto the query register; the
    final Walsh-Hadamard pass maps a constant f exactly to |0...0>.
    """
    if table.group.order != (1 << n):
        raise ValueError("table does not match n")
    state = init_basis(make_layout((1 << n, 2)), (0, 1))
    state = hadamard_n(state, 1)
    state = hadamard_n(state, 0)
    state = apply_oracle_xor(state, table, 0, 1)
    return hadamard_n(state, 0)


def deutsch_jozsa(table: TruthTable, n: int) -> DeutschVerdict:
    """Decide constant vs balanced with certainty from one oracle query.

    Under the promise the probability of reading 0...0 is exactly 1
    (constant) or exactly 0 (balanced), so the verdict needs no
    sampling at all.
    """
    zeros = probabilities(deutsch_jozsa_state(table, n), 0)[0]
    return DeutschVerdict("constant" if zeros > 0.5 else "balanced", 1)


def identify_linear_fk(k_oracle: TruthTable, n: int) -> int:
    """Recover k from one query to f_k(x) = k.x; the readout is |k> exactly."""
    probs = probabilities(deutsch_jozsa_state(k_oracle, n), 0)
    return int(np.argmax(probs))


def identify_linear_fk_classical(k_oracle: TruthTable, n: int) -> int:
    """Classical baseline: n single-bit probes reveal k bit by bit."""
    k = 0
    for j in range(n):
        probe = 1 << (n - 1 - j)
        k |= k_oracle[probe] << (n - 1 - j)
    return k


# --- Simon's problem ------------------------------------------------------------


@dataclass(frozen=True)
class SimonInstance:
    """A 2-to-1 XOR-periodic function plus its hidden period.

    ``xi`` is kept for test verification only; the solver never reads it.
    """

    n: int
    f: TruthTable
    xi: int


def make_simon_instance(n: int, xi: int) -> SimonInstance:
    """The canonical instance f(x) = min(x, x XOR xi) for a given period."""
    if not 1 <= xi < (1 << n):
        raise ValueError("xi must be a nonzero n-bit label")
    values = tuple(min(x, x ^ xi) for x in range(1 << n))
    return SimonInstance(n=n, f=TruthTable(bn_group(n), values), xi=xi)


def random_simon_instance(n: int, rng: np.random.Generator, xi: int | None = None) -> SimonInstance:
    """A random 2-to-1 instance: random period and random coset labels."""
    size = 1 << n
    if xi is None:
        xi = int(rng.integers(1, size))
    elif not 1 <= xi < size:
        raise ValueError("xi must be a nonzero n-bit label")
    labels = rng.permutation(size)[: size // 2]
    values = [0] * size
    next_class = 0
    for x in range(size):
        if x < (x ^ xi):
            v = int(labels[next_class])
            next_class += 1
            values[x] = v
            values[x ^ xi] = v
    return SimonInstance(n=n, f=TruthTable(bn_group(n), tuple(values)), xi=xi)


def verify_simon_promise(table: TruthTable) -> int:
    """Check the 2-to-1 XOR-period promise and return the period."""
    if any(m != 2 for m in table.group.moduli):
        raise ValueError("Simon oracle must be defined on bit strings")
    preimages: dict[int, list[int]] = {}
    for x, v in enumerate(table.values):
        preimages.setdefault(v, []).append(x)
    xi = None
    for v, xs in preimages.items():
        if len(xs) != 2:
            raise ValueError(f"value {v} has {len(xs)} preimages; function is not 2-to-1")
        pair_xi = xs[0] ^ xs[1]
        if xi is None:
            xi = pair_xi
        elif xi != pair_xi:
            raise ValueError("preimage pairs do not share a single XOR period")
    assert xi is not None and xi != 0
    return xi


def simon_sample(inst: SimonInstance, rng: np.random.Generator) -> int:
    """One full run of the quantum subroutine: a uniform y with y.xi = 0.

    Steps: superpose the query register, one oracle call, measure the
    function register (leaving |x0> + |x0 XOR xi>), Walsh-Hadamard to
    cancel the random offset x0, measure.
    """
    d = 1 << inst.n
    state = init_basis(make_layout((d, d)), (0, 0))
    state = hadamard_n(state, 0)
    state = apply_oracle_xor(state, inst.f, 0, 1)
    _, state = measure_register(state, 1, rng)
    state = hadamard_n(state, 0)
    out, _ = measure_register(state, 0, rng)
    return out.value


@dataclass(frozen=True)
class GF2Matrix:
    """Rows of an n-column 0/1 matrix, each row packed into an int label."""

    width: int
    rows: tuple[int, ...]


def _gf2_reduce(rows: list[int], pivot_bits: list[int], row: int, width: int) -> bool:
    """Fold one row into an RREF accumulator; True if it added rank."""
    r = row & ((1 << width) - 1)
    for pb, pr in zip(pivot_bits, rows):
        if (r >> pb) & 1:
            r ^= pr
    if r == 0:
        return False
    pb = r.bit_length() - 1
    for i, existing in enumerate(rows):
        if (existing >> pb) & 1:
            rows[i] = existing ^ r
    rows.append(r)
    pivot_bits.append(pb)
    return True


def gf2_nullspace(matrix: GF2Matrix) -> list[int]:
    """Basis of {v : Mv = 0} over GF(2), by Gaussian elimination."""
    rows: list[int] = []
    pivot_bits: list[int] = []
    for row in matrix.rows:
        _gf2_reduce(rows, pivot_bits, row, matrix.width)
    free_bits = [b for b in range(matrix.width) if b not in pivot_bits]
    basis = []
    for fb in free_bits:
        v = 1 << fb
        for pb, pr in zip(pivot_bits, rows):
            if (pr >> fb) & 1:
                v |= 1 << pb
        basis.append(v)
    return sorted(basis)


def simon_solve_detailed(
    inst: SimonInstance, rng: np.random.Generator, max_samples: int | None = None
) -> tuple[int, list[int]]:
    """Sample until the collected equations have rank n-1; solve for xi.

    Returns (xi, samples).  The default budget 4n + 20 comes from the
    coupon-collector-like growth of the rank; hitting it means unlucky
    sampling and raises BudgetExceededError so the caller can reseed.
    """
    n = inst.n
    if max_samples is None:
        max_samples = 4 * n + 20
    samples: list[int] = []
    rows: list[int] = []
    pivot_bits: list[int] = []
    while len(pivot_bits) < n - 1:
        if len(samples) >= max_samples:
            raise BudgetExceededError(
                f"rank {len(pivot_bits)} < {n - 1} after {max_samples} samples"
            )
        y = simon_sample(inst, rng)
        samples.append(y)
        _gf2_reduce(rows, pivot_bits, y, n)
    basis = gf2_nullspace(GF2Matrix(width=n, rows=tuple(samples)))
    nonzero = [v for v in basis if v]
    assert len(nonzero) == 1, "rank n-1 system must have a 1-dimensional nullspace"
    return nonzero[0], samples


def simon_solve(
    inst: SimonInstance, rng: np.random.Generator, max_samples: int | None = None
) -> int:
    xi, _ = simon_solve_detailed(inst, rng, max_samples)
    return xi


# --- Shor order finding ----------------------------------------------------------


@dataclass
class ShorRun:
    """Record of one order-finding run: inputs, measured values, outcome."""

    N: int
    y: int
    q: int
    samples: list[int] = field(default_factory=list)
    recovered_r: int | None = None
    repetitions: int = 0


def choose_shor_q(N: int) -> int:
    """Least power of two >= N^2 (large enough q; power of two for the fast path)."""
    q = 1
    while q < N * N:
        q *= 2
    return q


def _modexp_table(y: int, N: int, q: int) -> TruthTable:
    values = []
    acc = 1 % N
    for _ in range(q):
        values.append(acc)
        acc = (acc * y) % N
    return TruthTable(make_group((q,)), tuple(values))


def shor_premeasure_state(y: int, N: int, q: int) -> StateVector:
    """State after Steps 1-2: DFT_q of |0> then the modular-exponent oracle."""
    if N < 2 or q < 2:
        raise ValueError("need N >= 2 and q >= 2")
    if math.gcd(y, N) != 1:
        raise ValueError(f"{y} is not coprime to {N}")
    state = init_basis(make_layout((q, N)), (0, 0))
    state = dft_q(state, 0)
    return apply_oracle_modadd(state, _modexp_table(y, N, q), 0, 1)


def _shor_sample_from(state: StateVector, rng: np.random.Generator) -> int:
    _, collapsed = measure_register(state, 1, rng)  # Step 3
    transformed = dft_q(collapsed, 0)  # Step 4
    out, _ = measure_register(transformed, 0, rng)  # Step 5
    return out.value


def shor_sample(y: int, N: int, q: int, rng: np.random.Generator) -> int:
    """Steps 1-5 once: a measured c that is (near) a multiple of q/r."""
    return _shor_sample_from(shor_premeasure_state(y, N, q), rng)


def shor_step5_distribution(y: int, N: int, q: int) -> np.ndarray:
    """Exact distribution of c, from amplitudes rather than sampling.

    The Step-4 transform acts on register 0 only and therefore commutes
    with the Step-3 measurement, so the marginal over register 0 after
    transforming the pre-measurement state is the sampled distribution.
    """
    state = dft_q(shor_premeasure_state(y, N, q), 0)
    return probabilities(state, 0)


def shor_order_run(
    y: int,
    N: int,
    rng: np.random.Generator,
    max_reps: int = 64,
    q: int | None = None,
) -> ShorRun:
    """Repeat sampling + continued fractions until a verified order appears.

    Each measured c yields a candidate denominator of c/q; candidates
    are lcm-combined across samples (handles k sharing a factor with r),
    kept below N, and classically verified with modpow before
    acceptance.  The returned order is exact, never a multiple.
    """
    if q is None:
        q = choose_shor_q(N)
    run = ShorRun(N=N, y=y, q=q)
    premeasure = shor_premeasure_state(y, N, q)
    candidates: set[int] = set()
    for rep in range(max_reps):
        c = _shor_sample_from(premeasure, rng)
        run.samples.append(c)
        run.repetitions = rep + 1
        conv: Convergent = best_rational(c, q, N)
        fresh = {conv.denominator}
        fresh |= {math.lcm(conv.denominator, old) for old in candidates}
        candidates |= {v for v in fresh if v <= N}
        for cand in sorted(candidates):
            if modpow(y, cand, N) == 1:
                run.recovered_r = order_from_multiple(y, N, cand)
                return run
    return run


def shor_order(
    y: int, N: int, rng: np.random.Generator, max_reps: int = 64, q: int | None = None
) -> int:
    run = shor_order_run(y, N, rng, max_reps=max_reps, q=q)
    if run.recovered_r is None:
        raise BudgetExceededError(f"no verified order within {max_reps} samples")
    return run.recovered_r


# --- the factoring reduction ------------------------------------------------------


def factor_detailed(
    N: int,
    method: str,
    rng: np.random.Generator,
    max_attempts: int = 32,
) -> tuple[int, dict]:
    """Random-y reduction from factoring to order finding.

    A y sharing a factor with N gives that factor immediately; otherwise
    an even order r with y^{r/2} != -1 gives gcd(y^{r/2} +- 1, N).
    """
    if N < 4:
        raise ValueError("N must be a composite >= 4")
    if method not in ("shor", "kitaev"):
        raise ValueError(f"unknown method {method!r}")
    from .kitaev import kitaev_order_run  # kitaev depends on this module's siblings only

    attempts: list[dict] = []
    queries = 0

    def summary(origin: str) -> dict:
        return {"attempts": attempts, "divisor_from": origin, "oracle_queries": queries}

    for _ in range(max_attempts):
        y = int(rng.integers(2, N))
        info: dict = {"y": y}
        attempts.append(info)
        g = math.gcd(y, N)
        if g > 1:
            info["gcd"] = g
            return g, summary("gcd")
        if method == "shor":
            run = shor_order_run(y, N, rng)
            queries += run.repetitions
            r = run.recovered_r
        else:
            krun = kitaev_order_run(y, N, rng)
            queries += krun.queries
            r = krun.recovered_r
        info["order"] = r
        if r is None or r % 2:
            continue
        half = modpow(y, r // 2, N)
        if half == N - 1:
            continue
        for cand in (math.gcd(half - 1, N), math.gcd(half + 1, N)):
            if 1 < cand < N:
                info["divisor"] = cand
                return cand, summary("order")
    raise BudgetExceededError(f"no nontrivial divisor of {N} within {max_attempts} attempts")


def factor(N: int, method: str, rng: np.random.Generator, max_attempts: int = 32) -> int:
    divisor, _ = factor_detailed(N, method, rng, max_attempts=max_attempts)
    return divisor
