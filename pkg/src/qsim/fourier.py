"""Fourier transforms on finite Abelian groups.

The transform matrix on a group G lists the characters as rows::

    FT[i, j] = chi_i(g_j) / sqrt(|G|)

Applied to standard-basis data it sends the shift-invariant basis state
|chi_i> to |g_i>.  The matrix is symmetric, so the inverse transform is
simply its entrywise conjugate.  Sign convention: the forward transform
uses the positive exponent, so on Z_q it maps
|k> -> q**-0.5 * sum_l exp(+2j*pi*k*l/q) |l>, and on bit strings it is
the Walsh-Hadamard transform (self-inverse).

Two evaluation routes exist on purpose:

* :func:`ft_matrix` builds the dense matrix straight from the character
  formula.  It is the oracle the fast path is tested against.
* :func:`apply_ft` factors G into its cyclic components (tensor
  structure) and transforms one axis per factor: an iterative radix-2
  FFT for power-of-two sizes, Bluestein's chirp reindexing for the rest.
  Cost is O(|G| log |G|).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groups import GroupSpec, _check_element, residue_matrix
from .simulator import StateVector, apply_permutation, make_layout, _check_register

#: Largest group order for which the dense matrix may be materialized.
DENSE_MAX_ORDER = 4096
#: Largest register dimension accepted by the fast path.
FAST_MAX_DIM = 1 << 24


@dataclass(frozen=True)
class FourierMatrix:
    """Dense transform matrix for one group, rows indexed by characters."""

    group: GroupSpec
    entries: np.ndarray


def ft_matrix(group: GroupSpec) -> FourierMatrix:
    """Dense FT[i, j] = chi_i(g_j)/sqrt(|G|); unitary by character orthogonality."""
    if group.order > DENSE_MAX_ORDER:
        raise ValueError(f"group order {group.order} exceeds dense maximum {DENSE_MAX_ORDER}")
    res = residue_matrix(group)
    phase = np.zeros((group.order, group.order))
    for j, n in enumerate(group.moduli):
        phase += ((res[:, j][:, None] * res[:, j][None, :]) % n) / n
    entries = np.exp(2j * np.pi * np.mod(phase, 1.0)) / np.sqrt(group.order)
    return FourierMatrix(group=group, entries=entries)


def fourier_basis_state(group: GroupSpec, k) -> StateVector:
    """The shift-invariant state |chi_k> = |G|**-0.5 sum_g conj(chi_k(g)) |g>."""
    k = _check_element(group, k)
    res = residue_matrix(group)
    phase = np.zeros(group.order)
    for j, n in enumerate(group.moduli):
        phase += ((k[j] * res[:, j]) % n) / n
    amps = np.exp(-2j * np.pi * np.mod(phase, 1.0)) / np.sqrt(group.order)
    return StateVector(make_layout((group.order,)), amps)


# --- fast 1-D kernels ---------------------------------------------------------


@lru_cache(maxsize=None)
def _bit_reversal(n_bits: int) -> np.ndarray:
    idx = np.arange(1 << n_bits)
    rev = np.zeros_like(idx)
    for b in range(n_bits):
        rev = (rev << 1) | ((idx >> b) & 1)
    return rev


def _fft_pow2(block: np.ndarray, sign: int) -> np.ndarray:
    """Unnormalized DFT sum_n x_n exp(sign*2j*pi*n*k/d) along the last axis.

    d must be a power of two.  Iterative decimation-in-time: bit-reverse,
    then butterfly stages with vectorized twiddles.
    """
    d = block.shape[-1]
    if d == 1:
        return block.astype(np.complex128, copy=True)
    # order="C" matters: reshape below must be a view for the in-place
    # butterflies to land, and astype otherwise keeps the gather's order.
    x = block[..., _bit_reversal(d.bit_length() - 1)].astype(np.complex128, order="C", copy=True)
    m = 2
    while m <= d:
        half = m // 2
        twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / m)
        v = x.reshape(-1, 2, half)
        even = v[:, 0, :].copy()
        odd = v[:, 1, :] * twiddle
        v[:, 0, :] = even + odd
        v[:, 1, :] = even - odd
        x = x.reshape(-1, d)
        m *= 2
    return x.reshape(block.shape)


def _wht(block: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis (d = 2**n)."""
    d = block.shape[-1]
    x = block.astype(np.complex128, order="C", copy=True)
    h = 1
    while h < d:
        v = x.reshape(-1, 2, h)
        a = v[:, 0, :].copy()
        b = v[:, 1, :].copy()
        v[:, 0, :] = a + b
        v[:, 1, :] = a - b
        h *= 2
    return x.reshape(block.shape)


@lru_cache(maxsize=None)
def _bluestein_setup(d: int, sign: int) -> tuple[np.ndarray, np.ndarray, int]:
    conv_len = 1
    while conv_len < 2 * d - 1:
        conv_len *= 2
    # n*k = (n^2 + k^2 - (k-n)^2)/2, so the DFT becomes chirp * convolution.
    n_sq = (np.arange(d, dtype=np.int64) ** 2) % (2 * d)
    chirp = np.exp(sign * 1j * np.pi * n_sq / d)
    kernel = np.zeros(conv_len, dtype=np.complex128)
    kernel[:d] = np.conj(chirp)
    kernel[conv_len - d + 1:] = np.conj(chirp[1:][::-1])
    kernel_hat = _fft_pow2(kernel, +1)
    return chirp, kernel_hat, conv_len


def _bluestein(block: np.ndarray, sign: int) -> np.ndarray:
    """Unnormalized DFT along the last axis for arbitrary d, via chirp-z."""
    d = block.shape[-1]
    chirp, kernel_hat, conv_len = _bluestein_setup(d, sign)
    flat = block.reshape(-1, d)
    padded = np.zeros((flat.shape[0], conv_len), dtype=np.complex128)
    padded[:, :d] = flat * chirp
    conv = _fft_pow2(_fft_pow2(padded, +1) * kernel_hat, -1) / conv_len
    return (conv[:, :d] * chirp).reshape(block.shape)


def _dft_last_axis(block: np.ndarray, sign: int) -> np.ndarray:
    d = block.shape[-1]
    if d & (d - 1) == 0:
        return _fft_pow2(block, sign)
    return _bluestein(block, sign)


def _transform_axis(arr: np.ndarray, axis: int, sign: int) -> np.ndarray:
    moved = np.moveaxis(arr, axis, -1)
    out = _dft_last_axis(np.ascontiguousarray(moved), sign)
    return np.moveaxis(out, -1, axis)


# --- register-level operations ------------------------------------------------


def _register_dim(state: StateVector, register: int) -> int:
    return state.layout.dims[_check_register(state.layout, register)]


def apply_ft(
    group: GroupSpec, state: StateVector, register: int, inverse: bool = False
) -> StateVector:
    """Fourier transform of one register, interpreted as labels of ``group``.

    The register axis is reshaped into the group's cyclic factors and
    each factor axis is transformed independently; the tensor product of
    the factor transforms is exactly the group transform in enumeration
    order.  Matches dense ft_matrix application to ~1e-12.
    """
    register = _check_register(state.layout, register)
    dims = state.layout.dims
    if dims[register] != group.order:
        raise ValueError(f"register dimension {dims[register]} != group order {group.order}")
    if group.order > FAST_MAX_DIM:
        raise ValueError(f"group order {group.order} exceeds fast-path maximum {FAST_MAX_DIM}")
    sign = -1 if inverse else +1
    if all(n == 2 for n in group.moduli):
        # Per-factor size-2 transforms collapse to one Walsh-Hadamard pass
        # (sign is irrelevant: exp(+-1j*pi) is -1 either way).
        arr = _wht_axis(state.tensor(), register)
    else:
        expanded = dims[:register] + group.moduli + dims[register + 1:]
        arr = state.amps.reshape(expanded)
        for offset in range(len(group.moduli)):
            arr = _transform_axis(arr, register + offset, sign)
    arr = arr / np.sqrt(group.order)
    return StateVector(state.layout, arr.reshape(-1))


def _wht_axis(arr: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(arr, axis, -1)
    out = _wht(np.ascontiguousarray(moved))
    return np.moveaxis(out, -1, axis)


def hadamard_n(state: StateVector, register: int) -> StateVector:
    """Apply H to every qubit of a power-of-two register: |x> -> 2^{-n/2} sum_y (-1)^{x.y} |y>."""
    d = _register_dim(state, register)
    if d & (d - 1):
        raise ValueError(f"register dimension {d} is not a power of two")
    register = _check_register(state.layout, register)
    out = _wht_axis(state.tensor(), register) / np.sqrt(d)
    return StateVector(state.layout, out.reshape(-1))


def dft_q(state: StateVector, register: int, inverse: bool = False) -> StateVector:
    """|k> -> q**-0.5 sum_l exp(+-2j*pi*k*l/q) |l> on one register."""
    d = _register_dim(state, register)
    if d > FAST_MAX_DIM:
        raise ValueError(f"register dimension {d} exceeds fast-path maximum {FAST_MAX_DIM}")
    register = _check_register(state.layout, register)
    sign = -1 if inverse else +1
    arr = _transform_axis(state.tensor(), register, sign) / np.sqrt(d)
    return StateVector(state.layout, arr.reshape(-1))


def shift_operator(
    group: GroupSpec, h, state: StateVector, register: int
) -> StateVector:
    """Permute labels |g> -> |h*g> on a register of dimension |G|."""
    h = _check_element(group, h)
    if _register_dim(state, register) != group.order:
        raise ValueError("register dimension does not match group order")
    res = residue_matrix(group)
    mods = np.asarray(group.moduli)
    shifted = (res + np.asarray(h)[None, :]) % mods
    strides = np.empty(len(group.moduli), dtype=np.int64)
    acc = 1
    for j in range(len(group.moduli) - 1, -1, -1):
        strides[j] = acc
        acc *= group.moduli[j]
    image = shifted @ strides
    return apply_permutation(state, (register,), image)


def matrix_to_text(entries: np.ndarray) -> str:
    """Row-major text form, each entry a 're,im' pair (for cross-checking).

    Components below 1e-12 print as 0; the dump is for eyeballing and
    tolerance-level comparison, not bit-exact round trips.
    """

    def fmt(v: float) -> str:
        return f"{(0.0 if abs(v) < 1e-12 else v) + 0.0:.12g}"

    lines = []
    for row in np.atleast_2d(entries):
        lines.append(" ".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"
