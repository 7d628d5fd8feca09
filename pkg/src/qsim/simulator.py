"""Register-structured statevector engine.

A state is a unit-norm complex vector over the product of its register
label spaces.  Registers may have any dimension >= 2, not just qubits:
order finding wants a dimension-N register and padding it to qubits
would only obscure the arithmetic.

Index convention: mixed radix with register 0 most significant, matching
the group-element enumeration in :mod:`qsim.groups`.  For a layout
(d1, d2) the joint index of labels (x, y) is ``x * d2 + y``.

All randomness flows through an explicit ``numpy.random.Generator``
(PCG64, as produced by ``numpy.random.default_rng(seed)``), passed into
every sampling operation, so any run is replayable from its seed.

Operations return fresh states; nothing mutates its input.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groups import TruthTable

#: Default cap on the amplitude array length.
DEFAULT_MAX_AMPLITUDES = 1 << 24
#: Environment variable overriding the amplitude cap.
MAX_AMPLITUDES_ENV = "QSIM_MAX_AMPLITUDES"

_NORM_TOL = 1e-9


def max_amplitudes() -> int:
    value = os.environ.get(MAX_AMPLITUDES_ENV)
    if value is None:
        return DEFAULT_MAX_AMPLITUDES
    cap = int(value)
    if cap < 2:
        raise ValueError(f"{MAX_AMPLITUDES_ENV} must be >= 2")
    return cap


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered register dimensions of a state."""

    dims: tuple[int, ...]

    @property
    def size(self) -> int:
        n = 1
        for d in self.dims:
            n *= d
        return n


def make_layout(dims: Sequence[int]) -> RegisterLayout:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("layout needs at least one register")
    for d in dims:
        if d < 2:
            raise ValueError(f"register dimension {d} < 2")
    layout = RegisterLayout(dims)
    if layout.size > max_amplitudes():
        raise ValueError(
            f"state of {layout.size} amplitudes exceeds cap {max_amplitudes()} "
            f"(override with {MAX_AMPLITUDES_ENV})"
        )
    return layout


@dataclass
class StateVector:
    """Unit-norm amplitudes over a register layout."""

    layout: RegisterLayout
    amps: np.ndarray

    def __post_init__(self) -> None:
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (self.layout.size,):
            raise ValueError(
                f"amplitude array of length {self.amps.shape} does not match layout size {self.layout.size}"
            )
        norm_sq = float(np.sum(np.abs(self.amps) ** 2))
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm^2 = {norm_sq} is not 1 within {_NORM_TOL}")

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per register (a view)."""
        return self.amps.reshape(self.layout.dims)


@dataclass(frozen=True)
class MeasurementOutcome:
    register: int
    value: int
    probability: float


def _check_register(layout: RegisterLayout, register: int) -> int:
    if not 0 <= register < len(layout.dims):
        raise ValueError(f"register {register} out of range for layout {layout.dims}")
    return register


def init_basis(layout: RegisterLayout, labels: Sequence[int]) -> StateVector:
    """The product basis state |labels[0]>|labels[1]>..."""
    if len(labels) != len(layout.dims):
        raise ValueError("one label per register required")
    idx = 0
    for lab, d in zip(labels, layout.dims):
        if not 0 <= lab < d:
            raise ValueError(f"label {lab} out of range for dimension {d}")
        idx = idx * d + lab
    amps = np.zeros(layout.size, dtype=np.complex128)
    amps[idx] = 1.0
    return StateVector(layout, amps)


def probabilities(state: StateVector, register: int) -> np.ndarray:
    """Marginal Born distribution over one register's labels."""
    register = _check_register(state.layout, register)
    t = np.abs(state.tensor()) ** 2
    axes = tuple(i for i in range(len(state.layout.dims)) if i != register)
    return t.sum(axis=axes)


def measure_register(
    state: StateVector, register: int, rng: np.random.Generator
) -> tuple[MeasurementOutcome, StateVector]:
    """Sample one register; return the outcome and the collapsed state."""
    register = _check_register(state.layout, register)
    probs = probabilities(state, register)
    total = probs.sum()
    value = int(rng.choice(len(probs), p=probs / total))
    t = state.tensor().copy()
    index: list[slice | int] = [slice(None)] * len(state.layout.dims)
    kept: list[slice | int] = list(index)
    kept[register] = value
    conditional = t[tuple(kept)]
    norm = np.linalg.norm(conditional)
    if norm < 1e-12:
        raise RuntimeError("measured a zero-norm branch; normalization bug upstream")
    new = np.zeros_like(t)
    new[tuple(kept)] = conditional / norm
    outcome = MeasurementOutcome(register=register, value=value, probability=float(probs[value]))
    return outcome, StateVector(state.layout, new.reshape(-1))


def apply_permutation(state: StateVector, regs: Sequence[int], image: np.ndarray) -> StateVector:
    """Relabel the joint labels of ``regs`` by the bijection ``image``.

    ``image[j]`` is the new joint label of old label j, where the joint
    label runs over the product of the named registers' dimensions with
    regs[0] most significant.  This is the one permutation engine behind
    oracles, shifts, and controlled operations.
    """
    dims = state.layout.dims
    axes = [_check_register(state.layout, r) for r in regs]
    if len(set(axes)) != len(axes):
        raise ValueError("registers must be distinct")
    joint = 1
    for a in axes:
        joint *= dims[a]
    image = np.asarray(image)
    if image.shape != (joint,):
        raise ValueError(f"image must have length {joint}")
    rest = [i for i in range(len(dims)) if i not in axes]
    t = state.tensor().transpose(rest + axes).reshape(-1, joint)
    out = np.empty_like(t)
    out[:, image] = t
    out = out.reshape([dims[i] for i in rest] + [dims[a] for a in axes])
    inverse = np.argsort(rest + axes)
    return StateVector(state.layout, out.transpose(inverse).reshape(-1))


def _oracle_image(dx: int, dy: int, fx: np.ndarray, mode: str) -> np.ndarray:
    x = np.arange(dx)[:, None]
    y = np.arange(dy)[None, :]
    if mode == "xor":
        new_y = y ^ fx[:, None]
    else:
        new_y = (y + fx[:, None]) % dy
    return (x * dy + new_y).reshape(-1)


def apply_oracle_xor(
    state: StateVector, table: TruthTable, in_reg: int, out_reg: int
) -> StateVector:
    """|x>|y> -> |x>|y XOR f(x)> for f between bit-string label spaces."""
    dims = state.layout.dims
    dx = dims[_check_register(state.layout, in_reg)]
    dy = dims[_check_register(state.layout, out_reg)]
    if any(n != 2 for n in table.group.moduli):
        raise ValueError("XOR oracle wants a truth table on bit strings")
    if table.group.order != dx:
        raise ValueError(f"table domain size {table.group.order} != input register {dx}")
    if dy & (dy - 1):
        raise ValueError("XOR oracle output register must have power-of-two dimension")
    fx = np.asarray(table.values)
    if fx.max(initial=0) >= dy:
        raise ValueError("table value out of range for output register")
    return apply_permutation(state, (in_reg, out_reg), _oracle_image(dx, dy, fx, "xor"))


def apply_oracle_modadd(
    state: StateVector, table: TruthTable, in_reg: int, out_reg: int
) -> StateVector:
    """|x>|y> -> |x>|y + f(x) mod d_out>."""
    dims = state.layout.dims
    dx = dims[_check_register(state.layout, in_reg)]
    dy = dims[_check_register(state.layout, out_reg)]
    if table.group.order != dx:
        raise ValueError(f"table domain size {table.group.order} != input register {dx}")
    fx = np.asarray(table.values)
    if fx.max(initial=0) >= dy:
        raise ValueError("table value out of range for output register")
    return apply_permutation(state, (in_reg, out_reg), _oracle_image(dx, dy, fx, "modadd"))


def dump_state(state: StateVector, threshold: float = 1e-12) -> str:
    """Text dump: one 'index re im' line per amplitude above threshold."""
    lines = []
    for i, a in enumerate(state.amps):
        if abs(a) > threshold:
            lines.append(f"{i} {a.real:.17g} {a.imag:.17g}")
    return "\n".join(lines) + ("\n" if lines else "")
