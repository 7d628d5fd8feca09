"""Finite Abelian groups as direct products of cyclic groups.

Every finite Abelian group is isomorphic to a direct product of cyclic
groups, so a group here is nothing more than its tuple of moduli
``(n_1, ..., n_m)``.  Elements are tuples of residues, one per factor,
written additively per component.  ``B^n`` (n-bit strings under XOR) is
``moduli = (2,)*n``; the integers mod q are ``moduli = (q,)``.

Characters are indexed by elements of the same group (the product form
is self-dual)::

    chi_k(g) = exp(2*pi*1j * sum_j k_j * g_j / n_j)

Enumeration order is mixed-radix lexicographic with ``residues[0]`` most
significant.  The statevector engine and the Fourier module rely on this
exact ordering, so it must never change.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

#: Largest group order accepted for enumeration-style work.
DEFAULT_MAX_ORDER = 1 << 20

Element = tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """A finite Abelian group given by its cyclic factor sizes."""

    moduli: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by a small generating set and its full element list."""

    generators: tuple[Element, ...]
    elements: tuple[Element, ...]


@dataclass(frozen=True)
class TruthTable:
    """An explicit function on a group, stored as one value per element.

    ``values[i]`` is f evaluated at the i-th element in enumeration
    order.  Values are nonnegative integers; their meaning (bit string,
    residue mod N, ...) is up to the consumer.
    """

    group: GroupSpec
    values: tuple[int, ...]

    def __getitem__(self, label: int) -> int:
        return self.values[label]

    def value_at(self, g: Element) -> int:
        return self.values[element_index(self.group, g)]


def make_group(moduli: Sequence[int], max_order: int = DEFAULT_MAX_ORDER) -> GroupSpec:
    """Validate moduli and return the group they define."""
    mods = tuple(int(n) for n in moduli)
    if not mods:
        raise ValueError("group needs at least one cyclic factor")
    for n in mods:
        if n < 2:
            raise ValueError(f"modulus {n} < 2")
    order = 1
    for n in mods:
        order *= n
        if order > max_order:
            raise ValueError(f"group order exceeds maximum {max_order}")
    return GroupSpec(moduli=mods, order=order)


def identity(group: GroupSpec) -> Element:
    return (0,) * len(group.moduli)


def _check_element(group: GroupSpec, g: Sequence[int]) -> Element:
    if len(g) != len(group.moduli):
        raise ValueError(f"element {g!r} does not match moduli {group.moduli}")
    for r, n in zip(g, group.moduli):
        if not 0 <= r < n:
            raise ValueError(f"residue {r} not reduced mod {n}")
    return tuple(int(r) for r in g)


def element_index(group: GroupSpec, g: Sequence[int]) -> int:
    """Mixed-radix index of g, residues[0] most significant."""
    g = _check_element(group, g)
    idx = 0
    for r, n in zip(g, group.moduli):
        idx = idx * n + r
    return idx


def element_at(group: GroupSpec, index: int) -> Element:
    """Inverse of :func:`element_index`."""
    if not 0 <= index < group.order:
        raise ValueError(f"index {index} out of range for order {group.order}")
    out = []
    for n in reversed(group.moduli):
        index, r = divmod(index, n)
        out.append(r)
    return tuple(reversed(out))


def elements(group: GroupSpec) -> Iterator[Element]:
    """All elements in enumeration order."""
    for i in range(group.order):
        yield element_at(group, i)


def group_op(group: GroupSpec, a: Sequence[int], b: Sequence[int]) -> Element:
    """Componentwise (a_j + b_j) mod n_j."""
    a = _check_element(group, a)
    b = _check_element(group, b)
    return tuple((x + y) % n for x, y, n in zip(a, b, group.moduli))


def group_inverse(group: GroupSpec, a: Sequence[int]) -> Element:
    a = _check_element(group, a)
    return tuple((-x) % n for x, n in zip(a, group.moduli))


def character_value(group: GroupSpec, k: Sequence[int], g: Sequence[int]) -> complex:
    """chi_k(g); always a |G|-th root of unity.

    The per-factor phase argument is reduced mod n_j before the
    exponential to keep roundoff independent of residue magnitude.
    """
    k = _check_element(group, k)
    g = _check_element(group, g)
    phase = 0.0
    for kj, gj, n in zip(k, g, group.moduli):
        phase += ((kj * gj) % n) / n
    return cmath.exp(2j * cmath.pi * (phase % 1.0))


def residue_matrix(group: GroupSpec) -> np.ndarray:
    """(|G|, m) int array: row i holds the residues of the i-th element."""
    cols = []
    stride = group.order
    for n in group.moduli:
        stride //= n
        cols.append((np.arange(group.order) // stride) % n)
    return np.stack(cols, axis=1)


def character_table(group: GroupSpec) -> np.ndarray:
    """Dense (|G|, |G|) table T[i, j] = chi_i(g_j)."""
    res = residue_matrix(group)
    phase = np.zeros((group.order, group.order))
    for j, n in enumerate(group.moduli):
        kj = res[:, j][:, None]
        gj = res[:, j][None, :]
        phase += ((kj * gj) % n) / n
    return np.exp(2j * np.pi * np.mod(phase, 1.0))


def character_inner_product(group: GroupSpec, i: Sequence[int], j: Sequence[int]) -> complex:
    """(1/|G|) sum_g chi_i(g) * conj(chi_j(g)); delta_ij up to roundoff."""
    i = _check_element(group, i)
    j = _check_element(group, j)
    total = 0.0 + 0.0j
    for g in elements(group):
        total += character_value(group, i, g) * character_value(group, j, g).conjugate()
    return total / group.order


def character_sum_at(group: GroupSpec, g: Sequence[int]) -> complex:
    """(1/|G|) sum_i chi_i(g): 1 at the identity, 0 elsewhere."""
    g = _check_element(group, g)
    total = 0.0 + 0.0j
    for k in elements(group):
        total += character_value(group, k, g)
    return total / group.order


def _close_under_op(group: GroupSpec, seed: Iterable[Element]) -> set[Element]:
    span = {identity(group)}
    frontier = [el for el in seed if el not in span]
    while frontier:
        el = frontier.pop()
        if el in span:
            continue
        span.add(el)
        for s in list(span):
            product = group_op(group, el, s)
            if product not in span:
                frontier.append(product)
    return span


def _generating_set(group: GroupSpec, members: Sequence[Element]) -> tuple[Element, ...]:
    gens: list[Element] = []
    span: set[Element] = {identity(group)}
    for el in members:
        if el not in span:
            gens.append(el)
            span = _close_under_op(group, span | {el})
    return tuple(gens)


def stabilizer_bruteforce(group: GroupSpec, table: TruthTable) -> Subgroup:
    """K = {k : f(k*g) = f(g) for all g}, by direct enumeration.

    This is the classical oracle the quantum period-finding results are
    verified against.  The returned subgroup is checked for closure.
    """
    if table.group != group:
        raise ValueError("truth table is not defined on this group")
    if len(table.values) != group.order:
        raise ValueError("partial truth table")
    values = np.asarray(table.values)
    res = residue_matrix(group)
    mods = np.asarray(group.moduli)
    strides = np.empty(len(group.moduli), dtype=np.int64)
    acc = 1
    for j in range(len(group.moduli) - 1, -1, -1):
        strides[j] = acc
        acc *= group.moduli[j]
    members = []
    for i in range(group.order):
        shifted = (res[i][None, :] + res) % mods
        perm = shifted @ strides
        if np.array_equal(values[perm], values):
            members.append(element_at(group, i))
    member_set = set(members)
    for a in members:
        for b in members:
            if group_op(group, a, b) not in member_set:
                raise AssertionError("stabilizer is not closed; arithmetic bug")
    return Subgroup(generators=_generating_set(group, members), elements=tuple(members))


# --- truth table text format -------------------------------------------------
#
# header line   group: n_1,...,n_m
# body          one line per element, "g_1,...,g_m -> v", all |G| required.


def format_truth_table(table: TruthTable) -> str:
    lines = ["group: " + ",".join(str(n) for n in table.group.moduli)]
    for i, v in enumerate(table.values):
        g = element_at(table.group, i)
        lines.append(",".join(str(r) for r in g) + " -> " + str(v))
    return "\n".join(lines) + "\n"


def parse_truth_table(text: str, max_order: int = DEFAULT_MAX_ORDER) -> TruthTable:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("group:"):
        raise ValueError("truth table must start with a 'group:' header line")
    try:
        moduli = [int(tok) for tok in lines[0][len("group:"):].split(",")]
    except ValueError as exc:
        raise ValueError(f"malformed group header: {lines[0]!r}") from exc
    group = make_group(moduli, max_order=max_order)
    values: list[int | None] = [None] * group.order
    for ln in lines[1:]:
        if "->" not in ln:
            raise ValueError(f"malformed table line: {ln!r}")
        lhs, rhs = ln.split("->", 1)
        try:
            g = tuple(int(tok) for tok in lhs.strip().split(","))
            v = int(rhs.strip())
        except ValueError as exc:
            raise ValueError(f"malformed table line: {ln!r}") from exc
        if v < 0:
            raise ValueError(f"negative value in table line: {ln!r}")
        idx = element_index(group, g)
        if values[idx] is not None:
            raise ValueError(f"duplicate entry for element {g}")
        values[idx] = v
    missing = sum(1 for v in values if v is None)
    if missing:
        raise ValueError(f"truth table is partial: {missing} of {group.order} elements missing")
    return TruthTable(group=group, values=tuple(values))  # type: ignore[arg-type]


def read_truth_table(path: str, max_order: int = DEFAULT_MAX_ORDER) -> TruthTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_truth_table(fh.read(), max_order=max_order)


def write_truth_table(table: TruthTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_truth_table(table))
