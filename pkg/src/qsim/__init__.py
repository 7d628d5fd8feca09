"""Statevector simulation of Fourier-transform quantum algorithms.

Finite Abelian groups and their characters, the group Fourier transform
(dense oracle + fast radix-2/Bluestein path), a register-structured
statevector engine, and the classic oracle/period-finding algorithms
built on top: Deutsch's XOR problem, the constant-vs-balanced decision,
linear-function identification, Simon's problem, Shor order finding,
and order finding by eigenvalue measurement.
"""

from .errors import BudgetExceededError, ReconciliationError
from .groups import (
    GroupSpec,
    Subgroup,
    TruthTable,
    character_inner_product,
    character_sum_at,
    character_table,
    character_value,
    element_at,
    element_index,
    elements,
    format_truth_table,
    group_inverse,
    group_op,
    identity,
    make_group,
    parse_truth_table,
    read_truth_table,
    stabilizer_bruteforce,
    write_truth_table,
)
from .numtheory import (
    Convergent,
    best_rational,
    convergents,
    gcd,
    modpow,
    order_bruteforce,
    order_from_multiple,
)
from .simulator import (
    MeasurementOutcome,
    RegisterLayout,
    StateVector,
    apply_oracle_modadd,
    apply_oracle_xor,
    apply_permutation,
    dump_state,
    init_basis,
    make_layout,
    max_amplitudes,
    measure_register,
    probabilities,
)
from .fourier import (
    FourierMatrix,
    apply_ft,
    dft_q,
    fourier_basis_state,
    ft_matrix,
    hadamard_n,
    matrix_to_text,
    shift_operator,
)
from .algorithms import (
    DeutschVerdict,
    GF2Matrix,
    ShorRun,
    SimonInstance,
    bits_to_label,
    bn_group,
    choose_shor_q,
    constant_table,
    deutsch_jozsa,
    deutsch_jozsa_state,
    deutsch_xor_original,
    deutsch_xor_state,
    dot_mod2,
    factor,
    factor_detailed,
    gf2_nullspace,
    identify_linear_fk,
    identify_linear_fk_classical,
    label_to_bits,
    linear_fk_table,
    make_simon_instance,
    random_balanced_table,
    random_simon_instance,
    shor_order,
    shor_order_run,
    shor_premeasure_state,
    shor_sample,
    shor_step5_distribution,
    simon_sample,
    simon_solve,
    simon_solve_detailed,
    verify_simon_promise,
)
from .kitaev import (
    ControlledUGadget,
    KitaevRun,
    MultUnitary,
    PhaseEstimate,
    StageRecord,
    apply_controlled_u,
    controlled_u_gadget,
    default_precision_bits,
    eigenphase_distribution,
    eigenstate_lambda_k,
    estimate_p0,
    estimate_phase,
    kitaev_order,
    kitaev_order_run,
    make_proc_state,
    matrix_power_oracle,
    mult_power_oracle,
    mult_unitary,
    proc_joint_distribution_collapsed,
    proc_joint_distribution_full,
    proc_once,
    sample_eigenphase,
    stage_sample_count,
)

__version__ = "0.1.0"
