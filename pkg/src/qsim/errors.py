"""Shared exception types.

Contract violations (bad moduli, shape mismatches, malformed files) raise
plain ValueError.  The classes below mark *runtime* failures of the
probabilistic algorithms, which a caller normally handles by retrying
with a fresh seed or a larger budget.
"""


class BudgetExceededError(RuntimeError):
    """A sampling or retry budget was exhausted before the algorithm converged."""


class ReconciliationError(RuntimeError):
    """Per-stage phase estimates are mutually inconsistent.

    Signals an undersampled stage (too small t); callers typically retry
    with a larger per-stage sample count.
    """
