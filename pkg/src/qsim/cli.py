"""Command-line driver: every algorithm as a seeded, replayable run.

Each run emits either a one-line human summary or a JSON RunRecord with
frozen field names::

    {algorithm, seed, parameters, samples, post_processing, result,
     oracle_queries, wall_time_ms}

Re-running with the same arguments and seed reproduces everything except
wall_time_ms byte for byte.  Randomness comes from
numpy.random.default_rng(seed) (PCG64); --trials k runs seeds
seed, seed+1, ..., seed+k-1 and emits the records in that order.

Exit codes: 0 success, 1 algorithm failure (a retry or sample budget was
exhausted), 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import algorithms, fourier, groups, kitaev
from .errors import BudgetExceededError


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    parameters: dict
    samples: list = field(default_factory=list)
    post_processing: dict = field(default_factory=dict)
    result: object = None
    oracle_queries: int = 0
    wall_time_ms: int = 0

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def _load_oracle(path: str) -> groups.TruthTable:
    return groups.read_truth_table(path)


def _bits(label: int, n: int) -> str:
    return algorithms.label_to_bits(label, n)


# --- per-command drivers; each fills samples/post_processing/result -------------


def _run_deutsch_xor(args, rng, record: RunRecord) -> None:
    if not args.oracle:
        raise ValueError("need --oracle FILE")
    table = _load_oracle(args.oracle)
    if table.group.moduli != (2,) or any(v > 1 for v in table.values):
        raise ValueError("deutsch-xor needs a truth table from one bit to one bit")
    verdict = algorithms.deutsch_xor_original(table, rng)
    record.parameters["oracle"] = args.oracle
    record.result = verdict.outcome
    record.oracle_queries = verdict.queries_used
    actual = "constant" if table.values[0] == table.values[1] else "balanced"
    record.post_processing = {
        "actual": actual,
        "correct_or_inconclusive": verdict.outcome in (actual, "inconclusive"),
    }


def _promise_table(args, rng) -> tuple[groups.TruthTable, int, str]:
    if args.oracle:
        table = _load_oracle(args.oracle)
        if any(m != 2 for m in table.group.moduli) or any(v > 1 for v in table.values):
            raise ValueError("oracle must map bit strings to one bit")
        n = len(table.group.moduli)
        return table, n, args.oracle
    if args.n is None:
        raise ValueError("need --oracle FILE or --n N")
    n = args.n
    if rng.integers(2) == 0:
        table = algorithms.constant_table(n, int(rng.integers(2)))
    else:
        table = algorithms.random_balanced_table(n, rng)
    return table, n, f"random(n={n})"


def _run_deutsch_jozsa(args, rng, record: RunRecord) -> None:
    table, n, origin = _promise_table(args, rng)
    ones = sum(table.values)
    if ones not in (0, len(table.values), len(table.values) // 2):
        raise ValueError("oracle violates the constant-or-balanced promise")
    verdict = algorithms.deutsch_jozsa(table, n)
    record.parameters.update({"n": n, "oracle": origin})
    record.result = verdict.outcome
    record.oracle_queries = verdict.queries_used
    actual = "constant" if ones in (0, len(table.values)) else "balanced"
    record.post_processing = {"actual": actual, "correct": verdict.outcome == actual}


def _run_identify_fk(args, rng, record: RunRecord) -> None:
    if args.oracle:
        table = _load_oracle(args.oracle)
        n = len(table.group.moduli)
        hidden = None
        origin = args.oracle
    else:
        if args.n is None:
            raise ValueError("need --oracle FILE or --n N")
        n = args.n
        hidden = int(rng.integers(0, 1 << n))
        table = algorithms.linear_fk_table(n, hidden)
        origin = f"random(n={n})"
    k = algorithms.identify_linear_fk(table, n)
    record.parameters.update({"n": n, "oracle": origin})
    record.result = _bits(k, n)
    record.oracle_queries = 1
    record.post_processing = {"classical_probes": _bits(algorithms.identify_linear_fk_classical(table, n), n)}
    if hidden is not None:
        record.post_processing["hidden_k"] = _bits(hidden, n)
        record.post_processing["match"] = k == hidden


def _run_simon(args, rng, record: RunRecord) -> None:
    if args.oracle:
        table = _load_oracle(args.oracle)
        xi = algorithms.verify_simon_promise(table)  # reject non-promise oracles up front
        n = len(table.group.moduli)
        inst = algorithms.SimonInstance(n=n, f=table, xi=xi)
        origin = args.oracle
    else:
        if args.n is None or args.xi is None:
            raise ValueError("need --oracle FILE or both --n and --xi")
        n = args.n
        xi = algorithms.bits_to_label(args.xi)
        if len(args.xi) != n:
            raise ValueError("--xi length must equal --n")
        if xi == 0:
            raise ValueError("--xi must be nonzero")
        inst = algorithms.make_simon_instance(n, xi)
        origin = f"min(x, x^xi), n={n}"
    found, samples = algorithms.simon_solve_detailed(inst, rng, args.max_samples)
    record.parameters.update({"n": n, "oracle": origin})
    record.samples = [_bits(y, n) for y in samples]
    record.result = _bits(found, n)
    record.oracle_queries = len(samples)
    record.post_processing = {"hidden_xi": _bits(inst.xi, n), "match": found == inst.xi}


def _run_shor(args, rng, record: RunRecord) -> None:
    if args.N is None or args.y is None:
        raise ValueError("need --N and --y")
    max_reps = 64 if args.max_samples is None else args.max_samples
    run = algorithms.shor_order_run(args.y, args.N, rng, max_reps=max_reps, q=args.q)
    record.parameters.update({"N": args.N, "y": args.y, "q": run.q})
    record.samples = run.samples
    record.oracle_queries = run.repetitions
    record.post_processing = {"repetitions": run.repetitions}
    if run.recovered_r is None:
        raise BudgetExceededError("no verified order within the sample budget")
    record.result = run.recovered_r


def _run_kitaev(args, rng, record: RunRecord) -> None:
    if args.N is None or args.y is None:
        raise ValueError("need --N and --y")
    run = kitaev.kitaev_order_run(
        args.y, args.N, rng, l=args.bits, epsilon=args.epsilon
    )
    record.parameters.update(
        {"N": args.N, "y": args.y, "bits": run.l, "epsilon": run.epsilon}
    )
    record.oracle_queries = run.queries
    stages = []
    if run.estimate is not None:
        for s in run.estimate.stages:
            stages.append(
                {
                    "j": s.j,
                    "t": s.t,
                    "y_count": s.y_count,
                    "p0_hat": s.p0_hat,
                    "sin_y_count": s.sin_y_count,
                    "sin_p0_hat": s.sin_p0_hat,
                    "bits": list(s.bits),
                }
            )
        record.post_processing = {
            "attempts": run.attempts,
            "stages": stages,
            "phase_numerator": run.estimate.numerator,
            "phase_denominator": run.estimate.denominator,
        }
    else:
        record.post_processing = {"attempts": run.attempts, "stages": stages}
    if run.recovered_r is None:
        raise BudgetExceededError("no verified order within the retry budget")
    record.result = run.recovered_r


def _run_factor(args, rng, record: RunRecord) -> None:
    if args.N is None:
        raise ValueError("need --N")
    divisor, info = algorithms.factor_detailed(args.N, args.method, rng)
    record.parameters.update({"N": args.N, "method": args.method})
    record.result = divisor
    record.oracle_queries = info["oracle_queries"]
    record.post_processing = {
        "attempts": info["attempts"],
        "divisor_from": info["divisor_from"],
        "cofactor": args.N // divisor,
    }


def _run_ft_dump(args, rng, record: RunRecord) -> None:
    if not args.group:
        raise ValueError("need --group n1,n2,...")
    moduli = [int(tok) for tok in args.group.split(",")]
    group = groups.make_group(moduli)
    matrix = fourier.ft_matrix(group)
    text = fourier.matrix_to_text(matrix.entries)
    record.parameters.update({"group": args.group, "order": group.order})
    record.result = text.splitlines()
    record.post_processing = {"unitary": True}


_DRIVERS = {
    "deutsch-xor": _run_deutsch_xor,
    "deutsch-jozsa": _run_deutsch_jozsa,
    "identify-fk": _run_identify_fk,
    "simon": _run_simon,
    "shor": _run_shor,
    "kitaev": _run_kitaev,
    "factor": _run_factor,
    "ft-dump": _run_ft_dump,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsim",
        description="Seeded statevector runs of Fourier-transform quantum algorithms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _DRIVERS:
        p = sub.add_parser(name)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true")
        p.add_argument("--trials", type=int, default=1)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--xi", type=str, default=None)
        p.add_argument("--oracle", type=str, default=None)
        p.add_argument("--N", type=int, default=None)
        p.add_argument("--y", type=int, default=None)
        p.add_argument("--q", type=int, default=None)
        p.add_argument("--method", choices=("shor", "kitaev"), default="shor")
        p.add_argument("--bits", type=int, default=None)
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--max-samples", type=int, default=None)
        p.add_argument("--group", type=str, default=None)
    return parser


def _one_trial(command: str, args, seed: int) -> RunRecord:
    record = RunRecord(algorithm=command, seed=seed, parameters={})
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    _DRIVERS[command](args, rng, record)
    record.wall_time_ms = int((time.perf_counter() - start) * 1000)
    return record


def _emit(records: list[RunRecord], as_json: bool, command: str) -> None:
    if as_json:
        payload = [r.to_json() for r in records]
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
        return
    for r in records:
        if command == "ft-dump":
            print("\n".join(r.result))
        else:
            print(
                f"{r.algorithm} seed={r.seed}: result={r.result} "
                f"(queries={r.oracle_queries}, {r.wall_time_ms} ms)"
            )


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        records = [_one_trial(args.command, args, args.seed + i) for i in range(args.trials)]
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(records, args.json, args.command)
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
