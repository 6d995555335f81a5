"""Python bindings for the spincluster library."""

import json as _json

from ._core import (
    DomainError,
    NumericalError,
    PreconditionError,
    build_q,
    check_yangian_axioms,
    classify_ground,
    commutant_family,
    constrained_couplings_parallelogram,
    eigh,
    ground_state_in_sector,
    heisenberg_hamiltonian,
    local_moments,
    mixing_theta,
    nine_level_formulas,
    parallelogram_levels,
    run_cli,
    simulate,
    transition_rate,
    triangle_levels,
)


def output_schema(subcommand):
    """JSON Schema (as a dict) of a JSON-emitting CLI subcommand."""
    from ._core import output_schema_json

    return _json.loads(output_schema_json(subcommand))


def run_json(*args):
    """Runs a JSON-emitting subcommand and returns the parsed report."""
    code, out, err = run_cli(list(args))
    if code != 0:
        raise RuntimeError(f"spincluster {' '.join(args)} exited with {code}: {err.strip()}")
    return _json.loads(out)
