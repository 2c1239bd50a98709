"""
Subcommands. Each module exposes ``register(subparsers)`` and a handler
``run(args, config, workers) -> exit code``.
"""
from tablesmith.commands import (
    al_run,
    augment,
    corr,
    disturb,
    fidelity,
    generate,
    rank,
    sample,
    split,
    stats,
    teds,
    validate,
)

COMMANDS = (generate, validate, rank, corr, augment, teds, sample, al_run, disturb, stats, split, fidelity)
