"""Body-brain co-evolution of modular robots (Python bindings)."""

from ._core import (
    BRAIN_ROWS,
    BRAIN_SLOTS,
    __version__,
    check_archive,
    decode,
    evaluate,
    evolve,
    fitness,
    random_brain,
    random_genome,
    read_archive,
    render,
    row,
    slot,
    traits,
    tree_edit_distance,
)

__all__ = [
    "BRAIN_ROWS",
    "BRAIN_SLOTS",
    "__version__",
    "check_archive",
    "decode",
    "evaluate",
    "evolve",
    "fitness",
    "random_brain",
    "random_genome",
    "read_archive",
    "render",
    "row",
    "slot",
    "traits",
    "tree_edit_distance",
]
