from ._core import (
    InvalidInput,
    Unsupported,
    classify,
    families,
    family,
    ricci,
    set_tolerance,
    tolerance,
    validate,
    verify_tables,
)

__all__ = [
    "InvalidInput",
    "Unsupported",
    "classify",
    "families",
    "family",
    "ricci",
    "set_tolerance",
    "tolerance",
    "validate",
    "verify_tables",
]
