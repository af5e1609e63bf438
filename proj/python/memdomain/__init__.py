"""Python bindings for the memdomain C++ core."""

from ._core import (
    CutoffTooSmall,
    DomainError,
    Error,
    GridTooCoarse,
    ModeDead,
    NeverRecordable,
    RealityViolation,
    Registry,
    StepSizeUnderflow,
    UnsupportedBranch,
    closed_form_pair,
    decay,
    domain_size,
    evolve,
    figure_table,
    lambda_lifetime,
    pair_numbers,
    parametric_radius,
    recall,
    record,
    recording_window,
    sph_deriv,
    sph_j,
    sph_y,
    squeezed_vacuum,
    vacuum_decay_rate,
    vacuum_overlap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
