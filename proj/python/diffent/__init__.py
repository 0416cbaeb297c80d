"""Diffraction-compiled linear optics and entanglement tools."""

from ._core import (
    DiffentError,
    FockState,
    __version__,
    agreement_suite,
    check_separability,
    entropy,
    grating_unitary,
    hom_coincidence,
    ifm,
    input_state,
    jinc,
    noon_scan,
    propagate,
    splitter,
    unitarize,
)

__all__ = [
    "DiffentError",
    "FockState",
    "__version__",
    "agreement_suite",
    "check_separability",
    "entropy",
    "grating_unitary",
    "hom_coincidence",
    "ifm",
    "input_state",
    "jinc",
    "noon_scan",
    "propagate",
    "splitter",
    "unitarize",
]
