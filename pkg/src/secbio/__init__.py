"""Template-protection toolkit for binary biometrics: secure sketch, fuzzy
commitment, encrypted matching, cancelable transforms, exact privacy and
security metrics, and multi-system linkage analysis."""

from . import (  # noqa: F401
    cancelable,
    commit,
    gf2,
    metrics,
    multisys,
    paillier,
    presets,
    sketch,
    smc,
    source,
)

__all__ = [
    "cancelable",
    "commit",
    "gf2",
    "metrics",
    "multisys",
    "paillier",
    "presets",
    "sketch",
    "smc",
    "source",
]
