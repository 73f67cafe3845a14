"""The unraveling U, the linearization T and the SR transformation."""

from ctrslab.transforms.context import CondMeta, ExtSymbol, TransformContext, TransformError
from ctrslab.transforms.linearization import linearize
from ctrslab.transforms.sr import bar, ext, guarded_bar, hat, reset, sr_transform
from ctrslab.transforms.unraveling import ultra_check, unravel

__all__ = [
    "CondMeta",
    "ExtSymbol",
    "TransformContext",
    "TransformError",
    "bar",
    "ext",
    "guarded_bar",
    "hat",
    "linearize",
    "reset",
    "sr_transform",
    "ultra_check",
    "unravel",
]
