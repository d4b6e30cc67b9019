"""Discrete tomography workbench for icosahedral and cyclotomic model sets."""

from .golden import GoldenInt, GoldenRat
from .icosian import GoldenQuaternion, ModuleTag, icosian_group, rotation_group
from .modelset import (
    Containment,
    IcoPoint,
    ModelSetPatch,
    Window,
    enumerate_patch,
    icosahedron_window,
)
from .slices import CycPoint, cyclotomic_patch, slice_patch
from .xrays import Direction, XRayImage, grid, same_xrays, xray

__all__ = [
    "GoldenInt", "GoldenRat", "GoldenQuaternion", "ModuleTag",
    "icosian_group", "rotation_group", "Containment", "IcoPoint",
    "ModelSetPatch", "Window", "enumerate_patch", "icosahedron_window",
    "CycPoint", "cyclotomic_patch", "slice_patch", "Direction",
    "XRayImage", "grid", "same_xrays", "xray",
]

__version__ = "0.1.0"
