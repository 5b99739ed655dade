"""Scribble-based interactive segmentation on multi-channel images.

Compute unsigned geodesic distance maps from user scribbles over arbitrary
channel stacks, extend scribbles to segmentations with a threshold, and
evaluate methods with Dice-vs-threshold sweeps.
"""

from .core import (
    BinaryMask,
    ChannelStack,
    DistanceMap,
    ScribbleSet,
    read_channel_stack,
    read_mask_pgm,
    read_scribbles,
    write_channel_stack,
    write_mask_pgm,
    write_scribbles,
)
from .distance import DistanceParams, euclidean_edt, geodesic_exact, geodesic_raster
from .preprocess import BandWeights, l1_normalize, pca_features, rgb_reconstruct
from .segment import DiceCurve, dice, dice_sweep, normalize_map, threshold_segment
from .skeleton import mask_to_scribbles, skeletonize

__all__ = [
    "BinaryMask",
    "ChannelStack",
    "DistanceMap",
    "ScribbleSet",
    "BandWeights",
    "DiceCurve",
    "DistanceParams",
    "dice",
    "dice_sweep",
    "euclidean_edt",
    "geodesic_exact",
    "geodesic_raster",
    "l1_normalize",
    "mask_to_scribbles",
    "normalize_map",
    "pca_features",
    "read_channel_stack",
    "read_mask_pgm",
    "read_scribbles",
    "rgb_reconstruct",
    "skeletonize",
    "threshold_segment",
    "write_channel_stack",
    "write_mask_pgm",
    "write_scribbles",
]

__version__ = "0.1.0"
