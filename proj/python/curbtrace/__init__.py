"""Road-boundary extraction pipeline: ground-truth feature maps, the rotated-ROI
tracer, a skeletonization baseline, and the evaluation metrics."""

from ._core import (
    chamfer,
    degrade_features,
    euclidean_dt,
    evaluate,
    generate_scene,
    gt_feature_maps,
    hausdorff,
    run_baseline,
    total_loss,
    trace,
)

__version__ = "0.1.0"

__all__ = [
    "chamfer",
    "degrade_features",
    "euclidean_dt",
    "evaluate",
    "generate_scene",
    "gt_feature_maps",
    "hausdorff",
    "run_baseline",
    "total_loss",
    "trace",
    "__version__",
]
