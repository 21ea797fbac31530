"""Rotation estimation from tactile marker displacement fields.

Frames are numpy arrays of shape (rows * cols, 3) holding (dx, dy, dz) per
marker in row-major order, in millimetres. Angles are degrees.
"""

from ._pivotsense import (
    Config,
    ConfigError,
    InsufficientDataError,
    MarkerGrid,
    Pipeline,
    SegmentationConfig,
    SoftnessParams,
    UsageError,
    baseline_least_squares,
    generate_frame,
    half_curl,
    line_feature_angles,
    load_config,
    normalized_angle_difference,
    parse_config,
    preset,
    preset_names,
    run_dynamic,
    run_static_sweep,
)

__all__ = [
    "Config",
    "ConfigError",
    "InsufficientDataError",
    "MarkerGrid",
    "Pipeline",
    "SegmentationConfig",
    "SoftnessParams",
    "UsageError",
    "baseline_least_squares",
    "generate_frame",
    "half_curl",
    "line_feature_angles",
    "load_config",
    "normalized_angle_difference",
    "parse_config",
    "preset",
    "preset_names",
    "run_dynamic",
    "run_static_sweep",
]

__version__ = "0.1.0"
