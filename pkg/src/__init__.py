"""Relative pose of a multi-camera rig with known vertical direction from affine correspondences."""

__version__ = "0.1.0"
