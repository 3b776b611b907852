"""Toolkit for partial-sketch object boundary data.

Converts hand-drawn partial boundary strokes into attention-map rasters,
detects and classifies object curvature adaptively, simulates sketching,
prepares 4-channel network inputs, augments samples, and evaluates
segmentation quality stratified by scale, curvature, and assistance level.
"""

__version__ = "0.1.0"
