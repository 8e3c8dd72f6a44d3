"""Desk-scale HEVC intra-coding laboratory.

A full-RDO quadtree intra encoder acts as the oracle; shallow learned
classifiers replace exhaustive partition and mode search; an evolutionary
optimizer tunes the confidence thresholds along a complexity/quality
front; linear interpolation generalizes anchor-QP models across the QP
range.
"""

__version__ = "0.1.0"
