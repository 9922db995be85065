"""
Test suite for mspp-enhance.

Covers framing and synthesis, noise tracking, both enhancement steps,
metrics, the file pipeline and batch grid, and the CLI surface.
"""
