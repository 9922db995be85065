"""End-to-end operations, run manifests and batch grids."""
