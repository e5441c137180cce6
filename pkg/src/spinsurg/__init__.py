"""Spin 3-manifold invariants from integer linking matrices."""
