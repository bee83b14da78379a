//! Layered-surface balancing constants (placeholder).
