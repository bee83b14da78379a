//! Fractional mean curvature on revolution bodies (placeholder).
