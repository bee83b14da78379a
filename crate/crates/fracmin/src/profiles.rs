//! Radial profile ODEs (placeholder while the core is validated).
