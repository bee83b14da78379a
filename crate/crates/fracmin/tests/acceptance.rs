//! Acceptance suite (criteria filled in as modules land).
