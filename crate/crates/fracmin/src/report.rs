//! CSV/JSON emission (placeholder).
