//! Acceptance suite for `groupoidal`; see `tests/acceptance.rs`.
