//! Acceptance criteria for `torus-harmonics`; see `tests/acceptance.rs`.
