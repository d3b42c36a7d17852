//! No library code; the measurements live in benches/kernels.rs.
