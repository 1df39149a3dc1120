//! File formats, end-to-end drivers, SVG rendering, and instance
//! generation for the `circlepack` binary. Everything the binary does is
//! reachable through this library, so integration tests can exercise the
//! pipeline without spawning processes.

pub mod gen;
pub mod instance;
pub mod pipeline;
pub mod solution;
pub mod svg;
