//! Command-line front end for `multitile-core`: problem files, reports and
//! SVG drawings.

pub mod app;
pub mod codec;
pub mod problem;
pub mod render;
pub mod report;

pub use app::run;
