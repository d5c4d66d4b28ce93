pub mod cli;
pub mod coloring;
pub mod dot;
pub mod kempe;
pub mod planar;
pub mod scenario;
pub mod server;
pub mod suite;
pub mod tiling;
