pub mod opalg;
pub mod params;
pub mod spectral;
pub mod cli;
