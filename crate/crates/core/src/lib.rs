pub mod algebra;
pub mod cli;
pub mod coeff;
pub mod parse;
pub mod reduction;
pub mod spectral;
pub mod symmetry;
