//! Computational kernel for Weyl groups, Chevalley groups and small split
//! buildings, with exact arithmetic throughout.

pub mod coefficients;
pub mod rootsys;
pub mod weyl;
pub mod chevalley;
pub mod buildings;
pub mod plane_oracle;
