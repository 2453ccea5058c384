pub mod complexes;
pub mod corpus;
pub mod exact;
pub mod formats;
pub mod geography;
pub mod program;
pub mod relations;
pub mod report;
