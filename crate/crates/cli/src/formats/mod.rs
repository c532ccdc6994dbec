//! On-disk formats: vector map JSON, raster/mask PGM with meta sidecars,
//! surfel grid and trajectory JSON, assignment JSON, reports.

pub mod assignment_json;
pub mod loss_json;
pub mod raster_pgm;
pub mod report_json;
pub mod surfel_json;
pub mod vector_json;
