pub mod batch;
pub mod crossed;
pub mod error;
pub mod fuchs;
pub mod lift;
pub mod mapping;
pub mod mat;
pub mod report;
pub mod sample;
pub mod winding;
pub mod words;
