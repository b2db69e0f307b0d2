pub mod annotation;
pub mod content;
pub mod ds;
pub mod pipeline;
pub mod report;
pub mod terms;
pub mod verify;
pub mod vocab;
