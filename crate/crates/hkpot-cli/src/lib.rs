pub mod doc;
pub mod suites;
