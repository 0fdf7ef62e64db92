//! Workbench for local universal sentences: closure and locality checks,
//! finite spectra, finite partition properties, and stretching of
//! indiscernible-generated finite models.

pub mod logic;
pub mod structures;
pub mod spectrum;
pub mod locality;
pub mod ordinals;
pub mod catalog;
pub mod schmerl;
pub mod stretching;
