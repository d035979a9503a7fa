//! Fingerprint-conditioned molecular structure elucidation.
//!
//! The pipeline represents spectra as thresholded substructure
//! fingerprints, tokenizes fingerprints and SELFIES into one vocabulary,
//! trains a small encoder-decoder through pretraining, finetuning and
//! contrastive alignment, then decodes and scores candidate structures.

pub mod chem;
pub mod corpus;
pub mod decode;
pub mod eval;
pub mod exec;
pub mod fingerprint;
pub mod hashing;
pub mod model;
pub mod rng;
pub mod selfies;
pub mod vocab;
