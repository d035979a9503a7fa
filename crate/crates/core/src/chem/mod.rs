//! Molecular graphs: SMILES parsing, canonicalization, formulas.

mod canon;
mod element;
mod formula;
mod graph;
mod smiles;

pub use canon::{canonical_graph, canonical_key};
pub use element::Element;
pub use formula::{formula_distance, molecular_formula, FormulaMap};
pub use graph::{Atom, Bond, BondOrder, GraphError, MolecularGraph};
pub use smiles::{parse_smiles, parse_smiles_with_warnings, SmilesError};
