//! Molecular formulas and the L1 formula distance used for re-ranking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::element::Element;
use super::graph::MolecularGraph;

/// Element counts including hydrogens. Only nonzero counts are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FormulaMap {
    counts: BTreeMap<String, u32>,
}

impl FormulaMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (&'static str, u32)>>(pairs: I) -> Self {
        let mut f = Self::new();
        for (sym, count) in pairs {
            f.add(sym, count);
        }
        f
    }

    pub fn add(&mut self, symbol: &str, count: u32) {
        if count == 0 {
            return;
        }
        *self.counts.entry(symbol.to_string()).or_insert(0) += count;
    }

    pub fn count(&self, symbol: &str) -> u32 {
        self.counts.get(symbol).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Hill-order rendering: C, H, then remaining symbols alphabetically.
    pub fn hill_string(&self) -> String {
        let mut out = String::new();
        let mut push = |sym: &str, count: u32| {
            if count == 0 {
                return;
            }
            out.push_str(sym);
            if count > 1 {
                out.push_str(&count.to_string());
            }
        };
        push("C", self.count("C"));
        push("H", self.count("H"));
        for (sym, count) in &self.counts {
            if sym != "C" && sym != "H" {
                push(sym, *count);
            }
        }
        out
    }

    /// Parse a Hill-style formula string such as "C10H11N".
    pub fn parse(s: &str) -> Option<FormulaMap> {
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut f = FormulaMap::new();
        while i < bytes.len() {
            if !bytes[i].is_ascii_uppercase() {
                return None;
            }
            let mut sym = (bytes[i] as char).to_string();
            i += 1;
            if i < bytes.len() && bytes[i].is_ascii_lowercase() {
                sym.push(bytes[i] as char);
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let count = if start == i { 1 } else { s[start..i].parse().ok()? };
            Element::from_symbol(&sym)?;
            f.add(&sym, count);
        }
        if f.is_empty() {
            None
        } else {
            Some(f)
        }
    }
}

/// Element counts for a graph, hydrogens included.
pub fn molecular_formula(g: &MolecularGraph) -> FormulaMap {
    let mut f = FormulaMap::new();
    let mut hydrogens: u32 = 0;
    for atom in &g.atoms {
        if atom.element == Element::H {
            hydrogens += 1;
        } else {
            f.add(atom.element.symbol(), 1);
        }
        hydrogens += atom.hydrogens as u32;
    }
    f.add("H", hydrogens);
    f
}

/// L1 distance over the union of element symbols.
pub fn formula_distance(f1: &FormulaMap, f2: &FormulaMap) -> u32 {
    let mut symbols: Vec<&str> = f1.iter().map(|(s, _)| s).collect();
    symbols.extend(f2.iter().map(|(s, _)| s));
    symbols.sort_unstable();
    symbols.dedup();
    symbols
        .into_iter()
        .map(|s| f1.count(s).abs_diff(f2.count(s)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hill_order() {
        let f = FormulaMap::from_pairs([("O", 1), ("C", 2), ("H", 6)]);
        assert_eq!(f.hill_string(), "C2H6O");
        assert_eq!(FormulaMap::parse("C2H6O"), Some(f));
    }

    #[test]
    fn distance_examples() {
        let benzene = FormulaMap::from_pairs([("C", 6), ("H", 6)]);
        assert_eq!(formula_distance(&benzene, &benzene), 0);
        let ethanol = FormulaMap::from_pairs([("C", 2), ("H", 6), ("O", 1)]);
        let acetaldehyde = FormulaMap::from_pairs([("C", 2), ("H", 4), ("O", 1)]);
        assert_eq!(formula_distance(&ethanol, &acetaldehyde), 2);
        let c = FormulaMap::from_pairs([("C", 1)]);
        let n = FormulaMap::from_pairs([("N", 1)]);
        assert_eq!(formula_distance(&c, &n), 2);
    }
}
