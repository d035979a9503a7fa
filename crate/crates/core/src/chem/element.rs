//! Element table with charge-adjusted valence models.

use serde::{Deserialize, Serialize};

/// Elements supported by the pipeline. Keep in sync with [`Element::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    B,
    C,
    N,
    O,
    S,
    P,
    F,
    Cl,
    Br,
    I,
    H,
}

impl Element {
    pub const ALL: [Element; 11] = [
        Element::B,
        Element::C,
        Element::N,
        Element::O,
        Element::S,
        Element::P,
        Element::F,
        Element::Cl,
        Element::Br,
        Element::I,
        Element::H,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Element::B => "B",
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::S => "S",
            Element::P => "P",
            Element::F => "F",
            Element::Cl => "Cl",
            Element::Br => "Br",
            Element::I => "I",
            Element::H => "H",
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Element> {
        Some(match sym {
            "B" => Element::B,
            "C" => Element::C,
            "N" => Element::N,
            "O" => Element::O,
            "S" => Element::S,
            "P" => Element::P,
            "F" => Element::F,
            "Cl" => Element::Cl,
            "Br" => Element::Br,
            "I" => Element::I,
            "H" => Element::H,
            _ => return None,
        })
    }

    /// Base valences for the neutral atom, ascending.
    pub fn base_valences(self) -> &'static [u8] {
        match self {
            Element::B => &[3],
            Element::C => &[4],
            Element::N => &[3, 5],
            Element::O => &[2],
            Element::S => &[2, 4, 6],
            Element::P => &[3, 5],
            Element::F | Element::Cl | Element::Br | Element::I => &[1],
            Element::H => &[1],
        }
    }

    pub fn default_charge(self) -> i8 {
        0
    }

    /// Allowed total valences (bond orders plus hydrogens) for a given
    /// formal charge. Cations of N/O/P/S gain a bonding site, anions lose
    /// one; carbon loses one either way (trivalent carbocation/carbanion).
    pub fn allowed_valences(self, charge: i8) -> Vec<u8> {
        if charge == 0 {
            return self.base_valences().to_vec();
        }
        let shift: i16 = match self {
            Element::C => -(charge.abs() as i16),
            Element::B => charge as i16 * -1, // B(-) is tetravalent, B(+) divalent
            Element::N | Element::O | Element::P | Element::S => charge as i16,
            Element::F | Element::Cl | Element::Br | Element::I => charge as i16,
            Element::H => -(charge.abs() as i16),
        };
        let mut out: Vec<u8> = self
            .base_valences()
            .iter()
            .map(|&v| (v as i16 + shift).max(0) as u8)
            .collect();
        out.dedup();
        out
    }

    /// True for elements written bare (no brackets) in the SMILES organic
    /// subset.
    pub fn organic_subset(self) -> bool {
        !matches!(self, Element::H)
    }

    /// Whether the element participates in aromatic perception when written
    /// lowercase in SMILES.
    pub fn aromatic_candidate(self) -> bool {
        matches!(
            self,
            Element::B | Element::C | Element::N | Element::O | Element::S | Element::P
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_covers_required_elements() {
        for sym in ["B", "C", "N", "O", "S", "P", "F", "Cl", "Br", "I", "H"] {
            let e = Element::from_symbol(sym).unwrap();
            assert_eq!(e.symbol(), sym);
            assert!(!e.base_valences().is_empty());
        }
    }

    #[test]
    fn charged_valences() {
        assert_eq!(Element::N.allowed_valences(1), vec![4, 6]);
        assert_eq!(Element::N.allowed_valences(-1), vec![2, 4]);
        assert_eq!(Element::O.allowed_valences(-1), vec![1]);
        assert_eq!(Element::O.allowed_valences(1), vec![3]);
        assert_eq!(Element::C.allowed_valences(1), vec![3]);
        assert_eq!(Element::C.allowed_valences(-1), vec![3]);
        assert_eq!(Element::B.allowed_valences(-1), vec![4]);
    }
}
