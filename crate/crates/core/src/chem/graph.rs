//! Labeled molecular multigraph with valence validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::element::Element;

/// Bond order. Aromatic input is kekulized on parse; the aromatic flag is
/// kept separately on [`Bond`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
}

impl BondOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

    pub fn from_u8(v: u8) -> Option<BondOrder> {
        Some(match v {
            1 => BondOrder::Single,
            2 => BondOrder::Double,
            3 => BondOrder::Triple,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    /// Total attached hydrogens (implicit completion already resolved).
    pub hydrogens: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    /// Set when the bond belonged to an aromatic system in the input; the
    /// order field then carries the kekulized assignment.
    pub aromatic: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("bond endpoint {0} out of range (atom count {1})")]
    EndpointOutOfRange(usize, usize),
    #[error("self-loop on atom {0}")]
    SelfLoop(usize),
    #[error("duplicate bond between atoms {0} and {1}")]
    DuplicateBond(usize, usize),
    #[error("atom {index} ({symbol}{charge:+}) has valence {used} outside allowed set {allowed:?}")]
    Valence {
        index: usize,
        symbol: &'static str,
        charge: i8,
        used: u32,
        allowed: Vec<u8>,
    },
}

/// Heavy-atom molecular graph. Hydrogens live as per-atom counts.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MolecularGraph {
    pub atoms: Vec<Atom>,
    pub bonds: Vec<Bond>,
}

impl MolecularGraph {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// Sum of bond orders incident to `idx`, excluding hydrogens.
    pub fn bond_order_sum(&self, idx: usize) -> u32 {
        self.bonds
            .iter()
            .filter(|b| b.a == idx || b.b == idx)
            .map(|b| b.order.as_u8() as u32)
            .sum()
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.bonds.iter().filter(|b| b.a == idx || b.b == idx).count()
    }

    /// Neighbor list as (neighbor index, bond index) pairs in bond order.
    pub fn neighbors(&self, idx: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (bi, b) in self.bonds.iter().enumerate() {
            if b.a == idx {
                out.push((b.b, bi));
            } else if b.b == idx {
                out.push((b.a, bi));
            }
        }
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.atoms.len()];
        for (bi, b) in self.bonds.iter().enumerate() {
            adj[b.a].push((b.b, bi));
            adj[b.b].push((b.a, bi));
        }
        adj
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.bonds
            .iter()
            .position(|bd| (bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
    }

    /// Structural and valence invariants: endpoints in range and distinct,
    /// one bond per pair, every atom's used valence in its allowed set.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.atoms.len();
        let mut seen = std::collections::HashSet::new();
        for bond in &self.bonds {
            if bond.a >= n {
                return Err(GraphError::EndpointOutOfRange(bond.a, n));
            }
            if bond.b >= n {
                return Err(GraphError::EndpointOutOfRange(bond.b, n));
            }
            if bond.a == bond.b {
                return Err(GraphError::SelfLoop(bond.a));
            }
            let key = (bond.a.min(bond.b), bond.a.max(bond.b));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateBond(key.0, key.1));
            }
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            let used = self.bond_order_sum(i) + atom.hydrogens as u32;
            let allowed = atom.element.allowed_valences(atom.charge);
            if !allowed.iter().any(|&v| v as u32 == used) {
                return Err(GraphError::Valence {
                    index: i,
                    symbol: atom.element.symbol(),
                    charge: atom.charge,
                    used,
                    allowed,
                });
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        if self.atoms.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.atoms.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.atoms.len()
    }

    /// Per-atom flag: true when the atom lies on at least one cycle.
    /// An atom is cyclic iff it has an incident non-bridge edge.
    pub fn ring_membership(&self) -> Vec<bool> {
        let bridges = self.bridge_bonds();
        let mut in_ring = vec![false; self.atoms.len()];
        for (bi, b) in self.bonds.iter().enumerate() {
            if !bridges[bi] {
                in_ring[b.a] = true;
                in_ring[b.b] = true;
            }
        }
        in_ring
    }

    /// Bridge detection via iterative DFS low-link.
    pub fn bridge_bonds(&self) -> Vec<bool> {
        let n = self.atoms.len();
        let adj = self.adjacency();
        let mut is_bridge = vec![false; self.bonds.len()];
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0usize;

        for start in 0..n {
            if disc[start] != usize::MAX {
                continue;
            }
            // (vertex, parent bond index, next neighbor cursor)
            let mut stack: Vec<(usize, usize, usize)> = vec![(start, usize::MAX, 0)];
            disc[start] = timer;
            low[start] = timer;
            timer += 1;
            while let Some(&mut (v, pbond, ref mut cursor)) = stack.last_mut() {
                if *cursor < adj[v].len() {
                    let (w, bi) = adj[v][*cursor];
                    *cursor += 1;
                    if bi == pbond {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, bi, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (parent, _, _)) = stack.last_mut() {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > disc[parent] {
                            is_bridge[pbond] = true;
                        }
                    }
                }
            }
        }
        is_bridge
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(element: Element, hydrogens: u8) -> Atom {
        Atom { element, charge: 0, hydrogens }
    }

    #[test]
    fn ethane_validates() {
        let g = MolecularGraph {
            atoms: vec![atom(Element::C, 3), atom(Element::C, 3)],
            bonds: vec![Bond { a: 0, b: 1, order: BondOrder::Single, aromatic: false }],
        };
        assert_eq!(g.validate(), Ok(()));
    }

    #[test]
    fn overbonded_carbon_rejected() {
        let g = MolecularGraph {
            atoms: vec![atom(Element::C, 4), atom(Element::C, 3)],
            bonds: vec![Bond { a: 0, b: 1, order: BondOrder::Single, aromatic: false }],
        };
        assert!(matches!(g.validate(), Err(GraphError::Valence { .. })));
    }

    #[test]
    fn ring_membership_cyclopropane() {
        let mut g = MolecularGraph::default();
        for _ in 0..4 {
            g.atoms.push(atom(Element::C, 2));
        }
        g.atoms[3].hydrogens = 3;
        g.bonds = vec![
            Bond { a: 0, b: 1, order: BondOrder::Single, aromatic: false },
            Bond { a: 1, b: 2, order: BondOrder::Single, aromatic: false },
            Bond { a: 2, b: 0, order: BondOrder::Single, aromatic: false },
            Bond { a: 2, b: 3, order: BondOrder::Single, aromatic: false },
        ];
        g.atoms[2].hydrogens = 1;
        let rings = g.ring_membership();
        assert_eq!(rings, vec![true, true, true, false]);
    }
}
