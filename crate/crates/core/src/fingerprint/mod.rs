//! Circular substructure fingerprints, probability thresholding and
//! Tanimoto similarity.

mod probs;

pub use probs::{
    read_prob_file, read_probs_binary, read_probs_jsonl, write_probs_binary, write_probs_jsonl,
    ProbFileError, ProbabilityVector, PROB_VECTOR_LEN,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chem::MolecularGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FingerprintError {
    #[error("fingerprint width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("fingerprint width must be 4096 for token conversion, got {0}")]
    BadWidth(usize),
}

/// Fixed-width bitset. Widths in this pipeline are 4096 (spectrum
/// representation) and 2048 (evaluation).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    nbits: usize,
    blocks: Vec<u64>,
}

impl Fingerprint {
    pub fn empty(nbits: usize) -> Self {
        assert!(nbits > 0 && nbits % 64 == 0, "width must be a positive multiple of 64");
        Fingerprint { nbits, blocks: vec![0; nbits / 64] }
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn set(&mut self, bit: usize) {
        assert!(bit < self.nbits);
        self.blocks[bit / 64] |= 1u64 << (bit % 64);
    }

    pub fn get(&self, bit: usize) -> bool {
        bit < self.nbits && self.blocks[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones() as usize);
        for (bi, &block) in self.blocks.iter().enumerate() {
            let mut b = block;
            while b != 0 {
                let tz = b.trailing_zeros() as usize;
                out.push(bi * 64 + tz);
                b &= b - 1;
            }
        }
        out
    }

    pub fn from_bits(nbits: usize, bits: &[usize]) -> Self {
        let mut fp = Fingerprint::empty(nbits);
        for &b in bits {
            fp.set(b);
        }
        fp
    }
}

/// 64-bit multiply-xor-shift mixer (splitmix64 finalizer constants), fixed
/// so fingerprints are identical across platforms and runs.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn mix_pair(a: u64, b: u64) -> u64 {
    mix64(a ^ b.wrapping_mul(0xD6E8FEB86659FD93))
}

/// ECFP-style circular fingerprint. The initial atom invariant packs
/// (element, degree, charge, H count, ring membership); each round mixes an
/// atom's identifier with its sorted (bond key, neighbor identifier) pairs.
/// Every intermediate identifier from radius 0 through `radius` sets bit
/// (id mod nbits). Duplicate identifiers set the same bit once.
pub fn morgan_fingerprint(g: &MolecularGraph, radius: u32, nbits: usize) -> Fingerprint {
    assert!(radius <= 4, "radius above 4 is unsupported");
    assert!(nbits.is_power_of_two(), "nbits must be a power of two");
    let adj = g.adjacency();
    let in_ring = g.ring_membership();
    let mut ids: Vec<u64> = (0..g.atoms.len())
        .map(|i| {
            let a = &g.atoms[i];
            let packed = ((a.element as u64) << 32)
                | ((adj[i].len() as u64) << 24)
                | (((a.charge as i16 + 16) as u64) << 16)
                | ((a.hydrogens as u64) << 8)
                | in_ring[i] as u64;
            mix64(packed)
        })
        .collect();

    let mut fp = Fingerprint::empty(nbits);
    for &id in &ids {
        fp.set((id % nbits as u64) as usize);
    }
    for _round in 0..radius {
        let mut next = ids.clone();
        for i in 0..g.atoms.len() {
            let mut nb: Vec<(u64, u64)> = adj[i]
                .iter()
                .map(|&(j, bi)| {
                    let b = &g.bonds[bi];
                    let bond_key = ((b.order.as_u8() as u64) << 1) | b.aromatic as u64;
                    (bond_key, ids[j])
                })
                .collect();
            nb.sort_unstable();
            let mut acc = mix64(ids[i]);
            for (bond_key, nid) in nb {
                acc = mix_pair(acc, mix_pair(bond_key, nid));
            }
            next[i] = acc;
        }
        ids = next;
        for &id in &ids {
            fp.set((id % nbits as u64) as usize);
        }
    }
    fp
}

/// Binarize a probability vector: bit i is set iff p_i >= epsilon.
pub fn threshold_probabilities(
    pv: &ProbabilityVector,
    epsilon: f64,
) -> Result<Fingerprint, FingerprintError> {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    if pv.probs.len() != PROB_VECTOR_LEN {
        return Err(FingerprintError::BadWidth(pv.probs.len()));
    }
    let mut fp = Fingerprint::empty(PROB_VECTOR_LEN);
    for (i, &p) in pv.probs.iter().enumerate() {
        if f64::from(p) >= epsilon {
            fp.set(i);
        }
    }
    Ok(fp)
}

/// |a AND b| / |a OR b|; 1.0 when both fingerprints are empty.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.nbits != b.nbits {
        return Err(FingerprintError::WidthMismatch(a.nbits, b.nbits));
    }
    let mut inter: u32 = 0;
    let mut union: u32 = 0;
    for (x, y) in a.blocks.iter().zip(&b.blocks) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    if union == 0 {
        Ok(1.0)
    } else {
        Ok(inter as f64 / union as f64)
    }
}

/// Tanimoto between two molecules at the evaluation setting
/// (radius 2, 2048 bits).
pub fn tanimoto_mols(a: &MolecularGraph, b: &MolecularGraph) -> f64 {
    let fa = morgan_fingerprint(a, 2, 2048);
    let fb = morgan_fingerprint(b, 2, 2048);
    tanimoto(&fa, &fb).expect("same width")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    #[test]
    fn methane_sets_one_to_three_bits() {
        let g = parse_smiles("C").unwrap();
        let fp = morgan_fingerprint(&g, 2, 2048);
        let n = fp.count_ones();
        assert!((1..=3).contains(&n), "methane set {n} bits");
    }

    #[test]
    fn isomorphic_inputs_identical_bits() {
        let a = morgan_fingerprint(&parse_smiles("CCO").unwrap(), 2, 2048);
        let b = morgan_fingerprint(&parse_smiles("OCC").unwrap(), 2, 2048);
        assert_eq!(a, b);
    }

    #[test]
    fn tanimoto_identity_and_disjoint() {
        let x = Fingerprint::from_bits(2048, &[1, 5, 9]);
        assert_eq!(tanimoto(&x, &x).unwrap(), 1.0);
        let y = Fingerprint::from_bits(2048, &[2, 6]);
        assert_eq!(tanimoto(&x, &y).unwrap(), 0.0);
        let empty = Fingerprint::empty(2048);
        assert_eq!(tanimoto(&empty, &empty).unwrap(), 1.0);
    }

    #[test]
    fn tanimoto_counts() {
        // |a & b| = 3, |a | b| = 12.
        let a = Fingerprint::from_bits(64, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let b = Fingerprint::from_bits(64, &[5, 6, 7, 8, 9, 10, 11]);
        assert_eq!(tanimoto(&a, &b).unwrap(), 0.25);
    }

    #[test]
    fn width_mismatch_rejected() {
        let a = Fingerprint::empty(2048);
        let b = Fingerprint::empty(4096);
        assert_eq!(tanimoto(&a, &b), Err(FingerprintError::WidthMismatch(2048, 4096)));
    }
}
