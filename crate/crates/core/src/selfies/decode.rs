//! Total decoder: any in-alphabet token sequence yields a valence-valid
//! graph. Bond orders are clipped to remaining budgets; atoms that cannot
//! bond are dropped; dangling branch and ring material is ignored.

use crate::chem::{Atom, Bond, BondOrder, Element, MolecularGraph};

use super::{bond_capacity, hydrogen_fill, index_value, SelfiesError, SelfiesToken, TokenKind};

struct Builder {
    elements: Vec<(Element, i8, Option<u8>)>,
    caps: Vec<u32>,
    used: Vec<u32>,
    bonds: Vec<(usize, usize, u8)>,
}

impl Builder {
    fn remaining(&self, i: usize) -> u32 {
        self.caps[i] - self.used[i]
    }

    fn has_bond(&self, a: usize, b: usize) -> bool {
        self.bonds.iter().any(|&(x, y, _)| (x == a && y == b) || (x == b && y == a))
    }
}

/// Decode tokens into a molecular graph. The only possible error is an
/// unknown token; every alphabet sequence decodes.
pub fn decode_selfies(tokens: &[SelfiesToken]) -> Result<MolecularGraph, SelfiesError> {
    let kinds: Vec<TokenKind> = tokens.iter().map(|t| t.kind()).collect();
    let mut b = Builder { elements: Vec::new(), caps: Vec::new(), used: Vec::new(), bonds: Vec::new() };
    derive(&kinds, &tokens_values(tokens), None, &mut b);

    let mut g = MolecularGraph::default();
    for (i, &(element, charge, min_h)) in b.elements.iter().enumerate() {
        let hydrogens = hydrogen_fill(element, charge, b.used[i], min_h.unwrap_or(0) as u32);
        g.atoms.push(Atom { element, charge, hydrogens });
    }
    for (a, bb, order) in b.bonds {
        g.bonds.push(Bond {
            a,
            b: bb,
            order: BondOrder::from_u8(order).expect("order 1..3"),
            aromatic: false,
        });
    }
    debug_assert!(g.validate().is_ok(), "decoder produced invalid graph");
    Ok(g)
}

fn tokens_values(tokens: &[SelfiesToken]) -> Vec<u64> {
    tokens.iter().map(index_value).collect()
}

/// Process a token slice with a given attachment atom. Branch bodies
/// recurse with the branch's anchor as attachment.
fn derive(kinds: &[TokenKind], values: &[u64], attach: Option<usize>, b: &mut Builder) {
    let mut current = attach;
    let mut i = 0usize;
    while i < kinds.len() {
        match kinds[i] {
            TokenKind::Atom { order, element, min_h, charge } => {
                i += 1;
                let cap = bond_capacity(element, charge, min_h);
                match current {
                    None => {
                        b.elements.push((element, charge, min_h));
                        b.caps.push(cap);
                        b.used.push(0);
                        current = Some(b.elements.len() - 1);
                    }
                    Some(cur) => {
                        let bond = (order as u32).min(b.remaining(cur)).min(cap);
                        if bond == 0 {
                            continue; // no budget: atom dropped
                        }
                        b.elements.push((element, charge, min_h));
                        b.caps.push(cap);
                        b.used.push(bond);
                        let new = b.elements.len() - 1;
                        b.used[cur] += bond;
                        b.bonds.push((cur, new, bond as u8));
                        current = Some(new);
                    }
                }
            }
            TokenKind::Branch { operands } => {
                i += 1;
                let avail = kinds.len() - i;
                let take = (operands as usize).min(avail);
                let q = values[i..i + take].iter().fold(0u64, |acc, &v| acc * 16 + v);
                i += take;
                if take < operands as usize {
                    break; // operands ran off the end
                }
                let body_len = ((q + 1) as usize).min(kinds.len() - i);
                if current.is_some() {
                    derive(&kinds[i..i + body_len], &values[i..i + body_len], current, b);
                }
                i += body_len;
            }
            TokenKind::Ring { order, operands } => {
                i += 1;
                let avail = kinds.len() - i;
                let take = (operands as usize).min(avail);
                let q = values[i..i + take].iter().fold(0u64, |acc, &v| acc * 16 + v);
                i += take;
                if take < operands as usize {
                    break;
                }
                let Some(cur) = current else { continue };
                let back = (q + 1) as usize;
                if back > cur {
                    continue; // reaches before the first atom
                }
                let partner = cur - back;
                if b.has_bond(cur, partner) {
                    continue;
                }
                let bond = (order as u32).min(b.remaining(cur)).min(b.remaining(partner));
                if bond == 0 {
                    continue;
                }
                b.used[cur] += bond;
                b.used[partner] += bond;
                b.bonds.push((partner, cur, bond as u8));
            }
        }
    }
}
