//! Canonical atom ranking by iterative neighborhood refinement with
//! deterministic tie-breaking, and the canonical SMILES writer built on it.
//!
//! The canonical key is the lexicographically smallest SMILES over all
//! refinement-consistent tie-break choices, so it is invariant under atom
//! relabeling. Aromatic flags are excluded from the key: the flag is a
//! perception artifact and the kekulized orders already determine the
//! structure, which also keeps key equality stable across the SELFIES
//! roundtrip.

use super::element::Element;
use super::graph::{BondOrder, MolecularGraph};

/// Canonical key: stable across runs, platforms and atom orderings.
pub fn canonical_key(g: &MolecularGraph) -> String {
    canonical_form(g).0
}

/// The graph relabeled into canonical atom order. Encoding the canonical
/// graph is what makes downstream token streams deterministic.
pub fn canonical_graph(g: &MolecularGraph) -> MolecularGraph {
    let (_, ranks) = canonical_form(g);
    apply_order(g, &ranks)
}

fn apply_order(g: &MolecularGraph, ranks: &[usize]) -> MolecularGraph {
    let n = g.atoms.len();
    let mut position = vec![0usize; n];
    for (i, &r) in ranks.iter().enumerate() {
        position[i] = r;
    }
    let mut out = MolecularGraph::default();
    out.atoms = vec![g.atoms[0]; n];
    for (i, atom) in g.atoms.iter().enumerate() {
        out.atoms[position[i]] = *atom;
    }
    let mut bonds: Vec<_> = g
        .bonds
        .iter()
        .map(|b| {
            let (a, bb) = (position[b.a], position[b.b]);
            let (a, bb) = (a.min(bb), a.max(bb));
            super::graph::Bond { a, b: bb, order: b.order, aromatic: b.aromatic }
        })
        .collect();
    bonds.sort_by_key(|b| (b.a, b.b));
    out.bonds = bonds;
    out
}

fn canonical_form(g: &MolecularGraph) -> (String, Vec<usize>) {
    assert!(!g.atoms.is_empty(), "canonical form of empty graph");
    let adj = g.adjacency();
    let initial: Vec<u64> = (0..g.atoms.len())
        .map(|i| {
            let a = &g.atoms[i];
            pack_invariant(a.element, a.charge, a.hydrogens, adj[i].len() as u8)
        })
        .collect();
    let ranks = refine(g, &adj, rank_by_key(&initial));
    search(g, &adj, ranks)
}

fn pack_invariant(element: Element, charge: i8, hydrogens: u8, degree: u8) -> u64 {
    let e = element as u64;
    let c = (charge as i16 + 16) as u64;
    ((e << 24) | (c << 16) | ((hydrogens as u64) << 8) | degree as u64) + 1
}

/// Assign dense ranks 0.. by sorting distinct keys.
fn rank_by_key<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

/// Iterative Morgan-style refinement until the partition stabilizes.
fn refine(g: &MolecularGraph, adj: &[Vec<(usize, usize)>], mut ranks: Vec<usize>) -> Vec<usize> {
    loop {
        let keys: Vec<(usize, Vec<(u8, usize)>)> = (0..g.atoms.len())
            .map(|i| {
                let mut nb: Vec<(u8, usize)> = adj[i]
                    .iter()
                    .map(|&(j, bi)| (g.bonds[bi].order.as_u8(), ranks[j]))
                    .collect();
                nb.sort();
                (ranks[i], nb)
            })
            .collect();
        let new_ranks = rank_by_key(&keys);
        if new_ranks == ranks {
            return ranks;
        }
        ranks = new_ranks;
    }
}

/// Branch over tied atoms, refine, and keep the lexicographically smallest
/// written form. The minimum over all choices is permutation-invariant.
fn search(
    g: &MolecularGraph,
    adj: &[Vec<(usize, usize)>],
    ranks: Vec<usize>,
) -> (String, Vec<usize>) {
    let n = g.atoms.len();
    let mut class_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &r) in ranks.iter().enumerate() {
        class_of[r].push(i);
    }
    let tied = class_of.iter().find(|c| c.len() > 1);
    let Some(tied) = tied else {
        let s = write_by_ranks(g, &ranks);
        return (s, ranks);
    };
    let mut best: Option<(String, Vec<usize>)> = None;
    for &a in tied {
        let keys: Vec<(usize, u8)> = (0..n)
            .map(|i| (ranks[i], if i == a { 0 } else { 1 }))
            .collect();
        let refined = refine(g, adj, rank_by_key(&keys));
        let cand = search(g, adj, refined);
        if best.as_ref().is_none_or(|b| cand.0 < b.0) {
            best = Some(cand);
        }
    }
    best.expect("nonempty tied class")
}

/// Write a SMILES string following the total order given by `ranks`.
/// DFS starts at the rank-0 atom and visits neighbors in ascending rank.
fn write_by_ranks(g: &MolecularGraph, ranks: &[usize]) -> String {
    let n = g.atoms.len();
    let adj = g.adjacency();
    let start = (0..n).min_by_key(|&i| ranks[i]).expect("nonempty");

    // First pass: spanning tree + ring-closure numbering in DFS order.
    let mut visited = vec![false; n];
    let mut bond_used = vec![false; g.bonds.len()];
    // (ring number, bond idx, opens here). Back edges are always discovered
    // from the later-visited endpoint, so the other endpoint opens.
    let mut ring_digits: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (child, bond idx)
    let mut next_ring = 1usize;

    // Iterative DFS; neighbor order sorted by rank.
    let mut order: Vec<Vec<(usize, usize)>> = adj
        .iter()
        .map(|nb| {
            let mut v = nb.clone();
            v.sort_by_key(|&(j, _)| ranks[j]);
            v
        })
        .collect();
    for v in order.iter_mut() {
        v.reverse(); // pop from back visits lowest rank first
    }

    let mut stack = vec![start];
    visited[start] = true;
    let mut cursor: Vec<Vec<(usize, usize)>> = order;
    while let Some(&v) = stack.last() {
        if let Some((w, bi)) = cursor[v].pop() {
            if bond_used[bi] {
                continue;
            }
            if visited[w] {
                // Back edge: number it at both endpoints.
                bond_used[bi] = true;
                ring_digits[w].push((next_ring, bi, true));
                ring_digits[v].push((next_ring, bi, false));
                next_ring += 1;
            } else {
                bond_used[bi] = true;
                visited[w] = true;
                children[v].push((w, bi));
                stack.push(w);
            }
        } else {
            stack.pop();
        }
    }

    // Second pass: emit.
    let mut out = String::new();
    emit(g, start, None, &children, &ring_digits, &mut out);
    out
}

fn emit(
    g: &MolecularGraph,
    v: usize,
    parent_bond: Option<usize>,
    children: &[Vec<(usize, usize)>],
    ring_digits: &[Vec<(usize, usize, bool)>],
    out: &mut String,
) {
    if let Some(bi) = parent_bond {
        out.push_str(bond_str(g.bonds[bi].order));
    }
    out.push_str(&atom_str(g, v));
    // Ring digits ascending; the bond order symbol is written at the
    // opening mention only.
    let mut digits = ring_digits[v].clone();
    digits.sort();
    for (num, bi, opens) in digits {
        if opens {
            out.push_str(bond_str(g.bonds[bi].order));
        }
        out.push_str(&ring_token(num));
    }
    let kids = &children[v];
    for (k, (w, bi)) in kids.iter().enumerate() {
        if k + 1 < kids.len() {
            out.push('(');
            emit(g, *w, Some(*bi), children, ring_digits, out);
            out.push(')');
        } else {
            emit(g, *w, Some(*bi), children, ring_digits, out);
        }
    }
}

fn ring_token(num: usize) -> String {
    if num < 10 {
        num.to_string()
    } else {
        format!("%{num:02}")
    }
}

fn bond_str(order: BondOrder) -> &'static str {
    match order {
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
    }
}

/// Atom token: bare when the organic-subset implicit-H rule reproduces the
/// stored hydrogen count, bracketed otherwise.
fn atom_str(g: &MolecularGraph, v: usize) -> String {
    let a = &g.atoms[v];
    let sym = a.element.symbol();
    if a.charge == 0 && a.element.organic_subset() {
        let used = g.bond_order_sum(v);
        let default_h = a
            .element
            .allowed_valences(0)
            .iter()
            .map(|&x| x as u32)
            .find(|&x| x >= used)
            .map(|x| (x - used) as u8);
        if default_h == Some(a.hydrogens) {
            return sym.to_string();
        }
    }
    let mut s = format!("[{sym}");
    match a.hydrogens {
        0 => {}
        1 => s.push('H'),
        h => s.push_str(&format!("H{h}")),
    }
    match a.charge {
        0 => {}
        1 => s.push('+'),
        -1 => s.push('-'),
        c if c > 0 => s.push_str(&format!("+{c}")),
        c => s.push_str(&format!("-{}", -c)),
    }
    s.push(']');
    s
}
