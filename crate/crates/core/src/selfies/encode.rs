//! Graph-to-token encoder. Walks the canonicalized graph depth-first;
//! non-final children become length-prefixed branches, back edges become
//! ring tokens anchored at the later-visited endpoint.

use crate::chem::{canonical_graph, BondOrder, Element, MolecularGraph};

use super::{hydrogen_fill, index_tokens, SelfiesError, SelfiesToken};

/// Encode a connected molecular graph as SELFIES tokens. Decoding the
/// result reproduces the molecule up to canonical-key equality.
pub fn encode_selfies(g: &MolecularGraph) -> Result<Vec<SelfiesToken>, SelfiesError> {
    if g.atoms.is_empty() {
        return Err(SelfiesError::UnsupportedFeature("empty graph".into()));
    }
    if !g.is_connected() {
        return Err(SelfiesError::UnsupportedFeature("disconnected graph".into()));
    }
    if g.atoms.iter().any(|a| a.element == Element::H) {
        return Err(SelfiesError::UnsupportedFeature("explicit hydrogen atom".into()));
    }
    let g = canonical_graph(g);
    let n = g.atoms.len();
    let adj = g.adjacency();

    // DFS in canonical index order; classify tree children and back edges.
    let mut visited = vec![false; n];
    let mut bond_used = vec![false; g.bonds.len()];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    // Ring closures keyed by the later-visited endpoint: (partner, bond).
    let mut closes_at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut preorder = vec![usize::MAX; n];
    let mut counter = 0usize;

    let mut stack = vec![0usize];
    visited[0] = true;
    preorder[0] = 0;
    counter += 1;
    let mut cursor: Vec<std::vec::IntoIter<(usize, usize)>> = adj
        .iter()
        .map(|nb| {
            let mut v = nb.clone();
            v.sort();
            v.into_iter()
        })
        .collect();
    while let Some(&v) = stack.last() {
        if let Some((w, bi)) = cursor[v].next() {
            if bond_used[bi] {
                continue;
            }
            bond_used[bi] = true;
            if visited[w] {
                closes_at[v].push((w, bi));
            } else {
                visited[w] = true;
                preorder[w] = counter;
                counter += 1;
                children[v].push((w, bi));
                stack.push(w);
            }
        } else {
            stack.pop();
        }
    }

    // Preorder numbering above used the stack discipline; emission order is
    // the same DFS, so creation order at decode equals `preorder`.
    let mut out = Vec::new();
    emit_atom(&g, 0, 1, &mut out);
    emit_rest(&g, 0, &children, &closes_at, &preorder, &mut out)?;
    Ok(out)
}

fn emit_rest(
    g: &MolecularGraph,
    v: usize,
    children: &[Vec<(usize, usize)>],
    closes_at: &[Vec<(usize, usize)>],
    preorder: &[usize],
    out: &mut Vec<SelfiesToken>,
) -> Result<(), SelfiesError> {
    for &(partner, bi) in &closes_at[v] {
        let back = preorder[v] - preorder[partner];
        debug_assert!(back >= 1);
        let q = (back - 1) as u64;
        let (name, operands) = if q < 16 { ("Ring1", 1u8) } else { ("Ring2", 2u8) };
        if q >= 256 {
            return Err(SelfiesError::UnsupportedFeature("ring span above 256".into()));
        }
        let prefix = order_prefix(g.bonds[bi].order);
        out.push(SelfiesToken(format!("[{prefix}{name}]")));
        out.extend(index_tokens(q, operands));
    }
    let kids = &children[v];
    for (k, &(w, bi)) in kids.iter().enumerate() {
        let order = g.bonds[bi].order.as_u8();
        if k + 1 < kids.len() {
            let mut sub = Vec::new();
            emit_atom(g, w, order, &mut sub);
            emit_rest(g, w, children, closes_at, preorder, &mut sub)?;
            let q = (sub.len() - 1) as u64;
            let (name, operands) = if q < 16 { ("Branch1", 1u8) } else { ("Branch2", 2u8) };
            if q >= 256 {
                return Err(SelfiesError::UnsupportedFeature("branch above 256 tokens".into()));
            }
            out.push(SelfiesToken(format!("[{name}]")));
            out.extend(index_tokens(q, operands));
            out.append(&mut sub);
        } else {
            emit_atom(g, w, order, out);
            emit_rest(g, w, children, closes_at, preorder, out)?;
        }
    }
    Ok(())
}

fn order_prefix(order: BondOrder) -> &'static str {
    match order {
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
    }
}

/// Atom token; the H count is annotated only when the default fill at
/// decode would differ from the stored hydrogens.
fn emit_atom(g: &MolecularGraph, v: usize, incoming_order: u8, out: &mut Vec<SelfiesToken>) {
    let a = &g.atoms[v];
    let used = g.bond_order_sum(v);
    let default_h = hydrogen_fill(a.element, a.charge, used, 0);
    let mut body = String::new();
    body.push_str(match incoming_order {
        2 => "=",
        3 => "#",
        _ => "",
    });
    body.push_str(a.element.symbol());
    if a.hydrogens != default_h {
        body.push('H');
        body.push_str(&a.hydrogens.min(9).to_string());
    }
    if a.charge != 0 {
        body.push(if a.charge > 0 { '+' } else { '-' });
        body.push_str(&a.charge.abs().min(9).to_string());
    }
    out.push(SelfiesToken(format!("[{body}]")));
}
