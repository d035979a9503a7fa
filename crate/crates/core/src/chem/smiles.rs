//! SMILES subset parser: atoms, bonds (- = # :), branches, ring closures
//! (including %nn), bracket atoms with charge and H count. Stereo markers
//! and isotopes are accepted and discarded with a warning. Aromatic input
//! is kekulized; the aromatic flag is retained per bond.

use std::collections::HashMap;

use thiserror::Error;

use super::element::Element;
use super::graph::{Atom, Bond, BondOrder, GraphError, MolecularGraph};

#[derive(Debug, Error)]
pub enum SmilesError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("valence error: {0}")]
    Valence(String),
}

impl From<GraphError> for SmilesError {
    fn from(e: GraphError) -> Self {
        SmilesError::Valence(e.to_string())
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> SmilesError {
    SmilesError::Syntax { pos, msg: msg.into() }
}

/// Bond symbol as written, before kekulization resolves aromatic bonds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BondSym {
    Single,
    Double,
    Triple,
    Aromatic,
}

#[derive(Debug, Clone)]
struct PendingAtom {
    element: Element,
    aromatic: bool,
    charge: i8,
    /// H count pinned by a bracket atom; None for organic-subset atoms.
    bracket_h: Option<u8>,
}

#[derive(Debug, Clone, Copy)]
struct PendingBond {
    a: usize,
    b: usize,
    sym: Option<BondSym>,
}

pub fn parse_smiles(text: &str) -> Result<MolecularGraph, SmilesError> {
    parse_smiles_with_warnings(text).map(|(g, _)| g)
}

/// Full parse entry point. Warnings report discarded stereo and isotope
/// annotations.
pub fn parse_smiles_with_warnings(
    text: &str,
) -> Result<(MolecularGraph, Vec<String>), SmilesError> {
    if text.is_empty() {
        return Err(syntax(0, "empty input"));
    }
    if !text.is_ascii() {
        return Err(syntax(0, "non-ASCII input"));
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        branch_stack: Vec::new(),
        rings: HashMap::new(),
        prev: None,
        pending: None,
        warnings: Vec::new(),
    };
    p.run()?;
    let graph = p.finish()?;
    Ok((graph, p.warnings))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    atoms: Vec<PendingAtom>,
    bonds: Vec<PendingBond>,
    branch_stack: Vec<usize>,
    rings: HashMap<u16, (usize, Option<BondSym>, usize)>,
    prev: Option<usize>,
    pending: Option<BondSym>,
    warnings: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        while let Some(c) = self.peek() {
            match c {
                b'A'..=b'Z' | b'b' | b'c' | b'n' | b'o' | b'p' | b's' => self.atom_bare()?,
                b'[' => self.atom_bracket()?,
                b'-' => self.bond_sym(BondSym::Single)?,
                b'=' => self.bond_sym(BondSym::Double)?,
                b'#' => self.bond_sym(BondSym::Triple)?,
                b':' => self.bond_sym(BondSym::Aromatic)?,
                b'/' | b'\\' => {
                    self.warnings.push(format!(
                        "discarded stereo bond marker '{}' at byte {}",
                        c as char, self.pos
                    ));
                    self.bond_sym(BondSym::Single)?;
                }
                b'(' => {
                    let prev = self
                        .prev
                        .ok_or_else(|| syntax(self.pos, "branch before any atom"))?;
                    if self.pending.is_some() {
                        return Err(syntax(self.pos, "bond symbol before branch open"));
                    }
                    self.branch_stack.push(prev);
                    self.pos += 1;
                }
                b')' => {
                    if self.pending.is_some() {
                        return Err(syntax(self.pos, "dangling bond symbol before ')'"));
                    }
                    let restored = self
                        .branch_stack
                        .pop()
                        .ok_or_else(|| syntax(self.pos, "unmatched ')'"))?;
                    self.prev = Some(restored);
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let d = (c - b'0') as u16;
                    self.pos += 1;
                    self.ring_digit(d)?;
                }
                b'%' => {
                    self.pos += 1;
                    let d1 = self.bump().filter(u8::is_ascii_digit).ok_or_else(|| {
                        syntax(self.pos, "expected two digits after '%'")
                    })?;
                    let d2 = self.bump().filter(u8::is_ascii_digit).ok_or_else(|| {
                        syntax(self.pos, "expected two digits after '%'")
                    })?;
                    let d = (d1 - b'0') as u16 * 10 + (d2 - b'0') as u16;
                    self.ring_digit(d)?;
                }
                b'.' => return Err(syntax(self.pos, "multi-fragment '.' not supported")),
                _ => {
                    return Err(syntax(self.pos, format!("unexpected character '{}'", c as char)))
                }
            }
        }
        if let Some((&num, &(_, _, pos))) = self.rings.iter().min_by_key(|(_, v)| v.2) {
            return Err(syntax(pos, format!("unclosed ring bond {num}")));
        }
        if !self.branch_stack.is_empty() {
            return Err(syntax(self.pos, "unclosed branch '('"));
        }
        if self.pending.is_some() {
            return Err(syntax(self.pos, "dangling bond symbol at end of input"));
        }
        Ok(())
    }

    fn bond_sym(&mut self, sym: BondSym) -> Result<(), SmilesError> {
        if self.prev.is_none() {
            return Err(syntax(self.pos, "bond symbol before any atom"));
        }
        if self.pending.is_some() {
            return Err(syntax(self.pos, "two bond symbols in a row"));
        }
        self.pending = Some(sym);
        self.pos += 1;
        Ok(())
    }

    fn push_atom(&mut self, atom: PendingAtom) {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        if let Some(prev) = self.prev {
            let sym = self.pending.take();
            self.bonds.push(PendingBond { a: prev, b: idx, sym });
        } else {
            self.pending = None;
        }
        self.prev = Some(idx);
    }

    fn atom_bare(&mut self) -> Result<(), SmilesError> {
        let start = self.pos;
        let c = self.bump().expect("peeked");
        let aromatic = c.is_ascii_lowercase();
        let sym = if c.is_ascii_uppercase() {
            // Two-letter symbols: only Cl and Br in the organic subset.
            if (c == b'C' && self.peek() == Some(b'l')) || (c == b'B' && self.peek() == Some(b'r'))
            {
                let second = self.bump().expect("peeked");
                format!("{}{}", c as char, second as char)
            } else {
                (c as char).to_string()
            }
        } else {
            (c.to_ascii_uppercase() as char).to_string()
        };
        let element = Element::from_symbol(&sym)
            .ok_or_else(|| syntax(start, format!("unknown element '{sym}'")))?;
        if aromatic && !element.aromatic_candidate() {
            return Err(syntax(start, format!("element '{sym}' cannot be aromatic")));
        }
        if element == Element::H {
            return Err(syntax(start, "bare 'H' atom; use bracket notation"));
        }
        self.push_atom(PendingAtom { element, aromatic, charge: 0, bracket_h: None });
        Ok(())
    }

    fn atom_bracket(&mut self) -> Result<(), SmilesError> {
        let start = self.pos;
        self.pos += 1; // consume '['
        // Isotope digits are parsed and discarded.
        let mut saw_isotope = false;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            saw_isotope = true;
            self.pos += 1;
        }
        if saw_isotope {
            self.warnings.push(format!("discarded isotope label at byte {start}"));
        }
        let c = self
            .bump()
            .ok_or_else(|| syntax(start, "unterminated bracket atom"))?;
        let aromatic = c.is_ascii_lowercase();
        if !c.is_ascii_alphabetic() {
            return Err(syntax(start, "expected element symbol in bracket"));
        }
        let mut sym = (c.to_ascii_uppercase() as char).to_string();
        // Two-letter element: second letter lowercase and the pair is known.
        if !aromatic {
            if let Some(c2) = self.peek().filter(u8::is_ascii_lowercase) {
                let two = format!("{}{}", c as char, c2 as char);
                if Element::from_symbol(&two).is_some() {
                    sym = two;
                    self.pos += 1;
                }
            }
        }
        let element = Element::from_symbol(&sym)
            .ok_or_else(|| syntax(start, format!("unknown element '{sym}'")))?;
        if aromatic && !element.aromatic_candidate() {
            return Err(syntax(start, format!("element '{sym}' cannot be aromatic")));
        }

        // Chirality markers discarded.
        while self.peek() == Some(b'@') {
            self.pos += 1;
            if self.peek() == Some(b'@') {
                self.pos += 1;
            }
            self.warnings.push(format!("discarded chirality marker at byte {start}"));
        }

        // Explicit hydrogen count.
        let mut hcount: u8 = 0;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            hcount = 1;
            if let Some(d) = self.peek().filter(u8::is_ascii_digit) {
                self.pos += 1;
                hcount = d - b'0';
            }
        }

        // Charge: '+', '-', optionally repeated or followed by a digit.
        let mut charge: i8 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let unit: i8 = if sign == b'+' { 1 } else { -1 };
            if let Some(d) = self.peek().filter(u8::is_ascii_digit) {
                self.pos += 1;
                charge = unit * (d - b'0') as i8;
            } else {
                charge = unit;
                while self.peek() == Some(sign) {
                    self.pos += 1;
                    charge = charge.saturating_add(unit);
                }
            }
        }

        if self.bump() != Some(b']') {
            return Err(syntax(start, "expected ']' to close bracket atom"));
        }
        self.push_atom(PendingAtom { element, aromatic, charge, bracket_h: Some(hcount) });
        Ok(())
    }

    fn ring_digit(&mut self, num: u16) -> Result<(), SmilesError> {
        let here = self
            .prev
            .ok_or_else(|| syntax(self.pos, "ring closure before any atom"))?;
        let sym = self.pending.take();
        if let Some((other, open_sym, open_pos)) = self.rings.remove(&num) {
            if other == here {
                return Err(syntax(self.pos, format!("ring bond {num} closes on itself")));
            }
            let bond_sym = match (open_sym, sym) {
                (Some(a), Some(b)) if a != b => {
                    return Err(syntax(
                        self.pos,
                        format!("ring bond {num} ordered differently at open ({open_pos}) and close"),
                    ));
                }
                (a, b) => a.or(b),
            };
            if self
                .bonds
                .iter()
                .any(|bd| (bd.a == other && bd.b == here) || (bd.a == here && bd.b == other))
            {
                return Err(syntax(self.pos, format!("ring bond {num} duplicates an existing bond")));
            }
            self.bonds.push(PendingBond { a: other, b: here, sym: bond_sym });
        } else {
            self.rings.insert(num, (here, sym, self.pos));
        }
        Ok(())
    }

    /// Resolve aromatic bonds via kekulization, assign hydrogens, validate.
    fn finish(&mut self) -> Result<MolecularGraph, SmilesError> {
        let n = self.atoms.len();
        if n == 0 {
            return Err(syntax(0, "no atoms"));
        }
        // Resolve bond symbols: default bond between two aromatic atoms is
        // aromatic, otherwise single.
        let resolved: Vec<(usize, usize, BondSym)> = self
            .bonds
            .iter()
            .map(|b| {
                let sym = b.sym.unwrap_or({
                    if self.atoms[b.a].aromatic && self.atoms[b.b].aromatic {
                        BondSym::Aromatic
                    } else {
                        BondSym::Single
                    }
                });
                (b.a, b.b, sym)
            })
            .collect();

        for (a, b, sym) in &resolved {
            if *sym == BondSym::Aromatic && !(self.atoms[*a].aromatic && self.atoms[*b].aromatic) {
                return Err(syntax(0, "aromatic bond between non-aromatic atoms"));
            }
        }

        let orders = kekulize(&self.atoms, &resolved)?;

        let mut graph = MolecularGraph::default();
        for pa in &self.atoms {
            graph.atoms.push(Atom { element: pa.element, charge: pa.charge, hydrogens: 0 });
        }
        for ((a, b, sym), order) in resolved.iter().zip(orders) {
            graph.bonds.push(Bond {
                a: *a,
                b: *b,
                order,
                aromatic: *sym == BondSym::Aromatic,
            });
        }

        // Hydrogen completion: bracket atoms pin their count; bare atoms fill
        // to the smallest allowed valence >= bond order sum.
        for i in 0..n {
            let used = graph.bond_order_sum(i);
            let pa = &self.atoms[i];
            graph.atoms[i].hydrogens = match pa.bracket_h {
                Some(h) => h,
                None => {
                    let allowed = pa.element.allowed_valences(pa.charge);
                    let target =
                        allowed.iter().map(|&v| v as u32).find(|&v| v >= used).ok_or_else(
                            || {
                                SmilesError::Valence(format!(
                                    "atom {} ({}) has bond order sum {} exceeding every allowed valence {:?}",
                                    i,
                                    pa.element.symbol(),
                                    used,
                                    allowed
                                ))
                            },
                        )?;
                    (target - used) as u8
                }
            };
        }

        graph.validate()?;
        Ok(graph)
    }
}

/// Assign kekulized orders to every bond. Aromatic bonds get Single or
/// Double from a perfect matching over atoms that need one double bond.
fn kekulize(
    atoms: &[PendingAtom],
    bonds: &[(usize, usize, BondSym)],
) -> Result<Vec<BondOrder>, SmilesError> {
    let n = atoms.len();
    let mut orders: Vec<BondOrder> = bonds
        .iter()
        .map(|(_, _, sym)| match sym {
            BondSym::Single | BondSym::Aromatic => BondOrder::Single,
            BondSym::Double => BondOrder::Double,
            BondSym::Triple => BondOrder::Triple,
        })
        .collect();

    let aromatic_bond_idx: Vec<usize> = bonds
        .iter()
        .enumerate()
        .filter(|(_, (_, _, s))| *s == BondSym::Aromatic)
        .map(|(i, _)| i)
        .collect();
    if aromatic_bond_idx.is_empty() {
        if atoms.iter().any(|a| a.aromatic) {
            return Err(syntax(0, "aromatic atom without aromatic bonds"));
        }
        return Ok(orders);
    }

    // Which aromatic atoms need exactly one double bond from the pi system.
    let mut needs = vec![false; n];
    for (i, pa) in atoms.iter().enumerate() {
        if !pa.aromatic {
            continue;
        }
        let degree = bonds.iter().filter(|(a, b, _)| *a == i || *b == i).count();
        let has_exo_double = bonds
            .iter()
            .any(|(a, b, s)| (*a == i || *b == i) && matches!(s, BondSym::Double | BondSym::Triple));
        needs[i] = match pa.element {
            Element::C => !has_exo_double && pa.charge >= 0,
            Element::B => false,
            Element::N | Element::P => {
                let h = pa.bracket_h.unwrap_or(0);
                if has_exo_double {
                    false
                } else if pa.charge > 0 {
                    // pyridinium-like [nH+] carries H; n+ with 3 neighbors
                    // still takes a double bond
                    h == 0 && degree <= 3
                } else {
                    h == 0 && degree == 2
                }
            }
            Element::O | Element::S => pa.charge > 0,
            _ => false,
        };
    }

    // Adjacency restricted to aromatic bonds joining two needy atoms.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &bi in &aromatic_bond_idx {
        let (a, b, _) = bonds[bi];
        if needs[a] && needs[b] {
            adj[a].push((b, bi));
            adj[b].push((a, bi));
        }
    }

    // Backtracking perfect matching in fixed atom order: deterministic.
    let mut matched: Vec<Option<usize>> = vec![None; n];
    if !match_atoms(0, &needs, &adj, &mut matched) {
        return Err(syntax(0, "cannot kekulize aromatic system"));
    }
    for (i, m) in matched.iter().enumerate() {
        if let Some(bi) = m {
            let (a, _, _) = bonds[*bi];
            if a == i {
                orders[*bi] = BondOrder::Double;
            }
        }
    }
    Ok(orders)
}

fn match_atoms(
    from: usize,
    needs: &[bool],
    adj: &[Vec<(usize, usize)>],
    matched: &mut Vec<Option<usize>>,
) -> bool {
    let Some(i) = (from..needs.len()).find(|&i| needs[i] && matched[i].is_none()) else {
        return true;
    };
    for &(j, bi) in &adj[i] {
        if matched[j].is_none() {
            matched[i] = Some(bi);
            matched[j] = Some(bi);
            if match_atoms(i + 1, needs, adj, matched) {
                return true;
            }
            matched[i] = None;
            matched[j] = None;
        }
    }
    false
}
