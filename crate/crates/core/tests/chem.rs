//! Parser, canonical key and formula behavior on hand-checked molecules,
//! plus structural property tests.

use fp2mol_core::chem::{
    canonical_key, formula_distance, molecular_formula, parse_smiles, Bond, FormulaMap,
    MolecularGraph, SmilesError,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn permute(g: &MolecularGraph, perm: &[usize]) -> MolecularGraph {
    // perm[i] = new index of old atom i
    let mut atoms = vec![g.atoms[0]; g.atoms.len()];
    for (old, &new) in perm.iter().enumerate() {
        atoms[new] = g.atoms[old];
    }
    let bonds = g
        .bonds
        .iter()
        .map(|b| Bond { a: perm[b.a], b: perm[b.b], order: b.order, aromatic: b.aromatic })
        .collect();
    MolecularGraph { atoms, bonds }
}

#[test]
fn ethane_parse() {
    let g = parse_smiles("CC").unwrap();
    assert_eq!(g.atom_count(), 2);
    assert_eq!(g.bond_count(), 1);
    let h_total: u32 = g.atoms.iter().map(|a| a.hydrogens as u32).sum();
    assert_eq!(h_total, 6);
    assert_eq!(molecular_formula(&g), FormulaMap::from_pairs([("C", 2), ("H", 6)]));
}

#[test]
fn phenyl_propargylamine_counts() {
    // 3-phenyl-prop-2-ynylamine skeleton: 10 C, 1 N, 11 heavy-atom bonds.
    let g = parse_smiles("C#CCNCC1=CC=CC=C1").unwrap();
    let formula = molecular_formula(&g);
    assert_eq!(formula, FormulaMap::from_pairs([("C", 10), ("H", 11), ("N", 1)]));
    assert_eq!(g.bond_count(), 11);
}

#[test]
fn unclosed_ring_is_syntax_error() {
    match parse_smiles("C1CC") {
        Err(SmilesError::Syntax { .. }) => {}
        other => panic!("expected syntax error, got {other:?}"),
    }
}

#[test]
fn ammonium_ion() {
    let g = parse_smiles("[NH4+]").unwrap();
    assert_eq!(molecular_formula(&g), FormulaMap::from_pairs([("N", 1), ("H", 4)]));
    assert_eq!(g.atoms[0].charge, 1);
}

#[test]
fn overfilled_valence_is_valence_error() {
    match parse_smiles("C(C)(C)(C)(C)C") {
        Err(SmilesError::Valence(_)) => {}
        other => panic!("expected valence error, got {other:?}"),
    }
}

#[test]
fn canonical_key_examples() {
    let a = canonical_key(&parse_smiles("CCO").unwrap());
    let b = canonical_key(&parse_smiles("OCC").unwrap());
    let c = canonical_key(&parse_smiles("CCN").unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn aromatic_and_kekule_benzene_agree() {
    let a = canonical_key(&parse_smiles("c1ccccc1").unwrap());
    let b = canonical_key(&parse_smiles("C1=CC=CC=C1").unwrap());
    assert_eq!(a, b);
}

#[test]
fn canonical_key_invariant_under_permutation() {
    let corpus = [
        "C#CCNCC1=CC=CC=C1",
        "CC(C)CC1=CC=C(C=C1)C(C)C(=O)O",
        "c1ccc2c(c1)cccc2",
        "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
        "OC(=O)C(N)CS",
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for smiles in corpus {
        let g = parse_smiles(smiles).unwrap();
        let key = canonical_key(&g);
        for _ in 0..100 {
            let mut perm: Vec<usize> = (0..g.atom_count()).collect();
            perm.shuffle(&mut rng);
            let pg = permute(&g, &perm);
            assert_eq!(canonical_key(&pg), key, "permutation changed key of {smiles}");
        }
    }
}

#[test]
fn canonical_key_permutation_bulk_single_molecule() {
    // 500 relabelings of one molecule all map to one key.
    let g = parse_smiles("CC(C)CC1=CC=C(C=C1)C(C)C(=O)O").unwrap();
    let key = canonical_key(&g);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let mut perm: Vec<usize> = (0..g.atom_count()).collect();
        perm.shuffle(&mut rng);
        assert_eq!(canonical_key(&permute(&g, &perm)), key);
    }
}

#[test]
fn canonical_roundtrip_idempotent() {
    let corpus = [
        "CC",
        "C#CCNCC1=CC=CC=C1",
        "c1ccc2c(c1)cccc2",
        "[NH4+]",
        "CC(=O)[O-]",
        "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
        "C1CC1",
        "O=S(=O)(O)O",
        "FC(F)(F)c1ccccc1",
    ];
    for smiles in corpus {
        let g = parse_smiles(smiles).unwrap();
        let key = canonical_key(&g);
        let reparsed = parse_smiles(&key).unwrap_or_else(|e| {
            panic!("canonical key of {smiles} is not parseable: {key} ({e})")
        });
        assert_eq!(canonical_key(&reparsed), key, "idempotence failed for {smiles}");
    }
}

#[test]
fn formula_invariant_under_reindex() {
    let g = parse_smiles("CC(=O)NC1=CC=C(C=C1)O").unwrap();
    let f = molecular_formula(&g);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let mut perm: Vec<usize> = (0..g.atom_count()).collect();
        perm.shuffle(&mut rng);
        assert_eq!(molecular_formula(&permute(&g, &perm)), f);
    }
}

#[test]
fn parser_never_panics_on_random_ascii() {
    use rand::Rng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5000 {
        let len = rng.random_range(1..24);
        let s: String = (0..len)
            .map(|_| rng.random_range(0x20u8..0x7f) as char)
            .collect();
        match parse_smiles(&s) {
            Ok(g) => assert!(g.validate().is_ok(), "parsed graph fails validation: {s}"),
            Err(_) => {}
        }
    }
}

#[test]
fn parsed_graphs_pass_valence_validation() {
    for smiles in ["CCO", "c1ccncc1", "c1cc[nH]c1", "C[N+](C)(C)C", "S(=O)(=O)(O)O"] {
        let g = parse_smiles(smiles).unwrap();
        assert!(g.validate().is_ok(), "{smiles}");
    }
}

fn formula_strategy() -> impl Strategy<Value = FormulaMap> {
    proptest::collection::vec((0usize..7, 0u32..20), 0..6).prop_map(|pairs| {
        let symbols = ["C", "H", "N", "O", "S", "P", "Cl"];
        let mut f = FormulaMap::new();
        for (si, count) in pairs {
            f.add(symbols[si], count);
        }
        f
    })
}

proptest! {
    #[test]
    fn formula_distance_is_a_metric(
        f1 in formula_strategy(),
        f2 in formula_strategy(),
        f3 in formula_strategy(),
    ) {
        prop_assert_eq!(formula_distance(&f1, &f1), 0);
        prop_assert_eq!(formula_distance(&f1, &f2), formula_distance(&f2, &f1));
        let d12 = formula_distance(&f1, &f2);
        let d23 = formula_distance(&f2, &f3);
        let d13 = formula_distance(&f1, &f3);
        prop_assert!(d13 <= d12 + d23);
        // Identity of indiscernibles.
        if d12 == 0 {
            prop_assert_eq!(f1, f2);
        }
    }
}
