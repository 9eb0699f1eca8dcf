//! Exhaustive category-law checks over every total lens between small
//! polynomials: identity and associativity of composition, and the
//! equivalence-relation axioms of lens equality.

use polyverse::poly::{comp_lens, eq_lens, id_lens, mk_poly, Lens, Poly};

fn small_polys() -> Vec<Poly> {
    let mut out = vec![mk_poly(vec![])];
    for a in 0..=2usize {
        out.push(mk_poly(vec![a]));
        for b in 0..=2usize {
            out.push(mk_poly(vec![a, b]));
        }
    }
    out
}

fn all_forwards(src: usize, tgt: usize) -> Vec<Vec<usize>> {
    if src == 0 {
        return vec![vec![]];
    }
    if tgt == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; src];
    loop {
        out.push(cur.clone());
        let mut done = true;
        for slot in cur.iter_mut().rev() {
            *slot += 1;
            if *slot < tgt {
                done = false;
                break;
            }
            *slot = 0;
        }
        if done {
            return out;
        }
    }
}

fn all_tables(len: usize, entry_bound: usize) -> Vec<Vec<usize>> {
    all_forwards(len, entry_bound)
}

fn all_lenses(p: &Poly, q: &Poly) -> Vec<Lens> {
    let mut out = Vec::new();
    for forward in all_forwards(p.positions(), q.positions()) {
        let mut per_pos: Vec<Vec<Vec<usize>>> = Vec::with_capacity(p.positions());
        for a in 0..p.positions() {
            per_pos.push(all_tables(q.arity(forward[a]), p.arity(a)));
        }
        let mut choice = vec![0usize; p.positions()];
        if per_pos.iter().any(|t| t.is_empty()) {
            continue;
        }
        loop {
            let backward: Vec<Vec<usize>> = choice
                .iter()
                .enumerate()
                .map(|(a, &c)| per_pos[a][c].clone())
                .collect();
            out.push(Lens::new(p.clone(), q.clone(), forward.clone(), backward).unwrap());
            let mut done = true;
            for a in (0..p.positions()).rev() {
                choice[a] += 1;
                if choice[a] < per_pos[a].len() {
                    done = false;
                    break;
                }
                choice[a] = 0;
            }
            if done {
                break;
            }
        }
    }
    out
}

#[test]
fn identity_laws_exhaustive() {
    let polys = small_polys();
    let mut seen = 0usize;
    for p in &polys {
        for q in &polys {
            for f in all_lenses(p, q) {
                let left = comp_lens(&id_lens(p), &f).unwrap();
                let right = comp_lens(&f, &id_lens(q)).unwrap();
                assert!(eq_lens(&left, &f).unwrap().equal);
                assert!(eq_lens(&right, &f).unwrap().equal);
                seen += 1;
            }
        }
    }
    assert_eq!(seen, 633);
}

#[test]
fn composition_associativity_exhaustive() {
    let polys = small_polys();
    let n = polys.len();
    let mut lenses: Vec<Vec<Vec<Lens>>> = Vec::with_capacity(n);
    for p in &polys {
        lenses.push(polys.iter().map(|q| all_lenses(p, q)).collect());
    }
    let mut chains = 0usize;
    for qi in 0..n {
        let ins: Vec<&Lens> = (0..n).flat_map(|pi| lenses[pi][qi].iter()).collect();
        if ins.is_empty() {
            continue;
        }
        for ri in 0..n {
            let outs: Vec<&Lens> = (0..n).flat_map(|si| lenses[ri][si].iter()).collect();
            if outs.is_empty() {
                continue;
            }
            for g in &lenses[qi][ri] {
                let ghs: Vec<Lens> = outs.iter().map(|h| comp_lens(g, h).unwrap()).collect();
                for f in &ins {
                    let fg = comp_lens(f, g).unwrap();
                    for (h, gh) in outs.iter().zip(&ghs) {
                        let left = comp_lens(&fg, h).unwrap();
                        let right = comp_lens(f, gh).unwrap();
                        assert_eq!(left.forward_table(), right.forward_table());
                        assert_eq!(left.backward_tables(), right.backward_tables());
                        chains += 1;
                    }
                }
            }
        }
    }
    assert!(chains > 100_000);
}

#[test]
fn lens_equality_is_an_equivalence() {
    let polys = small_polys();
    for p in &polys {
        for q in &polys {
            let fs = all_lenses(p, q);
            for f in &fs {
                assert!(eq_lens(f, f).unwrap().equal);
            }
            for f in &fs {
                for g in &fs {
                    let fg = eq_lens(f, g).unwrap().equal;
                    assert_eq!(fg, eq_lens(g, f).unwrap().equal);
                    if fg {
                        for h in &fs {
                            if eq_lens(g, h).unwrap().equal {
                                assert!(eq_lens(f, h).unwrap().equal);
                            }
                        }
                    }
                }
            }
        }
    }
}

// Distinct enumerated lenses are pairwise unequal, so equality is exactly
// table identity on this family.
#[test]
fn enumerated_lenses_are_distinct() {
    let polys = small_polys();
    for p in &polys {
        for q in &polys {
            let fs = all_lenses(p, q);
            for (i, f) in fs.iter().enumerate() {
                for g in &fs[i + 1..] {
                    assert!(!eq_lens(f, g).unwrap().equal);
                }
            }
        }
    }
}
