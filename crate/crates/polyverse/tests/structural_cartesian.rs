//! Every structural lens in the calculus must be Cartesian: identities,
//! composites and parallel products of Cartesian lenses, the associator and
//! unitor isos, the duoidal map, and the up-arrow structure lenses.

use polyverse::monoidal::{
    assoc, assoc_inv, indep, lens_compose_prod, unitl, unitl_inv, unitr, unitr_inv,
};
use polyverse::poly::{comp_lens, id_lens, is_cartesian, mk_poly, Lens, Poly};
use polyverse::uparrow::{up_curry_simple, up_distr_simple, up_to_unit, up_unit_src, up_unit_src_inv};

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

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for slot in 0..=rest.len() {
            let mut perm = rest.clone();
            perm.insert(slot, n - 1);
            out.push(perm);
        }
    }
    out
}

// All Cartesian lenses p -> q: arity-preserving forwards with one backward
// permutation per position.
fn cartesian_lenses(p: &Poly, q: &Poly) -> Vec<Lens> {
    let mut out = Vec::new();
    let forwards: Vec<Vec<usize>> = if p.positions() == 0 {
        vec![vec![]]
    } else {
        let mut acc = vec![vec![]];
        for a in 0..p.positions() {
            let mut next = Vec::new();
            for prefix in &acc {
                for b in 0..q.positions() {
                    if q.arity(b) == p.arity(a) {
                        let mut w = prefix.clone();
                        w.push(b);
                        next.push(w);
                    }
                }
            }
            acc = next;
        }
        acc
    };
    for forward in forwards {
        let mut per_pos: Vec<Vec<Vec<usize>>> = Vec::new();
        for a in 0..p.positions() {
            per_pos.push(permutations(p.arity(a)));
        }
        let mut choice = vec![0usize; p.positions()];
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

fn all_total_lenses(p: &Poly, q: &Poly) -> Vec<Lens> {
    let mut out = Vec::new();
    let forwards: Vec<Vec<usize>> = if p.positions() == 0 {
        vec![vec![]]
    } else if q.positions() == 0 {
        return out;
    } else {
        let mut acc = vec![vec![]];
        for _ in 0..p.positions() {
            let mut next = Vec::new();
            for prefix in &acc {
                for b in 0..q.positions() {
                    let mut w = prefix.clone();
                    w.push(b);
                    next.push(w);
                }
            }
            acc = next;
        }
        acc
    };
    'forward: for forward in forwards {
        let mut per_pos: Vec<Vec<Vec<usize>>> = Vec::new();
        for a in 0..p.positions() {
            let mut tables = vec![vec![]];
            for _ in 0..q.arity(forward[a]) {
                let mut next = Vec::new();
                for prefix in &tables {
                    for d in 0..p.arity(a) {
                        let mut w: Vec<usize> = prefix.clone();
                        w.push(d);
                        next.push(w);
                    }
                }
                tables = next;
            }
            if tables.is_empty() {
                continue 'forward;
            }
            per_pos.push(tables);
        }
        let mut choice = vec![0usize; p.positions()];
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
fn identities_and_cartesian_composites() {
    let polys = small_polys();
    for p in &polys {
        assert!(is_cartesian(&id_lens(p)));
    }
    for p in &polys {
        for q in &polys {
            for f in cartesian_lenses(p, q) {
                assert!(is_cartesian(&f));
                for r in &polys {
                    for g in cartesian_lenses(q, r) {
                        assert!(is_cartesian(&comp_lens(&f, &g).unwrap()));
                    }
                }
            }
        }
    }
}

#[test]
fn composition_product_preserves_cartesian() {
    let polys = small_polys();
    for p in &polys {
        for q in &polys {
            let fs = cartesian_lenses(p, q);
            for f in &fs {
                for r in &polys {
                    for s in &polys {
                        for g in cartesian_lenses(r, s) {
                            assert!(is_cartesian(&lens_compose_prod(f, &g).unwrap()));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn structural_isos_are_cartesian() {
    let polys = small_polys();
    for p in &polys {
        assert!(is_cartesian(&unitl(p).unwrap()));
        assert!(is_cartesian(&unitl_inv(p).unwrap()));
        assert!(is_cartesian(&unitr(p).unwrap()));
        assert!(is_cartesian(&unitr_inv(p).unwrap()));
        for q in &polys {
            assert!(is_cartesian(&indep(p, q).unwrap()));
            for r in &polys {
                assert!(is_cartesian(&assoc(p, q, r).unwrap()));
                assert!(is_cartesian(&assoc_inv(p, q, r).unwrap()));
            }
        }
    }
}

#[test]
fn up_arrow_structure_lenses_are_cartesian() {
    let polys = small_polys();
    for p in &polys {
        assert!(is_cartesian(&up_unit_src(p).unwrap()));
        assert!(is_cartesian(&up_unit_src_inv(p).unwrap()));
    }
    for p in &polys {
        for q in &polys {
            for f in all_total_lenses(p, q) {
                assert!(is_cartesian(&up_to_unit(&f).unwrap()));
            }
        }
    }
    for p in &polys {
        for r in &polys {
            for t in &polys {
                assert!(is_cartesian(&up_curry_simple(p, r, t).unwrap()));
                assert!(is_cartesian(&up_distr_simple(p, r, t).unwrap()));
            }
        }
    }
}
