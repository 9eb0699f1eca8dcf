//! The two universe-level probes: Kleisli composition through the
//! proposition universe against direct partial-function composition, and
//! weak-but-not-full univalence of the truncated finite-set universe.

use polyverse::poly::{mk_poly, Lens, Poly};
use polyverse::universes::{
    check_weak_univalence, kleisli_compose, kleisli_compose_via_monad, mk_ufin, PartialFn,
};

fn all_partial_fns(domain: usize, codomain: usize) -> Vec<PartialFn> {
    let mut out = Vec::new();
    let options = codomain + 1;
    let total = options.pow(domain as u32);
    for code in 0..total {
        let mut entries = Vec::with_capacity(domain);
        let mut rest = code;
        for _ in 0..domain {
            let digit = rest % options;
            rest /= options;
            entries.push(if digit == 0 { None } else { Some(digit - 1) });
        }
        out.push(PartialFn::new(domain, codomain, entries).unwrap());
    }
    out
}

#[test]
fn kleisli_composition_agrees_with_table_composition() {
    let mut pairs = 0usize;
    for a in 0..=3usize {
        for b in 0..=3usize {
            for c in 0..=3usize {
                let fs = all_partial_fns(a, b);
                let gs = all_partial_fns(b, c);
                for f in &fs {
                    for g in &gs {
                        let direct = kleisli_compose(f, g).unwrap();
                        let routed = kleisli_compose_via_monad(f, g).unwrap();
                        assert_eq!(direct, routed);
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 4096);
}

#[test]
fn kleisli_size_three_square_count() {
    let fs = all_partial_fns(3, 3);
    assert_eq!(fs.len(), 64);
    let mut pairs = 0usize;
    for f in &fs {
        for g in &fs {
            assert_eq!(
                kleisli_compose(f, g).unwrap(),
                kleisli_compose_via_monad(f, g).unwrap()
            );
            pairs += 1;
        }
    }
    assert_eq!(pairs, 4096);
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

// Every Cartesian lens into the finite-set universe: the forward table is
// forced (the code with the matching arity), the backward tables range over
// all permutations.
fn cartesian_lenses_into(u: &Poly, p: &Poly) -> Vec<Lens> {
    let forward: Vec<usize> = p.arities().to_vec();
    let mut per_pos: Vec<Vec<Vec<usize>>> = Vec::new();
    for a in 0..p.positions() {
        per_pos.push(permutations(p.arity(a)));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; p.positions()];
    loop {
        let backward: Vec<Vec<usize>> = choice
            .iter()
            .enumerate()
            .map(|(a, &c)| per_pos[a][c].clone())
            .collect();
        out.push(Lens::new(p.clone(), u.clone(), forward.clone(), backward).unwrap());
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
            return out;
        }
    }
}

#[test]
fn weak_univalence_holds_and_full_univalence_fails() {
    let u = mk_ufin(4).unwrap();
    let mut sources: Vec<Poly> = vec![mk_poly(vec![])];
    for a in 0..=4usize {
        sources.push(mk_poly(vec![a]));
        for b in 0..=4usize {
            sources.push(mk_poly(vec![a, b]));
        }
    }
    let mut full_failures = 0usize;
    let mut pairs = 0usize;
    for p in &sources {
        let lenses = cartesian_lenses_into(&u.poly, p);
        for f in &lenses {
            for g in &lenses {
                let report = check_weak_univalence(&u, f, g).unwrap();
                assert!(report.forward_equal);
                if !report.full_equal {
                    full_failures += 1;
                    assert!(report.discrepancy.is_some());
                } else {
                    assert!(report.discrepancy.is_none());
                }
                pairs += 1;
            }
        }
    }
    assert!(pairs > 300_000);
    assert!(full_failures > 0);
}

// The smallest witness that the universe is not univalent: the two backward
// permutations of a two-direction position give distinct Cartesian lenses
// with the same forward table.
#[test]
fn swap_lens_is_the_minimal_univalence_failure() {
    let u = mk_ufin(4).unwrap();
    let p = mk_poly(vec![2]);
    let id2 = Lens::new(p.clone(), u.poly.clone(), vec![2], vec![vec![0, 1]]).unwrap();
    let swap = Lens::new(p.clone(), u.poly.clone(), vec![2], vec![vec![1, 0]]).unwrap();
    let report = check_weak_univalence(&u, &id2, &swap).unwrap();
    assert!(report.forward_equal);
    assert!(!report.full_equal);
    let violation = report.discrepancy.unwrap();
    assert_eq!(violation.position, 0);
    assert_eq!(violation.direction, Some(0));
}
