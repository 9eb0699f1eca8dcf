//! Cross-validation of the position/direction encodings against functor
//! semantics: evaluating a composite or tensor polynomial at a finite set
//! must agree with composing or multiplying the evaluations.

use polyverse::monoidal::{compose_poly, tensor};
use polyverse::poly::{extension_card, extension_enum, mk_poly, Poly};

fn polys_up_to(max_positions: usize, max_arity: usize) -> Vec<Poly> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_positions {
        let mut next = Vec::new();
        for v in &frontier {
            for a in 0..=max_arity {
                let mut w = v.clone();
                w.push(a);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter().map(mk_poly).collect()
}

#[test]
fn composite_extension_matches_nested_evaluation() {
    let polys = polys_up_to(3, 3);
    for p in &polys {
        for q in &polys {
            let pq = compose_poly(p, q).unwrap();
            for x in 0..=3usize {
                let inner = extension_card(q, x).unwrap();
                let nested = extension_card(p, usize::try_from(inner).unwrap()).unwrap();
                assert_eq!(
                    extension_card(&pq, x).unwrap(),
                    nested,
                    "composite mismatch for {:?} ◃ {:?} at {}",
                    p.arities(),
                    q.arities(),
                    x
                );
            }
        }
    }
}

#[test]
fn tensor_extension_matches_product_formula() {
    let polys = polys_up_to(3, 3);
    for p in &polys {
        for q in &polys {
            let ten = tensor(p, q).unwrap();
            for x in 0..=3usize {
                let mut expected: u128 = 0;
                for a in 0..p.positions() {
                    for b in 0..q.positions() {
                        expected += (x as u128).pow((p.arity(a) * q.arity(b)) as u32);
                    }
                }
                assert_eq!(extension_card(&ten, x).unwrap(), expected);
            }
        }
    }
}

#[test]
fn extension_enumeration_agrees_with_cardinality() {
    let polys = polys_up_to(2, 3);
    for p in &polys {
        for x in 0..=3usize {
            let elems = extension_enum(p, x).unwrap();
            assert_eq!(elems.len() as u128, extension_card(p, x).unwrap());
            for window in elems.windows(2) {
                assert!(window[0] < window[1]);
            }
        }
    }
}
