//! The composition product, the tensor product, and their structural lenses.
//!
//! Positions of the composite `p ◃ q` are pairs `(outer, inner_choice)` of a
//! position of `p` and a table assigning a position of `q` to each direction
//! of `outer`. They are ranked outer-major, with the table read as
//! mixed-radix digits over base `q.positions()` (digit 0 most significant).
//! Directions of the composite at `(a, γ)` are branch-major pairs `(b, d)`
//! of a direction `b` of `p` at `a` and a direction `d` of `q` at `γ[b]`.
//!
//! Positions of the tensor `p ⊗ q` are pairs `(left, right)` ranked
//! left-major; directions at `(a, c)` are pairs `(b, d)` ranked `b`-major.
//!
//! All structural lenses (associators, unitors, `indep`) are total and
//! Cartesian; they only re-rank data under these encodings.

use crate::error::{Error, Result};
use crate::finset::{self, rank_sigma, unrank_sigma};
use crate::poly::{mk_poly, position_bound, Chart, Lens, Poly};

/// A position of `p ◃ q`: a position of `p` and a choice of a `q`-position
/// for each of its directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositePos {
    pub outer: usize,
    pub inner_choice: Vec<usize>,
}

/// A position of `p ⊗ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorPos {
    pub left: usize,
    pub right: usize,
}

/// The identity `y` of the composition product: one position, one direction.
pub fn unit_y() -> Poly {
    mk_poly(vec![1])
}

/// Number of positions of `p ◃ q`, checked against the position bound.
pub fn composite_pos_count(p: &Poly, q: &Poly) -> Result<usize> {
    let bound = position_bound() as u128;
    let qn = q.positions() as u128;
    let mut count: u128 = 0;
    for a in 0..p.positions() {
        let mut term: u128 = 1;
        for _ in 0..p.arity(a) {
            term = term.checked_mul(qn).ok_or_else(|| Error::Overflow {
                context: "composite position count".to_string(),
            })?;
            if term > bound {
                return Err(Error::Overflow {
                    context: format!("composite position count exceeds bound {bound}"),
                });
            }
        }
        count += term;
        if count > bound {
            return Err(Error::Overflow {
                context: format!("composite position count exceeds bound {bound}"),
            });
        }
    }
    Ok(count as usize)
}

fn next_tuple(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Visit every position of `p ◃ q` in rank order. The callback receives the
/// rank, the outer position, and the inner choice table.
pub(crate) fn for_each_composite_pos(
    p: &Poly,
    q: &Poly,
    mut visit: impl FnMut(usize, usize, &[usize]) -> Result<()>,
) -> Result<usize> {
    let mut rank = 0usize;
    for a in 0..p.positions() {
        let k = p.arity(a);
        if q.positions() == 0 && k > 0 {
            continue;
        }
        let mut gamma = vec![0usize; k];
        loop {
            visit(rank, a, &gamma)?;
            rank += 1;
            if !next_tuple(&mut gamma, q.positions()) {
                break;
            }
        }
    }
    Ok(rank)
}

/// The composite polynomial `p ◃ q`.
pub fn compose_poly(p: &Poly, q: &Poly) -> Result<Poly> {
    let count = composite_pos_count(p, q)?;
    let mut arities = Vec::with_capacity(count);
    for_each_composite_pos(p, q, |_, _, gamma| {
        let arity = finset::sigma_size(&gamma.iter().map(|&c| q.arity(c)).collect::<Vec<_>>())?;
        arities.push(arity);
        Ok(())
    })?;
    Ok(mk_poly(arities))
}

pub fn composite_pos_rank(p: &Poly, q: &Poly, pos: &CompositePos) -> Result<usize> {
    if pos.outer >= p.positions() {
        return Err(Error::IndexOutOfRange {
            index: pos.outer,
            size: p.positions(),
        });
    }
    let k = p.arity(pos.outer);
    if pos.inner_choice.len() != k {
        return Err(Error::ShapeMismatch {
            context: format!(
                "inner choice of length {} at outer position of arity {k}",
                pos.inner_choice.len()
            ),
        });
    }
    let mut offset = 0usize;
    for a in 0..pos.outer {
        offset = offset
            .checked_add(finset::pi_size(&vec![q.positions(); p.arity(a)])?)
            .ok_or_else(|| Error::Overflow {
                context: "composite position rank".to_string(),
            })?;
    }
    Ok(offset + finset::rank_pi(&vec![q.positions(); k], &pos.inner_choice)?)
}

pub fn composite_pos_unrank(p: &Poly, q: &Poly, rank: usize) -> Result<CompositePos> {
    let mut rest = rank;
    for a in 0..p.positions() {
        let block = finset::pi_size(&vec![q.positions(); p.arity(a)])?;
        if rest < block {
            return Ok(CompositePos {
                outer: a,
                inner_choice: finset::unrank_pi(&vec![q.positions(); p.arity(a)], rest)?,
            });
        }
        rest -= block;
    }
    Err(Error::IndexOutOfRange {
        index: rank,
        size: composite_pos_count(p, q)?,
    })
}

/// Branch sizes of the composite direction sum at inner choice `gamma`.
pub fn composite_dir_arities(q: &Poly, gamma: &[usize]) -> Vec<usize> {
    gamma.iter().map(|&c| q.arity(c)).collect()
}

pub fn composite_dir_rank(q: &Poly, gamma: &[usize], b: usize, d: usize) -> Result<usize> {
    rank_sigma(&composite_dir_arities(q, gamma), b, d)
}

pub fn composite_dir_unrank(q: &Poly, gamma: &[usize], dir: usize) -> Result<(usize, usize)> {
    unrank_sigma(&composite_dir_arities(q, gamma), dir)
}

/// The parallel action of two lenses on the composite: `f ◃◃ g`.
pub fn lens_compose_prod(f: &Lens, g: &Lens) -> Result<Lens> {
    let source = compose_poly(f.source(), g.source())?;
    let target = compose_poly(f.target(), g.target())?;
    let mut forward = Vec::with_capacity(source.positions());
    let mut backward = Vec::with_capacity(source.positions());
    for_each_composite_pos(f.source(), g.source(), |_, a, gamma| {
        let image = (|| -> Option<(usize, Vec<usize>)> {
            let b_img = f.forward(a)?;
            let mut gamma2 = Vec::with_capacity(f.target().arity(b_img));
            for x in 0..f.target().arity(b_img) {
                gamma2.push(g.forward(gamma[f.backward_at(a)[x]])?);
            }
            Some((b_img, gamma2))
        })();
        match image {
            Some((b_img, gamma2)) => {
                let src_arities = composite_dir_arities(g.source(), gamma);
                let tgt_arities = composite_dir_arities(g.target(), &gamma2);
                let mut table = Vec::with_capacity(finset::sigma_size(&tgt_arities)?);
                for x in 0..f.target().arity(b_img) {
                    let b = f.backward_at(a)[x];
                    for d2 in 0..tgt_arities[x] {
                        let e = g.backward_at(gamma[b])[d2];
                        table.push(rank_sigma(&src_arities, b, e)?);
                    }
                }
                forward.push(Some(composite_pos_rank(
                    f.target(),
                    g.target(),
                    &CompositePos {
                        outer: b_img,
                        inner_choice: gamma2,
                    },
                )?));
                backward.push(table);
            }
            None => {
                forward.push(None);
                backward.push(Vec::new());
            }
        }
        Ok(())
    })?;
    Lens::new_partial(source, target, forward, backward)
}

/// The associator `(p ◃ q) ◃ r -> p ◃ (q ◃ r)`.
pub fn assoc(p: &Poly, q: &Poly, r: &Poly) -> Result<Lens> {
    let pq = compose_poly(p, q)?;
    let qr = compose_poly(q, r)?;
    let source = compose_poly(&pq, r)?;
    let target = compose_poly(p, &qr)?;
    let mut forward = vec![None; source.positions()];
    let mut backward = vec![Vec::new(); source.positions()];
    // Source positions are ((a, gamma), delta); iterate the outer composite
    // and for each its delta tables in rank order.
    let mut rank = 0usize;
    for_each_composite_pos(p, q, |_, a, gamma| {
        let dir_arities = composite_dir_arities(q, gamma);
        let total_dirs = finset::sigma_size(&dir_arities)?;
        if r.positions() == 0 && total_dirs > 0 {
            return Ok(());
        }
        let mut delta = vec![0usize; total_dirs];
        loop {
            // Slice delta by branch: branch b covers a contiguous run of
            // length q.arity(gamma[b]).
            let mut eps = Vec::with_capacity(gamma.len());
            let mut start = 0usize;
            for &c in gamma {
                let len = q.arity(c);
                eps.push(composite_pos_rank(
                    q,
                    r,
                    &CompositePos {
                        outer: c,
                        inner_choice: delta[start..start + len].to_vec(),
                    },
                )?);
                start += len;
            }
            forward[rank] = Some(composite_pos_rank(
                p,
                &qr,
                &CompositePos {
                    outer: a,
                    inner_choice: eps.clone(),
                },
            )?);
            // Backward: target direction (b, (d, x)) maps to ((b, d), x).
            let tgt_arities = composite_dir_arities(&qr, &eps);
            let mut table = Vec::with_capacity(finset::sigma_size(&tgt_arities)?);
            let src_arities = composite_dir_arities(r, &delta);
            let mut start_b = 0usize;
            for (b, &c) in gamma.iter().enumerate() {
                let len = q.arity(c);
                let inner_arities: Vec<usize> =
                    delta[start_b..start_b + len].iter().map(|&t| r.arity(t)).collect();
                for w in 0..finset::sigma_size(&inner_arities)? {
                    let (d, x) = unrank_sigma(&inner_arities, w)?;
                    let v = composite_dir_rank(q, gamma, b, d)?;
                    table.push(rank_sigma(&src_arities, v, x)?);
                }
                start_b += len;
            }
            backward[rank] = table;
            rank += 1;
            if !next_tuple(&mut delta, r.positions()) {
                break;
            }
        }
        Ok(())
    })?;
    Lens::new_partial(source, target, forward, backward)
}

fn rank_of_pq(p: &Poly, q: &Poly, a: usize, gamma: &[usize]) -> Result<usize> {
    composite_pos_rank(
        p,
        q,
        &CompositePos {
            outer: a,
            inner_choice: gamma.to_vec(),
        },
    )
}

/// The inverse associator `p ◃ (q ◃ r) -> (p ◃ q) ◃ r`.
pub fn assoc_inv(p: &Poly, q: &Poly, r: &Poly) -> Result<Lens> {
    let pq = compose_poly(p, q)?;
    let qr = compose_poly(q, r)?;
    let source = compose_poly(p, &qr)?;
    let target = compose_poly(&pq, r)?;
    let mut forward = vec![None; source.positions()];
    let mut backward = vec![Vec::new(); source.positions()];
    for_each_composite_pos(p, &qr, |rank, a, eps| {
        // Decompose each inner q◃r position into (gamma[b], delta slice).
        let mut gamma = Vec::with_capacity(eps.len());
        let mut delta = Vec::new();
        for &e in eps {
            let cp = composite_pos_unrank(q, r, e)?;
            gamma.push(cp.outer);
            delta.extend_from_slice(&cp.inner_choice);
        }
        let outer = rank_of_pq(p, q, a, &gamma)?;
        forward[rank] = Some(composite_pos_rank(
            &pq,
            r,
            &CompositePos {
                outer,
                inner_choice: delta.clone(),
            },
        )?);
        // Backward: target direction ((b, d), x) maps to (b, (d, x)).
        let src_arities = composite_dir_arities(&qr, eps);
        let tgt_outer_arities = composite_dir_arities(q, &gamma);
        let tgt_arities = composite_dir_arities(r, &delta);
        let mut table = Vec::with_capacity(finset::sigma_size(&tgt_arities)?);
        for v in 0..finset::sigma_size(&tgt_outer_arities)? {
            let (b, d) = unrank_sigma(&tgt_outer_arities, v)?;
            // Direction x ranges over r at delta[v].
            let start: usize = gamma[..b].iter().map(|&c| q.arity(c)).sum();
            let slice_arities: Vec<usize> = (0..q.arity(gamma[b]))
                .map(|i| r.arity(delta[start + i]))
                .collect();
            for x in 0..r.arity(delta[v]) {
                let w = rank_sigma(&slice_arities, d, x)?;
                table.push(rank_sigma(&src_arities, b, w)?);
            }
        }
        backward[rank] = table;
        Ok(())
    })?;
    Lens::new_partial(source, target, forward, backward)
}

/// Left unitor `y ◃ p -> p`.
pub fn unitl(p: &Poly) -> Result<Lens> {
    let y = unit_y();
    let source = compose_poly(&y, p)?;
    let forward = (0..p.positions()).collect();
    let backward = (0..p.positions()).map(|c| (0..p.arity(c)).collect()).collect();
    Lens::new(source, p.clone(), forward, backward)
}

/// Inverse left unitor `p -> y ◃ p`.
pub fn unitl_inv(p: &Poly) -> Result<Lens> {
    let y = unit_y();
    let target = compose_poly(&y, p)?;
    let forward = (0..p.positions()).collect();
    let backward = (0..p.positions()).map(|c| (0..p.arity(c)).collect()).collect();
    Lens::new(p.clone(), target, forward, backward)
}

/// Right unitor `p ◃ y -> p`.
pub fn unitr(p: &Poly) -> Result<Lens> {
    let y = unit_y();
    let source = compose_poly(p, &y)?;
    let forward = (0..p.positions()).collect();
    let backward = (0..p.positions()).map(|a| (0..p.arity(a)).collect()).collect();
    Lens::new(source, p.clone(), forward, backward)
}

/// Inverse right unitor `p -> p ◃ y`.
pub fn unitr_inv(p: &Poly) -> Result<Lens> {
    let y = unit_y();
    let target = compose_poly(p, &y)?;
    let forward = (0..p.positions()).collect();
    let backward = (0..p.positions()).map(|a| (0..p.arity(a)).collect()).collect();
    Lens::new(p.clone(), target, forward, backward)
}

/// The tensor polynomial `p ⊗ q`.
pub fn tensor(p: &Poly, q: &Poly) -> Result<Poly> {
    let bound = position_bound() as u128;
    let count = (p.positions() as u128) * (q.positions() as u128);
    if count > bound {
        return Err(Error::Overflow {
            context: format!("tensor position count exceeds bound {bound}"),
        });
    }
    let mut arities = Vec::with_capacity(count as usize);
    for a in 0..p.positions() {
        for c in 0..q.positions() {
            arities.push(
                p.arity(a)
                    .checked_mul(q.arity(c))
                    .ok_or_else(|| Error::Overflow {
                        context: "tensor arity".to_string(),
                    })?,
            );
        }
    }
    Ok(mk_poly(arities))
}

pub fn tensor_pos_rank(q: &Poly, pos: &TensorPos) -> usize {
    pos.left * q.positions() + pos.right
}

pub fn tensor_pos_unrank(q: &Poly, rank: usize) -> TensorPos {
    TensorPos {
        left: rank / q.positions(),
        right: rank % q.positions(),
    }
}

/// The parallel action of two lenses on the tensor: `f ⊗⊗ g`.
pub fn lens_tensor_prod(f: &Lens, g: &Lens) -> Result<Lens> {
    let source = tensor(f.source(), g.source())?;
    let target = tensor(f.target(), g.target())?;
    let mut forward = Vec::with_capacity(source.positions());
    let mut backward = Vec::with_capacity(source.positions());
    for a in 0..f.source().positions() {
        for c in 0..g.source().positions() {
            match (f.forward(a), g.forward(c)) {
                (Some(b_img), Some(c_img)) => {
                    forward.push(Some(b_img * g.target().positions() + c_img));
                    let mut table =
                        Vec::with_capacity(f.target().arity(b_img) * g.target().arity(c_img));
                    for x in 0..f.target().arity(b_img) {
                        for y in 0..g.target().arity(c_img) {
                            let b = f.backward_at(a)[x];
                            let d = g.backward_at(c)[y];
                            table.push(b * g.source().arity(c) + d);
                        }
                    }
                    backward.push(table);
                }
                _ => {
                    forward.push(None);
                    backward.push(Vec::new());
                }
            }
        }
    }
    Lens::new_partial(source, target, forward, backward)
}

/// The duoidal comparison `p ⊗ q -> p ◃ q`: independence as constant dependence.
pub fn indep(p: &Poly, q: &Poly) -> Result<Lens> {
    let source = tensor(p, q)?;
    let target = compose_poly(p, q)?;
    let mut forward = Vec::with_capacity(source.positions());
    let mut backward = Vec::with_capacity(source.positions());
    for a in 0..p.positions() {
        for c in 0..q.positions() {
            forward.push(composite_pos_rank(
                p,
                q,
                &CompositePos {
                    outer: a,
                    inner_choice: vec![c; p.arity(a)],
                },
            )?);
            // Directions on both sides are pairs (b, d) with the same
            // b-major rank, so the backward table is the identity.
            backward.push((0..p.arity(a) * q.arity(c)).collect());
        }
    }
    Lens::new(source, target, forward, backward)
}

/// First projection chart `p ◃ q -> p`.
pub fn proj1_chart(p: &Poly, q: &Poly) -> Result<Chart> {
    let source = compose_poly(p, q)?;
    let mut on_pos = Vec::with_capacity(source.positions());
    let mut on_dir = Vec::with_capacity(source.positions());
    for_each_composite_pos(p, q, |_, a, gamma| {
        on_pos.push(a);
        let arities = composite_dir_arities(q, gamma);
        let mut dirs = Vec::with_capacity(finset::sigma_size(&arities)?);
        for v in 0..finset::sigma_size(&arities)? {
            dirs.push(unrank_sigma(&arities, v)?.0);
        }
        on_dir.push(dirs);
        Ok(())
    })?;
    Chart::new(source, p.clone(), on_pos, on_dir)
}

/// Second projection chart `p ⊗ q -> q`.
pub fn proj2_tensor_chart(p: &Poly, q: &Poly) -> Result<Chart> {
    let source = tensor(p, q)?;
    let mut on_pos = Vec::with_capacity(source.positions());
    let mut on_dir = Vec::with_capacity(source.positions());
    for a in 0..p.positions() {
        for c in 0..q.positions() {
            on_pos.push(c);
            let mut dirs = Vec::with_capacity(p.arity(a) * q.arity(c));
            for _b in 0..p.arity(a) {
                for d in 0..q.arity(c) {
                    dirs.push(d);
                }
            }
            on_dir.push(dirs);
        }
    }
    Chart::new(source, q.clone(), on_pos, on_dir)
}
