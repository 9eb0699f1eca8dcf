//! The up-arrow construction `p ⇈[q][f] r` and its structural lenses.
//!
//! For a lens `f : p -> q`, the polynomial `p ⇈[q][f] r` has the positions of
//! `p ◃ r` (an outer position `a` with a table `eps` assigning an `r`-position
//! to each direction of `a`), but its directions at `(a, eps)` are tuples: one
//! direction of `r` at `eps[f♯ a d]` for each direction `d` of `q` at `f(a)`.
//! Tuples are ranked by [`finset::rank_pi`] with digit `d` most significant
//! first. The plain `p ⇈ r` is the special case `f = id`.

use crate::error::{Error, Result};
use crate::finset::{self, rank_pi, rank_sigma, unrank_pi, unrank_sigma};
use crate::monoidal::{
    compose_poly, composite_dir_arities, composite_pos_count, composite_pos_rank,
    composite_pos_unrank, for_each_composite_pos, lens_compose_prod, unit_y, CompositePos,
};
use crate::poly::{comp_lens, eq_lens, id_lens, mk_poly, Lens, Poly};

/// The polynomial `p ⇈[q][f] r` for a total lens `f : p -> q`.
pub fn up_gen(f: &Lens, r: &Poly) -> Result<Poly> {
    let p = f.source();
    let count = composite_pos_count(p, r)?;
    let mut arities = Vec::with_capacity(count);
    for_each_composite_pos(p, r, |_, a, eps| {
        arities.push(finset::pi_size(&up_dir_bases(f, r, a, eps)?)?);
        Ok(())
    })?;
    Ok(mk_poly(arities))
}

/// The polynomial `p ⇈ r`.
pub fn up(p: &Poly, r: &Poly) -> Result<Poly> {
    up_gen(&id_lens(p), r)
}

/// Digit bases of the direction tuple of `p ⇈[q][f] r` at position `(a, eps)`:
/// base `d` is the arity of `r` at `eps[f♯ a d]`.
pub fn up_dir_bases(f: &Lens, r: &Poly, a: usize, eps: &[usize]) -> Result<Vec<usize>> {
    let b = f.forward_req(a)?;
    Ok((0..f.target().arity(b))
        .map(|d| r.arity(eps[f.backward_at(a)[d]]))
        .collect())
}

/// Positions of `p ⇈[q][f] r` share the ranking of `p ◃ r` positions.
pub fn up_pos_rank(p: &Poly, r: &Poly, pos: &CompositePos) -> Result<usize> {
    composite_pos_rank(p, r, pos)
}

pub fn up_pos_unrank(p: &Poly, r: &Poly, rank: usize) -> Result<CompositePos> {
    composite_pos_unrank(p, r, rank)
}

/// The functorial action `(p ⇈[q][f] r) -> (p' ⇈[q'][f'] r')`.
///
/// Requires `g : p -> p'`, `h : q' -> q`, `k : r -> r'`, and the factoring
/// hypothesis `f = g ; f' ; h`, which is checked and reported as a
/// precondition failure when it does not hold. When `h` and `k` are
/// Cartesian, so is the result.
pub fn up_gen_lens(f: &Lens, f2: &Lens, g: &Lens, h: &Lens, k: &Lens) -> Result<Lens> {
    let p = f.source();
    let q = f.target();
    let p2 = f2.source();
    let q2 = f2.target();
    let r = k.source();
    let r2 = k.target();
    if g.source() != p || g.target() != p2 || h.source() != q2 || h.target() != q {
        return Err(Error::ShapeMismatch {
            context: "up-arrow action sides do not share endpoints".to_string(),
        });
    }
    let factored = comp_lens(g, &comp_lens(f2, h)?)?;
    if !eq_lens(f, &factored)?.equal {
        return Err(Error::PreconditionFailed {
            context: "up-arrow action requires f = g ; f' ; h".to_string(),
        });
    }
    let source = up_gen(f, r)?;
    let target = up_gen(f2, r2)?;
    let mut forward = Vec::with_capacity(source.positions());
    let mut backward = Vec::with_capacity(source.positions());
    for_each_composite_pos(p, r, |_, a, eps| {
        let image = (|| -> Option<(usize, Vec<usize>)> {
            let a2 = g.forward(a)?;
            let mut eps2 = Vec::with_capacity(p2.arity(a2));
            for x in 0..p2.arity(a2) {
                eps2.push(k.forward(eps[g.backward_at(a)[x]])?);
            }
            Some((a2, eps2))
        })();
        match image {
            Some((a2, eps2)) => {
                forward.push(Some(composite_pos_rank(
                    p2,
                    r2,
                    &CompositePos {
                        outer: a2,
                        inner_choice: eps2.clone(),
                    },
                )?));
                let b = f.forward_req(a)?;
                let b2 = f2.forward_req(a2)?;
                let src_bases = up_dir_bases(f, r, a, eps)?;
                let tgt_bases = up_dir_bases(f2, r2, a2, &eps2)?;
                let mut table = Vec::with_capacity(finset::pi_size(&tgt_bases)?);
                for t in 0..finset::pi_size(&tgt_bases)? {
                    let tuple = unrank_pi(&tgt_bases, t)?;
                    let mut out = Vec::with_capacity(q.arity(b));
                    for x in 0..q.arity(b) {
                        let rho = eps[f.backward_at(a)[x]];
                        out.push(k.backward_at(rho)[tuple[h.backward_at(b2)[x]]]);
                    }
                    table.push(rank_pi(&src_bases, &out)?);
                }
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

/// The functorial action `(p ⇈ r) -> (p' ⇈ r')` from a split isomorphism
/// `f : p -> p'`, `f_inv : p' -> p` with `f ; f_inv = id`, and `k : r -> r'`.
pub fn up_lens(f: &Lens, f_inv: &Lens, k: &Lens) -> Result<Lens> {
    up_gen_lens(
        &id_lens(f.source()),
        &id_lens(f.target()),
        f,
        f_inv,
        k,
    )
}

/// The isomorphism `(y ⇈ p) -> p`: with one outer direction, a position of
/// `y ⇈ p` is a single choice of `p`-position and its directions are
/// singleton tuples.
pub fn up_unit_src(p: &Poly) -> Result<Lens> {
    let y = unit_y();
    let source = up(&y, p)?;
    let forward = (0..p.positions()).collect();
    let backward = (0..p.positions()).map(|c| (0..p.arity(c)).collect()).collect();
    Lens::new(source, p.clone(), forward, backward)
}

pub fn up_unit_src_inv(p: &Poly) -> Result<Lens> {
    let y = unit_y();
    let target = up(&y, p)?;
    let forward = (0..p.positions()).collect();
    let backward = (0..p.positions()).map(|c| (0..p.arity(c)).collect()).collect();
    Lens::new(p.clone(), target, forward, backward)
}

/// The lens `(p ⇈[q][f] y) -> y`: every position has exactly one direction
/// (the empty-ish tuple of unit choices), so the map is constant and Cartesian.
pub fn up_to_unit(f: &Lens) -> Result<Lens> {
    let y = unit_y();
    let source = up_gen(f, &y)?;
    let forward = vec![0; source.positions()];
    let backward = vec![vec![0]; source.positions()];
    Lens::new(source, y, forward, backward)
}

/// The currying isomorphism
/// `((p ◃ r) ⇈[q ◃ s][f ◃◃ g] t) -> (p ⇈[q][f] (r ⇈[s][g] t))`.
pub fn up_curry(f: &Lens, g: &Lens, t: &Poly) -> Result<Lens> {
    let p = f.source();
    let q = f.target();
    let r = g.source();
    let s = g.target();
    let pr = compose_poly(p, r)?;
    let fg = lens_compose_prod(f, g)?;
    let source = up_gen(&fg, t)?;
    let inner_up = up_gen(g, t)?;
    let target = up_gen(f, &inner_up)?;
    let mut forward = Vec::with_capacity(source.positions());
    let mut backward = Vec::with_capacity(source.positions());
    for_each_composite_pos(&pr, t, |_, big_a, kvec| {
        let CompositePos {
            outer: a,
            inner_choice: h,
        } = composite_pos_unrank(p, r, big_a)?;
        // Forward: eps[b] is the inner up-arrow position built from h[b] and
        // the slice of kvec covering branch b of the composite directions.
        let mut eps = Vec::with_capacity(h.len());
        let mut start = 0usize;
        for &rho in &h {
            let len = r.arity(rho);
            eps.push(composite_pos_rank(
                r,
                t,
                &CompositePos {
                    outer: rho,
                    inner_choice: kvec[start..start + len].to_vec(),
                },
            )?);
            start += len;
        }
        forward.push(Some(composite_pos_rank(
            p,
            &inner_up,
            &CompositePos {
                outer: a,
                inner_choice: eps.clone(),
            },
        )?));
        // Backward: a target tuple nests one inner tuple per q-direction;
        // flattening along the branch-major source ranking recovers the
        // source tuple.
        let b = f.forward_req(a)?;
        let src_bases = up_dir_bases(&fg, t, big_a, kvec)?;
        let tgt_bases = up_dir_bases(f, &inner_up, a, &eps)?;
        let branch_arities = composite_dir_arities(s, &fg_inner_choice(&fg, big_a, q, s)?);
        let mut table = Vec::with_capacity(finset::pi_size(&tgt_bases)?);
        for tdir in 0..finset::pi_size(&tgt_bases)? {
            let nested = unrank_pi(&tgt_bases, tdir)?;
            let mut inner_tuples = Vec::with_capacity(q.arity(b));
            for x in 0..q.arity(b) {
                let bx = f.backward_at(a)[x];
                let rho = h[bx];
                let start: usize = h[..bx].iter().map(|&c| r.arity(c)).sum();
                let kappa = &kvec[start..start + r.arity(rho)];
                let inner_bases = up_dir_bases(g, t, rho, kappa)?;
                inner_tuples.push(unrank_pi(&inner_bases, nested[x])?);
            }
            let mut out = Vec::with_capacity(src_bases.len());
            for z in 0..src_bases.len() {
                let (x, y) = unrank_sigma(&branch_arities, z)?;
                out.push(inner_tuples[x][y]);
            }
            table.push(rank_pi(&src_bases, &out)?);
        }
        backward.push(table);
        Ok(())
    })?;
    Lens::new_partial(source, target, forward, backward)
}

/// Inner choice table of `(f ◃◃ g)(big_a)` in the target composite, used to
/// decompose its direction sum branch by branch.
fn fg_inner_choice(fg: &Lens, big_a: usize, q: &Poly, s: &Poly) -> Result<Vec<usize>> {
    let image = fg.forward_req(big_a)?;
    Ok(composite_pos_unrank(q, s, image)?.inner_choice)
}

/// The currying isomorphism for the plain up-arrow:
/// `((p ◃ r) ⇈ t) -> (p ⇈ (r ⇈ t))`.
pub fn up_curry_simple(p: &Poly, r: &Poly, t: &Poly) -> Result<Lens> {
    up_curry(&id_lens(p), &id_lens(r), t)
}

/// The distribution lens
/// `(p ⇈[r][f ; g] (s ◃ t)) -> ((p ⇈[q][f] s) ◃ (q ⇈[r][g] t))`.
pub fn up_distr(f: &Lens, g: &Lens, s: &Poly, t: &Poly) -> Result<Lens> {
    let p = f.source();
    let q = f.target();
    if g.source() != q {
        return Err(Error::ShapeMismatch {
            context: "distribution requires composable lenses".to_string(),
        });
    }
    let fg = comp_lens(f, g)?;
    let st = compose_poly(s, t)?;
    let source = up_gen(&fg, &st)?;
    let left = up_gen(f, s)?;
    let right = up_gen(g, t)?;
    let target = compose_poly(&left, &right)?;
    let mut forward = Vec::with_capacity(source.positions());
    let mut backward = Vec::with_capacity(source.positions());
    for_each_composite_pos(p, &st, |_, a, hvec| {
        let b = f.forward_req(a)?;
        let c = g.forward_req(b)?;
        // Split each chosen s◃t position into its s-part and t-table.
        let mut h_outer = Vec::with_capacity(hvec.len());
        let mut h_inner = Vec::with_capacity(hvec.len());
        for &hv in hvec {
            let cp = composite_pos_unrank(s, t, hv)?;
            h_outer.push(cp.outer);
            h_inner.push(cp.inner_choice);
        }
        let left_pos = CompositePos {
            outer: a,
            inner_choice: h_outer.clone(),
        };
        let left_rank = composite_pos_rank(p, s, &left_pos)?;
        // The target inner table assigns, to each direction tuple k1 of the
        // left factor, the right factor position (g's source image with the
        // t-choices selected by k1).
        let bases1 = up_dir_bases(f, s, a, &h_outer)?;
        let left_dirs = finset::pi_size(&bases1)?;
        let mut chi = Vec::with_capacity(left_dirs);
        for k1_rank in 0..left_dirs {
            let k1 = unrank_pi(&bases1, k1_rank)?;
            let mut eps = Vec::with_capacity(q.arity(b));
            for x in 0..q.arity(b) {
                eps.push(h_inner[f.backward_at(a)[x]][k1[x]]);
            }
            chi.push(composite_pos_rank(
                q,
                t,
                &CompositePos {
                    outer: b,
                    inner_choice: eps,
                },
            )?);
        }
        forward.push(Some(composite_pos_rank(
            &left,
            &right,
            &CompositePos {
                outer: left_rank,
                inner_choice: chi.clone(),
            },
        )?));
        // Backward: a target direction is a pair (k1, k2); entry d of the
        // source tuple pairs k1 and k2 inside the chosen s◃t position.
        let src_bases = up_dir_bases(&fg, &st, a, hvec)?;
        let right_arities: Vec<usize> = chi.iter().map(|&e| right.arity(e)).collect();
        let mut table = Vec::with_capacity(finset::sigma_size(&right_arities)?);
        for k1_rank in 0..left_dirs {
            let k1 = unrank_pi(&bases1, k1_rank)?;
            let eps_rank = chi[k1_rank];
            let eps = composite_pos_unrank(q, t, eps_rank)?.inner_choice;
            let bases2 = up_dir_bases(g, t, b, &eps)?;
            for d2 in 0..right_arities[k1_rank] {
                let k2 = unrank_pi(&bases2, d2)?;
                let mut out = Vec::with_capacity(src_bases.len());
                for d in 0..g.target().arity(c) {
                    let x = g.backward_at(b)[d];
                    let bx = f.backward_at(a)[x];
                    let pair_arities: Vec<usize> =
                        h_inner[bx].iter().map(|&tv| t.arity(tv)).collect();
                    out.push(rank_sigma(&pair_arities, k1[x], k2[d])?);
                }
                table.push(rank_pi(&src_bases, &out)?);
            }
        }
        backward.push(table);
        Ok(())
    })?;
    Lens::new_partial(source, target, forward, backward)
}

/// The distribution lens for the plain up-arrow:
/// `(p ⇈ (q ◃ r)) -> ((p ⇈ q) ◃ (p ⇈ r))`.
pub fn up_distr_simple(p: &Poly, q: &Poly, r: &Poly) -> Result<Lens> {
    up_distr(&id_lens(p), &id_lens(p), q, r)
}
