//! Distributors between composition products and jump structures.
//!
//! A [`Distributor`] is a lens `(p ◃ r) -> (s ◃ q)` retaining its four factor
//! polynomials for decoding. The central construction is [`nabla`]: a lens
//! `j : (p ⇈[q][f] r) -> s` induces a distributor whose forward map pairs
//! `j` with the constant table at `f`, and whose backward map splits a
//! direction pair through `f` and the tuple structure of `j`.
//!
//! Equality of distributors comes in two modes: strict table equality, and
//! comparison up to bijections of the target fibers, found by exhaustive
//! search over permutations. The second mode is what rescues the list
//! distributive law, whose strict failure is reproduced by the law engine.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finset::{permutations, rank_pi, rank_sigma, unrank_pi, unrank_sigma};
use crate::monoidal::{
    assoc, assoc_inv, compose_poly, composite_dir_arities, composite_pos_rank,
    composite_pos_unrank, for_each_composite_pos, indep, lens_compose_prod, proj1_chart,
    proj2_tensor_chart, tensor, unit_y, unitl, unitl_inv, unitr, unitr_inv, CompositePos,
};
use crate::poly::{chart_square_commutes, comp_lens, eq_lens, id_lens, Lens, Poly};
use crate::uparrow::{up_dir_bases, up_gen};
use crate::universes::UniversePoly;

/// A lens `(p ◃ r) -> (s ◃ q)` together with its factor polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distributor {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
    pub s: Poly,
    pub lens: Lens,
}

impl Serialize for Distributor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Factors<'a> {
            p: &'a Poly,
            q: &'a Poly,
            r: &'a Poly,
            s: &'a Poly,
        }
        let mut out = serializer.serialize_struct("Distributor", 3)?;
        out.serialize_field("forward", self.lens.forward_table())?;
        out.serialize_field("backward", self.lens.backward_tables())?;
        out.serialize_field(
            "factors",
            &Factors {
                p: &self.p,
                q: &self.q,
                r: &self.r,
                s: &self.s,
            },
        )?;
        out.end()
    }
}

pub fn mk_distributor(p: Poly, q: Poly, r: Poly, s: Poly, lens: Lens) -> Result<Distributor> {
    if lens.source() != &compose_poly(&p, &r)? || lens.target() != &compose_poly(&s, &q)? {
        return Err(Error::ShapeMismatch {
            context: "distributor lens endpoints do not match the stated factors".to_string(),
        });
    }
    Ok(Distributor { p, q, r, s, lens })
}

/// The distributor induced by `j : (p ⇈[q][f] r) -> s`.
///
/// Forward: `(a, h) ↦ (j(a, h), constant f(a))`. Backward at `(a, h)`: the
/// target direction `(d', d)` maps to the source pair `(f♯ a d, t[d])` where
/// `t` is the tuple decoded from `j♯ (a,h) d'`.
pub fn nabla(f: &Lens, r: &Poly, j: &Lens) -> Result<Distributor> {
    let p = f.source();
    let q = f.target();
    let upg = up_gen(f, r)?;
    if j.source() != &upg {
        return Err(Error::ShapeMismatch {
            context: "nabla requires a lens out of the stated up-arrow polynomial".to_string(),
        });
    }
    let s = j.target().clone();
    let source = compose_poly(p, r)?;
    let target = compose_poly(&s, q)?;
    let mut forward = Vec::with_capacity(source.positions());
    let mut backward = Vec::with_capacity(source.positions());
    for_each_composite_pos(p, r, |rank, a, h| {
        match j.forward(rank) {
            Some(c) => {
                let b = f.forward_req(a)?;
                forward.push(Some(composite_pos_rank(
                    &s,
                    q,
                    &CompositePos {
                        outer: c,
                        inner_choice: vec![b; s.arity(c)],
                    },
                )?));
                let src_arities = composite_dir_arities(r, h);
                let bases = up_dir_bases(f, r, a, h)?;
                let mut table = Vec::with_capacity(s.arity(c) * q.arity(b));
                for d1 in 0..s.arity(c) {
                    let tuple = unrank_pi(&bases, j.backward_at(rank)[d1])?;
                    for d in 0..q.arity(b) {
                        table.push(rank_sigma(&src_arities, f.backward_at(a)[d], tuple[d])?);
                    }
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
    let lens = Lens::new_partial(source, target, forward, backward)?;
    mk_distributor(p.clone(), q.clone(), r.clone(), s, lens)
}

/// Location and content of the first disagreement between two distributors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistViolation {
    /// Rank of the input position in `p ◃ r`.
    pub position: usize,
    /// Its decoded outer position and inner choice.
    pub outer: usize,
    pub gamma: Vec<usize>,
    /// 1 = outer target components differ, 2 = inner target tables differ,
    /// 3 = backward tables differ.
    pub layer: u8,
    /// Index within the layer: the inner-table slot for layer 2, the target
    /// direction for layer 3, absent for layer 1 and for up-to-bijection
    /// failures (which report the whole position).
    pub index: Option<usize>,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// Outcome of a distributor comparison. `skipped` counts positions that were
/// not compared content-wise: under strict equality those where both sides
/// are undefined, under equality up to bijection those where either side is
/// undefined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistEqWitness {
    pub equal: bool,
    pub checked: usize,
    pub skipped: usize,
    pub violation: Option<DistViolation>,
}

fn parallel_check(d1: &Distributor, d2: &Distributor) -> Result<()> {
    if d1.p != d2.p || d1.q != d2.q || d1.r != d2.r || d1.s != d2.s {
        return Err(Error::ShapeMismatch {
            context: "distributor comparison requires equal factors".to_string(),
        });
    }
    Ok(())
}

fn decode_input(d: &Distributor, rank: usize) -> Result<(usize, Vec<usize>)> {
    let pos = composite_pos_unrank(&d.p, &d.r, rank)?;
    Ok((pos.outer, pos.inner_choice))
}

/// Strict equality: the two lenses must agree as partial maps. Target
/// positions, inner tables, and backward tables are compared on the nose,
/// and a position where exactly one side is defined is a disagreement in
/// the first components (the undefined side is reported as absent).
/// Positions undefined on both sides are skipped.
pub fn eq_distributor(d1: &Distributor, d2: &Distributor) -> Result<DistEqWitness> {
    parallel_check(d1, d2)?;
    let positions = d1.lens.source().positions();
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for rank in 0..positions {
        let (b1, b2) = match (d1.lens.forward(rank), d2.lens.forward(rank)) {
            (Some(b1), Some(b2)) => (b1, b2),
            (None, None) => {
                skipped += 1;
                continue;
            }
            (lhs, rhs) => {
                let outer_of = |d: &Distributor, b: Option<usize>| -> Result<Option<usize>> {
                    Ok(match b {
                        Some(b) => Some(composite_pos_unrank(&d.s, &d.q, b)?.outer),
                        None => None,
                    })
                };
                let (outer, gamma) = decode_input(d1, rank)?;
                return Ok(DistEqWitness {
                    equal: false,
                    checked,
                    skipped,
                    violation: Some(DistViolation {
                        position: rank,
                        outer,
                        gamma,
                        layer: 1,
                        index: None,
                        left: outer_of(d1, lhs)?,
                        right: outer_of(d2, rhs)?,
                    }),
                });
            }
        };
        let left = composite_pos_unrank(&d1.s, &d1.q, b1)?;
        let right = composite_pos_unrank(&d1.s, &d1.q, b2)?;
        let violation = if left.outer != right.outer {
            Some((1, None, left.outer, right.outer))
        } else if let Some(x) = (0..left.inner_choice.len())
            .find(|&x| left.inner_choice[x] != right.inner_choice[x])
        {
            Some((2, Some(x), left.inner_choice[x], right.inner_choice[x]))
        } else if let Some(v) = (0..d1.lens.backward_at(rank).len())
            .find(|&v| d1.lens.backward_at(rank)[v] != d2.lens.backward_at(rank)[v])
        {
            Some((
                3,
                Some(v),
                d1.lens.backward_at(rank)[v],
                d2.lens.backward_at(rank)[v],
            ))
        } else {
            None
        };
        if let Some((layer, index, lv, rv)) = violation {
            let (outer, gamma) = decode_input(d1, rank)?;
            return Ok(DistEqWitness {
                equal: false,
                checked,
                skipped,
                violation: Some(DistViolation {
                    position: rank,
                    outer,
                    gamma,
                    layer,
                    index,
                    left: Some(lv),
                    right: Some(rv),
                }),
            });
        }
        checked += 1;
    }
    Ok(DistEqWitness {
        equal: true,
        checked,
        skipped,
        violation: None,
    })
}

const FIBER_SEARCH_BOUND: usize = 6;

/// Equality up to bijections of the target fibers: at each position the two
/// target positions must have equipotent outer decodes, and there must exist
/// a permutation of the outer fiber together with one permutation per inner
/// slot under which the inner arities and the backward tables agree.
/// Positions where either side is undefined are skipped: truncation can cut
/// two composites off at different intermediate stages, and this mode only
/// compares the surviving outputs.
pub fn eq_distributor_upto_iso(d1: &Distributor, d2: &Distributor) -> Result<DistEqWitness> {
    parallel_check(d1, d2)?;
    let positions = d1.lens.source().positions();
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for rank in 0..positions {
        let (b1, b2) = match (d1.lens.forward(rank), d2.lens.forward(rank)) {
            (Some(b1), Some(b2)) => (b1, b2),
            _ => {
                skipped += 1;
                continue;
            }
        };
        if b1 == b2 && d1.lens.backward_at(rank) == d2.lens.backward_at(rank) {
            checked += 1;
            continue;
        }
        let left = composite_pos_unrank(&d1.s, &d1.q, b1)?;
        let right = composite_pos_unrank(&d1.s, &d1.q, b2)?;
        let n1 = d1.s.arity(left.outer);
        let n2 = d1.s.arity(right.outer);
        let fail = |layer: u8, lv: usize, rv: usize| -> Result<DistEqWitness> {
            let (outer, gamma) = decode_input(d1, rank)?;
            Ok(DistEqWitness {
                equal: false,
                checked,
                skipped,
                violation: Some(DistViolation {
                    position: rank,
                    outer,
                    gamma,
                    layer,
                    index: None,
                    left: Some(lv),
                    right: Some(rv),
                }),
            })
        };
        if n1 != n2 {
            return fail(1, left.outer, right.outer);
        }
        if n1 > FIBER_SEARCH_BOUND {
            return Err(Error::SearchExhausted {
                context: format!(
                    "outer fiber of size {n1} exceeds the bijection search bound {FIBER_SEARCH_BOUND}"
                ),
            });
        }
        let bases1: Vec<usize> = left.inner_choice.iter().map(|&t| d1.q.arity(t)).collect();
        let bases2: Vec<usize> = right.inner_choice.iter().map(|&t| d1.q.arity(t)).collect();
        if bases1.iter().any(|&m| m > FIBER_SEARCH_BOUND) {
            return Err(Error::SearchExhausted {
                context: format!(
                    "an inner fiber exceeds the bijection search bound {FIBER_SEARCH_BOUND}"
                ),
            });
        }
        let bwd1 = d1.lens.backward_at(rank);
        let bwd2 = d2.lens.backward_at(rank);
        let mut arity_profile_matched = false;
        let mut matched = false;
        'beta: for beta in permutations(n1) {
            if (0..n1).any(|x| bases1[x] != bases2[beta[x]]) {
                continue;
            }
            arity_profile_matched = true;
            // The inner permutations are independent per slot, so each can be
            // searched on its own.
            for x in 0..n1 {
                let m = bases1[x];
                let found = permutations(m).into_iter().any(|delta| {
                    (0..m).all(|y| {
                        let lv = bwd1[rank_sigma(&bases1, x, y).expect("in range")];
                        let rv = bwd2[rank_sigma(&bases2, beta[x], delta[y]).expect("in range")];
                        lv == rv
                    })
                });
                if !found {
                    continue 'beta;
                }
            }
            matched = true;
            break;
        }
        if !matched {
            let layer = if arity_profile_matched { 3 } else { 2 };
            return fail(layer, b1, b2);
        }
        checked += 1;
    }
    Ok(DistEqWitness {
        equal: true,
        checked,
        skipped,
        violation: None,
    })
}

/// Reindex a distributor along lenses on all four factors:
/// `g : p' -> p`, `h : q -> q'`, `k : r' -> r`, `l : s -> s'` give
/// `(p' ◃ r') -> (s' ◃ q')`.
pub fn distr_lens(g: &Lens, h: &Lens, k: &Lens, l: &Lens, d: &Distributor) -> Result<Distributor> {
    if g.target() != &d.p || h.source() != &d.q || k.target() != &d.r || l.source() != &d.s {
        return Err(Error::ShapeMismatch {
            context: "distributor reindexing sides do not match the factors".to_string(),
        });
    }
    let into = lens_compose_prod(g, k)?;
    let outof = lens_compose_prod(l, h)?;
    let lens = comp_lens(&into, &comp_lens(&d.lens, &outof)?)?;
    mk_distributor(
        g.source().clone(),
        h.target().clone(),
        k.source().clone(),
        l.target().clone(),
        lens,
    )
}

/// First composition: distributors `(p ◃ s) -> (t ◃ q)` and
/// `(q ◃ u) -> (v ◃ r)` compose to `(p ◃ (s ◃ u)) -> ((t ◃ v) ◃ r)`.
pub fn distr_comp1(dh: &Distributor, dk: &Distributor) -> Result<Distributor> {
    if dh.q != dk.p {
        return Err(Error::ShapeMismatch {
            context: "middle factors of the distributor composition do not meet".to_string(),
        });
    }
    let (p, q, s, t) = (&dh.p, &dh.q, &dh.r, &dh.s);
    let (u, r, v) = (&dk.r, &dk.q, &dk.s);
    let step1 = assoc_inv(p, s, u)?;
    let step2 = lens_compose_prod(&dh.lens, &id_lens(u))?;
    let step3 = assoc(t, q, u)?;
    let step4 = lens_compose_prod(&id_lens(t), &dk.lens)?;
    let step5 = assoc_inv(t, v, r)?;
    let lens = comp_lens(
        &step1,
        &comp_lens(&step2, &comp_lens(&step3, &comp_lens(&step4, &step5)?)?)?,
    )?;
    mk_distributor(
        p.clone(),
        r.clone(),
        compose_poly(s, u)?,
        compose_poly(t, v)?,
        lens,
    )
}

/// Second composition: distributors `(r ◃ t) -> (u ◃ s)` and
/// `(p ◃ u) -> (v ◃ q)` compose to `((p ◃ r) ◃ t) -> (v ◃ (q ◃ s))`.
pub fn distr_comp2(dh: &Distributor, dk: &Distributor) -> Result<Distributor> {
    if dh.s != dk.r {
        return Err(Error::ShapeMismatch {
            context: "middle factors of the distributor composition do not meet".to_string(),
        });
    }
    let (r, s, t, u) = (&dh.p, &dh.q, &dh.r, &dh.s);
    let (p, q, v) = (&dk.p, &dk.q, &dk.s);
    let step1 = assoc(p, r, t)?;
    let step2 = lens_compose_prod(&id_lens(p), &dh.lens)?;
    let step3 = assoc_inv(p, u, s)?;
    let step4 = lens_compose_prod(&dk.lens, &id_lens(s))?;
    let step5 = assoc(v, q, s)?;
    let lens = comp_lens(
        &step1,
        &comp_lens(&step2, &comp_lens(&step3, &comp_lens(&step4, &step5)?)?)?,
    )?;
    mk_distributor(
        compose_poly(p, r)?,
        compose_poly(q, s)?,
        t.clone(),
        v.clone(),
        lens,
    )
}

/// The unitor-induced identity distributor `(p ◃ y) -> (y ◃ p)`.
pub fn distr_id1(p: &Poly) -> Result<Distributor> {
    let y = unit_y();
    let lens = comp_lens(&unitr(p)?, &unitl_inv(p)?)?;
    mk_distributor(p.clone(), p.clone(), y.clone(), y, lens)
}

/// The unitor-induced identity distributor `(y ◃ p) -> (p ◃ y)`.
pub fn distr_id2(p: &Poly) -> Result<Distributor> {
    let y = unit_y();
    let lens = comp_lens(&unitl(p)?, &unitr_inv(p)?)?;
    mk_distributor(y.clone(), y, p.clone(), p.clone(), lens)
}

/// The candidate distributive law `(u ◃ u) -> (u ◃ u)` induced by the
/// universe's product lens.
pub fn distr_law_candidate(u: &UniversePoly, pi: &Lens) -> Result<Distributor> {
    nabla(&id_lens(&u.poly), &u.poly, pi)
}

/// A verified factoring of a distributor through `indep`, per the jump
/// structure definition.
#[derive(Debug, Clone)]
pub struct JumpStructure {
    /// The lens `p -> q` along which the distributor jumps.
    pub phi: Lens,
    /// The factored lens `(p ◃ r) -> (s ⊗ q)` with
    /// `factored ; indep(s, q) = lens`.
    pub factored: Lens,
    /// The lens `(p ⇈[q][phi] r) -> s` recovered from the factored tables;
    /// `nabla(phi, r, reconstructed)` equals the distributor strictly.
    pub reconstructed: Lens,
    /// Whether the mixed square against the projection charts commutes
    /// (always true in a verified structure; kept for reporting).
    pub square_ok: bool,
}

/// Outcome of a jump-structure verification.
#[derive(Debug, Clone)]
pub enum JumpOutcome {
    Verified(Box<JumpStructure>),
    Obstructed { reason: String },
}

impl JumpOutcome {
    pub fn verified(&self) -> Option<&JumpStructure> {
        match self {
            JumpOutcome::Verified(js) => Some(js),
            JumpOutcome::Obstructed { .. } => None,
        }
    }

    pub fn is_verified(&self) -> bool {
        self.verified().is_some()
    }
}

/// Check whether `phi : p -> q` makes the distributor a jump structure:
/// factor its lens through `indep(s, q)`, check the mixed square against the
/// projection charts, reconstruct the inducing up-arrow lens, and confirm
/// the reconstruction reproduces the distributor.
pub fn verify_jump_structure(d: &Distributor, phi: &Lens) -> Result<JumpOutcome> {
    if phi.source() != &d.p || phi.target() != &d.q {
        return Err(Error::ShapeMismatch {
            context: "jump verification needs phi between the outer factors".to_string(),
        });
    }
    if !phi.is_total() {
        return Err(Error::PreconditionFailed {
            context: "jump verification needs a total phi".to_string(),
        });
    }
    let obstructed = |reason: String| Ok(JumpOutcome::Obstructed { reason });

    // Step 1: the forward images must be constant in their inner choice, and
    // the constant must be phi of the outer input position.
    let source = d.lens.source().clone();
    let ten = tensor(&d.s, &d.q)?;
    let mut fac_forward = vec![None; source.positions()];
    let mut fac_backward = vec![Vec::new(); source.positions()];
    let mut images = vec![None; source.positions()];
    let mut failure: Option<String> = None;
    for_each_composite_pos(&d.p, &d.r, |rank, a, _| {
        if failure.is_some() {
            return Ok(());
        }
        if let Some(img) = d.lens.forward(rank) {
            let pos = composite_pos_unrank(&d.s, &d.q, img)?;
            let expected = phi.forward_req(a)?;
            if pos.inner_choice.iter().any(|&b| b != expected) {
                failure = Some(format!(
                    "forward image at position {rank} is not constant at phi"
                ));
                return Ok(());
            }
            fac_forward[rank] = Some(pos.outer * d.q.positions() + expected);
            // The direction sum over a constant table is the b-major pair
            // ranking, so the backward table transfers verbatim.
            fac_backward[rank] = d.lens.backward_at(rank).to_vec();
            images[rank] = Some((pos.outer, expected));
        }
        Ok(())
    })?;
    if let Some(reason) = failure {
        return obstructed(reason);
    }
    let factored = Lens::new_partial(source.clone(), ten, fac_forward, fac_backward)?;
    let recomposed = comp_lens(&factored, &indep(&d.s, &d.q)?)?;
    if !eq_lens(&recomposed, &d.lens)?.equal {
        return obstructed("factoring does not recompose to the distributor".to_string());
    }

    // Step 2: the mixed square against the projection charts.
    let left = proj1_chart(&d.p, &d.r)?;
    let right = proj2_tensor_chart(&d.s, &d.q)?;
    let square_ok = chart_square_commutes(&factored, phi, &left, &right)?;
    if !square_ok {
        return obstructed("projection square does not commute".to_string());
    }

    // Step 3: reconstruct j with nabla(phi, r, j) = distributor.
    let upg = up_gen(phi, &d.r)?;
    let mut j_forward = vec![None; upg.positions()];
    let mut j_backward = vec![Vec::new(); upg.positions()];
    let mut mismatch: Option<String> = None;
    for_each_composite_pos(&d.p, &d.r, |rank, a, h| {
        if mismatch.is_some() {
            return Ok(());
        }
        let Some((c, b)) = images[rank] else {
            return Ok(());
        };
        let src_arities = composite_dir_arities(&d.r, h);
        let bases = up_dir_bases(phi, &d.r, a, h)?;
        let mut table = Vec::with_capacity(d.s.arity(c));
        for d1 in 0..d.s.arity(c) {
            let mut tuple = vec![0usize; d.q.arity(b)];
            for dd in 0..d.q.arity(b) {
                let src = d.lens.backward_at(rank)[d1 * d.q.arity(b) + dd];
                let (x, e) = unrank_sigma(&src_arities, src)?;
                if x != phi.backward_at(a)[dd] {
                    mismatch = Some(format!(
                        "backward table at position {rank} does not route through phi"
                    ));
                    return Ok(());
                }
                tuple[dd] = e;
            }
            table.push(rank_pi(&bases, &tuple)?);
        }
        j_forward[rank] = Some(c);
        j_backward[rank] = table;
        Ok(())
    })?;
    if let Some(reason) = mismatch {
        return obstructed(reason);
    }
    let reconstructed = Lens::new_partial(upg, d.s.clone(), j_forward, j_backward)?;
    let rebuilt = nabla(phi, &d.r, &reconstructed)?;
    let witness = eq_distributor(&rebuilt, d)?;
    if !witness.equal {
        return obstructed(format!(
            "reconstructed nabla differs at position {}",
            witness.violation.map(|v| v.position).unwrap_or(0)
        ));
    }
    Ok(JumpOutcome::Verified(Box::new(JumpStructure {
        phi: phi.clone(),
        factored,
        reconstructed,
        square_ok,
    })))
}

const JUMP_SEARCH_BOUND: u128 = 1_000_000;

/// Search for a jump structure over all total lenses `phi : p -> q` in
/// lexicographic order (forward tables first, then backward tables).
pub fn search_jump_structure(d: &Distributor) -> Result<Option<JumpStructure>> {
    let p = &d.p;
    let q = &d.q;
    let mut count: u128 = 1;
    for a in 0..p.positions() {
        let per_pos: u128 = (0..q.positions())
            .map(|b| (p.arity(a) as u128).pow(q.arity(b) as u32))
            .sum();
        count = count.saturating_mul(per_pos);
        if count > JUMP_SEARCH_BOUND {
            return Err(Error::SearchExhausted {
                context: format!("more than {JUMP_SEARCH_BOUND} candidate lenses"),
            });
        }
    }
    let mut forward = vec![0usize; p.positions()];
    loop {
        if let Some(js) = search_backwards_for(d, &forward)? {
            return Ok(Some(js));
        }
        if !next_digit_tuple(&mut forward, q.positions()) {
            return Ok(None);
        }
    }
}

fn next_digit_tuple(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

fn search_backwards_for(d: &Distributor, forward: &[usize]) -> Result<Option<JumpStructure>> {
    let p = &d.p;
    let q = &d.q;
    if q.positions() == 0 && p.positions() > 0 {
        return Ok(None);
    }
    // Backward tables, one per position, each enumerated as digits over the
    // source arity; a position with directions required but none available
    // admits no candidate.
    let mut tables: Vec<Vec<usize>> = Vec::with_capacity(p.positions());
    for a in 0..p.positions() {
        if p.arity(a) == 0 && q.arity(forward[a]) > 0 {
            return Ok(None);
        }
        tables.push(vec![0usize; q.arity(forward[a])]);
    }
    loop {
        let phi = Lens::new(
            p.clone(),
            q.clone(),
            forward.to_vec(),
            tables.clone(),
        )?;
        if let JumpOutcome::Verified(js) = verify_jump_structure(d, &phi)? {
            return Ok(Some(*js));
        }
        // Advance the concatenated digit vector, last table least significant.
        let mut advanced = false;
        for a in (0..p.positions()).rev() {
            if next_digit_tuple(&mut tables[a], p.arity(a)) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Ok(None);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::mk_poly;
    use crate::universes::mk_uprop;

    #[test]
    fn identity_distributors_on_the_unit() {
        let y = unit_y();
        let d1 = distr_id1(&y).unwrap();
        let d2 = distr_id2(&y).unwrap();
        assert!(eq_distributor(&d1, &d2).unwrap().equal);
    }

    #[test]
    fn strict_equality_is_reflexive() {
        let p = mk_poly(vec![2, 1]);
        let d = distr_id1(&p).unwrap();
        let w = eq_distributor(&d, &d).unwrap();
        assert!(w.equal);
        assert_eq!(w.skipped, 0);
    }

    #[test]
    fn upto_iso_accepts_strictly_equal() {
        let p = mk_poly(vec![2, 1]);
        let d = distr_id1(&p).unwrap();
        assert!(eq_distributor_upto_iso(&d, &d).unwrap().equal);
    }

    #[test]
    fn prop_candidate_has_tiny_arities() {
        let u = mk_uprop().unwrap();
        let cand = distr_law_candidate(&u, u.pi_lens().unwrap()).unwrap();
        assert!(cand.lens.source().arities().iter().all(|&k| k <= 1));
        assert!(cand.lens.target().arities().iter().all(|&k| k <= 1));
    }

    #[test]
    fn reindexing_by_identities_is_identity() {
        let p = mk_poly(vec![2]);
        let d = distr_id1(&p).unwrap();
        let y = unit_y();
        let again = distr_lens(&id_lens(&p), &id_lens(&p), &id_lens(&y), &id_lens(&y), &d).unwrap();
        assert!(eq_distributor(&d, &again).unwrap().equal);
    }
}
