//! Polynomials in one variable with finite position and direction sets,
//! together with the two morphism notions used throughout the crate.
//!
//! A [`Poly`] is the list of its direction counts: position `a` contributes
//! the monomial `y^arities[a]`. A [`Lens`] maps positions forward and, for
//! each source position, maps the directions of its image back; a [`Chart`]
//! maps both positions and directions forward. Lenses may be partial on
//! positions (the universes of `crate::universes` truncate their operations
//! at a cap); a partial lens has `None` in its forward table and an empty
//! backward table at the undefined positions.

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset;

/// Default bound on materialized position counts, overridable through the
/// `POLYVERSE_MAX_POSITIONS` environment variable.
pub const DEFAULT_MAX_POSITIONS: usize = 1_000_000;

/// The currently configured bound on materialized position counts.
pub fn position_bound() -> usize {
    std::env::var("POLYVERSE_MAX_POSITIONS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_POSITIONS)
}

/// A finite polynomial: position `a` has `arities[a]` directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    arities: Vec<usize>,
}

pub fn mk_poly(arities: Vec<usize>) -> Poly {
    Poly { arities }
}

impl Poly {
    pub fn positions(&self) -> usize {
        self.arities.len()
    }

    pub fn arity(&self, a: usize) -> usize {
        self.arities[a]
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    /// Sum of all direction counts across positions.
    pub fn total_directions(&self) -> Result<usize> {
        finset::sigma_size(&self.arities)
    }
}

/// A lens: forward on positions, backward on directions.
///
/// `backward[a]` maps directions of `target` at `forward[a]` to directions of
/// `source` at `a`, so its length is the target arity at the image position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lens {
    source: Poly,
    target: Poly,
    forward: Vec<Option<usize>>,
    backward: Vec<Vec<usize>>,
}

impl Serialize for Lens {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Lens", 2)?;
        s.serialize_field("forward", &self.forward)?;
        s.serialize_field("backward", &self.backward)?;
        s.end()
    }
}

impl Lens {
    /// Total lens from explicit tables.
    pub fn new(
        source: Poly,
        target: Poly,
        forward: Vec<usize>,
        backward: Vec<Vec<usize>>,
    ) -> Result<Lens> {
        Lens::new_partial(source, target, forward.into_iter().map(Some).collect(), backward)
    }

    /// Possibly-partial lens from explicit tables; undefined positions carry
    /// `None` forward and an empty backward table.
    pub fn new_partial(
        source: Poly,
        target: Poly,
        forward: Vec<Option<usize>>,
        backward: Vec<Vec<usize>>,
    ) -> Result<Lens> {
        if forward.len() != source.positions() || backward.len() != source.positions() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "lens tables cover {} forward / {} backward positions, source has {}",
                    forward.len(),
                    backward.len(),
                    source.positions()
                ),
            });
        }
        for a in 0..source.positions() {
            match forward[a] {
                Some(b) => {
                    if b >= target.positions() {
                        return Err(Error::IndexOutOfRange {
                            index: b,
                            size: target.positions(),
                        });
                    }
                    if backward[a].len() != target.arity(b) {
                        return Err(Error::ShapeMismatch {
                            context: format!(
                                "backward table at position {a} has length {}, image arity is {}",
                                backward[a].len(),
                                target.arity(b)
                            ),
                        });
                    }
                    for &d in &backward[a] {
                        if d >= source.arity(a) {
                            return Err(Error::IndexOutOfRange {
                                index: d,
                                size: source.arity(a),
                            });
                        }
                    }
                }
                None => {
                    if !backward[a].is_empty() {
                        return Err(Error::ShapeMismatch {
                            context: format!(
                                "undefined position {a} carries a non-empty backward table"
                            ),
                        });
                    }
                }
            }
        }
        Ok(Lens {
            source,
            target,
            forward,
            backward,
        })
    }

    pub fn source(&self) -> &Poly {
        &self.source
    }

    pub fn target(&self) -> &Poly {
        &self.target
    }

    pub fn forward(&self, a: usize) -> Option<usize> {
        self.forward[a]
    }

    /// Forward image, erroring where the lens is undefined.
    pub fn forward_req(&self, a: usize) -> Result<usize> {
        self.forward[a].ok_or(Error::Undefined { position: a })
    }

    pub fn backward_at(&self, a: usize) -> &[usize] {
        &self.backward[a]
    }

    pub fn forward_table(&self) -> &[Option<usize>] {
        &self.forward
    }

    pub fn backward_tables(&self) -> &[Vec<usize>] {
        &self.backward
    }

    pub fn is_total(&self) -> bool {
        self.forward.iter().all(|f| f.is_some())
    }
}

/// Identity lens on `p`.
pub fn id_lens(p: &Poly) -> Lens {
    let forward = (0..p.positions()).collect();
    let backward = (0..p.positions()).map(|a| (0..p.arity(a)).collect()).collect();
    Lens::new(p.clone(), p.clone(), forward, backward).expect("identity tables are well formed")
}

/// Sequential composition: `f` first, then `g`. Undefinedness propagates.
pub fn comp_lens(f: &Lens, g: &Lens) -> Result<Lens> {
    if f.target != g.source {
        return Err(Error::ShapeMismatch {
            context: "lens composition endpoints do not meet".to_string(),
        });
    }
    let mut forward = Vec::with_capacity(f.source.positions());
    let mut backward = Vec::with_capacity(f.source.positions());
    for a in 0..f.source.positions() {
        match f.forward(a).and_then(|b| g.forward(b).map(|c| (b, c))) {
            Some((b, c)) => {
                forward.push(Some(c));
                let table = (0..g.target.arity(c))
                    .map(|z| f.backward_at(a)[g.backward_at(b)[z]])
                    .collect();
                backward.push(table);
            }
            None => {
                forward.push(None);
                backward.push(Vec::new());
            }
        }
    }
    Lens::new_partial(f.source.clone(), g.target.clone(), forward, backward)
}

/// Location of the first disagreement between two lenses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LensViolation {
    pub position: usize,
    /// `None` when the forward images (or definedness) disagree; otherwise
    /// the target direction whose backward images disagree.
    pub direction: Option<usize>,
}

/// Outcome of a pointwise lens comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LensEqWitness {
    pub equal: bool,
    pub first_violation: Option<LensViolation>,
}

/// Pointwise equality of lenses with the same endpoints. Two lenses agree at
/// an undefined position only if both are undefined there.
pub fn eq_lens(f: &Lens, g: &Lens) -> Result<LensEqWitness> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::ShapeMismatch {
            context: "lens comparison requires equal endpoints".to_string(),
        });
    }
    for a in 0..f.source.positions() {
        match (f.forward(a), g.forward(a)) {
            (None, None) => continue,
            (Some(b1), Some(b2)) if b1 == b2 => {
                for d in 0..f.target.arity(b1) {
                    if f.backward_at(a)[d] != g.backward_at(a)[d] {
                        return Ok(LensEqWitness {
                            equal: false,
                            first_violation: Some(LensViolation {
                                position: a,
                                direction: Some(d),
                            }),
                        });
                    }
                }
            }
            _ => {
                return Ok(LensEqWitness {
                    equal: false,
                    first_violation: Some(LensViolation {
                        position: a,
                        direction: None,
                    }),
                });
            }
        }
    }
    Ok(LensEqWitness {
        equal: true,
        first_violation: None,
    })
}

/// First defined position whose backward table is not a bijection, if any.
pub fn cartesian_failure(f: &Lens) -> Option<usize> {
    (0..f.source.positions()).find(|&a| {
        f.forward(a).is_some() && !finset::is_bijection(f.backward_at(a), f.source.arity(a))
    })
}

/// A lens is Cartesian when every defined position has a bijective backward table.
pub fn is_cartesian(f: &Lens) -> bool {
    cartesian_failure(f).is_none()
}

/// Inverse of an isomorphism lens: the forward table must be a total
/// bijection on positions and every backward table a bijection on directions.
pub fn invert_iso_lens(f: &Lens) -> Result<Lens> {
    let mut forward_total = Vec::with_capacity(f.source.positions());
    for a in 0..f.source.positions() {
        forward_total.push(f.forward_req(a)?);
    }
    let pos_inverse = finset::invert_table(&forward_total, f.target.positions()).ok_or_else(|| {
        Error::PreconditionFailed {
            context: "inverting a lens whose forward table is not a bijection".to_string(),
        }
    })?;
    let mut forward = Vec::with_capacity(f.target.positions());
    let mut backward = Vec::with_capacity(f.target.positions());
    for b in 0..f.target.positions() {
        let a = pos_inverse[b];
        let dir_inverse =
            finset::invert_table(f.backward_at(a), f.source.arity(a)).ok_or_else(|| {
                Error::PreconditionFailed {
                    context: format!("inverting a non-bijective backward table at position {a}"),
                }
            })?;
        forward.push(a);
        backward.push(dir_inverse);
    }
    Lens::new(f.target.clone(), f.source.clone(), forward, backward)
}

/// A chart: covariant on positions and on directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    source: Poly,
    target: Poly,
    on_pos: Vec<usize>,
    on_dir: Vec<Vec<usize>>,
}

impl Serialize for Chart {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Chart", 2)?;
        s.serialize_field("on_pos", &self.on_pos)?;
        s.serialize_field("on_dir", &self.on_dir)?;
        s.end()
    }
}

impl Chart {
    pub fn new(
        source: Poly,
        target: Poly,
        on_pos: Vec<usize>,
        on_dir: Vec<Vec<usize>>,
    ) -> Result<Chart> {
        if on_pos.len() != source.positions() || on_dir.len() != source.positions() {
            return Err(Error::ShapeMismatch {
                context: "chart tables do not cover the source positions".to_string(),
            });
        }
        for a in 0..source.positions() {
            if on_pos[a] >= target.positions() {
                return Err(Error::IndexOutOfRange {
                    index: on_pos[a],
                    size: target.positions(),
                });
            }
            if on_dir[a].len() != source.arity(a) {
                return Err(Error::ShapeMismatch {
                    context: format!(
                        "chart direction table at position {a} has length {}, arity is {}",
                        on_dir[a].len(),
                        source.arity(a)
                    ),
                });
            }
            for &d in &on_dir[a] {
                if d >= target.arity(on_pos[a]) {
                    return Err(Error::IndexOutOfRange {
                        index: d,
                        size: target.arity(on_pos[a]),
                    });
                }
            }
        }
        Ok(Chart {
            source,
            target,
            on_pos,
            on_dir,
        })
    }

    pub fn source(&self) -> &Poly {
        &self.source
    }

    pub fn target(&self) -> &Poly {
        &self.target
    }

    pub fn on_pos(&self, a: usize) -> usize {
        self.on_pos[a]
    }

    pub fn on_dir(&self, a: usize, b: usize) -> usize {
        self.on_dir[a][b]
    }
}

/// Cardinality of the extension `p(X)` at `|X| = x`: the sum over positions
/// of `x^arity`.
pub fn extension_card(p: &Poly, x: usize) -> Result<u128> {
    let mut total: u128 = 0;
    for a in 0..p.positions() {
        let term = checked_pow(x as u128, p.arity(a))?;
        total = total.checked_add(term).ok_or_else(|| Error::Overflow {
            context: "extension cardinality".to_string(),
        })?;
    }
    Ok(total)
}

fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    let mut result: u128 = 1;
    for _ in 0..exp {
        result = result.checked_mul(base).ok_or_else(|| Error::Overflow {
            context: "extension cardinality".to_string(),
        })?;
    }
    Ok(result)
}

/// An element of the extension `p(X)`: a position together with a filling of
/// its directions by elements of `X`.
pub type ExtElem = (usize, Vec<usize>);

/// All elements of `p(X)` at `|X| = x`, ordered by position and then by the
/// filling read as mixed-radix digits (most significant first).
pub fn extension_enum(p: &Poly, x: usize) -> Result<Vec<ExtElem>> {
    let card = extension_card(p, x)?;
    if card > position_bound() as u128 {
        return Err(Error::Overflow {
            context: format!("extension enumeration of size {card}"),
        });
    }
    let mut elems = Vec::with_capacity(card as usize);
    for a in 0..p.positions() {
        let bases = vec![x; p.arity(a)];
        let count = finset::pi_size(&bases)?;
        for i in 0..count {
            elems.push((a, finset::unrank_pi(&bases, i)?));
        }
    }
    Ok(elems)
}

/// Action of a lens on an extension element: forward on the position,
/// reindex the filling along the backward table.
pub fn apply_lens_extension(f: &Lens, x: usize, elem: &ExtElem) -> Result<ExtElem> {
    let (a, fill) = elem;
    if *a >= f.source().positions() {
        return Err(Error::IndexOutOfRange {
            index: *a,
            size: f.source().positions(),
        });
    }
    if fill.len() != f.source().arity(*a) {
        return Err(Error::ShapeMismatch {
            context: format!(
                "filling of length {} at position {a} with arity {}",
                fill.len(),
                f.source().arity(*a)
            ),
        });
    }
    for &v in fill {
        if v >= x {
            return Err(Error::IndexOutOfRange { index: v, size: x });
        }
    }
    let b = f.forward_req(*a)?;
    let fill2 = f.backward_at(*a).iter().map(|&d| fill[d]).collect();
    Ok((b, fill2))
}

/// Commutativity of a mixed square with lenses `top : p -> q`,
/// `bottom : p' -> q'` and charts `left : p -> p'`, `right : q -> q'`.
///
/// The square commutes when positions agree,
/// `right.on_pos(top(a)) == bottom(left.on_pos(a))`, and for every target
/// direction `d` of `top` at `a`,
/// `left.on_dir(a, top.backward(d)) == bottom.backward(right.on_dir(top(a), d))`.
/// Positions where `top` is undefined are skipped; a position where `top` is
/// defined but `bottom` is not fails the square.
pub fn chart_square_commutes(
    top: &Lens,
    bottom: &Lens,
    left: &Chart,
    right: &Chart,
) -> Result<bool> {
    if left.source() != top.source()
        || left.target() != bottom.source()
        || right.source() != top.target()
        || right.target() != bottom.target()
    {
        return Err(Error::ShapeMismatch {
            context: "square sides do not share corners".to_string(),
        });
    }
    for a in 0..top.source().positions() {
        let Some(b) = top.forward(a) else { continue };
        let a2 = left.on_pos(a);
        let Some(b2) = bottom.forward(a2) else {
            return Ok(false);
        };
        if right.on_pos(b) != b2 {
            return Ok(false);
        }
        for d in 0..top.target().arity(b) {
            let via_top = left.on_dir(a, top.backward_at(a)[d]);
            let via_right = bottom.backward_at(a2)[right.on_dir(b, d)];
            if via_top != via_right {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
