//! Concrete universe polynomials carrying monad structure.
//!
//! `mk_ufin(cap)` is the skeletal finite-set universe truncated at `cap`:
//! codes are cardinalities, `decode(n) = Fin(n)`, and its extension is the
//! truncated list functor. Its `sigma` and `pi` lenses are partial: they are
//! undefined at positions whose sum or product exceeds the cap, and identity
//! backward tables elsewhere because the rank encodings of `crate::finset`
//! realize the sum and product identifications on the nose.
//!
//! `mk_uprop()` is the two-valued proposition universe; its extension is the
//! Maybe functor and its monad structure composes partial functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finset::{unrank_pi, unrank_sigma, FinSet};
use crate::monoidal::{compose_poly, composite_pos_rank, for_each_composite_pos, unit_y, CompositePos};
use crate::poly::{
    apply_lens_extension, eq_lens, is_cartesian, mk_poly, Lens, LensViolation, Poly,
};
use crate::uparrow::up;

/// A universe polynomial: codes with decoding, a unit, and partial sum and
/// product structure.
///
/// The sum and product lenses are materialized as tables only when their
/// source composite fits the position bound; past that (large truncation
/// caps) the fields are `None` and the pointwise accessors compute the
/// structure arithmetically, which is exact for the skeletal truncated
/// universe because its codes are cardinalities.
#[derive(Debug, Clone)]
pub struct UniversePoly {
    pub poly: Poly,
    /// Largest representable code; `None` when the universe is not truncated.
    pub cap: Option<usize>,
    /// `y -> u`, picking the singleton code.
    pub eta: Lens,
    /// `(u ◃ u) -> u`, possibly partial under the cap.
    pub sigma: Option<Lens>,
    /// `up(u, u) -> u`, possibly partial under the cap.
    pub pi: Option<Lens>,
}

impl UniversePoly {
    pub fn decode(&self, code: usize) -> FinSet {
        FinSet(self.poly.arity(code))
    }

    /// The materialized sum lens, required by the law engine.
    pub fn sigma_lens(&self) -> Result<&Lens> {
        self.sigma.as_ref().ok_or_else(|| Error::Overflow {
            context: "sum structure is not materialized at this cap".to_string(),
        })
    }

    /// The materialized product lens, required by the law engine.
    pub fn pi_lens(&self) -> Result<&Lens> {
        self.pi.as_ref().ok_or_else(|| Error::Overflow {
            context: "product structure is not materialized at this cap".to_string(),
        })
    }

    fn rank_of(&self, outer: usize, gamma: &[usize]) -> Result<usize> {
        composite_pos_rank(
            &self.poly,
            &self.poly,
            &CompositePos {
                outer,
                inner_choice: gamma.to_vec(),
            },
        )
    }

    fn formula_forward(&self, rank: usize, value: usize) -> Result<usize> {
        let cap = self.cap.ok_or_else(|| Error::PreconditionFailed {
            context: "universe has no materialized structure and no cap formula".to_string(),
        })?;
        if value <= cap {
            Ok(value)
        } else {
            Err(Error::CapExceeded {
                cap,
                position: rank,
            })
        }
    }

    /// Apply `sigma` at the composite position `(outer, gamma)`.
    pub fn sigma_forward(&self, outer: usize, gamma: &[usize]) -> Result<usize> {
        let rank = self.rank_of(outer, gamma)?;
        match &self.sigma {
            Some(lens) => lens.forward(rank).ok_or(Error::CapExceeded {
                cap: self.cap.unwrap_or(0),
                position: rank,
            }),
            None => {
                let sum = gamma.iter().fold(0usize, |acc, &c| acc.saturating_add(c));
                self.formula_forward(rank, sum)
            }
        }
    }

    /// Apply `pi` at the up-arrow position `(outer, gamma)` (same ranking as
    /// the composite positions).
    pub fn pi_forward(&self, outer: usize, gamma: &[usize]) -> Result<usize> {
        let rank = self.rank_of(outer, gamma)?;
        match &self.pi {
            Some(lens) => lens.forward(rank).ok_or(Error::CapExceeded {
                cap: self.cap.unwrap_or(0),
                position: rank,
            }),
            None => {
                let product = gamma.iter().fold(1usize, |acc, &c| acc.saturating_mul(c));
                self.formula_forward(rank, product)
            }
        }
    }

    /// Backward action of `sigma` at `(outer, gamma)`: target direction `z`
    /// unranks to the pair (direction of `outer`, direction within its
    /// chosen code), realizing the projections of the sum identification.
    pub fn sigma_backward_pair(
        &self,
        outer: usize,
        gamma: &[usize],
        z: usize,
    ) -> Result<(usize, usize)> {
        let rank = self.rank_of(outer, gamma)?;
        let code = self.sigma_forward(outer, gamma)?;
        if z >= self.poly.arity(code) {
            return Err(Error::IndexOutOfRange {
                index: z,
                size: self.poly.arity(code),
            });
        }
        let v = match &self.sigma {
            Some(lens) => lens.backward_at(rank)[z],
            None => z,
        };
        let bases: Vec<usize> = gamma.iter().map(|&c| self.poly.arity(c)).collect();
        unrank_sigma(&bases, v)
    }

    /// Backward action of `pi` at `(outer, gamma)`: target direction `z`
    /// unranks to the application tuple, one argument per direction of
    /// `outer`, realizing the product identification.
    pub fn pi_backward_tuple(
        &self,
        outer: usize,
        gamma: &[usize],
        z: usize,
    ) -> Result<Vec<usize>> {
        let rank = self.rank_of(outer, gamma)?;
        let code = self.pi_forward(outer, gamma)?;
        if z >= self.poly.arity(code) {
            return Err(Error::IndexOutOfRange {
                index: z,
                size: self.poly.arity(code),
            });
        }
        let v = match &self.pi {
            Some(lens) => lens.backward_at(rank)[z],
            None => z,
        };
        let bases: Vec<usize> = gamma.iter().map(|&c| self.poly.arity(c)).collect();
        unrank_pi(&bases, v)
    }
}

fn truncated_table(
    poly: &Poly,
    cap: usize,
    source: Poly,
    combine: impl Fn(&[usize]) -> usize,
) -> Result<Lens> {
    let mut fwd = Vec::with_capacity(source.positions());
    let mut bwd = Vec::with_capacity(source.positions());
    for_each_composite_pos(poly, poly, |_, _, gamma| {
        let value = combine(gamma);
        if value <= cap {
            fwd.push(Some(value));
            bwd.push((0..value).collect());
        } else {
            fwd.push(None);
            bwd.push(Vec::new());
        }
        Ok(())
    })?;
    Lens::new_partial(source, poly.clone(), fwd, bwd)
}

/// The skeletal finite-set universe truncated at `cap >= 1`: codes `0..=cap`
/// where code `n` has `n` directions. The sum and product tables are
/// materialized when the composite source fits the position bound; at larger
/// caps the pointwise accessors still evaluate them exactly.
pub fn mk_ufin(cap: usize) -> Result<UniversePoly> {
    if cap == 0 {
        return Err(Error::PreconditionFailed {
            context: "the truncated universe needs cap >= 1 to hold the unit code".to_string(),
        });
    }
    let poly = mk_poly((0..=cap).collect());
    let eta = Lens::new(unit_y(), poly.clone(), vec![1], vec![vec![0]])?;

    let (sigma, pi) = match compose_poly(&poly, &poly) {
        Ok(uu) => {
            let sigma = truncated_table(&poly, cap, uu, |gamma| {
                gamma.iter().fold(0usize, |acc, &c| acc.saturating_add(c))
            })?;
            let upp = up(&poly, &poly)?;
            let pi = truncated_table(&poly, cap, upp, |gamma| {
                gamma.iter().fold(1usize, |acc, &c| acc.saturating_mul(c))
            })?;
            (Some(sigma), Some(pi))
        }
        Err(Error::Overflow { .. }) => (None, None),
        Err(e) => return Err(e),
    };

    Ok(UniversePoly {
        poly,
        cap: Some(cap),
        eta,
        sigma,
        pi,
    })
}

/// The two-valued proposition universe: codes 0 (false) and 1 (true), with
/// total conjunction-shaped sum and product structure.
pub fn mk_uprop() -> Result<UniversePoly> {
    let poly = mk_poly(vec![0, 1]);
    let eta = Lens::new(unit_y(), poly.clone(), vec![1], vec![vec![0]])?;
    let uu = compose_poly(&poly, &poly)?;
    let sigma = Lens::new(
        uu,
        poly.clone(),
        vec![0, 0, 1],
        vec![Vec::new(), Vec::new(), vec![0]],
    )?;
    let upp = up(&poly, &poly)?;
    let pi = Lens::new(
        upp,
        poly.clone(),
        vec![1, 0, 1],
        vec![vec![0], Vec::new(), vec![0]],
    )?;
    Ok(UniversePoly {
        poly,
        cap: None,
        eta,
        sigma: Some(sigma),
        pi: Some(pi),
    })
}

/// A partial function between finite sets, tabulated elementwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialFn {
    pub domain: usize,
    pub codomain: usize,
    pub entries: Vec<Option<usize>>,
}

impl PartialFn {
    pub fn new(domain: usize, codomain: usize, entries: Vec<Option<usize>>) -> Result<PartialFn> {
        if entries.len() != domain {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "partial function table has {} entries over a domain of {domain}",
                    entries.len()
                ),
            });
        }
        for v in entries.iter().flatten() {
            if *v >= codomain {
                return Err(Error::IndexOutOfRange {
                    index: *v,
                    size: codomain,
                });
            }
        }
        Ok(PartialFn {
            domain,
            codomain,
            entries,
        })
    }
}

/// Kleisli composition computed directly on the tables.
pub fn kleisli_compose(f: &PartialFn, g: &PartialFn) -> Result<PartialFn> {
    if f.codomain != g.domain {
        return Err(Error::ShapeMismatch {
            context: format!(
                "partial functions with codomain {} and domain {} do not compose",
                f.codomain, g.domain
            ),
        });
    }
    let entries = f
        .entries
        .iter()
        .map(|e| e.and_then(|b| g.entries[b]))
        .collect();
    PartialFn::new(f.domain, g.codomain, entries)
}

/// Kleisli composition routed through the proposition universe: map `g` over
/// the Maybe value of `f`, obtaining an element of the composite extension
/// `(u ◃ u)(C)`, and flatten it with the extension action of `sigma`.
pub fn kleisli_compose_via_monad(f: &PartialFn, g: &PartialFn) -> Result<PartialFn> {
    if f.codomain != g.domain {
        return Err(Error::ShapeMismatch {
            context: format!(
                "partial functions with codomain {} and domain {} do not compose",
                f.codomain, g.domain
            ),
        });
    }
    let u = mk_uprop()?;
    let mut entries = Vec::with_capacity(f.domain);
    for a in 0..f.domain {
        // Composite extension positions: rank 0 = (0,[]), 1 = (1,[0]), 2 = (1,[1]).
        let elem = match f.entries[a] {
            None => (0usize, Vec::new()),
            Some(b) => match g.entries[b] {
                None => (1, Vec::new()),
                Some(c) => (2, vec![c]),
            },
        };
        let (pos, fill) = apply_lens_extension(u.sigma_lens()?, g.codomain, &elem)?;
        entries.push(match pos {
            0 => None,
            _ => Some(fill[0]),
        });
    }
    PartialFn::new(f.domain, g.codomain, entries)
}

/// Outcome of probing weak univalence with a parallel pair of Cartesian
/// lenses into a universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnivalenceReport {
    /// Whether the two forward tables agree; forced for the skeletal
    /// universe, where a bijection onto a decode pins down the code.
    pub forward_equal: bool,
    /// Whether the lenses agree outright.
    pub full_equal: bool,
    /// First disagreement when they do not.
    pub discrepancy: Option<LensViolation>,
}

/// Compare two Cartesian lenses `p -> u`: weak univalence predicts equal
/// forward tables, while full equality can fail on backward permutations.
pub fn check_weak_univalence(u: &UniversePoly, f: &Lens, g: &Lens) -> Result<UnivalenceReport> {
    if f.source() != g.source() || f.target() != &u.poly || g.target() != &u.poly {
        return Err(Error::ShapeMismatch {
            context: "univalence probe needs a parallel pair into the universe".to_string(),
        });
    }
    if !is_cartesian(f) || !is_cartesian(g) {
        return Err(Error::PreconditionFailed {
            context: "univalence probe requires Cartesian lenses".to_string(),
        });
    }
    let witness = eq_lens(f, g)?;
    Ok(UnivalenceReport {
        forward_equal: f.forward_table() == g.forward_table(),
        full_equal: witness.equal,
        discrepancy: witness.first_violation,
    })
}
