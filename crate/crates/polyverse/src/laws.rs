//! The law engine: monad unit and associativity diagrams and the four
//! distributive-law diagrams over a universe polynomial.
//!
//! The unit diagrams are checked by materializing both composite lenses and
//! comparing tables. The associativity diagram lives on `(u ◃ u) ◃ u`, whose
//! position count is astronomically large even at small caps, so it is
//! checked pointwise instead: inputs are enumerated sparsely in rank order
//! (pruned by the cap, outside which both sides are undefined) and each
//! structural step of the two cited composites is evaluated on demand with
//! the same formulas the materialized constructors use. The distributive-law
//! diagrams are assembled from the distributor combinators only and compared
//! with [`eq_distributor`] or [`eq_distributor_upto_iso`].
//!
//! Inputs where both sides of a diagram are undefined (the cap truncates
//! `sigma` and `pi`) are skipped. The unit and associativity checks also
//! skip inputs where only one side is undefined, because their two routes
//! consume the cap at different intermediate stages; the distributive-law
//! checks delegate definedness handling to the chosen distributor equality
//! mode. A law holds when all compared inputs agree. Failing reports carry
//! the first violating input in rank order.

use serde::Serialize;

use crate::distributor::{
    distr_comp1, distr_comp2, distr_id1, distr_id2, distr_law_candidate, distr_lens,
    eq_distributor, eq_distributor_upto_iso, DistEqWitness, Distributor,
};
use crate::error::{Error, Result};
use crate::finset::{rank_sigma, unrank_sigma};
use crate::monoidal::{
    compose_poly, composite_pos_count, composite_pos_rank, composite_pos_unrank,
    lens_compose_prod, unit_y, unitl, unitr, CompositePos,
};
use crate::poly::{comp_lens, eq_lens, id_lens, Lens, LensViolation};
use crate::universes::UniversePoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LawId {
    M1L,
    M1R,
    M2,
    DL1,
    DL2,
    DL3,
    DL4,
}

impl std::fmt::Display for LawId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            LawId::M1L => "M1L",
            LawId::M1R => "M1R",
            LawId::M2 => "M2",
            LawId::DL1 => "DL1",
            LawId::DL2 => "DL2",
            LawId::DL3 => "DL3",
            LawId::DL4 => "DL4",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<LawId> {
        match s {
            "M1L" => Ok(LawId::M1L),
            "M1R" => Ok(LawId::M1R),
            "M2" => Ok(LawId::M2),
            "DL1" => Ok(LawId::DL1),
            "DL2" => Ok(LawId::DL2),
            "DL3" => Ok(LawId::DL3),
            "DL4" => Ok(LawId::DL4),
            other => Err(Error::PreconditionFailed {
                context: format!("unknown law {other}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Strict,
    UptoIso,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::UptoIso => "upto_iso",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawStatus {
    Holds,
    Fails,
    CapExceeded,
}

impl std::fmt::Display for LawStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LawStatus::Holds => "holds",
            LawStatus::Fails => "fails",
            LawStatus::CapExceeded => "cap_exceeded",
        })
    }
}

/// The first violating input of a failed law, in enumeration (rank) order.
///
/// `outer` and `gamma` identify the input position of the diagram's source;
/// the associativity diagram adds the third-level choice `delta`.
/// Distributive-law violations record the comparison layer, and `direction`
/// carries the differing direction or table slot where one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub outer: usize,
    pub gamma: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<usize>,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// Outcome of checking one law. `checked` counts the inputs that were
/// compared and agreed; skipped (undefined) inputs are not included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: LawId,
    pub mode: Mode,
    pub status: LawStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub checked: u64,
}

fn cap_exceeded_report(law: LawId, mode: Mode) -> LawReport {
    LawReport {
        law,
        mode,
        status: LawStatus::CapExceeded,
        counterexample: None,
        checked: 0,
    }
}

fn or_cap_exceeded(law: LawId, mode: Mode, result: Result<LawReport>) -> Result<LawReport> {
    match result {
        Err(Error::Overflow { .. }) | Err(Error::CapExceeded { .. }) => {
            Ok(cap_exceeded_report(law, mode))
        }
        other => other,
    }
}

/// Check both unit diagrams: the left unitor against `(eta ◃◃ id) ; sigma`
/// and the right unitor against `(id ◃◃ eta) ; sigma`.
pub fn check_m1(u: &UniversePoly) -> Result<(LawReport, LawReport)> {
    Ok((
        or_cap_exceeded(LawId::M1L, Mode::Strict, check_m1_side(u, LawId::M1L))?,
        or_cap_exceeded(LawId::M1R, Mode::Strict, check_m1_side(u, LawId::M1R))?,
    ))
}

fn build_m1_sides(u: &UniversePoly, law: LawId) -> Result<(Lens, Lens)> {
    let id_u = id_lens(&u.poly);
    let sigma = u.sigma_lens()?;
    match law {
        LawId::M1L => {
            let lhs = unitl(&u.poly)?;
            let rhs = comp_lens(&lens_compose_prod(&u.eta, &id_u)?, sigma)?;
            Ok((lhs, rhs))
        }
        LawId::M1R => {
            let lhs = unitr(&u.poly)?;
            let rhs = comp_lens(&lens_compose_prod(&id_u, &u.eta)?, sigma)?;
            Ok((lhs, rhs))
        }
        _ => Err(Error::PreconditionFailed {
            context: format!("{law} is not a unit diagram"),
        }),
    }
}

fn check_m1_side(u: &UniversePoly, law: LawId) -> Result<LawReport> {
    let (lhs, rhs) = build_m1_sides(u, law)?;
    let witness = eq_lens(&lhs, &rhs)?;
    match witness.first_violation {
        None => Ok(LawReport {
            law,
            mode: Mode::Strict,
            status: LawStatus::Holds,
            counterexample: None,
            checked: lhs.source().positions() as u64,
        }),
        Some(v) => {
            let ce = m1_counterexample(u, law, &lhs, &rhs, v)?;
            Ok(LawReport {
                law,
                mode: Mode::Strict,
                status: LawStatus::Fails,
                counterexample: Some(ce),
                checked: v.position as u64,
            })
        }
    }
}

fn m1_counterexample(
    u: &UniversePoly,
    law: LawId,
    lhs: &Lens,
    rhs: &Lens,
    v: LensViolation,
) -> Result<Counterexample> {
    let y = unit_y();
    let pos = match law {
        LawId::M1L => composite_pos_unrank(&y, &u.poly, v.position)?,
        _ => composite_pos_unrank(&u.poly, &y, v.position)?,
    };
    let (left, right) = match v.direction {
        None => (lhs.forward(v.position), rhs.forward(v.position)),
        Some(d) => (
            Some(lhs.backward_at(v.position)[d]),
            Some(rhs.backward_at(v.position)[d]),
        ),
    };
    Ok(Counterexample {
        outer: pos.outer,
        gamma: pos.inner_choice,
        delta: None,
        layer: None,
        direction: v.direction,
        left,
        right,
    })
}

/// One side of the associativity diagram evaluated at a single input: the
/// target code and the full backward table over its directions.
struct M2Side {
    code: usize,
    bwd: Vec<usize>,
}

fn m2_lhs(u: &UniversePoly, a: usize, gamma: &[usize], delta: &[usize]) -> Result<Option<M2Side>> {
    let poly = &u.poly;
    let sigma = u.sigma_lens()?;
    let gamma_ar: Vec<usize> = gamma.iter().map(|&c| poly.arity(c)).collect();
    let delta_ar: Vec<usize> = delta.iter().map(|&c| poly.arity(c)).collect();
    // Associator: regroup delta into one u◃u position per direction of a.
    let mut eps = Vec::with_capacity(gamma.len());
    let mut m = Vec::with_capacity(gamma.len());
    let mut start = 0usize;
    for (b, &c) in gamma.iter().enumerate() {
        let rank = composite_pos_rank(
            poly,
            poly,
            &CompositePos {
                outer: c,
                inner_choice: delta[start..start + gamma_ar[b]].to_vec(),
            },
        )?;
        eps.push(rank);
        match sigma.forward(rank) {
            Some(code) => m.push(code),
            None => return Ok(None),
        }
        start += gamma_ar[b];
    }
    let t_pos = composite_pos_rank(
        poly,
        poly,
        &CompositePos {
            outer: a,
            inner_choice: m.clone(),
        },
    )?;
    let Some(code) = sigma.forward(t_pos) else {
        return Ok(None);
    };
    let m_ar: Vec<usize> = m.iter().map(|&c| poly.arity(c)).collect();
    let mut bwd = Vec::with_capacity(poly.arity(code));
    for z in 0..poly.arity(code) {
        let v2 = sigma.backward_at(t_pos)[z];
        let (b, w) = unrank_sigma(&m_ar, v2)?;
        let w2 = sigma.backward_at(eps[b])[w];
        let start: usize = gamma_ar[..b].iter().sum();
        let slice_ar = &delta_ar[start..start + gamma_ar[b]];
        let (d, x) = unrank_sigma(slice_ar, w2)?;
        let v = rank_sigma(&gamma_ar, b, d)?;
        bwd.push(rank_sigma(&delta_ar, v, x)?);
    }
    Ok(Some(M2Side { code, bwd }))
}

fn m2_rhs(u: &UniversePoly, a: usize, gamma: &[usize], delta: &[usize]) -> Result<Option<M2Side>> {
    let poly = &u.poly;
    let sigma = u.sigma_lens()?;
    let delta_ar: Vec<usize> = delta.iter().map(|&c| poly.arity(c)).collect();
    let a_pos = composite_pos_rank(
        poly,
        poly,
        &CompositePos {
            outer: a,
            inner_choice: gamma.to_vec(),
        },
    )?;
    let Some(c1) = sigma.forward(a_pos) else {
        return Ok(None);
    };
    // The composite-product action reindexes delta along sigma's backward table.
    let delta2: Vec<usize> = (0..poly.arity(c1))
        .map(|v| delta[sigma.backward_at(a_pos)[v]])
        .collect();
    let t2 = composite_pos_rank(
        poly,
        poly,
        &CompositePos {
            outer: c1,
            inner_choice: delta2.clone(),
        },
    )?;
    let Some(code) = sigma.forward(t2) else {
        return Ok(None);
    };
    let delta2_ar: Vec<usize> = delta2.iter().map(|&c| poly.arity(c)).collect();
    let mut bwd = Vec::with_capacity(poly.arity(code));
    for z in 0..poly.arity(code) {
        let v2 = sigma.backward_at(t2)[z];
        let (v1, x) = unrank_sigma(&delta2_ar, v2)?;
        bwd.push(rank_sigma(&delta_ar, sigma.backward_at(a_pos)[v1], x)?);
    }
    Ok(Some(M2Side { code, bwd }))
}

fn m2_compare_at(
    u: &UniversePoly,
    a: usize,
    gamma: &[usize],
    delta: &[usize],
) -> Result<Option<Option<Counterexample>>> {
    // Outer None: skipped. Some(None): agreed. Some(Some(ce)): violation.
    let (Some(lhs), Some(rhs)) = (m2_lhs(u, a, gamma, delta)?, m2_rhs(u, a, gamma, delta)?) else {
        return Ok(None);
    };
    let make = |direction: Option<usize>, left: usize, right: usize| Counterexample {
        outer: a,
        gamma: gamma.to_vec(),
        delta: Some(delta.to_vec()),
        layer: None,
        direction,
        left: Some(left),
        right: Some(right),
    };
    if lhs.code != rhs.code {
        return Ok(Some(Some(make(None, lhs.code, rhs.code))));
    }
    for z in 0..lhs.bwd.len() {
        if lhs.bwd[z] != rhs.bwd[z] {
            return Ok(Some(Some(make(Some(z), lhs.bwd[z], rhs.bwd[z]))));
        }
    }
    Ok(Some(None))
}

fn enum_tuples_bounded(
    base: usize,
    len: usize,
    budget: Option<usize>,
    buf: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<bool>,
) -> Result<bool> {
    if buf.len() == len {
        return visit(buf);
    }
    for digit in 0..base {
        if let Some(b) = budget {
            if digit > b {
                break;
            }
        }
        buf.push(digit);
        let keep_going =
            enum_tuples_bounded(base, len, budget.map(|b| b - digit), buf, visit)?;
        buf.pop();
        if !keep_going {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check the associativity diagram: the associator followed by two
/// applications of `sigma` against the other bracketing, pointwise over all
/// inputs whose third-level choices stay within the cap (outside it both
/// sides are undefined).
pub fn check_m2(u: &UniversePoly) -> Result<LawReport> {
    or_cap_exceeded(LawId::M2, Mode::Strict, check_m2_inner(u))
}

fn check_m2_inner(u: &UniversePoly) -> Result<LawReport> {
    composite_pos_count(&u.poly, &u.poly)?;
    let poly = &u.poly;
    let mut checked = 0u64;
    let mut found: Option<Counterexample> = None;
    for a in 0..poly.positions() {
        if found.is_some() {
            break;
        }
        let mut gamma_buf = Vec::with_capacity(poly.arity(a));
        enum_tuples_bounded(poly.positions(), poly.arity(a), None, &mut gamma_buf, &mut |gamma| {
            let dir_count: usize = gamma.iter().map(|&c| poly.arity(c)).sum();
            let mut delta_buf = Vec::with_capacity(dir_count);
            enum_tuples_bounded(
                poly.positions(),
                dir_count,
                u.cap,
                &mut delta_buf,
                &mut |delta| match m2_compare_at(u, a, gamma, delta)? {
                    None => Ok(true),
                    Some(None) => {
                        checked += 1;
                        Ok(true)
                    }
                    Some(Some(ce)) => {
                        found = Some(ce);
                        Ok(false)
                    }
                },
            )
        })?;
    }
    Ok(match found {
        None => LawReport {
            law: LawId::M2,
            mode: Mode::Strict,
            status: LawStatus::Holds,
            counterexample: None,
            checked,
        },
        Some(ce) => LawReport {
            law: LawId::M2,
            mode: Mode::Strict,
            status: LawStatus::Fails,
            counterexample: Some(ce),
            checked,
        },
    })
}

/// Assemble both sides of distributive-law diagram `k` from the distributor
/// combinators and the candidate law induced by `pi`.
pub fn build_dl_sides(u: &UniversePoly, k: u8) -> Result<(Distributor, Distributor)> {
    let cand = distr_law_candidate(u, u.pi_lens()?)?;
    let id_u = id_lens(&u.poly);
    let y = unit_y();
    match k {
        1 => {
            let sigma = u.sigma_lens()?;
            let comp1 = distr_comp1(&cand, &cand)?;
            let uu = compose_poly(&u.poly, &u.poly)?;
            let lhs = distr_lens(&id_u, &id_u, &id_lens(&uu), sigma, &comp1)?;
            let rhs = distr_lens(&id_u, &id_u, sigma, &id_u, &cand)?;
            Ok((lhs, rhs))
        }
        2 => {
            let sigma = u.sigma_lens()?;
            let comp2 = distr_comp2(&cand, &cand)?;
            let uu = compose_poly(&u.poly, &u.poly)?;
            let lhs = distr_lens(&id_lens(&uu), sigma, &id_u, &id_u, &comp2)?;
            let rhs = distr_lens(sigma, &id_u, &id_u, &id_u, &cand)?;
            Ok((lhs, rhs))
        }
        3 => {
            let d1 = distr_id1(&u.poly)?;
            let lhs = distr_lens(&id_u, &id_u, &id_lens(&y), &u.eta, &d1)?;
            let rhs = distr_lens(&id_u, &id_u, &u.eta, &id_u, &cand)?;
            Ok((lhs, rhs))
        }
        4 => {
            let d2 = distr_id2(&u.poly)?;
            let lhs = distr_lens(&id_lens(&y), &u.eta, &id_u, &id_u, &d2)?;
            let rhs = distr_lens(&u.eta, &id_u, &id_u, &id_u, &cand)?;
            Ok((lhs, rhs))
        }
        other => Err(Error::PreconditionFailed {
            context: format!("distributive-law diagrams are numbered 1 to 4, got {other}"),
        }),
    }
}

fn dl_law_id(k: u8) -> Result<LawId> {
    match k {
        1 => Ok(LawId::DL1),
        2 => Ok(LawId::DL2),
        3 => Ok(LawId::DL3),
        4 => Ok(LawId::DL4),
        other => Err(Error::PreconditionFailed {
            context: format!("distributive-law diagrams are numbered 1 to 4, got {other}"),
        }),
    }
}

/// Check distributive-law diagram `k` in the given mode.
pub fn check_dl(u: &UniversePoly, k: u8, mode: Mode) -> Result<LawReport> {
    let law = dl_law_id(k)?;
    or_cap_exceeded(law, mode, check_dl_inner(u, law, k, mode))
}

fn check_dl_inner(u: &UniversePoly, law: LawId, k: u8, mode: Mode) -> Result<LawReport> {
    let (lhs, rhs) = build_dl_sides(u, k)?;
    let witness = match mode {
        Mode::Strict => eq_distributor(&lhs, &rhs)?,
        Mode::UptoIso => eq_distributor_upto_iso(&lhs, &rhs)?,
    };
    Ok(report_from_witness(law, mode, witness))
}

fn report_from_witness(law: LawId, mode: Mode, witness: DistEqWitness) -> LawReport {
    match witness.violation {
        None => LawReport {
            law,
            mode,
            status: LawStatus::Holds,
            counterexample: None,
            checked: witness.checked as u64,
        },
        Some(v) => LawReport {
            law,
            mode,
            status: LawStatus::Fails,
            counterexample: Some(Counterexample {
                outer: v.outer,
                gamma: v.gamma,
                delta: None,
                layer: Some(v.layer),
                direction: v.index,
                left: v.left,
                right: v.right,
            }),
            checked: witness.checked as u64,
        },
    }
}

/// Run one law in one mode.
pub fn run_law(u: &UniversePoly, law: LawId, mode: Mode) -> Result<LawReport> {
    match law {
        LawId::M1L => Ok(check_m1(u)?.0),
        LawId::M1R => Ok(check_m1(u)?.1),
        LawId::M2 => check_m2(u),
        LawId::DL1 => check_dl(u, 1, mode),
        LawId::DL2 => check_dl(u, 2, mode),
        LawId::DL3 => check_dl(u, 3, mode),
        LawId::DL4 => check_dl(u, 4, mode),
    }
}

/// Re-evaluate a law from scratch and confirm it fails with exactly the
/// given counterexample.
pub fn verify_law_counterexample(
    u: &UniversePoly,
    law: LawId,
    mode: Mode,
    ce: &Counterexample,
) -> Result<bool> {
    let report = run_law(u, law, mode)?;
    Ok(report.status == LawStatus::Fails && report.counterexample.as_ref() == Some(ce))
}

/// Run one law and return its minimal counterexample, re-verified by an
/// independent second evaluation, or `None` when the law holds.
pub fn search_law_counterexample(
    u: &UniversePoly,
    law: LawId,
    mode: Mode,
) -> Result<Option<Counterexample>> {
    let report = run_law(u, law, mode)?;
    match report.counterexample {
        None => Ok(None),
        Some(ce) => {
            if !verify_law_counterexample(u, law, mode, &ce)? {
                return Err(Error::PreconditionFailed {
                    context: "counterexample failed re-verification".to_string(),
                });
            }
            Ok(Some(ce))
        }
    }
}
