//! Rank/unrank kernel for finite sums and products.
//!
//! Every dependent sum and product in this crate is flattened to an initial
//! segment of the naturals through two fixed encodings:
//!
//! - sums are branch-major lexicographic: the pair `(branch, offset)` over
//!   branch sizes `arities` gets index `arities[..branch].sum() + offset`;
//! - products are mixed-radix with digit 0 most significant: the tuple `t`
//!   over `bases` gets index `sum_b t[b] * bases[b+1..].product()`.
//!
//! The empty sum has zero elements and the empty product exactly one (the
//! empty tuple). All downstream position and direction encodings reduce to
//! these two maps, so the order conventions here are load-bearing for every
//! strict equality check in the crate.

use crate::error::{Error, Result};

/// A finite set, known only by its size; element `i` ranges over `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinSet(pub usize);

impl FinSet {
    pub fn size(&self) -> usize {
        self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.0
    }
}

/// A finite function, stored as its table of values.
pub type Table = Vec<usize>;

/// Total size of a sum with the given branch sizes.
pub fn sigma_size(arities: &[usize]) -> Result<usize> {
    let mut total = 0usize;
    for &a in arities {
        total = total.checked_add(a).ok_or_else(|| Error::Overflow {
            context: "sum of branch sizes".to_string(),
        })?;
    }
    Ok(total)
}

/// Total size of a product with the given digit bases.
pub fn pi_size(bases: &[usize]) -> Result<usize> {
    let mut total = 1usize;
    for &b in bases {
        total = total.checked_mul(b).ok_or_else(|| Error::Overflow {
            context: "product of digit bases".to_string(),
        })?;
    }
    Ok(total)
}

pub fn rank_sigma(arities: &[usize], branch: usize, offset: usize) -> Result<usize> {
    if branch >= arities.len() {
        return Err(Error::IndexOutOfRange {
            index: branch,
            size: arities.len(),
        });
    }
    if offset >= arities[branch] {
        return Err(Error::IndexOutOfRange {
            index: offset,
            size: arities[branch],
        });
    }
    Ok(sigma_size(&arities[..branch])? + offset)
}

pub fn unrank_sigma(arities: &[usize], index: usize) -> Result<(usize, usize)> {
    let mut rest = index;
    for (branch, &a) in arities.iter().enumerate() {
        if rest < a {
            return Ok((branch, rest));
        }
        rest -= a;
    }
    Err(Error::IndexOutOfRange {
        index,
        size: sigma_size(arities)?,
    })
}

pub fn rank_pi(bases: &[usize], digits: &[usize]) -> Result<usize> {
    if digits.len() != bases.len() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "tuple length {} does not match base count {}",
                digits.len(),
                bases.len()
            ),
        });
    }
    let mut index = 0usize;
    for (b, (&digit, &base)) in digits.iter().zip(bases).enumerate() {
        if digit >= base {
            return Err(Error::IndexOutOfRange {
                index: digit,
                size: base,
            });
        }
        index = index
            .checked_mul(base)
            .and_then(|i| i.checked_add(digit))
            .ok_or_else(|| Error::Overflow {
                context: format!("mixed-radix rank at digit {b}"),
            })?;
    }
    Ok(index)
}

pub fn unrank_pi(bases: &[usize], index: usize) -> Result<Vec<usize>> {
    let total = pi_size(bases)?;
    if index >= total {
        return Err(Error::IndexOutOfRange { index, size: total });
    }
    let mut digits = vec![0usize; bases.len()];
    let mut rest = index;
    for b in (0..bases.len()).rev() {
        digits[b] = rest % bases[b];
        rest /= bases[b];
    }
    Ok(digits)
}

/// Whether `table` describes a bijection from `0..table.len()` onto `0..codomain`.
pub fn is_bijection(table: &[usize], codomain: usize) -> bool {
    invert_table(table, codomain).is_some()
}

/// Inverse of a bijective table, or `None` if it is not a bijection.
pub fn invert_table(table: &[usize], codomain: usize) -> Option<Vec<usize>> {
    if table.len() != codomain {
        return None;
    }
    let mut inverse = vec![usize::MAX; codomain];
    for (i, &j) in table.iter().enumerate() {
        if j >= codomain || inverse[j] != usize::MAX {
            return None;
        }
        inverse[j] = i;
    }
    Some(inverse)
}

/// A bijection between two finite sets of equal size, stored both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bijection {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Bijection {
    pub fn new(forward: Vec<usize>) -> Option<Bijection> {
        let codomain = forward.len();
        let inverse = invert_table(&forward, codomain)?;
        Some(Bijection { forward, inverse })
    }

    pub fn identity(n: usize) -> Bijection {
        Bijection {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.forward[i]
    }

    pub fn invert(&self, j: usize) -> usize {
        self.inverse[j]
    }

    pub fn forward_table(&self) -> &[usize] {
        &self.forward
    }
}

/// All permutations of `0..n` in lexicographic order. Intended for small `n`;
/// callers enforcing a search bound should check `n` before calling.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        all.push(current.clone());
        // Advance to the next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    all
}
