use super::{Letter, Tower, WordsError};
use crate::zt_poly::{coset_meets_region, Coset, DegreeKind, Lattice, Poly, Region, Rel, Sign};

/// `0` together with `|γ|` for every letter `u^γ` inside `π(v)`, `v ∈ w`,
/// sorted increasingly.
pub fn critical_exponents(tower: &Tower, w: &[usize], u: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero()];
    for &v in w {
        for l in tower.root_word(v).letters() {
            if let Letter::Power { root, exp } = l {
                if *root == u {
                    out.push(exp.abs());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Cells of nonstandard exponents cut out by sign and by the relation of
/// `|α|` to each critical exponent: positive cells by increasing value,
/// then negative cells by increasing absolute value. Empty cells are
/// dropped.
pub fn equiv_classes(tower: &Tower, w: &[usize], u: usize) -> Vec<Region> {
    let crit = critical_exponents(tower, w, u);
    let positive: Vec<&Poly> = crit.iter().filter(|c| !c.is_zero()).collect();
    let mut cells = Vec::new();
    for sign in [Sign::Positive, Sign::Negative] {
        // maps a bound on |α| to a constraint on α
        let bound = |rel: Rel, c: &Poly| match sign {
            Sign::Negative => (
                match rel {
                    Rel::Lt => Rel::Gt,
                    Rel::Gt => Rel::Lt,
                    r => r,
                },
                -c,
            ),
            _ => (rel, c.clone()),
        };
        for i in 0..=positive.len() {
            let mut gap = Vec::new();
            if i > 0 {
                gap.push(bound(Rel::Gt, positive[i - 1]));
            }
            if i < positive.len() {
                gap.push(bound(Rel::Lt, positive[i]));
            }
            cells.push(Region::new(sign, DegreeKind::Nonstandard, gap));
            if i < positive.len() {
                cells.push(Region::new(
                    sign,
                    DegreeKind::Nonstandard,
                    vec![bound(Rel::Eq, positive[i])],
                ));
            }
        }
    }
    let width = crit
        .iter()
        .map(Poly::width)
        .max()
        .unwrap_or(0)
        .max(tower.degree_bound + 1)
        .max(2);
    let everything = Coset::new(Poly::zero(), Lattice::full(width));
    cells.retain(|r| coset_meets_region(&everything, r).is_some());
    cells
}

/// Index into [`equiv_classes`] of the cell containing `alpha`.
pub fn class_index(cells: &[Region], alpha: &Poly) -> Result<usize, WordsError> {
    if !alpha.is_nonstandard() {
        return Err(WordsError::IntegerExponent {
            exp: alpha.to_string(),
        });
    }
    let hits: Vec<usize> = (0..cells.len())
        .filter(|&i| cells[i].contains(alpha))
        .collect();
    assert_eq!(
        hits.len(),
        1,
        "cells must partition the nonstandard exponents"
    );
    Ok(hits[0])
}

pub fn class_of(tower: &Tower, w: &[usize], u: usize, alpha: &Poly) -> Result<Region, WordsError> {
    let cells = equiv_classes(tower, w, u);
    Ok(cells[class_index(&cells, alpha)?].clone())
}
