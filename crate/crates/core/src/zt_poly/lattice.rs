use std::fmt;

use super::{Poly, ZtError};

fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("lattice arithmetic overflow")
}

fn sub_scaled(row: &mut [i64], other: &[i64], q: i64) {
    if q == 0 {
        return;
    }
    for (x, y) in row.iter_mut().zip(other) {
        *x = x
            .checked_sub(mul(q, *y))
            .expect("lattice arithmetic overflow");
    }
}

pub(crate) type Pivot = (usize, Vec<i64>);

/// Row echelon form over the integers, pivoting only in the first
/// `pivot_cols` columns (column 0 is the most significant). Returns the
/// pivot rows as `(column, row)` in Hermite normal form (positive pivots,
/// entries above each pivot reduced into `[0, pivot)`) and the rows that
/// vanish on the pivot columns.
pub(crate) fn echelon(mut rows: Vec<Vec<i64>>, pivot_cols: usize) -> (Vec<Pivot>, Vec<Vec<i64>>) {
    let mut pivots: Vec<Pivot> = Vec::new();
    for col in 0..pivot_cols {
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in rows.iter().enumerate() {
                if r[col] != 0 && best.is_none_or(|b| r[col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            let pivot_row = rows[b].clone();
            let pv = pivot_row[col];
            let mut others_left = false;
            for (i, r) in rows.iter_mut().enumerate() {
                if i != b && r[col] != 0 {
                    let q = r[col].div_euclid(pv);
                    sub_scaled(r, &pivot_row, q);
                    if r[col] != 0 {
                        others_left = true;
                    }
                }
            }
            if !others_left {
                let mut row = rows.swap_remove(b);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                pivots.push((col, row));
                break;
            }
        }
    }
    // reduce entries above each pivot
    for i in 0..pivots.len() {
        let (col, pivot_row) = pivots[i].clone();
        let pv = pivot_row[col];
        for (_, above) in pivots.iter_mut().take(i) {
            let q = above[col].div_euclid(pv);
            sub_scaled(above, &pivot_row, q);
        }
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    (pivots, rows)
}

/// A finitely generated additive subgroup of Z[t], stored as its unique
/// echelon basis ordered by decreasing leading degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Lattice {
    basis: Vec<Poly>,
}

impl Lattice {
    pub fn trivial() -> Self {
        Lattice { basis: Vec::new() }
    }

    /// Canonical basis of the subgroup generated by `gens`.
    pub fn from_generators<'a>(gens: impl IntoIterator<Item = &'a Poly>) -> Self {
        let gens: Vec<&Poly> = gens.into_iter().collect();
        let width = gens.iter().map(|g| g.width()).max().unwrap_or(0);
        let rows = gens.iter().map(|g| g.to_row(width)).collect();
        let (pivots, _) = echelon(rows, width);
        Lattice {
            basis: pivots.iter().map(|(_, r)| Poly::from_row(r)).collect(),
        }
    }

    /// All of Z[t] restricted to degrees `< width`.
    pub fn full(width: usize) -> Self {
        let gens: Vec<Poly> = (0..width).map(|d| Poly::monomial(1, d)).collect();
        Self::from_generators(&gens)
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn width(&self) -> usize {
        self.basis.first().map_or(0, Poly::width)
    }

    /// `(leading degree, pivot)` of each basis vector.
    pub fn pivots(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.basis.iter().map(|b| {
            (
                b.degree().expect("basis vectors are nonzero"),
                b.leading_coeff(),
            )
        })
    }

    pub fn pivot_at(&self, degree: usize) -> Option<(usize, &Poly)> {
        self.basis
            .iter()
            .enumerate()
            .find(|(_, b)| b.degree() == Some(degree))
    }

    pub fn contains(&self, a: &Poly) -> bool {
        let mut r = a.clone();
        for b in &self.basis {
            let d = b.degree().unwrap();
            // anything above the pivot degree must already be cleared
            if r.degree().is_some_and(|rd| rd > d) {
                return false;
            }
            let c = r.coeff(d);
            let p = b.leading_coeff();
            if c % p != 0 {
                return false;
            }
            r -= &b.scale(c / p);
        }
        r.is_zero()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Canonical representative of `a + self`: each pivot coordinate is
    /// reduced into `[0, pivot)`.
    pub fn reduce(&self, a: &Poly) -> Poly {
        let mut r = a.clone();
        for b in &self.basis {
            let d = b.degree().unwrap();
            let q = r.coeff(d).div_euclid(b.leading_coeff());
            if q != 0 {
                r -= &b.scale(q);
            }
        }
        r
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(self.basis.iter().chain(&other.basis))
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let n = self.width().max(other.width());
        if n == 0 {
            return Lattice::trivial();
        }
        let mut rows = Vec::new();
        for b in &self.basis {
            let mut r = b.to_row(n);
            r.extend(b.to_row(n));
            rows.push(r);
        }
        for b in &other.basis {
            let mut r = b.to_row(n);
            r.extend(vec![0; n]);
            rows.push(r);
        }
        let (_, kernel) = echelon(rows, n);
        let gens: Vec<Poly> = kernel.iter().map(|r| Poly::from_row(&r[n..])).collect();
        Lattice::from_generators(&gens)
    }

    /// Some `x` in `self` with `target - x` in `other`, if one exists.
    pub(crate) fn split(&self, other: &Lattice, target: &Poly) -> Option<Poly> {
        let n = self.width().max(other.width()).max(target.width());
        if n == 0 {
            return Some(Poly::zero());
        }
        let mut rows = Vec::new();
        for b in &self.basis {
            let mut r = b.to_row(n);
            r.extend(b.to_row(n));
            rows.push(r);
        }
        for b in &other.basis {
            let mut r = b.to_row(n);
            r.extend(vec![0; n]);
            rows.push(r);
        }
        let (pivots, _) = echelon(rows, n);
        let mut t = target.to_row(n);
        t.extend(vec![0; n]);
        let mut next = pivots.iter().peekable();
        for col in 0..n {
            match next.peek() {
                Some((pc, row)) if *pc == col => {
                    if t[col] % row[col] != 0 {
                        return None;
                    }
                    let q = t[col] / row[col];
                    sub_scaled(&mut t, row, q);
                    next.next();
                }
                _ => {
                    if t[col] != 0 {
                        return None;
                    }
                }
            }
        }
        Some(-Poly::from_row(&t[n..]))
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{self}")
    }
}

/// `rep + lattice`, with `rep` canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coset {
    lattice: Lattice,
    rep: Poly,
}

impl Coset {
    pub fn new(rep: Poly, lattice: Lattice) -> Self {
        let rep = lattice.reduce(&rep);
        Coset { lattice, rep }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn contains(&self, a: &Poly) -> bool {
        self.lattice.contains(&(a - &self.rep))
    }

    pub fn translate(&self, by: &Poly) -> Coset {
        Coset::new(&self.rep + by, self.lattice.clone())
    }

    pub fn negate(&self) -> Coset {
        Coset::new(-&self.rep, self.lattice.clone())
    }

    pub fn is_subset_of(&self, other: &Coset) -> bool {
        other.lattice.contains_lattice(&self.lattice) && other.contains(&self.rep)
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.rep, self.lattice)
    }
}

impl fmt::Debug for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coset({self})")
    }
}

/// Solves `rep1 + L1 x = rep2 + L2 y`.
pub fn coset_intersect(c1: &Coset, c2: &Coset) -> Option<Coset> {
    let diff = &c2.rep - &c1.rep;
    let x = c1.lattice.split(&c2.lattice, &diff)?;
    let point = &c1.rep + &x;
    debug_assert!(c1.contains(&point) && c2.contains(&point));
    Some(Coset::new(point, c1.lattice.intersect(&c2.lattice)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(u64),
    Infinite,
}

/// Index of `sub` in `sup`.
pub fn lattice_index(sup: &Lattice, sub: &Lattice) -> Result<LatticeIndex, ZtError> {
    if !sup.contains_lattice(sub) {
        return Err(ZtError::NotSublattice {
            sub: sub.to_string(),
            sup: sup.to_string(),
        });
    }
    if sub.rank() < sup.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    // equal rank and containment force identical leading degrees
    let mut index: u64 = 1;
    for ((d1, p1), (d2, p2)) in sup.pivots().zip(sub.pivots()) {
        debug_assert_eq!(d1, d2);
        debug_assert_eq!(p2 % p1, 0);
        index = index
            .checked_mul((p2 / p1) as u64)
            .expect("lattice index overflow");
    }
    Ok(LatticeIndex::Finite(index))
}

/// Canonical representatives of the cosets of `sub` inside `sup`, when the
/// index is finite. The zero representative comes first.
pub fn transversal(sup: &Lattice, sub: &Lattice) -> Result<Vec<Poly>, ZtError> {
    match lattice_index(sup, sub)? {
        LatticeIndex::Infinite => Err(ZtError::InfiniteIndex),
        LatticeIndex::Finite(n) => {
            let mut reps = vec![Poly::zero()];
            let mut seen = std::collections::HashSet::from([Poly::zero()]);
            let mut i = 0;
            while i < reps.len() {
                for b in sup.basis() {
                    for step in [b.clone(), -b] {
                        let c = sub.reduce(&(&reps[i] + &step));
                        if seen.insert(c.clone()) {
                            reps.push(c);
                        }
                    }
                }
                i += 1;
            }
            debug_assert_eq!(reps.len() as u64, n);
            Ok(reps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn lat(gens: &[&str]) -> Lattice {
        let g: Vec<Poly> = gens.iter().map(|s| p(s)).collect();
        Lattice::from_generators(&g)
    }

    /// Every value `sum k_i g_i` with `|k_i| <= bound`.
    fn small_combinations(gens: &[Poly], bound: i64) -> Vec<Poly> {
        let mut out = vec![Poly::zero()];
        for g in gens {
            let mut next = Vec::new();
            for base in &out {
                for k in -bound..=bound {
                    next.push(base + &g.scale(k));
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn generator_examples() {
        assert_eq!(lat(&[]).rank(), 0);
        let l = lat(&["t", "t"]);
        assert_eq!(l.basis(), &[p("t")]);
        let l = lat(&["2", "3"]);
        assert_eq!(l.basis(), &[p("1")]);
        // oracle: 1 is reached by a small combination of 2 and 3
        assert!(small_combinations(&[p("2"), p("3")], 3).contains(&p("1")));
    }

    #[test]
    fn membership_examples() {
        let l = lat(&["2", "t"]);
        assert!(l.contains(&p("2t+4")));
        assert!(!l.contains(&p("1")));
        assert!(Lattice::trivial().contains(&Poly::zero()));
        let combos = small_combinations(&[p("2"), p("t")], 5);
        assert!(combos.contains(&p("2t+4")));
        assert!(combos.iter().all(|c| c.coeff(0) % 2 == 0));
    }

    #[test]
    fn intersect_examples() {
        let c = coset_intersect(
            &Coset::new(p("0"), lat(&["2"])),
            &Coset::new(p("0"), lat(&["3"])),
        )
        .unwrap();
        assert_eq!(c, Coset::new(p("0"), lat(&["6"])));
        // brute force over integers up to 100
        let common: Vec<i64> = (-100..=100).filter(|k| k % 2 == 0 && k % 3 == 0).collect();
        assert!(common.iter().all(|k| c.contains(&Poly::constant(*k))));
        assert!(!c.contains(&p("2")));

        assert!(coset_intersect(
            &Coset::new(p("1"), lat(&["2"])),
            &Coset::new(p("0"), lat(&["2"]))
        )
        .is_none());
        let c = Coset::new(p("t+1"), lat(&["2t", "3"]));
        assert_eq!(coset_intersect(&c, &c), Some(c));
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            lattice_index(&lat(&["1"]), &lat(&["2"])).unwrap(),
            LatticeIndex::Finite(2)
        );
        assert_eq!(
            lattice_index(&lat(&["1", "t"]), &lat(&["2", "t"])).unwrap(),
            LatticeIndex::Finite(2)
        );
        assert_eq!(
            lattice_index(&lat(&["1", "t"]), &lat(&["1"])).unwrap(),
            LatticeIndex::Infinite
        );
        assert!(lattice_index(&lat(&["2"]), &lat(&["1"])).is_err());
        // coset enumeration oracle for {1, t} / {2, t}
        let tr = transversal(&lat(&["1", "t"]), &lat(&["2", "t"])).unwrap();
        assert_eq!(tr.len(), 2);
        let tr = transversal(&lat(&["t+1", "2"]), &lat(&["3t+3", "4"])).unwrap();
        assert_eq!(tr.len(), 6);
    }

    #[test]
    fn canonical_basis_is_hermite() {
        let l = lat(&["4t+6", "6t+4", "2"]);
        // pivots positive, entries above pivots reduced
        assert_eq!(l.basis(), &[p("2t"), p("2")]);
    }

    fn arb_poly(width: usize, c: i64) -> impl Strategy<Value = Poly> {
        prop::collection::vec(-c..=c, 0..=width).prop_map(Poly::from_coeffs)
    }

    proptest! {
        #[test]
        fn order_insensitive(gens in prop::collection::vec(arb_poly(3, 9), 0..4)) {
            let a = Lattice::from_generators(&gens);
            let mut rev = gens.clone();
            rev.reverse();
            prop_assert_eq!(&a, &Lattice::from_generators(&rev));
            for g in &gens {
                prop_assert!(a.contains(g));
            }
            for x in &gens {
                for y in &gens {
                    prop_assert!(a.contains(&(x - y)));
                    prop_assert!(a.contains(&-(x + y)));
                }
            }
        }

        #[test]
        fn canonical_reps(gens in prop::collection::vec(arb_poly(2, 6), 0..3),
                          a in arb_poly(2, 12), b in arb_poly(2, 12)) {
            let l = Lattice::from_generators(&gens);
            prop_assert_eq!(l.reduce(&a) == l.reduce(&b), l.contains(&(&a - &b)));
            prop_assert!(l.contains(&(&a - &l.reduce(&a))));
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn intersect_matches_brute_force(
            g1 in prop::collection::vec(arb_poly(2, 4), 0..=2),
            g2 in prop::collection::vec(arb_poly(2, 4), 0..=2),
            r1 in arb_poly(2, 4), r2 in arb_poly(2, 4),
        ) {
            let c1 = Coset::new(r1, Lattice::from_generators(&g1));
            let c2 = Coset::new(r2, Lattice::from_generators(&g2));
            let result = coset_intersect(&c1, &c2);
            // every element in the coefficient box (degree <= 2, |c| <= 20)
            for a0 in -20i64..=20 {
                for a1 in -20i64..=20 {
                    for a2 in [-4i64, -1, 0, 1, 3, 8] {
                        let a = Poly::from_coeffs(vec![a0, a1, a2]);
                        let brute = c1.contains(&a) && c2.contains(&a);
                        let got = result.as_ref().is_some_and(|c| c.contains(&a));
                        prop_assert_eq!(brute, got, "element {}", a);
                    }
                }
            }
        }
    }
}
