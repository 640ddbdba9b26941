use std::cmp::Ordering;
use std::fmt;

use super::{Coset, Lattice, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Rel {
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Rel::Lt => ord == Ordering::Less,
            Rel::Le => ord != Ordering::Greater,
            Rel::Gt => ord == Ordering::Greater,
            Rel::Ge => ord != Ordering::Less,
            Rel::Eq => ord == Ordering::Equal,
            Rel::Ne => ord != Ordering::Equal,
        }
    }

    pub fn negate(self) -> Rel {
        match self {
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Any,
}

/// Restriction on the degree of members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeKind {
    Any,
    /// Degree at least one (`|a| >> 0`).
    Nonstandard,
    /// Integers only.
    Standard,
}

/// A conjunction of lexicographic constraints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub sign: Sign,
    pub kind: DegreeKind,
    pub constraints: Vec<(Rel, Poly)>,
}

impl Region {
    pub fn everything() -> Self {
        Region {
            sign: Sign::Any,
            kind: DegreeKind::Any,
            constraints: Vec::new(),
        }
    }

    pub fn new(sign: Sign, kind: DegreeKind, constraints: Vec<(Rel, Poly)>) -> Self {
        Region {
            sign,
            kind,
            constraints,
        }
    }

    pub fn with(mut self, rel: Rel, threshold: Poly) -> Self {
        self.constraints.push((rel, threshold));
        self
    }

    pub fn contains(&self, a: &Poly) -> bool {
        let sign_ok = match self.sign {
            Sign::Positive => a.is_positive(),
            Sign::Negative => a.is_negative(),
            Sign::Any => true,
        };
        let kind_ok = match self.kind {
            DegreeKind::Any => true,
            DegreeKind::Nonstandard => a.is_nonstandard(),
            DegreeKind::Standard => !a.is_nonstandard(),
        };
        sign_ok
            && kind_ok
            && self
                .constraints
                .iter()
                .all(|(rel, th)| rel.holds(a.cmp(th)))
    }

    /// Conjunction of two regions, or `None` if their degree kinds clash.
    pub fn and(&self, other: &Region) -> Option<Region> {
        let kind = match (self.kind, other.kind) {
            (DegreeKind::Any, k) | (k, DegreeKind::Any) => k,
            (a, b) if a == b => a,
            _ => return None,
        };
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        // a second sign becomes an explicit constraint
        let sign = match (self.sign, other.sign) {
            (Sign::Any, s) | (s, Sign::Any) => s,
            (a, b) => {
                constraints.push(sign_constraint(b));
                a
            }
        };
        Some(Region {
            sign,
            kind,
            constraints,
        })
    }

    /// The complement as a union of single-atom regions.
    pub fn negation(&self) -> Vec<Region> {
        let mut out = Vec::new();
        match self.sign {
            Sign::Any => {}
            s => out.push(Region::everything().with(sign_constraint(s).0.negate(), Poly::zero())),
        }
        match self.kind {
            DegreeKind::Any => {}
            DegreeKind::Nonstandard => {
                out.push(Region::new(Sign::Any, DegreeKind::Standard, vec![]))
            }
            DegreeKind::Standard => {
                out.push(Region::new(Sign::Any, DegreeKind::Nonstandard, vec![]))
            }
        }
        for (rel, th) in &self.constraints {
            out.push(Region::everything().with(rel.negate(), th.clone()));
        }
        out
    }

    fn atoms(&self) -> Vec<(Rel, Poly)> {
        let mut atoms = self.constraints.clone();
        if self.sign != Sign::Any {
            atoms.push(sign_constraint(self.sign));
        }
        atoms
    }
}

fn sign_constraint(sign: Sign) -> (Rel, Poly) {
    match sign {
        Sign::Positive => (Rel::Gt, Poly::zero()),
        Sign::Negative => (Rel::Lt, Poly::zero()),
        Sign::Any => (Rel::Ne, Poly::zero()),
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.kind {
            DegreeKind::Nonstandard => parts.push(">>0".into()),
            DegreeKind::Standard => parts.push("int".into()),
            DegreeKind::Any => {}
        }
        match self.sign {
            Sign::Positive => parts.push(">0".into()),
            Sign::Negative => parts.push("<0".into()),
            Sign::Any => {}
        }
        for (rel, th) in &self.constraints {
            parts.push(format!("{}{}", rel.symbol(), th));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region{self}")
    }
}

pub fn region_member(r: &Region, a: &Poly) -> bool {
    r.contains(a)
}

/// An element of `c` lying in `r`, if any.
pub fn coset_meets_region(c: &Coset, r: &Region) -> Option<Poly> {
    search(c, r, None)
}

/// Whether every element of `a.0 ∩ a.1` lies in `b.0 ∩ b.1`.
pub fn coset_region_subset(a: (&Coset, &Region), b: (&Coset, &Region)) -> bool {
    let (c1, r1) = a;
    let (c2, r2) = b;
    if coset_meets_region(c1, r1).is_none() {
        return true;
    }
    if search(c1, r1, Some(c2)).is_some() {
        return false;
    }
    r2.negation().iter().all(|neg| match r1.and(neg) {
        None => true,
        Some(r) => search(c1, &r, None).is_none(),
    })
}

/// Bounded brute force over coefficient vectors in `[-bound, bound]` up to
/// `degree`.
pub fn brute_force_meets(c: &Coset, r: &Region, bound: i64, degree: usize) -> Option<Poly> {
    let width = degree + 1;
    let mut coeffs = vec![-bound; width];
    loop {
        let a = Poly::from_coeffs(coeffs.clone());
        if c.contains(&a) && r.contains(&a) {
            return Some(a);
        }
        let mut i = 0;
        loop {
            if i == width {
                return None;
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// Attainable values of one coefficient given the choices above it.
#[derive(Clone, Copy)]
enum Slot {
    Fixed(i64),
    Progression { offset: i64, step: i64 },
}

impl Slot {
    fn admits(self, v: i64) -> bool {
        match self {
            Slot::Fixed(c) => c == v,
            Slot::Progression { offset, step } => (v - offset).rem_euclid(step) == 0,
        }
    }

    /// Smallest admissible value strictly above `lo` and, if found, whether a
    /// second one also fits below `hi`.
    fn pick(self, lo: Option<i64>, hi: Option<i64>) -> Option<(i64, Option<i64>)> {
        let inside = |v: i64| lo.is_none_or(|l| v > l) && hi.is_none_or(|h| v < h);
        match self {
            Slot::Fixed(c) => inside(c).then_some((c, None)),
            Slot::Progression { offset, step } => {
                let v = match (lo, hi) {
                    (Some(l), _) => l + 1 + (offset - (l + 1)).rem_euclid(step),
                    (None, Some(h)) => h - 1 - ((h - 1) - offset).rem_euclid(step),
                    (None, None) => offset.rem_euclid(step),
                };
                if !inside(v) {
                    return None;
                }
                let second = if inside(v + step) {
                    Some(v + step)
                } else if inside(v - step) {
                    Some(v - step)
                } else {
                    None
                };
                Some((v, second))
            }
        }
    }
}

struct Search<'a> {
    lattice: &'a Lattice,
    atoms: Vec<(Rel, Poly)>,
    kind: DegreeKind,
    avoid: Option<&'a Coset>,
}

/// Exact search for a member of `c ∩ r` outside `avoid`.
///
/// Coefficients are fixed from the highest degree down. At each degree the
/// only values that matter are the pending thresholds themselves and one
/// admissible value inside each gap between them; a gap value settles every
/// pending constraint at once, after which the remaining freedom is decided
/// by lattice containment alone.
pub(crate) fn search(c: &Coset, r: &Region, avoid: Option<&Coset>) -> Option<Poly> {
    let atoms = r.atoms();
    let mut width = c.rep().width().max(c.lattice().width());
    for (_, th) in &atoms {
        width = width.max(th.width());
    }
    if let Some(a) = avoid {
        width = width.max(a.rep().width()).max(a.lattice().width());
    }
    let width = width.max(1);
    let s = Search {
        lattice: c.lattice(),
        atoms,
        kind: r.kind,
        avoid,
    };
    let pending: Vec<usize> = (0..s.atoms.len()).collect();
    let nonstandard_pending = r.kind == DegreeKind::Nonstandard;
    let found = s.descend(
        width as isize - 1,
        c.rep().clone(),
        pending,
        nonstandard_pending,
    );
    if let Some(w) = &found {
        assert!(
            c.contains(w) && r.contains(w) && avoid.is_none_or(|a| !a.contains(w)),
            "witness {w} fails its own certificate"
        );
    }
    found
}

impl Search<'_> {
    fn descend(
        &self,
        degree: isize,
        current: Poly,
        pending: Vec<usize>,
        nonstandard_pending: bool,
    ) -> Option<Poly> {
        if degree < 0 {
            let settled = pending
                .iter()
                .all(|&i| matches!(self.atoms[i].0, Rel::Eq | Rel::Le | Rel::Ge));
            if !settled || nonstandard_pending {
                return None;
            }
            return self
                .avoid
                .is_none_or(|a| !a.contains(&current))
                .then_some(current);
        }
        let d = degree as usize;
        let pivot = self.lattice.pivot_at(d);
        let slot = match pivot {
            Some((_, b)) => Slot::Progression {
                offset: current.coeff(d),
                step: b.leading_coeff(),
            },
            None => Slot::Fixed(current.coeff(d)),
        };
        let assign = |v: i64| -> Poly {
            match pivot {
                Some((_, b)) => {
                    let k = (v - current.coeff(d)) / b.leading_coeff();
                    &current + &b.scale(k)
                }
                None => current.clone(),
            }
        };

        let mut thresholds: Vec<i64> = pending.iter().map(|&i| self.atoms[i].1.coeff(d)).collect();
        if nonstandard_pending && d >= 1 {
            thresholds.push(0);
        }
        if self.kind == DegreeKind::Standard && d >= 1 {
            if !slot.admits(0) {
                return None;
            }
            return self.branch_on(degree, 0, assign(0), &pending, nonstandard_pending);
        }
        thresholds.sort_unstable();
        thresholds.dedup();

        // values equal to a threshold keep the matching constraints open
        for &v in &thresholds {
            if slot.admits(v) {
                if let Some(w) = self.branch_on(degree, v, assign(v), &pending, nonstandard_pending)
                {
                    return Some(w);
                }
            }
        }
        // gap values settle everything pending
        let mut bounds: Vec<Option<i64>> = vec![None];
        bounds.extend(thresholds.iter().map(|&v| Some(v)));
        bounds.push(None);
        for gap in bounds.windows(2) {
            let Some((v, second)) = slot.pick(gap[0], gap[1]) else {
                continue;
            };
            let all_hold = pending
                .iter()
                .all(|&i| self.atoms[i].0.holds(v.cmp(&self.atoms[i].1.coeff(d))));
            if !all_hold || (nonstandard_pending && d == 0) {
                continue;
            }
            if let Some(w) = self.settle(d, assign(v), second.map(&assign)) {
                return Some(w);
            }
        }
        None
    }

    fn branch_on(
        &self,
        degree: isize,
        v: i64,
        next: Poly,
        pending: &[usize],
        nonstandard_pending: bool,
    ) -> Option<Poly> {
        let d = degree as usize;
        let mut still = Vec::new();
        for &i in pending {
            let (rel, th) = &self.atoms[i];
            match v.cmp(&th.coeff(d)) {
                Ordering::Equal => still.push(i),
                ord if rel.holds(ord) => {}
                _ => return None,
            }
        }
        let ns = nonstandard_pending && !(d >= 1 && v != 0);
        self.descend(degree - 1, next, still, ns)
    }

    /// All constraints are settled at degree `d`; `base` has every lower
    /// pivot coefficient left at its current value. Members of the coset
    /// agreeing with `base` above `d` differ from it by the sublattice of
    /// vectors led at degree `d` or below.
    fn settle(&self, d: usize, base: Poly, alternative: Option<Poly>) -> Option<Poly> {
        let Some(avoid) = self.avoid else {
            return Some(base);
        };
        if !avoid.contains(&base) {
            return Some(base);
        }
        for b in self.lattice.basis() {
            if b.degree().unwrap() < d && !avoid.lattice().contains(b) {
                return Some(&base + b);
            }
        }
        match alternative {
            Some(alt) if !avoid.contains(&alt) => Some(alt),
            _ => None,
        }
    }
}
