use super::{Letter, StandardWord, Tower};
use crate::zt_poly::Poly;

/// Whether `|b| >= |g|` with matching signs, i.e. `u^b` swallows `u^g`.
fn absorbs(b: &Poly, g: &Poly) -> bool {
    b.signum() == g.signum() && b.abs() >= g.abs()
}

/// Position of the first substitution hazard, if any.
///
/// Around every power letter `v^δ` the word must not continue with `π(v)`
/// or `π(v)^-1`, nor with a prefix of either that ends by a power `u^β`
/// swallowing the matching `u^γ` of `π(v)^±1`; the mirror conditions apply
/// to the left.
pub fn find_hazard(w: &StandardWord, tower: &Tower) -> Option<usize> {
    let ls = w.letters();
    if !w.is_reduced() {
        return Some(0);
    }
    for (i, l) in ls.iter().enumerate() {
        let Letter::Power { root: v, exp } = l else {
            continue;
        };
        if !exp.is_nonstandard() {
            return Some(i);
        }
        let pv = tower.root_word(*v);
        for q in [pv.clone(), pv.inverse()] {
            let q = q.letters();
            let right = &ls[i + 1..];
            let left = &ls[..i];
            if right.starts_with(q) || left.ends_with(q) {
                return Some(i);
            }
            for (j, ql) in q.iter().enumerate() {
                let Letter::Power { root: u, exp: g } = ql else {
                    continue;
                };
                // v^δ q[..j] u^β
                if right.len() > j && right[..j] == q[..j] {
                    if let Letter::Power { root, exp: b } = &right[j] {
                        if root == u && absorbs(b, g) {
                            return Some(i);
                        }
                    }
                }
                // u^β q[j+1..] v^δ
                let tail = &q[j + 1..];
                if left.len() > tail.len() && left.ends_with(tail) {
                    if let Letter::Power { root, exp: b } = &left[left.len() - tail.len() - 1] {
                        if root == u && absorbs(b, g) {
                            return Some(i);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Reduced, every exponent nonstandard, and no alignment of `π(v)^±1`
/// against a `v`-power boundary.
pub fn validate_standard(w: &StandardWord, tower: &Tower) -> bool {
    find_hazard(w, tower).is_none()
}
