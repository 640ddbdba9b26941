use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::ZtError;

/// An element of the additive group Z[t], kept as a dense coefficient
/// vector indexed by degree. Trailing zero coefficients are never stored, so
/// the zero polynomial is the empty vector and derived equality is exact.
///
/// Arithmetic is checked; coefficient overflow aborts with a panic.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// Builds a polynomial from coefficients listed by increasing degree.
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> i64 {
        self.coeffs.get(degree).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of coefficient slots needed to hold this polynomial.
    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn leading_coeff(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Sign under the lexicographic order: -1, 0 or 1.
    pub fn signum(&self) -> i64 {
        self.leading_coeff().signum()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// `|a| >> 0`: the polynomial is not an integer.
    pub fn is_nonstandard(&self) -> bool {
        self.coeffs.len() >= 2
    }

    /// The integer value if the polynomial has degree at most zero.
    pub fn as_integer(&self) -> Option<i64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn abs(&self) -> Poly {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, k: i64) -> Poly {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| c.checked_mul(k).expect("Z[t] coefficient overflow"))
                .collect(),
        )
    }

    /// Coefficient vector of length `width`, highest degree first.
    pub(crate) fn to_row(&self, width: usize) -> Vec<i64> {
        debug_assert!(self.coeffs.len() <= width);
        (0..width).rev().map(|d| self.coeff(d)).collect()
    }

    pub(crate) fn from_row(row: &[i64]) -> Poly {
        Self::from_coeffs(row.iter().rev().copied().collect())
    }

    /// Fails when the degree exceeds `bound`.
    pub fn check_degree(&self, bound: usize) -> Result<(), ZtError> {
        match self.degree() {
            Some(d) if d > bound => Err(ZtError::DegreeOverflow {
                poly: self.to_string(),
                bound,
            }),
            _ => Ok(()),
        }
    }
}

fn zip_with(a: &Poly, b: &Poly, f: impl Fn(i64, i64) -> Option<i64>) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::from_coeffs(
        (0..n)
            .map(|d| f(a.coeff(d), b.coeff(d)).expect("Z[t] coefficient overflow"))
            .collect(),
    )
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        zip_with(self, rhs, i64::checked_add)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        zip_with(self, rhs, i64::checked_sub)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        *self = &*self - rhs;
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

/// Lexicographic order: the highest-degree coefficient where the two
/// polynomials differ decides.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.coeffs.len().max(other.coeffs.len());
        for d in (0..n).rev() {
            match self.coeff(d).cmp(&other.coeff(d)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn poly_cmp(a: &Poly, b: &Poly) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for d in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[d];
            if c == 0 {
                continue;
            }
            if c < 0 {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let m = c.unsigned_abs();
            match d {
                0 => write!(f, "{m}")?,
                _ => {
                    if m != 1 {
                        write!(f, "{m}")?;
                    }
                    f.write_str("t")?;
                    if d > 1 {
                        write!(f, "^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = ZtError;

    /// Grammar: signed terms `c`, `ct`, `ct^k` joined by `+`/`-`, no
    /// whitespace. The coefficient may be omitted before `t`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let err = |pos: usize, msg: &str| ZtError::PolySyntax {
            text: s.to_string(),
            pos,
            msg: msg.to_string(),
        };
        if bytes.is_empty() {
            return Err(err(0, "empty polynomial"));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut i = 0;
        let mut first = true;
        while i < bytes.len() {
            let mut sign = 1i64;
            match bytes[i] {
                b'+' if !first => i += 1,
                b'-' => {
                    sign = -1;
                    i += 1;
                }
                _ if first => {}
                _ => return Err(err(i, "expected '+' or '-'")),
            }
            first = false;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &s[start..i];
            let has_t = i < bytes.len() && bytes[i] == b't';
            if digits.is_empty() && !has_t {
                return Err(err(i, "expected a coefficient or 't'"));
            }
            let magnitude: i64 = if digits.is_empty() {
                1
            } else {
                digits
                    .parse()
                    .map_err(|_| err(start, "coefficient out of range"))?
            };
            let mut degree = 0usize;
            if has_t {
                i += 1;
                degree = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let ds = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ds == i {
                        return Err(err(i, "expected an exponent after '^'"));
                    }
                    degree = s[ds..i]
                        .parse()
                        .map_err(|_| err(ds, "exponent out of range"))?;
                    if degree > 64 {
                        return Err(err(ds, "exponent out of range"));
                    }
                }
            }
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, 0);
            }
            coeffs[degree] = coeffs[degree]
                .checked_add(sign * magnitude)
                .ok_or_else(|| err(start, "coefficient out of range"))?;
        }
        Ok(Poly::from_coeffs(coeffs))
    }
}
