//! Ordinals below `ω^4` written as polynomials in `ω` with natural
//! coefficients.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// `ω³·c[3] + ω²·c[2] + ω·c[1] + c[0]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrdinalExpr {
    coeffs: [u64; 4],
}

impl OrdinalExpr {
    pub const ZERO: OrdinalExpr = OrdinalExpr { coeffs: [0; 4] };

    /// Coefficients from the highest degree down: `(c3, c2, c1, c0)`.
    pub fn new(c3: u64, c2: u64, c1: u64, c0: u64) -> Self {
        OrdinalExpr { coeffs: [c0, c1, c2, c3] }
    }

    pub fn finite(n: u64) -> Self {
        OrdinalExpr::new(0, 0, 0, n)
    }

    pub fn omega() -> Self {
        OrdinalExpr::new(0, 0, 1, 0)
    }

    /// `ω^k` for `k ≤ 3`.
    pub fn omega_pow(k: usize) -> Result<Self> {
        if k > 3 {
            return Err(Error::DegreeOverflow);
        }
        let mut coeffs = [0; 4];
        coeffs[k] = 1;
        Ok(OrdinalExpr { coeffs })
    }

    /// Coefficient of `ω^k`.
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs[k]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Natural (Hessenberg) sum: coefficient-wise addition.
    pub fn add(&self, other: &OrdinalExpr) -> OrdinalExpr {
        let mut coeffs = [0; 4];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs[k] + other.coeffs[k];
        }
        OrdinalExpr { coeffs }
    }

    /// Natural (Hessenberg) product: polynomial multiplication in `ω`.
    pub fn hessenberg(&self, other: &OrdinalExpr) -> Result<OrdinalExpr> {
        let mut coeffs = [0u64; 4];
        for i in 0..4 {
            for j in 0..4 {
                let prod = self.coeffs[i] * other.coeffs[j];
                if prod == 0 {
                    continue;
                }
                if i + j > 3 {
                    return Err(Error::DegreeOverflow);
                }
                coeffs[i + j] += prod;
            }
        }
        Ok(OrdinalExpr { coeffs })
    }
}

impl Ord for OrdinalExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl PartialOrd for OrdinalExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for k in (0..4).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            let base = match k {
                0 => None,
                1 => Some(String::from("w")),
                _ => Some(alloc::format!("w^{k}")),
            };
            terms.push(match (base, c) {
                (None, c) => c.to_string(),
                (Some(b), 1) => b,
                (Some(b), c) => alloc::format!("{b}*{c}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl FromStr for OrdinalExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |offset: usize| Error::Syntax { offset, message: "malformed ordinal expression".into() };
        let mut coeffs = [0u64; 4];
        let mut offset = 0;
        for term in s.split('+') {
            let t = term.trim();
            let (deg, coeff) = if let Some(rest) = t.strip_prefix('w') {
                let (deg, rest) = match rest.strip_prefix('^') {
                    Some(r) => {
                        let d = r.chars().next().and_then(|c| c.to_digit(10)).ok_or(bad(offset))? as usize;
                        (d, &r[1..])
                    }
                    None => (1, rest),
                };
                let coeff = match rest.strip_prefix('*') {
                    Some(n) => n.parse::<u64>().map_err(|_| bad(offset))?,
                    None if rest.is_empty() => 1,
                    None => return Err(bad(offset)),
                };
                (deg, coeff)
            } else {
                (0, t.parse::<u64>().map_err(|_| bad(offset))?)
            };
            if deg > 3 {
                return Err(Error::DegreeOverflow);
            }
            coeffs[deg] += coeff;
            offset += term.len() + 1;
        }
        Ok(OrdinalExpr { coeffs })
    }
}
