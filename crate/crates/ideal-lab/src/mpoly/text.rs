//! Textual polynomial format: `3*x1^2*x2 - 5` with variables x1..xn and
//! integer or `a/b` rational coefficients. Printing emits terms in
//! descending graded-lex order and parsing accepts any term order, so
//! print-then-parse is the identity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

use crate::arith::{Domain, PrimeField, QQ, ZZ};
use crate::error::{Error, Result};

use super::{Monomial, SparsePoly};

/// Domains whose coefficients participate in the text format.
pub trait TextDomain: Domain {
    fn parse_coeff(&self, s: &str) -> Option<Self::Elem>;
    /// (is_negative, magnitude string) for sign-aware printing.
    fn coeff_parts(&self, c: &Self::Elem) -> (bool, String);
}

impl TextDomain for ZZ {
    fn parse_coeff(&self, s: &str) -> Option<BigInt> {
        BigInt::from_str(s).ok()
    }
    fn coeff_parts(&self, c: &BigInt) -> (bool, String) {
        if c < &BigInt::zero() {
            (true, (-c).to_string())
        } else {
            (false, c.to_string())
        }
    }
}

impl TextDomain for QQ {
    fn parse_coeff(&self, s: &str) -> Option<BigRational> {
        if let Some((a, b)) = s.split_once('/') {
            let num = BigInt::from_str(a.trim()).ok()?;
            let den = BigInt::from_str(b.trim()).ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        } else {
            Some(BigRational::from_integer(BigInt::from_str(s).ok()?))
        }
    }
    fn coeff_parts(&self, c: &BigRational) -> (bool, String) {
        let neg = c < &BigRational::zero();
        let a = if neg { -c } else { c.clone() };
        if a.is_integer() {
            (neg, a.numer().to_string())
        } else {
            (neg, format!("{}/{}", a.numer(), a.denom()))
        }
    }
}

impl TextDomain for PrimeField {
    fn parse_coeff(&self, s: &str) -> Option<u64> {
        let v = i64::from_str(s).ok()?;
        Some(self.elem(v))
    }
    fn coeff_parts(&self, c: &u64) -> (bool, String) {
        (false, c.to_string())
    }
}

pub fn format_poly<D: TextDomain>(domain: &D, f: &SparsePoly<D>) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in f.terms.iter().rev().enumerate() {
        let (neg, mag) = domain.coeff_parts(c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let vars: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| {
                if *e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        if vars.is_empty() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&vars.join("*"));
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&vars.join("*"));
        }
    }
    out
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, msg: msg.into() }
}

/// Parses a polynomial in `nvars` variables named x1..xn.
pub fn parse_poly<D: TextDomain>(domain: &D, nvars: usize, input: &str) -> Result<SparsePoly<D>> {
    let s: Vec<char> = input.chars().collect();
    let mut pos = 0usize;
    let mut poly = SparsePoly::zero(nvars);

    fn skip_ws(s: &[char], pos: &mut usize) {
        while *pos < s.len() && s[*pos].is_whitespace() {
            *pos += 1;
        }
    }

    skip_ws(&s, &mut pos);
    if pos == s.len() {
        return Err(perr("empty polynomial"));
    }

    while pos < s.len() {
        // sign
        let mut negative = false;
        skip_ws(&s, &mut pos);
        while pos < s.len() && (s[pos] == '+' || s[pos] == '-') {
            if s[pos] == '-' {
                negative = !negative;
            }
            pos += 1;
            skip_ws(&s, &mut pos);
        }
        if pos == s.len() {
            return Err(perr("dangling sign"));
        }
        // term: factors separated by '*'
        let mut coeff = domain.one();
        let mut mono = vec![0u16; nvars];
        loop {
            skip_ws(&s, &mut pos);
            if pos < s.len() && (s[pos] == 'x' || s[pos] == 'X') {
                pos += 1;
                let start = pos;
                while pos < s.len() && s[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(perr("variable index expected after 'x'"));
                }
                let idx: usize = s[start..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| perr("bad variable index"))?;
                if idx == 0 || idx > nvars {
                    return Err(perr(format!("variable x{idx} out of range (nvars = {nvars})")));
                }
                let mut exp = 1u32;
                skip_ws(&s, &mut pos);
                if pos < s.len() && s[pos] == '^' {
                    pos += 1;
                    skip_ws(&s, &mut pos);
                    let start = pos;
                    while pos < s.len() && s[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if start == pos {
                        return Err(perr("exponent expected after '^'"));
                    }
                    exp = s[start..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| perr("bad exponent"))?;
                }
                let new = mono[idx - 1] as u32 + exp;
                if new > u16::MAX as u32 {
                    return Err(perr("exponent overflow"));
                }
                mono[idx - 1] = new as u16;
            } else {
                // numeric coefficient (integer or a/b)
                let start = pos;
                while pos < s.len() && (s[pos].is_ascii_digit() || s[pos] == '/') {
                    pos += 1;
                }
                if start == pos {
                    return Err(perr(format!(
                        "unexpected character '{}'",
                        s.get(pos).copied().unwrap_or(' ')
                    )));
                }
                let token: String = s[start..pos].iter().collect();
                let c = domain
                    .parse_coeff(&token)
                    .ok_or_else(|| perr(format!("bad coefficient '{token}'")))?;
                coeff = domain.mul(&coeff, &c);
            }
            skip_ws(&s, &mut pos);
            if pos < s.len() && s[pos] == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        if negative {
            coeff = domain.neg(&coeff);
        }
        poly.add_term(domain, Monomial(mono), coeff);
        skip_ws(&s, &mut pos);
        if pos < s.len() && s[pos] != '+' && s[pos] != '-' {
            return Err(perr(format!("expected '+' or '-' at position {pos}")));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn parse_basic() {
        let zz = ZZ;
        let f = parse_poly(&zz, 2, "3*x1^2*x2 - 5").unwrap();
        assert_eq!(f, SparsePoly::from_int_terms(2, &[(&[2, 1], 3), (&[0, 0], -5)]));
        assert_eq!(format_poly(&zz, &f), "3*x1^2*x2 - 5");
        let z = parse_poly(&zz, 2, "0").unwrap();
        assert!(z.is_zero());
        assert_eq!(format_poly(&zz, &z), "0");
    }

    #[test]
    fn parse_rationals() {
        let qq = QQ;
        let f = parse_poly(&qq, 1, "1/2*x1 + 3").unwrap();
        let s = format_poly(&qq, &f);
        assert_eq!(s, "1/2*x1 + 3");
        let g = parse_poly(&qq, 1, &s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn parse_errors() {
        let zz = ZZ;
        assert!(parse_poly(&zz, 1, "").is_err());
        assert!(parse_poly(&zz, 1, "x2").is_err());
        assert!(parse_poly(&zz, 1, "3 +").is_err());
        assert!(parse_poly(&zz, 1, "x1 ^").is_err());
        assert!(parse_poly(&zz, 1, "3 & 4").is_err());
    }

    #[test]
    fn roundtrip_random() {
        let zz = ZZ;
        let mut rng = Rng::new(77);
        for _ in 0..500 {
            let nvars = 1 + rng.below(4) as usize;
            let mut f = SparsePoly::zero(nvars);
            for _ in 0..rng.below(8) {
                let m: Vec<u16> = (0..nvars).map(|_| rng.below(5) as u16).collect();
                f.add_term(
                    &zz,
                    Monomial(m),
                    BigInt::from(rng.range_inclusive(-1000, 1000)),
                );
            }
            let s = format_poly(&zz, &f);
            let g = parse_poly(&zz, nvars, &s).unwrap();
            assert_eq!(f, g, "roundtrip failed for '{s}'");
        }
    }

    #[test]
    fn accepts_unnormalized_input() {
        let zz = ZZ;
        let f = parse_poly(&zz, 2, " - x1*x1 + 2 * x1 ^ 2 - x2 ").unwrap();
        assert_eq!(f, SparsePoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 1], -1)]));
    }
}
