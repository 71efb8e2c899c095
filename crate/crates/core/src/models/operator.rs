//! Initial operators described by short strings.
//!
//! Grammar: `chi:i[,j,...]` for a product of Majoranas, `n:i` for the spin-up
//! projector and `sx:i` for the Pauli x operator at a chain site. Indices
//! are 1-based; `mid` stands for site `floor(L/2)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::east::{site_mask, MAX_EAST_SITES};
use super::majorana::{check_majorana_count, majorana_product};
use crate::algebra::{normalize, OperatorState};
use crate::error::{KrylovError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    Index(usize),
    Mid,
}

impl Site {
    pub fn resolve(self, l: usize) -> usize {
        match self {
            Site::Index(i) => i,
            Site::Mid => l / 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorSpec {
    Majorana(Vec<usize>),
    Number(Site),
    SigmaX(Site),
}

/// The model an operator spec is resolved against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorContext {
    Syk { n: usize },
    East { l: usize },
}

fn spec_error(spec: &str, reason: impl Into<String>) -> KrylovError {
    KrylovError::InvalidOperatorSpec { spec: spec.to_string(), reason: reason.into() }
}

fn parse_site(spec: &str, s: &str) -> Result<Site> {
    if s == "mid" {
        return Ok(Site::Mid);
    }
    let i: usize = s.trim().parse().map_err(|_| spec_error(spec, format!("bad site '{s}'")))?;
    if i == 0 {
        return Err(spec_error(spec, "sites are numbered from 1"));
    }
    Ok(Site::Index(i))
}

impl FromStr for OperatorSpec {
    type Err = KrylovError;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, args) = spec
            .split_once(':')
            .ok_or_else(|| spec_error(spec, "expected '<kind>:<indices>'"))?;
        match kind.trim() {
            "chi" => {
                let mut idx = Vec::new();
                for part in args.split(',') {
                    let i: usize = part
                        .trim()
                        .parse()
                        .map_err(|_| spec_error(spec, format!("bad Majorana index '{part}'")))?;
                    if i == 0 {
                        return Err(spec_error(spec, "Majorana indices start at 1"));
                    }
                    if idx.contains(&i) {
                        return Err(spec_error(spec, format!("repeated Majorana index {i}")));
                    }
                    idx.push(i);
                }
                Ok(OperatorSpec::Majorana(idx))
            }
            "n" => Ok(OperatorSpec::Number(parse_site(spec, args)?)),
            "sx" => Ok(OperatorSpec::SigmaX(parse_site(spec, args)?)),
            other => Err(spec_error(spec, format!("unknown operator kind '{other}'"))),
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Index(i) => write!(f, "{i}"),
            Site::Mid => f.write_str("mid"),
        }
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSpec::Majorana(idx) => {
                let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                write!(f, "chi:{}", parts.join(","))
            }
            OperatorSpec::Number(s) => write!(f, "n:{s}"),
            OperatorSpec::SigmaX(s) => write!(f, "sx:{s}"),
        }
    }
}

/// Builds the normalized, Hermitian operator for `spec`. A product of `k`
/// Majoranas is multiplied by `i^{k(k-1)/2}`, which makes it Hermitian.
pub fn build_operator(spec: &OperatorSpec, ctx: OperatorContext) -> Result<OperatorState> {
    let text = spec.to_string();
    let raw = match (spec, ctx) {
        (OperatorSpec::Majorana(idx), OperatorContext::Syk { n }) => {
            check_majorana_count(n)?;
            if idx.is_empty() {
                return Err(spec_error(&text, "empty Majorana product"));
            }
            if let Some(&i) = idx.iter().find(|&&i| i > n) {
                return Err(spec_error(&text, format!("index {i} exceeds N = {n}")));
            }
            let k = idx.len();
            let phase = match (k * (k - 1) / 2) % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            majorana_product(n, idx)?.scaled(phase).to_dense()
        }
        (OperatorSpec::Number(site), OperatorContext::East { l }) => {
            let i = check_site(&text, *site, l)?;
            let mask = site_mask(l, i);
            DMatrix::from_fn(1 << l, 1 << l, |r, c| {
                if r == c && r & mask != 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        (OperatorSpec::SigmaX(site), OperatorContext::East { l }) => {
            let i = check_site(&text, *site, l)?;
            let mask = site_mask(l, i);
            DMatrix::from_fn(1 << l, 1 << l, |r, c| {
                if r == c ^ mask {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        (_, OperatorContext::Syk { .. }) => {
            return Err(spec_error(&text, "SYK operators are Majorana products 'chi:...'"));
        }
        (_, OperatorContext::East { .. }) => {
            return Err(spec_error(&text, "East operators are 'n:<site>' or 'sx:<site>'"));
        }
    };
    let op = OperatorState::new(raw)?;
    if !op.is_hermitian() {
        return Err(spec_error(&text, "operator is not Hermitian"));
    }
    normalize(&op).map_err(|e| spec_error(&text, e.to_string()))
}

fn check_site(spec: &str, site: Site, l: usize) -> Result<usize> {
    if !(2..=MAX_EAST_SITES).contains(&l) {
        return Err(spec_error(spec, format!("chain length {l} out of range")));
    }
    let i = site.resolve(l);
    if i == 0 || i > l {
        return Err(spec_error(spec, format!("site {i} outside 1..={l}")));
    }
    Ok(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::inner_product;
    use crate::models::majorana::build_majoranas;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["chi:1", "chi:1,2,3", "n:6", "sx:mid", "n:mid"] {
            let spec: OperatorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        for bad in ["chi", "chi:0", "chi:1,1", "n:x", "z:3", "sx:0"] {
            assert!(bad.parse::<OperatorSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn majorana_pair_gets_factor_i() {
        let op = build_operator(&"chi:1,2".parse().unwrap(), OperatorContext::Syk { n: 4 }).unwrap();
        let chi = build_majoranas(4).unwrap();
        let expect = (chi[0].matrix() * chi[1].matrix()) * Complex64::new(0.0, 1.0);
        let expect = normalize(&OperatorState::new(expect).unwrap()).unwrap();
        assert!(op.max_abs_diff(&expect) < 1e-15);
        assert!(op.is_hermitian());
        let triple = build_operator(&"chi:1,2,3".parse().unwrap(), OperatorContext::Syk { n: 4 }).unwrap();
        assert!(triple.is_hermitian());
        assert!((inner_product(&triple, &triple).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn number_operator_in_the_middle() {
        let ctx = OperatorContext::East { l: 13 };
        assert_eq!(Site::Mid.resolve(13), 6);
        let spec: OperatorSpec = "n:mid".parse().unwrap();
        // build on a small chain to keep the test light, same resolution rule
        let op = build_operator(&spec, OperatorContext::East { l: 5 }).unwrap();
        let direct = build_operator(&"n:2".parse().unwrap(), OperatorContext::East { l: 5 }).unwrap();
        assert_eq!(op, direct);
        // sqrt(2) n: entries sqrt 2 on half the diagonal
        let diag: Vec<f64> = (0..32).map(|k| op.matrix()[(k, k)].re).collect();
        assert_eq!(diag.iter().filter(|&&d| (d - 2f64.sqrt()).abs() < 1e-14).count(), 16);
        assert!(matches!(
            build_operator(&"n:14".parse().unwrap(), ctx),
            Err(KrylovError::InvalidOperatorSpec { .. })
        ));
    }

    #[test]
    fn sigma_x_is_already_normalized() {
        let op = build_operator(&"sx:3".parse().unwrap(), OperatorContext::East { l: 4 }).unwrap();
        let mask = 1 << (4 - 3);
        for c in 0..16 {
            assert_eq!(op.matrix()[(c ^ mask, c)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn wrong_model_is_rejected() {
        assert!(build_operator(&"chi:1".parse().unwrap(), OperatorContext::East { l: 4 }).is_err());
        assert!(build_operator(&"n:1".parse().unwrap(), OperatorContext::Syk { n: 4 }).is_err());
        assert!(build_operator(&"chi:5".parse().unwrap(), OperatorContext::Syk { n: 4 }).is_err());
    }
}
