use std::fmt;
use std::str::FromStr;

use super::Operator;
use crate::error::{Error, Result};
use crate::space::{preset_space, Exponent, Preset};

/// Named operators used as examples and counterexamples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `diag(1 - eps/p, 1, ..., 1)` on `l_p^n`.
    Lp { n: usize, p: f64, eps: f64 },
    /// `diag(1 - eps, 1, ..., 1)` on `l_1^n`.
    L1 { n: usize, eps: f64 },
    /// `(x, y, z) -> (eps x, x - y, y - z)` on `l_inf^3`.
    Linf3Local { eps: f64 },
    /// `(x, y) -> (x - y, x + y)` from the regular octagon to `l_inf^2`.
    OctagonToLinf2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Lp { n, p, eps } => write!(f, "lp({n},{p},{eps})"),
            Family::L1 { n, eps } => write!(f, "l1({n},{eps})"),
            Family::Linf3Local { eps } => write!(f, "linf3_local({eps})"),
            Family::OctagonToLinf2 => write!(f, "octagon_to_linf2"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "octagon_to_linf2" {
            return Ok(Family::OctagonToLinf2);
        }
        let bad = || Error::Parse(format!("unknown operator family '{s}'"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args: Vec<&str> = rest.strip_suffix(')').ok_or_else(bad)?.split(',').collect();
        let num = |a: &str| a.parse::<f64>().map_err(|_| bad());
        let int = |a: &str| a.parse::<usize>().map_err(|_| bad());
        match (name, args.as_slice()) {
            ("lp", [n, p, e]) => Ok(Family::Lp { n: int(n)?, p: num(p)?, eps: num(e)? }),
            ("l1", [n, e]) => Ok(Family::L1 { n: int(n)?, eps: num(e)? }),
            ("linf3_local", [e]) => Ok(Family::Linf3Local { eps: num(e)? }),
            _ => Err(bad()),
        }
    }
}

fn open_unit(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "epsilon",
            value: eps.to_string(),
        })
    }
}

fn diag_first(n: usize, first: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i != j { 0.0 } else if i == 0 { first } else { 1.0 }).collect())
        .collect()
}

pub fn counterexample_operator(family: &Family) -> Result<Operator> {
    match *family {
        Family::Lp { n, p, eps } => {
            open_unit(eps)?;
            if !(p > 1.0 && p.is_finite()) {
                return Err(Error::OutOfRange {
                    what: "p",
                    value: p.to_string(),
                });
            }
            let s = preset_space(&Preset::Lp(n, Exponent::Finite(p)))?;
            Operator::endo(&diag_first(n, 1.0 - eps / p), s)
        }
        Family::L1 { n, eps } => {
            open_unit(eps)?;
            let s = preset_space(&Preset::L1(n))?;
            Operator::endo(&diag_first(n, 1.0 - eps), s)
        }
        Family::Linf3Local { eps } => {
            open_unit(eps)?;
            let s = preset_space(&Preset::Linf(3))?;
            Operator::endo(&[vec![eps, 0.0, 0.0], vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0]], s)
        }
        Family::OctagonToLinf2 => Operator::new(
            &[vec![1.0, -1.0], vec![1.0, 1.0]],
            preset_space(&Preset::Regular2nGon(4))?,
            preset_space(&Preset::Linf(2))?,
        ),
    }
}
