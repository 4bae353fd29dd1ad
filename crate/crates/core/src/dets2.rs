//! Exact evaluation of the signed expansion `det^{S^2}` over cycle-free
//! partitions.

use std::collections::BTreeMap;

use num::{BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::edge::EdgeTable;
use crate::enumerate::enumerate_all;
use crate::error::{Error, Result};
use crate::orbit::SignTable;
use crate::par;
use crate::partition::{check_d, Partition};

/// One length-`d` rational vector per edge of `K_{2d}`, indexed by `EdgeId`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeVectorFamily {
    d: usize,
    coords: Vec<Vec<BigRational>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    d: usize,
    vectors: BTreeMap<String, Vec<String>>,
}

fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p = p
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad numerator in {s:?}")))?;
            let q: num::BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::input(format!("zero denominator in {s:?}")));
            }
            BigRational::new(p, q)
        }
        None => BigRational::from_integer(s.parse().map_err(|_| Error::input(format!("bad rational {s:?}")))?),
    };
    Ok(parsed)
}

impl EdgeVectorFamily {
    /// `coords[e]` is the vector of edge `e`; every vector must have length `d`.
    pub fn new(d: usize, coords: Vec<Vec<BigRational>>) -> Result<Self> {
        check_d(d)?;
        let m = EdgeTable::get(d).len();
        if coords.len() != m {
            return Err(Error::input(format!("{} vectors given, {m} edges", coords.len())));
        }
        if let Some(v) = coords.iter().find(|v| v.len() != d) {
            return Err(Error::input(format!("vector of length {} for d = {d}", v.len())));
        }
        Ok(EdgeVectorFamily { d, coords })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vector(&self, i: u8, j: u8) -> &[BigRational] {
        &self.coords[EdgeTable::get(self.d).id(i, j).index()]
    }

    pub fn coords(&self) -> &[Vec<BigRational>] {
        &self.coords
    }

    /// Sets the vector of edge `(i, j)`.
    pub fn set(&mut self, i: u8, j: u8, v: Vec<BigRational>) -> Result<()> {
        if v.len() != self.d {
            return Err(Error::input(format!("vector of length {} for d = {}", v.len(), self.d)));
        }
        let e = crate::partition::checked_id(EdgeTable::get(self.d), i, j)?;
        self.coords[e.index()] = v;
        Ok(())
    }

    /// Multiplies the vector of edge `(i, j)` by `lambda`.
    pub fn scale(&mut self, i: u8, j: u8, lambda: &BigRational) {
        let e = EdgeTable::get(self.d).id(i, j).index();
        for x in &mut self.coords[e] {
            *x *= lambda;
        }
    }

    /// The partition whose indicator this is, if every vector is a standard
    /// basis vector.
    pub fn as_indicator(&self) -> Option<Partition> {
        let mut colors = Vec::with_capacity(self.coords.len());
        for v in &self.coords {
            let mut hit = None;
            for (k, x) in v.iter().enumerate() {
                if x.is_one() && hit.is_none() {
                    hit = Some(k as u8 + 1);
                } else if !x.is_zero() {
                    return None;
                }
            }
            colors.push(hit?);
        }
        Partition::new(self.d, &colors).ok()
    }

    pub fn to_json(&self) -> String {
        let table = EdgeTable::get(self.d);
        let vectors = table
            .pairs()
            .iter()
            .zip(&self.coords)
            .map(|(&(i, j), v)| (format!("{i},{j}"), v.iter().map(fmt_rational).collect()))
            .collect();
        serde_json::to_string(&FamilyJson { d: self.d, vectors }).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FamilyJson = serde_json::from_str(text)?;
        check_d(raw.d)?;
        let table = EdgeTable::get(raw.d);
        let mut coords: Vec<Option<Vec<BigRational>>> = vec![None; table.len()];
        for (key, v) in &raw.vectors {
            let (i, j) = key
                .split_once(',')
                .ok_or_else(|| Error::input(format!("edge key {key:?} is not \"i,j\"")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::input(format!("bad edge key {key:?}")))
            };
            let e = crate::partition::checked_id(table, parse(i)?, parse(j)?)?;
            if coords[e.index()].is_some() {
                return Err(Error::input(format!("edge {key:?} given twice")));
            }
            coords[e.index()] = Some(v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?);
        }
        let coords = coords
            .into_iter()
            .enumerate()
            .map(|(e, v)| {
                v.ok_or_else(|| {
                    let (i, j) = table.pairs()[e];
                    Error::input(format!("edge ({i},{j}) has no vector"))
                })
            })
            .collect::<Result<_>>()?;
        EdgeVectorFamily::new(raw.d, coords)
    }
}

/// The family sending each edge of color `k` to the `k`-th basis vector.
pub fn indicator(p: &Partition) -> EdgeVectorFamily {
    let d = p.d();
    let coords = p
        .colors()
        .iter()
        .map(|&c| {
            (1..=d as u8)
                .map(|k| {
                    if k == c {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    EdgeVectorFamily { d, coords }
}

fn term(family: &EdgeVectorFamily, table: &SignTable, p: &Partition) -> Result<BigRational> {
    let mut prod = BigRational::one();
    for (v, &c) in family.coords.iter().zip(p.colors().iter()) {
        let x = &v[c as usize - 1];
        if x.is_zero() {
            return Ok(BigRational::zero());
        }
        prod *= x;
    }
    Ok(if table.sign(p)? < 0 { -prod } else { prod })
}

/// Sums the signed monomials of `family` over `partitions`.
pub fn eval_terms(family: &EdgeVectorFamily, table: &SignTable, partitions: &[Partition]) -> Result<BigRational> {
    if table.d() != family.d {
        return Err(Error::input(format!(
            "sign table for d = {} used with a family for d = {}",
            table.d(),
            family.d
        )));
    }
    let chunks: Vec<&[Partition]> = partitions.chunks(256).collect();
    let partial = par::map(&chunks, |chunk| {
        let mut acc = BigRational::zero();
        for p in *chunk {
            acc += term(family, table, p)?;
        }
        Ok::<_, Error>(acc)
    });
    partial.into_iter().try_fold(BigRational::zero(), |a, b| Ok(a + b?))
}

/// Exact value of `det^{S^2}` on `family`. `d = 3` needs `allow_long`; larger
/// `d` is refused.
pub fn eval_dets2(family: &EdgeVectorFamily, table: &SignTable, allow_long: bool) -> Result<BigRational> {
    match family.d {
        1 | 2 => {}
        3 if allow_long => {}
        3 => return Err(Error::Guard("evaluation at d = 3 sums 66240 terms".into())),
        d => {
            return Err(Error::input(format!(
                "evaluation needs every sign at d = {d}; only d <= 3 is supported"
            )))
        }
    }
    eval_terms(family, table, &enumerate_all(family.d, None)?)
}
