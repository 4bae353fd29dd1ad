use std::collections::HashMap;

use super::{check_bfs_d, Explorer, GeneratorSet, Limits, OrbitReport};
use crate::error::{Error, Result};
use crate::partition::{build_e, Partition};

/// BFS-depth parity from `E_d` over the involution orbit of `E_d`, with
/// `sign(E_d) = +1`.
#[derive(Clone, Debug)]
pub struct SignTable {
    d: usize,
    // packed colors -> 0 for +1, 1 for -1
    parity: HashMap<u128, u8>,
    report: OrbitReport,
}

impl SignTable {
    /// Explores the full orbit of `E_d`. Guarded to `d <= 3` unless
    /// `allow_long`.
    pub fn build(d: usize, allow_long: bool) -> Result<Self> {
        check_bfs_d(d)?;
        if d > 3 && !allow_long {
            return Err(Error::Guard(format!("the d = {d} orbit has no known size bound")));
        }
        let mut ex = Explorer::new(&build_e(d), GeneratorSet::InvolutionsOnly)?;
        let report = ex.run(&Limits::default(), None)?;
        Ok(SignTable {
            d,
            parity: std::mem::take(&mut ex.visited),
            report,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.parity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parity.is_empty()
    }

    /// False if some involution joins two states of equal parity, in which
    /// case no sign function exists.
    pub fn parity_consistent(&self) -> bool {
        self.report.parity_consistent == Some(true)
    }

    pub fn report(&self) -> &OrbitReport {
        &self.report
    }

    /// `+1` or `-1`.
    pub fn sign(&self, p: &Partition) -> Result<i8> {
        if p.d() != self.d {
            return Err(Error::input(format!(
                "sign table for d = {} queried with d = {}",
                self.d,
                p.d()
            )));
        }
        match self.parity.get(&p.pack()) {
            Some(0) => Ok(1),
            Some(_) => Ok(-1),
            None => Err(Error::NotFound("partition is outside the explored orbit".into())),
        }
    }

    /// Number of `+1` and `-1` states.
    pub fn balance(&self) -> (usize, usize) {
        let minus = self.parity.values().filter(|&&p| p == 1).count();
        (self.parity.len() - minus, minus)
    }
}
