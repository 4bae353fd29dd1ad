use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{orbit_bfs, GeneratorSet, Limits, OrbitReport};
use crate::canon::canonical_key;
use crate::enumerate::{count, enumerate_all};
use crate::error::{Error, Result};
use crate::par;
use crate::partition::{build_e, Partition};

fn guard(d: usize, allow_long: bool, what: &str) -> Result<()> {
    crate::partition::check_d(d)?;
    if d > 3 && !allow_long {
        return Err(Error::Guard(format!("{what} for d = {d}")));
    }
    Ok(())
}

/// Classes of cycle-free partitions under relabeling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeakClasses {
    pub d: usize,
    pub count: usize,
    /// First partition of each class in enumeration order.
    pub representatives: Vec<Partition>,
    pub sizes: Vec<u64>,
}

/// Splits all cycle-free `d`-partitions by canonical form. Guarded to
/// `d <= 3` unless `allow_long`.
pub fn weak_classes(d: usize, allow_long: bool) -> Result<WeakClasses> {
    guard(d, allow_long, "weak classes")?;
    let all = enumerate_all(d, None)?;
    let keys = par::map(&all, canonical_key);
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    for (p, key) in all.iter().zip(keys) {
        let slot = *index.entry(key).or_insert_with(|| {
            representatives.push(p.clone());
            sizes.push(0);
            sizes.len() - 1
        });
        sizes[slot] += 1;
    }
    Ok(WeakClasses {
        d,
        count: representatives.len(),
        representatives,
        sizes,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transitivity {
    pub size: u64,
    pub total: u64,
    pub transitive: bool,
    pub report: OrbitReport,
}

/// Compares the involution orbit of `E_d` with the number of cycle-free
/// partitions. Guarded to `d <= 3` unless `allow_long`.
pub fn verify_transitive(d: usize, allow_long: bool) -> Result<Transitivity> {
    guard(d, allow_long, "transitivity check")?;
    let report = orbit_bfs(&build_e(d), GeneratorSet::InvolutionsOnly, &Limits::default())?;
    let total = count(d, None)?;
    Ok(Transitivity {
        size: report.size,
        total,
        transitive: report.complete && report.size == total,
        report,
    })
}
