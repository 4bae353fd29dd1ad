//! Search from a type-19 class 4 to a partition with a twin-star class.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::trace::{Action, ReductionTrace};
use crate::canon::canonical_form;
use crate::enumerate::{enumerate, sample_completion, FixedAssignment};
use crate::error::{Error, Result};
use crate::involution::{involve_raw, Triangle};
use crate::par;
use crate::partition::{ClassMasks, Partition};
use crate::symmetry::SymmetryElement;
use crate::tree::tree_type;

/// Default search budget in expanded states per instance.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Unresolved,
}

/// One line of the JSONL output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: u64,
    /// Run seed; `null` for exhaustive runs.
    pub seed: Option<u64>,
    pub budget: u64,
    pub start: Partition,
    pub outcome: Outcome,
    pub expanded: u64,
    /// Involutions in the witness.
    pub depth: Option<u32>,
    pub witness: Option<ReductionTrace>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwinStarReport {
    /// The fixed labeled type-19 tree used as class 4.
    pub representative: Vec<(u8, u8)>,
    pub seed: Option<u64>,
    pub budget: u64,
    pub instances: u64,
    pub successes: u64,
    pub unresolved: u64,
    pub max_expanded: u64,
    pub max_depth: u32,
}

/// The labeled type-19 tree every instance uses as class 4.
pub fn t19_representative() -> Vec<(u8, u8)> {
    tree_type(19).expect("type 19 exists").edges.clone()
}

fn t19_fixed() -> Result<FixedAssignment> {
    FixedAssignment::with_class(4, 4, &t19_representative())
}

/// The class (1-based) that is a twin-star, if any. On eight vertices the
/// twin-star is the only tree with degrees 4, 4, 1, 1, 1, 1, 1, 1.
pub(crate) fn twin_star_class(masks: &ClassMasks, d: usize) -> Option<u8> {
    let n = 2 * d;
    (0..d).find_map(|k| {
        let mut big = 0;
        for v in 0..n {
            match masks.degree(k, v) {
                1 => {}
                x if x as usize == d => big += 1,
                _ => return None,
            }
        }
        (big == 2).then_some(k as u8 + 1)
    })
}

struct Node {
    parent: u128,
    // triangle index into the parent, then the relabeling onto this node
    via: Option<(u16, SymmetryElement)>,
    partition: Partition,
}

/// Searches from `start` for a weakly equivalent partition with a twin-star
/// class: breadth-first over involutions, each new state collapsed to its
/// canonical form. `budget` bounds the number of expanded states.
pub fn search_twin_star(start: &Partition, budget: u64) -> Result<(Outcome, u64, Option<ReductionTrace>)> {
    let d = start.d();
    if !start.is_cycle_free() {
        return Err(Error::input("start is not cycle-free"));
    }
    if let Some(k) = twin_star_class(&ClassMasks::new(start), d) {
        return Ok((Outcome::Success, 0, Some(ReductionTrace::new(start, k))));
    }
    let triangles = Triangle::all(d);
    let root = canonical_form(start);
    let root_p = root.partition();
    let root_key = root_p.pack();
    let mut nodes: HashMap<u128, Node> = HashMap::new();
    nodes.insert(
        root_key,
        Node {
            parent: root_key,
            via: None,
            partition: root_p,
        },
    );
    let mut frontier = vec![root_key];
    let mut expanded = 0u64;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for key in frontier {
            if expanded >= budget {
                return Ok((Outcome::Unresolved, expanded, None));
            }
            expanded += 1;
            let p = nodes[&key].partition.clone();
            let masks = ClassMasks::new(&p);
            for (ti, tri) in triangles.iter().enumerate() {
                let new = involve_raw(p.raw(), &masks, tri)?;
                let mut raw: Box<[u8]> = p.raw().into();
                for s in 0..3 {
                    raw[tri.edges[s].index()] = new[s];
                }
                let q = Partition::from_raw(d, raw);
                let qm = ClassMasks::new(&q);
                if let Some(k) = twin_star_class(&qm, d) {
                    let trace = witness(start, &root.element, &nodes, key, ti as u16, &triangles, k)?;
                    return Ok((Outcome::Success, expanded, Some(trace)));
                }
                let form = canonical_form(&q);
                let cp = form.partition();
                let ck = cp.pack();
                nodes.entry(ck).or_insert_with(|| {
                    next.push(ck);
                    Node {
                        parent: key,
                        via: Some((ti as u16, form.element)),
                        partition: cp,
                    }
                });
            }
        }
        frontier = next;
    }
    Ok((Outcome::Unresolved, expanded, None))
}

fn witness(
    start: &Partition,
    g0: &SymmetryElement,
    nodes: &HashMap<u128, Node>,
    last: u128,
    last_triangle: u16,
    triangles: &[Triangle],
    class: u8,
) -> Result<ReductionTrace> {
    // walk back to the root
    let mut chain = Vec::new();
    let mut key = last;
    while let Some((t, g)) = &nodes[&key].via {
        chain.push((*t, g.clone()));
        key = nodes[&key].parent;
    }
    chain.reverse();
    // certificates refer to the class that ends as the twin-star
    let mut trace = ReductionTrace::new(start, class);
    trace.push_sym(g0.clone())?;
    for (t, g) in chain {
        trace.push(Action::Inv(triangles[t as usize].triple))?;
        trace.push_sym(g)?;
    }
    trace.push(Action::Inv(triangles[last_triangle as usize].triple))?;
    let masks = ClassMasks::new(&trace.final_partition);
    if twin_star_class(&masks, start.d()) != Some(class) {
        return Err(Error::invariant("witness does not end with a twin-star class"));
    }
    Ok(trace)
}

fn run_instance(index: u64, seed: Option<u64>, start: Partition, budget: u64) -> Result<InstanceRecord> {
    let (outcome, expanded, witness) = search_twin_star(&start, budget)?;
    Ok(InstanceRecord {
        index,
        seed,
        budget,
        start,
        outcome,
        expanded,
        depth: witness.as_ref().map(|w| w.involution_count() as u32),
        witness,
    })
}

fn summarize(records: &[InstanceRecord], seed: Option<u64>, budget: u64) -> TwinStarReport {
    let successes = records.iter().filter(|r| r.outcome == Outcome::Success).count() as u64;
    TwinStarReport {
        representative: t19_representative(),
        seed,
        budget,
        instances: records.len() as u64,
        successes,
        unresolved: records.len() as u64 - successes,
        max_expanded: records.iter().map(|r| r.expanded).max().unwrap_or(0),
        max_depth: records.iter().filter_map(|r| r.depth).max().unwrap_or(0),
    }
}

/// The random start for instance `index` of a run seeded with `seed`.
pub fn sample_instance(seed: u64, index: u64) -> Result<Partition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index));
    sample_completion(4, Some(&t19_fixed()?), &mut rng)?
        .ok_or_else(|| Error::invariant("the type-19 class has no cycle-free completion"))
}

/// Runs `count` seeded random instances in parallel; instance `i` samples its
/// start from `ChaCha8Rng::seed_from_u64(seed + i)`.
pub fn verify_twinstar_t19(count: u64, seed: u64, budget: u64) -> Result<(TwinStarReport, Vec<InstanceRecord>)> {
    let indices: Vec<u64> = (0..count).collect();
    let records: Vec<InstanceRecord> = par::map(&indices, |&i| {
        run_instance(i, Some(seed), sample_instance(seed, i)?, budget)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok((summarize(&records, Some(seed), budget), records))
}

/// Runs every cycle-free completion of the type-19 class, appending one JSONL
/// record per instance to `out`. Records already in `out` are skipped, so an
/// interrupted run resumes where it stopped. `progress` is called after each
/// batch with the number of finished instances.
pub fn verify_twinstar_exhaustive(
    budget: u64,
    out: &Path,
    batch: usize,
    mut progress: impl FnMut(u64),
) -> Result<TwinStarReport> {
    let done = match std::fs::File::open(out) {
        Ok(f) => std::io::BufReader::new(f).lines().count() as u64,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => 0,
        Err(e) => return Err(e.into()),
    };
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(out)?;
    let fixed = t19_fixed()?;
    let mut iter = enumerate(4, Some(&fixed))?.skip(done as usize);
    let mut index = done;
    loop {
        let chunk: Vec<(u64, Partition)> = iter
            .by_ref()
            .take(batch.max(1))
            .map(|p| {
                index += 1;
                (index - 1, p)
            })
            .collect();
        if chunk.is_empty() {
            break;
        }
        let records = par::map(&chunk, |(i, p)| run_instance(*i, None, p.clone(), budget));
        for r in records {
            serde_json::to_writer(&mut file, &r?)?;
            file.write_all(b"\n")?;
        }
        file.sync_data()?;
        progress(index);
    }
    // summary over the whole file, including earlier sessions
    let reader = std::io::BufReader::new(std::fs::File::open(out)?);
    let mut all = Vec::new();
    for line in reader.lines() {
        all.push(serde_json::from_str::<InstanceRecord>(&line?)?);
    }
    Ok(summarize(&all, None, budget))
}
