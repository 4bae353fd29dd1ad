use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involution::{involution, Triple};
use crate::partition::Partition;
use crate::symmetry::{act, SymmetryElement};
use crate::tree::{classify_tree, TreeCertificate};

/// One move of a weak-equivalence chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    #[serde(rename = "inv")]
    Inv(Triple),
    #[serde(rename = "sym")]
    Sym(SymmetryElement),
}

/// An action and the certificate of the tracked class after it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    #[serde(flatten)]
    pub action: Action,
    pub cert: TreeCertificate,
}

/// A replayable chain of involutions and relabelings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub start: Partition,
    /// The tracked color class (1-based).
    pub class: u8,
    pub steps: Vec<Step>,
    #[serde(rename = "final")]
    pub final_partition: Partition,
}

pub(crate) fn class_cert(p: &Partition, class: u8) -> Result<TreeCertificate> {
    classify_tree(&p.class_edges(class), p.n())
}

fn apply_action(p: &Partition, a: &Action) -> Result<Partition> {
    match a {
        Action::Inv(t) => involution(p, *t),
        Action::Sym(g) => act(p, g),
    }
}

impl ReductionTrace {
    pub fn new(start: &Partition, class: u8) -> Self {
        ReductionTrace {
            start: start.clone(),
            class,
            steps: Vec::new(),
            final_partition: start.clone(),
        }
    }

    /// Applies `action` to the current final partition and records it.
    pub fn push(&mut self, action: Action) -> Result<&Partition> {
        let next = apply_action(&self.final_partition, &action)?;
        if !next.is_cycle_free() {
            return Err(Error::invariant(format!("step {action:?} left a cycle")));
        }
        let cert = class_cert(&next, self.class)?;
        self.steps.push(Step { action, cert });
        self.final_partition = next;
        Ok(&self.final_partition)
    }

    pub fn push_inv(&mut self, t: Triple) -> Result<&Partition> {
        self.push(Action::Inv(t))
    }

    /// Records a relabeling unless it is the identity.
    pub fn push_sym(&mut self, g: SymmetryElement) -> Result<&Partition> {
        if g.is_identity() {
            return Ok(&self.final_partition);
        }
        self.push(Action::Sym(g))
    }

    pub fn extend(&mut self, other: ReductionTrace) -> Result<()> {
        if other.start != self.final_partition || other.class != self.class {
            return Err(Error::invariant("traces do not chain"));
        }
        self.steps.extend(other.steps);
        self.final_partition = other.final_partition;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn involution_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.action, Action::Inv(_))).count()
    }

    /// Re-applies every step to `start`, checking cycle-freeness, the recorded
    /// certificates and the final partition.
    pub fn replay(&self) -> Result<Partition> {
        let mut cur = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            cur = apply_action(&cur, &step.action)?;
            if !cur.is_cycle_free() {
                return Err(Error::invariant(format!("replay step {i} has a cycle")));
            }
            if class_cert(&cur, self.class)? != step.cert {
                return Err(Error::invariant(format!("replay step {i} certificate mismatch")));
            }
        }
        if cur != self.final_partition {
            return Err(Error::invariant("replay does not reach the recorded final partition"));
        }
        Ok(cur)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
