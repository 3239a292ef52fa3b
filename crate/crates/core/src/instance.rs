//! Set-system data model: cost-bearing elements, an ordered stream of sets,
//! monotone solution containers, and dualization.
//!
//! Sets are kept as sorted id arrays and intersected by merge so that every
//! iteration order in the pipeline is deterministic.

use crate::rational::{format_rat, parse_rat, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// One universe element: a dense id plus a non-negative cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: u32,
    pub cost: Rat,
}

#[derive(Debug, thiserror::Error)]
pub enum SystemError {
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("set {set} references element {id} outside universe of size {n}")]
    IdOutOfRange { set: usize, id: u32, n: usize },
    #[error("negative cost for element {0}")]
    NegativeCost(u32),
    #[error("expected {n} costs, found {found}")]
    CostLength { n: usize, found: usize },
    #[error("end of stream")]
    EndOfStream,
    #[error("order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error("instance JSON: {0}")]
    Json(String),
}

/// A hitting-set instance: universe size `n`, per-element costs, and an
/// ordered list of sets over element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    costs: Vec<Rat>,
    sets: Vec<Vec<u32>>,
    weighted: bool,
}

impl SetSystem {
    /// Validates ids, non-emptiness, and cost signs. Sets are sorted and
    /// deduplicated on the way in.
    pub fn new(
        n: usize,
        costs: Vec<Rat>,
        sets: Vec<Vec<u32>>,
        weighted: bool,
    ) -> Result<Self, SystemError> {
        if costs.len() != n {
            return Err(SystemError::CostLength { n, found: costs.len() });
        }
        for (id, c) in costs.iter().enumerate() {
            if *c < Rat::zero() {
                return Err(SystemError::NegativeCost(id as u32));
            }
        }
        let mut norm = Vec::with_capacity(sets.len());
        for (j, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(SystemError::EmptySet(j));
            }
            if let Some(&id) = s.iter().find(|&&id| id as usize >= n) {
                return Err(SystemError::IdOutOfRange { set: j, id, n });
            }
            norm.push(s);
        }
        Ok(Self { n, costs: norm_costs(costs), sets: norm, weighted })
    }

    /// Unit-cost convenience constructor.
    pub fn unweighted(n: usize, sets: Vec<Vec<u32>>) -> Result<Self, SystemError> {
        Self::new(n, vec![Rat::from_integer(1.into()); n], sets, false)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn weighted(&self) -> bool {
        self.weighted
    }

    pub fn set(&self, j: usize) -> &[u32] {
        &self.sets[j]
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn cost(&self, id: u32) -> &Rat {
        &self.costs[id as usize]
    }

    pub fn costs(&self) -> &[Rat] {
        &self.costs
    }

    pub fn element(&self, id: u32) -> Element {
        Element { id, cost: self.costs[id as usize].clone() }
    }

    /// Exact cost of a set of element ids.
    pub fn cost_of<'a>(&self, ids: impl IntoIterator<Item = &'a u32>) -> Rat {
        ids.into_iter().map(|&id| self.costs[id as usize].clone()).sum()
    }

    /// The dual system: one element per set of `self`, one set per element of
    /// `self` that appears in at least one set (empty duals are dropped so the
    /// non-empty-set invariant survives). Dual elements carry unit cost.
    pub fn dualize(&self) -> SetSystem {
        let mut dual_sets: Vec<Vec<u32>> = vec![Vec::new(); self.n];
        for (j, s) in self.sets.iter().enumerate() {
            for &e in s {
                dual_sets[e as usize].push(j as u32);
            }
        }
        dual_sets.retain(|s| !s.is_empty());
        let m = self.sets.len();
        SetSystem::new(m, vec![Rat::from_integer(1.into()); m], dual_sets, false)
            .expect("dual of a valid system is valid")
    }

    /// True iff every one of `S_1..S_t` is hit by `sol`.
    pub fn verify_feasible(&self, sol: &IntegralSolution, upto: usize) -> bool {
        assert!(upto <= self.m(), "upto exceeds stream length");
        self.sets[..upto].iter().all(|s| is_hit(s, sol))
    }
}

fn norm_costs(costs: Vec<Rat>) -> Vec<Rat> {
    costs
}

/// True iff `set` and the chosen elements intersect. `set` must be sorted.
pub fn is_hit(set: &[u32], sol: &IntegralSolution) -> bool {
    // Merge-style: iterate the smaller side.
    if set.len() <= sol.chosen.len() {
        set.iter().any(|e| sol.chosen.contains(e))
    } else {
        sol.chosen.iter().any(|e| set.binary_search(e).is_ok())
    }
}

/// A monotone integral solution: elements are only ever added.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegralSolution {
    chosen: BTreeSet<u32>,
    cost: Rat,
}

impl IntegralSolution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert an element, accumulating its cost exactly once.
    pub fn insert(&mut self, id: u32, cost: &Rat) -> bool {
        if self.chosen.insert(id) {
            self.cost += cost.clone();
            true
        } else {
            false
        }
    }

    pub fn contains(&self, id: u32) -> bool {
        self.chosen.contains(&id)
    }

    pub fn chosen(&self) -> &BTreeSet<u32> {
        &self.chosen
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn cost(&self) -> &Rat {
        &self.cost
    }
}

/// Fixed delivery order over set indices.
#[derive(Debug, Clone)]
pub struct ArrivalStream {
    order: Vec<u32>,
    cursor: usize,
}

impl ArrivalStream {
    /// `order` must be a permutation of `0..m`.
    pub fn new(order: Vec<u32>, m: usize) -> Result<Self, SystemError> {
        let mut seen = vec![false; m];
        if order.len() != m {
            return Err(SystemError::BadOrder(m));
        }
        for &j in &order {
            if j as usize >= m || seen[j as usize] {
                return Err(SystemError::BadOrder(m));
            }
            seen[j as usize] = true;
        }
        Ok(Self { order, cursor: 0 })
    }

    pub fn given(m: usize) -> Self {
        Self { order: (0..m as u32).collect(), cursor: 0 }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Yields the next set in the fixed order.
    pub fn deliver_next<'a>(&mut self, system: &'a SetSystem) -> Result<&'a [u32], SystemError> {
        if self.cursor >= self.order.len() {
            return Err(SystemError::EndOfStream);
        }
        let j = self.order[self.cursor] as usize;
        self.cursor += 1;
        Ok(system.set(j))
    }
}

// --- instance JSON ---------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    weighted: bool,
    costs: Vec<String>,
    sets: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<serde_json::Value>,
}

/// Serialize an instance (and optional order / geometry sidecar) to JSON.
pub fn instance_to_json(
    system: &SetSystem,
    order: Option<&[u32]>,
    geometry: Option<serde_json::Value>,
) -> String {
    let doc = InstanceJson {
        n: system.n,
        weighted: system.weighted,
        costs: system.costs.iter().map(format_rat).collect(),
        sets: system.sets.clone(),
        order: order.map(|o| o.to_vec()),
        geometry,
    };
    serde_json::to_string_pretty(&doc).expect("instance serializes")
}

/// Parse an instance document; returns the system plus the optional order.
pub fn instance_from_json(text: &str) -> Result<(SetSystem, Option<Vec<u32>>), SystemError> {
    let doc: InstanceJson =
        serde_json::from_str(text).map_err(|e| SystemError::Json(e.to_string()))?;
    let costs = doc
        .costs
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(SystemError::Json)?;
    let system = SetSystem::new(doc.n, costs, doc.sets, doc.weighted)?;
    if let Some(order) = &doc.order {
        ArrivalStream::new(order.clone(), system.m())?;
    }
    Ok((system, doc.order))
}
