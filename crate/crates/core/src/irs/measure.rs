//! Finitely supported invariant random subgroups.

use std::collections::VecDeque;

use serde::Serialize;
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::space::{Letter, Word};
use crate::subgroups::{SubgroupDescription, SubgroupHandle, SubgroupKey};

/// Tolerance for weights summing to 1 and for conjugate weights agreeing.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct IrsMember {
    pub handle: SubgroupHandle,
    pub weight: f64,
}

/// A probability measure on finitely many subgroups, closed under conjugation
/// with conjugates carrying equal weight.
#[derive(Debug, Clone)]
pub struct FiniteIrs {
    rank: usize,
    members: Vec<IrsMember>,
    keys: Vec<SubgroupKey>,
}

impl FiniteIrs {
    pub fn new(members: Vec<IrsMember>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidIrs("the support is empty".into()));
        };
        let rank = first.handle.rank();
        if let Some(i) = members.iter().position(|m| m.handle.rank() != rank) {
            return Err(Error::InvalidIrs(format!("member {i} has rank {}, expected {rank}", members[i].handle.rank())));
        }
        if let Some(i) = members.iter().position(|m| !(m.weight > 0.0) || !m.weight.is_finite()) {
            return Err(Error::InvalidIrs(format!("member {i} has weight {}; weights must be positive", members[i].weight)));
        }
        let total: f64 = members.iter().map(|m| m.weight).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidIrs(format!("weights sum to {total}, not 1")));
        }
        let keys: Vec<SubgroupKey> = members.iter().map(|m| m.handle.key()).collect();
        for i in 0..keys.len() {
            if let Some(j) = keys[i + 1..].iter().position(|k| *k == keys[i]) {
                return Err(Error::InvalidIrs(format!("members {i} and {} are the same subgroup", i + 1 + j)));
            }
        }
        for (i, m) in members.iter().enumerate() {
            for g in Letter::alphabet(rank).filter(|l| !l.is_inverse()) {
                let key = m.handle.conjugate(&Word::from(g))?.key();
                match keys.iter().position(|k| *k == key) {
                    None => {
                        return Err(Error::InvalidIrs(format!(
                            "conjugating member {i} by {} leaves the support",
                            g.to_char()
                        )))
                    }
                    Some(j) if (members[j].weight - m.weight).abs() > WEIGHT_TOL => {
                        return Err(Error::InvalidIrs(format!(
                            "member {i} and its conjugate by {} (member {j}) have weights {} and {}",
                            g.to_char(),
                            m.weight,
                            members[j].weight
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(FiniteIrs { rank, members, keys })
    }

    pub fn dirac(h: SubgroupHandle) -> Result<Self> {
        FiniteIrs::new(vec![IrsMember { handle: h, weight: 1.0 }])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn members(&self) -> &[IrsMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the member equal to `h`, if any.
    pub fn position(&self, h: &SubgroupHandle) -> Option<usize> {
        let key = h.key();
        self.keys.iter().position(|k| *k == key)
    }

    /// Every member replaced by its conjugate `g H g^-1`; the support is permuted.
    pub fn conjugated(&self, g: &Word) -> Result<FiniteIrs> {
        let members = self
            .members
            .iter()
            .map(|m| Ok(IrsMember { handle: m.handle.conjugate(g)?, weight: m.weight }))
            .collect::<Result<Vec<_>>>()?;
        FiniteIrs::new(members)
    }

    /// Parses a JSON array of subgroup descriptions, each with an extra `weight`.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("IRS file: {e}")))?;
        FiniteIrs::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let Value::Array(items) = value else {
            return invalid("an IRS description must be a JSON array");
        };
        let mut members = Vec::new();
        for (i, item) in items.into_iter().enumerate() {
            let Value::Object(mut obj) = item else {
                return invalid(format!("IRS entry {i} is not an object"));
            };
            let weight = obj
                .remove("weight")
                .and_then(|w| w.as_f64())
                .ok_or_else(|| Error::InvalidInput(format!("IRS entry {i} needs a numeric weight")))?;
            let desc: SubgroupDescription = serde_json::from_value(Value::Object(obj))
                .map_err(|e| Error::InvalidInput(format!("IRS entry {i}: {e}")))?;
            members.push(IrsMember { handle: desc.to_handle()?, weight });
        }
        FiniteIrs::new(members)
    }

    pub fn to_value(&self) -> Value {
        Value::Array(
            self.members
                .iter()
                .map(|m| {
                    let mut v = serde_json::to_value(SubgroupDescription::from_handle(&m.handle)).expect("serializable");
                    v.as_object_mut().expect("tagged object").insert("weight".into(), Value::from(m.weight));
                    v
                })
                .collect(),
        )
    }
}

/// Pushes the uniform measure on the cosets of `H` to its conjugacy class:
/// the uniform measure on the distinct conjugates.
pub fn irs_from_finite_index(h: &SubgroupHandle) -> Result<FiniteIrs> {
    if h.index().is_none() {
        return invalid("the subgroup has infinite index");
    }
    let rank = h.rank();
    let mut orbit: Vec<SubgroupHandle> = vec![h.clone()];
    let mut keys: Vec<SubgroupKey> = vec![h.key()];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in Letter::alphabet(rank) {
            let c = orbit[i].conjugate(&Word::from(g))?;
            let key = c.key();
            if !keys.contains(&key) {
                keys.push(key);
                orbit.push(c);
                queue.push_back(orbit.len() - 1);
            }
        }
    }
    let weight = 1.0 / orbit.len() as f64;
    FiniteIrs::new(orbit.into_iter().map(|handle| IrsMember { handle, weight }).collect())
}

/// The Dirac mass at a normal subgroup.
pub fn irs_from_normal(n: &SubgroupHandle) -> Result<FiniteIrs> {
    if !n.is_normal() {
        return invalid("the subgroup is not normal: a generator conjugate differs from it");
    }
    FiniteIrs::dirac(n.clone())
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MemberSummary {
    pub index: usize,
    pub weight: f64,
    pub variant: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Word>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup_index: Option<usize>,
}

impl FiniteIrs {
    pub fn summaries(&self) -> Vec<MemberSummary> {
        self.members
            .iter()
            .enumerate()
            .map(|(index, m)| MemberSummary {
                index,
                weight: m.weight,
                variant: m.handle.variant_name(),
                generators: m.handle.generators().filter(|g| g.len() <= 12),
                subgroup_index: m.handle.index(),
            })
            .collect()
    }
}
