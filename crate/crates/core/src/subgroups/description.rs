//! JSON descriptions of subgroups.
//!
//! ```json
//! {"type": "stallings", "rank": 2, "generators": ["aa", "ab"]}
//! {"type": "cosetStabilizer", "permutations": [[1, 2, 0], [1, 0, 2]], "point": 0}
//! {"type": "kernelFinite", "permutations": [[1, 0], [0, 1]]}
//! {"type": "kernelAbelian", "images": [[1, 0], [0, 1]]}
//! ```
//!
//! Permutations list the image of every point under each generator, acting on
//! the left. `rank` is optional for `stallings` and defaults to the smallest
//! rank (at least 2) that fits the generators.

use serde::{Deserialize, Serialize};

use super::action::FiniteAction;
use super::handle::SubgroupHandle;
use super::kernel::AbelianKernel;
use crate::error::{invalid, Error, Result};
use crate::space::Word;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum SubgroupDescription {
    Stallings {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<usize>,
        generators: Vec<Word>,
    },
    CosetStabilizer {
        permutations: FiniteAction,
        point: usize,
    },
    KernelFinite {
        permutations: FiniteAction,
    },
    KernelAbelian {
        images: Vec<Vec<i64>>,
    },
}

impl SubgroupDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("subgroup description: {e}")))
    }

    pub fn to_handle(&self) -> Result<SubgroupHandle> {
        match self {
            SubgroupDescription::Stallings { rank, generators } => {
                let needed = generators
                    .iter()
                    .flat_map(|g| g.letters().iter().map(|l| l.generator() + 1))
                    .max()
                    .unwrap_or(0)
                    .max(2);
                let rank = rank.unwrap_or(needed);
                if rank < needed {
                    return invalid(format!("generators need rank {needed}, got {rank}"));
                }
                SubgroupHandle::from_generators(rank, generators)
            }
            SubgroupDescription::CosetStabilizer { permutations, point } => {
                SubgroupHandle::coset_stabilizer(permutations.clone(), *point)
            }
            SubgroupDescription::KernelFinite { permutations } => SubgroupHandle::kernel_finite(permutations.clone()),
            SubgroupDescription::KernelAbelian { images } => {
                Ok(SubgroupHandle::kernel_abelian(AbelianKernel::new(images.clone())?))
            }
        }
    }

    pub fn from_handle(h: &SubgroupHandle) -> Self {
        match h {
            SubgroupHandle::Stallings(g) => {
                SubgroupDescription::Stallings { rank: Some(g.rank()), generators: g.basis() }
            }
            SubgroupHandle::CosetStabilizer { action, point } => {
                SubgroupDescription::CosetStabilizer { permutations: action.clone(), point: *point }
            }
            SubgroupHandle::KernelFinite { images, .. } => {
                SubgroupDescription::KernelFinite { permutations: images.clone() }
            }
            SubgroupHandle::KernelAbelian(k) => SubgroupDescription::KernelAbelian { images: k.images().to_vec() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_variant() {
        for text in [
            r#"{"type":"stallings","generators":["aa","ab"]}"#,
            r#"{"type":"cosetStabilizer","permutations":[[1,2,0],[1,0,2]],"point":1}"#,
            r#"{"type":"kernelFinite","permutations":[[1,0],[0,1]]}"#,
            r#"{"type":"kernelAbelian","images":[[1,0],[0,1]]}"#,
        ] {
            let d = SubgroupDescription::from_json(text).unwrap();
            let h = d.to_handle().unwrap();
            let back = SubgroupDescription::from_handle(&h).to_handle().unwrap();
            assert_eq!(h.key(), back.key(), "{text}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SubgroupDescription::from_json(r#"{"type":"cosetStabilizer","permutations":[[0,0]],"point":0}"#).is_err());
        assert!(SubgroupDescription::from_json(r#"{"type":"nope"}"#).is_err());
        let d = SubgroupDescription::from_json(r#"{"type":"stallings","rank":2,"generators":["c"]}"#).unwrap();
        assert!(d.to_handle().is_err());
        let d = SubgroupDescription::from_json(r#"{"type":"cosetStabilizer","permutations":[[1,0]],"point":5}"#).unwrap();
        assert!(d.to_handle().is_err());
    }
}
