use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::NodeId;

/// Per-node timing override; missing fields fall back to the defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeTiming {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure_duration: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward_delay: Option<String>,
}

/// Loses the feedback message from `origin` headed to end node `toward`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DropFeedback {
    pub origin: NodeId,
    pub toward: NodeId,
}

/// On-disk profile fixture. `task` and `n` are optional scenario hints.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub default: NodeTiming,
    #[serde(default)]
    pub nodes: BTreeMap<NodeId, NodeTiming>,
    #[serde(default)]
    pub relay_after_measure: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drop_feedback: Option<DropFeedback>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeProfile {
    pub measure_duration: Rational,
    pub forward_delay: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Timing {
    duration: Option<Rational>,
    delay: Option<Rational>,
}

/// Timing of every node. Durations default to `t_q` (or 1 without slots),
/// forward delays to one classical slot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Profiles {
    default: Timing,
    nodes: BTreeMap<NodeId, Timing>,
    pub relay_after_measure: bool,
    pub drop_feedback: Option<DropFeedback>,
    pub task: Option<[NodeId; 2]>,
    pub n: Option<usize>,
}

fn parse_timing(t: &NodeTiming) -> Result<Timing> {
    let positive = |s: &Option<String>| -> Result<Option<Rational>> {
        match s {
            None => Ok(None),
            Some(text) => {
                let v = rational::parse(text)?;
                if !rational::is_positive(&v) {
                    return Err(Error::InvalidProfile(format!("non-positive time {text}")));
                }
                Ok(Some(v))
            }
        }
    };
    Ok(Timing {
        duration: positive(&t.measure_duration)?,
        delay: positive(&t.forward_delay)?,
    })
}

impl Profiles {
    /// All durations `t_q`, all delays 1.
    pub fn uniform() -> Self {
        Self::default()
    }

    pub fn from_doc(doc: &ProfileDoc) -> Result<Self> {
        let nodes = doc
            .nodes
            .iter()
            .map(|(&i, t)| Ok((i, parse_timing(t)?)))
            .collect::<Result<_>>()?;
        Ok(Profiles {
            default: parse_timing(&doc.default)?,
            nodes,
            relay_after_measure: doc.relay_after_measure,
            drop_feedback: doc.drop_feedback,
            task: doc.task,
            n: doc.n,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProfileDoc = serde_json::from_str(text).map_err(|e| Error::InvalidProfile(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn with_duration(mut self, node: NodeId, d: Rational) -> Self {
        self.nodes.entry(node).or_default().duration = Some(d);
        self
    }

    pub fn with_delay(mut self, node: NodeId, d: Rational) -> Self {
        self.nodes.entry(node).or_default().delay = Some(d);
        self
    }

    pub fn with_default_duration(mut self, d: Rational) -> Self {
        self.default.duration = Some(d);
        self
    }

    pub fn with_drop(mut self, origin: NodeId, toward: NodeId) -> Self {
        self.drop_feedback = Some(DropFeedback { origin, toward });
        self
    }

    pub fn node(&self, i: NodeId, t_q: Option<Rational>) -> NodeProfile {
        let own = self.nodes.get(&i);
        let measure_duration = own
            .and_then(|t| t.duration)
            .or(self.default.duration)
            .or(t_q)
            .unwrap_or_else(|| rational::int(1));
        let forward_delay = own
            .and_then(|t| t.delay)
            .or(self.default.delay)
            .unwrap_or_else(|| rational::int(1));
        NodeProfile {
            measure_duration,
            forward_delay,
        }
    }

    /// Slotted runs need every duration within `t_q` and unit hop delays.
    pub fn check_slotted(&self, nodes: impl IntoIterator<Item = NodeId>, t_q: Rational) -> Result<()> {
        for i in nodes {
            let p = self.node(i, Some(t_q));
            if p.measure_duration > t_q {
                return Err(Error::InvalidProfile(format!(
                    "node {i} measures for {} > t_q = {}",
                    rational::format(&p.measure_duration),
                    rational::format(&t_q)
                )));
            }
            if p.forward_delay != rational::int(1) {
                return Err(Error::InvalidProfile(format!(
                    "node {i} has hop delay {}, slotted mode uses one classical slot",
                    rational::format(&p.forward_delay)
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn defaults_and_overrides() {
        let p = Profiles::from_json(r#"{"default":{"forward_delay":"1"},"nodes":{"2":{"measure_duration":"5/2"}}}"#)
            .unwrap();
        assert_eq!(p.node(2, None).measure_duration, ratio(5, 2));
        assert_eq!(p.node(3, Some(int(4))).measure_duration, int(4));
        assert_eq!(p.node(3, None).measure_duration, int(1));
        assert!(Profiles::from_json(r#"{"bogus":1}"#).is_err());
        assert!(Profiles::from_json(r#"{"default":{"forward_delay":"0"}}"#).is_err());
    }

    #[test]
    fn slotted_bounds() {
        let p = Profiles::uniform().with_duration(2, int(6));
        assert!(p.check_slotted([2], int(5)).is_err());
        assert!(p.check_slotted([3], int(5)).is_ok());
        assert!(Profiles::uniform()
            .with_delay(3, int(2))
            .check_slotted([3], int(5))
            .is_err());
    }
}
