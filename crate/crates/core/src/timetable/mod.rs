//! Multi-user remote-lab timetable model.
//!
//! Rigs are grouped into rig types; each rig seats up to `capacity` users at
//! once. A request asks for a contiguous session of `duration` slots on any
//! rig of one type. Time is discrete. After a session ends its seat is in
//! changeover for `threshold_gap` slots before another session can take it.
//!
//! The per-slot cost is the number of unused seats on rigs that are in use,
//! summed over all rigs; unassigned requests pay a fixed penalty.

mod encode;
mod scenario;
mod schedule;

pub use encode::{decode, encode, first_come_first_served, schedule_to_vector};
pub use scenario::builtin_scenario;
pub use schedule::{check_feasible, objective, objective_trace, total_objective, Assignment, Schedule, SessionRow};

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rig {
    pub id: String,
    pub capacity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigType {
    pub id: String,
    pub rigs: Vec<Rig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub user: String,
    pub rig_type: String,
    /// Session length in slots.
    pub duration: usize,
    /// Longest possession allowed for this request, in slots.
    pub max_session: usize,
    /// Earliest slot the session may start (arrival time).
    #[serde(default)]
    pub release: usize,
}

/// A validated scheduling instance. Times are in slots.
#[derive(Debug, Clone, PartialEq)]
pub struct TimetableInstance {
    rig_types: Vec<RigType>,
    horizon: usize,
    slot_length: f64,
    threshold_gap: usize,
    requests: Vec<Request>,
    /// Index of each request's rig type.
    request_types: Vec<usize>,
    /// Flat index of the first rig of each type.
    type_offsets: Vec<usize>,
}

/// On-disk form of an instance; durations in slots, the changeover in minutes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub horizon: usize,
    /// Minutes per slot.
    pub slot_length: f64,
    /// Changeover time in minutes; rounded up to whole slots.
    pub threshold_gap: f64,
    pub rig_types: Vec<RigType>,
    pub requests: Vec<Request>,
}

impl TimetableInstance {
    pub fn new(
        rig_types: Vec<RigType>,
        horizon: usize,
        slot_length: f64,
        threshold_gap: usize,
        requests: Vec<Request>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidParameter(msg));
        if horizon == 0 {
            return invalid("horizon must be at least one slot".into());
        }
        if !(slot_length > 0.0) {
            return invalid(format!("slot_length must be positive, got {slot_length}"));
        }
        if rig_types.is_empty() {
            return invalid("at least one rig type is required".into());
        }
        let mut type_ids = HashSet::new();
        let mut rig_ids = HashSet::new();
        let mut type_offsets = Vec::with_capacity(rig_types.len());
        let mut offset = 0;
        for t in &rig_types {
            if !type_ids.insert(t.id.as_str()) {
                return invalid(format!("duplicate rig type `{}`", t.id));
            }
            if t.rigs.is_empty() {
                return invalid(format!("rig type `{}` has no rigs", t.id));
            }
            for r in &t.rigs {
                if r.capacity == 0 {
                    return invalid(format!("rig `{}` has zero capacity", r.id));
                }
                if !rig_ids.insert(r.id.as_str()) {
                    return invalid(format!("duplicate rig `{}`", r.id));
                }
            }
            type_offsets.push(offset);
            offset += t.rigs.len();
        }
        let mut request_types = Vec::with_capacity(requests.len());
        for (i, req) in requests.iter().enumerate() {
            let Some(ty) = rig_types.iter().position(|t| t.id == req.rig_type) else {
                return invalid(format!("request {i} names unknown rig type `{}`", req.rig_type));
            };
            if req.duration == 0 || req.duration > req.max_session || req.max_session > horizon {
                return invalid(format!(
                    "request {i}: need 1 <= duration ({}) <= max_session ({}) <= horizon ({horizon})",
                    req.duration, req.max_session
                ));
            }
            if req.release + req.duration > horizon {
                return invalid(format!("request {i} released at slot {} cannot finish within the horizon", req.release));
            }
            request_types.push(ty);
        }
        Ok(Self {
            rig_types,
            horizon,
            slot_length,
            threshold_gap,
            requests,
            request_types,
            type_offsets,
        })
    }

    pub fn from_document(doc: InstanceDocument) -> Result<Self> {
        if !(doc.threshold_gap >= 0.0) || !(doc.slot_length > 0.0) {
            return Err(Error::InvalidParameter(
                "threshold_gap must be >= 0 and slot_length > 0 minutes".into(),
            ));
        }
        let gap = gap_slots(doc.threshold_gap, doc.slot_length);
        Self::new(doc.rig_types, doc.horizon, doc.slot_length, gap, doc.requests)
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            horizon: self.horizon,
            slot_length: self.slot_length,
            threshold_gap: self.threshold_gap as f64 * self.slot_length,
            rig_types: self.rig_types.clone(),
            requests: self.requests.clone(),
        }
    }

    /// Parses a TOML instance document.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let doc: InstanceDocument = toml::from_str(text).map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            message: e.to_string(),
        })?;
        Self::from_document(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn rig_types(&self) -> &[RigType] {
        &self.rig_types
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn slot_length(&self) -> f64 {
        self.slot_length
    }

    pub fn threshold_gap(&self) -> usize {
        self.threshold_gap
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn rig_count(&self) -> usize {
        self.rig_types.iter().map(|t| t.rigs.len()).sum()
    }

    /// Rigs that can serve request `k`.
    pub fn rigs_for(&self, k: usize) -> &[Rig] {
        &self.rig_types[self.request_types[k]].rigs
    }

    /// Flat index of rig `rig` of request `k`'s type.
    pub(crate) fn flat_rig(&self, k: usize, rig: usize) -> usize {
        self.type_offsets[self.request_types[k]] + rig
    }

    /// Capacity per flat rig index.
    pub(crate) fn capacities(&self) -> Vec<u32> {
        self.rig_types
            .iter()
            .flat_map(|t| t.rigs.iter().map(|r| r.capacity))
            .collect()
    }

    /// Cost of leaving one request unassigned: largest capacity times horizon.
    pub fn unassigned_penalty(&self) -> f64 {
        let max_cap = self.capacities().into_iter().max().unwrap_or(1);
        f64::from(max_cap) * self.horizon as f64
    }
}

/// Changeover length in whole slots: `ceil(minutes / slot_length)`.
pub fn gap_slots(minutes: f64, slot_length: f64) -> usize {
    (minutes / slot_length - 1e-9).ceil().max(0.0) as usize
}
