use serde::{Deserialize, Serialize};

use super::TimetableInstance;
use crate::error::{Error, Result};

/// Where and when a request runs. `rig` indexes the rigs of the request's type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub rig: usize,
    pub start: usize,
}

/// One entry per request, in request order; `None` means unassigned.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Schedule {
    pub assignments: Vec<Option<Assignment>>,
}

/// Flat row of the schedule table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRow {
    pub user: String,
    pub request: usize,
    pub rig_type: String,
    pub rig: Option<String>,
    pub start: Option<usize>,
    pub end: Option<usize>,
}

impl Schedule {
    pub fn unassigned(requests: usize) -> Self {
        Self { assignments: vec![None; requests] }
    }

    pub fn unassigned_count(&self) -> usize {
        self.assignments.iter().filter(|a| a.is_none()).count()
    }

    pub fn rows(&self, instance: &TimetableInstance) -> Vec<SessionRow> {
        instance
            .requests()
            .iter()
            .zip(&self.assignments)
            .enumerate()
            .map(|(k, (req, a))| SessionRow {
                user: req.user.clone(),
                request: k,
                rig_type: req.rig_type.clone(),
                rig: a.and_then(|a| instance.rigs_for(k).get(a.rig)).map(|r| r.id.clone()),
                start: a.map(|a| a.start),
                end: a.map(|a| a.start + req.duration),
            })
            .collect()
    }
}

/// Users holding each flat rig per slot, plus seats still in changeover.
struct Load {
    users: Vec<Vec<u32>>,
    changeover: Vec<Vec<u32>>,
}

fn load(instance: &TimetableInstance, schedule: &Schedule) -> Load {
    let h = instance.horizon();
    let rigs = instance.rig_count();
    let gap = instance.threshold_gap();
    let mut users = vec![vec![0u32; h]; rigs];
    let mut changeover = vec![vec![0u32; h]; rigs];
    for (k, a) in schedule.assignments.iter().enumerate() {
        let Some(a) = a else { continue };
        let r = instance.flat_rig(k, a.rig);
        let end = a.start + instance.requests()[k].duration;
        for t in a.start..end.min(h) {
            users[r][t] += 1;
        }
        for t in end.min(h)..(end + gap).min(h) {
            changeover[r][t] += 1;
        }
    }
    Load { users, changeover }
}

/// Verifies every schedule constraint, naming the first one violated.
pub fn check_feasible(instance: &TimetableInstance, schedule: &Schedule) -> Result<()> {
    let infeasible = |msg: String| Err(Error::Infeasible(msg));
    let requests = instance.requests();
    if schedule.assignments.len() != requests.len() {
        return Err(Error::DimensionMismatch {
            expected: requests.len(),
            found: schedule.assignments.len(),
        });
    }
    for (k, a) in schedule.assignments.iter().enumerate() {
        let Some(a) = a else { continue };
        let req = &requests[k];
        if a.rig >= instance.rigs_for(k).len() {
            return infeasible(format!("request {k}: rig index {} outside rig type `{}`", a.rig, req.rig_type));
        }
        if a.start < req.release {
            return infeasible(format!("request {k}: starts at {} before its release {}", a.start, req.release));
        }
        if a.start + req.duration > instance.horizon() {
            return infeasible(format!("request {k}: runs past the horizon"));
        }
        if req.duration > req.max_session {
            return infeasible(format!("request {k}: session longer than max_session"));
        }
    }
    // one rig per user at a time
    for i in 0..requests.len() {
        for j in i + 1..requests.len() {
            let (Some(a), Some(b)) = (schedule.assignments[i], schedule.assignments[j]) else {
                continue;
            };
            if requests[i].user != requests[j].user {
                continue;
            }
            let overlap = a.start < b.start + requests[j].duration && b.start < a.start + requests[i].duration;
            if overlap {
                return infeasible(format!(
                    "user `{}` holds two rigs at once (requests {i} and {j})",
                    requests[i].user
                ));
            }
        }
    }
    let load = load(instance, schedule);
    for (r, cap) in instance.capacities().into_iter().enumerate() {
        for t in 0..instance.horizon() {
            if load.users[r][t] > cap {
                return infeasible(format!("capacity exceeded on rig {r} at slot {t}"));
            }
            if load.users[r][t] + load.changeover[r][t] > cap {
                return infeasible(format!("threshold gap violated on rig {r} at slot {t}"));
            }
        }
    }
    Ok(())
}

fn slot_cost(instance: &TimetableInstance, load: &Load, t: usize) -> f64 {
    instance
        .capacities()
        .into_iter()
        .zip(&load.users)
        .filter(|(_, users)| users[t] > 0)
        .map(|(cap, users)| f64::from(cap - users[t]))
        .sum()
}

/// Unused seats on occupied rigs at slot `t`.
pub fn objective(instance: &TimetableInstance, schedule: &Schedule, t: usize) -> Result<f64> {
    if t >= instance.horizon() {
        return Err(Error::InvalidParameter(format!(
            "slot {t} outside horizon {}",
            instance.horizon()
        )));
    }
    check_feasible(instance, schedule)?;
    Ok(slot_cost(instance, &load(instance, schedule), t))
}

/// Per-slot objective over the whole horizon.
pub fn objective_trace(instance: &TimetableInstance, schedule: &Schedule) -> Result<Vec<(usize, f64)>> {
    check_feasible(instance, schedule)?;
    let load = load(instance, schedule);
    Ok((0..instance.horizon()).map(|t| (t, slot_cost(instance, &load, t))).collect())
}

/// Summed per-slot objective plus the penalty for each unassigned request.
pub fn total_objective(instance: &TimetableInstance, schedule: &Schedule) -> Result<f64> {
    let trace = objective_trace(instance, schedule)?;
    let occupancy: f64 = trace.iter().map(|(_, f)| f).sum();
    Ok(occupancy + instance.unassigned_penalty() * schedule.unassigned_count() as f64)
}
