use std::sync::Arc;

use super::schedule::{total_objective, Assignment, Schedule};
use super::TimetableInstance;
use crate::error::{Error, Result};
use crate::objective::{Bounds, Interval, ObjectiveProblem};

/// Incremental rig and user bookkeeping used while placing sessions.
struct Board<'a> {
    instance: &'a TimetableInstance,
    capacities: Vec<u32>,
    /// users plus changeover seats, per flat rig and slot
    load: Vec<Vec<u32>>,
    /// (user, start, end) of placed sessions
    busy: Vec<(&'a str, usize, usize)>,
}

impl<'a> Board<'a> {
    fn new(instance: &'a TimetableInstance) -> Self {
        Self {
            instance,
            capacities: instance.capacities(),
            load: vec![vec![0; instance.horizon()]; instance.rig_count()],
            busy: Vec::new(),
        }
    }

    fn fits(&self, k: usize, rig: usize, start: usize) -> bool {
        let req = &self.instance.requests()[k];
        let end = start + req.duration;
        let user_free = self
            .busy
            .iter()
            .all(|&(u, s, e)| u != req.user || e <= start || end <= s);
        if !user_free {
            return false;
        }
        let r = self.instance.flat_rig(k, rig);
        let window_end = (end + self.instance.threshold_gap()).min(self.instance.horizon());
        (start..window_end).all(|t| self.load[r][t] < self.capacities[r])
    }

    fn place(&mut self, k: usize, rig: usize, start: usize) {
        let req = &self.instance.requests()[k];
        let end = start + req.duration;
        let r = self.instance.flat_rig(k, rig);
        let window_end = (end + self.instance.threshold_gap()).min(self.instance.horizon());
        for t in start..window_end {
            self.load[r][t] += 1;
        }
        self.busy.push((&req.user, start, end));
    }

    /// Earliest start at or after `from` that fits on `rig`.
    fn first_fit(&self, k: usize, rig: usize, from: usize) -> Option<usize> {
        let last = self.instance.horizon() - self.instance.requests()[k].duration;
        (from..=last).find(|&s| self.fits(k, rig, s))
    }
}

/// Maps a real vector to a feasible schedule.
///
/// Coordinates come in pairs per request: the rig (floored) and the start
/// slot (rounded). Requests are placed in order of desired start, ties by
/// index; a request that collides is shifted to the first later slot that
/// fits, or left unassigned when none does.
pub fn decode(instance: &TimetableInstance, x: &[f64]) -> Result<Schedule> {
    let n = instance.requests().len();
    if x.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: x.len() });
    }
    let mut desired: Vec<(usize, usize, usize)> = instance
        .requests()
        .iter()
        .enumerate()
        .map(|(k, req)| {
            let rigs = instance.rigs_for(k).len();
            let rig = (x[2 * k].floor().max(0.0) as usize).min(rigs - 1);
            let last = instance.horizon() - req.duration;
            let start = (x[2 * k + 1].round().max(0.0) as usize).clamp(req.release, last);
            (start, k, rig)
        })
        .collect();
    desired.sort_unstable();

    let mut board = Board::new(instance);
    let mut schedule = Schedule::unassigned(n);
    for (start, k, rig) in desired {
        if let Some(s) = board.first_fit(k, rig, start) {
            board.place(k, rig, s);
            schedule.assignments[k] = Some(Assignment { rig, start: s });
        }
    }
    Ok(schedule)
}

/// Inverse of [`decode`] for schedules it can reproduce: rig index and start
/// slot per request; unassigned requests ask for the latest start.
pub fn schedule_to_vector(instance: &TimetableInstance, schedule: &Schedule) -> Vec<f64> {
    instance
        .requests()
        .iter()
        .zip(&schedule.assignments)
        .flat_map(|(req, a)| match a {
            Some(a) => [a.rig as f64, a.start as f64],
            None => [0.0, (instance.horizon() - req.duration) as f64],
        })
        .collect()
}

/// The timetable as a box-bounded minimization problem over `2 * requests`
/// coordinates.
pub fn encode(instance: &TimetableInstance) -> ObjectiveProblem {
    let intervals = instance
        .requests()
        .iter()
        .enumerate()
        .flat_map(|(k, req)| {
            let rigs = instance.rigs_for(k).len() as f64;
            let last = (instance.horizon() - req.duration) as f64;
            // half a slot of slack on each side gives every start an equal-width bin
            [Interval::new(0.0, rigs), Interval::new(req.release as f64 - 0.5, last + 0.5)]
        })
        .collect();
    let bounds = Bounds::new(intervals).expect("instance validation guarantees ordered intervals");
    let shared = Arc::new(instance.clone());
    ObjectiveProblem::scalar("timetable", bounds, move |x| {
        let schedule = decode(&shared, x).expect("dimension fixed by encode");
        total_objective(&shared, &schedule).expect("decoded schedules are feasible")
    })
}

/// Serves requests in arrival order, each at its earliest feasible slot on
/// the first rig of its type that can take it.
pub fn first_come_first_served(instance: &TimetableInstance) -> Schedule {
    let n = instance.requests().len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (instance.requests()[k].release, k));
    let mut board = Board::new(instance);
    let mut schedule = Schedule::unassigned(n);
    for k in order {
        let release = instance.requests()[k].release;
        let best = (0..instance.rigs_for(k).len())
            .filter_map(|rig| board.first_fit(k, rig, release).map(|s| (s, rig)))
            .min();
        if let Some((start, rig)) = best {
            board.place(k, rig, start);
            schedule.assignments[k] = Some(Assignment { rig, start });
        }
    }
    schedule
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timetable::{check_feasible, Request, Rig, RigType};
    use proptest::prelude::*;

    fn one_type(caps: &[u32], gap: usize, horizon: usize, reqs: &[(&str, usize, usize)]) -> TimetableInstance {
        let rigs = caps
            .iter()
            .enumerate()
            .map(|(i, &c)| Rig { id: format!("R{i}"), capacity: c })
            .collect();
        let requests = reqs
            .iter()
            .map(|&(u, d, rel)| Request { user: u.into(), rig_type: "T".into(), duration: d, max_session: d, release: rel })
            .collect();
        TimetableInstance::new(vec![RigType { id: "T".into(), rigs }], horizon, 5.0, gap, requests).unwrap()
    }

    #[test]
    fn single_request_lands_at_rounded_start() {
        let inst = one_type(&[2], 0, 10, &[("a", 3, 0)]);
        let s = decode(&inst, &[0.7, 4.4]).unwrap();
        assert_eq!(s.assignments, vec![Some(Assignment { rig: 0, start: 4 })]);
        let s = decode(&inst, &[0.0, 4.5]).unwrap();
        assert_eq!(s.assignments[0].unwrap().start, 5);
    }

    #[test]
    fn same_user_overlap_shifts_the_later_request() {
        // Both want slot 2; request 0 goes first (tie on start, lower index),
        // request 1 moves to slot 5 where request 0 has ended.
        let inst = one_type(&[1, 1], 0, 10, &[("a", 3, 0), ("a", 2, 0)]);
        let s = decode(&inst, &[0.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.assignments[0], Some(Assignment { rig: 0, start: 2 }));
        assert_eq!(s.assignments[1], Some(Assignment { rig: 1, start: 5 }));
    }

    #[test]
    fn full_rig_waits_for_the_changeover() {
        let inst = one_type(&[1], 2, 10, &[("a", 3, 0), ("b", 2, 0)]);
        let s = decode(&inst, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(s.assignments[1], Some(Assignment { rig: 0, start: 5 }));
    }

    #[test]
    fn no_room_means_unassigned() {
        let inst = one_type(&[1], 0, 4, &[("a", 3, 0), ("b", 3, 0)]);
        let s = decode(&inst, &[0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.unassigned_count(), 1);
        assert!(s.assignments[0].is_some());
    }

    #[test]
    fn encoded_problem_shape() {
        let inst = one_type(&[1, 2, 3], 1, 12, &[("a", 3, 2), ("b", 12, 0)]);
        let p = encode(&inst);
        assert_eq!(p.dimension(), 4);
        let iv = p.bounds().intervals();
        assert_eq!((iv[0].low, iv[0].high), (0.0, 3.0));
        assert_eq!((iv[1].low, iv[1].high), (1.5, 9.5));
        assert_eq!((iv[3].low, iv[3].high), (-0.5, 0.5));
        // upper rig bound floors into the last rig
        let s = decode(&inst, &[3.0, 9.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.assignments[0].unwrap().rig, 2);
    }

    #[test]
    fn schedule_vector_round_trip() {
        let inst = one_type(&[2, 1], 1, 10, &[("a", 3, 0), ("b", 2, 1), ("a", 2, 4)]);
        let fcfs = first_come_first_served(&inst);
        let again = decode(&inst, &schedule_to_vector(&inst, &fcfs)).unwrap();
        assert_eq!(again, fcfs);
    }

    fn arb_instance() -> impl Strategy<Value = TimetableInstance> {
        (
            prop::collection::vec(1u32..4, 1..4),
            0usize..3,
            4usize..13,
            prop::collection::vec((0usize..3, 1usize..5, 0usize..6), 1..6),
        )
            .prop_map(|(caps, gap, horizon, reqs)| {
                let reqs: Vec<(String, usize, usize)> = reqs
                    .into_iter()
                    .map(|(u, d, rel)| {
                        let d = d.min(horizon);
                        (format!("u{u}"), d, rel.min(horizon - d))
                    })
                    .collect();
                let borrowed: Vec<(&str, usize, usize)> =
                    reqs.iter().map(|(u, d, r)| (u.as_str(), *d, *r)).collect();
                one_type(&caps, gap, horizon, &borrowed)
            })
    }

    proptest! {
        #[test]
        fn decoded_schedules_are_feasible(
            inst in arb_instance(),
            raw in prop::collection::vec(-2.0f64..15.0, 10),
        ) {
            let x = &raw[..2 * inst.requests().len()];
            let s = decode(&inst, x).unwrap();
            prop_assert!(check_feasible(&inst, &s).is_ok());
            let f = total_objective(&inst, &s).unwrap();
            prop_assert!(f >= 0.0);
        }

        #[test]
        fn fcfs_is_feasible(inst in arb_instance()) {
            prop_assert!(check_feasible(&inst, &first_come_first_served(&inst)).is_ok());
        }
    }
}
