use super::{Request, Rig, RigType, TimetableInstance};

/// Three rig types with one three-seat rig each and four users.
///
/// Users 1 to 3 arrive one slot apart and fill rig type T1. User 4 asks for
/// T1 while it is full and for T2, which is idle. Slots are five minutes and
/// the changeover is one slot.
pub fn builtin_scenario() -> TimetableInstance {
    let rig_types = (1..=3)
        .map(|l| RigType {
            id: format!("T{l}"),
            rigs: vec![Rig { id: format!("T{l}-R1"), capacity: 3 }],
        })
        .collect();
    let request = |user: &str, rig_type: &str, duration, release| Request {
        user: user.into(),
        rig_type: rig_type.into(),
        duration,
        max_session: 6,
        release,
    };
    let requests = vec![
        request("u1", "T1", 6, 0),
        request("u2", "T1", 6, 1),
        request("u3", "T1", 6, 2),
        request("u4", "T1", 4, 3),
        request("u4", "T2", 2, 3),
    ];
    TimetableInstance::new(rig_types, 16, 5.0, 1, requests).expect("built-in scenario is valid")
}
