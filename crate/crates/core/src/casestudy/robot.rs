//! Grid robot with a battery.
//!
//! A state is `(g, h, x, y)`: status `g` (0 on, 1 sleep, 2 error), battery
//! `h` and 1-based position. While on, the robot moves N/S/E/W inside the
//! grid if it has at least `move_cost` charge. A move succeeds with
//! probability `1 - obstacle_prob` and costs `move_cost`; otherwise the
//! robot meets an obstacle, stays put and pays `move_cost +
//! obstacle_extra_cost` (clamped at 0). `sleep` and `error` switch status;
//! sleeping and failed robots loop on the same action forever. A robot that
//! is on at the goal has finished and has no further actions.

use super::{explore, CaseStudy, ParamError};

#[derive(Debug, Clone, PartialEq)]
pub struct RobotParams {
    pub width: u32,
    pub height: u32,
    pub initial_battery: u32,
    pub obstacle_prob: f64,
    pub move_cost: u32,
    pub obstacle_extra_cost: u32,
    pub start: (u32, u32),
    pub goal: (u32, u32),
    pub charger: (u32, u32),
    pub safe: Vec<(u32, u32)>,
}

/// Battery capacity; levels range over `0..=MAX_BATTERY`.
pub const MAX_BATTERY: u32 = 10;

impl RobotParams {
    /// Defaults for a `width × height` grid: start in the bottom-left
    /// corner, goal top-right, charger top-left, safe zone bottom-right.
    pub fn grid(width: u32, height: u32) -> Self {
        RobotParams {
            width,
            height,
            initial_battery: 10,
            obstacle_prob: 0.1,
            move_cost: 1,
            obstacle_extra_cost: 1,
            start: (1, 1),
            goal: (width, height),
            charger: (1, height),
            safe: vec![(width, 1)],
        }
    }

    pub fn check(&self) -> Result<(), ParamError> {
        let inside = |(x, y): (u32, u32)| (1..=self.width).contains(&x) && (1..=self.height).contains(&y);
        if self.width == 0 || self.height == 0 {
            return Err(ParamError("grid must be at least 1x1".into()));
        }
        if self.initial_battery > MAX_BATTERY {
            return Err(ParamError(format!("initial battery {} exceeds {MAX_BATTERY}", self.initial_battery)));
        }
        if !(0.0..=1.0).contains(&self.obstacle_prob) {
            return Err(ParamError(format!("obstacle probability {} outside [0, 1]", self.obstacle_prob)));
        }
        if self.move_cost == 0 {
            return Err(ParamError("move cost must be positive".into()));
        }
        let named = [("start", self.start), ("goal", self.goal), ("charger", self.charger)];
        for (what, p) in named.into_iter().chain(self.safe.iter().map(|&p| ("safe zone", p))) {
            if !inside(p) {
                return Err(ParamError(format!("{what} ({}, {}) outside the {}x{} grid", p.0, p.1, self.width, self.height)));
            }
        }
        Ok(())
    }
}

impl Default for RobotParams {
    fn default() -> Self {
        RobotParams::grid(3, 3)
    }
}

const REQUIREMENT: &str = r#"objective q0 = Pmax [ F G ("goal" & "h>3" & "on") ];
objective q1 = Pmax [ F G ("chrg" & "h>3" & "sleep") ];
objective q2 = Pmax [ F G ("safe" & "sleep") ];
objective q3 = Pmax [ F G "error" ];
context w01 : q0 -> q1 when Pmax in [0.75, 0.85);
context w02 : q0 -> q2 when Pmax < 0.75;
context w13 : q1 -> q3 when Pmax < 0.7;
context w23 : q2 -> q3 when Pmax < 0.8;
initial q0;
"#;

type State = (u8, u32, u32, u32);

pub fn gen_robot(params: &RobotParams) -> Result<CaseStudy, ParamError> {
    params.check()?;
    let p = params.clone();
    let succ = move |&(g, h, x, y): &State| -> Vec<(&'static str, Vec<(State, f64)>)> {
        match g {
            1 => return vec![("sleep", vec![((1, h, x, y), 1.0)])],
            2 => return vec![("error", vec![((2, h, x, y), 1.0)])],
            _ => {}
        }
        if (x, y) == p.goal {
            return Vec::new();
        }
        let mut out = Vec::new();
        if h >= p.move_cost {
            let moves: [(&'static str, i64, i64); 4] = [("N", 0, 1), ("S", 0, -1), ("E", 1, 0), ("W", -1, 0)];
            for (a, dx, dy) in moves {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 1 || ny < 1 || nx > p.width as i64 || ny > p.height as i64 {
                    continue;
                }
                let moved = (0, h - p.move_cost, nx as u32, ny as u32);
                let blocked = (0, h.saturating_sub(p.move_cost + p.obstacle_extra_cost), x, y);
                out.push((a, vec![(moved, 1.0 - p.obstacle_prob), (blocked, p.obstacle_prob)]));
            }
        }
        out.push(("sleep", vec![((1, h, x, y), 1.0)]));
        out.push(("error", vec![((2, h, x, y), 1.0)]));
        out
    };
    let p = params.clone();
    let labels = move |&(g, h, x, y): &State| {
        let mut l = vec![["on", "sleep", "error"][g as usize]];
        if h > 3 {
            l.push("h>3");
        }
        if (x, y) == p.goal {
            l.push("goal");
        }
        if (x, y) == p.charger {
            l.push("chrg");
        }
        if p.safe.contains(&(x, y)) {
            l.push("safe");
        }
        l
    };
    let init = (0, params.initial_battery, params.start.0, params.start.1);
    let model = explore(
        init,
        &["N", "S", "E", "W", "sleep", "error"],
        &["on", "sleep", "error", "h>3", "goal", "chrg", "safe"],
        succ,
        labels,
        |&(g, h, x, y)| format!("({g},{h},{x},{y})"),
    );
    Ok(CaseStudy { model, requirement: REQUIREMENT.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::captl::{parse_requirement, validate_persistence};

    fn find(m: &crate::mdp::Mdp, name: &str) -> usize {
        (0..m.num_states()).find(|&s| m.name(s) == Some(name)).unwrap()
    }

    #[test]
    fn north_from_start() {
        let cs = gen_robot(&RobotParams::default()).unwrap();
        let m = &cs.model;
        assert_eq!(m.name(m.initial()), Some("(0,10,1,1)"));
        let n = m.action_id("N").unwrap();
        let c = m.choice(m.initial(), n).unwrap();
        assert_eq!(c.branches, vec![(find(m, "(0,9,1,2)"), 0.9), (find(m, "(0,8,1,1)"), 0.1)]);
    }

    #[test]
    fn requirement_is_persistent() {
        let cs = gen_robot(&RobotParams::default()).unwrap();
        let req = parse_requirement(&cs.requirement).unwrap();
        assert!(validate_persistence(&req).is_empty());
    }

    #[test]
    fn goal_is_final() {
        let cs = gen_robot(&RobotParams::default()).unwrap();
        let s = find(&cs.model, "(0,6,3,3)");
        assert!(cs.model.is_deadlock(s));
    }

    #[test]
    fn rejects_bad_params() {
        let p = RobotParams { goal: (4, 1), ..RobotParams::default() };
        assert!(gen_robot(&p).is_err());
        let p = RobotParams { obstacle_prob: 1.5, ..RobotParams::default() };
        assert!(gen_robot(&p).is_err());
    }

    #[test]
    fn deterministic() {
        let a = gen_robot(&RobotParams::grid(4, 3)).unwrap();
        let b = gen_robot(&RobotParams::grid(4, 3)).unwrap();
        assert_eq!(a.model_json(), b.model_json());
    }
}
