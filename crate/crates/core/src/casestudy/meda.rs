//! Two-droplet mixing on a micro-electrode-dot-array biochip segment.
//!
//! The `W × H` segment is split into 3×3 blocks (the last row or column of
//! blocks may be partial) and droplets are tracked at block granularity.
//! The scheduler cycles through phases
//!
//! * 0: `dispense` both droplets, or `abort`;
//! * 1: move droplet A one block (`mvA_N` … `mvA_W`, `mvA_hold`), `flush`
//!   both droplets out of the segment, or `abort`;
//! * 2: move droplet B;
//! * 3: `update`;
//! * 4: `mix` when both droplets share a block, `exit` when both have left
//!   the segment, otherwise `repeat`.
//!
//! Moving east out of the last block column leaves the segment. A move in
//! block ℓ fails with probability `p1(e_ℓ)` and a flush with `p2(e_ℓ)`,
//! where `e_ℓ` counts earlier failures in that block; a failed droplet
//! stays put and the counter goes up. A failure in a block whose counter
//! already reached `max_errors` loses the droplet: it can no longer move,
//! mix or leave. Mixed, salvaged and aborted runs end in terminal states.

use super::{explore, CaseStudy, ParamError};

pub const BLOCK: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct MedaParams {
    pub width: u32,
    pub height: u32,
    /// Dispenser cells (0-based). Droplets land within one cell of them.
    pub dispenser_a: (u32, u32),
    pub dispenser_b: (u32, u32),
    /// `p1(e) = min(move_error * (1 + e), 1)`
    pub move_error: f64,
    /// `p2(e) = min(flush_error * (1 + e), 1)`
    pub flush_error: f64,
    pub max_errors: u8,
}

impl MedaParams {
    pub fn segment(width: u32, height: u32) -> Self {
        MedaParams {
            width,
            height,
            dispenser_a: (2.min(width.saturating_sub(1)), 1.min(height.saturating_sub(1))),
            dispenser_b: (width.saturating_sub(3), height.saturating_sub(2)),
            move_error: 0.05,
            flush_error: 0.08,
            max_errors: 1,
        }
    }

    fn blocks(&self) -> (u32, u32) {
        (self.width.div_ceil(BLOCK), self.height.div_ceil(BLOCK))
    }

    pub fn check(&self) -> Result<(), ParamError> {
        if self.width < BLOCK || self.height < BLOCK {
            return Err(ParamError(format!("segment {}x{} is smaller than one {BLOCK}x{BLOCK} block", self.width, self.height)));
        }
        let (bw, bh) = self.blocks();
        if bw * bh > 16 {
            return Err(ParamError(format!("{} blocks; at most 16 are supported", bw * bh)));
        }
        for (what, (x, y)) in [("dispenser A", self.dispenser_a), ("dispenser B", self.dispenser_b)] {
            if x >= self.width || y >= self.height {
                return Err(ParamError(format!("{what} ({x}, {y}) outside the segment")));
            }
        }
        for (what, c) in [("move error", self.move_error), ("flush error", self.flush_error)] {
            if !(0.0..=1.0).contains(&c) {
                return Err(ParamError(format!("{what} coefficient {c} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

impl Default for MedaParams {
    fn default() -> Self {
        MedaParams::segment(8, 5)
    }
}

const REQUIREMENT: &str = r#"objective q0 = Pmax [ F G "mixed" ];
objective q1 = Pmax [ F G "salvaged" ];
objective q2 = Pmax [ F G "aborted" ];
context w01 : q0 -> q1 when Pmax in [0.7, 0.85);
context w02 : q0 -> q2 when Pmax < 0.7;
context w12 : q1 -> q2 when Pmax < 0.7;
initial q0;
"#;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Drop {
    At(u32, u32),
    Gone,
    Lost,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum State {
    Idle,
    Run { phase: u8, a: Drop, b: Drop, errors: Vec<u8> },
    Mixed,
    Salvaged,
    Aborted,
}

struct Dyn {
    p: MedaParams,
    bw: u32,
    bh: u32,
}

type Outcomes = Vec<((Drop, Vec<u8>), f64)>;

impl Dyn {
    fn block_index(&self, bx: u32, by: u32) -> usize {
        (by * self.bw + bx) as usize
    }

    fn p1(&self, e: u8) -> f64 {
        (self.p.move_error * (1.0 + e as f64)).min(1.0)
    }

    fn p2(&self, e: u8) -> f64 {
        (self.p.flush_error * (1.0 + e as f64)).min(1.0)
    }

    /// Block distribution of a droplet dispensed at `cell`.
    fn dispense(&self, (cx, cy): (u32, u32)) -> Vec<(Drop, f64)> {
        let mut out: Vec<(Drop, f64)> = Vec::new();
        for dx in -1i64..=1 {
            for dy in -1i64..=1 {
                let x = (cx as i64 + dx).clamp(0, self.p.width as i64 - 1) as u32;
                let y = (cy as i64 + dy).clamp(0, self.p.height as i64 - 1) as u32;
                let d = Drop::At(x / BLOCK, y / BLOCK);
                match out.iter_mut().find(|(e, _)| *e == d) {
                    Some(e) => e.1 += 1.0 / 9.0,
                    None => out.push((d, 1.0 / 9.0)),
                }
            }
        }
        out
    }

    /// Attempt on a droplet sitting in block `(bx, by)`: success moves it to
    /// `to`, failure bumps the block's counter or loses the droplet.
    fn attempt(&self, bx: u32, by: u32, to: Drop, fail: f64, errors: &[u8]) -> Outcomes {
        let i = self.block_index(bx, by);
        let mut out = Vec::new();
        if fail < 1.0 {
            out.push(((to, errors.to_vec()), 1.0 - fail));
        }
        if fail > 0.0 {
            if errors[i] < self.p.max_errors {
                let mut e = errors.to_vec();
                e[i] += 1;
                out.push(((Drop::At(bx, by), e), fail));
            } else {
                out.push(((Drop::Lost, errors.to_vec()), fail));
            }
        }
        out
    }

    /// Moves available to a droplet, by direction suffix.
    fn moves(&self, d: Drop, errors: &[u8]) -> Vec<(&'static str, Outcomes)> {
        let mut out = vec![("hold", vec![((d, errors.to_vec()), 1.0)])];
        let Drop::At(bx, by) = d else { return out };
        let fail = self.p1(errors[self.block_index(bx, by)]);
        let dirs: [(&'static str, i64, i64); 4] = [("N", 0, 1), ("S", 0, -1), ("E", 1, 0), ("W", -1, 0)];
        for (name, dx, dy) in dirs {
            let (nx, ny) = (bx as i64 + dx, by as i64 + dy);
            let to = if nx >= 0 && ny >= 0 && nx < self.bw as i64 && ny < self.bh as i64 {
                Drop::At(nx as u32, ny as u32)
            } else if name == "E" {
                Drop::Gone
            } else {
                continue;
            };
            out.push((name, self.attempt(bx, by, to, fail, errors)));
        }
        out
    }

    fn flush_one(&self, d: Drop, errors: &[u8]) -> Outcomes {
        match d {
            Drop::At(bx, by) => self.attempt(bx, by, Drop::Gone, self.p2(errors[self.block_index(bx, by)]), errors),
            _ => vec![((d, errors.to_vec()), 1.0)],
        }
    }

    fn succ(&self, s: &State) -> Vec<(&'static str, Vec<(State, f64)>)> {
        let run = |phase, a, b, errors| State::Run { phase, a, b, errors };
        match s {
            State::Idle => {
                let nblocks = (self.bw * self.bh) as usize;
                let mut dist = Vec::new();
                for (a, pa) in self.dispense(self.p.dispenser_a) {
                    for (b, pb) in self.dispense(self.p.dispenser_b) {
                        dist.push((run(1, a, b, vec![0; nblocks]), pa * pb));
                    }
                }
                vec![("dispense", dist), ("abort", vec![(State::Aborted, 1.0)])]
            }
            State::Run { phase: 1, a, b, errors } => {
                let mut out: Vec<(&'static str, Vec<(State, f64)>)> = Vec::new();
                for (dir, outs) in self.moves(*a, errors) {
                    let name = match dir {
                        "hold" => "mvA_hold",
                        "N" => "mvA_N",
                        "S" => "mvA_S",
                        "E" => "mvA_E",
                        _ => "mvA_W",
                    };
                    out.push((name, outs.into_iter().map(|((a2, e), p)| (run(2, a2, *b, e), p)).collect()));
                }
                let mut flush = Vec::new();
                for ((a2, e1), pa) in self.flush_one(*a, errors) {
                    for ((b2, e2), pb) in self.flush_one(*b, &e1) {
                        flush.push((run(3, a2, b2, e2), pa * pb));
                    }
                }
                out.push(("flush", flush));
                out.push(("abort", vec![(State::Aborted, 1.0)]));
                out
            }
            State::Run { phase: 2, a, b, errors } => self
                .moves(*b, errors)
                .into_iter()
                .map(|(dir, outs)| {
                    let name = match dir {
                        "hold" => "mvB_hold",
                        "N" => "mvB_N",
                        "S" => "mvB_S",
                        "E" => "mvB_E",
                        _ => "mvB_W",
                    };
                    (name, outs.into_iter().map(|((b2, e), p)| (run(3, *a, b2, e), p)).collect())
                })
                .collect(),
            State::Run { phase: 3, a, b, errors } => vec![("update", vec![(run(4, *a, *b, errors.clone()), 1.0)])],
            State::Run { a, b, errors, .. } => {
                if matches!((a, b), (Drop::At(..), Drop::At(..))) && a == b {
                    vec![("mix", vec![(State::Mixed, 1.0)])]
                } else if *a == Drop::Gone && *b == Drop::Gone {
                    vec![("exit", vec![(State::Salvaged, 1.0)])]
                } else {
                    vec![("repeat", vec![(run(1, *a, *b, errors.clone()), 1.0)])]
                }
            }
            State::Mixed | State::Salvaged | State::Aborted => Vec::new(),
        }
    }
}

fn drop_name(d: Drop) -> String {
    match d {
        Drop::At(x, y) => format!("{x}{y}"),
        Drop::Gone => "out".into(),
        Drop::Lost => "lost".into(),
    }
}

pub fn gen_meda(params: &MedaParams) -> Result<CaseStudy, ParamError> {
    params.check()?;
    let (bw, bh) = params.blocks();
    let dynamics = Dyn { p: params.clone(), bw, bh };
    let labels = |s: &State| match s {
        State::Mixed => vec!["mixed"],
        State::Salvaged => vec!["salvaged"],
        State::Aborted => vec!["aborted"],
        State::Run { phase: 4, a: a @ Drop::At(..), b, .. } if a == b => vec!["inBlock"],
        _ => Vec::new(),
    };
    let name = |s: &State| match s {
        State::Idle => "idle".to_string(),
        State::Run { phase, a, b, errors } => {
            let e: String = errors.iter().map(|c| c.to_string()).collect();
            format!("{phase}:A{}:B{}:e{e}", drop_name(*a), drop_name(*b))
        }
        State::Mixed => "mixed".into(),
        State::Salvaged => "salvaged".into(),
        State::Aborted => "aborted".into(),
    };
    let actions = [
        "dispense", "abort", "mvA_N", "mvA_S", "mvA_E", "mvA_W", "mvA_hold", "mvB_N", "mvB_S", "mvB_E", "mvB_W", "mvB_hold", "flush",
        "update", "mix", "exit", "repeat",
    ];
    let model = explore(State::Idle, &actions, &["mixed", "salvaged", "aborted", "inBlock"], |s| dynamics.succ(s), labels, name);
    Ok(CaseStudy { model, requirement: REQUIREMENT.to_string() })
}
