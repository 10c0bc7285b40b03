use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{BondTargets, TimeLattice};
use crate::basis::lattice_distance;
use crate::calib::assign::bond_signs;
use crate::calib::lp::{nnls, simplex_min};
use crate::calib::pauli::PauliAssignment;
use crate::calib::schedule::{PulseOp, PulseSchedule, Stage};
use crate::error::{Error, Result};
use crate::model::DotArray;

/// Per-bond phases to reach, with the bond velocities and endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub n_qubits: usize,
    pub bonds: Vec<(usize, usize)>,
    pub phases: Vec<f64>,
    pub velocities: Vec<f64>,
}

impl CalibrationTarget {
    pub fn new(array: &DotArray, targets: &BondTargets) -> Result<Self> {
        if targets.phases.len() != array.bonds().len() {
            return Err(Error::DimensionMismatch {
                expected: array.bonds().len(),
                found: targets.phases.len(),
            });
        }
        let target = CalibrationTarget {
            n_qubits: array.n_qubits(),
            bonds: array.bonds().iter().map(|b| b.endpoints()).collect(),
            phases: targets.phases.clone(),
            velocities: array.velocities(),
        };
        for w in 0..target.bonds.len() {
            if target.velocities[w] == 0.0
                && lattice_distance(target.phases[w], std::f64::consts::PI) > 1e-9
            {
                let (j, k) = target.bonds[w];
                return Err(Error::NoBondVelocity {
                    j,
                    k,
                    phase: target.phases[w],
                });
            }
        }
        Ok(target)
    }

    /// The same phase on every bond.
    pub fn uniform(array: &DotArray, phase: f64) -> Result<Self> {
        Self::new(
            array,
            &BondTargets {
                phases: vec![phase; array.bonds().len()],
            },
        )
    }

    fn moving(&self) -> Vec<usize> {
        (0..self.bonds.len())
            .filter(|&w| self.velocities[w] != 0.0)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalOptions {
    /// Offsets `m_w` range over `-offset_bound..=offset_bound`.
    pub offset_bound: i64,
    pub lattice: TimeLattice,
    /// Relative residual accepted from the non-negative solve.
    pub tol: f64,
}

impl Default for IntervalOptions {
    fn default() -> Self {
        IntervalOptions {
            offset_bound: 8,
            lattice: TimeLattice::HalfTurn,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSolution {
    pub schedule: PulseSchedule,
    /// Duration spent in each supplied frame.
    pub durations: Vec<f64>,
    /// Lattice offset per bond (zero for still bonds).
    pub offsets: Vec<i64>,
    pub total_time: f64,
    /// Largest per-bond phase error of the schedule.
    pub residual: f64,
}

struct Search<'a> {
    signs: &'a DMatrix<f64>,
    rows: &'a [usize],
    base: Vec<f64>,
    step: Vec<f64>,
    tol: f64,
    order: Vec<Vec<i64>>,
    best: Option<(f64, Vec<i64>, DVector<f64>)>,
    best_residual: f64,
}

impl Search<'_> {
    fn rhs(&self, i: usize, m: i64) -> f64 {
        self.base[i] + m as f64 * self.step[i]
    }

    fn visit(&mut self, offsets: &mut Vec<i64>, lower: f64) {
        let i = offsets.len();
        if i == self.rows.len() {
            self.leaf(offsets);
            return;
        }
        for idx in 0..self.order[i].len() {
            let m = self.order[i][idx];
            let lb = lower.max(self.rhs(i, m).abs());
            if let Some((best, _, _)) = &self.best {
                if lb > best * (1.0 + 1e-9) {
                    continue;
                }
            }
            offsets.push(m);
            self.visit(offsets, lb);
            offsets.pop();
        }
    }

    fn leaf(&mut self, offsets: &[i64]) {
        let b = DVector::from_iterator(
            offsets.len(),
            offsets.iter().enumerate().map(|(i, &m)| self.rhs(i, m)),
        );
        let (x, r) = nnls(self.signs, &b);
        let scale = 1.0 + b.amax();
        self.best_residual = self.best_residual.min(r / scale);
        if r > self.tol * scale {
            return;
        }
        let ones = vec![1.0; self.signs.ncols()];
        let x = simplex_min(&ones, self.signs, b.as_slice())
            .filter(|y| (self.signs * y - &b).amax() <= self.tol * scale)
            .unwrap_or(x);
        let total = x.sum();
        let better = match &self.best {
            None => true,
            Some((t, o, y)) => {
                let support = |v: &DVector<f64>| -> Vec<usize> {
                    (0..v.len()).filter(|&c| v[c] > self.tol * scale).collect()
                };
                let key = (support(&x), offsets);
                total < t * (1.0 - 1e-9)
                    || (total <= t * (1.0 + 1e-9) && key < (support(y), o.as_slice()))
            }
        };
        if better {
            self.best = Some((total, offsets.to_vec(), x));
        }
    }
}

/// Finds non-negative stage durations, one per frame, with
/// `sum_n a_w^(n) tau_n Delta_w` on each bond's target lattice, minimizing
/// the total time over bounded per-bond offsets.
pub fn solve_intervals(
    target: &CalibrationTarget,
    frames: &[PauliAssignment],
    opts: &IntervalOptions,
) -> Result<CalibrationSolution> {
    let n = target.n_qubits;
    if frames.is_empty() {
        return Err(Error::InvalidSchedule("no frames to schedule".into()));
    }
    if let Some(f) = frames.iter().find(|f| f.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.len(),
        });
    }
    let rows = target.moving();
    let sign_of = |f: &PauliAssignment, w: usize| {
        let (j, k) = target.bonds[w];
        f.sig(j) * f.sig(k)
    };
    // Frames with identical sign columns are interchangeable; keep the first.
    let mut distinct: Vec<usize> = Vec::new();
    for p in 0..frames.len() {
        let same = |q: &usize| {
            rows.iter()
                .all(|&w| sign_of(&frames[*q], w) == sign_of(&frames[p], w))
        };
        if !distinct.iter().any(same) {
            distinct.push(p);
        }
    }
    let signs = DMatrix::from_fn(rows.len(), distinct.len(), |i, c| {
        sign_of(&frames[distinct[c]], rows[i])
    });
    let period = opts.lattice.period();
    let base: Vec<f64> = rows
        .iter()
        .map(|&w| opts.lattice.target(target.phases[w]) / target.velocities[w])
        .collect();
    let step: Vec<f64> = rows
        .iter()
        .map(|&w| period / target.velocities[w])
        .collect();
    let order = (0..rows.len())
        .map(|i| {
            let mut ms: Vec<i64> = (-opts.offset_bound..=opts.offset_bound).collect();
            ms.sort_by(|&a, &b| {
                let (ra, rb) = (
                    (base[i] + a as f64 * step[i]).abs(),
                    (base[i] + b as f64 * step[i]).abs(),
                );
                ra.total_cmp(&rb).then(a.cmp(&b))
            });
            ms
        })
        .collect();
    let mut search = Search {
        signs: &signs,
        rows: &rows,
        base,
        step,
        tol: opts.tol,
        order,
        best: None,
        best_residual: f64::INFINITY,
    };
    if rows.is_empty() {
        search.best = Some((0.0, Vec::new(), DVector::zeros(distinct.len())));
    } else {
        search.visit(&mut Vec::with_capacity(rows.len()), 0.0);
    }
    let Some((total, moving_offsets, x)) = search.best else {
        return Err(Error::Infeasible {
            best_residual: search.best_residual,
        });
    };
    let mut offsets = vec![0; target.bonds.len()];
    for (i, &w) in rows.iter().enumerate() {
        offsets[w] = moving_offsets[i];
    }
    let mut durations = vec![0.0; frames.len()];
    let floor = opts.tol * (1.0 + x.amax());
    for (c, &p) in distinct.iter().enumerate() {
        durations[p] = if x[c] > floor { x[c] } else { 0.0 };
    }
    let schedule = build_schedule(n, frames, &durations)?;
    let residual = schedule_residual(target, &schedule, opts.lattice);
    Ok(CalibrationSolution {
        schedule,
        durations,
        offsets,
        total_time: total,
        residual,
    })
}

/// Stages for the frames with positive duration, joined by X pulses on the
/// dots whose flip state changes; a zero-length opening stage enters the
/// first frame when it is not the identity.
pub fn build_schedule(
    n_qubits: usize,
    frames: &[PauliAssignment],
    durations: &[f64],
) -> Result<PulseSchedule> {
    let kept: Vec<(usize, f64)> = durations
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, t)| t > 0.0)
        .collect();
    let kept = if kept.is_empty() {
        vec![(0, 0.0)]
    } else {
        kept
    };
    let mut stages = Vec::new();
    let mut current = PauliAssignment::identity(n_qubits);
    for (p, tau) in kept {
        let change = transition(&current, &frames[p]);
        if !change.is_empty() {
            match stages.last_mut() {
                Some(Stage { pulse, .. }) => *pulse = change,
                None => stages.push(Stage {
                    tau: 0.0,
                    pulse: change,
                }),
            }
        }
        current = frames[p].clone();
        stages.push(Stage::free(tau));
    }
    PulseSchedule::new(n_qubits, stages)
}

fn transition(from: &PauliAssignment, to: &PauliAssignment) -> Vec<PulseOp> {
    (0..from.len())
        .filter(|&j| from.get(j).flips() != to.get(j).flips())
        .map(|dot| PulseOp {
            dot,
            pauli: crate::calib::pauli::Pauli::X,
        })
        .collect()
}

/// Largest per-bond distance of the accumulated phase from its target lattice.
pub fn schedule_residual(
    target: &CalibrationTarget,
    schedule: &PulseSchedule,
    lattice: TimeLattice,
) -> f64 {
    let frames = schedule.frames();
    (0..target.bonds.len())
        .map(|w| {
            let (j, k) = target.bonds[w];
            let acc: f64 = schedule
                .stages()
                .iter()
                .zip(&frames)
                .map(|(s, q)| s.tau * q.sig(j) * q.sig(k) * target.velocities[w])
                .sum();
            lattice_distance(acc - lattice.target(target.phases[w]), lattice.period())
        })
        .fold(0.0, f64::max)
}

/// Per-bond signs of every frame, bonds by frames.
pub fn frame_sign_matrix(array: &DotArray, frames: &[PauliAssignment]) -> DMatrix<f64> {
    let cols: Vec<Vec<i8>> = frames.iter().map(|f| bond_signs(array, f)).collect();
    DMatrix::from_fn(array.bonds().len(), frames.len(), |w, p| cols[p][w] as f64)
}
