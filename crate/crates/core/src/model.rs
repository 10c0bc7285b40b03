//! Device model: dots, tunnel-coupled bonds and their first-order phase rates.
//!
//! Energies are angular frequencies with `hbar = 1`; times are in the inverse
//! unit. A bond stores its exchange energy together with the normalized
//! spin-conserved (`t`) and spin-flipped (`s`) tunneling amplitudes, from
//! which the phase-rate quadruple `(S, T, T, S)` and the effective velocity
//! `T - S` follow.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{bit, dim};
use crate::error::{Error, Result};

/// Tolerance on `|t|^2 + |s|^2 = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A single quantum dot hosting one spin qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dot {
    pub id: usize,
    pub zeeman: f64,
    #[serde(default, rename = "mu", skip_serializing_if = "Option::is_none")]
    pub chem_potential: Option<f64>,
}

impl Dot {
    pub fn new(id: usize, zeeman: f64) -> Self {
        Dot {
            id,
            zeeman,
            chem_potential: None,
        }
    }
}

/// A tunnel-coupled pair of dots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    j: usize,
    k: usize,
    exchange: f64,
    t: Complex64,
    s: Complex64,
}

impl Bond {
    /// Builds a bond from explicit amplitudes.
    ///
    /// Endpoints given as `j > k` are reordered; the spin-conserved amplitude
    /// becomes `-conj(t)` so that the entangled bond state is unchanged.
    pub fn new(j: usize, k: usize, exchange: f64, t: Complex64, s: Complex64) -> Result<Self> {
        if j == k {
            return Err(Error::InvalidArray(format!(
                "bond ({j},{k}) is a self-loop"
            )));
        }
        if !exchange.is_finite() || exchange < 0.0 {
            return Err(Error::InvalidArray(format!(
                "bond ({j},{k}) has invalid exchange energy {exchange}"
            )));
        }
        let deviation = t.norm_sqr() + s.norm_sqr() - 1.0;
        if deviation.abs() > NORMALIZATION_TOL || !deviation.is_finite() {
            return Err(Error::NotNormalized { j, k, deviation });
        }
        let (j, k, t) = if j < k { (j, k, t) } else { (k, j, -t.conj()) };
        Ok(Bond {
            j,
            k,
            exchange,
            t,
            s,
        })
    }

    /// Builds a bond from the spin-orbit angle and field angle.
    pub fn from_soi(
        j: usize,
        k: usize,
        exchange: f64,
        gamma_so: f64,
        theta_b: f64,
    ) -> Result<Self> {
        let (t, s) = tunneling_from_soi(gamma_so, theta_b);
        Bond::new(j, k, exchange, t, s)
    }

    /// Bond without spin-orbit interaction (`t = 1`, `s = 0`).
    pub fn spin_conserving(j: usize, k: usize, exchange: f64) -> Result<Self> {
        Bond::new(
            j,
            k,
            exchange,
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    /// Bond whose amplitudes have the given tunneling fractions, with phases
    /// `t = e^{i eta} sqrt(|t|^2)` and `s = i sqrt(1 - |t|^2)`.
    pub fn with_fraction(
        j: usize,
        k: usize,
        exchange: f64,
        t_fraction: f64,
        eta: f64,
    ) -> Result<Self> {
        let t = Complex64::from_polar(t_fraction.sqrt(), eta);
        let s = Complex64::new(0.0, (1.0 - t_fraction).max(0.0).sqrt());
        Bond::new(j, k, exchange, t, s)
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.j, self.k)
    }

    pub fn contains(&self, dot: usize) -> bool {
        self.j == dot || self.k == dot
    }

    pub fn exchange(&self) -> f64 {
        self.exchange
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    /// Spin-flipped strength `S = J |s|^2 / 2`.
    pub fn spin_flipped_strength(&self) -> f64 {
        0.5 * self.exchange * self.s.norm_sqr()
    }

    /// Spin-conserved strength `T = J |t|^2 / 2`.
    pub fn spin_conserved_strength(&self) -> f64 {
        0.5 * self.exchange * self.t.norm_sqr()
    }

    /// Effective bond velocity `T - S`.
    pub fn velocity(&self) -> f64 {
        effective_velocity(self)
    }

    /// Amplitudes of the entangled bond state in the `(uu, ud, du, dd)` basis
    /// of `(j, k)`.
    pub fn entangled_state(&self) -> [Complex64; 4] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        [
            self.s.conj() * r,
            self.t.conj() * r,
            -self.t * r,
            self.s * r,
        ]
    }

    /// Bond with the two tunneling channels exchanged, `(t, s) -> (s e^{i phi}, t e^{i phi})`.
    pub fn conjugated(&self, phase: f64) -> Bond {
        let p = Complex64::from_polar(1.0, phase);
        Bond {
            t: self.s * p,
            s: self.t * p,
            ..*self
        }
    }

    /// Same bond with the exchange energy multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Bond {
        Bond {
            exchange: self.exchange * factor,
            ..*self
        }
    }
}

/// A simple graph of dots and bonds.
#[derive(Debug, Clone, PartialEq)]
pub struct DotArray {
    dots: Vec<Dot>,
    bonds: Vec<Bond>,
}

impl DotArray {
    pub fn new(mut dots: Vec<Dot>, bonds: Vec<Bond>) -> Result<Self> {
        if dots.len() < 2 {
            return Err(Error::InvalidArray(format!(
                "need at least 2 dots, got {}",
                dots.len()
            )));
        }
        dots.sort_by_key(|d| d.id);
        for (i, d) in dots.iter().enumerate() {
            if d.id != i {
                return Err(Error::InvalidArray(format!(
                    "dot ids must be 0..{} without gaps or repeats",
                    dots.len()
                )));
            }
            if !d.zeeman.is_finite() || d.zeeman <= 0.0 {
                return Err(Error::InvalidArray(format!(
                    "dot {} has non-positive Zeeman energy {}",
                    d.id, d.zeeman
                )));
            }
        }
        let mut seen = HashSet::new();
        for b in &bonds {
            let (j, k) = b.endpoints();
            if k >= dots.len() {
                return Err(Error::InvalidArray(format!(
                    "bond ({j},{k}) references a missing dot"
                )));
            }
            if !seen.insert((j, k)) {
                return Err(Error::InvalidArray(format!("duplicate bond ({j},{k})")));
            }
        }
        Ok(DotArray { dots, bonds })
    }

    /// Dots with the given Zeeman energies, ids in order.
    pub fn from_zeeman(zeeman: &[f64], bonds: Vec<Bond>) -> Result<Self> {
        let dots = zeeman
            .iter()
            .enumerate()
            .map(|(id, &z)| Dot::new(id, z))
            .collect();
        DotArray::new(dots, bonds)
    }

    pub fn n_qubits(&self) -> usize {
        self.dots.len()
    }

    pub fn dots(&self) -> &[Dot] {
        &self.dots
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn zeeman(&self) -> Vec<f64> {
        self.dots.iter().map(|d| d.zeeman).collect()
    }

    /// Effective velocities of all bonds, in bond order.
    pub fn velocities(&self) -> Vec<f64> {
        self.bonds.iter().map(Bond::velocity).collect()
    }

    /// Index of the bond joining `a` and `b`, if any.
    pub fn bond_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.bonds.iter().position(|w| w.endpoints() == key)
    }

    pub fn degree(&self, dot: usize) -> usize {
        self.bonds.iter().filter(|b| b.contains(dot)).count()
    }

    pub fn max_exchange(&self) -> f64 {
        self.bonds.iter().map(Bond::exchange).fold(0.0, f64::max)
    }

    /// Copy with every exchange energy multiplied by `factor`.
    pub fn with_exchange_scaled(&self, factor: f64) -> DotArray {
        DotArray {
            dots: self.dots.clone(),
            bonds: self.bonds.iter().map(|b| b.scaled(factor)).collect(),
        }
    }

    /// Copy with the bond list replaced (endpoints are revalidated).
    pub fn with_bonds(&self, bonds: Vec<Bond>) -> Result<DotArray> {
        DotArray::new(self.dots.clone(), bonds)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: ArrayWire = serde_json::from_str(text)?;
        wire.into_array()
    }

    pub fn to_json(&self) -> String {
        let wire = ArrayWire {
            dots: self.dots.clone(),
            bonds: self
                .bonds
                .iter()
                .map(|b| BondWire {
                    j: b.j,
                    k: b.k,
                    exchange: b.exchange,
                    t: Some([b.t.re, b.t.im]),
                    s: Some([b.s.re, b.s.im]),
                    gamma_so: None,
                    theta_b: None,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("array serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrayWire {
    dots: Vec<Dot>,
    bonds: Vec<BondWire>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BondWire {
    j: usize,
    k: usize,
    #[serde(rename = "J")]
    exchange: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma_so: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta_b: Option<f64>,
}

impl ArrayWire {
    fn into_array(self) -> Result<DotArray> {
        let bonds = self
            .bonds
            .into_iter()
            .map(|b| match (b.t, b.s, b.gamma_so, b.theta_b) {
                (Some(t), Some(s), None, None) => Bond::new(
                    b.j,
                    b.k,
                    b.exchange,
                    Complex64::new(t[0], t[1]),
                    Complex64::new(s[0], s[1]),
                ),
                (None, None, Some(g), Some(th)) => Bond::from_soi(b.j, b.k, b.exchange, g, th),
                _ => Err(Error::InvalidArray(format!(
                    "bond ({},{}) needs either (t, s) or (gamma_so, theta_b), not a mix",
                    b.j, b.k
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        DotArray::new(self.dots, bonds)
    }
}

/// Tunneling amplitudes for direct exchange with scalar g-factors.
pub fn tunneling_from_soi(gamma_so: f64, theta_b: f64) -> (Complex64, Complex64) {
    let (sg, cg) = gamma_so.sin_cos();
    let (sb, cb) = theta_b.sin_cos();
    let t = Complex64::new(cg, -sg * cb);
    let s = Complex64::new(0.0, -sg * sb);
    (t, s)
}

/// Exchange energy from virtual tunneling through the doubly occupied states.
pub fn exchange_energy(t_amp: f64, u: f64, mu_j: f64, mu_k: f64) -> Result<f64> {
    let d1 = u - mu_j + mu_k;
    let d2 = u - mu_k + mu_j;
    for d in [d1, d2] {
        if d.abs() <= 1e-9 * u.abs() {
            return Err(Error::DegenerateChargeState {
                denominator: d,
                charging: u,
            });
        }
    }
    Ok(0.5 * t_amp * (1.0 / d1 + 1.0 / d2))
}

/// Phase rates `(S, T, T, S)` of a bond on its own four-dimensional subspace.
pub fn bond_vector(bond: &Bond) -> [f64; 4] {
    let s = bond.spin_flipped_strength();
    let t = bond.spin_conserved_strength();
    [s, t, t, s]
}

/// Effective bond velocity `T - S = J (|t|^2 - |s|^2) / 2`.
pub fn effective_velocity(bond: &Bond) -> f64 {
    0.5 * bond.exchange * (bond.t.norm_sqr() - bond.s.norm_sqr())
}

/// First-order phase rates of every basis state (diagonal of the summed bond
/// projectors, scaled by their exchange energies).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRateVector(pub Vec<f64>);

impl PhaseRateVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First half, indexed by the remaining qubits with qubit 0 up.
    pub fn reduced(&self) -> &[f64] {
        &self.0[..self.0.len() / 2]
    }

    /// Whether the entry at each index equals the entry at the bitwise complement.
    pub fn is_reflective(&self, tol: f64) -> bool {
        let last = self.0.len() - 1;
        self.0
            .iter()
            .enumerate()
            .all(|(n, &v)| (v - self.0[last - n]).abs() <= tol)
    }
}

/// Embeds per-bond quadruples into the full register.
pub(crate) fn embed_bond_quads<F>(n_qubits: usize, bonds: &[Bond], quad: F) -> Vec<f64>
where
    F: Fn(&Bond) -> [f64; 4],
{
    let quads: Vec<_> = bonds.iter().map(|b| (b.endpoints(), quad(b))).collect();
    (0..dim(n_qubits))
        .map(|n| {
            quads
                .iter()
                .map(|&((j, k), q)| q[2 * bit(n, j, n_qubits) + bit(n, k, n_qubits)])
                .sum()
        })
        .collect()
}

/// Grid vector: the Kronecker sum of every bond vector.
pub fn grid_vector(array: &DotArray) -> PhaseRateVector {
    PhaseRateVector(embed_bond_quads(
        array.n_qubits(),
        array.bonds(),
        bond_vector,
    ))
}

/// Monotone lookup from spin-orbit length to spin-orbit angle.
///
/// The microscopic relation depends on the dot geometry and is supplied as
/// data; values between samples are linearly interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoiTable {
    /// `(x_so, gamma_so)` samples sorted by `x_so`.
    points: Vec<(f64, f64)>,
}

impl SoiTable {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArray(
                "SOI table needs at least two samples".into(),
            ));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let increasing = points
            .windows(2)
            .all(|w| w[1].1 > w[0].1 && w[1].0 > w[0].0);
        let decreasing = points
            .windows(2)
            .all(|w| w[1].1 < w[0].1 && w[1].0 > w[0].0);
        if !(increasing || decreasing) {
            return Err(Error::InvalidArray(
                "SOI table must be strictly monotone".into(),
            ));
        }
        Ok(SoiTable { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Spin-orbit angle at spin-orbit length `x_so`, `None` outside the table.
    pub fn gamma_at(&self, x_so: f64) -> Option<f64> {
        interpolate(&self.points, x_so)
    }

    /// Spin-orbit length realizing `gamma_so`, `None` outside the table.
    pub fn x_at(&self, gamma_so: f64) -> Option<f64> {
        let mut inverse: Vec<(f64, f64)> = self.points.iter().map(|&(x, g)| (g, x)).collect();
        inverse.sort_by(|a, b| a.0.total_cmp(&b.0));
        interpolate(&inverse, gamma_so)
    }

    /// `(|t|^2, |s|^2)` at `x_so` for field angle `theta_b`.
    pub fn fractions_at(&self, x_so: f64, theta_b: f64) -> Option<(f64, f64)> {
        let (t, s) = tunneling_from_soi(self.gamma_at(x_so)?, theta_b);
        Some((t.norm_sqr(), s.norm_sqr()))
    }

    /// Spin-orbit length where the bond velocity vanishes (the "off" point).
    pub fn off_point(&self, theta_b: f64) -> Option<f64> {
        let g = off_point_gamma(theta_b)?;
        self.x_at(g).or_else(|| self.x_at(std::f64::consts::PI - g))
    }
}

fn interpolate(points: &[(f64, f64)], x: f64) -> Option<f64> {
    let first = points.first()?;
    let last = points.last()?;
    if x < first.0 || x > last.0 {
        return None;
    }
    let i = points
        .partition_point(|p| p.0 <= x)
        .clamp(1, points.len() - 1);
    let (x0, y0) = points[i - 1];
    let (x1, y1) = points[i];
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

/// Smallest spin-orbit angle with `|t| = |s|` for field angle `theta_b`.
///
/// Equal channels need `sin^2(gamma) sin^2(theta) = 1/2`, which has a solution
/// only for `pi/4 <= theta_b <= 3pi/4`.
pub fn off_point_gamma(theta_b: f64) -> Option<f64> {
    let sb = theta_b.sin().abs();
    let arg = std::f64::consts::FRAC_1_SQRT_2 / sb;
    if arg > 1.0 + 1e-15 || !arg.is_finite() {
        None
    } else {
        Some(arg.min(1.0).asin())
    }
}
