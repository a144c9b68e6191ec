//! Position densities, Wigner functions and moments.
//!
//! Every state is reduced to a list of weighted dyads `w |α⟩⟨β|`. For one
//! dyad, with `z = (x + ip)/√2`,
//!
//! ```text
//! W(x, p) = (1/π) ⟨β|α⟩ exp(−2(z̄ − β̄)(z − α))
//! ```
//!
//! and the first two quadrature moments follow from `a|α⟩ = α|α⟩`.

use std::f64::consts::{FRAC_1_PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherent::{CoherentLabel, SuperposedState};
use crate::decoherence::DyadEnsemble;
use crate::error::{Error, Result};

/// Relative change in negativity volume under 2× refinement that flags a grid
/// as too coarse.
pub const GRID_REFINEMENT_TOLERANCE: f64 = 0.05;

/// Margin in quadrature units kept between every label centre and the grid edge.
pub const GRID_MARGIN: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl Default for PhaseSpaceGrid {
    fn default() -> Self {
        Self { x_min: -6.0, x_max: 6.0, p_min: -6.0, p_max: 6.0, nx: 201, np: 201 }
    }
}

impl PhaseSpaceGrid {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64, nx: usize, np: usize) -> Result<Self> {
        let g = Self { x_min, x_max, p_min, p_max, nx, np };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.p_min, self.p_max].iter().all(|v| v.is_finite());
        if !finite || !(self.x_min < self.x_max) || !(self.p_min < self.p_max) {
            return Err(Error::InvalidParameter(format!("grid bounds out of order: {self}")));
        }
        if self.nx < 2 || self.np < 2 {
            return Err(Error::InvalidParameter(format!("grid needs at least 2 points per axis: {self}")));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn p(&self, k: usize) -> f64 {
        self.p_min + k as f64 * self.dp()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        (0..self.np).map(|k| self.p(k)).collect()
    }

    /// Same box, spacing halved.
    pub fn refined(&self) -> Self {
        Self { nx: 2 * self.nx - 1, np: 2 * self.np - 1, ..*self }
    }

    /// Grow the box, at unchanged spacing, until every label centre sits at
    /// least [`GRID_MARGIN`] inside it. Returns the grid and whether it changed.
    pub fn covering<'a>(&self, labels: impl IntoIterator<Item = &'a CoherentLabel>) -> (Self, bool) {
        let (dx, dp) = (self.dx(), self.dp());
        let mut g = *self;
        for l in labels {
            let (cx, cp) = l.phase_space_centre();
            g.x_min = g.x_min.min(cx - GRID_MARGIN);
            g.x_max = g.x_max.max(cx + GRID_MARGIN);
            g.p_min = g.p_min.min(cp - GRID_MARGIN);
            g.p_max = g.p_max.max(cp + GRID_MARGIN);
        }
        if g == *self {
            return (g, false);
        }
        g.nx = ((g.x_max - g.x_min) / dx).ceil() as usize + 1;
        g.np = ((g.p_max - g.p_min) / dp).ceil() as usize + 1;
        g.x_max = g.x_min + (g.nx - 1) as f64 * dx;
        g.p_max = g.p_min + (g.np - 1) as f64 * dp;
        (g, true)
    }
}

impl fmt::Display for PhaseSpaceGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.x_min, self.x_max, self.p_min, self.p_max, self.nx, self.np)
    }
}

/// Parses `xmin,xmax,pmin,pmax,nx,np`.
impl FromStr for PhaseSpaceGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::Config(format!("grid needs 6 comma-separated fields, got {s:?}")));
        }
        let float = |t: &str| t.parse::<f64>().map_err(|_| Error::Config(format!("bad grid bound {t:?}")));
        let count = |t: &str| t.parse::<usize>().map_err(|_| Error::Config(format!("bad grid count {t:?}")));
        Self::new(
            float(parts[0])?,
            float(parts[1])?,
            float(parts[2])?,
            float(parts[3])?,
            count(parts[4])?,
            count(parts[5])?,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    ProbabilityDensity,
    Wigner,
}

/// Samples over a grid. Densities hold `nx` values; Wigner fields hold
/// `nx·np` values with `values[i·np + k] = W(xᵢ, pₖ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub grid: PhaseSpaceGrid,
    pub kind: FieldKind,
    pub values: Vec<f64>,
    /// Largest discarded imaginary part.
    pub imag_residue: f64,
}

impl GridField {
    pub fn at(&self, i: usize, k: usize) -> f64 {
        match self.kind {
            FieldKind::ProbabilityDensity => self.values[i],
            FieldKind::Wigner => self.values[i * self.grid.np + k],
        }
    }

    /// Riemann sum over the grid.
    pub fn integral(&self) -> f64 {
        let s: f64 = self.values.iter().sum();
        match self.kind {
            FieldKind::ProbabilityDensity => s * self.grid.dx(),
            FieldKind::Wigner => s * self.grid.dx() * self.grid.dp(),
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(x, p)` of the largest sample; `p` is 0 for densities.
    pub fn argmax(&self) -> (f64, f64) {
        let (idx, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        match self.kind {
            FieldKind::ProbabilityDensity => (self.grid.x(idx), 0.0),
            FieldKind::Wigner => (self.grid.x(idx / self.grid.np), self.grid.p(idx % self.grid.np)),
        }
    }

    /// `∫∫ max(0, −W) dx dp`.
    pub fn negativity_volume(&self) -> f64 {
        let s: f64 = self.values.iter().map(|&w| (-w).max(0.0)).sum();
        s * self.grid.dx() * self.grid.dp()
    }

    /// `∫ W(x, p) dp` sampled at the grid's x values.
    pub fn x_marginal(&self) -> Vec<f64> {
        assert_eq!(self.kind, FieldKind::Wigner);
        let dp = self.grid.dp();
        self.values.chunks(self.grid.np).map(|row| row.iter().sum::<f64>() * dp).collect()
    }
}

/// One weighted dyad `weight · |ket⟩⟨bra|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dyad {
    pub weight: C64,
    pub ket: CoherentLabel,
    pub bra: CoherentLabel,
}

impl Dyad {
    /// `ln⟨bra|ket⟩`.
    fn ln_overlap(&self) -> C64 {
        self.bra.ln_overlap(&self.ket)
    }

    /// `Tr(|ket⟩⟨bra|) = ⟨bra|ket⟩`, times the weight.
    pub fn trace(&self) -> C64 {
        self.weight * self.ln_overlap().exp()
    }

    /// `weight · W_{|ket⟩⟨bra|}(x, p)`.
    pub fn wigner(&self, x: f64, p: f64) -> C64 {
        let z = C64::new(x, p) / SQRT_2;
        let arg = self.ln_overlap() - 2.0 * (z.conj() - self.bra.amplitude.conj()) * (z - self.ket.amplitude);
        self.weight * arg.exp() * FRAC_1_PI
    }

    /// `weight · ⟨x|ket⟩⟨bra|x⟩`.
    pub fn density(&self, x: f64) -> C64 {
        self.weight * self.ket.wavefunction(x) * self.bra.wavefunction(x).conj()
    }
}

/// Anything that can be written as a finite sum of coherent dyads.
pub trait PhaseSpaceSource {
    fn dyads(&self) -> Vec<Dyad>;

    /// Labels that carry weight; used to size grids.
    fn support(&self) -> Vec<CoherentLabel> {
        let mut out: Vec<CoherentLabel> = Vec::new();
        for d in self.dyads() {
            for l in [d.ket, d.bra] {
                if !out.iter().any(|o| o.amplitude == l.amplitude) {
                    out.push(l);
                }
            }
        }
        out
    }
}

impl PhaseSpaceSource for SuperposedState {
    fn dyads(&self) -> Vec<Dyad> {
        let c = self.components();
        c.iter()
            .flat_map(|a| {
                c.iter().map(move |b| Dyad {
                    weight: a.coefficient * b.coefficient.conj(),
                    ket: a.label,
                    bra: b.label,
                })
            })
            .collect()
    }
}

impl PhaseSpaceSource for DyadEnsemble {
    fn dyads(&self) -> Vec<Dyad> {
        let chain = self.chain();
        DyadEnsemble::dyads(self)
            .map(|(j, k, w)| Dyad { weight: w, ket: chain.label(j), bra: chain.label(k) })
            .collect()
    }
}

/// `⟨x|ρ|x⟩` on the grid's x samples.
pub fn position_density<S: PhaseSpaceSource + ?Sized>(source: &S, grid: &PhaseSpaceGrid) -> GridField {
    let dyads = source.dyads();
    let samples: Vec<C64> = grid
        .xs()
        .par_iter()
        .map(|&x| dyads.iter().map(|d| d.density(x)).sum())
        .collect();
    let imag_residue = samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    GridField {
        grid: *grid,
        kind: FieldKind::ProbabilityDensity,
        values: samples.iter().map(|z| z.re).collect(),
        imag_residue,
    }
}

fn wigner_field(dyads: &[Dyad], grid: &PhaseSpaceGrid) -> GridField {
    let ps = grid.ps();
    let rows: Vec<(Vec<f64>, f64)> = grid
        .xs()
        .par_iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(ps.len());
            let mut resid: f64 = 0.0;
            for &p in &ps {
                let w: C64 = dyads.iter().map(|d| d.wigner(x, p)).sum();
                resid = resid.max(w.im.abs());
                row.push(w.re);
            }
            (row, resid)
        })
        .collect();
    let imag_residue = rows.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    GridField {
        grid: *grid,
        kind: FieldKind::Wigner,
        values: rows.into_iter().flat_map(|(r, _)| r).collect(),
        imag_residue,
    }
}

pub fn wigner_pure(state: &SuperposedState, grid: &PhaseSpaceGrid) -> GridField {
    wigner_field(&state.dyads(), grid)
}

pub fn wigner_mixed(rho: &DyadEnsemble, grid: &PhaseSpaceGrid) -> GridField {
    wigner_field(&PhaseSpaceSource::dyads(rho), grid)
}

/// Wigner function of any dyad source.
pub fn wigner<S: PhaseSpaceSource + ?Sized>(source: &S, grid: &PhaseSpaceGrid) -> GridField {
    wigner_field(&source.dyads(), grid)
}

/// Quadrature means and variances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

/// Moments from `⟨β|f(a, a†)|α⟩` in closed form; no grid involved.
pub fn moments<S: PhaseSpaceSource + ?Sized>(source: &S) -> Moments {
    let mut tr = C64::new(0.0, 0.0);
    let (mut x1, mut x2, mut p1, mut p2) = (tr, tr, tr, tr);
    let i = C64::new(0.0, 1.0);
    for d in source.dyads() {
        let t = d.trace();
        let a = d.ket.amplitude;
        let b = d.bra.amplitude.conj();
        tr += t;
        x1 += t * (a + b) / SQRT_2;
        x2 += t * (a * a + b * b + 2.0 * a * b + 1.0) * 0.5;
        p1 += t * (a - b) / (i * SQRT_2);
        p2 += t * -(a * a + b * b - 2.0 * a * b - 1.0) * 0.5;
    }
    let mean_x = (x1 / tr).re;
    let mean_p = (p1 / tr).re;
    Moments {
        mean_x,
        mean_p,
        var_x: (x2 / tr).re - mean_x * mean_x,
        var_p: (p2 / tr).re - mean_p * mean_p,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub negativity_volume: f64,
    pub min_w: f64,
    /// Set when halving the grid spacing moves the negativity volume by more
    /// than [`GRID_REFINEMENT_TOLERANCE`].
    pub grid_warning: Option<String>,
}

impl Diagnostics {
    /// Whether the state is squeezed below the vacuum level in `x`.
    pub fn x_squeezed(&self) -> bool {
        self.var_x < 0.5
    }
}

/// Moments, negativity and Wigner minimum, with a coarse-grid check.
pub fn diagnostics<S: PhaseSpaceSource + ?Sized>(source: &S, grid: &PhaseSpaceGrid) -> Diagnostics {
    let field = wigner(source, grid);
    let neg = field.negativity_volume();
    let fine = wigner(source, &grid.refined()).negativity_volume();
    let change = (fine - neg).abs();
    let grid_warning = (change > GRID_REFINEMENT_TOLERANCE * neg.max(fine) && change > 1e-9).then(|| {
        format!("grid too coarse: negativity volume {neg:.6e} changes to {fine:.6e} under 2x refinement")
    });
    diagnostics_from(source, &field, grid_warning)
}

/// As [`diagnostics`], reusing an already computed Wigner field and skipping
/// the refinement check.
pub fn diagnostics_from<S: PhaseSpaceSource + ?Sized>(
    source: &S,
    field: &GridField,
    grid_warning: Option<String>,
) -> Diagnostics {
    let m = moments(source);
    Diagnostics {
        mean_x: m.mean_x,
        mean_p: m.mean_p,
        var_x: m.var_x,
        var_p: m.var_p,
        negativity_volume: field.negativity_volume(),
        min_w: field.min(),
        grid_warning,
    }
}

/// Local maximum of a position density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub x: f64,
    pub height: f64,
}

/// Local maxima of `⟨x|ρ|x⟩`, located on the grid and then polished by
/// golden-section search on the exact density. Sorted by `x`.
pub fn density_peaks<S: PhaseSpaceSource + ?Sized>(source: &S, grid: &PhaseSpaceGrid) -> Vec<Peak> {
    let dyads = source.dyads();
    let rho = |x: f64| dyads.iter().map(|d| d.density(x)).sum::<C64>().re;
    let field = position_density(source, grid);
    let v = &field.values;
    let floor = 1e-12 * field.max().max(0.0);
    let dx = grid.dx();
    (1..v.len() - 1)
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > floor)
        .map(|i| {
            let x = golden_max(&rho, grid.x(i) - dx, grid.x(i) + dx);
            Peak { x, height: rho(x) }
        })
        .collect()
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
