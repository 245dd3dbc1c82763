use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::TrajectoryError;
use crate::fields::{ComplexField, DEFAULT_NODE_THRESHOLD};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingScheme {
    /// Position `i` at the `(i − ½)/n` quantile.
    Quantile,
    /// Uniform over the above-threshold support, weighted by the density.
    EqualSpacing,
    /// Quantiles of seeded uniform draws, sorted.
    Random { seed: u64 },
}

impl SamplingScheme {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Quantile => "quantile",
            Self::EqualSpacing => "equal_spacing",
            Self::Random { .. } => "random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::Random { seed } => Some(*seed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialEnsemble {
    pub positions: Vec<f64>,
    pub weights: Option<Vec<f64>>,
    pub scheme: SamplingScheme,
}

impl InitialEnsemble {
    pub fn new(positions: Vec<f64>, weights: Option<Vec<f64>>, scheme: SamplingScheme) -> Result<Self, TrajectoryError> {
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(TrajectoryError::InvalidEnsemble("positions must be finite".into()));
        }
        if let Some(k) = positions.windows(2).position(|w| w[1] <= w[0]) {
            return Err(TrajectoryError::InvalidEnsemble(format!("positions not strictly increasing at index {}", k + 1)));
        }
        if let Some(w) = &weights {
            if w.len() != positions.len() {
                return Err(TrajectoryError::InvalidEnsemble("one weight per position required".into()));
            }
            if w.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                return Err(TrajectoryError::InvalidEnsemble("weights must be nonnegative".into()));
            }
            let s: f64 = w.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(TrajectoryError::InvalidEnsemble(format!("weights sum to {s}, not 1")));
            }
        }
        Ok(Self { positions, weights, scheme })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Cumulative distribution of a sampled density, built from cell integrals of
/// the 4-point interpolant (fourth order in the grid spacing).
#[derive(Debug, Clone)]
pub struct Cdf {
    grid: GridSpec,
    rho: Vec<f64>,
    cum: Vec<f64>,
}

impl Cdf {
    pub fn new(grid: &GridSpec, rho: &[f64]) -> Result<Self, TrajectoryError> {
        grid.check_len(rho.len())?;
        if let Some(j) = rho.iter().position(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(TrajectoryError::InvalidInput(format!("density must be finite and nonnegative (index {j})")));
        }
        let mut cdf = Self { grid: *grid, rho: rho.to_vec(), cum: vec![0.0; rho.len()] };
        for j in 0..rho.len() - 1 {
            let cell = cdf.partial(j, 1.0).max(0.0);
            cdf.cum[j + 1] = cdf.cum[j] + cell;
        }
        if !(cdf.total() > 0.0) {
            return Err(TrajectoryError::ZeroDensity);
        }
        Ok(cdf)
    }

    pub fn from_state(psi: &ComplexField) -> Result<Self, TrajectoryError> {
        Self::new(psi.grid(), &psi.density())
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `∫ρ dx` over the whole grid.
    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap_or(&0.0)
    }

    /// `∫ρ dx` over cell `j` from its left edge to fractional offset `s`.
    fn partial(&self, j: usize, s: f64) -> f64 {
        let h = self.grid.dx();
        let r = &self.rho;
        if j >= 1 && j + 2 < r.len() {
            let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
            let bm = -(s4 / 4.0 - s3 + s2) / 6.0;
            let b0 = (s4 / 4.0 - 2.0 * s3 / 3.0 - s2 / 2.0 + 2.0 * s) / 2.0;
            let b1 = -(s4 / 4.0 - s3 / 3.0 - s2) / 2.0;
            let b2 = (s4 / 4.0 - s2 / 2.0) / 6.0;
            h * (bm * r[j - 1] + b0 * r[j] + b1 * r[j + 1] + b2 * r[j + 2])
        } else {
            h * (r[j] * s + 0.5 * (r[j + 1] - r[j]) * s * s)
        }
    }

    /// Unnormalized `∫_{x_min}^{x} ρ dx`; clamped outside the grid.
    pub fn mass_below(&self, x: f64) -> f64 {
        if x <= self.grid.x_min() {
            return 0.0;
        }
        if x >= self.grid.x_max() {
            return self.total();
        }
        let (j, s) = self.grid.locate(x).expect("inside grid");
        (self.cum[j] + self.partial(j, s)).clamp(0.0, self.total())
    }

    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        self.mass_below(b) - self.mass_below(a)
    }

    /// Normalized cumulative probability.
    pub fn eval(&self, x: f64) -> f64 {
        self.mass_below(x) / self.total()
    }

    /// Inverse of [`Cdf::eval`].
    pub fn quantile(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        let target = q * self.total();
        let n = self.cum.len();
        let j = self.cum.partition_point(|&c| c <= target).clamp(1, n - 1) - 1;
        let want = target - self.cum[j];
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.partial(j, mid) < want {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 {
                break;
            }
        }
        self.grid.x(j) + 0.5 * (lo + hi) * self.grid.dx()
    }
}

/// Draw `n` initial positions from the density `rho0` sampled on `grid`.
pub fn sample_initial_positions(
    grid: &GridSpec,
    rho0: &[f64],
    n: usize,
    scheme: SamplingScheme,
) -> Result<InitialEnsemble, TrajectoryError> {
    if n < 2 {
        return Err(TrajectoryError::InvalidInput(format!("need at least 2 positions, got {n}")));
    }
    let cdf = Cdf::new(grid, rho0)?;
    match scheme {
        SamplingScheme::Quantile => {
            let positions = (1..=n).map(|i| cdf.quantile((i as f64 - 0.5) / n as f64)).collect();
            InitialEnsemble::new(positions, None, scheme)
        }
        SamplingScheme::EqualSpacing => {
            let peak = rho0.iter().cloned().fold(0.0, f64::max);
            let thr = DEFAULT_NODE_THRESHOLD * peak;
            let first = rho0.iter().position(|&r| r > thr).ok_or(TrajectoryError::ZeroDensity)?;
            let last = rho0.iter().rposition(|&r| r > thr).ok_or(TrajectoryError::ZeroDensity)?;
            if first == last {
                return Err(TrajectoryError::InvalidInput("support is a single grid point".into()));
            }
            let (lo, hi) = (grid.x(first), grid.x(last));
            let positions: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
            let raw: Vec<f64> = positions
                .iter()
                .map(|&x| {
                    let (j, s) = grid.locate(x).expect("support lies on the grid");
                    (1.0 - s) * rho0[j] + s * rho0[j + 1]
                })
                .collect();
            let sum: f64 = raw.iter().sum();
            if !(sum > 0.0) {
                return Err(TrajectoryError::ZeroDensity);
            }
            let weights = raw.iter().map(|w| w / sum).collect();
            InitialEnsemble::new(positions, Some(weights), scheme)
        }
        SamplingScheme::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut positions: Vec<f64> = (0..n).map(|_| cdf.quantile(rng.random::<f64>())).collect();
            positions.sort_by(f64::total_cmp);
            InitialEnsemble::new(positions, None, scheme)
        }
    }
}

/// Kolmogorov-Smirnov distance between a (weighted) point set and `cdf`.
pub fn ks_distance(positions: &[f64], weights: Option<&[f64]>, cdf: &Cdf) -> f64 {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a].total_cmp(&positions[b]));
    let uniform = 1.0 / positions.len() as f64;
    let mut below = 0.0;
    let mut d = 0.0f64;
    for &i in &order {
        let c = cdf.eval(positions[i]);
        let w = weights.map_or(uniform, |w| w[i]);
        d = d.max((c - below).abs());
        below += w;
        d = d.max((below - c).abs());
    }
    d
}
