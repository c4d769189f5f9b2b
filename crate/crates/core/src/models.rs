//! One-split branching random walk models.
//!
//! A model is a cluster law `zeta` (a finite distribution over multisets of
//! integer displacements) together with a starting position. Everything
//! analytic follows from the intensity `nu_k = E zeta({k})`:
//!
//! ```text
//! m(beta)   = sum_k e^{beta k} nu_k - 1
//! phi(beta) = m(beta) / m(0)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::bell::partial_bell_table;
use crate::cumulants::CumulantSet;
use crate::error::{Error, Result};
use crate::special::{ln_gamma_diff, polygamma};

/// One outcome of the cluster law: the displacements of the offspring and
/// the probability of this outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub offsets: Vec<i64>,
    pub prob: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterLaw {
    atoms: Vec<Atom>,
    nu: BTreeMap<i64, BigRational>,
    nu_f64: Vec<(i64, f64)>,
    cumulative: Vec<f64>,
}

impl ClusterLaw {
    /// Probabilities must be positive and sum to exactly one.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("cluster law has no atoms".into()));
        }
        let mut total = BigRational::zero();
        for a in &atoms {
            if !a.prob.is_positive() {
                return Err(Error::InvalidInput(format!(
                    "atom {:?} has non-positive probability {}",
                    a.offsets, a.prob
                )));
            }
            total += &a.prob;
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "atom probabilities sum to {total}, not 1"
            )));
        }
        let mut nu: BTreeMap<i64, BigRational> = BTreeMap::new();
        for a in &atoms {
            for &k in &a.offsets {
                *nu.entry(k).or_insert_with(BigRational::zero) += &a.prob;
            }
        }
        let nu_f64 = nu.iter().map(|(&k, v)| (k, rat_to_f64(v))).collect();
        let mut acc = BigRational::zero();
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += &a.prob;
                rat_to_f64(&acc)
            })
            .collect();
        Ok(ClusterLaw {
            atoms,
            nu,
            nu_f64,
            cumulative,
        })
    }

    /// A deterministic cluster.
    pub fn deterministic(offsets: Vec<i64>) -> Self {
        ClusterLaw::new(vec![Atom {
            offsets,
            prob: BigRational::one(),
        }])
        .expect("a single atom of probability one is valid")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Exact intensity `nu_k`.
    pub fn nu(&self) -> &BTreeMap<i64, BigRational> {
        &self.nu
    }

    pub fn nu_f64(&self) -> &[(i64, f64)] {
        &self.nu_f64
    }

    /// Cumulative atom probabilities, for sampling.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// `E N`, exactly.
    pub fn mean_size(&self) -> BigRational {
        self.nu.values().fold(BigRational::zero(), |a, v| a + v)
    }

    /// Whether every atom has the same number of offspring.
    pub fn deterministic_size(&self) -> bool {
        let n = self.atoms[0].offsets.len();
        self.atoms.iter().all(|a| a.offsets.len() == n)
    }

    pub fn max_abs_offset(&self) -> i64 {
        self.nu.keys().map(|k| k.abs()).max().unwrap_or(0)
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// An endpoint of the admissible tilt interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "+inf"),
            Bound::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => s.serialize_f64(*v),
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::PosInf => s.serialize_str("+inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaRange {
    pub minus: Bound,
    pub plus: Bound,
}

impl BetaRange {
    pub fn contains(&self, beta: f64) -> bool {
        let above = match self.minus {
            Bound::Finite(b) => beta > b,
            _ => true,
        };
        let below = match self.plus {
            Bound::Finite(b) => beta < b,
            _ => true,
        };
        above && below && beta.is_finite()
    }
}

const ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 200;
const EXP_LIMIT: f64 = 700.0;

#[derive(Clone, Debug)]
pub struct ModelSpec {
    name: String,
    cluster: ClusterLaw,
    m0: f64,
    initial_position: i64,
    beta_range: Option<BetaRange>,
}

impl ModelSpec {
    /// Builds a model. The tilt interval is computed when `m(0) > 0` and
    /// some offspring moves; otherwise it is left undefined and the
    /// analytic methods report an error.
    pub fn new(name: impl Into<String>, cluster: ClusterLaw, initial_position: i64) -> Self {
        let m0 = cluster.nu_f64.iter().map(|&(_, v)| v).sum::<f64>() - 1.0;
        let mut model = ModelSpec {
            name: name.into(),
            cluster,
            m0,
            initial_position,
            beta_range: None,
        };
        if model.m0 > 0.0 && model.cluster.nu.keys().any(|&k| k != 0) {
            model.beta_range = Some(model.compute_beta_range());
        }
        model
    }

    /// Binary search trees, `zeta = 2 delta_1`.
    pub fn bst() -> Self {
        Self::new("bst", ClusterLaw::deterministic(vec![1, 1]), 0)
    }

    /// Random recursive trees, `zeta = delta_0 + delta_1`.
    pub fn rrt() -> Self {
        Self::new("rrt", ClusterLaw::deterministic(vec![0, 1]), 0)
    }

    /// D-ary recursive trees, `zeta = D delta_1`.
    pub fn d_ary(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("D-ary trees need D >= 2, got {d}")));
        }
        Ok(Self::new(format!("d_ary:{d}"), ClusterLaw::deterministic(vec![1; d]), 0))
    }

    /// Plane-oriented recursive trees, `zeta = 2 delta_0 + delta_1`, started at one.
    pub fn port() -> Self {
        Self::new("port", ClusterLaw::deterministic(vec![0, 0, 1]), 1)
    }

    /// p-oriented trees, `zeta = p delta_0 + delta_1`, started at one.
    pub fn p_oriented(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidInput(format!("p-oriented trees need p >= 2, got {p}")));
        }
        let mut offsets = vec![0; p];
        offsets.push(1);
        Ok(Self::new(format!("p_oriented:{p}"), ClusterLaw::deterministic(offsets), 1))
    }

    /// Left-right imbalance profile of binary search trees, `zeta = delta_{-1} + delta_1`.
    pub fn vertical_bst() -> Self {
        Self::new("vertical_bst", ClusterLaw::deterministic(vec![-1, 1]), 0)
    }

    pub fn custom(name: impl Into<String>, atoms: Vec<Atom>, initial_position: i64) -> Result<Self> {
        Ok(Self::new(name, ClusterLaw::new(atoms)?, initial_position))
    }

    pub fn builtin_names() -> [&'static str; 6] {
        ["bst", "rrt", "d_ary:3", "port", "p_oriented:3", "vertical_bst"]
    }

    /// Resolves `bst`, `rrt`, `d_ary:D`, `port`, `p_oriented:p`, `vertical_bst`.
    pub fn builtin(name: &str) -> Result<Self> {
        let (base, param) = match name.split_once(':') {
            Some((b, p)) => {
                let v = p
                    .parse::<usize>()
                    .map_err(|_| Error::UnknownModel(name.to_string()))?;
                (b, Some(v))
            }
            None => (name, None),
        };
        match (base.replace('-', "_").as_str(), param) {
            ("bst", None) => Ok(Self::bst()),
            ("rrt", None) => Ok(Self::rrt()),
            ("port", None) => Ok(Self::port()),
            ("vertical_bst", None) => Ok(Self::vertical_bst()),
            ("d_ary", p) => Self::d_ary(p.unwrap_or(3)),
            ("p_oriented", p) => Self::p_oriented(p.unwrap_or(3)),
            _ => Err(Error::UnknownModel(name.to_string())),
        }
    }

    /// Parses a model definition file:
    ///
    /// ```toml
    /// name = "my_model"
    /// initial_position = 0
    /// [[atoms]]
    /// offsets = [1, 1]
    /// prob = "1/2"
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawAtom {
            offsets: Vec<i64>,
            prob: String,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawModel {
            name: String,
            #[serde(default)]
            initial_position: i64,
            atoms: Vec<RawAtom>,
        }
        let raw: RawModel = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let atoms = raw
            .atoms
            .into_iter()
            .map(|a| {
                Ok(Atom {
                    offsets: a.offsets,
                    prob: parse_rational(&a.prob)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::custom(raw.name, atoms, raw.initial_position)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// A builtin name or a path to a definition file.
    pub fn resolve(spec: &str) -> Result<Self> {
        let path = Path::new(spec);
        if path.is_file() {
            Self::from_file(path)
        } else {
            Self::builtin(spec)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cluster(&self) -> &ClusterLaw {
        &self.cluster
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn deterministic_offspring(&self) -> bool {
        self.cluster.deterministic_size()
    }

    pub fn initial_position(&self) -> i64 {
        self.initial_position
    }

    /// The same cluster law started at the origin. Its limit satisfies
    /// `W_inf(beta) = e^{beta x_0} W*_inf(beta)`, so `chi_1` shifts by `x_0`
    /// and higher random cumulants are unchanged.
    pub fn started_at_origin(&self) -> Self {
        ModelSpec {
            initial_position: 0,
            ..self.clone()
        }
    }

    /// `e^{beta x_0}`.
    pub fn shift_factor(&self, beta: f64) -> f64 {
        (beta * self.initial_position as f64).exp()
    }

    fn require_nondegenerate(&self) -> Result<BetaRange> {
        self.beta_range.ok_or_else(|| {
            Error::InvalidInput(format!(
                "model {} has m(0) = {} or no moving offspring",
                self.name, self.m0
            ))
        })
    }

    /// `m(beta) = sum_k e^{beta k} nu_k - 1`.
    pub fn m(&self, beta: f64) -> f64 {
        self.cluster
            .nu_f64
            .iter()
            .map(|&(k, v)| v * (beta * k as f64).exp())
            .sum::<f64>()
            - 1.0
    }

    pub fn m_complex(&self, beta: Complex64) -> Complex64 {
        self.cluster
            .nu_f64
            .iter()
            .map(|&(k, v)| (beta * k as f64).exp() * v)
            .sum::<Complex64>()
            - 1.0
    }

    /// `phi^(j)(beta)`; `j = 0` gives `phi` itself.
    pub fn phi_deriv(&self, j: u32, beta: f64) -> f64 {
        if j == 0 {
            return self.m(beta) / self.m0;
        }
        self.cluster
            .nu_f64
            .iter()
            .map(|&(k, v)| {
                let kf = k as f64;
                kf.powi(j as i32) * v * (beta * kf).exp()
            })
            .sum::<f64>()
            / self.m0
    }

    pub fn phi(&self, beta: f64) -> f64 {
        self.phi_deriv(0, beta)
    }

    /// `kappa_1 .. kappa_order` at `beta`.
    pub fn kappas(&self, beta: f64, order: usize) -> Vec<f64> {
        (1..=order).map(|j| self.phi_deriv(j as u32, beta)).collect()
    }

    pub fn sigma(&self, beta: f64) -> f64 {
        self.phi_deriv(2, beta).sqrt()
    }

    /// Cumulant set with deterministic cumulants up to `kappa_order` and the
    /// supplied random cumulants.
    pub fn cumulant_set(&self, beta: f64, kappa_order: usize, chi: Vec<f64>) -> Result<CumulantSet<f64>> {
        CumulantSet::from_kappa(beta, self.kappas(beta, kappa_order.max(2)), chi)
    }

    /// `g(beta) = beta phi'(beta) - phi(beta)`.
    fn g(&self, beta: f64) -> f64 {
        beta * self.phi_deriv(1, beta) - self.phi(beta)
    }

    fn exp_guard(&self) -> f64 {
        EXP_LIMIT / self.cluster.max_abs_offset().max(1) as f64
    }

    fn compute_beta_range(&self) -> BetaRange {
        BetaRange {
            minus: self.g_root(-1.0),
            plus: self.g_root(1.0),
        }
    }

    /// The first sign change of `g` along the ray `sign * [0, inf)`.
    fn g_root(&self, sign: f64) -> Bound {
        let limit = self.exp_guard();
        let mut inner = 0.0;
        let mut outer = sign;
        loop {
            if outer.abs() > limit {
                outer = sign * limit;
                if self.g(outer) < 0.0 {
                    return if sign > 0.0 { Bound::PosInf } else { Bound::NegInf };
                }
                break;
            }
            if self.g(outer) >= 0.0 {
                break;
            }
            inner = outer;
            outer *= 2.0;
        }
        let (mut lo, mut hi) = (inner, outer);
        for _ in 0..ROOT_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if self.g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() <= ROOT_TOL * hi.abs().max(1.0) {
                break;
            }
        }
        Bound::Finite(0.5 * (lo + hi))
    }

    /// `(beta_-, beta_+)`.
    pub fn beta_range(&self) -> Result<BetaRange> {
        self.require_nondegenerate()
    }

    /// Limits of `phi'` at the ends of the tilt interval.
    pub fn cone(&self) -> Result<(f64, f64)> {
        let range = self.require_nondegenerate()?;
        let lo = match range.minus {
            Bound::Finite(b) => self.phi_deriv(1, b),
            _ => {
                if self.cluster.nu.keys().any(|&k| k < 0) {
                    f64::NEG_INFINITY
                } else {
                    0.0
                }
            }
        };
        let hi = match range.plus {
            Bound::Finite(b) => self.phi_deriv(1, b),
            _ => {
                if self.cluster.nu.keys().any(|&k| k > 0) {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        };
        Ok((lo, hi))
    }

    /// Solves `phi'(beta) = k / w_n`.
    pub fn saddle_beta(&self, k: f64, w_n: f64) -> Result<f64> {
        if !(w_n > 0.0) {
            return Err(Error::InvalidInput(format!("w_n must be positive, got {w_n}")));
        }
        let t = k / w_n;
        let range = self.require_nondegenerate()?;
        let (lo_c, hi_c) = self.cone()?;
        if !(t > lo_c && t < hi_c) {
            return Err(Error::OutsideCone { ratio: t, lo: lo_c, hi: hi_c });
        }
        let f = |b: f64| self.phi_deriv(1, b) - t;
        let guard = self.exp_guard();
        let lo_limit = range.minus.finite().unwrap_or(-guard);
        let hi_limit = range.plus.finite().unwrap_or(guard);
        // bracket
        let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
        if f(0.0) > 0.0 {
            let mut step: f64 = 1.0;
            loop {
                lo = (-step).max(lo_limit);
                if f(lo) <= 0.0 {
                    break;
                }
                if lo <= lo_limit {
                    return Err(Error::OutsideCone { ratio: t, lo: lo_c, hi: hi_c });
                }
                hi = lo;
                step *= 2.0;
            }
        } else if f(0.0) < 0.0 {
            let mut step: f64 = 1.0;
            loop {
                hi = step.min(hi_limit);
                if f(hi) >= 0.0 {
                    break;
                }
                if hi >= hi_limit {
                    return Err(Error::OutsideCone { ratio: t, lo: lo_c, hi: hi_c });
                }
                lo = hi;
                step *= 2.0;
            }
        } else {
            return Ok(0.0);
        }
        let tol = 1e-12 * t.abs().max(1.0);
        let mut b = 0.5 * (lo + hi);
        for _ in 0..ROOT_MAX_ITER {
            let fb = f(b);
            if fb.abs() <= tol {
                return Ok(b);
            }
            if fb > 0.0 {
                hi = b;
            } else {
                lo = b;
            }
            let newton = b - fb / self.phi_deriv(2, b);
            b = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * b.abs().max(1.0) {
                return Ok(b);
            }
        }
        Ok(b)
    }

    fn require_deterministic(&self) -> Result<()> {
        if self.deterministic_offspring() {
            Ok(())
        } else {
            Err(Error::JabbourUndefined(format!(
                "model {} has a random number of offspring",
                self.name
            )))
        }
    }

    /// `ln alpha_n(beta) = sum_{k<n} ln(1 + m(beta) / (1 + m(0) k))`.
    pub fn ln_jabbour_normalizer(&self, n: u64, beta: f64) -> Result<f64> {
        self.require_deterministic()?;
        let m = self.m(beta);
        let mut sum = 0.0;
        let mut comp = 0.0;
        for k in 0..n {
            let term = (m / (1.0 + self.m0 * k as f64)).ln_1p();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        Ok(sum + comp)
    }

    /// `alpha_n(beta) = prod_{k<n} (1 + m(beta) / (1 + m(0) k))`.
    pub fn jabbour_normalizer(&self, n: u64, beta: f64) -> Result<f64> {
        Ok(self.ln_jabbour_normalizer(n, beta)?.exp())
    }

    /// `a = (m(beta) + 1) / m(0)` and `b = 1 / m(0)`.
    fn gamma_args(&self, beta: f64) -> (f64, f64) {
        ((self.m(beta) + 1.0) / self.m0, 1.0 / self.m0)
    }

    /// `E W_n(beta) = e^{beta x_0} n^{-phi(beta)} (a)^(n) / (b)^(n)`.
    #[allow(non_snake_case)]
    pub fn exact_mean_W(&self, n: u64, beta: f64) -> Result<f64> {
        self.require_deterministic()?;
        if n == 0 {
            return Err(Error::InvalidInput("exact_mean_W needs n >= 1".into()));
        }
        let (a, b) = self.gamma_args(beta);
        let nf = n as f64;
        let ln = -self.phi(beta) * nf.ln() + ln_gamma_diff(a + nf, b + nf) - ln_gamma_diff(a, b);
        Ok(self.shift_factor(beta) * ln.exp())
    }

    /// `E W_inf(beta) = e^{beta x_0} Gamma(b) / Gamma(a)`.
    #[allow(non_snake_case)]
    pub fn limit_mean_W(&self, beta: f64) -> Result<f64> {
        self.require_deterministic()?;
        let (a, b) = self.gamma_args(beta);
        Ok(self.shift_factor(beta) * (-ln_gamma_diff(a, b)).exp())
    }

    /// `tilde chi_j(beta) = (d/dbeta)^j log E W_inf(beta)`, by Faa di Bruno
    /// over polygamma values at `z = (m(beta) + 1) / m(0)`, whose derivatives
    /// are `phi^(i)(beta)`.
    pub fn mean_cumulant(&self, j: usize, beta: f64) -> Result<f64> {
        self.require_deterministic()?;
        if j == 0 {
            return Ok(self.limit_mean_W(beta)?.ln());
        }
        let z = self.gamma_args(beta).0;
        let derivs: Vec<f64> = (1..=j).map(|i| self.phi_deriv(i as u32, beta)).collect();
        let table = partial_bell_table(&derivs);
        let mut acc = 0.0;
        for k in 1..=j {
            acc += polygamma(k as u32 - 1, z) * table[j][k];
        }
        let shift = if j == 1 { self.initial_position as f64 } else { 0.0 };
        Ok(shift - acc)
    }

    /// `tilde chi_1 .. tilde chi_order`.
    pub fn mean_cumulants(&self, beta: f64, order: usize) -> Result<Vec<f64>> {
        (1..=order).map(|j| self.mean_cumulant(j, beta)).collect()
    }

    pub fn check_assumptions(&self) -> AssumptionReport {
        check_assumptions(&self.cluster)
    }

    pub fn describe(&self) -> Result<ModelDescription> {
        let range = self.require_nondegenerate()?;
        Ok(ModelDescription {
            name: self.name.clone(),
            phi1: self.phi_deriv(1, 0.0),
            sigma2: self.phi_deriv(2, 0.0),
            kappa3: self.phi_deriv(3, 0.0),
            kappa4: self.phi_deriv(4, 0.0),
            beta_minus: range.minus,
            beta_plus: range.plus,
            m0: self.m0,
            initial_position: self.initial_position,
            deterministic_offspring: self.deterministic_offspring(),
            assumptions: self.check_assumptions(),
        })
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(
            BigInt::from_str(s).map_err(|e| Error::Parse(format!("{s}: {e}")))?,
        ),
    };
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail(String),
    TriviallySatisfied,
    NotChecked,
}

impl Check {
    pub fn ok(&self) -> bool {
        !matches!(self, Check::Fail(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub b1: Check,
    pub b2: Check,
    pub b3: Check,
    pub b4: Check,
    pub b5: Check,
    /// `a*` such that rescaling displacements by `1/a*` restores B4.
    pub suggested_rescale: Option<i64>,
}

impl AssumptionReport {
    pub fn all_ok(&self) -> bool {
        [&self.b1, &self.b2, &self.b3, &self.b4, &self.b5]
            .iter()
            .all(|c| c.ok())
    }
}

/// B1: some offspring moves. B2: every cluster is nonempty. B3 and B5 hold
/// automatically for finitely many atoms with finite support. B4: the
/// intensity is not carried by a proper subgroup `aZ`.
pub fn check_assumptions(cluster: &ClusterLaw) -> AssumptionReport {
    let support: Vec<i64> = cluster
        .nu
        .iter()
        .filter(|(_, v)| v.is_positive())
        .map(|(&k, _)| k)
        .collect();
    let b1 = if support.iter().any(|&k| k != 0) {
        Check::Pass
    } else {
        Check::Fail("no mass at a nonzero displacement".into())
    };
    let b2 = if cluster.atoms.iter().all(|a| !a.offsets.is_empty()) {
        Check::Pass
    } else {
        Check::Fail("a cluster outcome has no offspring".into())
    };
    let g = support.iter().fold(0i64, |acc, &k| acc.gcd(&k));
    let (b4, rescale) = match g {
        0 => (Check::Fail("intensity concentrated at 0".into()), None),
        1 => (Check::Pass, None),
        a => (
            Check::Fail(format!("intensity concentrated on {a}Z")),
            Some(a),
        ),
    };
    AssumptionReport {
        b1,
        b2,
        b3: Check::TriviallySatisfied,
        b4,
        b5: Check::TriviallySatisfied,
        suggested_rescale: rescale,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelDescription {
    pub name: String,
    pub phi1: f64,
    pub sigma2: f64,
    pub kappa3: f64,
    pub kappa4: f64,
    pub beta_minus: Bound,
    pub beta_plus: Bound,
    pub m0: f64,
    pub initial_position: i64,
    pub deterministic_offspring: bool,
    pub assumptions: AssumptionReport,
}
