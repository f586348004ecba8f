//! SSP Runge–Kutta schemes in Shu–Osher form.
//!
//! A stage is `U(i) = sum_k alpha[i][k] U(k) + dt beta[i][k] Op_k(U(k))`
//! where `Op_k` is the upwind operator when `beta[i][k] > 0` and the
//! downwind operator when it is negative.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    Ssp33,
    Ssp33Star,
    Ssp54,
    Ssp54Star,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Ssp33, Scheme::Ssp33Star, Scheme::Ssp54, Scheme::Ssp54Star];

    /// The CLI spelling.
    pub fn cli_name(self) -> &'static str {
        match self {
            Scheme::Ssp33 => "ssp33",
            Scheme::Ssp33Star => "ssp33s",
            Scheme::Ssp54 => "ssp54",
            Scheme::Ssp54Star => "ssp54s",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Scheme::Ssp33 => "SSP(3,3)",
            Scheme::Ssp33Star => "SSP*(3,3)",
            Scheme::Ssp54 => "SSP(5,4)",
            Scheme::Ssp54Star => "SSP*(5,4)",
        }
    }

    pub fn tableau(self) -> RkTableau {
        builtin(self)
    }
}

impl std::str::FromStr for Scheme {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ssp33" | "SSP(3,3)" => Ok(Scheme::Ssp33),
            "ssp33s" | "SSP*(3,3)" => Ok(Scheme::Ssp33Star),
            "ssp54" | "SSP(5,4)" => Ok(Scheme::Ssp54),
            "ssp54s" | "SSP*(5,4)" => Ok(Scheme::Ssp54Star),
            other => Err(SolverError::UnknownScheme(other.to_string())),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.cli_name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RkTableau {
    pub name: String,
    pub stages: usize,
    /// `alpha[i-1][k]` for stage `i = 1..=stages`, `k = 0..i`.
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
    pub ssp_coefficient: f64,
    /// Nominal classical order.
    pub order: usize,
}

impl RkTableau {
    pub fn new(name: impl Into<String>, alpha: Vec<Vec<f64>>, beta: Vec<Vec<f64>>, ssp_coefficient: f64, order: usize) -> Self {
        let stages = alpha.len();
        Self { name: name.into(), stages, alpha, beta, ssp_coefficient, order }
    }

    #[inline]
    pub fn alpha(&self, i: usize, k: usize) -> f64 {
        self.alpha[i - 1][k]
    }

    #[inline]
    pub fn beta(&self, i: usize, k: usize) -> f64 {
        self.beta[i - 1][k]
    }

    pub fn has_negative_beta(&self) -> bool {
        self.beta.iter().flatten().any(|&b| b < 0.0)
    }

    /// Converts to Butcher form `(A, b, c)` by forward substitution.
    ///
    /// Each Shu–Osher stage is expanded to `U(i) = U^n + dt sum_j a[i][j] K_j`
    /// with `K_j = L(U(j))`; the downwind/upwind distinction is irrelevant at
    /// the ODE level.
    pub fn to_butcher(&self) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
        let s = self.stages;
        // rows 0..=s of stage coefficients over K_0..K_{s-1}
        let mut rows: Vec<Vec<f64>> = vec![vec![0.0; s]];
        for i in 1..=s {
            let mut row = vec![0.0; s];
            for k in 0..i {
                let a = self.alpha(i, k);
                for (j, v) in rows[k].iter().enumerate() {
                    row[j] += a * v;
                }
                row[k] += self.beta(i, k);
            }
            rows.push(row);
        }
        let b = rows[s].clone();
        let a: Vec<Vec<f64>> = rows[..s].to_vec();
        let c = a.iter().map(|r| r.iter().sum()).collect();
        (a, b, c)
    }
}

/// Structural validation report. Empty `violations` means the tableau is
/// admissible; `order_residuals[q-1]` is the largest residual among the
/// classical order conditions of order `q`.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub order_residuals: Vec<f64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn builtin_tableau(name: &str) -> Result<RkTableau> {
    Ok(builtin(name.parse()?))
}

fn builtin(scheme: Scheme) -> RkTableau {
    match scheme {
        Scheme::Ssp33 => RkTableau::new(
            "SSP(3,3)",
            vec![vec![1.0], vec![3.0 / 4.0, 1.0 / 4.0], vec![1.0 / 3.0, 0.0, 2.0 / 3.0]],
            vec![vec![1.0], vec![0.0, 1.0 / 4.0], vec![0.0, 0.0, 2.0 / 3.0]],
            1.0,
            3,
        ),
        Scheme::Ssp33Star => RkTableau::new(
            "SSP*(3,3)",
            vec![
                vec![1.0],
                vec![0.410802706918667, 0.589197293081333],
                vec![0.123062611901395, 0.251481201947289, 0.625456186151316],
            ],
            vec![
                vec![0.767591879243998],
                vec![-0.315328821802221, 0.452263057441777],
                vec![-0.041647109531262, 0.0, 0.480095089312672],
            ],
            1.3027756,
            3,
        ),
        Scheme::Ssp54 => RkTableau::new(
            "SSP(5,4)",
            vec![
                vec![1.0],
                vec![0.444370493651235, 0.555629506348765],
                vec![0.620101851488403, 0.0, 0.379898148511597],
                vec![0.178079954393132, 0.0, 0.0, 0.821920045606868],
                vec![0.0, 0.0, 0.517231671970585, 0.096059710526147, 0.386708617503269],
            ],
            vec![
                vec![0.391752226571890],
                vec![0.0, 0.368410593050371],
                vec![0.0, 0.0, 0.251891774271694],
                vec![0.0, 0.0, 0.0, 0.544974750228521],
                vec![0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906],
            ],
            1.5081800,
            4,
        ),
        Scheme::Ssp54Star => RkTableau::new(
            "SSP*(5,4)",
            vec![
                vec![1.0],
                vec![0.210186660827794, 0.789813339172206],
                vec![0.331062996240662, 0.202036516631465, 0.466900487127873],
                vec![0.0, 0.0, 0.0, 1.0],
                vec![0.097315407775058, 0.435703937692290, 0.0, 0.0, 0.466980654532652],
            ],
            vec![
                vec![0.416596471458169],
                vec![-0.103478898431154, 0.388840157514713],
                vec![-0.162988621767813, 0.0, 0.229864007043460],
                vec![0.0, 0.0, 0.0, 0.492319055945867],
                vec![-0.047910229684804, 0.202097732052527, 0.0, 0.0, 0.229903474984498],
            ],
            2.0312031,
            4,
        ),
    }
}

/// Row sums must be 1 to this tolerance.
const ROW_SUM_TOL: f64 = 1e-12;

pub fn validate_tableau(t: &RkTableau) -> ValidationReport {
    let mut report = ValidationReport::default();
    let s = t.stages;
    if t.alpha.len() != s || t.beta.len() != s {
        report.violations.push(format!("expected {s} rows in alpha and beta"));
        return report;
    }
    for i in 1..=s {
        if t.alpha[i - 1].len() != i || t.beta[i - 1].len() != i {
            report.violations.push(format!("row {i} must have {i} entries"));
            return report;
        }
    }
    for i in 1..=s {
        let mut sum = 0.0;
        for k in 0..i {
            let a = t.alpha(i, k);
            let b = t.beta(i, k);
            sum += a;
            if a < 0.0 {
                report.violations.push(format!("alpha[{i}][{k}] = {a} is negative"));
            }
            if a == 0.0 && b != 0.0 {
                report.violations.push(format!("alpha[{i}][{k}] = 0 but beta[{i}][{k}] = {b}"));
            }
        }
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            report.violations.push(format!("row {i}: sum of alpha = {sum}, expected 1"));
        }
    }
    if !(t.ssp_coefficient > 0.0) {
        report.violations.push("ssp coefficient must be positive".into());
    }
    if report.violations.is_empty() {
        report.order_residuals = order_residuals(t, t.order.min(4));
    }
    report
}

/// Largest residual of the classical order conditions, per order 1..=max_order.
fn order_residuals(t: &RkTableau, max_order: usize) -> Vec<f64> {
    let (a, b, c) = t.to_butcher();
    let s = t.stages;
    let sum = |f: &dyn Fn(usize) -> f64| (0..s).map(f).sum::<f64>();
    let ac: Vec<f64> = (0..s).map(|i| (0..s).map(|j| a[i][j] * c[j]).sum()).collect();
    let mut out = Vec::new();
    if max_order >= 1 {
        out.push((sum(&|i| b[i]) - 1.0).abs());
    }
    if max_order >= 2 {
        out.push((sum(&|i| b[i] * c[i]) - 0.5).abs());
    }
    if max_order >= 3 {
        let r1 = (sum(&|i| b[i] * c[i] * c[i]) - 1.0 / 3.0).abs();
        let r2 = (sum(&|i| b[i] * ac[i]) - 1.0 / 6.0).abs();
        out.push(r1.max(r2));
    }
    if max_order >= 4 {
        let aac: Vec<f64> = (0..s).map(|i| (0..s).map(|j| a[i][j] * ac[j]).sum()).collect();
        let acc: Vec<f64> = (0..s).map(|i| (0..s).map(|j| a[i][j] * c[j] * c[j]).sum()).collect();
        let r1 = (sum(&|i| b[i] * c[i].powi(3)) - 0.25).abs();
        let r2 = (sum(&|i| b[i] * c[i] * ac[i]) - 0.125).abs();
        let r3 = (sum(&|i| b[i] * acc[i]) - 1.0 / 12.0).abs();
        let r4 = (sum(&|i| b[i] * aac[i]) - 1.0 / 24.0).abs();
        out.push(r1.max(r2).max(r3).max(r4));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ssp33_matches_table_entries() {
        let t = builtin_tableau("ssp33").unwrap();
        assert_eq!(t.alpha, vec![vec![1.0], vec![0.75, 0.25], vec![1.0 / 3.0, 0.0, 2.0 / 3.0]]);
        assert_eq!(t.beta, vec![vec![1.0], vec![0.0, 0.25], vec![0.0, 0.0, 2.0 / 3.0]]);
        assert_eq!(t.ssp_coefficient, 1.0);
    }

    #[test]
    fn starred_entries() {
        let t = builtin_tableau("ssp33s").unwrap();
        assert_eq!(t.beta(2, 0), -0.315328821802221);
        assert_eq!(t.ssp_coefficient, 1.3027756);
        let t = builtin_tableau("ssp54s").unwrap();
        assert_eq!(t.alpha[3], vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(t.beta(4, 0), 0.0);
        assert_eq!(t.beta(4, 3), 0.492319055945867);
    }

    #[test]
    fn unknown_scheme_is_rejected() {
        assert_eq!(builtin_tableau("rk4"), Err(SolverError::UnknownScheme("rk4".into())));
    }

    #[test]
    fn builtins_validate_and_satisfy_order_conditions() {
        for scheme in Scheme::ALL {
            let t = scheme.tableau();
            let report = validate_tableau(&t);
            assert!(report.is_valid(), "{}: {:?}", t.name, report.violations);
            assert_eq!(report.order_residuals.len(), t.order);
            for (q, r) in report.order_residuals.iter().enumerate() {
                assert!(*r < 1e-10, "{} order {} residual {r}", t.name, q + 1);
            }
            for row in &t.alpha {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            assert_eq!(t.has_negative_beta(), matches!(scheme, Scheme::Ssp33Star | Scheme::Ssp54Star));
        }
    }

    #[test]
    fn ssp33_row_sums_are_exactly_one() {
        let t = Scheme::Ssp33.tableau();
        assert_eq!(t.alpha[1].iter().sum::<f64>(), 1.0);
        assert_eq!(t.alpha[2].iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn starred_schemes_have_larger_ssp_coefficient() {
        assert!(Scheme::Ssp33Star.tableau().ssp_coefficient > Scheme::Ssp33.tableau().ssp_coefficient);
        assert!(Scheme::Ssp54Star.tableau().ssp_coefficient > Scheme::Ssp54.tableau().ssp_coefficient);
    }

    #[test]
    fn row_sum_violation_is_reported() {
        let t = RkTableau::new("bad", vec![vec![0.9]], vec![vec![1.0]], 1.0, 1);
        let report = validate_tableau(&t);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].contains("sum of alpha"));
    }

    #[test]
    fn zero_alpha_with_nonzero_beta_is_reported() {
        let t = RkTableau::new("bad", vec![vec![1.0], vec![0.0, 1.0]], vec![vec![1.0], vec![0.5, 0.5]], 1.0, 1);
        assert!(validate_tableau(&t).violations.iter().any(|v| v.contains("but beta")));
    }
}
