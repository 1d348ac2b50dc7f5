//! Kubo–Ando operator means.
//!
//! A mean σ is determined by its representing function `f` (operator monotone
//! on `(0, ∞)`, `f(1) = 1`) through
//! `A σ B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{apply_positive_function, congruence_pd, power, PDMatrix};

/// Below this `|r|` the power families switch to their geometric limit.
pub const GEOMETRIC_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum MeanDescriptor {
    Arithmetic,
    Harmonic,
    Geometric,
    /// `A ♯_p B`, representing function `x^p`.
    WeightedGeometric(f64),
    /// Power mean `m_r`, representing function `((1 + x^r)/2)^{1/r}`.
    Power(f64),
    /// Point `t` of the power-mean path `m_{r,t}`: `(1 − t + t·x^r)^{1/r}`.
    PowerPath {
        r: f64,
        t: f64,
    },
    /// Point `t` of the geometric path, i.e. `♯_t`.
    GeometricPath(f64),
    /// Representing function `x / f(x)`.
    DualOf(Box<MeanDescriptor>),
}

use MeanDescriptor::*;

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidDescriptor(format!(
            "{name}={v} outside [0, 1]"
        )))
    }
}

fn check_exponent(v: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidDescriptor(format!("r={v} outside [-1, 1]")))
    }
}

/// `(1 − t + t·x^r)^{1/r}`, continuous through `r = 0`.
pub fn power_path_scalar(r: f64, t: f64, x: f64) -> f64 {
    let ln_x = x.ln();
    if r.abs() < GEOMETRIC_LIMIT {
        return (t * ln_x).exp();
    }
    // exp(ln1p(t·expm1(r ln x)) / r) avoids cancellation for small r
    ((t * (r * ln_x).exp_m1()).ln_1p() / r).exp()
}

impl MeanDescriptor {
    pub fn weighted_geometric(p: f64) -> Result<Self> {
        check_unit("p", p)?;
        Ok(WeightedGeometric(p))
    }

    pub fn power(r: f64) -> Result<Self> {
        check_exponent(r)?;
        Ok(Power(r))
    }

    pub fn power_path(r: f64, t: f64) -> Result<Self> {
        check_exponent(r)?;
        check_unit("t", t)?;
        Ok(PowerPath { r, t })
    }

    pub fn geometric_path(t: f64) -> Result<Self> {
        check_unit("t", t)?;
        Ok(GeometricPath(t))
    }

    pub fn dual_of(inner: MeanDescriptor) -> Self {
        DualOf(Box::new(inner))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Arithmetic | Harmonic | Geometric => Ok(()),
            WeightedGeometric(p) => check_unit("p", *p),
            Power(r) => check_exponent(*r),
            PowerPath { r, t } => check_exponent(*r).and(check_unit("t", *t)),
            GeometricPath(t) => check_unit("t", *t),
            DualOf(inner) => inner.validate(),
        }
    }

    /// Evaluates the representing function at `x > 0`.
    pub fn representing(&self, x: f64) -> f64 {
        match self {
            Arithmetic => (1.0 + x) / 2.0,
            Harmonic => 2.0 * x / (1.0 + x),
            Geometric => x.sqrt(),
            WeightedGeometric(p) | GeometricPath(p) => x.powf(*p),
            Power(r) => power_path_scalar(*r, 0.5, x),
            PowerPath { r, t } => power_path_scalar(*r, *t, x),
            DualOf(inner) => x / inner.representing(x),
        }
    }

    pub fn representing_fn(&self) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.representing(x)
    }

    /// The dual mean σ⊥. Closed forms where they are simple; otherwise a
    /// `DualOf` wrapper evaluated through `x / f(x)`.
    pub fn dual(&self) -> Self {
        match self {
            Arithmetic => Harmonic,
            Harmonic => Arithmetic,
            Geometric => Geometric,
            WeightedGeometric(p) => WeightedGeometric(1.0 - p),
            GeometricPath(t) => GeometricPath(1.0 - t),
            DualOf(inner) => (**inner).clone(),
            Power(_) | PowerPath { .. } => DualOf(Box::new(self.clone())),
        }
    }

    /// True for means that are exactly `♯_p` for some `p`.
    fn geometric_weight(&self) -> Option<f64> {
        match self {
            Geometric => Some(0.5),
            WeightedGeometric(p) | GeometricPath(p) => Some(*p),
            Power(r) if r.abs() < GEOMETRIC_LIMIT => Some(0.5),
            PowerPath { r, t } if r.abs() < GEOMETRIC_LIMIT => Some(*t),
            _ => None,
        }
    }
}

impl fmt::Display for MeanDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arithmetic => write!(f, "arithmetic"),
            Harmonic => write!(f, "harmonic"),
            Geometric => write!(f, "geometric"),
            WeightedGeometric(p) => write!(f, "wgeo:{p}"),
            Power(r) => write!(f, "power:{r}"),
            PowerPath { r, t } => write!(f, "path:r={r},t={t}"),
            GeometricPath(t) => write!(f, "geopath:{t}"),
            DualOf(inner) => write!(f, "dual({inner})"),
        }
    }
}

fn parse_num(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidDescriptor(format!("bad number {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidDescriptor(format!("non-finite number {s:?}")))
    }
}

impl FromStr for MeanDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("dual(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| {
                Error::InvalidDescriptor(format!("unbalanced parentheses in {s:?}"))
            })?;
            return Ok(DualOf(Box::new(inner.parse()?)));
        }
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let d = match (head, arg) {
            ("arithmetic", None) => Arithmetic,
            ("harmonic", None) => Harmonic,
            ("geometric", None) => Geometric,
            ("wgeo", Some(a)) => WeightedGeometric(parse_num(a)?),
            ("power", Some(a)) => Power(parse_num(a)?),
            ("geopath", Some(a)) => GeometricPath(parse_num(a)?),
            ("path", Some(a)) => {
                let mut r = None;
                let mut t = None;
                for part in a.split(',') {
                    match part.split_once('=') {
                        Some(("r", v)) => r = Some(parse_num(v)?),
                        Some(("t", v)) => t = Some(parse_num(v)?),
                        _ => {
                            return Err(Error::InvalidDescriptor(format!(
                                "bad path parameter {part:?}"
                            )))
                        }
                    }
                }
                match (r, t) {
                    (Some(r), Some(t)) => PowerPath { r, t },
                    _ => return Err(Error::InvalidDescriptor("path needs r= and t=".into())),
                }
            }
            _ => return Err(Error::InvalidDescriptor(format!("unknown mean {s:?}"))),
        };
        d.validate()?;
        Ok(d)
    }
}

/// Pre-factored first argument: `A^{1/2}` and `A^{-1/2}`.
struct Anchor {
    sqrt: PDMatrix,
    inv_sqrt: PDMatrix,
}

impl Anchor {
    fn new(a: &PDMatrix) -> Result<Self> {
        Ok(Self {
            sqrt: power(a, 0.5)?,
            inv_sqrt: power(a, -0.5)?,
        })
    }

    fn relative(&self, b: &PDMatrix) -> Result<PDMatrix> {
        congruence_pd(self.inv_sqrt.hermitian(), b.hermitian())
    }

    fn lift(&self, c: &PDMatrix) -> Result<PDMatrix> {
        congruence_pd(self.sqrt.hermitian(), c.hermitian())
    }
}

/// `A σ B` through the representing function of `d`.
pub fn mean(d: &MeanDescriptor, a: &PDMatrix, b: &PDMatrix) -> Result<PDMatrix> {
    if a.n() != b.n() {
        return Err(Error::Dimension {
            expected: a.n(),
            found: b.n(),
        });
    }
    match d.geometric_weight() {
        Some(0.0) => return Ok(a.clone()),
        Some(1.0) => return Ok(b.clone()),
        _ => {}
    }
    let anchor = Anchor::new(a)?;
    let relative = anchor.relative(b)?;
    let f = d.representing_fn();
    let inner = apply_positive_function(&relative, f)?;
    anchor.lift(&inner)
}

pub fn geometric_mean(a: &PDMatrix, b: &PDMatrix) -> Result<PDMatrix> {
    mean(&Geometric, a, b)
}

pub fn weighted_geometric_mean(a: &PDMatrix, b: &PDMatrix, p: f64) -> Result<PDMatrix> {
    mean(&MeanDescriptor::weighted_geometric(p)?, a, b)
}

pub fn dual(d: &MeanDescriptor) -> MeanDescriptor {
    d.dual()
}

/// `A m_{r,t} B`; `r = 0` is the weighted geometric mean `A ♯_t B`.
pub fn path_point(r: f64, t: f64, a: &PDMatrix, b: &PDMatrix) -> Result<PDMatrix> {
    mean(&MeanDescriptor::power_path(r, t)?, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianMatrix;

    fn scalar(x: f64) -> PDMatrix {
        PDMatrix::scalar(x).unwrap()
    }

    fn value(m: &PDMatrix) -> f64 {
        m.hermitian().get(0, 0).re
    }

    #[test]
    fn representing_examples() {
        assert_eq!(Geometric.representing(4.0), 2.0);
        assert_eq!(Power(1.0).representing(3.0), 2.0);
        assert!((Power(1.0).dual().representing(3.0) - 1.5).abs() < 1e-15);
        assert!((Power(-1.0).representing(3.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_duals_match_composition() {
        let cases = [
            Arithmetic,
            Harmonic,
            Geometric,
            WeightedGeometric(0.3),
            GeometricPath(0.8),
        ];
        for d in cases {
            let composed = DualOf(Box::new(d.clone()));
            for k in 1..50 {
                let x = 0.05 * k as f64 * k as f64;
                let diff = (d.dual().representing(x) - composed.representing(x)).abs();
                assert!(diff <= 1e-12 * x.max(1.0), "{d}: {diff:e} at {x}");
            }
        }
        assert_eq!(Geometric.dual(), Geometric);
        assert_eq!(WeightedGeometric(0.25).dual(), WeightedGeometric(0.75));
    }

    #[test]
    fn power_dual_flips_exponent() {
        for r in [-1.0, -0.5, 0.3, 1.0] {
            let d = Power(r).dual();
            for k in 1..40 {
                let x = 0.1 * k as f64;
                assert!((d.representing(x) - Power(-r).representing(x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn power_path_dual_is_negated_reversed_path() {
        let d = PowerPath { r: 0.5, t: 0.3 }.dual();
        for k in 1..40 {
            let x = 0.1 * k as f64;
            let expected = PowerPath { r: -0.5, t: 0.7 }.representing(x);
            assert!((d.representing(x) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn power_zero_is_geometric_limit() {
        assert!((Power(0.0).representing(9.0) - 3.0).abs() < 1e-14);
        let near = Power(1e-7).representing(9.0);
        assert!((near - 3.0).abs() < 1e-6);
        assert!((PowerPath { r: 0.0, t: 0.25 }.representing(16.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn grammar_round_trips() {
        for s in [
            "geometric",
            "arithmetic",
            "harmonic",
            "wgeo:0.25",
            "power:0.5",
            "path:r=0.5,t=0.25",
            "geopath:0.75",
            "dual(power:0.5)",
            "dual(dual(path:r=-1,t=1))",
        ] {
            let d: MeanDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            assert_eq!(d.to_string().parse::<MeanDescriptor>().unwrap(), d);
        }
    }

    #[test]
    fn grammar_rejects_bad_input() {
        for s in [
            "",
            "wgeo",
            "wgeo:1.5",
            "power:2",
            "path:r=0.5",
            "dual(power:0.5",
            "median",
            "power:nan",
        ] {
            assert!(s.parse::<MeanDescriptor>().is_err(), "{s}");
        }
    }

    #[test]
    fn geometric_of_identity_and_diagonal() {
        let a = PDMatrix::identity(2);
        let b = PDMatrix::diagonal(&[4.0, 9.0]).unwrap();
        let g = geometric_mean(&a, &b).unwrap();
        let d = g
            .hermitian()
            .relative_distance(&HermitianMatrix::diagonal(&[2.0, 3.0]))
            .unwrap();
        assert!(d < 1e-15);
    }

    #[test]
    fn scalar_weighted_geometric() {
        let g = weighted_geometric_mean(&scalar(1.0), &scalar(8.0), 1.0 / 3.0).unwrap();
        assert!((value(&g) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn path_scalar_cases() {
        let (a, b) = (scalar(2.0), scalar(5.0));
        let p = path_point(1.0, 0.3, &a, &b).unwrap();
        assert!((value(&p) - (0.7 * 2.0 + 0.3 * 5.0)).abs() < 1e-14);
        let g = path_point(0.0, 0.5, &PDMatrix::identity(1), &scalar(16.0)).unwrap();
        assert!((value(&g) - 4.0).abs() < 1e-14);
        // (2/3 + 1/3·√9)² = 25/9
        let h = path_point(0.5, 1.0 / 3.0, &scalar(1.0), &scalar(9.0)).unwrap();
        assert!((value(&h) - 25.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_dimension_mismatch() {
        assert!(mean(&Geometric, &PDMatrix::identity(2), &PDMatrix::identity(3)).is_err());
    }
}
