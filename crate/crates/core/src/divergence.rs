//! Distances between discrete distributions, stochastic-matrix diameters
//! and mutual information. Logarithms are natural throughout.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dbn::STOCHASTIC_TOL;

#[derive(Debug, Error, PartialEq)]
pub enum DivergenceError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("not a probability vector: {0:?}")]
    NotProbability(Vec<f64>),
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("not a joint distribution")]
    NotJoint,
    #[error("unknown divergence: {0}")]
    Unknown(String),
}

/// A symmetric distance between probability vectors of equal length.
pub trait Divergence {
    /// Evaluate on inputs already known to be probability vectors.
    fn distance(&self, p: &[f64], q: &[f64]) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DivergenceKind {
    #[default]
    TotalVariation,
    /// Jeffreys divergence `D(p||q) + D(q||p)`.
    SymmetrizedKl,
    Hellinger,
    Bhattacharyya,
}

impl DivergenceKind {
    pub const ALL: [DivergenceKind; 4] = [
        DivergenceKind::TotalVariation,
        DivergenceKind::SymmetrizedKl,
        DivergenceKind::Hellinger,
        DivergenceKind::Bhattacharyya,
    ];

    pub fn token(self) -> &'static str {
        match self {
            DivergenceKind::TotalVariation => "tv",
            DivergenceKind::SymmetrizedKl => "kl",
            DivergenceKind::Hellinger => "hellinger",
            DivergenceKind::Bhattacharyya => "bhattacharyya",
        }
    }
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for DivergenceKind {
    type Err = DivergenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tv" | "total_variation" => Ok(DivergenceKind::TotalVariation),
            "kl" | "symmetrized_kl" => Ok(DivergenceKind::SymmetrizedKl),
            "hellinger" => Ok(DivergenceKind::Hellinger),
            "bhattacharyya" => Ok(DivergenceKind::Bhattacharyya),
            other => Err(DivergenceError::Unknown(other.to_string())),
        }
    }
}

impl Divergence for DivergenceKind {
    fn distance(&self, p: &[f64], q: &[f64]) -> f64 {
        if p == q {
            return 0.0;
        }
        match self {
            DivergenceKind::TotalVariation => {
                0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
            }
            DivergenceKind::SymmetrizedKl => {
                let mut total = 0.0;
                for (&a, &b) in p.iter().zip(q) {
                    if a == b {
                        continue;
                    }
                    if a == 0.0 || b == 0.0 {
                        return f64::INFINITY;
                    }
                    // a ln(a/b) + b ln(b/a)
                    total += (a - b) * (a / b).ln();
                }
                total.max(0.0)
            }
            DivergenceKind::Hellinger => {
                let s: f64 = p
                    .iter()
                    .zip(q)
                    .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
                    .sum();
                (s.sqrt() / std::f64::consts::SQRT_2).min(1.0)
            }
            DivergenceKind::Bhattacharyya => {
                let bc: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
                if bc <= 0.0 {
                    f64::INFINITY
                } else {
                    (-bc.ln()).max(0.0)
                }
            }
        }
    }
}

pub(crate) fn check_probability(p: &[f64]) -> Result<(), DivergenceError> {
    let ok = !p.is_empty()
        && p.iter().all(|x| x.is_finite() && *x >= 0.0)
        && (p.iter().sum::<f64>() - 1.0).abs() <= STOCHASTIC_TOL;
    if ok {
        Ok(())
    } else {
        Err(DivergenceError::NotProbability(p.to_vec()))
    }
}

/// Checked evaluation of a divergence between two probability vectors.
pub fn divergence_eval(kind: DivergenceKind, p: &[f64], q: &[f64]) -> Result<f64, DivergenceError> {
    if p.len() != q.len() {
        return Err(DivergenceError::LengthMismatch(p.len(), q.len()));
    }
    check_probability(p)?;
    check_probability(q)?;
    Ok(kind.distance(p, q))
}

fn pairwise<D, R>(rows: &[R], div: &D) -> Result<Vec<f64>, DivergenceError>
where
    D: Divergence + ?Sized,
    R: AsRef<[f64]>,
{
    if rows.is_empty() {
        return Err(DivergenceError::EmptyMatrix);
    }
    let width = rows[0].as_ref().len();
    for r in rows {
        let r = r.as_ref();
        if r.len() != width {
            return Err(DivergenceError::LengthMismatch(width, r.len()));
        }
        check_probability(r)?;
    }
    let mut out = Vec::with_capacity(rows.len() * (rows.len() - 1) / 2);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            out.push(div.distance(rows[i].as_ref(), rows[j].as_ref()));
        }
    }
    Ok(out)
}

/// Largest divergence between two distinct rows; zero for a single row.
pub fn upper_diameter<D, R>(rows: &[R], div: &D) -> Result<f64, DivergenceError>
where
    D: Divergence + ?Sized,
    R: AsRef<[f64]>,
{
    Ok(pairwise(rows, div)?.into_iter().fold(0.0, f64::max))
}

/// Smallest divergence between two distinct rows; zero for a single row.
pub fn lower_diameter<D, R>(rows: &[R], div: &D) -> Result<f64, DivergenceError>
where
    D: Divergence + ?Sized,
    R: AsRef<[f64]>,
{
    let d = pairwise(rows, div)?;
    if d.is_empty() {
        return Ok(0.0);
    }
    Ok(d.into_iter().fold(f64::INFINITY, f64::min))
}

/// Mutual information of a joint table `joint[x][y]`, natural log.
pub fn mutual_information<R: AsRef<[f64]>>(joint: &[R]) -> Result<f64, DivergenceError> {
    if joint.is_empty() {
        return Err(DivergenceError::NotJoint);
    }
    let width = joint[0].as_ref().len();
    if width == 0 || joint.iter().any(|r| r.as_ref().len() != width) {
        return Err(DivergenceError::NotJoint);
    }
    let mut total = 0.0;
    for r in joint {
        for &v in r.as_ref() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(DivergenceError::NotJoint);
            }
            total += v;
        }
    }
    if (total - 1.0).abs() > STOCHASTIC_TOL {
        return Err(DivergenceError::NotJoint);
    }
    let px: Vec<f64> = joint.iter().map(|r| r.as_ref().iter().sum()).collect();
    let py: Vec<f64> = (0..width)
        .map(|y| joint.iter().map(|r| r.as_ref()[y]).sum())
        .collect();
    let mut mi = 0.0;
    for (x, r) in joint.iter().enumerate() {
        for (y, &pxy) in r.as_ref().iter().enumerate() {
            if pxy > 0.0 {
                mi += pxy * (pxy / (px[x] * py[y])).ln();
            }
        }
    }
    Ok(mi.max(0.0))
}
