//! Piecewise-constant functions on a closed interval `[0, T]` with
//! distinguished values at finitely many points.

/// `at[i]` holds on `points[i]`, `between[i]` on the open gap
/// `(points[i], points[i + 1])`. The first point is 0 and the last is `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise<V> {
    points: Vec<f64>,
    at: Vec<V>,
    between: Vec<V>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PiecewiseError {
    #[error("points must start at 0, increase strictly and end at a positive horizon")]
    BadPoints,
    #[error("expected {points} point values and {gaps} gap values")]
    BadLengths { points: usize, gaps: usize },
    #[error("time {0} outside the domain [0, {1}]")]
    OutOfDomain(f64, f64),
    #[error("smoothing radius must be a nonnegative number, got {0}")]
    NegativeRadius(f64),
}

impl<V: Clone + PartialEq> Piecewise<V> {
    pub fn new(points: Vec<f64>, at: Vec<V>, between: Vec<V>) -> Result<Self, PiecewiseError> {
        let ok = points.len() >= 2
            && points[0] == 0.0
            && points.windows(2).all(|w| w[0] < w[1])
            && points.last().is_some_and(|t| t.is_finite());
        if !ok {
            return Err(PiecewiseError::BadPoints);
        }
        if at.len() != points.len() || between.len() + 1 != points.len() {
            return Err(PiecewiseError::BadLengths {
                points: points.len(),
                gaps: points.len() - 1,
            });
        }
        Ok(Piecewise { points, at, between })
    }

    pub fn constant(horizon: f64, value: V) -> Result<Self, PiecewiseError> {
        Self::new(vec![0.0, horizon], vec![value.clone(), value.clone()], vec![value])
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn at(&self) -> &[V] {
        &self.at
    }

    pub fn between(&self) -> &[V] {
        &self.between
    }

    pub fn horizon(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Points strictly inside `(0, T)`.
    pub fn interior_points(&self) -> &[f64] {
        &self.points[1..self.points.len() - 1]
    }

    pub fn tolerance(&self) -> f64 {
        1e-9 * self.horizon().max(1.0)
    }

    pub fn value_at(&self, t: f64) -> Result<&V, PiecewiseError> {
        let tol = self.tolerance();
        let horizon = self.horizon();
        if !(t >= -tol && t <= horizon + tol) {
            return Err(PiecewiseError::OutOfDomain(t, horizon));
        }
        let i = self.points.partition_point(|&p| p < t - tol);
        if i < self.points.len() && (self.points[i] - t).abs() <= tol {
            return Ok(&self.at[i]);
        }
        Ok(&self.between[i - 1])
    }

    pub fn map<W, F: FnMut(&V) -> W>(&self, mut f: F) -> Piecewise<W> {
        Piecewise {
            points: self.points.clone(),
            at: self.at.iter().map(&mut f).collect(),
            between: self.between.iter().map(&mut f).collect(),
        }
    }

    /// Drops interior points whose value matches both neighbouring gaps.
    pub fn normalize(mut self) -> Self {
        let mut i = 1;
        while i + 1 < self.points.len() {
            if self.at[i] == self.between[i - 1] && self.at[i] == self.between[i] {
                self.points.remove(i);
                self.at.remove(i);
                self.between.remove(i);
            } else {
                i += 1;
            }
        }
        self
    }

    /// The function `t -> join of all values on [t - eps, t + eps] ∩ [0, T]`.
    pub fn smooth<F>(&self, eps: f64, join: F) -> Result<Self, PiecewiseError>
    where
        F: Fn(&V, &V) -> V,
    {
        if !(eps >= 0.0) {
            return Err(PiecewiseError::NegativeRadius(eps));
        }
        if eps == 0.0 {
            return Ok(self.clone());
        }
        let horizon = self.horizon();
        let tol = self.tolerance();
        let mut cuts = vec![0.0, horizon];
        for &p in &self.points {
            for q in [p - eps, p + eps] {
                if q > 0.0 && q < horizon {
                    cuts.push(q);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut points: Vec<f64> = Vec::with_capacity(cuts.len());
        for c in cuts {
            match points.last() {
                Some(&last) if c - last <= tol => {}
                _ => points.push(c),
            }
        }
        // a cut just below the horizon merges into it
        match points.len() {
            1 => points.push(horizon),
            n => points[n - 1] = horizon,
        }
        let window = |t: f64| self.window_join(t - eps, t + eps, &join);
        let at = points.iter().map(|&p| window(p)).collect();
        let between = points
            .windows(2)
            .map(|w| window(0.5 * (w[0] + w[1])))
            .collect();
        Ok(Piecewise { points, at, between }.normalize())
    }

    fn window_join<F: Fn(&V, &V) -> V>(&self, a: f64, b: f64, join: &F) -> V {
        let tol = self.tolerance();
        let mut acc: Option<V> = None;
        let mut absorb = |v: &V| {
            acc = Some(match acc.take() {
                None => v.clone(),
                Some(x) => join(&x, v),
            })
        };
        for (i, &p) in self.points.iter().enumerate() {
            if p >= a - tol && p <= b + tol {
                absorb(&self.at[i]);
            }
            if i + 1 < self.points.len() && p < b - tol && self.points[i + 1] > a + tol {
                absorb(&self.between[i]);
            }
        }
        acc.expect("window meets the domain")
    }
}
