use crate::error::{Error, Result};

/// Distance model on an [`IndexSet`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Metric {
    Euclidean,
    /// Coordinates live on the torus `[0, period)^m`; distances are taken to
    /// the nearest periodic translate.
    Toroidal { period: f64 },
}

/// Finite ordered set of distinct points in `R^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexSet {
    points: Vec<Vec<f64>>,
    dim: usize,
    metric: Metric,
}

impl IndexSet {
    pub fn new(points: Vec<Vec<f64>>, metric: Metric) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or_else(|| Error::Input("index set is empty".into()))?;
        if dim == 0 {
            return Err(Error::Input("index points must have at least one coordinate".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Dimension("index points of unequal dimension".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Input("index points must be finite".into()));
        }
        if let Metric::Toroidal { period } = metric {
            if !(period > 0.0 && period.is_finite()) {
                return Err(Error::Input(format!("toroidal period must be positive, got {period}")));
            }
            if points.iter().flatten().any(|&x| !(0.0..period).contains(&x)) {
                return Err(Error::Input(format!(
                    "toroidal coordinates must lie in [0, {period})"
                )));
            }
        }
        let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("index points must be pairwise distinct".into()));
        }
        Ok(Self { points, dim, metric })
    }

    /// `{0, 1, ..., len-1}` on the real line.
    pub fn range(len: usize) -> Result<Self> {
        Self::new((0..len).map(|k| vec![k as f64]).collect(), Metric::Euclidean)
    }

    /// Product grid `{(i*step_x, j*step_y)}` on the torus of the given period.
    pub fn toroidal_grid(period: usize, step_x: usize, step_y: usize) -> Result<Self> {
        if step_x == 0 || step_y == 0 || period % step_x != 0 || period % step_y != 0 {
            return Err(Error::Input(format!(
                "grid steps ({step_x}, {step_y}) must divide the period {period}"
            )));
        }
        let mut points = Vec::new();
        for x in (0..period).step_by(step_x) {
            for w in (0..period).step_by(step_y) {
                points.push(vec![x as f64, w as f64]);
            }
        }
        Self::new(points, Metric::Toroidal { period: period as f64 })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    fn reduce(&self, x: f64) -> f64 {
        match self.metric {
            Metric::Euclidean => x,
            Metric::Toroidal { period } => {
                let r = x.rem_euclid(period);
                if r > period / 2.0 {
                    r - period
                } else {
                    r
                }
            }
        }
    }

    /// Coordinates of point `k` reduced to the symmetric fundamental domain
    /// `(-L/2, L/2]^m` on a torus; unchanged otherwise.
    pub fn reduced_point(&self, k: usize) -> Vec<f64> {
        self.points[k].iter().map(|&x| self.reduce(x)).collect()
    }

    /// `k - l`, reduced to the symmetric fundamental domain on a torus.
    pub fn difference(&self, k: usize, l: usize) -> Vec<f64> {
        self.points[k]
            .iter()
            .zip(&self.points[l])
            .map(|(a, b)| self.reduce(a - b))
            .collect()
    }

    /// Euclidean distance, or the minimum over periodic translates on a torus.
    pub fn distance(&self, k: usize, l: usize) -> f64 {
        self.difference(k, l).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest number of index points inside a closed unit ball centred at an index point.
    pub fn max_points_per_unit_ball(&self) -> usize {
        (0..self.len())
            .map(|k| (0..self.len()).filter(|&l| self.distance(k, l) <= 1.0).count())
            .max()
            .unwrap_or(0)
    }

    /// Indices sorted by increasing distance from the centroid (ties by index).
    ///
    /// On a torus the centroid is taken to be the first point, since the
    /// coordinate mean is not translation invariant there.
    pub fn centroid_order(&self) -> Vec<usize> {
        let dist: Vec<f64> = match self.metric {
            Metric::Euclidean => {
                let n = self.len() as f64;
                let centre: Vec<f64> = (0..self.dim)
                    .map(|i| self.points.iter().map(|p| p[i]).sum::<f64>() / n)
                    .collect();
                self.points
                    .iter()
                    .map(|p| p.iter().zip(&centre).map(|(a, c)| (a - c).powi(2)).sum::<f64>().sqrt())
                    .collect()
            }
            Metric::Toroidal { .. } => (0..self.len()).map(|k| self.distance(k, 0)).collect(),
        };
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
        order
    }

    /// Whether every coordinate is an integer (and the period, on a torus).
    pub fn is_integer_lattice(&self) -> bool {
        let int = |x: f64| x == x.round();
        let period_ok = match self.metric {
            Metric::Euclidean => true,
            Metric::Toroidal { period } => int(period),
        };
        period_ok && self.points.iter().flatten().all(|&x| int(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(IndexSet::new(vec![vec![0.0], vec![0.0]], Metric::Euclidean).is_err());
        assert!(IndexSet::new(vec![vec![4.0]], Metric::Toroidal { period: 4.0 }).is_err());
        assert!(IndexSet::new(vec![], Metric::Euclidean).is_err());
    }

    #[test]
    fn toroidal_distance_wraps() {
        let x = IndexSet::new(vec![vec![0.0, 0.0], vec![7.0, 1.0]], Metric::Toroidal { period: 8.0 }).unwrap();
        assert!((x.distance(0, 1) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(x.difference(1, 0), vec![-1.0, 1.0]);
        let e = IndexSet::new(vec![vec![0.0, 0.0], vec![7.0, 1.0]], Metric::Euclidean).unwrap();
        assert!((e.distance(0, 1) - 50f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn grid_and_lattice() {
        let g = IndexSet::toroidal_grid(8, 2, 4).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.is_integer_lattice());
        assert!(IndexSet::toroidal_grid(8, 3, 4).is_err());
        let off = IndexSet::new(vec![vec![0.5]], Metric::Euclidean).unwrap();
        assert!(!off.is_integer_lattice());
    }

    #[test]
    fn centroid_order_starts_in_the_middle() {
        let x = IndexSet::range(5).unwrap();
        assert_eq!(x.centroid_order(), vec![2, 1, 3, 0, 4]);
    }
}
