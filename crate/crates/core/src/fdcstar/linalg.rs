use num::complex::Complex64;
use num::Zero;

/// An incrementally reduced row space over `ℂ`, kept in reduced row echelon
/// form. Entries below `tol` in modulus count as zero.
#[derive(Debug, Clone)]
pub struct RowSpace {
    width: usize,
    tol: f64,
    rows: Vec<Vec<Complex64>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(width: usize, tol: f64) -> Self {
        Self {
            width,
            tol,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its components along the pivot columns.
    pub fn reduce(&self, mut v: Vec<Complex64>) -> Vec<Complex64> {
        assert_eq!(v.len(), self.width, "row width");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p];
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= f * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Complex64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|z| z.norm() <= self.tol)
    }

    /// Adds `v`; returns whether it raised the rank.
    pub fn insert(&mut self, v: Vec<Complex64>) -> bool {
        let mut v = self.reduce(v);
        let (p, best) = v
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.norm()))
            .fold((0, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
        if best <= self.tol {
            return false;
        }
        let inv = v[p].inv();
        for x in v.iter_mut() {
            *x *= inv;
        }
        v[p] = Complex64::new(1.0, 0.0);
        for row in &mut self.rows {
            let f = row[p];
            if f.is_zero() {
                continue;
            }
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= f * r;
                }
            }
            row[p] = Complex64::zero();
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// A basis of `{u : row · u = 0 for every row}`, one vector per free
    /// column.
    pub fn null_space(&self) -> Vec<Vec<Complex64>> {
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.width)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut u = vec![Complex64::zero(); self.width];
                u[f] = Complex64::new(1.0, 0.0);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    u[p] = -row[f];
                }
                u
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_and_membership() {
        let mut s = RowSpace::new(3, 1e-12);
        assert!(s.insert(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]));
        assert!(s.insert(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]));
        assert!(!s.insert(vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, 1.0)]));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&[c(2.0, 0.0), c(1.0, 2.0), c(1.0, 0.0)]));
        assert!(!s.contains(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
    }

    #[test]
    fn null_space_is_annihilated() {
        let rows = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, -1.0), c(1.0, 0.0), c(3.0, 0.0)],
        ];
        let mut s = RowSpace::new(4, 1e-12);
        for r in &rows {
            s.insert(r.clone());
        }
        let null = s.null_space();
        assert_eq!(null.len(), 2);
        for u in &null {
            for r in &rows {
                let dot: Complex64 = r.iter().zip(u).map(|(a, b)| a * b).sum();
                assert!(dot.norm() < 1e-12);
            }
        }
    }
}
