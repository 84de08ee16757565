use std::fmt;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::element::same_algebra;
use super::{AlgebraElement, LinearMap};

/// One conditional-expectation axiom and how far the map is from it.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`verify_expectation`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationReport {
    pub checks: Vec<Check>,
}

impl ExpectationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ExpectationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}\t{}\t{}", c.name, if c.passed { "ok" } else { "FAIL" }, c.detail)?;
        }
        Ok(())
    }
}

const POSITIVITY_SAMPLES: usize = 16;

fn deviation_check(name: &'static str, deviation: f64, tol: f64) -> Check {
    Check {
        name,
        passed: deviation <= tol,
        detail: format!("max deviation {deviation:.3e}"),
    }
}

fn hermitian_min_eigenvalue(m: &DMatrix<Complex64>) -> (f64, f64) {
    let asym = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let min = h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    (min, asym)
}

/// Checks that `q`, a linear map of an algebra into itself, is a faithful
/// conditional expectation onto the span of `m_basis`.
///
/// Checked to `tol`: unitality, idempotence, range inside `span M`, `Q = id`
/// on `M`, left and right `M`-modularity on every (basis element, matrix
/// unit) pair, positivity on seeded random `f*f`, and faithfulness through
/// positive definiteness of the density of `trace ∘ Q`.
pub fn verify_expectation(q: &LinearMap, m_basis: &[AlgebraElement], tol: f64) -> ExpectationReport {
    assert!(
        same_algebra(q.domain(), q.codomain()),
        "expectation maps an algebra into itself"
    );
    let rel = q.domain().clone();
    let images: Vec<AlgebraElement> = (0..rel.dimension()).map(|k| q.image_of_unit(k)).collect();
    let apply = |f: &AlgebraElement| q.apply(f).expect("same algebra");
    let mut checks = Vec::new();

    let one = AlgebraElement::identity(&rel);
    checks.push(deviation_check("unital", apply(&one).distance(&one), tol));

    let idem = images.iter().map(|e| apply(e).distance(e)).fold(0.0, f64::max);
    checks.push(deviation_check("idempotent", idem, tol));

    // orthonormal basis of span M for residuals, kept sparse
    let mut ortho: Vec<Vec<(usize, Complex64)>> = Vec::new();
    let project_out = |v: &mut Vec<Complex64>, ortho: &[Vec<(usize, Complex64)>]| {
        for u in ortho {
            let dot: Complex64 = u.iter().map(|&(i, a)| a.conj() * v[i]).sum();
            for &(i, a) in u {
                v[i] -= dot * a;
            }
        }
    };
    for m in m_basis {
        let mut v = m.entries().to_vec();
        project_out(&mut v, &ortho);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol {
            ortho.push(
                v.into_iter()
                    .enumerate()
                    .filter(|(_, z)| !z.is_zero())
                    .map(|(i, z)| (i, z / norm))
                    .collect(),
            );
        }
    }
    let residual = |f: &AlgebraElement| {
        let mut v = f.entries().to_vec();
        project_out(&mut v, &ortho);
        v.iter().map(|z| z.norm()).fold(0.0, f64::max)
    };
    let range = images.iter().map(residual).fold(0.0, f64::max);
    checks.push(deviation_check("range in M", range, tol));

    let fixes = m_basis.iter().map(|m| apply(m).distance(m)).fold(0.0, f64::max);
    checks.push(deviation_check("identity on M", fixes, tol));

    let (left, right) = modular_deviation(q, m_basis);
    checks.push(deviation_check("left modular", left, tol));
    checks.push(deviation_check("right modular", right, tol));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst_eig = f64::INFINITY;
    let mut worst_asym: f64 = 0.0;
    for _ in 0..POSITIVITY_SAMPLES {
        let f = AlgebraElement::from_fn(&rel, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let image = apply(&f.adjoint().mul(&f));
        for v in 0..rel.class_count() {
            let (min, asym) = hermitian_min_eigenvalue(&image.block(v));
            worst_eig = worst_eig.min(min);
            worst_asym = worst_asym.max(asym);
        }
    }
    checks.push(Check {
        name: "positive",
        passed: worst_eig >= -tol && worst_asym <= tol,
        detail: format!("min eigenvalue {worst_eig:.3e}, max asymmetry {worst_asym:.3e}"),
    });

    // density D of φ = trace ∘ Q: φ(f) = Σ D(y, x) f(x, y)
    let mut worst_density = f64::INFINITY;
    for v in 0..rel.class_count() {
        let members = rel.members(v);
        let s = members.len();
        let density = DMatrix::from_fn(s, s, |i, j| {
            let k = rel.coord(members[j], members[i]).expect("same class");
            images[k].trace()
        });
        let (min, _) = hermitian_min_eigenvalue(&density);
        worst_density = worst_density.min(min);
    }
    checks.push(Check {
        name: "faithful",
        passed: worst_density > tol,
        detail: format!("min density eigenvalue {worst_density:.3e}"),
    });

    ExpectationReport { checks }
}

/// Largest deviation in `Q(m e) = m Q(e)` and `Q(e m) = Q(e) m` over basis
/// elements `m` and matrix units `e`, computed on sparse supports.
fn modular_deviation(q: &LinearMap, m_basis: &[AlgebraElement]) -> (f64, f64) {
    let rel = q.domain();
    let n = rel.point_count();
    let mut acc = vec![Complex64::zero(); rel.dimension()];
    let mut touched: Vec<usize> = Vec::new();
    let add = |acc: &mut Vec<Complex64>, touched: &mut Vec<usize>, k: usize, z: Complex64| {
        if acc[k].is_zero() {
            touched.push(k);
        }
        acc[k] += z;
    };
    let (mut left, mut right): (f64, f64) = (0.0, 0.0);
    for m in m_basis {
        // by_col[x] = (z, m(z, x)), by_row[y] = (w, m(y, w))
        let mut by_col: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
        let mut by_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
        for (k, z) in m.nonzeros() {
            let (a, b) = rel.pair(k);
            by_col[b].push((a, z));
            by_row[a].push((b, z));
        }
        for (k, &(x, y)) in rel.pairs().iter().enumerate() {
            let qe = q.column(k);
            for side in 0..2 {
                // m e_xy = Σ_z m(z, x) e_zy and e_xy m = Σ_w m(y, w) e_xw
                let lifted = if side == 0 { &by_col[x] } else { &by_row[y] };
                for &(z, c) in lifted {
                    let j = if side == 0 { rel.coord(z, y) } else { rel.coord(x, z) }.expect("same class");
                    for &(i, w) in q.column(j) {
                        add(&mut acc, &mut touched, i, c * w);
                    }
                }
                for &(i, w) in qe {
                    let (u, t) = rel.pair(i);
                    let terms = if side == 0 { &by_col[u] } else { &by_row[t] };
                    for &(z, c) in terms {
                        let j = if side == 0 { rel.coord(z, t) } else { rel.coord(u, z) }.expect("same class");
                        add(&mut acc, &mut touched, j, -(c * w));
                    }
                }
                let dev = touched.iter().map(|&i| acc[i].norm()).fold(0.0, f64::max);
                if side == 0 {
                    left = left.max(dev);
                } else {
                    right = right.max(dev);
                }
                for i in touched.drain(..) {
                    acc[i] = Complex64::zero();
                }
            }
        }
    }
    (left, right)
}
