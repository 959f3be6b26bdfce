//! Dense helpers: a Jacobi eigensolver for Hermitian matrices, Kronecker
//! products and deterministic random unitaries.
//!
//! The eigensolver only ever sees small matrices here (overlap pencils up
//! to |G| x |G|, few-qubit states in tests), so a cyclic Jacobi sweep is
//! plenty and keeps the crate free of LAPACK bindings.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary whose columns are the matching eigenvectors.
pub fn hermitian_eigen(a: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    let mut m = a.clone();
    let mut v = Array2::eye(n);
    let norm: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = (norm * 1e-15).max(1e-300);

    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m[(p, q)];
                if beta.norm() <= tol / (n as f64) {
                    continue;
                }
                let alpha = m[(p, p)].re;
                let gamma = m[(q, q)].re;
                let b = beta.norm();
                let phase = beta / b; // e^{i phi}
                let tau = (gamma - alpha) / (2.0 * b);
                // Stable root of t^2 - 2 tau t - 1 = 0 with |t| <= 1.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // 2x2 unitary W = diag(1, conj(phase)) * real rotation.
                let w00 = Complex64::new(c, 0.0);
                let w01 = Complex64::new(-s, 0.0);
                let w10 = phase.conj() * s;
                let w11 = phase.conj() * c;
                // Columns: A <- A W on columns p, q.
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp * w00 + akq * w10;
                    m[(k, q)] = akp * w01 + akq * w11;
                }
                // Rows: A <- W^dag A on rows p, q.
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = w00.conj() * apk + w10.conj() * aqk;
                    m[(q, k)] = w01.conj() * apk + w11.conj() * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * w00 + vkq * w10;
                    v[(k, q)] = vkp * w01 + vkq * w11;
                }
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let values: Vec<f64> = pairs.iter().map(|(l, _)| *l).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, (_, src)) in pairs.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, *src)];
        }
    }
    (values, vectors)
}

pub fn min_eigenvalue(a: &Array2<Complex64>) -> f64 {
    hermitian_eigen(a).0[0]
}

pub fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn matrix_power(a: &Array2<Complex64>, m: usize) -> Array2<Complex64> {
    let n = a.nrows();
    let mut out = Array2::eye(n);
    for _ in 0..m {
        out = out.dot(a);
    }
    out
}

/// Haar-ish random unitary from Gram-Schmidt on a complex Gaussian matrix.
/// Deterministic given the RNG state; used by tests and cross-checks.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> Array2<Complex64> {
    let mut cols: Vec<Array1<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Array1<Complex64> = Array1::from_iter(
            (0..dim).map(|_| Complex64::new(gauss(rng), gauss(rng))),
        );
        for u in &cols {
            let overlap: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            v = &v - &u.mapv(|x| x * overlap);
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.mapv(|x| x / norm));
    }
    let mut out = Array2::zeros((dim, dim));
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            out[(i, j)] = col[i];
        }
    }
    out
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; two uniforms per call is fine at this scale.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha12Rng) -> Array2<Complex64> {
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            a[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                a[(i, j)] = z;
                a[(j, i)] = z.conj();
            }
        }
        a
    }

    #[test]
    fn jacobi_reconstructs_matrix() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for n in [2, 5, 12] {
            let a = random_hermitian(n, &mut rng);
            let (vals, vecs) = hermitian_eigen(&a);
            // A v_k = lambda_k v_k
            for k in 0..n {
                let v = vecs.column(k);
                let av = a.dot(&v);
                for i in 0..n {
                    let expected = v[i] * vals[k];
                    assert_abs_diff_eq!(av[i].re, expected.re, epsilon = 1e-9);
                    assert_abs_diff_eq!(av[i].im, expected.im, epsilon = 1e-9);
                }
            }
            // Ascending order.
            for k in 1..n {
                assert!(vals[k] >= vals[k - 1]);
            }
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let u = random_unitary(8, &mut rng);
        let mut dag = Array2::zeros((8, 8));
        for i in 0..8 {
            for j in 0..8 {
                dag[(i, j)] = u[(j, i)].conj();
            }
        }
        let prod = dag.dot(&u);
        for i in 0..8 {
            for j in 0..8 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(prod[(i, j)].re, expect, epsilon = 1e-10);
                assert_abs_diff_eq!(prod[(i, j)].im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = Array2::from_shape_vec(
            (2, 2),
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        let k = kron(&a, &a);
        assert_eq!(k.dim(), (4, 4));
        assert_abs_diff_eq!(k[(3, 3)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k[(1, 1)].re, -1.0, epsilon = 1e-15);
    }
}
