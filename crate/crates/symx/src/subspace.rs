//! Rayleigh-Ritz subspace expansion over a symmetry set: build the pencil
//! (H, S) of symmetry-sandwiched expectations and solve the generalised
//! eigenproblem H v = E S v, excluding directions where the overlap form
//! vanishes.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expansion::SymmetrySet;
use crate::linalg::hermitian_eigen;
use crate::state::{DensityOperator, Observable, PureState};

const NULLSPACE_TOL: f64 = 1e-10;

/// Pencil of H_ij = <G_i H G_j> and S_ij = <G_i G_j> on the noisy state.
#[derive(Debug, Clone)]
pub struct SubspaceProblem {
    pub h_mat: Array2<Complex64>,
    pub s_mat: Array2<Complex64>,
    pub group: SymmetrySet,
}

/// Builds the pencil for a Pauli-combination observable.
pub fn build_problem(
    rho: &DensityOperator,
    group: &SymmetrySet,
    h: &Observable,
) -> Result<SubspaceProblem> {
    if group.n() != rho.n() || h.n() != rho.n() {
        return Err(Error::DimensionMismatch(
            "subspace problem mixes qubit counts".into(),
        ));
    }
    let m = group.len();
    let mut h_mat = Array2::zeros((m, m));
    let mut s_mat = Array2::zeros((m, m));
    for (i, gi) in group.elements().iter().enumerate() {
        for (j, gj) in group.elements().iter().enumerate() {
            let mut acc = 0.0;
            for (c, p) in h.terms() {
                let word = gi.mul(p)?.mul(gj)?;
                acc += c * rho.expect_pauli(&word)?.re;
            }
            h_mat[(i, j)] = Complex64::new(acc, 0.0);
            s_mat[(i, j)] = rho.expect_pauli(&gi.mul(gj)?)?;
        }
    }
    Ok(SubspaceProblem {
        h_mat,
        s_mat,
        group: group.clone(),
    })
}

/// Builds the pencil with the ideal-state projector |psi0><psi0| as the
/// target operator, so eigenvalues are fidelities.
pub fn build_fidelity_problem(
    rho: &DensityOperator,
    group: &SymmetrySet,
    psi0: &PureState,
) -> Result<SubspaceProblem> {
    if group.n() != rho.n() || psi0.n() != rho.n() {
        return Err(Error::DimensionMismatch(
            "subspace problem mixes qubit counts".into(),
        ));
    }
    let m = group.len();
    // u_i = G_i |psi0>; H_ij = u_j^dag rho u_i.
    let us: Vec<Array1<Complex64>> = group
        .elements()
        .iter()
        .map(|g| g.apply_to_vector(&psi0.amplitudes().view()))
        .collect();
    let rho_us: Vec<Array1<Complex64>> = us.iter().map(|u| rho.matrix().dot(u)).collect();
    let mut h_mat = Array2::zeros((m, m));
    let mut s_mat = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            let val: Complex64 = us[j]
                .iter()
                .zip(rho_us[i].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            h_mat[(i, j)] = val;
            s_mat[(i, j)] = rho.expect_pauli(&group.elements()[i].mul(&group.elements()[j])?)?;
        }
    }
    Ok(SubspaceProblem {
        h_mat,
        s_mat,
        group: group.clone(),
    })
}

/// E_v = v^dag H v / v^dag S v.
pub fn rayleigh_quotient(problem: &SubspaceProblem, v: &[Complex64]) -> Result<f64> {
    let quad = |m: &Array2<Complex64>| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..v.len() {
            for j in 0..v.len() {
                acc += v[i].conj() * m[(i, j)] * v[j];
            }
        }
        acc
    };
    let den = quad(&problem.s_mat);
    if den.norm() < NULLSPACE_TOL {
        return Err(Error::SingularPencil);
    }
    Ok((quad(&problem.h_mat) / den).re)
}

/// All extremal pairs (v, E_v) with v^dag S v != 0, sorted by descending
/// eigenvalue. Solved by whitening on the range of S: directions in the
/// numerical null space of S are excluded.
pub fn solve_all(problem: &SubspaceProblem) -> Result<Vec<(Vec<Complex64>, f64)>> {
    let m = problem.s_mat.nrows();
    let (s_vals, s_vecs) = hermitian_eigen(&problem.s_mat);
    let kept: Vec<usize> = (0..m).filter(|&i| s_vals[i].abs() > NULLSPACE_TOL).collect();
    if kept.is_empty() {
        return Err(Error::SingularPencil);
    }
    // Whitener W: columns v_i / sqrt(|lambda_i|). S is PSD in exact
    // arithmetic (it is a Gram-type matrix of expectations of a group), so
    // kept eigenvalues are positive; abs guards roundoff.
    let r = kept.len();
    let mut w = Array2::zeros((m, r));
    for (col, &i) in kept.iter().enumerate() {
        let scale = 1.0 / s_vals[i].abs().sqrt();
        for row in 0..m {
            w[(row, col)] = s_vecs[(row, i)] * scale;
        }
    }
    let w_dag = w.t().mapv(|z| z.conj());
    let reduced = w_dag.dot(&problem.h_mat).dot(&w);
    // Hermitise to absorb roundoff before the eigensolve.
    let reduced = {
        let dag = reduced.t().mapv(|z| z.conj());
        (&reduced + &dag).mapv(|z| z * 0.5)
    };
    let (vals, vecs) = hermitian_eigen(&reduced);
    let mut out: Vec<(Vec<Complex64>, f64)> = (0..r)
        .map(|k| {
            let y = vecs.column(k);
            let v = w.dot(&y);
            (v.to_vec(), vals[k])
        })
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    Ok(out)
}

/// The extremal pair maximising E_v.
pub fn solve_optimal(problem: &SubspaceProblem) -> Result<(Vec<Complex64>, f64)> {
    Ok(solve_all(problem)?.into_iter().next().expect("non-empty"))
}

/// |<v, 1>| / (||v|| ||1||): how closely a weight vector matches uniform
/// weights.
pub fn cosine_with_uniform(v: &[Complex64]) -> f64 {
    let overlap: Complex64 = v.iter().sum();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    overlap.norm() / (norm * (v.len() as f64).sqrt())
}
