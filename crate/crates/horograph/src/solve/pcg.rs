//! Sparse symmetric solves for the Newton step.

/// Compressed sparse row matrix with a fixed symmetric pattern.
pub struct Csr {
    pub rowptr: Vec<usize>,
    pub colidx: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Csr {
    pub fn nrows(&self) -> usize {
        self.rowptr.len() - 1
    }

    pub fn mul(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.nrows() {
            let mut acc = 0.0;
            for k in self.rowptr[i]..self.rowptr[i + 1] {
                acc += self.vals[k] * x[self.colidx[k]];
            }
            out[i] = acc;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.nrows()];
        for i in 0..self.nrows() {
            for k in self.rowptr[i]..self.rowptr[i + 1] {
                if self.colidx[k] == i {
                    d[i] = self.vals[k];
                }
            }
        }
        d
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients with Jacobi preconditioning, starting from zero.
///
/// Returns the solution and the iteration count, or the achieved relative
/// residual if the budget runs out.
pub fn solve_pcg(a: &Csr, rhs: &[f64], rel_tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize), f64> {
    let n = a.nrows();
    let norm_rhs = dot(rhs, rhs).sqrt();
    if norm_rhs == 0.0 {
        return Ok((vec![0.0; n], 0));
    }
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|&d| 1.0 / d).collect();
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        a.mul(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(f64::NAN);
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let norm_r = dot(&r, &r).sqrt();
        if norm_r <= rel_tol * norm_rhs {
            return Ok((x, it + 1));
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let mut res = vec![0.0; n];
    a.mul(&x, &mut res);
    let err = res
        .iter()
        .zip(rhs)
        .map(|(ax, b)| (ax - b) * (ax - b))
        .sum::<f64>()
        .sqrt();
    Err(err / norm_rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_a_small_spd_solve() {
        let a = Csr {
            rowptr: vec![0, 2, 5, 7],
            colidx: vec![0, 1, 0, 1, 2, 1, 2],
            vals: vec![4.0, 1.0, 1.0, 3.0, -1.0, -1.0, 2.0],
        };
        let x_true = [1.0, -2.0, 0.5];
        let mut rhs = vec![0.0; 3];
        a.mul(&x_true, &mut rhs);
        let (x, _) = solve_pcg(&a, &rhs, 1e-14, 100).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_an_indefinite_matrix() {
        let a = Csr {
            rowptr: vec![0, 1, 2],
            colidx: vec![0, 1],
            vals: vec![1.0, -1.0],
        };
        assert!(solve_pcg(&a, &[1.0, 1.0], 1e-12, 50).is_err());
    }
}
