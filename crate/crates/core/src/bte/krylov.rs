//! Restarted GMRES used to accelerate source iteration.

pub(crate) struct KrylovReport {
    pub operator_applications: usize,
    /// Relative residual norms, one per Arnoldi step.
    pub history: Vec<f64>,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = b` where `apply(v, out)` writes `A v` into `out`.
/// `x` holds the initial guess on entry and the solution on exit.
pub(crate) fn gmres<F>(
    mut apply: F,
    b: &[f64],
    x: &mut [f64],
    restart: usize,
    tol: f64,
    max_applications: usize,
) -> KrylovReport
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut report = KrylovReport {
        operator_applications: 0,
        history: Vec::new(),
        converged: false,
    };
    let b_norm = norm(b);
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        report.converged = true;
        return report;
    }
    let m = restart.max(1);
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    loop {
        apply(x, &mut r);
        report.operator_applications += 1;
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let beta = norm(&r);
        report.history.push(beta / b_norm);
        if beta <= tol * b_norm {
            report.converged = true;
            return report;
        }
        if report.operator_applications >= max_applications {
            return report;
        }

        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut steps = 0;
        for k in 0..m {
            apply(&basis[k], &mut w);
            report.operator_applications += 1;
            for (i, v) in basis.iter().enumerate() {
                let hik = dot(&w, v);
                h[i][k] = hik;
                w.iter_mut().zip(v).for_each(|(wj, vj)| *wj -= hik * vj);
            }
            let h_next = norm(&w);
            h[k + 1][k] = h_next;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let d = h[k][k].hypot(h[k + 1][k]);
            if d == 0.0 {
                steps = k;
                break;
            }
            cs[k] = h[k][k] / d;
            sn[k] = h[k + 1][k] / d;
            h[k][k] = d;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            steps = k + 1;
            let res = g[k + 1].abs() / b_norm;
            report.history.push(res);
            if res <= tol || h_next == 0.0 || report.operator_applications >= max_applications {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }
        // Back substitution on the rotated Hessenberg matrix.
        let mut y = vec![0.0; steps];
        for i in (0..steps).rev() {
            let s: f64 = ((i + 1)..steps).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (yi, v) in y.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(xj, vj)| *xj += yi * vj);
        }
    }
}
