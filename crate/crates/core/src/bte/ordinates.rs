//! Angular quadrature: half-range Gauss–Legendre in the axial direction
//! cosine times a uniform azimuth about the wire axis.

use std::f64::consts::PI;

/// One discrete direction with its solid-angle weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ordinate {
    /// Direction cosine along the wire axis.
    pub mu_x: f64,
    /// Direction cosine across the wire width.
    pub mu_y: f64,
    pub weight: f64,
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Product set with `polar` axial nodes (half per hemisphere) and `azimuthal`
/// uniform angles; weights sum to 4π.
///
/// Ordinates are indexed `a * azimuthal + k`, where `a` runs over axial nodes
/// and `k` over azimuthal angles φ_k = (k + ½)·2π/azimuthal.
pub fn product_set(polar: usize, azimuthal: usize) -> Vec<Ordinate> {
    let half = polar / 2;
    let (x, w) = gauss_legendre(half);
    // Map each Gauss node to (0, 1) and mirror it into (−1, 0).
    let mut axial: Vec<(f64, f64)> = Vec::with_capacity(polar);
    for (&xi, &wi) in x.iter().zip(&w).rev() {
        axial.push((-(0.5 * (xi + 1.0)), 0.5 * wi));
    }
    for (&xi, &wi) in x.iter().zip(&w) {
        axial.push((0.5 * (xi + 1.0), 0.5 * wi));
    }
    let dphi = 2.0 * PI / azimuthal as f64;
    let mut out = Vec::with_capacity(polar * azimuthal);
    for &(mu, wa) in &axial {
        let sin_theta = (1.0 - mu * mu).sqrt();
        for k in 0..azimuthal {
            let phi = (k as f64 + 0.5) * dphi;
            out.push(Ordinate {
                mu_x: mu,
                mu_y: sin_theta * phi.cos(),
                weight: wa * dphi,
            });
        }
    }
    out
}

/// Index of the ordinate mirrored across a wall normal to y (μ_y → −μ_y).
pub fn mirror_y(index: usize, azimuthal: usize) -> usize {
    let a = index / azimuthal;
    let k = index % azimuthal;
    let half = azimuthal / 2;
    let k_mirror = (azimuthal + half - 1 - k) % azimuthal;
    a * azimuthal + k_mirror
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for p in 0..(2 * n) {
                let num: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((num - exact).abs() < 1e-13, "n={n} p={p}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn weights_cover_sphere() {
        for (p, a) in [(2, 4), (8, 16), (16, 32)] {
            let set = product_set(p, a);
            let total: f64 = set.iter().map(|o| o.weight).sum();
            assert!((total / (4.0 * PI) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hemispherical_flux_is_exact() {
        let set = product_set(8, 16);
        let fx: f64 = set.iter().filter(|o| o.mu_x > 0.0).map(|o| o.weight * o.mu_x).sum();
        assert!((fx - PI).abs() < 1e-12);
        let fy: f64 = set.iter().filter(|o| o.mu_y > 0.0).map(|o| o.weight * o.mu_y).sum();
        // Azimuthal midpoint rule on |cos φ| is not exact; it converges quickly.
        assert!((fy / PI - 1.0).abs() < 1e-2);
    }

    #[test]
    fn mirror_flips_mu_y_only() {
        let a = 16;
        let set = product_set(8, a);
        for (i, o) in set.iter().enumerate() {
            let m = &set[mirror_y(i, a)];
            assert!((m.mu_y + o.mu_y).abs() < 1e-14);
            assert_eq!(m.mu_x, o.mu_x);
            assert_eq!(m.weight, o.weight);
            assert_eq!(mirror_y(mirror_y(i, a), a), i);
        }
    }
}
