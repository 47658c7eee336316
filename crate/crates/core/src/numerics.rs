//! Small numerical helpers: compensated summation and complete elliptic
//! integrals.

use std::f64::consts::FRAC_PI_2;

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

const AGM_TOL: f64 = 1e-15;

/// Complete elliptic integrals `(K(k), E(k))` of modulus `k`, given both
/// `k` and the complementary modulus `k' = sqrt(1 - k²)`.
///
/// Passing `k'` separately keeps full precision as `k → 1`, where
/// `1 - k²` cancels catastrophically. Arithmetic-geometric mean iteration.
pub fn elliptic_ke(k: f64, k_comp: f64) -> (f64, f64) {
    debug_assert!((0.0..=1.0).contains(&k) && (0.0..=1.0).contains(&k_comp));
    if k_comp == 0.0 {
        return (f64::INFINITY, 1.0);
    }
    let mut a = 1.0_f64;
    let mut b = k_comp;
    let mut c = k;
    // E/K = 1 - sum 2^(n-1) c_n^2
    let mut pow = 0.5;
    let mut defect = pow * c * c;
    for _ in 0..64 {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = a_next;
        b = b_next;
        pow *= 2.0;
        defect += pow * c * c;
        if c.abs() <= AGM_TOL * a {
            break;
        }
    }
    let kk = FRAC_PI_2 / a;
    (kk, kk * (1.0 - defect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Simpson quadrature of the defining integrals, used as an oracle.
    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn agm_matches_quadrature() {
        for &k in &[0.0, 0.1, 0.5, 0.8, 0.95] {
            let kc = (1.0_f64 - k * k).sqrt();
            let (kk, ee) = elliptic_ke(k, kc);
            let kq = quad(|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 2000);
            let eq = quad(|t: f64| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 2000);
            assert!((kk - kq).abs() < 1e-12, "K({k}) = {kk} vs {kq}");
            assert!((ee - eq).abs() < 1e-12, "E({k}) = {ee} vs {eq}");
        }
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K - K K' = pi/2
        for &k in &[0.2, 0.6, 0.9, 0.999] {
            let kc = (1.0_f64 - k * k).sqrt();
            let (kk, ee) = elliptic_ke(k, kc);
            let (kp, ep) = elliptic_ke(kc, k);
            assert!((ee * kp + ep * kk - kk * kp - PI / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn compensated_beats_naive() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
    }
}
