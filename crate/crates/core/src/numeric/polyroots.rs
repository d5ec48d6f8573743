//! Simultaneous complex root finding (Durand-Kerner) for polynomials with
//! rational coefficients. Used by the numeric eigenvalue-scaling check and
//! as the seed stage for dyadic root polishing.

use crate::rational::{rat_to_f64, Rat};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    pub fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    pub fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    pub fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    pub fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    pub fn scale(self, s: f64) -> C64 {
        C64::new(self.re * s, self.im * s)
    }
    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// All complex roots of `sum_k coeffs[k] x^k` (leading coefficient nonzero),
/// by Durand-Kerner iteration. Accuracy is ample for well-separated roots
/// and the 1e-8 tolerances used by the scaling checks.
pub fn complex_roots(coeffs: &[Rat]) -> Vec<C64> {
    let cf: Vec<f64> = coeffs.iter().map(rat_to_f64).collect();
    complex_roots_f64(&cf)
}

pub fn complex_roots_f64(cf: &[f64]) -> Vec<C64> {
    let deg = cf.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = cf[deg];
    let monic: Vec<f64> = cf.iter().map(|c| c / lead).collect();
    // Cauchy-style root bound
    let bound = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.abs())
            .fold(0.0f64, f64::max);
    let eval = |x: C64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc.mul(x).add(C64::new(c, 0.0));
        }
        acc
    };
    // spread the initial guesses on a non-real spiral
    let mut roots: Vec<C64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.5;
            C64::new(angle.cos(), angle.sin()).scale(bound * 0.7 + 0.3 * k as f64 / deg as f64)
        })
        .collect();
    for _ in 0..800 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom = denom.mul(roots[i].sub(roots[j]));
                }
            }
            if denom.norm() == 0.0 {
                // nudge coincident iterates apart
                roots[i] = roots[i].add(C64::new(1e-6, 1e-6));
                continue;
            }
            let step = eval(roots[i]).div(denom);
            roots[i] = roots[i].sub(step);
            delta = delta.max(step.norm());
        }
        if delta < 1e-13 * bound.max(1.0) {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rint;

    #[test]
    fn real_and_imaginary_roots() {
        // x^3 + 4x = x (x - 2i)(x + 2i)
        let roots = complex_roots(&[rint(0), rint(4), rint(0), rint(1)]);
        assert_eq!(roots.len(), 3);
        let mut found_zero = false;
        let mut found_2i = false;
        let mut found_m2i = false;
        for r in roots {
            if r.norm() < 1e-9 {
                found_zero = true;
            }
            if (r.re).abs() < 1e-9 && (r.im - 2.0).abs() < 1e-9 {
                found_2i = true;
            }
            if (r.re).abs() < 1e-9 && (r.im + 2.0).abs() < 1e-9 {
                found_m2i = true;
            }
        }
        assert!(found_zero && found_2i && found_m2i);
    }

    #[test]
    fn well_separated_real_roots() {
        // (x-1)(x-2)(x-3)(x+5) = x^4 - x^3 - 19x^2 + 49x - 30
        let p = [rint(-30), rint(49), rint(-19), rint(-1), rint(1)];
        let roots = complex_roots(&p);
        let mut reals: Vec<f64> = roots.iter().map(|r| r.re).collect();
        reals.sort_by(f64::total_cmp);
        let expect = [-5.0, 1.0, 2.0, 3.0];
        for (a, b) in reals.iter().zip(expect) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        assert!(roots.iter().all(|r| r.im.abs() < 1e-8));
    }
}
