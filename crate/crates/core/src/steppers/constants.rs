//! Pole/weight tables of the rational approximations used by the steppers.

use num_complex::Complex64;

const fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Padé(2,2) partial-fraction constants.
///
/// With `R(z) = (12 − 6z + z²)/(12 + 6z + z²) ≈ e^{−z}` and its half-step
/// counterpart `R̃(z) ≈ e^{−z/2}`:
///
/// * `R(z)  = 1 + 2 Re(w11/(z − c1))`
/// * `R̃(z) = 1 + 4 Re(w11/(z − c2))`
/// * `P1(z) = 2k Re(w21/(z − c1))`, `P2(z) = 4k Re(w31/(z − c1))`,
///   `P3(z) = 2k Re(w41/(z − c1))`
/// * `P̃(z) = 48k Re(w51/(z − c2))`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadeConstants {
    pub c1: Complex64,
    pub c2: Complex64,
    pub w11: Complex64,
    pub w21: Complex64,
    pub w31: Complex64,
    pub w41: Complex64,
    pub w51: Complex64,
}

impl Default for PadeConstants {
    fn default() -> Self {
        Self::new()
    }
}

impl PadeConstants {
    pub fn new() -> Self {
        let r3 = 3f64.sqrt();
        Self {
            c1: cx(-3.0, r3),
            c2: cx(-6.0, 2.0 * r3),
            w11: cx(-6.0, -18.0 / r3),
            w21: cx(-0.5, -5.0 * r3 / 6.0),
            w31: cx(0.0, -r3 / 6.0),
            w41: cx(0.5, r3 / 6.0),
            w51: cx(0.0, -r3 / 12.0),
        }
    }

    /// `R(z)` from its rational form.
    pub fn r22(z: Complex64) -> Complex64 {
        (12.0 - 6.0 * z + z * z) / (12.0 + 6.0 * z + z * z)
    }

    /// `R̃(z)` (half step) from its rational form.
    pub fn r22_half(z: Complex64) -> Complex64 {
        (48.0 - 12.0 * z + z * z) / (48.0 + 12.0 * z + z * z)
    }

    /// `P1/k`, `P2/k`, `P3/k` from their rational forms.
    pub fn p_rational(z: Complex64) -> [Complex64; 3] {
        let d = z * z + 6.0 * z + 12.0;
        [(2.0 - z) / d, 2.0 / d, (2.0 + z) / d]
    }

    /// `P̃/k` from its rational form.
    pub fn p_half_rational(z: Complex64) -> Complex64 {
        24.0 / (z * z + 12.0 * z + 48.0)
    }

    /// `R(z)` from the partial-fraction form.
    pub fn r22_pf(&self, z: f64) -> f64 {
        1.0 + 2.0 * (self.w11 / (z - self.c1)).re
    }

    pub fn r22_half_pf(&self, z: f64) -> f64 {
        1.0 + 4.0 * (self.w11 / (z - self.c2)).re
    }

    pub fn p_pf(&self, z: f64) -> [f64; 3] {
        [
            2.0 * (self.w21 / (z - self.c1)).re,
            4.0 * (self.w31 / (z - self.c1)).re,
            2.0 * (self.w41 / (z - self.c1)).re,
        ]
    }

    pub fn p_half_pf(&self, z: f64) -> f64 {
        48.0 * (self.w51 / (z - self.c2)).re
    }
}

/// Padé(0,3) presmoother constants.
///
/// Full-step poles `e` are the roots of `1 + z + z²/2 + z³/6`; half-step poles
/// `f = 2e` are the roots of `f³ + 6f² + 24f + 48`. `e1`/`f1` are real, `e2`/`f2`
/// are the upper members of the complex pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmootherConstants {
    pub f1: f64,
    pub f2: Complex64,
    pub e1: f64,
    pub e2: Complex64,
    pub s11: f64,
    pub s12: Complex64,
    pub s21: f64,
    pub s22: Complex64,
    pub s31: f64,
    pub s32: Complex64,
    pub s41: f64,
    pub s42: Complex64,
    pub s51: f64,
    pub s52: Complex64,
}

impl Default for SmootherConstants {
    fn default() -> Self {
        Self::new()
    }
}

fn polish_root(mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let p = ((z + 6.0) * z + 24.0) * z + 48.0;
        let dp = (3.0 * z + 12.0) * z + 24.0;
        z -= p / dp;
    }
    z
}

impl SmootherConstants {
    pub fn new() -> Self {
        let f1 = polish_root(cx(-3.19214327596664, 0.0)).re;
        let f2 = polish_root(cx(-1.40392836201668, 3.61467898890404));
        let e1 = 0.5 * f1;
        let e2 = 0.5 * f2;
        let de = (e1 - e2).norm_sqr();
        let se = 2.0 * e2.im * (e2 - e1);
        let i = cx(0.0, 1.0);
        let df = (f1 - f2).norm_sqr();
        Self {
            f1,
            f2,
            e1,
            e2,
            s11: 6.0 / de,
            s12: -6.0 * i / se,
            s21: (1.0 - e1) / de,
            s22: -i * (1.0 - e2) / se,
            s31: (1.0 + e1) / de,
            s32: -i * (1.0 + e2) / se,
            s41: (1.0 + e1 * e1) / de,
            s42: -i * (1.0 + e2 * e2) / se,
            s51: (24.0 + 6.0 * f1 + f1 * f1) / df,
            s52: -i * (24.0 + 6.0 * f2 + f2 * f2) / (2.0 * f2.im * (f2 - f1)),
        }
    }

    /// Full-step map `1/(1 + z + z²/2 + z³/6)` in partial fractions.
    pub fn r03_pf(&self, z: f64) -> f64 {
        self.s11 / (z - self.e1) + 2.0 * (self.s12 / (z - self.e2)).re
    }

    /// Half-step map `≈ e^{−z/2}` in partial fractions.
    pub fn r03_half_pf(&self, z: f64) -> f64 {
        2.0 * self.s11 / (z - self.f1) + 2.0 * (2.0 * self.s12 / (z - self.f2)).re
    }

    /// Half-step forcing weight (per unit `k`).
    pub fn p_half_pf(&self, z: f64) -> f64 {
        self.s51 / (z - self.f1) + 2.0 * (self.s52 / (z - self.f2)).re
    }

    /// Full-step forcing weights (per unit `k`) on `F(u)`, on `F(a) + F(b)`
    /// and on `F(c)`.
    pub fn p_pf(&self, z: f64) -> [f64; 3] {
        let t = |a: f64, b: Complex64| a / (z - self.e1) + 2.0 * (b / (z - self.e2)).re;
        [t(self.s21, self.s22), 2.0 * t(self.s31, self.s32), t(self.s41, self.s42)]
    }
}
