#![allow(dead_code)]

use geoknot::{Complex64, CuspData};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn square() -> CuspData {
    CuspData::new("square", c(1.0, 0.0), c(0.0, 1.0), 0.5, 0.5, c(1.0, 0.0)).unwrap()
}

pub fn hex() -> CuspData {
    let beta = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    CuspData::new("hex", c(1.0, 0.0), beta, 1.0 / 3.0, 1.0 / 3.0, c(1.0, 0.0)).unwrap()
}

pub fn skew() -> CuspData {
    CuspData::new("skew", c(1.0, 0.0), c(0.3, 1.1), 0.4, 0.6, c(1.0, 0.0)).unwrap()
}

pub fn rational1() -> CuspData {
    CuspData::new("rational1", c(1.0, 0.0), c(0.4, 1.3), 0.25, 0.75, c(0.6, 0.8)).unwrap()
}

pub fn rational2() -> CuspData {
    CuspData::new("rational2", c(1.5, 0.25), c(-0.5, 1.75), 0.7, 0.2, c(0.28, 0.96)).unwrap()
}

/// Offset along `t_α` vanishes and `y₀ = ½`: the `(0, q)` members are nonsimple.
pub fn half() -> CuspData {
    CuspData::new("half", c(1.0, 0.0), c(0.0, 1.0), 0.0, 0.5, c(1.0, 0.0)).unwrap()
}

pub fn datasets() -> Vec<CuspData> {
    vec![square(), hex(), skew(), rational1(), rational2()]
}

/// Plain 2×2 complex product, independent of the library's map type.
pub fn mat_mul(x: [Complex64; 4], y: [Complex64; 4]) -> [Complex64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// `a^p b^q g` by repeated multiplication of unnormalised matrices.
pub fn naive_family_matrix(cusp: &CuspData, p: i64, q: i64) -> [Complex64; 4] {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let step = |tau: Complex64, n: i64| {
        let s = if n >= 0 { tau } else { -tau };
        let mut m = [one, zero, zero, one];
        for _ in 0..n.unsigned_abs() {
            m = mat_mul(m, [one, s, zero, one]);
        }
        m
    };
    let b00 = cusp.t_alpha * cusp.x0 + cusp.t_beta * cusp.y0;
    let g = [cusp.c * b00, -one / cusp.c, cusp.c, zero];
    mat_mul(mat_mul(step(cusp.t_alpha, p), step(cusp.t_beta, q)), g)
}

/// Lattice coordinates by solving the 2×2 real system directly.
pub fn solve_coords(cusp: &CuspData, z: Complex64) -> (f64, f64) {
    let (a, b) = (cusp.t_alpha, cusp.t_beta);
    let det = a.re * b.im - a.im * b.re;
    ((z.re * b.im - z.im * b.re) / det, (a.re * z.im - a.im * z.re) / det)
}

/// Roots of `z² − b z + 1/c² = 0` by the textbook formula.
pub fn naive_roots(b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = (b * b - 4.0 / (c * c)).sqrt();
    ((b - disc) / 2.0, (b + disc) / 2.0)
}

/// Upper half-space distance from the `cosh` formula.
pub fn naive_distance(z1: Complex64, t1: f64, z2: Complex64, t2: f64) -> f64 {
    (1.0 + ((z1 - z2).norm_sqr() + (t1 - t2).powi(2)) / (2.0 * t1 * t2)).acosh()
}
