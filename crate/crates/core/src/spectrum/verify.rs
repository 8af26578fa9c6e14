//! Eigenpair verification by analytic reconstruction of the field.
//!
//! Fields are finite sums `Σ c_n J_n(kr) e^{inθ}`. The ladder operators
//! `D± = ∂_x ± i∂_y` act on them through `D₊F_n = −kF_{n+1}` and
//! `D₋F_n = kF_{n−1}`, so every derivative is exact up to the Bessel values.

use crate::domain::BoundaryCondition;
use crate::material::ElasticMaterial;
use crate::numerics::bessel_j_orders;
use num_complex::Complex64;
use std::f64::consts::PI;

const HALF_WIDTH: usize = 4;
const LEN: usize = 2 * HALF_WIDTH + 1;

/// `Σ c[i] J_{m+i−4}(kr) e^{i(m+i−4)θ}`.
#[derive(Debug, Clone, Copy)]
struct Series {
    k: f64,
    c: [Complex64; LEN],
}

impl Series {
    fn single(k: f64, amp: f64) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); LEN];
        c[HALF_WIDTH] = Complex64::new(amp, 0.0);
        Self { k, c }
    }

    fn shifted(&self, up: bool, factor: Complex64) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); LEN];
        for i in 0..LEN {
            let j = if up { i + 1 } else { i.wrapping_sub(1) };
            if j < LEN {
                c[j] += self.c[i] * factor;
            } else {
                debug_assert!(self.c[i] == Complex64::new(0.0, 0.0), "series window overflow");
            }
        }
        Self { k: self.k, c }
    }

    fn plus(&self, other: &Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(other.c) {
            *a += b;
        }
        Self { k: self.k, c }
    }

    fn times(&self, s: Complex64) -> Self {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a *= s;
        }
        Self { k: self.k, c }
    }

    fn dx(&self) -> Self {
        let k = Complex64::new(self.k, 0.0);
        self.shifted(true, -k)
            .plus(&self.shifted(false, k))
            .times(Complex64::new(0.5, 0.0))
    }

    fn dy(&self) -> Self {
        // (D₊ − D₋) / 2i
        let k = Complex64::new(self.k, 0.0);
        self.shifted(true, -k)
            .plus(&self.shifted(false, -k))
            .times(Complex64::new(0.0, -0.5))
    }

    /// `jv[n] = J_n(kr)` for `n = 0..=m+4`.
    fn eval(&self, m: u32, theta: f64, jv: &[f64]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, &c) in self.c.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let n = m as i64 + i as i64 - HALF_WIDTH as i64;
            let mut j = jv[n.unsigned_abs() as usize];
            if n < 0 && n % 2 != 0 {
                j = -j;
            }
            sum += c * j * Complex64::from_polar(1.0, n as f64 * theta);
        }
        sum
    }
}

/// A real field `Re(l) + Im(t)` with `l` at the longitudinal and `t` at the
/// transverse wavenumber.
#[derive(Debug, Clone, Copy)]
struct Component {
    l: Series,
    t: Series,
}

impl Component {
    fn dx(&self) -> Self {
        Self {
            l: self.l.dx(),
            t: self.t.dx(),
        }
    }

    fn dy(&self) -> Self {
        Self {
            l: self.l.dy(),
            t: self.t.dy(),
        }
    }

    fn plus(&self, o: &Self) -> Self {
        Self {
            l: self.l.plus(&o.l),
            t: self.t.plus(&o.t),
        }
    }

    fn times(&self, s: f64) -> Self {
        let s = Complex64::new(s, 0.0);
        Self {
            l: self.l.times(s),
            t: self.t.times(s),
        }
    }

    fn laplacian(&self) -> Self {
        self.dx().dx().plus(&self.dy().dy())
    }

    fn eval(&self, m: u32, p: &Point) -> f64 {
        self.l.eval(m, p.theta, &p.jl).re + self.t.eval(m, p.theta, &p.jt).im
    }
}

struct Point {
    theta: f64,
    jl: Vec<f64>,
    jt: Vec<f64>,
}

fn point(m: u32, r: f64, theta: f64, kl: f64, kt: f64) -> Point {
    let orders =
        |k: f64| bessel_j_orders(m + HALF_WIDTH as u32, k * r).unwrap_or_else(|_| vec![f64::NAN; m as usize + LEN]);
    Point {
        theta,
        jl: orders(kl),
        jt: orders(kt),
    }
}

/// Residual of a candidate eigenpair `(ω², u)` where `u` is built from the
/// potential amplitudes `nullvector = (A, B)` as in the disk ansatz
/// (`ψ = B J_0(ωr/c_t)` when `m = 0`).
///
/// The field and its derivatives are sampled at 64 interior points (8 radii
/// by 8 angles) and 32 boundary points. The result is the larger of
///
/// * `max |−c_t²Δu − (c_l² − c_t²)∇div u − ω²u| / (ω² max|u|)` inside, and
/// * `max |u| / max|u|` (clamped) or `max |σν| / (c_max ω max|u|)` (free)
///   on the boundary, with `σ = λ div u I + μ(∇u + ∇uᵀ)`.
pub fn verify_eigenpair(
    material: &ElasticMaterial,
    bc: BoundaryCondition,
    m: u32,
    omega: f64,
    nullvector: (f64, f64),
) -> f64 {
    let (a, b) = nullvector;
    if !(omega > 0.0) || !a.is_finite() || !b.is_finite() {
        return f64::INFINITY;
    }
    let kl = omega / material.cl();
    let kt = omega / material.ct();
    let phi = Series::single(kl, a);
    // ψ ∝ sin mθ = Im F_m, except that the torsional m = 0 mode is ψ ∝ J_0 = Im(i F_0)
    let psi = if m == 0 {
        Series::single(kt, b).times(Complex64::new(0.0, 1.0))
    } else {
        Series::single(kt, b)
    };
    let ux = Component {
        l: phi.dx(),
        t: psi.dy(),
    };
    let uy = Component {
        l: phi.dy(),
        t: psi.dx().times(Complex64::new(-1.0, 0.0)),
    };

    let (ct2, cl2) = (material.ct2, material.cl2);
    let w2 = omega * omega;
    let div = ux.dx().plus(&uy.dy());
    let rx = ux
        .laplacian()
        .times(-ct2)
        .plus(&div.dx().times(-(cl2 - ct2)))
        .plus(&ux.times(-w2));
    let ry = uy
        .laplacian()
        .times(-ct2)
        .plus(&div.dy().times(-(cl2 - ct2)))
        .plus(&uy.times(-w2));

    let (lambda, mu) = material.lame_parameters();
    let sxx = div.times(lambda).plus(&ux.dx().times(2.0 * mu));
    let syy = div.times(lambda).plus(&uy.dy().times(2.0 * mu));
    let sxy = ux.dy().plus(&uy.dx()).times(mu);

    let mut u_max: f64 = 0.0;
    let mut pde_max: f64 = 0.0;
    for i in 0..8 {
        let r = ((i as f64 + 0.37) / 8.0).sqrt();
        for j in 0..8 {
            let theta = 2.0 * PI * (j as f64 + 0.37) / 8.0;
            let p = point(m, r, theta, kl, kt);
            u_max = u_max.max(ux.eval(m, &p).hypot(uy.eval(m, &p)));
            pde_max = pde_max.max(rx.eval(m, &p).hypot(ry.eval(m, &p)));
        }
    }
    let mut bc_max: f64 = 0.0;
    for j in 0..32 {
        let theta = 2.0 * PI * (j as f64 + 0.29) / 32.0;
        let p = point(m, 1.0, theta, kl, kt);
        let (vx, vy) = (ux.eval(m, &p), uy.eval(m, &p));
        u_max = u_max.max(vx.hypot(vy));
        let value = match bc {
            BoundaryCondition::Dirichlet => vx.hypot(vy),
            _ => {
                let (nx, ny) = (theta.cos(), theta.sin());
                let (xx, yy, xy) = (sxx.eval(m, &p), syy.eval(m, &p), sxy.eval(m, &p));
                (xx * nx + xy * ny).hypot(xy * nx + yy * ny)
            }
        };
        bc_max = bc_max.max(value);
    }
    if !(u_max > 0.0) || !u_max.is_finite() {
        return f64::INFINITY;
    }
    let pde = pde_max / (w2 * u_max);
    let bc_res = match bc {
        BoundaryCondition::Dirichlet => bc_max / u_max,
        _ => bc_max / (material.c_max() * omega * u_max),
    };
    let res = pde.max(bc_res);
    if res.is_nan() {
        f64::INFINITY
    } else {
        res
    }
}
