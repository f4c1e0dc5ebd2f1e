//! Manufactured Navier-Stokes solution on `[-1, 1]^2` and its source term.
//!
//! The source is the PDE residual of the closed-form solution. It is
//! evaluated exactly with forward-mode second-order jets in `(x, y, t)`, so
//! no symbolic algebra is involved.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::NavierStokesParams;

/// Value, gradient and Hessian with respect to `(x, y, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: [f64; 3],
    pub h: [[f64; 3]; 3],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Self {
            v,
            d: [0.0; 3],
            h: [[0.0; 3]; 3],
        }
    }

    /// The independent variable `k` with value `v`.
    pub fn variable(v: f64, k: usize) -> Self {
        let mut j = Self::constant(v);
        j.d[k] = 1.0;
        j
    }

    /// Partial derivative along `k`. Its Hessian is not tracked (set to zero),
    /// so only first derivatives of the result are meaningful.
    pub fn partial(&self, k: usize) -> Self {
        Self {
            v: self.d[k],
            d: self.h[k],
            h: [[0.0; 3]; 3],
        }
    }

    /// Applies a scalar function given its value and first two derivatives.
    fn chain(&self, f: f64, df: f64, ddf: f64) -> Self {
        let mut out = Self::constant(f);
        for a in 0..3 {
            out.d[a] = df * self.d[a];
            for b in 0..3 {
                out.h[a][b] = df * self.h[a][b] + ddf * self.d[a] * self.d[b];
            }
        }
        out
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn scale(self, s: f64) -> Self {
        let mut out = self;
        out.v *= s;
        out.d.iter_mut().for_each(|x| *x *= s);
        out.h.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self.v += o.v;
        for a in 0..3 {
            self.d[a] += o.d[a];
            for b in 0..3 {
                self.h[a][b] += o.h[a][b];
            }
        }
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, o: f64) -> Jet {
        self.v += o;
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = Jet::constant(self.v * o.v);
        for a in 0..3 {
            out.d[a] = self.d[a] * o.v + self.v * o.d[a];
            for b in 0..3 {
                out.h[a][b] = self.h[a][b] * o.v
                    + self.d[a] * o.d[b]
                    + self.d[b] * o.d[a]
                    + self.v * o.h[a][b];
            }
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

/// Constants of the manufactured solution
/// `rho = c + A sin(pi x) cos(pi y) cos(pi t)`,
/// `v1 = v2 = sin(pi x) ln(y + 2) (1 - exp(-A (y - shift))) cos(pi t)`, `p = rho^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedSolution {
    pub c: f64,
    pub amplitude: f64,
    /// `shift = 1` makes the velocity vanish on `y = -1` and `y = 1`.
    pub velocity_shift: f64,
    pub params: NavierStokesParams,
}

impl ManufacturedSolution {
    pub fn new(params: NavierStokesParams) -> Self {
        Self {
            c: 2.0,
            amplitude: 0.1,
            velocity_shift: 1.0,
            params,
        }
    }

    /// Primitive jets `(rho, v1, v2, p)`.
    fn primitive_jets(&self, x: f64, y: f64, t: f64) -> [Jet; 4] {
        let (xj, yj, tj) = (Jet::variable(x, 0), Jet::variable(y, 1), Jet::variable(t, 2));
        let a = self.amplitude;
        let sx = (xj * PI).sin();
        let cy = (yj * PI).cos();
        let ct = (tj * PI).cos();
        let rho = sx * cy * ct * a + self.c;
        let damp = -((yj + (-self.velocity_shift)) * (-a)).exp() + 1.0;
        let v = sx * (yj + 2.0).ln() * damp * ct;
        let p = rho * rho;
        [rho, v, v, p]
    }

    /// Conservative state at `(x, y, t)`.
    pub fn state(&self, x: f64, y: f64, t: f64) -> [f64; 4] {
        let [rho, v1, v2, p] = self.primitive_jets(x, y, t).map(|j| j.v);
        [
            rho,
            rho * v1,
            rho * v2,
            p / (self.params.gamma - 1.0) + 0.5 * rho * (v1 * v1 + v2 * v2),
        ]
    }

    /// Residual `u_t + div f^a - div f^v` of the exact solution.
    pub fn source(&self, x: f64, y: f64, t: f64) -> [f64; 4] {
        let NavierStokesParams { gamma, mu, prandtl } = self.params;
        let kappa = mu * gamma / (prandtl * (gamma - 1.0));
        let [rho, v1, v2, p] = self.primitive_jets(x, y, t);
        let m1 = rho * v1;
        let m2 = rho * v2;
        let e = p * (1.0 / (gamma - 1.0)) + rho * (v1 * v1 + v2 * v2) * 0.5;
        let temp = p / rho;

        // advective flux columns
        let fx = [m1, m1 * v1 + p, m2 * v1, (e + p) * v1];
        let fy = [m2, m1 * v2, m2 * v2 + p, (e + p) * v2];

        // viscous flux from first-derivative jets
        let (v1x, v1y) = (v1.partial(0), v1.partial(1));
        let (v2x, v2y) = (v2.partial(0), v2.partial(1));
        let (tx, ty) = (temp.partial(0), temp.partial(1));
        let div = v1x + v2y;
        let txx = (v1x * 2.0 - div * (2.0 / 3.0)) * mu;
        let tyy = (v2y * 2.0 - div * (2.0 / 3.0)) * mu;
        let txy = (v1y + v2x) * mu;
        let gx = [
            Jet::constant(0.0),
            txx,
            txy,
            v1 * txx + v2 * txy + tx * kappa,
        ];
        let gy = [
            Jet::constant(0.0),
            txy,
            tyy,
            v1 * txy + v2 * tyy + ty * kappa,
        ];

        let u = [rho, m1, m2, e];
        let mut s = [0.0; 4];
        for c in 0..4 {
            s[c] = u[c].d[2] + fx[c].d[0] + fy[c].d[1] - gx[c].d[0] - gy[c].d[1];
        }
        s
    }
}
