//! Reference solver for the full three-component Euler–Maxwell system in
//! primitive variables `(u, E, B)`, all independent of `x3`:
//!
//! ```text
//! d_t u = P[-u.grad u + j x B],   j = sigma (c E + u x B)
//! d_t E = c (curl B - j),         d_t B = -c curl E
//! ```
//!
//! `P` is the Leray projector. The means of `u` and `E` are held at zero,
//! the mean of `B` (the background) is carried along unchanged. Used only to
//! cross-check the reduced models.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::{zero_mean, FieldState, Params};
use crate::integrators::Dynamics;
use crate::spectral::{Axis, FourierGrid, ScalarField2D, VectorField2D};

type Spec = Vec<Complex64>;

#[derive(Clone, Debug)]
pub struct PrimitiveState {
    pub u: [ScalarField2D; 3],
    pub e: [ScalarField2D; 3],
    pub b: [ScalarField2D; 3],
}

impl PrimitiveState {
    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        let z = || ScalarField2D::zeros(grid);
        Self {
            u: [z(), z(), z()],
            e: [z(), z(), z()],
            b: [z(), z(), z()],
        }
    }

    /// Third component of `curl u`.
    pub fn vorticity(&self) -> ScalarField2D {
        crate::spectral::derivative(&self.u[1], Axis::X1).sub(&crate::spectral::derivative(&self.u[0], Axis::X2))
    }
}

impl FieldState for PrimitiveState {
    fn fields(&self) -> Vec<&ScalarField2D> {
        self.u.iter().chain(&self.e).chain(&self.b).collect()
    }

    fn from_fields(fields: Vec<ScalarField2D>) -> Self {
        let mut it = fields.into_iter();
        let mut next3 = || [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
        let u = next3();
        let e = next3();
        let b = next3();
        Self { u, e, b }
    }
}

fn cross(a: &[Vec<f64>; 3], b: &[Vec<f64>; 3]) -> [Vec<f64>; 3] {
    let n = a[0].len();
    let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for i in 0..n {
        out[0][i] = a[1][i] * b[2][i] - a[2][i] * b[1][i];
        out[1][i] = a[2][i] * b[0][i] - a[0][i] * b[2][i];
        out[2][i] = a[0][i] * b[1][i] - a[1][i] * b[0][i];
    }
    out
}

fn curl(g: &FourierGrid, v: &[Spec; 3]) -> [Spec; 3] {
    let d = |f: &Spec, ax| g.spec_derivative(f, ax);
    let d2v3 = d(&v[2], Axis::X2);
    let d1v3 = d(&v[2], Axis::X1);
    let d1v2 = d(&v[1], Axis::X1);
    let d2v1 = d(&v[0], Axis::X2);
    [
        d2v3,
        d1v3.into_iter().map(|z| -z).collect(),
        d1v2.iter().zip(&d2v1).map(|(a, b)| a - b).collect(),
    ]
}

fn to_phys(g: &FourierGrid, v: &[Spec; 3]) -> [Vec<f64>; 3] {
    let (a, b) = g.inverse_real_pair(&v[0], &v[1]);
    [a, b, g.inverse_real(&v[2])]
}

fn to_spec(g: &FourierGrid, v: &[Vec<f64>; 3]) -> [Spec; 3] {
    let (a, b) = g.forward_real_pair(&v[0], &v[1]);
    let mut out = [a, b, g.forward_real(&v[2])];
    out.iter_mut().for_each(|c| g.truncate(c));
    out
}

/// Leray projection of the in-plane components; the third is untouched.
fn leray(g: &FourierGrid, v: &mut [Spec; 3]) {
    for (idx, k1, k2) in g.modes() {
        let k_sq = k1 * k1 + k2 * k2;
        if k_sq == 0.0 {
            continue;
        }
        let dot = v[0][idx] * k1 + v[1][idx] * k2;
        v[0][idx] -= dot * (k1 / k_sq);
        v[1][idx] -= dot * (k2 / k_sq);
    }
}

pub fn rhs_primitive(s: &PrimitiveState, p: &Params) -> PrimitiveState {
    let g = s.u[0].grid();
    let sp = |f: &ScalarField2D| g.truncated(&f.spectral());
    let u = [sp(&s.u[0]), sp(&s.u[1]), sp(&s.u[2])];
    let e = [sp(&s.e[0]), sp(&s.e[1]), sp(&s.e[2])];
    let b = [sp(&s.b[0]), sp(&s.b[1]), sp(&s.b[2])];
    let pu = to_phys(g, &u);
    let pb = to_phys(g, &b);

    // u . grad u, component by component
    let n2 = g.len();
    let mut adv = [vec![0.0; n2], vec![0.0; n2], vec![0.0; n2]];
    for (c, out) in u.iter().zip(adv.iter_mut()) {
        let (d1, d2) = g.inverse_real_pair(&g.spec_derivative(c, Axis::X1), &g.spec_derivative(c, Axis::X2));
        for i in 0..n2 {
            out[i] = pu[0][i] * d1[i] + pu[1][i] * d2[i];
        }
    }
    let adv = to_spec(g, &adv);

    let uxb = to_spec(g, &cross(&pu, &pb));
    let j: [Spec; 3] = std::array::from_fn(|k| (0..n2).map(|i| (e[k][i] * p.c + uxb[k][i]) * p.sigma).collect());
    let jxb = to_spec(g, &cross(&to_phys(g, &j), &pb));

    let mut du: [Spec; 3] = std::array::from_fn(|k| (0..n2).map(|i| jxb[k][i] - adv[k][i]).collect());
    leray(g, &mut du);
    let cb = curl(g, &b);
    let ce = curl(g, &e);
    let de: [Spec; 3] = std::array::from_fn(|k| (0..n2).map(|i| (cb[k][i] - j[k][i]) * p.c).collect());
    let db: [Spec; 3] = std::array::from_fn(|k| ce[k].iter().map(|z| z * -p.c).collect());

    let wrap = |v: Spec| ScalarField2D::from_spectral(g, v);
    let [du0, du1, du2] = du;
    let [de0, de1, de2] = de;
    let [db0, db1, db2] = db;
    PrimitiveState {
        u: [wrap(zero_mean(du0)), wrap(zero_mean(du1)), wrap(zero_mean(du2))],
        e: [wrap(zero_mean(de0)), wrap(zero_mean(de1)), wrap(zero_mean(de2))],
        b: [wrap(db0), wrap(db1), wrap(db2)],
    }
}

/// The primitive system as a [`Dynamics`]; explicit schemes only.
#[derive(Clone, Debug)]
pub struct Primitive {
    pub params: Params,
}

impl Dynamics for Primitive {
    type State = PrimitiveState;

    fn rhs(&self, s: &Self::State) -> Self::State {
        rhs_primitive(s, &self.params)
    }

    fn vorticity<'a>(&self, s: &'a Self::State) -> &'a ScalarField2D {
        // only used by the blow-up guard; the first velocity component is a
        // reasonable proxy for the primitive solver
        &s.u[0]
    }

    fn velocity(&self, s: &Self::State) -> VectorField2D {
        VectorField2D::new(s.u[0].clone(), s.u[1].clone())
    }

    fn explicit_rate(&self) -> f64 {
        0.0
    }

    fn stiff_rates(&self) -> (f64, f64) {
        (self.params.c, self.params.c * self.params.c * self.params.sigma)
    }
}
