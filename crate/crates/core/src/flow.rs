//! Particle flow maps `Phi(t, x) = x + int_0^t u(tau, Phi(tau, x)) dtau`,
//! their inverses, compositions, and the Riesz commutator `[R, Phi]`.
//!
//! Both maps are stored as periodic displacements on the field grid:
//! `Phi(x) = x + d_fwd(x)` and `Phi^{-1}(x) = x + d_bwd(x)`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::besov::{besov_norm, lipschitz_seminorm, BesovSpec};
use crate::error::{Error, Result};
use crate::spectral::{derivative, riesz, Axis, FourierGrid, ScalarField2D, SplineInterpolant, VectorField2D};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `f o Phi`
    Forward,
    /// `f o Phi^{-1}`
    Backward,
}

#[derive(Clone, Debug)]
pub struct FlowMap {
    grid: Arc<FourierGrid>,
    forward: VectorField2D,
    backward: VectorField2D,
    t: f64,
}

/// Velocity at the start, midpoint and end of one flow step.
#[derive(Clone, Copy, Debug)]
pub struct VelocityStages<'a> {
    pub start: &'a VectorField2D,
    pub mid: &'a VectorField2D,
    pub end: &'a VectorField2D,
}

impl<'a> VelocityStages<'a> {
    /// A velocity frozen in time.
    pub fn frozen(u: &'a VectorField2D) -> Self {
        Self {
            start: u,
            mid: u,
            end: u,
        }
    }
}

struct VelocityInterp {
    u1: SplineInterpolant,
    u2: SplineInterpolant,
}

impl VelocityInterp {
    fn new(u: &VectorField2D) -> Self {
        Self {
            u1: SplineInterpolant::new(&u.x1),
            u2: SplineInterpolant::new(&u.x2),
        }
    }

    fn eval(&self, x: (f64, f64)) -> (f64, f64) {
        (self.u1.eval(x.0, x.1), self.u2.eval(x.0, x.1))
    }
}

/// One RK4 step of `dX/ds = u(s, X)` with signed step `h` and the velocity at
/// `s0`, `s0 + h/2`, `s0 + h`.
fn rk4_particle(x: (f64, f64), h: f64, v: [&VelocityInterp; 3]) -> (f64, f64) {
    let k1 = v[0].eval(x);
    let k2 = v[1].eval((x.0 + 0.5 * h * k1.0, x.1 + 0.5 * h * k1.1));
    let k3 = v[1].eval((x.0 + 0.5 * h * k2.0, x.1 + 0.5 * h * k2.1));
    let k4 = v[2].eval((x.0 + h * k3.0, x.1 + h * k3.1));
    (
        x.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        x.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

/// Builds a field row by row in parallel from `f(x1, x2)` at the grid nodes.
fn par_from_nodes(grid: &Arc<FourierGrid>, f: impl Fn(usize) -> (f64, f64) + Sync) -> (ScalarField2D, ScalarField2D) {
    let n = grid.n();
    let vals: Vec<(f64, f64)> = (0..n * n).into_par_iter().map(&f).collect();
    let (a, b) = vals.into_iter().unzip();
    (
        ScalarField2D::from_physical(grid, a),
        ScalarField2D::from_physical(grid, b),
    )
}

impl FlowMap {
    pub fn identity(grid: &Arc<FourierGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            forward: VectorField2D::zeros(grid),
            backward: VectorField2D::zeros(grid),
            t: 0.0,
        }
    }

    pub fn from_displacements(forward: VectorField2D, backward: VectorField2D, t: f64) -> Result<Self> {
        forward.x1.check_same_grid(&backward.x1)?;
        Ok(Self {
            grid: Arc::clone(forward.grid()),
            forward,
            backward,
            t,
        })
    }

    /// Samples an analytic pair of maps; each must be `x + periodic`.
    pub fn from_maps(
        grid: &Arc<FourierGrid>,
        phi: impl Fn(f64, f64) -> (f64, f64),
        phi_inv: impl Fn(f64, f64) -> (f64, f64),
        t: f64,
    ) -> Self {
        let disp = |m: &dyn Fn(f64, f64) -> (f64, f64)| {
            VectorField2D::new(
                ScalarField2D::from_fn(grid, |x, y| m(x, y).0 - x),
                ScalarField2D::from_fn(grid, |x, y| m(x, y).1 - y),
            )
        };
        Self {
            grid: Arc::clone(grid),
            forward: disp(&phi),
            backward: disp(&phi_inv),
            t,
        }
    }

    /// `Phi(x) = x + v` for a constant `v`.
    pub fn translation(grid: &Arc<FourierGrid>, v: (f64, f64)) -> Self {
        Self::from_maps(grid, |x, y| (x + v.0, y + v.1), |x, y| (x - v.0, y - v.1), 0.0)
    }

    /// Time-`t` map of the steady shear `u = (amp sin(k x2), 0)`.
    pub fn shear(grid: &Arc<FourierGrid>, amp: f64, k: f64, t: f64) -> Self {
        Self::from_maps(
            grid,
            |x, y| (x + t * amp * (k * y).sin(), y),
            |x, y| (x - t * amp * (k * y).sin(), y),
            t,
        )
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn forward_displacement(&self) -> &VectorField2D {
        &self.forward
    }

    pub fn backward_displacement(&self) -> &VectorField2D {
        &self.backward
    }

    fn displacement(&self, dir: Direction) -> &VectorField2D {
        match dir {
            Direction::Forward => &self.forward,
            Direction::Backward => &self.backward,
        }
    }

    fn node(&self, idx: usize) -> (f64, f64) {
        let n = self.grid.n();
        (self.grid.coord(idx / n), self.grid.coord(idx % n))
    }

    /// `max |Phi(Phi^{-1}(x)) - x|` over the grid nodes.
    pub fn roundtrip_error(&self) -> f64 {
        let f1 = SplineInterpolant::new(&self.forward.x1);
        let f2 = SplineInterpolant::new(&self.forward.x2);
        let b1 = self.backward.x1.physical();
        let b2 = self.backward.x2.physical();
        (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let (x, y) = self.node(i);
                let (p, q) = (x + b1[i], y + b2[i]);
                let e1 = p + f1.eval(p, q) - x;
                let e2 = q + f2.eval(p, q) - y;
                e1.hypot(e2)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `max |det D Phi - 1|` with spectral derivatives of the displacement.
    pub fn jacobian_defect(&self) -> f64 {
        let d = &self.forward;
        let a = derivative(&d.x1, Axis::X1);
        let b = derivative(&d.x1, Axis::X2);
        let c = derivative(&d.x2, Axis::X1);
        let e = derivative(&d.x2, Axis::X2);
        let (a, b, c, e) = (a.physical(), b.physical(), c.physical(), e.physical());
        (0..self.grid.len())
            .map(|i| ((1.0 + a[i]) * (1.0 + e[i]) - b[i] * c[i] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `|Phi - Id|_{W^{1,inf}}` (or of `Phi^{-1}`): entrywise max of the
    /// displacement gradient.
    pub fn displacement_seminorm(&self, dir: Direction) -> f64 {
        lipschitz_seminorm(self.displacement(dir))
    }

    /// `|Phi|_{W^{1,inf}} = max_x |D Phi(x)|` in the operator 2-norm.
    pub fn lipschitz_constant(&self, dir: Direction) -> f64 {
        let d = self.displacement(dir);
        let j = [
            derivative(&d.x1, Axis::X1),
            derivative(&d.x1, Axis::X2),
            derivative(&d.x2, Axis::X1),
            derivative(&d.x2, Axis::X2),
        ];
        let j: Vec<_> = j.iter().map(|f| f.physical()).collect();
        (0..self.grid.len())
            .map(|i| spectral_norm_2x2(1.0 + j[0][i], j[1][i], j[2][i], 1.0 + j[3][i]))
            .fold(0.0, f64::max)
    }
}

/// Largest singular value of `[[a, b], [c, d]]`.
fn spectral_norm_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let s = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    (0.5 * (s + (s * s - 4.0 * det * det).max(0.0).sqrt())).sqrt()
}

/// Advances both maps by `dt` under a velocity known at the start, midpoint
/// and end of the step.
///
/// Forward: RK4 on the particle positions `x + d_fwd(x)`. Backward:
/// semi-Lagrangian, `Phi^{-1}_{new}(x) = Phi^{-1}_{old}(X)` with `X` the
/// departure point of `x` traced back over the step.
pub fn advance_flow(fm: &FlowMap, u: VelocityStages<'_>, dt: f64) -> FlowMap {
    let g = &fm.grid;
    let v0 = VelocityInterp::new(u.start);
    let vm = VelocityInterp::new(u.mid);
    let v1 = VelocityInterp::new(u.end);

    let f1 = fm.forward.x1.physical();
    let f2 = fm.forward.x2.physical();
    let forward = par_from_nodes(g, |i| {
        let (x, y) = fm.node(i);
        let p = (x + f1[i], y + f2[i]);
        let q = rk4_particle(p, dt, [&v0, &vm, &v1]);
        (q.0 - x, q.1 - y)
    });

    let b1 = SplineInterpolant::new(&fm.backward.x1);
    let b2 = SplineInterpolant::new(&fm.backward.x2);
    let backward = par_from_nodes(g, |i| {
        let (x, y) = fm.node(i);
        let dep = rk4_particle((x, y), -dt, [&v1, &vm, &v0]);
        (dep.0 + b1.eval(dep.0, dep.1) - x, dep.1 + b2.eval(dep.0, dep.1) - y)
    });

    FlowMap {
        grid: Arc::clone(g),
        forward: VectorField2D::new(forward.0, forward.1),
        backward: VectorField2D::new(backward.0, backward.1),
        t: fm.t + dt,
    }
}

/// `f o Phi` or `f o Phi^{-1}` at the grid nodes.
pub fn compose(f: &ScalarField2D, fm: &FlowMap, dir: Direction) -> ScalarField2D {
    let s = SplineInterpolant::new(f);
    let d = fm.displacement(dir);
    let (d1, d2) = (d.x1.physical(), d.x2.physical());
    let vals: Vec<f64> = (0..fm.grid.len())
        .into_par_iter()
        .map(|i| {
            let (x, y) = fm.node(i);
            s.eval(x + d1[i], y + d2[i])
        })
        .collect();
    ScalarField2D::from_physical(&fm.grid, vals)
}

/// `[R, Phi] omega = R(omega o Phi) - (R omega) o Phi`.
pub fn riesz_commutator(omega: &ScalarField2D, fm: &FlowMap) -> ScalarField2D {
    riesz(&compose(omega, fm, Direction::Forward)).sub(&compose(&riesz(omega), fm, Direction::Forward))
}

/// Empirical constant of the commutator estimate in `B^{2/p}_{p,1}`:
/// `|[R,Phi] omega| / (max(|Phi - Id|, |Phi^{-1} - Id|) |omega|)`.
pub fn commutator_ratio(omega: &ScalarField2D, fm: &FlowMap, spec: BesovSpec) -> Result<f64> {
    if !(spec.p > 1.0 && spec.p.is_finite()) || spec.q != 1.0 || (spec.s - 2.0 / spec.p).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "commutator ratio needs B^(2/p)_(p,1) with 1 < p < inf, got s={}, p={}, q={}",
            spec.s, spec.p, spec.q
        )));
    }
    let lip = fm
        .displacement_seminorm(Direction::Forward)
        .max(fm.displacement_seminorm(Direction::Backward));
    if lip < 1e-12 {
        return Err(Error::DegenerateFlow);
    }
    let w = besov_norm(omega, spec);
    if w == 0.0 {
        return Ok(0.0);
    }
    Ok(besov_norm(&riesz_commutator(omega, fm), spec) / (lip * w))
}

/// Empirical constant of the composition estimate in `B^0_{inf,1}`:
/// `|f o Phi| / ((1 + log(|Phi|_{W^{1,inf}} |Phi^{-1}|_{W^{1,inf}})) |f|)`.
pub fn vishik_ratio(f: &ScalarField2D, fm: &FlowMap) -> f64 {
    let denom = besov_norm(f, BesovSpec::B0_INF1);
    if denom == 0.0 {
        return 0.0;
    }
    let lip = fm.lipschitz_constant(Direction::Forward) * fm.lipschitz_constant(Direction::Backward);
    let bracket = 1.0 + lip.max(1.0).ln();
    besov_norm(&compose(f, fm, Direction::Forward), BesovSpec::B0_INF1) / (bracket * denom)
}

/// Follows the flow of a trajectory sampled step by step. The midpoint
/// velocity is reconstructed by quadratic interpolation through the last
/// three samples (linear on the first step).
#[derive(Clone, Debug)]
pub struct FlowTracker {
    map: FlowMap,
    prev: Option<(VectorField2D, f64)>,
    last: VectorField2D,
}

impl FlowTracker {
    pub fn new(u0: VectorField2D) -> Self {
        Self {
            map: FlowMap::identity(u0.grid()),
            prev: None,
            last: u0,
        }
    }

    /// Records the velocity at `t + dt` and advances the map to it.
    pub fn push(&mut self, u: VectorField2D, dt: f64) {
        // Lagrange weights at t + dt/2 for nodes t - hp, t, t + dt
        let (w0, w1, w2) = match &self.prev {
            None => (0.0, 0.5, 0.5),
            Some((_, hp)) => {
                let hp = *hp;
                (
                    -0.25 * dt * dt / (hp * (hp + dt)),
                    (0.5 * dt + hp) / (2.0 * hp),
                    (0.5 * dt + hp) / (2.0 * (hp + dt)),
                )
            }
        };
        let mix = |a: &ScalarField2D, b: &ScalarField2D, p: Option<&ScalarField2D>| {
            let m = a.scaled(w1).axpy(w2, b);
            match p {
                Some(p) => m.axpy(w0, p),
                None => m,
            }
        };
        let p = self.prev.as_ref().map(|(v, _)| v);
        let mid = VectorField2D::new(
            mix(&self.last.x1, &u.x1, p.map(|v| &v.x1)),
            mix(&self.last.x2, &u.x2, p.map(|v| &v.x2)),
        );
        self.map = advance_flow(
            &self.map,
            VelocityStages {
                start: &self.last,
                mid: &mid,
                end: &u,
            },
            dt,
        );
        let last = std::mem::replace(&mut self.last, u);
        self.prev = Some((last, dt));
    }

    pub fn map(&self) -> &FlowMap {
        &self.map
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dealias;

    fn grid(n: usize) -> Arc<FourierGrid> {
        FourierGrid::new(n).unwrap()
    }

    fn shear_velocity(g: &Arc<FourierGrid>) -> VectorField2D {
        VectorField2D::new(ScalarField2D::from_fn(g, |_, y| y.sin()), ScalarField2D::zeros(g))
    }

    #[test]
    fn zero_velocity_keeps_identity() {
        let g = grid(32);
        let u = VectorField2D::zeros(&g);
        let mut fm = FlowMap::identity(&g);
        for _ in 0..5 {
            fm = advance_flow(&fm, VelocityStages::frozen(&u), 0.1);
        }
        assert_eq!(fm.forward.max_abs(), 0.0);
        assert_eq!(fm.backward.max_abs(), 0.0);
        assert!((fm.t() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn shear_flow_is_exact() {
        let g = grid(64);
        let u = shear_velocity(&g);
        let mut fm = FlowMap::identity(&g);
        for _ in 0..20 {
            fm = advance_flow(&fm, VelocityStages::frozen(&u), 0.05);
        }
        let exact = FlowMap::shear(&g, 1.0, 1.0, 1.0);
        assert!(fm.forward.x1.max_abs_diff(&exact.forward.x1) < 1e-8);
        assert!(fm.forward.x2.max_abs() < 1e-12);
        assert!(fm.backward.x1.max_abs_diff(&exact.backward.x1) < 1e-8);
    }

    #[test]
    fn compose_with_identity_and_shear() {
        let g = grid(128);
        let f = ScalarField2D::from_fn(&g, |x, _| x.cos());
        let id = FlowMap::identity(&g);
        assert!(compose(&f, &id, Direction::Forward).max_abs_diff(&f) < 1e-13);
        let fm = FlowMap::shear(&g, 1.0, 1.0, 1.0);
        let got = compose(&f, &fm, Direction::Forward);
        let want = ScalarField2D::from_fn(&g, |x, y| (x + y.sin()).cos());
        assert!(got.max_abs_diff(&want) < 1e-6);
    }

    #[test]
    fn translation_commutes_with_riesz() {
        let g = grid(32);
        // shift by whole cells so the composition is exact
        let h = g.spacing();
        let fm = FlowMap::translation(&g, (3.0 * h, -5.0 * h));
        let w = dealias(&ScalarField2D::from_fn(&g, |x, y| {
            (x + 2.0 * y).sin() * (3.0 * x).cos()
        }));
        assert!(riesz_commutator(&w, &fm).max_abs() < 1e-12);
        assert!(riesz_commutator(&w, &FlowMap::identity(&g)).max_abs() < 1e-12);
    }

    #[test]
    fn ratios_on_identity() {
        let g = grid(32);
        let w = ScalarField2D::from_fn(&g, |x, y| (x - y).sin());
        let id = FlowMap::identity(&g);
        assert!(matches!(
            commutator_ratio(&w, &id, BesovSpec::critical(2.0).unwrap()),
            Err(Error::DegenerateFlow)
        ));
        assert!((vishik_ratio(&w, &id) - 1.0).abs() < 1e-12);
        assert!(commutator_ratio(&w, &id, BesovSpec::B1_21).is_err());
    }

    #[test]
    fn shear_map_diagnostics() {
        let g = grid(64);
        let fm = FlowMap::shear(&g, 0.5, 1.0, 1.0);
        assert!(fm.roundtrip_error() < 1e-6);
        assert!(fm.jacobian_defect() < 1e-12);
        assert!((fm.displacement_seminorm(Direction::Forward) - 0.5).abs() < 1e-12);
        // |[[1, s], [0, 1]]|_2 at s = 0.5
        let want = spectral_norm_2x2(1.0, 0.5, 0.0, 1.0);
        assert!((fm.lipschitz_constant(Direction::Forward) - want).abs() < 1e-12);
        assert!((want - (1.0 + 0.25_f64 / 4.0).sqrt() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn tracker_follows_steady_shear() {
        let g = grid(64);
        let u = shear_velocity(&g);
        let mut tr = FlowTracker::new(u.clone());
        for _ in 0..10 {
            tr.push(u.clone(), 0.05);
        }
        let exact = FlowMap::shear(&g, 1.0, 1.0, 0.5);
        assert!(tr.map().forward.x1.max_abs_diff(&exact.forward.x1) < 1e-10);
    }

    #[test]
    fn tracker_midpoint_is_quadratic_exact() {
        // u(t) = (t^2 sin x2, 0): quadratic in time, so the reconstructed
        // midpoints are exact and only the RK4 error remains
        let g = grid(32);
        let at = |t: f64| {
            VectorField2D::new(
                ScalarField2D::from_fn(&g, |_, y| t * t * y.sin()),
                ScalarField2D::zeros(&g),
            )
        };
        let hs = [0.1, 0.05, 0.08, 0.07];
        let mut tr = FlowTracker::new(at(0.0));
        let mut t = 0.0;
        for h in hs {
            t += h;
            tr.push(at(t), h);
        }
        let exact = FlowMap::shear(&g, t * t * t / 3.0, 1.0, 1.0);
        // the first step uses the linear midpoint: error O(h^3) there only
        assert!(tr.map().forward.x1.max_abs_diff(&exact.forward.x1) < 2e-4);
    }
}
