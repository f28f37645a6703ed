use std::f64::consts::PI;
use std::sync::Arc;

use crate::ddsolver::Problem;
use crate::mesh::{Extent, Point, Side};
use crate::mpfa::{BcKind, Tensor};

type Field = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
type Vector = Arc<dyn Fn(Point) -> Point + Send + Sync>;

/// Closed-form pressure with its gradient and the consistent source.
#[derive(Clone)]
pub struct ManufacturedCase {
    pub domain: Extent,
    /// Constant permeability.
    pub k: Tensor,
    pressure: Field,
    gradient: Vector,
    source: Field,
}

impl std::fmt::Debug for ManufacturedCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedCase").field("domain", &self.domain).field("k", &self.k).finish_non_exhaustive()
    }
}

impl ManufacturedCase {
    pub fn new(domain: Extent, k: Tensor, pressure: Field, gradient: Vector, source: Field) -> Self {
        Self { domain, k, pressure, gradient, source }
    }

    pub fn pressure(&self, x: Point) -> f64 {
        self.pressure.as_ref()(x)
    }

    pub fn gradient(&self, x: Point) -> Point {
        self.gradient.as_ref()(x)
    }

    /// Darcy flux `-K grad p`.
    pub fn flux(&self, x: Point) -> Point {
        let g = self.k.apply(self.gradient(x));
        [-g[0], -g[1]]
    }

    pub fn source(&self, x: Point) -> f64 {
        self.source.as_ref()(x)
    }

    /// Problem with the given condition type on each side (`Left, Right, Bottom, Top`).
    pub fn problem(&self, kinds: [BcKind; 4]) -> Problem {
        let c = self.clone();
        let c2 = self.clone();
        let c3 = self.clone();
        Problem {
            source: Arc::new(move |x| c.source(x)),
            kinds,
            pressure: Arc::new(move |x| c2.pressure(x)),
            flux: Arc::new(move |side: Side, x| {
                let u = c3.flux(x);
                let n = side.outward_normal();
                u[0] * n[0] + u[1] * n[1]
            }),
        }
    }

    pub fn dirichlet_problem(&self) -> Problem {
        self.problem([BcKind::Dirichlet; 4])
    }
}

/// `p = y^2 (1 - y/3) + x (2 - x) y sin(2 pi x)` on `(0, 2)^2`, `K = I`.
pub fn example1_case() -> ManufacturedCase {
    example1_case_with(Extent { x0: 0.0, y0: 0.0, x1: 2.0, y1: 2.0 }, Tensor::IDENTITY)
}

/// The example-1 pressure with a constant full tensor; `f = -div(K grad p)`.
pub fn example1_case_with(domain: Extent, k: Tensor) -> ManufacturedCase {
    let p = |x: Point| {
        let (x, y) = (x[0], x[1]);
        y * y * (1.0 - y / 3.0) + x * (2.0 - x) * y * (2.0 * PI * x).sin()
    };
    let grad = |x: Point| {
        let (x, y) = (x[0], x[1]);
        let (s, c) = ((2.0 * PI * x).sin(), (2.0 * PI * x).cos());
        [
            (2.0 - 2.0 * x) * y * s + (2.0 * x - x * x) * y * 2.0 * PI * c,
            2.0 * y - y * y + (2.0 * x - x * x) * s,
        ]
    };
    let [kxx, kxy, kyy] = k.0;
    let f = move |x: Point| {
        let (x, y) = (x[0], x[1]);
        let (s, c) = ((2.0 * PI * x).sin(), (2.0 * PI * x).cos());
        let pxx = y * (-2.0 * s + 4.0 * PI * (2.0 - 2.0 * x) * c - 4.0 * PI * PI * (2.0 * x - x * x) * s);
        let pxy = (2.0 - 2.0 * x) * s + (2.0 * x - x * x) * 2.0 * PI * c;
        let pyy = 2.0 - 2.0 * y;
        -(kxx * pxx + 2.0 * kxy * pxy + kyy * pyy)
    };
    ManufacturedCase::new(domain, k, Arc::new(p), Arc::new(grad), Arc::new(f))
}

/// Affine `p = a + b x + c y` with constant `K`; the source vanishes.
pub fn linear_case(domain: Extent, k: Tensor, a: f64, b: f64, c: f64) -> ManufacturedCase {
    ManufacturedCase::new(
        domain,
        k,
        Arc::new(move |x: Point| a + b * x[0] + c * x[1]),
        Arc::new(move |_| [b, c]),
        Arc::new(|_| 0.0),
    )
}
