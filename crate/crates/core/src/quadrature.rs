//! Fixed quadrature rules on segments, triangles and polygons.

use crate::mesh::Point;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> &'static [(f64, f64)] {
    const G1: [(f64, f64); 1] = [(0.0, 2.0)];
    const G2: [(f64, f64); 2] = [(-0.577_350_269_189_625_8, 1.0), (0.577_350_269_189_625_8, 1.0)];
    const G3: [(f64, f64); 3] = [
        (-0.774_596_669_241_483_4, 5.0 / 9.0),
        (0.0, 8.0 / 9.0),
        (0.774_596_669_241_483_4, 5.0 / 9.0),
    ];
    match n {
        1 => &G1,
        2 => &G2,
        3 => &G3,
        _ => panic!("gauss_legendre: only 1, 2 or 3 points are tabulated"),
    }
}

/// Integrates `f` over the segment `[a, b]` of a scalar parameter.
pub fn integrate_interval(a: f64, b: f64, points: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre(points)
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Integrates `f` over the straight segment `p0 -> p1` (arc-length measure).
pub fn integrate_segment(p0: Point, p1: Point, points: usize, mut f: impl FnMut(Point) -> f64) -> f64 {
    let len = (p1[0] - p0[0]).hypot(p1[1] - p0[1]);
    integrate_interval(0.0, 1.0, points, |t| {
        f([p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])])
    }) * len
}

// Dunavant degree-5 rule, barycentric coordinates and weights summing to 1.
const A1: f64 = 0.059_715_871_789_770;
const B1: f64 = 0.470_142_064_105_115;
const A2: f64 = 0.797_426_985_353_087;
const B2: f64 = 0.101_286_507_323_456;
const W0: f64 = 0.225;
const W1: f64 = 0.132_394_152_788_506;
const W2: f64 = 0.125_939_180_544_827;

const TRI7: [([f64; 3], f64); 7] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], W0),
    ([A1, B1, B1], W1),
    ([B1, A1, B1], W1),
    ([B1, B1, A1], W1),
    ([A2, B2, B2], W2),
    ([B2, A2, B2], W2),
    ([B2, B2, A2], W2),
];

fn tri_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Degree-5 integration over a triangle.
pub fn integrate_triangle(a: Point, b: Point, c: Point, mut f: impl FnMut(Point) -> f64) -> f64 {
    let area = tri_area(a, b, c).abs();
    TRI7.iter()
        .map(|&(l, w)| {
            let x = [
                l[0] * a[0] + l[1] * b[0] + l[2] * c[0],
                l[0] * a[1] + l[1] * b[1] + l[2] * c[1],
            ];
            w * f(x)
        })
        .sum::<f64>()
        * area
}

/// Integration over a convex polygon by fanning triangles out of `center`.
pub fn integrate_polygon(vertices: &[Point], center: Point, mut f: impl FnMut(Point) -> f64) -> f64 {
    if vertices.len() == 3 {
        return integrate_triangle(vertices[0], vertices[1], vertices[2], f);
    }
    let n = vertices.len();
    (0..n)
        .map(|k| integrate_triangle(center, vertices[k], vertices[(k + 1) % n], &mut f))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_cubics_exactly() {
        let v = integrate_interval(0.0, 2.0, 2, |x| x * x * x - x + 1.0);
        assert!((v - (4.0 - 2.0 + 2.0)).abs() < 1e-14);
        let v = integrate_interval(-1.0, 3.0, 3, |x| x.powi(5));
        assert!((v - (729.0 - 1.0) / 6.0).abs() < 1e-11);
    }

    #[test]
    fn triangle_rule_is_degree_five() {
        // Integral of x^a y^b over the reference triangle is a! b! / (a + b + 2)!.
        let fact = |n: u32| (1..=n).product::<u32>().max(1) as f64;
        for a in 0..=5u32 {
            for b in 0..=(5 - a) {
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                let v = integrate_triangle([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], |p| {
                    p[0].powi(a as i32) * p[1].powi(b as i32)
                });
                assert!((v - exact).abs() < 1e-14, "x^{a} y^{b}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn polygon_fan_matches_area() {
        let sq = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]];
        let v = integrate_polygon(&sq, [1.0, 0.5], |p| p[0]);
        assert!((v - 2.0).abs() < 1e-14);
    }
}
