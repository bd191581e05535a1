//! Quadrature rules: a 6-point degree-4 rule on triangles and 3-point Gauss
//! on segments.

/// Barycentric coordinates and weights normalized to sum to one (multiply
/// by the triangle area).
pub const TRIANGLE_DEG4: [([f64; 3], f64); 6] = {
    const A: f64 = 0.445_948_490_915_964_886_32;
    const WA: f64 = 0.223_381_589_678_011_465_70;
    const B: f64 = 0.091_576_213_509_770_743_46;
    const WB: f64 = 0.109_951_743_655_321_867_64;
    [
        ([A, A, 1.0 - 2.0 * A], WA),
        ([A, 1.0 - 2.0 * A, A], WA),
        ([1.0 - 2.0 * A, A, A], WA),
        ([B, B, 1.0 - 2.0 * B], WB),
        ([B, 1.0 - 2.0 * B, B], WB),
        ([1.0 - 2.0 * B, B, B], WB),
    ]
};

/// Parameter on `[0, 1]` and weights summing to one (multiply by the length).
pub const SEGMENT_GAUSS3: [(f64, f64); 3] = {
    // sqrt(15) / 10
    const D: f64 = 0.387_298_334_620_741_688_5;
    [(0.5 - D, 5.0 / 18.0), (0.5, 4.0 / 9.0), (0.5 + D, 5.0 / 18.0)]
};

#[cfg(test)]
mod tests {
    use super::*;

    fn tri_integral(f: impl Fn(f64, f64) -> f64) -> f64 {
        // reference triangle (0,0), (1,0), (0,1): area 1/2
        TRIANGLE_DEG4
            .iter()
            .map(|(l, w)| w * 0.5 * f(l[1], l[2]))
            .sum()
    }

    #[test]
    fn triangle_rule_is_exact_to_degree_four() {
        // ∫ x^a y^b over the reference triangle = a! b! / (a + b + 2)!
        let fact = |n: u32| (1..=n).product::<u32>().max(1) as f64;
        for a in 0..=4u32 {
            for b in 0..=(4 - a) {
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                let approx = tri_integral(|x, y| x.powi(a as i32) * y.powi(b as i32));
                assert!((exact - approx).abs() < 1e-15, "x^{a} y^{b}: {approx} vs {exact}");
            }
        }
    }

    #[test]
    fn segment_rule_is_exact_to_degree_five() {
        for p in 0..=5 {
            let approx: f64 = SEGMENT_GAUSS3.iter().map(|(s, w)| w * s.powi(p)).sum();
            assert!((approx - 1.0 / (p as f64 + 1.0)).abs() < 1e-15);
        }
    }
}
