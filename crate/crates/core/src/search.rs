//! Derivative-free one- and two-dimensional minimizers.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a unimodal `f` on `[lo, hi]`.
///
/// Returns the best point seen, endpoints included, so a minimum sitting on the
/// boundary of the bracket is found exactly.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut best_x, mut best_f) = (lo, f(lo));
    let f_hi = f(hi);
    if f_hi < best_f {
        best_x = hi;
        best_f = f_hi;
    }
    if hi - lo <= tol {
        return (best_x, best_f);
    }

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
    }
    (best_x, best_f)
}

/// Minimizer of `f` on `[lo, hi]` for `f` a convex quadratic (or affine)
/// function, recovered from three evaluations, with a golden-section
/// fallback for anything else.
pub fn quadratic_piece_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    let mid = 0.5 * (lo + hi);
    let (fa, fm, fb) = (f(lo), f(mid), f(hi));
    let mut best = if fb < fa { (hi, fb) } else { (lo, fa) };
    let h = 0.5 * (hi - lo);
    let curvature = fa - 2.0 * fm + fb;
    if h > 0.0 && curvature > 0.0 {
        let s = (mid + h * (fa - fb) / (2.0 * curvature)).clamp(lo, hi);
        let fs = f(s);
        // an endpoint within rounding of the vertex value wins
        if fs < best.1 - 1e-15 * (1.0 + best.1.abs()) {
            best = (s, fs);
        }
    }
    let (g, fg) = golden_section(&mut f, lo, hi, tol);
    if fg < best.1 - 1e-15 * (1.0 + best.1.abs()) {
        best = (g, fg);
    }
    best
}

/// Compass search over eight directions with step halving.
///
/// `scale` gives the per-coordinate step unit at a point, so the search can
/// work in coordinates that are not isotropic. Stops once the step drops
/// below `min_step`.
pub fn pattern_search<F, S>(
    mut f: F,
    scale: S,
    start: [f64; 2],
    step: f64,
    min_step: f64,
) -> ([f64; 2], f64)
where
    F: FnMut([f64; 2]) -> f64,
    S: Fn([f64; 2]) -> [f64; 2],
{
    const DIRS: [[f64; 2]; 8] = [
        [1.0, 0.0],
        [-1.0, 0.0],
        [0.0, 1.0],
        [0.0, -1.0],
        [
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ],
        [
            -std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ],
        [
            std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ],
        [
            -std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ],
    ];
    let mut x = start;
    let mut fx = f(x);
    let mut h = step;
    let mut budget = 20_000;
    while h > min_step && budget > 0 {
        let unit = scale(x);
        let mut moved = false;
        for dir in DIRS {
            budget -= 1;
            let y = [x[0] + h * unit[0] * dir[0], x[1] + h * unit[1] * dir[1]];
            let fy = f(y);
            if fy < fx {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_and_boundary_minima() {
        let (x, fx) = golden_section(|t| (t - 0.3).powi(2), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6 && fx < 1e-12);
        let (x, _) = golden_section(|t| t, 0.0, 1.0, 1e-12);
        assert_eq!(x, 0.0);
        let (x, _) = golden_section(|t| -t, 0.0, 1.0, 1e-12);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn golden_handles_kinks() {
        let (x, _) = golden_section(|t| (t - 0.7).abs(), 0.0, 2.0, 1e-13);
        assert!((x - 0.7).abs() < 1e-12);
    }

    #[test]
    fn quadratic_pieces_are_exact() {
        let (x, _) = quadratic_piece_min(|t| 3.0 * (t - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-14);
        let (x, _) = quadratic_piece_min(|t| 2.0 - t, 0.0, 1.0, 1e-12);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn pattern_search_minimizes_a_tilted_bowl() {
        let f = |p: [f64; 2]| (p[0] - 1.0).powi(2) + 3.0 * (p[1] + 2.0).powi(2) + p[0] * p[1] * 0.5;
        let (x, _) = pattern_search(f, |_| [1.0, 1.0], [0.0, 0.0], 1.0, 1e-12);
        // stationary point of the quadratic
        let det = 2.0 * 6.0 - 0.25;
        let want = [
            (2.0 * 6.0 - 0.5 * (-12.0)) / det,
            (2.0 * (-12.0) - 0.5 * 2.0) / det,
        ];
        assert!(
            (x[0] - want[0]).abs() < 1e-6 && (x[1] - want[1]).abs() < 1e-6,
            "{x:?} {want:?}"
        );
    }
}
