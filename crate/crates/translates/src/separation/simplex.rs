//! Nelder–Mead simplex descent in four dimensions.

pub type Point4 = [f64; 4];

const DIM: usize = 4;

/// Minimizes `f` from `x0`, with the initial simplex spanned by `step` along
/// each axis. Stops after `max_iter` iterations or once the spread of
/// objective values across the simplex is below `ftol`.
pub fn minimize(f: &dyn Fn(&Point4) -> f64, x0: Point4, step: f64, max_iter: usize, ftol: f64) -> (Point4, f64) {
    let mut simplex: Vec<(Point4, f64)> = Vec::with_capacity(DIM + 1);
    simplex.push((x0, f(&x0)));
    for i in 0..DIM {
        let mut x = x0;
        x[i] += if x[i].abs() > 1e-12 { step * x[i].abs().max(0.1) } else { step };
        simplex.push((x, f(&x)));
    }

    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[DIM].1;
        if worst.is_finite() && (worst - best).abs() <= ftol * (1.0 + best.abs()) {
            break;
        }
        let mut centroid = [0.0; DIM];
        for (x, _) in &simplex[..DIM] {
            for k in 0..DIM {
                centroid[k] += x[k] / DIM as f64;
            }
        }
        let along = |t: f64| -> Point4 {
            let w = simplex[DIM].0;
            std::array::from_fn(|k| centroid[k] + t * (w[k] - centroid[k]))
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            simplex[DIM] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[DIM - 1].1 {
            simplex[DIM] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let x = along(-0.5);
                (x, f(&x))
            } else {
                let x = along(0.5);
                (x, f(&x))
            };
            if fc < worst.min(fr) {
                simplex[DIM] = (xc, fc);
            } else {
                let x0 = simplex[0].0;
                for (x, fx) in simplex.iter_mut().skip(1) {
                    *x = std::array::from_fn(|k| x0[k] + 0.5 * (x[k] - x0[k]));
                    *fx = f(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let f = |x: &Point4| (x[0] - 1.0).powi(2) + 2.0 * (x[1] + 0.5).powi(2) + x[2].powi(2) + 3.0 * (x[3] - 2.0).powi(2);
        let (x, fx) = minimize(&f, [0.0; 4], 0.5, 2000, 1e-20);
        assert!(fx < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[3] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn handles_infinite_regions() {
        let f = |x: &Point4| {
            if x[0] < 0.0 {
                f64::INFINITY
            } else {
                (x[0] - 0.3).powi(2) + x[1].powi(2) + x[2].powi(2) + x[3].powi(2)
            }
        };
        let (_, fx) = minimize(&f, [1.0, 1.0, 1.0, 1.0], 0.2, 3000, 1e-15);
        assert!(fx < 1e-10);
    }
}
