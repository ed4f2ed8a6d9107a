//! A small fixed-dimension Nelder-Mead simplex minimizer.
//!
//! Used to polish the measurement-basis search after the coarse grid scan;
//! four parameters, smooth objective, no constraints (the objective is
//! periodic in every angle).

/// Outcome of a simplex run.
#[derive(Debug, Clone, Copy)]
pub struct SimplexResult<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Minimize `f` starting from `x0` with per-coordinate initial steps.
///
/// Stops when the spread of simplex values drops below `ftol` or after
/// `max_iter` iterations (reported through `converged`).
pub fn nelder_mead<const N: usize, F>(
    f: F,
    x0: [f64; N],
    steps: [f64; N],
    ftol: f64,
    max_iter: usize,
) -> SimplexResult<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, f(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += steps[i];
        simplex.push((x, f(&x)));
    }
    let order = |s: &mut Vec<([f64; N], f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    order(&mut simplex);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let spread = simplex[N].1 - simplex[0].1;
        if spread.abs() <= ftol {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = [0.0; N];
        for (x, _) in simplex.iter().take(N) {
            for i in 0..N {
                centroid[i] += x[i];
            }
        }
        for v in centroid.iter_mut() {
            *v /= N as f64;
        }

        let worst = simplex[N];
        let mut reflected = [0.0; N];
        for i in 0..N {
            reflected[i] = centroid[i] + ALPHA * (centroid[i] - worst.0[i]);
        }
        let f_reflected = f(&reflected);

        if f_reflected < simplex[0].1 {
            let mut expanded = [0.0; N];
            for i in 0..N {
                expanded[i] = centroid[i] + GAMMA * (reflected[i] - centroid[i]);
            }
            let f_expanded = f(&expanded);
            simplex[N] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[N - 1].1 {
            simplex[N] = (reflected, f_reflected);
        } else {
            let mut contracted = [0.0; N];
            for i in 0..N {
                contracted[i] = centroid[i] + RHO * (worst.0[i] - centroid[i]);
            }
            let f_contracted = f(&contracted);
            if f_contracted < worst.1 {
                simplex[N] = (contracted, f_contracted);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    for (x, b) in vertex.0.iter_mut().zip(&best) {
                        *x = b + SIGMA * (*x - b);
                    }
                    vertex.1 = f(&vertex.0);
                }
            }
        }
        order(&mut simplex);
    }

    SimplexResult {
        x: simplex[0].0,
        value: simplex[0].1,
        converged,
        iterations,
    }
}
