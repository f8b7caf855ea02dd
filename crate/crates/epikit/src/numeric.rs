//! Floating-point numerics shared by the analysis modules: eigenvalues,
//! Newton polishing, a dense matrix exponential, adaptive quadrature, and
//! an embedded Runge-Kutta 4(5) integrator.

use nalgebra::{Complex, DMatrix, DVector};

/// Eigenvalues of a real square matrix; 2x2 by the quadratic formula,
/// larger sizes by QR iteration (Schur form).
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    match n {
        0 => vec![],
        1 => vec![Complex::new(m[(0, 0)], 0.0)],
        2 => {
            let tr = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let disc = tr * tr / 4.0 - det;
            if disc >= 0.0 {
                let s = disc.sqrt();
                vec![
                    Complex::new(tr / 2.0 - s, 0.0),
                    Complex::new(tr / 2.0 + s, 0.0),
                ]
            } else {
                let s = (-disc).sqrt();
                vec![Complex::new(tr / 2.0, -s), Complex::new(tr / 2.0, s)]
            }
        }
        _ => m.clone().complex_eigenvalues().iter().cloned().collect(),
    }
}

/// Damped Newton iteration on a square system. `f` returns the residual,
/// `jac` its Jacobian. Returns the polished point when the residual gets
/// below `tol` in the sup norm within `max_iter` iterations.
pub fn newton_polish<F, J>(
    mut x: DVector<f64>,
    f: F,
    jac: J,
    tol: f64,
    max_iter: usize,
) -> Option<DVector<f64>>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
    J: Fn(&DVector<f64>) -> DMatrix<f64>,
{
    let mut r = f(&x);
    for _ in 0..max_iter {
        let rn = r.amax();
        if rn <= tol {
            return Some(x);
        }
        let j = jac(&x);
        let lu = j.lu();
        let step = lu.solve(&(-&r))?;
        // damped step halving
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial = &x + lambda * &step;
            let rt = f(&trial);
            if rt.amax() < rn || rt.amax() <= tol {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    if r.amax() <= tol {
        Some(x)
    } else {
        None
    }
}

/// Dense matrix exponential by Pade-13 scaling and squaring with a
/// 1-norm-based scaling choice.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    const THETA_13: f64 = 5.371920351148152;
    // Pade-13 numerator coefficients b_0..b_13
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let n = a.nrows();
    let norm = one_norm(a);
    let mut s = 0u32;
    let mut scaled = a.clone();
    if norm > THETA_13 {
        s = (norm / THETA_13).log2().ceil() as u32;
        scaled /= 2f64.powi(s as i32);
    }
    let ident = DMatrix::<f64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * (B[13] * &a6 + B[11] * &a4 + B[9] * &a2)
        + B[7] * &a6
        + B[5] * &a4
        + B[3] * &a2
        + B[1] * &ident;
    let u = &scaled * u_inner;
    let v = &a6 * (B[12] * &a6 + B[10] * &a4 + B[8] * &a2)
        + B[6] * &a6
        + B[4] * &a4
        + B[2] * &a2
        + B[0] * &ident;
    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .expect("Pade denominator is nonsingular for scaled input");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

pub fn one_norm(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Adaptive Simpson quadrature with recursion-depth cap.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, left, tol / 2.0, depth - 1)
                + rec(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    // split the interval logarithmically first; kernels decay at very
    // different scales near zero and in the tail
    let mut total = 0.0;
    let mut left = a;
    let mut step = (b - a).min(1.0).max((b - a) / 1024.0);
    while left < b {
        let right = (left + step).min(b);
        let whole = simpson(f, left, 0.5 * (left + right), right);
        total += rec(f, left, right, whole, tol, 40);
        left = right;
        step *= 2.0;
    }
    total
}

/// One trajectory sample row.
#[derive(Clone, Debug)]
pub struct OdeSample {
    pub t: f64,
    pub state: Vec<f64>,
}

/// Dormand-Prince 4(5) with PI step control, sampling at `dt_out` spacing.
/// Errors with "step-size underflow" when the controller stalls.
pub fn rk45<F>(
    f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    dt_out: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Vec<OdeSample>, String>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    // 5th-order weights equal the last A row; 4th-order weights:
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut out = vec![OdeSample { t, state: y.clone() }];
    let mut next_out = t0 + dt_out;
    let mut h = (dt_out / 4.0).min(t_end - t0).max(1e-8);
    let mut k0 = f(t, &y);
    let mut steps = 0usize;
    while t < t_end {
        steps += 1;
        if steps > 50_000_000 {
            return Err("step limit exceeded".into());
        }
        let h_here = h.min(t_end - t).min(next_out - t).max(1e-14);
        let mut k = vec![k0.clone()];
        for stage in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..n {
                        ys[i] += h_here * a * kj[i];
                    }
                }
            }
            k.push(f(t + C[stage] * h_here, &ys));
        }
        // 5th order solution (FSAL: last stage already evaluated at it)
        let mut y5 = y.clone();
        for (j, kj) in k.iter().take(6).enumerate() {
            let a = A[5][j];
            if a != 0.0 {
                for i in 0..n {
                    y5[i] += h_here * a * kj[i];
                }
            }
        }
        let mut err = 0.0f64;
        for i in 0..n {
            let mut y4i = y[i];
            for (j, kj) in k.iter().enumerate() {
                y4i += h_here * B4[j] * kj[i];
            }
            let scale = abs_tol + rel_tol * y[i].abs().max(y5[i].abs());
            err = err.max(((y5[i] - y4i) / scale).abs());
        }
        if err <= 1.0 {
            t += h_here;
            y = y5;
            k0 = k.pop().expect("seven stages");
            if (t - next_out).abs() < 1e-12 || t >= next_out {
                out.push(OdeSample { t, state: y.clone() });
                next_out += dt_out;
            }
            if t >= t_end {
                break;
            }
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h_here * factor).min(t_end - t0);
        if h < 1e-13 {
            return Err("step-size underflow".into());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_decay_trajectory() {
        let sol = rk45(|_, y| vec![-y[0]], 0.0, &[1.0], 5.0, 0.5, 1e-8, 1e-10).unwrap();
        for s in &sol {
            assert!((s.state[0] - (-s.t).exp()).abs() < 1e-6, "t={}", s.t);
        }
    }

    #[test]
    fn zero_field_constant() {
        let sol = rk45(|_, _| vec![0.0, 0.0], 0.0, &[2.0, 3.0], 1.0, 0.25, 1e-8, 1e-10).unwrap();
        for s in &sol {
            assert_eq!(s.state, vec![2.0, 3.0]);
        }
    }

    #[test]
    fn expm_matches_scalar_exp() {
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -2.0]);
        let e = expm(&a);
        assert!((e[(0, 0)] - (-1.0f64).exp()).abs() < 1e-12);
        assert!((e[(1, 1)] - (-2.0f64).exp()).abs() < 1e-12);
        assert!(e[(0, 1)].abs() < 1e-14);
    }

    #[test]
    fn expm_nilpotent_exact() {
        // exp([[0,1],[0,0]]) = [[1,1],[0,1]]
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&a);
        assert!((e[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((e[(0, 1)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn expm_large_norm_scaling() {
        // exp of a matrix with norm >> theta_13 against the 1x1 truth
        let a = DMatrix::from_row_slice(1, 1, &[-40.0]);
        let e = expm(&a);
        assert!((e[(0, 0)] - (-40.0f64).exp()).abs() < 1e-22);
    }

    #[test]
    fn simpson_integrates_exp() {
        let v = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 20.0, 1e-10);
        assert!((v - (1.0 - (-20.0f64).exp())).abs() < 1e-8);
    }

    #[test]
    fn eigenvalues_2x2_complex_pair() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let ev = eigenvalues(&m);
        assert!((ev[0].im.abs() - 1.0).abs() < 1e-12);
        assert!(ev[0].re.abs() < 1e-12);
    }
}
