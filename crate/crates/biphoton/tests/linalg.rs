use approx::assert_relative_eq;
use biphoton::linalg::{gauss_legendre, solve, trapezoid_uniform, Lu, Mat2};
use num_complex::Complex;

type C64 = Complex<f64>;

/// Deterministic xorshift-based complex number stream for test matrices.
struct Stream(u64);

impl Stream {
    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    fn next_c(&mut self) -> C64 {
        Complex::new(self.next_f64(), self.next_f64())
    }
}

#[test]
fn lu_solve_small_system_exact() {
    // Permutation-heavy 3x3 with a known solution.
    let a = [
        [Complex::new(0.0, 0.0), Complex::new(2.0, 0.0), Complex::new(0.0, 0.0)],
        [Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(3.0, 0.0)],
        [Complex::new(4.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)],
    ];
    let b = [Complex::new(2.0, 0.0), Complex::new(9.0, 0.0), Complex::new(4.0, 0.0)];
    let x = solve(&a, &b).unwrap();
    assert_relative_eq!(x[0].re, 1.0, max_relative = 1e-14);
    assert_relative_eq!(x[1].re, 1.0, max_relative = 1e-14);
    assert_relative_eq!(x[2].re, 3.0, max_relative = 1e-14);
}

#[test]
fn lu_solve_random_residuals() {
    let mut s = Stream(0x9e3779b97f4a7c15);
    for _ in 0..50 {
        let mut a = [[Complex::new(0.0, 0.0); 9]; 9];
        let mut b = [Complex::new(0.0, 0.0); 9];
        for i in 0..9 {
            for j in 0..9 {
                a[i][j] = s.next_c();
            }
            b[i] = s.next_c();
        }
        let x = solve(&a, &b).expect("random dense matrix should be invertible");
        let mut worst: f64 = 0.0;
        for i in 0..9 {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 0..9 {
                acc += a[i][j] * x[j];
            }
            worst = worst.max((acc - b[i]).norm());
        }
        assert!(worst < 1e-11, "residual {worst:e}");
    }
}

#[test]
fn lu_solve_matches_nalgebra() {
    let mut s = Stream(12345);
    let mut a = [[Complex::new(0.0, 0.0); 9]; 9];
    let mut b = [Complex::new(0.0, 0.0); 9];
    for i in 0..9 {
        for j in 0..9 {
            a[i][j] = s.next_c();
        }
        b[i] = s.next_c();
    }
    let x = solve(&a, &b).unwrap();

    let na = nalgebra::DMatrix::from_fn(9, 9, |i, j| a[i][j]);
    let nb = nalgebra::DVector::from_fn(9, |i, _| b[i]);
    let nx = na.lu().solve(&nb).unwrap();
    for i in 0..9 {
        assert!((x[i] - nx[i]).norm() < 1e-12);
    }
}

#[test]
fn lu_singular_matrix_rejected() {
    let mut a = [[Complex::new(0.0, 0.0); 4]; 4];
    // Rank-deficient: two identical rows.
    for j in 0..4 {
        a[0][j] = Complex::new(j as f64 + 1.0, 0.0);
        a[1][j] = a[0][j];
        a[2][j] = Complex::new(0.0, j as f64);
        a[3][j] = Complex::new(1.0, 1.0);
    }
    assert!(Lu::factor(&a).is_none());
}

#[test]
fn expm_diagonal_and_nilpotent() {
    let d = Mat2([[Complex::new(0.3, -1.1), Complex::new(0.0, 0.0)],
                  [Complex::new(0.0, 0.0), Complex::new(-0.7, 2.0)]]);
    let e = d.expm();
    assert!((e.0[0][0] - Complex::new(0.3, -1.1).exp()).norm() < 1e-14);
    assert!((e.0[1][1] - Complex::new(-0.7, 2.0).exp()).norm() < 1e-14);
    assert!(e.0[0][1].norm() < 1e-15 && e.0[1][0].norm() < 1e-15);

    // Nilpotent: exp = I + A exactly.
    let n = Mat2([[Complex::new(0.0, 0.0), Complex::new(2.5, -0.5)],
                  [Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)]]);
    let en = n.expm();
    assert!((en.0[0][0] - Complex::new(1.0, 0.0)).norm() < 1e-14);
    assert!((en.0[0][1] - Complex::new(2.5, -0.5)).norm() < 1e-14);
}

#[test]
fn expm_rotation_block() {
    let th = 1.234_f64;
    let r = Mat2([[Complex::new(0.0, 0.0), Complex::new(-th, 0.0)],
                  [Complex::new(th, 0.0), Complex::new(0.0, 0.0)]]);
    let e = r.expm();
    assert!((e.0[0][0].re - th.cos()).abs() < 1e-13);
    assert!((e.0[1][0].re - th.sin()).abs() < 1e-13);
}

#[test]
fn expm_matches_taylor_reference() {
    // Independent reference: scaled Taylor series to machine precision.
    let a = Mat2([[Complex::new(0.4, 1.7), Complex::new(-2.1, 0.3)],
                  [Complex::new(0.9, -0.8), Complex::new(3.2, 0.6)]]);
    let scale = 1u32 << 10;
    let small = a.scale(Complex::new(1.0 / scale as f64, 0.0));
    let mut term = Mat2::<f64>::identity();
    let mut sum = Mat2::<f64>::identity();
    for k in 1..30 {
        term = term.mul(&small).scale(Complex::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    let mut reference = sum;
    for _ in 0..10 {
        reference = reference.mul(&reference);
    }
    let e = a.expm();
    for i in 0..2 {
        for j in 0..2 {
            let rel = (e.0[i][j] - reference.0[i][j]).norm() / reference.0[i][j].norm();
            assert!(rel < 1e-11, "rel {rel:e} at ({i},{j})");
        }
    }
}

#[test]
fn gauss_legendre_known_nodes() {
    // n = 2 on (0, 1): nodes 1/2 +- 1/(2 sqrt 3), weights 1/2.
    let nodes = gauss_legendre::<f64>(2);
    let off = 0.5 / 3.0_f64.sqrt();
    let mut xs: Vec<f64> = nodes.iter().map(|&(x, _)| x).collect();
    xs.sort_by(f64::total_cmp);
    assert_relative_eq!(xs[0], 0.5 - off, max_relative = 1e-14);
    assert_relative_eq!(xs[1], 0.5 + off, max_relative = 1e-14);
    for &(_, w) in &nodes {
        assert_relative_eq!(w, 0.5, max_relative = 1e-14);
    }
}

#[test]
fn gauss_legendre_exact_for_polynomials() {
    // n-point rule is exact through degree 2n - 1.
    let n = 7;
    let nodes = gauss_legendre::<f64>(n);
    for deg in 0..(2 * n) {
        let quad: f64 = nodes.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
        let exact = 1.0 / (deg as f64 + 1.0);
        assert_relative_eq!(quad, exact, max_relative = 1e-12);
    }
    let total: f64 = gauss_legendre::<f64>(64).iter().map(|&(_, w)| w).sum();
    assert_relative_eq!(total, 1.0, max_relative = 1e-13);
}

#[test]
fn trapezoid_linear_exact() {
    let h = 0.1;
    let values: Vec<f64> = (0..11).map(|i| 3.0 * i as f64 * h + 2.0).collect();
    // integral of 3x + 2 over [0, 1] = 3.5; trapezoid is exact for linears.
    assert_relative_eq!(trapezoid_uniform(&values, h), 3.5, max_relative = 1e-14);
    assert_eq!(trapezoid_uniform(&values[..1], h), 0.0);
}
