//! Fixed-order Gauss-Legendre quadrature.

/// Order used for `∫₀¹ Q_α dα`.
pub const QUADRATURE_POINTS: usize = 64;

/// Nodes and weights on `[-1, 1]`. Roots of `P_n` are found by Newton's
/// method from the Chebyshev-like guess `cos(π(i + 3/4)/(n + 1/2))`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫₀¹ f` with an `n`-point rule. Nodes are interior, so `f` is never
/// evaluated at the endpoints.
pub fn integrate_unit_interval(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| 0.5 * w * f(0.5 * (x + 1.0)))
        .sum()
}
