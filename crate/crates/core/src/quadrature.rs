//! Gauss-Legendre nodes and panel integration.

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        // Chebyshev-flavored initial guess.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n and derivative at x by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for m in 2..=n {
                let m = m as f64;
                let p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = x;
        weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Nodes and weights mapped onto the panels of a sorted edge list.
pub fn panel_rule(edges: &[f64], order: usize) -> Vec<(f64, f64)> {
    let (nodes, weights) = gauss_legendre(order);
    let mut out = Vec::with_capacity(order * edges.len().saturating_sub(1));
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            out.push((mid + half * x, half * w));
        }
    }
    out
}

/// Integrates `f` over the sorted panel edges with a fixed-order rule.
pub fn integrate_panels(f: impl Fn(f64) -> f64, edges: &[f64], order: usize) -> f64 {
    panel_rule(edges, order)
        .iter()
        .map(|&(x, w)| w * f(x))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_rule_matches_reference() {
        let (nodes, weights) = gauss_legendre(5);
        // Classical values for n = 5.
        let expect_nodes = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        let expect_weights = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        let mut sorted: Vec<_> = nodes.iter().cloned().zip(weights.iter().cloned()).collect();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (got, (en, ew)) in sorted
            .iter()
            .zip(expect_nodes.iter().zip(expect_weights.iter()))
        {
            assert!((got.0 - en).abs() < 1e-14);
            assert!((got.1 - ew).abs() < 1e-14);
        }
    }

    #[test]
    fn polynomial_exactness() {
        // n-point rule is exact through degree 2n - 1.
        let val = integrate_panels(|x| x.powi(8), &[-1.0, 1.0], 5);
        assert!((val - 2.0 / 9.0).abs() < 1e-14);
        let val = integrate_panels(|x| x.powi(3) - x, &[-1.0, 1.0], 2);
        assert!(val.abs() < 1e-14);
    }

    #[test]
    fn panels_split_the_interval() {
        let whole = integrate_panels(f64::exp, &[0.0, 2.0], 12);
        let split = integrate_panels(f64::exp, &[0.0, 0.5, 1.1, 2.0], 12);
        let exact = 2f64.exp() - 1.0;
        assert!((whole - exact).abs() < 1e-12);
        assert!((split - exact).abs() < 1e-12);
    }
}
