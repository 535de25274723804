//! Finite-difference weights.

/// Central stencil for the `order`-th derivative at 0 on nodes `-w..=w`,
/// fourth-order accurate. Fornberg's recursion.
pub fn central_weights(order: usize) -> Vec<f64> {
    if order == 0 {
        return vec![1.0];
    }
    let half = order.div_ceil(2) + 1;
    let nodes: Vec<f64> = (-(half as i64)..=half as i64).map(|k| k as f64).collect();
    fornberg(&nodes, order)
}

fn fornberg(x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0];
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i];
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[m]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_stencils() {
        let w1 = central_weights(1);
        let e1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w1.iter().zip(e1) {
            assert!((a - b).abs() < 1e-14);
        }
        let w2 = central_weights(2);
        let e2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w2.iter().zip(e2) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn third_derivative_of_quartic() {
        let w = central_weights(3);
        let half = (w.len() / 2) as i64;
        let h = 0.1;
        let x0 = 0.3;
        let d: f64 = (-half..=half)
            .zip(&w)
            .map(|(k, c)| c * (x0 + k as f64 * h).powi(4))
            .sum::<f64>()
            / h.powi(3);
        assert!((d - 24.0 * x0).abs() < 1e-9);
    }
}
