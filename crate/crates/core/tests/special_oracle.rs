use edgeworth::models::ModelSpec;
use edgeworth::special::{ln_gamma, ln_gamma_diff, polygamma};
use statrs::function::gamma::{digamma, ln_gamma as ref_ln_gamma};

#[test]
fn ln_gamma_against_reference() {
    for &x in &[0.1, 0.5, 1.0, 2.5, 7.3, 31.0, 150.0, 1e4] {
        let want = ref_ln_gamma(x);
        assert!((ln_gamma(x) - want).abs() <= 1e-12 * want.abs().max(1.0), "x = {x}");
    }
    for &(x, y) in &[(3.2, 1.0), (2.0, 1.0), (10.5, 0.5), (0.7, 0.3)] {
        let want = ref_ln_gamma(x) - ref_ln_gamma(y);
        assert!((ln_gamma_diff(x, y) - want).abs() < 1e-12, "({x}, {y})");
    }
}

#[test]
fn digamma_against_reference() {
    for &x in &[0.2, 1.0, 1.5, 4.0, 12.0, 250.0] {
        assert!((polygamma(0, x) - digamma(x)).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn mean_cumulants_by_finite_differences() {
    // log E W_inf(beta) = beta x_0 + ln Gamma(b) - ln Gamma(a(beta))
    for model in [ModelSpec::bst(), ModelSpec::rrt(), ModelSpec::port()] {
        let lw = |beta: f64| {
            let m0 = model.m0();
            let a = (model.m(beta) + 1.0) / m0;
            beta * model.initial_position() as f64 + ref_ln_gamma(1.0 / m0) - ref_ln_gamma(a)
        };
        for &beta in &[-0.5, 0.0, 0.3] {
            let h = 1e-4;
            let d1 = (lw(beta + h) - lw(beta - h)) / (2.0 * h);
            let d2 = (lw(beta + h) - 2.0 * lw(beta) + lw(beta - h)) / (h * h);
            assert!((model.mean_cumulant(1, beta).unwrap() - d1).abs() < 1e-7);
            assert!((model.mean_cumulant(2, beta).unwrap() - d2).abs() < 1e-5);
            assert!((model.limit_mean_W(beta).unwrap().ln() - lw(beta)).abs() < 1e-12);
        }
    }
}
