mod common;

use hspg::data::rng::{bounded, seeded, symmetric, unit};
use hspg::problems::{LeastSquaresProblem, LogisticProblem, Problem};
use hspg::regularizer::grad_omega_on_support;
use hspg::{GroupPartition, Params};

use common::{l2, logistic_value, DenseLs};

fn central_diff(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut x = x.to_vec();
    (0..x.len())
        .map(|j| {
            let h = 1e-5 * x[j].abs().max(1.0);
            let orig = x[j];
            x[j] = orig + h;
            let up = f(&x);
            x[j] = orig - h;
            let down = f(&x);
            x[j] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
    l2(&d) / l2(a).max(l2(b)).max(1e-12)
}

#[test]
fn least_squares_gradient_matches_finite_differences() {
    let mut rng = seeded(1);
    for _ in 0..100 {
        let (big_n, n) = (1 + bounded(&mut rng, 30), 1 + bounded(&mut rng, 15));
        let a: Vec<f64> = (0..big_n * n).map(|_| symmetric(&mut rng)).collect();
        let y: Vec<f64> = (0..big_n).map(|_| 2.0 * symmetric(&mut rng)).collect();
        let x: Vec<f64> = (0..n).map(|_| symmetric(&mut rng)).collect();
        let batch: Vec<usize> = (0..1 + bounded(&mut rng, big_n)).map(|_| bounded(&mut rng, big_n)).collect();
        let p = LeastSquaresProblem::new(a.clone(), big_n, n, y.clone()).unwrap();
        let (value, grad) = p.batch_value_grad(&Params::new(x.clone()), &batch).unwrap();
        let ls = DenseLs { a: &a, y: &y, n };
        assert!((value - ls.value(&x, &batch)).abs() <= 1e-12 * value.abs().max(1.0));
        let fd = central_diff(|z| ls.value(z, &batch), &x);
        assert!(rel_err(&grad.x, &fd) < 1e-5);
    }
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    let mut rng = seeded(2);
    for _ in 0..100 {
        let (big_n, n) = (1 + bounded(&mut rng, 30), 1 + bounded(&mut rng, 15));
        let mut rows = vec![Vec::new(); big_n];
        for row in rows.iter_mut() {
            for j in 0..n {
                if unit(&mut rng) < 0.5 {
                    row.push((j, 3.0 * symmetric(&mut rng)));
                }
            }
        }
        let labels: Vec<f64> = (0..big_n).map(|_| if unit(&mut rng) < 0.5 { -1.0 } else { 1.0 }).collect();
        let x: Vec<f64> = (0..n).map(|_| 2.0 * symmetric(&mut rng)).collect();
        let b = symmetric(&mut rng);
        let batch: Vec<usize> = (0..1 + bounded(&mut rng, big_n)).map(|_| bounded(&mut rng, big_n)).collect();
        let p = LogisticProblem::from_rows(rows.clone(), labels.clone(), n, true).unwrap();
        let (value, grad) = p.batch_value_grad(&Params::with_bias(x.clone(), b), &batch).unwrap();
        assert!((value - logistic_value(&rows, &labels, &x, b, &batch)).abs() < 1e-12);

        let mut full = x.clone();
        full.push(b);
        let fd = central_diff(|z| logistic_value(&rows, &labels, &z[..n], z[n], &batch), &full);
        let mut got = grad.x.clone();
        got.push(grad.bias.unwrap());
        assert!(rel_err(&got, &fd) < 1e-5);
    }
}

#[test]
fn logistic_without_bias_ignores_intercept() {
    let rows = vec![vec![(0, 1.0)], vec![(1, -2.0)]];
    let p = LogisticProblem::from_rows(rows.clone(), vec![1.0, -1.0], 2, false).unwrap();
    let x = vec![0.3, -0.4];
    let (v, g) = p.batch_value_grad(&Params::new(x.clone()), &[0, 1]).unwrap();
    assert!((v - logistic_value(&rows, &[1.0, -1.0], &x, 0.0, &[0, 1])).abs() < 1e-15);
    assert!(g.bias.is_none());
}

#[test]
fn unit_direction_is_gradient_of_omega_off_zero_groups() {
    let mut rng = seeded(3);
    let partition = GroupPartition::from_sizes(&[3, 1, 4, 2]).unwrap();
    for _ in 0..100 {
        let mut x: Vec<f64> = (0..10).map(|_| symmetric(&mut rng)).collect();
        let zeroed = bounded(&mut rng, 4);
        x[partition.range(zeroed)].iter_mut().for_each(|v| *v = 0.0);
        let g = grad_omega_on_support(&Params::new(x.clone()), &partition);
        let omega = |z: &[f64]| partition.ranges().map(|r| l2(&z[r])).sum::<f64>();
        let fd = central_diff(omega, &x);
        for r in partition.ranges().enumerate().filter(|(k, _)| *k != zeroed).map(|(_, r)| r) {
            assert!(rel_err(&g.x[r.clone()], &fd[r]) < 1e-5);
        }
        assert!(g.x[partition.range(zeroed)].iter().all(|v| *v == 0.0));
    }
}
