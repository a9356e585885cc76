//! Reference computations written directly from the definitions, shared by
//! the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::ops::Range;
use std::path::PathBuf;

pub fn l2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Contiguous groups of sizes `n / k` or `n / k + 1`, larger groups first.
pub fn equal_ranges(n: usize, k: usize) -> Vec<Range<usize>> {
    let (base, extra) = (n / k, n % k);
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for g in 0..k {
        let len = base + usize::from(g < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

pub fn zero_groups(x: &[f64], ranges: &[Range<usize>]) -> BTreeSet<usize> {
    ranges.iter().enumerate().filter(|(_, r)| x[(*r).clone()].iter().all(|v| *v == 0.0)).map(|(g, _)| g).collect()
}

pub fn iou(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        1.0
    } else {
        a.intersection(b).count() as f64 / union as f64
    }
}

/// Minimizes a unimodal function on `[lo, hi]` by ternary search.
pub fn ternary_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..300 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let mid = 0.5 * (lo + hi);
    if f(0.0) <= f(mid) {
        0.0
    } else {
        mid
    }
}

/// `argmin_z (1/2 eta)||z - v||^2 + lambda ||z||` for one group, searched
/// along the ray through `v`.
pub fn group_prox_by_search(v: &[f64], eta: f64, lambda: f64) -> Vec<f64> {
    let r = l2(v);
    if r == 0.0 {
        return vec![0.0; v.len()];
    }
    let s = ternary_min(|s| (s - r).powi(2) / (2.0 * eta) + lambda * s, 0.0, r);
    v.iter().map(|a| a * s / r).collect()
}

/// Closed-form group soft-threshold, written out independently.
pub fn group_shrink(v: &mut [f64], ranges: &[Range<usize>], t: f64) {
    for r in ranges {
        let nrm = l2(&v[r.clone()]);
        let factor = if nrm <= t { 0.0 } else { 1.0 - t / nrm };
        v[r.clone()].iter_mut().for_each(|a| *a *= factor);
    }
}

/// Dense least squares `f(x) = 1/(2|B|) sum_{i in B} (a_i x - y_i)^2`.
pub struct DenseLs<'a> {
    pub a: &'a [f64],
    pub y: &'a [f64],
    pub n: usize,
}

impl DenseLs<'_> {
    pub fn rows(&self) -> usize {
        self.y.len()
    }

    pub fn value(&self, x: &[f64], batch: &[usize]) -> f64 {
        let s: f64 = batch
            .iter()
            .map(|&i| {
                let row = &self.a[i * self.n..(i + 1) * self.n];
                let r: f64 = row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() - self.y[i];
                r * r
            })
            .sum();
        s / (2.0 * batch.len() as f64)
    }

    pub fn grad(&self, x: &[f64], batch: &[usize]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for &i in batch {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            let r: f64 = row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() - self.y[i];
            for (gj, aj) in g.iter_mut().zip(row) {
                *gj += r * aj;
            }
        }
        g.iter_mut().for_each(|v| *v /= batch.len() as f64);
        g
    }

    /// Largest eigenvalue of `A^T A / N` by power iteration.
    pub fn smoothness(&self) -> f64 {
        let all: Vec<usize> = (0..self.rows()).collect();
        let mut v = vec![1.0; self.n];
        let mut lam = 0.0;
        for _ in 0..500 {
            // A^T A v / N is the gradient at v of the problem with y = 0.
            let mut w = vec![0.0; self.n];
            for &i in &all {
                let row = &self.a[i * self.n..(i + 1) * self.n];
                let d: f64 = row.iter().zip(&v).map(|(p, q)| p * q).sum();
                for (wj, aj) in w.iter_mut().zip(row) {
                    *wj += d * aj;
                }
            }
            w.iter_mut().for_each(|a| *a /= self.rows() as f64);
            lam = l2(&w);
            v = w.iter().map(|a| a / lam).collect();
        }
        lam
    }
}

/// Full-batch proximal gradient with a fixed step. Returns the final point,
/// its gradient-mapping norm, and all iterates when `keep` is set.
pub fn pgd(
    ls: &DenseLs,
    ranges: &[Range<usize>],
    eta: f64,
    lambda: f64,
    tol: f64,
    max_iter: usize,
    keep: bool,
) -> (Vec<f64>, f64, Vec<Vec<f64>>) {
    let all: Vec<usize> = (0..ls.rows()).collect();
    let mut x = vec![0.0; ls.n];
    let mut iterates = Vec::new();
    let mut xi = f64::INFINITY;
    for it in 0..=max_iter {
        let g = ls.grad(&x, &all);
        let mut next: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - eta * b).collect();
        group_shrink(&mut next, ranges, eta * lambda);
        let diff: Vec<f64> = x.iter().zip(&next).map(|(a, b)| (a - b) / eta).collect();
        xi = l2(&diff);
        if xi < tol || it == max_iter {
            break;
        }
        x = next;
        if keep {
            iterates.push(x.clone());
        }
    }
    (x, xi, iterates)
}

/// `1/|B| sum log(1 + exp(-y_i (d_i x + b)))` over sparse rows.
pub fn logistic_value(rows: &[Vec<(usize, f64)>], labels: &[f64], x: &[f64], b: f64, batch: &[usize]) -> f64 {
    let s: f64 = batch
        .iter()
        .map(|&i| {
            let m: f64 = rows[i].iter().map(|&(j, v)| x[j] * v).sum::<f64>() + b;
            let z = labels[i] * m;
            if z > 0.0 {
                (-z).exp().ln_1p()
            } else {
                -z + z.exp().ln_1p()
            }
        })
        .sum();
    s / batch.len() as f64
}

/// Path of the a9a training file: `$HSPG_A9A`, else `<workspace>/data/a9a`.
pub fn a9a_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("HSPG_A9A") {
        let p = PathBuf::from(p);
        return p.is_file().then_some(p);
    }
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/a9a");
    p.is_file().then_some(p)
}
