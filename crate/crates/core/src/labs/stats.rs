use serde::Serialize;

/// Pearson correlation; `None` for fewer than two points or zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mean = |v: &[f64]| v[..n].iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys).take(n) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Linear-interpolated quantile, `q` in `[0, 1]`.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    let v = sorted(values);
    quantile_sorted(&v, q)
}

fn quantile_sorted(v: &[f64], q: f64) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    Some(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}

pub fn iqr(values: &[f64]) -> Option<f64> {
    let v = sorted(values);
    Some(quantile_sorted(&v, 0.75)? - quantile_sorted(&v, 0.25)?)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    let (a, b) = (sorted(a), sorted(b));
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    Some(d)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Quantiles {
    pub count: usize,
    pub min: f64,
    pub q01: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q99: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        let v = sorted(values);
        let q = |p| quantile_sorted(&v, p);
        Some(Quantiles {
            count: v.len(),
            min: *v.first()?,
            q01: q(0.01)?,
            q25: q(0.25)?,
            median: q(0.5)?,
            q75: q(0.75)?,
            q99: q(0.99)?,
            max: *v.last()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_correlation() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        assert!((pearson(&xs, &ys).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = ys.iter().map(|y| -y).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&[1.0], &[2.0]), None);
    }

    #[test]
    fn quantiles() {
        let v = [5.0, 1.0, 3.0, 2.0, 4.0];
        assert_eq!(quantile(&v, 0.5), Some(3.0));
        assert_eq!(iqr(&v), Some(2.0));
        assert_eq!(quantile(&[], 0.5), None);
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&[1.0, 2.0], &[1.0, 2.0]), Some(0.0));
        assert_eq!(ks_distance(&[1.0, 2.0], &[3.0, 4.0]), Some(1.0));
        assert_eq!(ks_distance(&[1.0, 3.0], &[2.0, 4.0]), Some(0.5));
    }

    proptest! {
        #[test]
        fn ks_is_symmetric_and_bounded(a in prop::collection::vec(-10.0f64..10.0, 1..40),
                                       b in prop::collection::vec(-10.0f64..10.0, 1..40)) {
            let d = ks_distance(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert!((d - ks_distance(&b, &a).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn quantiles_are_ordered(v in prop::collection::vec(-1e3f64..1e3, 1..60)) {
            let q = Quantiles::of(&v).unwrap();
            prop_assert!(q.min <= q.q01 && q.q01 <= q.q25 && q.q25 <= q.median);
            prop_assert!(q.median <= q.q75 && q.q75 <= q.q99 && q.q99 <= q.max);
        }
    }
}
