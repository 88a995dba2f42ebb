//! Rank correlation and paired t-tests.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("inputs have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 observations, found {0}")]
    TooFewSamples(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
}

/// 1-based ranks, ties sharing the average of the ranks they span.
pub fn average_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("ranked values must not be NaN"));
    let mut ranks = vec![T::zero(); values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) hold ranks i+1..=j+1
        let avg = T::lit((i + j) as f64 / 2.0 + 1.0);
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Rank vector of an ordering: `order[pos]` is the item placed at `pos`, so
/// the item's rank is `pos + 1`.
pub fn ranks_from_order<T: Scalar>(order: &[usize]) -> Vec<T> {
    let mut ranks = vec![T::zero(); order.len()];
    for (pos, &item) in order.iter().enumerate() {
        ranks[item] = T::lit((pos + 1) as f64);
    }
    ranks
}

fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    let n = T::lit(x.len() as f64);
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).max(-T::one()).min(T::one()))
}

/// Spearman's rho: Pearson correlation of the average-rank vectors.
pub fn spearman_rho<T: Scalar>(x: &[T], y: &[T]) -> Result<T, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSamples(x.len()));
    }
    pearson(&average_ranks(x), &average_ranks(y)).ok_or(StatsError::DegenerateInput("all ranks tied"))
}

/// Spearman's rho between two orderings of the same items.
pub fn spearman_orders<T: Scalar>(a: &[usize], b: &[usize]) -> Result<T, StatsError> {
    spearman_rho::<T>(&ranks_from_order(a), &ranks_from_order(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    TwoSided,
    /// `after` exceeds `before` on average.
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest<T> {
    pub t: T,
    pub df: T,
    pub p_value: T,
    pub mean_difference: T,
}

/// Paired Student's t-test on `after - before`.
///
/// When every difference is exactly zero the statistic is taken as 0 with a
/// p-value of 1 (two-sided) or 0.5 (one-sided); constant non-zero differences
/// have no defined statistic and are rejected.
pub fn paired_t_test<T: Scalar>(before: &[T], after: &[T], alternative: Alternative) -> Result<TTest<T>, StatsError> {
    if before.len() != after.len() {
        return Err(StatsError::LengthMismatch(before.len(), after.len()));
    }
    let n = before.len();
    if n < 2 {
        return Err(StatsError::TooFewSamples(n));
    }
    let diffs: Vec<T> = after.iter().zip(before).map(|(&a, &b)| a - b).collect();
    let nf = T::lit(n as f64);
    let df = T::lit((n - 1) as f64);
    let mean = diffs.iter().copied().sum::<T>() / nf;
    let var = diffs.iter().map(|&d| (d - mean) * (d - mean)).sum::<T>() / df;
    if var == T::zero() {
        if mean == T::zero() {
            let p_value = match alternative {
                Alternative::TwoSided => T::one(),
                Alternative::Greater => T::lit(0.5),
            };
            return Ok(TTest { t: T::zero(), df, p_value, mean_difference: mean });
        }
        return Err(StatsError::DegenerateInput("differences have zero variance"));
    }
    let t = mean / (var / nf).sqrt();
    let p_value = match alternative {
        Alternative::TwoSided => student_t_two_sided(t, df),
        Alternative::Greater => student_t_sf(t, df),
    };
    Ok(TTest { t, df, p_value, mean_difference: mean })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided<T: Scalar>(t: T, df: T) -> T {
    let x = df / (df + t * t);
    regularized_incomplete_beta(df / T::lit(2.0), T::lit(0.5), x)
}

/// `P(T <= t)`.
pub fn student_t_cdf<T: Scalar>(t: T, df: T) -> T {
    let tail = student_t_two_sided(t, df) / T::lit(2.0);
    if t > T::zero() {
        T::one() - tail
    } else {
        tail
    }
}

/// `P(T >= t)`.
pub fn student_t_sf<T: Scalar>(t: T, df: T) -> T {
    let tail = student_t_two_sided(t, df) / T::lit(2.0);
    if t > T::zero() {
        tail
    } else {
        T::one() - tail
    }
}

/// Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < T::lit(0.5) {
        // reflection
        let pi = T::lit(std::f64::consts::PI);
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(COEFFS[0]);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::lit(i as f64));
    }
    let t = x + T::lit(7.5);
    T::lit(0.5 * (2.0 * std::f64::consts::PI).ln()) + (x + T::lit(0.5)) * t.ln() - t + acc.ln()
}

/// `I_x(a, b)` via the continued fraction, using the symmetry
/// `I_x(a, b) = 1 - I_{1-x}(b, a)` where it converges faster.
pub fn regularized_incomplete_beta<T: Scalar>(a: T, b: T, x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x >= T::one() {
        return T::one();
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (T::one() - x).ln();
    let front = ln_front.exp();
    if x < (a + T::one()) / (a + b + T::lit(2.0)) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        T::one() - front * beta_continued_fraction(b, a, T::one() - x) / b
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction<T: Scalar>(a: T, b: T, x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let eps = T::epsilon();
    let one = T::one();
    let two = T::lit(2.0);
    let (qab, qap, qam) = (a + b, a + one, a - one);
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = d.recip();
    let mut h = d;
    for m in 1..=500 {
        let m = T::lit(m as f64);
        let m2 = two * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        h = h * d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h = h * del;
        if (del - one).abs() <= eps {
            break;
        }
    }
    h
}
