//! Rational generating functions with integer coefficients and their Taylor
//! expansions.

use std::fmt;

use serde::{Deserialize, Serialize};

/// num(t)/den(t), coefficients listed from the constant term; den(0) = ±1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSeries {
    pub num: Vec<i64>,
    pub den: Vec<i64>,
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

impl RationalSeries {
    pub fn new(num: Vec<i64>, den: Vec<i64>) -> Self {
        assert!(matches!(den.first(), Some(1) | Some(-1)), "denominator must be invertible in ℤ[[t]]");
        RationalSeries { num, den }
    }

    pub fn zero() -> Self {
        Self::new(vec![], vec![1])
    }

    /// Coefficients of t^0 .. t^n by long division.
    pub fn coefficients(&self, n: usize) -> Vec<i64> {
        let d0 = self.den[0];
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut c = self.num.get(k).copied().unwrap_or(0);
            for j in 1..self.den.len().min(k + 1) {
                c -= self.den[j] * out[k - j];
            }
            out.push(c * d0);
        }
        out
    }

    pub fn add(&self, o: &RationalSeries) -> RationalSeries {
        let num = poly_add(&poly_mul(&self.num, &o.den), &poly_mul(&o.num, &self.den));
        Self::new(num, poly_mul(&self.den, &o.den))
    }

    pub fn scaled(&self, k: i64) -> RationalSeries {
        Self::new(self.num.iter().map(|x| x * k).collect(), self.den.clone())
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &[i64]| {
            let terms: Vec<String> = p
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| match i {
                    0 => format!("{c}"),
                    1 => format!("{c}t"),
                    _ => format!("{c}t^{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ").replace("+ -", "- ")
            }
        };
        write!(f, "({})/({})", show(&self.num), show(&self.den))
    }
}

/// −t³(t³ − 2t² + 2t − 3) / ((t − 1)²(t² + t + 1)).
pub fn p2_non_euclidean() -> RationalSeries {
    let num = poly_mul(&[0, 0, 0, -1], &[-3, 2, -2, 1]);
    let den = poly_mul(&poly_mul(&[-1, 1], &[-1, 1]), &[1, 1, 1]);
    RationalSeries::new(num, den)
}

/// −t³(t² − t + 2) / ((t − 1)(t² + 1)), the series of an interval at ℓ = 3.
pub fn p3_interval() -> RationalSeries {
    let num = poly_mul(&[0, 0, 0, -1], &[2, -1, 1]);
    let den = poly_mul(&[-1, 1], &[1, 0, 1]);
    // den(0) = −1: flip both signs so the expansion starts from +1
    RationalSeries::new(num.iter().map(|x| -x).collect(), den.iter().map(|x| -x).collect())
}

/// −2t³ / (t − 1), the series of a circle at ℓ = 3.
pub fn p3_circle() -> RationalSeries {
    RationalSeries::new(vec![0, 0, 0, 2], vec![1, -1])
}

/// Series predicted for a 3-torsion subgraph made of circles and intervals.
pub fn p3_for_components(circles: usize, intervals: usize) -> RationalSeries {
    p3_circle().scaled(circles as i64).add(&p3_interval().scaled(intervals as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_expansions() {
        // (t − 1)²(t² + t + 1) = 1 − t − t³ + t⁴
        assert_eq!(p2_non_euclidean().den, vec![1, -1, 0, -1, 1]);
        assert_eq!(&p2_non_euclidean().coefficients(10)[3..], &[3, 1, 3, 5, 3, 5, 7, 5]);
        assert_eq!(&p3_interval().coefficients(10)[3..], &[2, 1, 0, 1, 2, 1, 0, 1]);
        assert_eq!(&p3_circle().coefficients(10)[3..], &[2; 8]);
        assert_eq!(p3_circle().coefficients(2), vec![0, 0, 0]);
    }

    #[test]
    fn sums_expand_termwise() {
        let s = p3_for_components(1, 2);
        let (a, b) = (p3_circle().coefficients(20), p3_interval().coefficients(20));
        let expect: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + 2 * y).collect();
        assert_eq!(s.coefficients(20), expect);
    }

    #[test]
    fn series_times_denominator_recovers_numerator() {
        let s = p2_non_euclidean();
        let c = s.coefficients(30);
        let back = poly_mul(&c, &s.den);
        assert_eq!(&back[..s.num.len()], &s.num[..]);
        assert!(back[s.num.len()..=30].iter().all(|&x| x == 0));
    }
}
