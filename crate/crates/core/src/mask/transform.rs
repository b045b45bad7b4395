//! Character transforms between mask coefficients and cell values.
//!
//! Coefficients are indexed by `α = Σ α_(i) p^i`; cell values by
//! `s = Σ_j ω_j p^{n-j}` so that cell `s` is `[s p^{-n}, (s+1) p^{-n})`.
//! The value on cell `ω` is `Σ_α a_α ζ^{-⟨α, ω⟩}` with
//! `⟨α, ω⟩ = Σ_i α_(i) ω_{i+1}`.

use super::cyclotomic::Scalar;
use crate::group::Prime;

fn digits(mut x: usize, p: usize, n: u32) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Reverses the `n` base-`p` digits of `x`.
fn reverse_digits(x: usize, p: usize, n: u32) -> usize {
    digits(x, p, n).into_iter().fold(0, |acc, d| acc * p + d)
}

/// Applies the `p`-point transform `y_w = Σ_a x_a ζ^{sign·a·w}` along every
/// digit of the index, in place.
fn butterfly<S: Scalar>(prime: Prime, n: u32, data: &mut [S], sign: i64) {
    let p = prime.get() as usize;
    let roots: Vec<S> = (0..p)
        .map(|e| S::root(prime, (sign * e as i64).rem_euclid(p as i64) as u32))
        .collect();
    let mut stride = 1;
    for _ in 0..n {
        let block = stride * p;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let idx: Vec<usize> = (0..p).map(|a| base + offset + a * stride).collect();
                let input: Vec<S> = idx.iter().map(|&i| data[i].clone()).collect();
                for (w, &target) in idx.iter().enumerate() {
                    let mut acc = S::zero(prime);
                    for (a, x) in input.iter().enumerate() {
                        if !x.is_zero() {
                            acc = acc.add(&x.mul(&roots[(a * w) % p]));
                        }
                    }
                    data[target] = acc;
                }
            }
        }
        stride = block;
    }
}

/// Cell values from coefficients with a radix-`p` butterfly.
pub fn forward<S: Scalar>(prime: Prime, n: u32, coeffs: &[S]) -> Vec<S> {
    let p = prime.get() as usize;
    let mut data = coeffs.to_vec();
    butterfly(prime, n, &mut data, -1);
    let mut out = vec![S::zero(prime); data.len()];
    for (beta, v) in data.into_iter().enumerate() {
        out[reverse_digits(beta, p, n)] = v;
    }
    out
}

/// Coefficients from cell values.
pub fn inverse<S: Scalar>(prime: Prime, n: u32, values: &[S]) -> Vec<S> {
    let p = prime.get() as usize;
    let mut data = vec![S::zero(prime); values.len()];
    for (s, v) in values.iter().enumerate() {
        data[reverse_digits(s, p, n)] = v.clone();
    }
    butterfly(prime, n, &mut data, 1);
    let scale = (p as u64).pow(n);
    data.into_iter().map(|v| v.div_int(scale)).collect()
}

/// The double sum, cell by cell.
pub fn forward_naive<S: Scalar>(prime: Prime, n: u32, coeffs: &[S]) -> Vec<S> {
    let p = prime.get() as usize;
    (0..coeffs.len())
        .map(|s| {
            // ω_{i+1} is digit n-1-i of s.
            let omega = digits(s, p, n);
            coeffs
                .iter()
                .enumerate()
                .fold(S::zero(prime), |acc, (alpha, a)| {
                    let pairing: usize = digits(alpha, p, n)
                        .iter()
                        .enumerate()
                        .map(|(i, d)| d * omega[n as usize - 1 - i])
                        .sum();
                    let e = (p - pairing % p) % p;
                    acc.add(&a.mul(&S::root(prime, e as u32)))
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::cyclotomic::Cyclotomic;
    use num_rational::BigRational;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn rat(prime: Prime, xs: &[(i64, i64)]) -> Vec<Cyclotomic> {
        xs.iter()
            .map(|&(a, b)| Cyclotomic::from_rational(prime, BigRational::new(a.into(), b.into())))
            .collect()
    }

    #[test]
    fn haar_and_diagonal() {
        let prime = p(2);
        assert_eq!(forward(prime, 1, &rat(prime, &[(1, 2), (1, 2)])), rat(prime, &[(1, 1), (0, 1)]));
        let diag = rat(prime, &[(1, 2), (0, 1), (0, 1), (1, 2)]);
        assert_eq!(forward(prime, 2, &diag), rat(prime, &[(1, 1), (0, 1), (0, 1), (1, 1)]));
        let cols = rat(prime, &[(1, 2), (0, 1), (1, 2), (0, 1)]);
        assert_eq!(forward(prime, 2, &cols), rat(prime, &[(1, 1), (0, 1), (1, 1), (0, 1)]));
    }

    #[test]
    fn fast_matches_naive_and_inverts() {
        let prime = p(3);
        let coeffs: Vec<Cyclotomic> = (0..27)
            .map(|i| {
                Cyclotomic::from_coords(
                    prime,
                    vec![BigRational::new((i % 5).into(), 3.into()), BigRational::new((i % 2).into(), 1.into())],
                )
                .unwrap()
            })
            .collect();
        let fast = forward(prime, 3, &coeffs);
        assert_eq!(fast, forward_naive(prime, 3, &coeffs));
        assert_eq!(inverse(prime, 3, &fast), coeffs);
    }
}
