//! Special functions: factorials, Laguerre polynomials, the terminating
//! ₂F₀ series and its regularized product with monomials, and normalized
//! oscillator eigenfunctions.

use std::sync::OnceLock;

use num_complex::Complex;

use crate::scalar::{CompensatedSum, Field, Real};

/// Largest order for which `n!` and the kernel coefficients are formed in
/// exact integer arithmetic. Above this, log space is used.
const EXACT_FACTORIAL_MAX: usize = 20;

fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

const LOG_FACTORIAL_TABLE_LEN: usize = 1024;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = CompensatedSum::<f64>::new();
        (0..LOG_FACTORIAL_TABLE_LEN)
            .map(|n| {
                if n <= EXACT_FACTORIAL_MAX {
                    (factorial_u128(n) as f64).ln()
                } else {
                    if n == EXACT_FACTORIAL_MAX + 1 {
                        acc.add((factorial_u128(EXACT_FACTORIAL_MAX) as f64).ln());
                    }
                    acc.add((n as f64).ln());
                    acc.value()
                }
            })
            .collect()
    })
}

/// `ln(n!)`.
pub fn log_factorial<T: Real>(n: usize) -> T {
    if n <= EXACT_FACTORIAL_MAX {
        return T::from_u128(factorial_u128(n)).unwrap().ln();
    }
    let table = log_factorial_table();
    if n < table.len() {
        return T::lit(table[n]);
    }
    let mut acc = CompensatedSum::new();
    acc.add(T::lit(table[table.len() - 1]));
    for k in table.len()..=n {
        acc.add(T::from_count(k).ln());
    }
    acc.value()
}

/// `n!` as a float; overflows to infinity like any other float operation.
pub fn factorial<T: Real>(n: usize) -> T {
    if n <= EXACT_FACTORIAL_MAX {
        T::from_u128(factorial_u128(n)).unwrap()
    } else {
        log_factorial::<T>(n).exp()
    }
}

/// Laguerre polynomial `Lₙ(x)` from the three-term recurrence
/// `(k+1)L_{k+1} = (2k+1−x)L_k − kL_{k−1}`.
pub fn laguerre<T: Field>(n: usize, x: T) -> T {
    let one = T::one();
    let two = one.clone() + one.clone();
    let mut prev = one.clone();
    if n == 0 {
        return prev;
    }
    let mut curr = one.clone() - x.clone();
    let mut k = one.clone();
    for _ in 1..n {
        let k1 = k.clone() + one.clone();
        let next = ((two.clone() * k.clone() + one.clone() - x.clone()) * curr.clone()
            - k.clone() * prev)
            / k1.clone();
        prev = curr;
        curr = next;
        k = k1;
    }
    curr
}

/// Terms of `₂F₀(−n, −j; ; x)`, σ = 0 ..= min(n, j).
pub fn hyp2f0_terms<T: Field>(n: usize, j: usize, x: T) -> impl Iterator<Item = T> {
    let stop = n.min(j);
    let mut term = T::one();
    let mut sigma = 0usize;
    std::iter::from_fn(move || {
        if sigma > stop {
            return None;
        }
        let out = term.clone();
        // t_{σ+1} = t_σ (n−σ)(j−σ) x / (σ+1); the two sign flips of (−n)_σ(−j)_σ cancel.
        let a = count::<T>(n - sigma);
        let b = if sigma < j {
            count::<T>(j - sigma)
        } else {
            T::zero()
        };
        term = term.clone() * a * b * x.clone() / count::<T>(sigma + 1);
        sigma += 1;
        Some(out)
    })
}

/// Terminating `₂F₀(−n, −j; ; x) = Σ_σ (−n)_σ(−j)_σ x^σ / σ!`.
pub fn hyp2f0_terminating<T: Field>(n: usize, j: usize, x: T) -> T {
    hyp2f0_terms(n, j, x).fold(T::zero(), |acc, t| acc + t)
}

/// `k` in a generic field, by binary doubling.
fn count<T: Field>(k: usize) -> T {
    let mut out = T::zero();
    let mut unit = T::one();
    let mut rest = k;
    while rest > 0 {
        if rest & 1 == 1 {
            out = out + unit.clone();
        }
        unit = unit.clone() + unit;
        rest >>= 1;
    }
    out
}

/// `z̄^{n−σ} z^{j−σ}` factors as `r^{n+j−2σ} e^{i(j−n)θ}`; this returns the
/// unit phase, computed so that swapping `n` and `j` conjugates it exactly.
fn monomial_phase<T: Real>(n: usize, j: usize, z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r == T::zero() || n == j {
        return Complex::new(T::one(), T::zero());
    }
    let u = z / r;
    if j > n {
        u.powi((j - n) as i32)
    } else {
        u.conj().powi((n - j) as i32)
    }
}

/// Σ_σ (−1)^σ c(σ) r^{n+j−2σ} with `c(σ) = e^{log_scale} / (σ! (n−σ)! (j−σ)!)`.
///
/// Only the largest term is formed in log space; the rest follow from the
/// ratio `t_{σ+1}/t_σ = (n−σ)(j−σ) / ((σ+1) r²)`, walking outwards from it.
/// `at_origin` supplies the exact r⁰ coefficient.
fn signed_radial_sum<T: Real>(
    n: usize,
    j: usize,
    r: T,
    log_scale: T,
    at_origin: impl Fn(usize) -> T,
) -> T {
    let stop = n.min(j);
    if r == T::zero() {
        // only the r⁰ term survives, and it exists only on the diagonal
        if n != j {
            return T::zero();
        }
        let c = at_origin(n);
        return if n.is_multiple_of(2) { c } else { -c };
    }
    let r2 = r * r;
    let ratio =
        |sigma: usize| T::from_count((n - sigma) * (j - sigma)) / (T::from_count(sigma + 1) * r2);
    // the ratio falls monotonically in σ, so the peak is where it drops below one
    let peak = (0..stop).find(|&s| ratio(s) <= T::one()).unwrap_or(stop);
    let log_peak = log_scale
        - log_factorial::<T>(peak)
        - log_factorial::<T>(n - peak)
        - log_factorial::<T>(j - peak)
        + T::from_count(n + j - 2 * peak) * r.ln();
    let mut terms = vec![T::zero(); stop + 1];
    terms[peak] = log_peak.exp();
    for sigma in peak..stop {
        terms[sigma + 1] = terms[sigma] * ratio(sigma);
    }
    for sigma in (0..peak).rev() {
        terms[sigma] = terms[sigma + 1] / ratio(sigma);
    }
    terms
        .into_iter()
        .enumerate()
        .map(|(sigma, t)| if sigma % 2 == 0 { t } else { -t })
        .collect::<CompensatedSum<T>>()
        .value()
}

/// `n! j! / (σ! (n−σ)! (j−σ)!)`.
#[cfg(test)]
fn g_coefficient<T: Real>(n: usize, j: usize, sigma: usize) -> T {
    if n.max(j) <= EXACT_FACTORIAL_MAX {
        // C(n,σ)·j!/(j−σ)!, which stays below 2^64 in this range
        let num = factorial_u128(n) / (factorial_u128(sigma) * factorial_u128(n - sigma))
            * (factorial_u128(j) / factorial_u128(j - sigma));
        T::from_u128(num).unwrap()
    } else {
        (log_factorial::<T>(n) + log_factorial::<T>(j)
            - log_factorial::<T>(sigma)
            - log_factorial::<T>(n - sigma)
            - log_factorial::<T>(j - sigma))
        .exp()
    }
}

/// `G(n, j, z) = z̄ⁿ zʲ ₂F₀(−n, −j; ; −|z|⁻²)` in the polynomial form
/// `Σ_σ (−1)^σ n! j! / [σ! (n−σ)! (j−σ)!] z̄^{n−σ} z^{j−σ}`, regular at `z = 0`.
pub fn g_kernel<T: Real>(n: usize, j: usize, z: Complex<T>) -> Complex<T> {
    let (lo, hi) = (n.min(j), n.max(j));
    let log_scale = log_factorial::<T>(lo) + log_factorial::<T>(hi);
    // at the origin only σ = n = j remains, with coefficient n!
    let radial = signed_radial_sum(lo, hi, z.norm(), log_scale, factorial::<T>);
    monomial_phase(n, j, z) * radial
}

/// `G(n, j, z) / (n! j!)`: the entry of the quadratic-form kernel that
/// multiplies the raw Bargmann derivatives. Formed directly from inverse
/// factorials so it never overflows.
pub fn g_kernel_normalized<T: Real>(n: usize, j: usize, z: Complex<T>) -> Complex<T> {
    let (lo, hi) = (n.min(j), n.max(j));
    let radial = signed_radial_sum(lo, hi, z.norm(), T::zero(), |n| factorial::<T>(n).recip());
    monomial_phase(n, j, z) * radial
}

/// Normalized oscillator eigenfunction `ψₙ(y) = (2ⁿ n! √π)^{−1/2} Hₙ(y) e^{−y²/2}`.
pub fn hermite_psi<T: Real>(n: usize, y: T) -> T {
    let two = T::lit(2.0);
    let psi0 = T::PI().powf(T::lit(-0.25)) * (-y * y / two).exp();
    if n == 0 {
        return psi0;
    }
    let mut prev = psi0;
    let mut curr = two.sqrt() * y * psi0;
    for k in 1..n {
        let kf = T::from_count(k);
        let k1 = kf + T::one();
        let next = (two / k1).sqrt() * y * curr - (kf / k1).sqrt() * prev;
        prev = curr;
        curr = next;
    }
    curr
}
