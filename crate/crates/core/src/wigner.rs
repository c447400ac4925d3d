//! Non-integral evaluation of the Wigner function as the quadratic form
//!
//! `W(z, z*) = e^{−2|z|²}/(πħ) · V† F V`
//!
//! with `Vⱼ = dʲf/dzʲ` and `F_{n,j} = z̄ⁿ zʲ ₂F₀(−n, −j; ; −|z|⁻²) / (n! j!)`,
//! plus the scaled pair `Ṽⱼ = zʲ f^{(j)} / j!`, `F̃_{n,j} = ₂F₀(−n, −j; ; −|z|⁻²)`,
//! and the closed forms used as references.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::BasisParams;
use crate::scalar::{CompensatedComplexSum, CompensatedSum, Real};
use crate::special::{factorial, g_kernel_normalized, hyp2f0_terms, laguerre};
use crate::states::{derivative_tower, StateSpec};

/// `|z|` above which [`Variant::Auto`] switches to the scaled form.
pub const AUTO_SCALED_THRESHOLD: f64 = 2.0;

/// Relative bound on the imaginary part of `e^{−2|z|²} V†FV` (floored at 1).
/// Types coarser than `f64` use `1000 ε` instead.
pub const IMAGINARY_RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Raw derivatives against the Hermitian kernel; regular everywhere.
    Standard,
    /// Scaled derivatives against the real-symmetric ₂F₀ table; needs `z ≠ 0`.
    Scaled,
    /// Standard for `|z| ≤ 2`, scaled beyond.
    Auto,
}

impl Variant {
    pub fn resolve<T: Real>(self, z: Complex<T>) -> Variant {
        match self {
            Variant::Auto if z.norm() > T::lit(AUTO_SCALED_THRESHOLD) => Variant::Scaled,
            Variant::Auto => Variant::Standard,
            v => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationMode {
    /// Only polynomial Bargmann functions; the order is their degree.
    ExactDegree,
    /// Polynomial states use their degree, others grow the order until the
    /// estimated tail falls below `tail_tolerance`.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub mode: TruncationMode,
    pub max_order: usize,
    /// Absolute bound on the omitted tail of `πħ W`.
    pub tail_tolerance: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            mode: TruncationMode::Adaptive,
            max_order: 64,
            tail_tolerance: 1e-12,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_order < 1 {
            return Err(Error::InvalidParameter(
                "max_order must be at least 1".into(),
            ));
        }
        if !(self.tail_tolerance > 0.0) {
            return Err(Error::InvalidParameter(
                "tail_tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Kernel of the quadratic form, truncated to orders `0..=order`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix<T> {
    z: Complex<T>,
    order: usize,
    variant: Variant,
    entries: Vec<Complex<T>>,
}

impl<T: Real> KernelMatrix<T> {
    pub fn z(&self) -> Complex<T> {
        self.z
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.order + 1
    }

    /// Always [`Variant::Standard`] or [`Variant::Scaled`].
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn entry(&self, n: usize, j: usize) -> Complex<T> {
        self.entries[n * self.dim() + j]
    }

    /// `v† K v`, summed along anti-diagonals `n + j = const` with
    /// compensation. `v` must have `dim()` entries.
    pub fn quadratic_form(&self, v: &[Complex<T>]) -> Complex<T> {
        assert_eq!(
            v.len(),
            self.dim(),
            "vector length must match kernel dimension"
        );
        let k = self.order;
        let mut acc = CompensatedComplexSum::new();
        for d in 0..=2 * k {
            for n in d.saturating_sub(k)..=d.min(k) {
                let j = d - n;
                acc.add(v[n].conj() * self.entry(n, j) * v[j]);
            }
        }
        acc.value()
    }
}

/// Builds the truncated kernel. `Variant::Auto` is resolved from `|z|`.
pub fn build_f<T: Real>(z: Complex<T>, order: usize, variant: Variant) -> Result<KernelMatrix<T>> {
    let variant = variant.resolve(z);
    let dim = order + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let mut entries = vec![zero; dim * dim];
    // fill the upper triangle and mirror, so the symmetry is exact
    match variant {
        Variant::Standard => {
            for n in 0..dim {
                for j in n..dim {
                    let e = g_kernel_normalized(n, j, z);
                    entries[n * dim + j] = e;
                    entries[j * dim + n] = e.conj();
                }
            }
        }
        Variant::Scaled => {
            if z.norm_sqr() == T::zero() {
                return Err(Error::ScaledAtOrigin);
            }
            let x = -z.norm_sqr().recip();
            for n in 0..dim {
                for j in n..dim {
                    let v = hyp2f0_terms(n, j, x).collect::<CompensatedSum<T>>().value();
                    entries[n * dim + j] = Complex::new(v, T::zero());
                    entries[j * dim + n] = Complex::new(v, T::zero());
                }
            }
        }
        Variant::Auto => unreachable!("resolved above"),
    }
    Ok(KernelMatrix {
        z,
        order,
        variant,
        entries,
    })
}

/// Scaled vector `Ṽⱼ = zʲ f^{(j)} / j!` from raw derivatives.
pub fn scale_derivatives<T: Real>(z: Complex<T>, raw: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut zpow = Complex::new(T::one(), T::zero());
    raw.iter()
        .enumerate()
        .map(|(j, d)| {
            let out = *d * zpow / factorial::<T>(j);
            zpow = zpow * z;
            out
        })
        .collect()
}

/// Truncation order for the quadratic form at `z`.
pub fn choose_truncation<T: Real>(
    state: &StateSpec<T>,
    z: Complex<T>,
    policy: &TruncationPolicy,
) -> Result<usize> {
    policy.validate()?;
    if let Some(degree) = state.exact_degree() {
        return Ok(degree);
    }
    if policy.mode == TruncationMode::ExactDegree {
        return Err(Error::InvalidParameter(format!(
            "exact-degree truncation requested for a {} state without finite degree",
            state.kind()
        )));
    }
    let max = policy.max_order;
    let tol = T::lit(policy.tail_tolerance);
    let v = derivative_tower(state, z, max).values;
    let damping = (-T::lit(2.0) * z.norm_sqr()).exp();
    let mut shells: Vec<T> = Vec::with_capacity(max + 1);
    let mut hits = 0;
    let mut last_tail = T::infinity();
    for k in 0..=max {
        // magnitude of the new row and column added at order k
        let mut shell = CompensatedSum::new();
        let vk = v[k].norm();
        for (n, vn) in v.iter().enumerate().take(k) {
            shell.add(T::lit(2.0) * vn.norm() * g_kernel_normalized(n, k, z).norm() * vk);
        }
        shell.add(vk * vk * g_kernel_normalized(k, k, z).norm());
        shells.push(shell.value() * damping);

        // superpositions can alternate between odd and even shells, so the
        // decay is judged on the envelope of consecutive pairs
        if k >= 3 {
            let envelope = shells[k].max(shells[k - 1]);
            let before = shells[k - 2].max(shells[k - 3]);
            let tail = if envelope == T::zero() {
                T::zero()
            } else if envelope < before {
                let ratio = envelope / before;
                T::lit(2.0) * envelope * ratio / (T::one() - ratio)
            } else {
                T::infinity()
            };
            last_tail = tail;
            if tail < tol && envelope < tol {
                hits += 1;
                if hits == 2 {
                    return Ok(k);
                }
            } else {
                hits = 0;
            }
        }
    }
    Err(Error::TruncationNotConverged {
        max_order: max,
        tail: last_tail.as_f64(),
        tolerance: policy.tail_tolerance,
    })
}

/// Full result of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEvaluation<T> {
    pub value: T,
    pub order: usize,
    pub variant: Variant,
    pub imaginary_residual: T,
}

/// Evaluates `W` at label `z` through the quadratic form.
pub fn evaluate_series<T: Real>(
    state: &StateSpec<T>,
    z: Complex<T>,
    policy: &TruncationPolicy,
    variant: Variant,
    basis: &BasisParams<T>,
) -> Result<SeriesEvaluation<T>> {
    state.check_basis(basis)?;
    let variant = variant.resolve(z);
    if variant == Variant::Scaled && z.norm_sqr() == T::zero() {
        return Err(Error::ScaledAtOrigin);
    }
    let order = choose_truncation(state, z, policy)?;
    let raw = derivative_tower(state, z, order).values;
    let vector = match variant {
        Variant::Scaled => scale_derivatives(z, &raw),
        _ => raw,
    };
    let kernel = build_f(z, order, variant)?;
    let form = kernel.quadratic_form(&vector) * (-T::lit(2.0) * z.norm_sqr()).exp();
    let limit = T::lit(IMAGINARY_RESIDUAL_TOLERANCE).max(T::epsilon() * T::lit(1e3))
        * form.re.abs().max(T::one());
    if !(form.im.abs() <= limit) {
        return Err(Error::ImaginaryResidual {
            re: form.re.as_f64(),
            im: form.im.as_f64(),
        });
    }
    let scale = T::PI() * basis.hbar();
    Ok(SeriesEvaluation {
        value: form.re / scale,
        order,
        variant,
        imaginary_residual: form.im / scale,
    })
}

/// `W` at label `z` through the quadratic form.
pub fn wigner_series<T: Real>(
    state: &StateSpec<T>,
    z: Complex<T>,
    policy: &TruncationPolicy,
    variant: Variant,
    basis: &BasisParams<T>,
) -> Result<T> {
    evaluate_series(state, z, policy, variant, basis).map(|e| e.value)
}

/// `(−1)ᴺ e^{−2|z|²} L_N(4|z|²) / (πħ)`.
pub fn wigner_closed_fock<T: Real>(n: usize, z: Complex<T>, basis: &BasisParams<T>) -> T {
    let r2 = z.norm_sqr();
    let sign = if n.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    sign * (-T::lit(2.0) * r2).exp() * laguerre(n, T::lit(4.0) * r2) / (T::PI() * basis.hbar())
}

/// `exp{−(q−Q)²/B² − B²(p−P)²/ħ²} / (πħ)`.
pub fn wigner_closed_coherent_gaussian<T: Real>(
    center_q: T,
    center_p: T,
    width: T,
    q: T,
    p: T,
    hbar: T,
) -> T {
    let dq = (q - center_q) / width;
    let dp = width * (p - center_p) / hbar;
    (-(dq * dq) - dp * dp).exp() / (T::PI() * hbar)
}

/// Coherent state `|U⟩` of width `B` seen through a basis of width `b`:
///
/// `W = (πħ)⁻¹ exp{ (B⁴−b⁴)/(2B²b²)(z² + z̄²) − (B⁴+b⁴)/(B²b²) z̄z
///      + (b²−B²)/(Bb)(zU + z̄Ū) + (B²+b²)/(Bb)(zŪ + z̄U) − 2ŪU }`.
pub fn wigner_closed_coherent_crossb<T: Real>(
    label: Complex<T>,
    width: T,
    z: Complex<T>,
    basis: &BasisParams<T>,
) -> T {
    crossb_exponent(label, width, z, basis.b()).exp() / (T::PI() * basis.hbar())
}

pub(crate) fn crossb_exponent<T: Real>(label: Complex<T>, big: T, z: Complex<T>, b: T) -> T {
    let two = T::lit(2.0);
    let (b2, big2) = (b * b, big * big);
    let (b4, big4) = (b2 * b2, big2 * big2);
    let zz_sum = two * (z * z).re;
    let zu_sum = two * (z * label).re;
    let zubar_sum = two * (z * label.conj()).re;
    (big4 - b4) / (two * big2 * b2) * zz_sum - (big4 + b4) / (big2 * b2) * z.norm_sqr()
        + (b2 - big2) / (big * b) * zu_sum
        + (big2 + b2) / (big * b) * zubar_sum
        - two * label.norm_sqr()
}

/// Closed form for catalog states that have one.
pub fn wigner_closed<T: Real>(
    state: &StateSpec<T>,
    z: Complex<T>,
    basis: &BasisParams<T>,
) -> Result<T> {
    match state {
        StateSpec::Fock(n) => Ok(wigner_closed_fock(*n, z, basis)),
        StateSpec::Coherent(c) => Ok(wigner_closed_coherent_crossb(
            c.label,
            c.effective_width(basis),
            z,
            basis,
        )),
        StateSpec::Superposition(_) => Err(Error::NoClosedForm("superposition".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::z_from_qp;
    use crate::special::laguerre;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn trivial_kernel() {
        for z in [c(0.0, 0.0), c(1.3, -0.2)] {
            let k = build_f(z, 0, Variant::Standard).unwrap();
            assert_eq!(k.dim(), 1);
            assert_eq!(k.entry(0, 0), c(1.0, 0.0));
        }
        let k = build_f(c(0.5, 0.5), 0, Variant::Scaled).unwrap();
        assert_eq!(k.entry(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn standard_entry_one_one() {
        let z = c(0.8, -0.6);
        let k = build_f(z, 2, Variant::Standard).unwrap();
        assert_relative_eq!(k.entry(1, 1).re, z.norm_sqr() - 1.0, max_relative = 1e-14);
        // (−1)¹ L₁(|z|²) / 1!
        assert_relative_eq!(
            k.entry(1, 1).re,
            -laguerre(1, z.norm_sqr()),
            max_relative = 1e-14
        );
    }

    #[test]
    fn standard_kernel_at_origin_is_diagonal() {
        let k = build_f(c(0.0, 0.0), 5, Variant::Standard).unwrap();
        for n in 0..=5 {
            for j in 0..=5 {
                let e = k.entry(n, j);
                if n == j {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    assert_relative_eq!(e.re, sign / factorial::<f64>(n), max_relative = 1e-15);
                } else {
                    assert_eq!(e, c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn scaled_kernel_rejects_origin() {
        assert!(matches!(
            build_f(c(0.0, 0.0), 3, Variant::Scaled),
            Err(Error::ScaledAtOrigin)
        ));
        let state = StateSpec::fock(2);
        let err = wigner_series(
            &state,
            c(0.0, 0.0),
            &TruncationPolicy::default(),
            Variant::Scaled,
            &BasisParams::default(),
        );
        assert!(matches!(err, Err(Error::ScaledAtOrigin)));
    }

    #[test]
    fn hermitian_and_symmetric() {
        let z = c(1.7, 0.9);
        let standard = build_f(z, 12, Variant::Standard).unwrap();
        let scaled = build_f(z, 12, Variant::Scaled).unwrap();
        for n in 0..=12 {
            for j in 0..=12 {
                let a = standard.entry(n, j);
                let b = standard.entry(j, n).conj();
                assert!((a - b).norm() <= 1e-14 * a.norm().max(1e-300));
                assert_eq!(scaled.entry(n, j), scaled.entry(j, n));
                assert_eq!(scaled.entry(n, j).im, 0.0);
            }
        }
    }

    #[test]
    fn standard_and_scaled_entries_related_by_monomials() {
        let z = c(-0.9, 1.4);
        let standard = build_f(z, 6, Variant::Standard).unwrap();
        let scaled = build_f(z, 6, Variant::Scaled).unwrap();
        for n in 0..=6 {
            for j in 0..=6 {
                let mono = z.conj().powi(n as i32) * z.powi(j as i32)
                    / (factorial::<f64>(n) * factorial::<f64>(j));
                let want = scaled.entry(n, j) * mono;
                assert!((standard.entry(n, j) - want).norm() <= 1e-12 * want.norm().max(1e-12));
            }
        }
    }

    #[test]
    fn auto_variant_threshold() {
        assert_eq!(Variant::Auto.resolve(c(1.9, 0.0)), Variant::Standard);
        assert_eq!(Variant::Auto.resolve(c(1.5, 1.5)), Variant::Scaled);
        assert_eq!(Variant::Standard.resolve(c(5.0, 0.0)), Variant::Standard);
        assert_eq!(
            build_f(c(3.0, 0.0), 2, Variant::Auto).unwrap().variant(),
            Variant::Scaled
        );
    }

    #[test]
    fn series_examples() {
        let basis = BasisParams::default();
        let policy = TruncationPolicy::default();
        let origin = c(0.0, 0.0);
        let w0 = wigner_series(
            &StateSpec::fock(0),
            origin,
            &policy,
            Variant::Standard,
            &basis,
        )
        .unwrap();
        assert_relative_eq!(w0, 1.0 / PI, max_relative = 1e-15);
        let w1 = wigner_series(
            &StateSpec::fock(1),
            origin,
            &policy,
            Variant::Standard,
            &basis,
        )
        .unwrap();
        assert_relative_eq!(w1, -1.0 / PI, max_relative = 1e-15);

        let hbar_basis = BasisParams::new(1.0, 0.5).unwrap();
        let w = wigner_series(
            &StateSpec::fock(0),
            origin,
            &policy,
            Variant::Auto,
            &hbar_basis,
        )
        .unwrap();
        assert_relative_eq!(w, 1.0 / (PI * 0.5), max_relative = 1e-15);
    }

    #[test]
    fn fock_one_hand_expansion() {
        // e^{−2|z|²}(4|z|² − 1)/π
        let basis = BasisParams::default();
        for z in [c(0.3, 0.1), c(-1.0, 0.7), c(0.0, 1.6)] {
            let w = wigner_series(
                &StateSpec::fock(1),
                z,
                &TruncationPolicy::default(),
                Variant::Standard,
                &basis,
            )
            .unwrap();
            let r2 = z.norm_sqr();
            assert_relative_eq!(
                w,
                (-2.0 * r2).exp() * (4.0 * r2 - 1.0) / PI,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn closed_fock_examples() {
        let basis = BasisParams::default();
        assert_relative_eq!(wigner_closed_fock(0, c(0.0, 0.0), &basis), 1.0 / PI);
        assert!(wigner_closed_fock(1, c(0.5, 0.0), &basis).abs() < 1e-17);
        assert_relative_eq!(wigner_closed_fock(2, c(0.0, 0.0), &basis), 1.0 / PI);
    }

    #[test]
    fn gaussian_examples() {
        let (q0, p0, big) = (0.7, -0.4, 1.5);
        assert_relative_eq!(
            wigner_closed_coherent_gaussian(q0, p0, big, q0, p0, 1.0),
            1.0 / PI
        );
        assert_relative_eq!(
            wigner_closed_coherent_gaussian(q0, p0, big, q0 + big, p0, 1.0),
            (-1.0f64).exp() / PI,
            max_relative = 1e-15
        );
    }

    #[test]
    fn crossb_equal_widths_collapses() {
        let basis = BasisParams::with_width(1.3).unwrap();
        let u = c(0.4, -0.9);
        for z in [c(0.0, 0.0), c(1.1, 0.3), c(-0.5, -2.0)] {
            let w = wigner_closed_coherent_crossb(u, 1.3, z, &basis);
            assert_relative_eq!(
                w,
                (-2.0 * (z - u).norm_sqr()).exp() / PI,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn crossb_matches_gaussian_on_grid() {
        let basis = BasisParams::with_width(1.0).unwrap();
        let (q0, p0, big) = (0.7, -0.4, 1.5);
        let label = c(q0 / big, big * p0) / 2f64.sqrt();
        for i in 0..11 {
            for k in 0..11 {
                let q = -2.0 + 0.4 * i as f64;
                let p = -2.0 + 0.4 * k as f64;
                let z = z_from_qp(q, p, &basis);
                let a = wigner_closed_coherent_crossb(label, big, z, &basis);
                let b = wigner_closed_coherent_gaussian(q0, p0, big, q, p, 1.0);
                assert_relative_eq!(a, b, max_relative = 1e-10);
            }
        }
    }

    /// The exponent with the `(zU + z̄Ū)` coefficient written as `(B²−b²)/(Bb)`
    /// does not reproduce the Gaussian once `b ≠ B`.
    #[test]
    fn crossb_with_opposite_cross_term_sign_is_wrong() {
        let basis = BasisParams::with_width(1.0).unwrap();
        let (q0, p0, big) = (0.7, -0.4, 1.5);
        let label = c(q0 / big, big * p0) / 2f64.sqrt();
        let (q, p) = (1.0, 1.0);
        let z = z_from_qp(q, p, &basis);
        let b = 1.0;
        let flipped = crossb_exponent(label, big, z, b)
            - 2.0 * (b * b - big * big) / (big * b) * 2.0 * (z * label).re;
        let gaussian = wigner_closed_coherent_gaussian(q0, p0, big, q, p, 1.0);
        assert!((flipped.exp() / PI - gaussian).abs() > 1e-3);
        assert_relative_eq!(
            wigner_closed_coherent_crossb(label, big, z, &basis),
            gaussian,
            max_relative = 1e-12
        );
    }

    #[test]
    fn truncation_for_polynomials() {
        let policy = TruncationPolicy::default();
        let z = c(0.4, 0.2);
        assert_eq!(
            choose_truncation(&StateSpec::fock(5), z, &policy).unwrap(),
            5
        );
        let sup = StateSpec::Superposition(
            crate::states::Superposition::normalized(
                (0..=3)
                    .map(|n| (c(1.0, 0.0), crate::states::Member::Fock(n)))
                    .collect(),
            )
            .unwrap(),
        );
        assert_eq!(choose_truncation(&sup, z, &policy).unwrap(), 3);
        let exact = TruncationPolicy {
            mode: TruncationMode::ExactDegree,
            ..policy
        };
        assert!(choose_truncation(&StateSpec::coherent(c(1.0, 0.0)), z, &exact).is_err());
        let bad = TruncationPolicy {
            max_order: 0,
            ..policy
        };
        assert!(choose_truncation(&StateSpec::fock(1), z, &bad).is_err());
    }

    #[test]
    fn adaptive_truncation_regression() {
        let policy = TruncationPolicy::default();
        let k = choose_truncation(&StateSpec::coherent(c(1.0, 0.0)), c(1.0, 0.0), &policy).unwrap();
        assert_eq!(k, ADAPTIVE_REGRESSION_ORDER);
        assert!(k <= 40);
    }

    const ADAPTIVE_REGRESSION_ORDER: usize = 22;

    #[test]
    fn adaptive_truncation_failure_reports_tail() {
        let policy = TruncationPolicy {
            max_order: 4,
            ..TruncationPolicy::default()
        };
        match choose_truncation(&StateSpec::coherent(c(2.0, 0.0)), c(1.0, 0.0), &policy) {
            Err(Error::TruncationNotConverged {
                max_order, tail, ..
            }) => {
                assert_eq!(max_order, 4);
                assert!(tail > 1e-12);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn coherent_series_matches_closed_form() {
        let basis = BasisParams::default();
        let u = c(1.0, -0.5);
        let state = StateSpec::coherent(u);
        for z in [c(0.0, 0.0), c(1.0, 0.0), c(-1.5, 2.0), c(2.5, -0.5)] {
            let w = wigner_series(
                &state,
                z,
                &TruncationPolicy::default(),
                Variant::Auto,
                &basis,
            )
            .unwrap();
            let want = (-2.0 * (z - u).norm_sqr()).exp() / PI;
            assert!((w - want).abs() < 1e-12, "z={z} w={w} want={want}");
        }
    }

    #[test]
    fn cross_width_series_rejected() {
        let basis = BasisParams::default();
        let state = StateSpec::coherent_with_width(c(0.1, 0.2), 1.5).unwrap();
        assert!(matches!(
            wigner_series(
                &state,
                c(0.0, 0.0),
                &TruncationPolicy::default(),
                Variant::Auto,
                &basis
            ),
            Err(Error::CrossWidth { .. })
        ));
        assert!(wigner_closed(&state, c(0.0, 0.0), &basis).is_ok());
        let sup = StateSpec::cat(c(1.0, 0.0), 0.0).unwrap();
        assert!(matches!(
            wigner_closed(&sup, c(0.0, 0.0), &basis),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn f32_series_tracks_closed_form() {
        let basis = BasisParams::<f32>::default();
        for n in 0..=4 {
            let z = Complex::new(0.3f32, -0.6);
            let w = wigner_series(
                &StateSpec::fock(n),
                z,
                &TruncationPolicy::default(),
                Variant::Standard,
                &basis,
            )
            .unwrap();
            let want = wigner_closed_fock(n, z, &basis);
            assert!((w - want).abs() < 1e-5, "n={n}");
        }
    }
}
