//! Truncated Fock-space state algebra: coherent states, even/odd cat states,
//! number-phase operators, parity projectors, overlaps, and truncation
//! accounting.
//!
//! All states live in a finite basis `n = 0 .. dim-1`. Constructors verify
//! that the probability mass discarded by the truncation stays below a
//! tolerance, so overlaps computed downstream are trustworthy.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Norm tolerance for states flagged "physical".
pub const DEFAULT_NORM_TOL: f64 = 1e-12;
/// Maximum truncation tail mass accepted by state constructors.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;
/// Comfortable dimension for |alpha| <= 2.
pub const DEFAULT_DIM: usize = 64;

/// Number of Fock levels retained by a truncated cavity representation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockDim(usize);

impl FockDim {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "Fock dimension must be at least 1".into(),
            ));
        }
        Ok(FockDim(dim))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// A single cavity mode: complex amplitudes over the truncated Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CavityState {
    amplitudes: Vec<Complex64>,
}

impl CavityState {
    /// Wraps raw amplitudes; the dimension is the vector length.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter(
                "cavity state needs at least one amplitude".into(),
            ));
        }
        Ok(CavityState { amplitudes })
    }

    /// |0>, exactly.
    pub fn vacuum(dim: FockDim) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; dim.get()];
        amplitudes[0] = Complex64::ONE;
        CavityState { amplitudes }
    }

    pub fn dim(&self) -> FockDim {
        FockDim(self.amplitudes.len())
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_physical(&self) -> bool {
        self.is_physical_with_tol(DEFAULT_NORM_TOL)
    }

    pub fn is_physical_with_tol(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Returns the same ray with unit norm.
    pub fn renormalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < 1e-300 {
            return Err(Error::NormError { norm_sqr: n2 });
        }
        let scale = 1.0 / n2.sqrt();
        Ok(CavityState {
            amplitudes: self.amplitudes.iter().map(|a| a * scale).collect(),
        })
    }
}

/// Parity of a cat-state superposition.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CatParity {
    Even,
    Odd,
}

/// Specification for a coherent-superposition (cat) state |alpha> +/- |-alpha>.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CatSpec {
    pub alpha: Complex64,
    pub parity: CatParity,
}

impl CatSpec {
    pub fn even(alpha: Complex64) -> Self {
        CatSpec {
            alpha,
            parity: CatParity::Even,
        }
    }

    pub fn odd(alpha: Complex64) -> Self {
        CatSpec {
            alpha,
            parity: CatParity::Odd,
        }
    }

    /// Normalization constant 1/sqrt(2(1 +/- e^{-2|alpha|^2})) that turns the
    /// bare superposition |alpha> +/- |-alpha> into a unit vector.
    pub fn normalization_constant(&self) -> f64 {
        let t = (-2.0 * self.alpha.norm_sqr()).exp();
        match self.parity {
            CatParity::Even => 1.0 / (2.0 * (1.0 + t)).sqrt(),
            CatParity::Odd => 1.0 / (2.0 * (1.0 - t)).sqrt(),
        }
    }
}

/// Sign selector for the photon-number parity projectors.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ParitySign {
    Plus,
    Minus,
}

/// Coupling scheme behind a dispersive phase, fixing the phi formula.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CouplingScheme {
    /// phi = g^2 tau / delta
    TwoLevel,
    /// phi = 2 g^2 tau / delta
    Lambda,
}

/// Optional level/field frequencies; they enter only through the detuning.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LevelFrequencies {
    pub upper: f64,
    pub lower: f64,
    /// Second lower level of a lambda configuration, when distinct.
    pub lower_alt: Option<f64>,
    pub field: f64,
}

/// Physical parameters a dispersive phase can be derived from.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PhaseDerivation {
    /// Coupling constant g.
    pub coupling: f64,
    /// Atom-field interaction time tau.
    pub interaction_time: f64,
    /// Detuning delta between the atomic transition and the cavity mode.
    pub detuning: f64,
    pub scheme: CouplingScheme,
    pub frequencies: Option<LevelFrequencies>,
}

/// Dispersive interaction phase, either given directly in radians or derived
/// from coupling parameters.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct InteractionPhase {
    phi: f64,
    derivation: Option<PhaseDerivation>,
}

impl InteractionPhase {
    pub fn from_radians(phi: f64) -> Self {
        InteractionPhase {
            phi,
            derivation: None,
        }
    }

    pub fn from_derivation(derivation: PhaseDerivation) -> Result<Self> {
        if derivation.detuning == 0.0 {
            return Err(Error::InvalidParameter(
                "dispersive phase needs a nonzero detuning".into(),
            ));
        }
        if let Some(freq) = derivation.frequencies {
            let scale = freq.upper.abs().max(freq.field.abs()).max(1.0);
            let check = |lower: f64| -> bool {
                (freq.upper - lower - freq.field - derivation.detuning).abs() <= 1e-9 * scale
            };
            if !check(freq.lower) || !freq.lower_alt.map_or(true, check) {
                return Err(Error::InvalidParameter(
                    "level frequencies are inconsistent with the stated detuning".into(),
                ));
            }
        }
        let g2t = derivation.coupling * derivation.coupling * derivation.interaction_time;
        let phi = match derivation.scheme {
            CouplingScheme::TwoLevel => g2t / derivation.detuning,
            CouplingScheme::Lambda => 2.0 * g2t / derivation.detuning,
        };
        Ok(InteractionPhase {
            phi,
            derivation: Some(derivation),
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn derivation(&self) -> Option<&PhaseDerivation> {
        self.derivation.as_ref()
    }
}

/// Probability mass of the untruncated coherent state |alpha> beyond the
/// retained basis: sum_{n >= dim} e^{-|alpha|^2} |alpha|^{2n} / n!.
///
/// The walk to the first discarded term runs in log space so the result is
/// meaningful for any |alpha|; the tail itself is accumulated with Kahan
/// compensation.
pub fn tail_mass(alpha: Complex64, dim: FockDim) -> f64 {
    let lambda = alpha.norm_sqr();
    if lambda == 0.0 {
        return 0.0;
    }
    let d = dim.get();
    let ln_lambda = lambda.ln();
    let mut n = d;
    let mut ln_term = -lambda + (1..=d).map(|k| ln_lambda - (k as f64).ln()).sum::<f64>();
    // Skip terms too small to represent; they are below ~1e-304 each and the
    // term sequence only decays once n exceeds lambda.
    while ln_term < -700.0 {
        if n as f64 > lambda {
            return 0.0;
        }
        n += 1;
        ln_term += ln_lambda - (n as f64).ln();
    }
    let mut term = ln_term.exp();
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    loop {
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        n += 1;
        term *= lambda / n as f64;
        if n as f64 > lambda && term < sum * 1e-18 + 1e-320 {
            break;
        }
    }
    sum
}

fn truncation_guard(alpha: Complex64, dim: FockDim, tol: f64) -> Result<()> {
    let tail = tail_mass(alpha, dim);
    if tail > tol {
        return Err(Error::Truncation {
            alpha_abs: alpha.norm(),
            dim: dim.get(),
            tail,
            tol,
        });
    }
    Ok(())
}

/// Magnitudes |alpha|^n e^{-|alpha|^2/2} / sqrt(n!) by iterative log
/// accumulation, paired with the phase n*arg(alpha).
fn coherent_amplitudes(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let lambda = alpha.norm_sqr();
    let theta = alpha.arg();
    let ln_lambda = lambda.ln();
    let mut amps = Vec::with_capacity(dim);
    let mut ln_weight = -lambda; // ln of the Poisson weight e^{-lambda} lambda^n / n!
    for n in 0..dim {
        if n > 0 {
            ln_weight += ln_lambda - (n as f64).ln();
        }
        amps.push(Complex64::from_polar(
            (0.5 * ln_weight).exp(),
            theta * n as f64,
        ));
    }
    amps
}

/// Coherent state |alpha> in the truncated basis, renormalized to unit norm.
///
/// Fails with [`Error::Truncation`] when the discarded tail mass exceeds the
/// default tolerance, signalling that `dim` is too small for this amplitude.
pub fn coherent_state(alpha: Complex64, dim: FockDim) -> Result<CavityState> {
    coherent_state_with_tol(alpha, dim, DEFAULT_TRUNCATION_TOL)
}

pub fn coherent_state_with_tol(
    alpha: Complex64,
    dim: FockDim,
    trunc_tol: f64,
) -> Result<CavityState> {
    truncation_guard(alpha, dim, trunc_tol)?;
    if alpha == Complex64::ZERO {
        return Ok(CavityState::vacuum(dim));
    }
    CavityState::new(coherent_amplitudes(alpha, dim.get()))?.renormalized()
}

/// Even or odd cat state, normalized. Even cats have support only on even n,
/// odd cats only on odd n; the excluded parity is exactly zero.
pub fn cat_state(spec: &CatSpec, dim: FockDim) -> Result<CavityState> {
    cat_state_with_tol(spec, dim, DEFAULT_TRUNCATION_TOL)
}

pub fn cat_state_with_tol(spec: &CatSpec, dim: FockDim, trunc_tol: f64) -> Result<CavityState> {
    if spec.alpha == Complex64::ZERO {
        return match spec.parity {
            CatParity::Even => Ok(CavityState::vacuum(dim)),
            CatParity::Odd => Err(Error::DegenerateCat),
        };
    }
    truncation_guard(spec.alpha, dim, trunc_tol)?;
    let keep = match spec.parity {
        CatParity::Even => 0,
        CatParity::Odd => 1,
    };
    let mut amps = coherent_amplitudes(spec.alpha, dim.get());
    for (n, a) in amps.iter_mut().enumerate() {
        if n % 2 != keep {
            *a = Complex64::ZERO;
        }
    }
    CavityState::new(amps)?.renormalized()
}

/// Applies the diagonal phase e^{i theta n} to every Fock amplitude.
pub fn apply_number_phase(state: &CavityState, theta: f64) -> CavityState {
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| a * Complex64::from_polar(1.0, theta * n as f64))
        .collect();
    CavityState { amplitudes }
}

/// Applies the parity projector (1/2)(e^{i pi n} +/- 1).
///
/// The plus projector keeps even-n amplitudes unchanged and zeroes odd ones;
/// the minus projector zeroes even n and multiplies odd n by -1. The result
/// is returned unnormalized so callers can read off branch weights.
pub fn parity_projector_apply(state: &CavityState, sign: ParitySign) -> CavityState {
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| match (sign, n % 2) {
            (ParitySign::Plus, 0) => *a,
            (ParitySign::Plus, _) => Complex64::ZERO,
            (ParitySign::Minus, 0) => Complex64::ZERO,
            (ParitySign::Minus, _) => -a,
        })
        .collect();
    CavityState { amplitudes }
}

/// <a|b> over the truncated basis.
pub fn inner_product(a: &CavityState, b: &CavityState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim().get(),
            right: b.dim().get(),
        });
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// |<a|b>|^2 between the normalized rays of `a` and `b`.
pub fn fidelity(a: &CavityState, b: &CavityState) -> Result<f64> {
    let na = a.norm_sqr();
    let nb = b.norm_sqr();
    if na < 1e-300 || nb < 1e-300 {
        return Err(Error::NormError {
            norm_sqr: na.min(nb),
        });
    }
    Ok(inner_product(a, b)?.norm_sqr() / (na * nb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Closed-form overlap <alpha|beta> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b),
    /// used as an independent oracle for the truncated inner product.
    fn coherent_overlap(alpha: Complex64, beta: Complex64) -> Complex64 {
        (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr()
            + alpha.conj() * beta)
            .exp()
    }

    #[test]
    fn vacuum_from_zero_alpha() {
        let s = coherent_state(Complex64::ZERO, FockDim::new(8).unwrap()).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::ONE);
        assert!(s.amplitudes()[1..].iter().all(|a| *a == Complex64::ZERO));
    }

    #[test]
    fn coherent_overlap_matches_closed_form() {
        let dim = FockDim::new(32).unwrap();
        let a = coherent_state(c(1.0, 0.0), dim).unwrap();
        let b = coherent_state(c(-1.0, 0.0), dim).unwrap();
        let ip = inner_product(&a, &b).unwrap();
        // e^{-2} = 0.1353352832...
        assert_abs_diff_eq!(ip.re, (-2.0f64).exp(), epsilon = 1e-10);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-12);
        let oracle = coherent_overlap(c(1.0, 0.0), c(-1.0, 0.0));
        assert_abs_diff_eq!((ip - oracle).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn truncation_error_for_small_dim() {
        let err = coherent_state(c(2.0, 0.0), FockDim::new(4).unwrap()).unwrap_err();
        match err {
            Error::Truncation { tail, .. } => {
                // 1 - e^{-4} (1 + 4 + 8 + 32/3), by direct sum
                assert_abs_diff_eq!(tail, 0.5665632129666309, epsilon = 1e-12);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn tail_mass_examples() {
        assert_eq!(tail_mass(Complex64::ZERO, FockDim::new(1).unwrap()), 0.0);
        assert!(tail_mass(c(2.0, 0.0), FockDim::new(40).unwrap()) < 1e-12);
        assert_abs_diff_eq!(
            tail_mass(c(2.0, 0.0), FockDim::new(4).unwrap()),
            0.5665632129666309,
            epsilon = 1e-12
        );
        // huge amplitude, tiny basis: essentially all mass is discarded
        assert_abs_diff_eq!(
            tail_mass(c(40.0, 0.0), FockDim::new(4).unwrap()),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn cat_state_parity_support_is_exact() {
        let dim = FockDim::new(40).unwrap();
        let even = cat_state(&CatSpec::even(c(2.0, 0.0)), dim).unwrap();
        assert_abs_diff_eq!(even.norm_sqr(), 1.0, epsilon = 1e-14);
        let odd_mass: f64 = even
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(n, _)| n % 2 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        assert_eq!(odd_mass, 0.0);
    }

    #[test]
    fn cat_state_matches_normalized_superposition() {
        let dim = FockDim::new(48).unwrap();
        let alpha = c(2.0, 0.0);
        let cat = cat_state(&CatSpec::even(alpha), dim).unwrap();
        let plus = coherent_state(alpha, dim).unwrap();
        let minus = coherent_state(-alpha, dim).unwrap();
        let scale = CatSpec::even(alpha).normalization_constant();
        let target = CavityState::new(
            plus.amplitudes()
                .iter()
                .zip(minus.amplitudes())
                .map(|(p, m)| (p + m) * scale)
                .collect(),
        )
        .unwrap();
        assert!(fidelity(&cat, &target).unwrap() > 1.0 - 1e-12);
        // the analytic constant: e^{-8} appears in 1/sqrt(2(1 + e^{-8}))
        assert_abs_diff_eq!(
            scale,
            1.0 / (2.0 * (1.0 + (-8.0f64).exp())).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn degenerate_odd_cat_rejected() {
        let err = cat_state(&CatSpec::odd(Complex64::ZERO), FockDim::new(8).unwrap()).unwrap_err();
        assert!(matches!(err, Error::DegenerateCat));
        let even = cat_state(&CatSpec::even(Complex64::ZERO), FockDim::new(8).unwrap()).unwrap();
        assert_eq!(even.amplitudes()[0], Complex64::ONE);
    }

    #[test]
    fn number_phase_identities() {
        let dim = FockDim::new(64).unwrap();
        let alpha = c(1.5, 0.4);
        let s = coherent_state(alpha, dim).unwrap();
        let id = apply_number_phase(&s, 0.0);
        assert_eq!(id.amplitudes(), s.amplitudes());

        // e^{i pi n} |alpha> = |-alpha>
        let flipped = apply_number_phase(&s, std::f64::consts::PI);
        let target = coherent_state(-alpha, dim).unwrap();
        assert!(fidelity(&flipped, &target).unwrap() >= 1.0 - 1e-12);

        // e^{i pi/2 n} |i alpha> = |-alpha>
        let rotated = apply_number_phase(
            &coherent_state(alpha * Complex64::I, dim).unwrap(),
            std::f64::consts::FRAC_PI_2,
        );
        assert!(fidelity(&rotated, &target).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn parity_projector_relations_on_cats() {
        let dim = FockDim::new(48).unwrap();
        let alpha = c(1.3, -0.7);
        let plus = cat_state(&CatSpec::even(alpha), dim).unwrap();
        let minus = cat_state(&CatSpec::odd(alpha), dim).unwrap();

        let kept = parity_projector_apply(&plus, ParitySign::Plus);
        assert_eq!(kept.amplitudes(), plus.amplitudes());

        assert_eq!(
            parity_projector_apply(&minus, ParitySign::Plus).norm_sqr(),
            0.0
        );
        assert_eq!(
            parity_projector_apply(&plus, ParitySign::Minus).norm_sqr(),
            0.0
        );

        let negated = parity_projector_apply(&minus, ParitySign::Minus);
        for (a, b) in negated.amplitudes().iter().zip(minus.amplitudes()) {
            assert_eq!(*a, -b);
        }
    }

    #[test]
    fn projector_idempotence_and_completeness() {
        let dim = FockDim::new(32).unwrap();
        let s = coherent_state(c(1.2, 0.3), dim).unwrap();
        let p1 = parity_projector_apply(&s, ParitySign::Plus);
        let p2 = parity_projector_apply(&p1, ParitySign::Plus);
        assert_eq!(p1.amplitudes(), p2.amplitudes());

        let m = parity_projector_apply(&s, ParitySign::Minus);
        // Pi_+ + (-1) * Pi_--as-signed gives the identity decomposition:
        // s = Pi_+ s + (e^{i pi n} - 1)/2 s, and Pi_- s = -(odd part of s)
        for (n, ((p, mm), orig)) in p1
            .amplitudes()
            .iter()
            .zip(m.amplitudes())
            .zip(s.amplitudes())
            .enumerate()
        {
            if n % 2 == 0 {
                assert_eq!(p, orig);
                assert_eq!(*mm, Complex64::ZERO);
            } else {
                assert_eq!(*p, Complex64::ZERO);
                assert_eq!(*mm, -orig);
            }
        }
    }

    #[test]
    fn cat_orthogonality_is_exact() {
        let dim = FockDim::new(48).unwrap();
        let alpha = c(1.7, 0.2);
        let even = cat_state(&CatSpec::even(alpha), dim).unwrap();
        let odd = cat_state(&CatSpec::odd(alpha), dim).unwrap();
        assert_eq!(inner_product(&even, &odd).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn inner_product_rejects_unequal_dims() {
        let a = CavityState::vacuum(FockDim::new(4).unwrap());
        let b = CavityState::vacuum(FockDim::new(8).unwrap());
        assert!(matches!(
            inner_product(&a, &b),
            Err(Error::DimensionMismatch { left: 4, right: 8 })
        ));
    }

    #[test]
    fn phase_derivation_formulas() {
        let base = PhaseDerivation {
            coupling: 2.0,
            interaction_time: 0.5,
            detuning: 4.0,
            scheme: CouplingScheme::TwoLevel,
            frequencies: None,
        };
        assert_abs_diff_eq!(
            InteractionPhase::from_derivation(base).unwrap().phi(),
            0.5,
            epsilon = 1e-15
        );
        let lambda = PhaseDerivation {
            scheme: CouplingScheme::Lambda,
            ..base
        };
        assert_abs_diff_eq!(
            InteractionPhase::from_derivation(lambda).unwrap().phi(),
            1.0,
            epsilon = 1e-15
        );
        let inconsistent = PhaseDerivation {
            frequencies: Some(LevelFrequencies {
                upper: 10.0,
                lower: 1.0,
                lower_alt: None,
                field: 2.0,
            }),
            ..base
        };
        assert!(InteractionPhase::from_derivation(inconsistent).is_err());
    }
}
