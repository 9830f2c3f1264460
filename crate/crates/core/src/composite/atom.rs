//! Atomic level spaces and Ramsey-zone rotations.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The three atomic level structures used by the experiments.
///
/// The label order is fixed and used consistently for matrix application.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AtomBasis {
    /// Two levels e (upper), f (lower): dispersive cat preparation.
    TwoLevel,
    /// Lambda configuration a (upper), b, c (degenerate lower).
    Lambda,
    /// Effective two-level reduction f, g of the cascade atom.
    Cascade,
}

impl AtomBasis {
    pub fn labels(self) -> &'static [char] {
        match self {
            AtomBasis::TwoLevel => &['e', 'f'],
            AtomBasis::Lambda => &['a', 'b', 'c'],
            AtomBasis::Cascade => &['f', 'g'],
        }
    }

    pub fn len(self) -> usize {
        self.labels().len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn name(self) -> &'static str {
        match self {
            AtomBasis::TwoLevel => "two-level {e,f}",
            AtomBasis::Lambda => "lambda {a,b,c}",
            AtomBasis::Cascade => "cascade {f,g}",
        }
    }

    pub fn index_of(self, level: char) -> Result<usize> {
        self.labels()
            .iter()
            .position(|&l| l == level)
            .ok_or(Error::UnknownLevel {
                level,
                basis: self.name(),
            })
    }
}

/// Internal state of one atom over a labeled level basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomState {
    basis: AtomBasis,
    amplitudes: Vec<Complex64>,
}

impl AtomState {
    pub fn new(basis: AtomBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: basis.len(),
            });
        }
        Ok(AtomState { basis, amplitudes })
    }

    /// The atom sitting in a single named level.
    pub fn pure(basis: AtomBasis, level: char) -> Result<Self> {
        let idx = basis.index_of(level)?;
        let mut amplitudes = vec![Complex64::ZERO; basis.len()];
        amplitudes[idx] = Complex64::ONE;
        Ok(AtomState { basis, amplitudes })
    }

    /// Builds a superposition from (level, amplitude) pairs; unnamed levels
    /// get zero amplitude.
    pub fn superposition(basis: AtomBasis, terms: &[(char, Complex64)]) -> Result<Self> {
        let mut amplitudes = vec![Complex64::ZERO; basis.len()];
        for &(level, amp) in terms {
            amplitudes[basis.index_of(level)?] += amp;
        }
        Ok(AtomState { basis, amplitudes })
    }

    pub fn basis(&self) -> AtomBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, level: char) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index_of(level)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_physical(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= crate::fock::DEFAULT_NORM_TOL
    }

    /// Applies a Ramsey rotation to this bare atomic state.
    pub fn apply_rotation(&self, rot: &RamseyRotation) -> Result<AtomState> {
        let (i, j) = rot.target_indices(self.basis)?;
        let mut amplitudes = self.amplitudes.clone();
        let m = rot.matrix();
        let (a, b) = (amplitudes[i], amplitudes[j]);
        amplitudes[i] = m[0][0] * a + m[0][1] * b;
        amplitudes[j] = m[1][0] * a + m[1][1] * b;
        Ok(AtomState {
            basis: self.basis,
            amplitudes,
        })
    }
}

/// A 2x2 unitary acting on a named pair of atomic levels, identity elsewhere.
///
/// Unitarity is enforced at construction: ||M'M - I||_max <= 1e-12.
#[derive(Clone, Debug, PartialEq)]
pub struct RamseyRotation {
    matrix: [[Complex64; 2]; 2],
    targets: (char, char),
}

impl RamseyRotation {
    pub fn new(matrix: [[Complex64; 2]; 2], targets: (char, char)) -> Result<Self> {
        if targets.0 == targets.1 {
            return Err(Error::InvalidParameter(
                "rotation targets must name two distinct levels".into(),
            ));
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > 1e-12 {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(RamseyRotation { matrix, targets })
    }

    /// Rotation taking |f> to c_e |e> + c_f |f>, completed to a unitary.
    /// Requires |c_e|^2 + |c_f|^2 = 1.
    pub fn superposition_prep(c_e: Complex64, c_f: Complex64) -> Result<Self> {
        let n = c_e.norm_sqr() + c_f.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NormError { norm_sqr: n });
        }
        RamseyRotation::new(
            [[c_f.conj(), c_e], [-c_e.conj(), c_f]],
            ('e', 'f'),
        )
    }

    /// Readout rotation for the cat-preparation pipeline:
    /// |e> -> (|e> + i|f>)/sqrt(2), |f> -> (i|e> + |f>)/sqrt(2).
    pub fn cat_readout() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let ih = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        RamseyRotation::new([[h, ih], [ih, h]], ('e', 'f'))
            .expect("constant matrix is unitary")
    }

    /// The f/g mixing rotation used on cascade atoms (both zones use it):
    /// |f> -> (|f> - |g>)/sqrt(2), |g> -> (|f> + |g>)/sqrt(2).
    pub fn cascade_mixing() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        RamseyRotation::new([[h, h], [-h, h]], ('f', 'g'))
            .expect("constant matrix is unitary")
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.matrix
    }

    pub fn targets(&self) -> (char, char) {
        self.targets
    }

    pub(crate) fn target_indices(&self, basis: AtomBasis) -> Result<(usize, usize)> {
        Ok((
            basis.index_of(self.targets.0)?,
            basis.index_of(self.targets.1)?,
        ))
    }
}

fn unitarity_deviation(m: &[[Complex64; 2]; 2]) -> f64 {
    // entries of M'M - I
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut entry = Complex64::ZERO;
            for k in 0..2 {
                entry += m[k][i].conj() * m[k][j];
            }
            if i == j {
                entry -= Complex64::ONE;
            }
            worst = worst.max(entry.norm());
        }
    }
    worst
}
