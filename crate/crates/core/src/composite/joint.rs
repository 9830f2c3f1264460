//! Joint states over path (x) atom (x) cavity1 (x) cavity2, the conditional
//! atom-field unitaries, projective atomic measurement, and the path/marker
//! decomposition behind the interference analysis.
//!
//! Amplitudes are stored lexicographically in (path, atom, n1, n2) order.
//! All operations are pure functions returning new states.

use num_complex::Complex64;

use crate::composite::atom::{AtomBasis, AtomState, RamseyRotation};
use crate::error::{Error, Result};
use crate::fock::{CavityState, FockDim, InteractionPhase, DEFAULT_NORM_TOL};

/// Which slit a path amplitude belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PathLabel {
    Slit1,
    Slit2,
}

impl PathLabel {
    pub fn index(self) -> usize {
        match self {
            PathLabel::Slit1 => 0,
            PathLabel::Slit2 => 1,
        }
    }

    pub fn other(self) -> PathLabel {
        match self {
            PathLabel::Slit1 => PathLabel::Slit2,
            PathLabel::Slit2 => PathLabel::Slit1,
        }
    }
}

/// Which cavity an interaction addresses.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Cavity {
    C1,
    C2,
}

/// Outcome restriction for conditional cavity extraction.
#[derive(Copy, Clone, Debug, Default)]
pub struct OutcomeFilter {
    pub path: Option<PathLabel>,
    pub level: Option<char>,
}

/// Normalized cavity factor pulled out of a joint state, with bookkeeping.
#[derive(Clone, Debug)]
pub struct ConditionalCavity {
    pub state: CavityState,
    /// Squared norm of the selected branch before renormalization.
    pub weight: f64,
    /// tr(rho^2)/tr(rho)^2 of the reduced cavity density; 1 for a clean factor.
    pub purity: f64,
    /// Overlap fidelity with the supplied reference state, when given.
    pub reference_fidelity: Option<f64>,
}

/// Decomposition of a two-path state into sqrt(p1)|z1>m1 + sqrt(p2)|z2>m2
/// with unit marker vectors m1, m2 over atom (x) cavity1 (x) cavity2.
#[derive(Clone, Debug)]
pub struct MarkerDecomposition {
    pub p1: f64,
    pub p2: f64,
    pub m1: Vec<Complex64>,
    pub m2: Vec<Complex64>,
    pub overlap: Complex64,
}

/// The slimmed-down handoff the screen model needs: path weights and the
/// marker overlap. Empty branches are tolerated (overlap 0).
#[derive(Copy, Clone, Debug)]
pub struct PathWeights {
    pub p1: f64,
    pub p2: f64,
    pub overlap: Complex64,
}

/// Pure state of path (x) atom (x) cavity1 (x) cavity2.
#[derive(Clone, Debug)]
pub struct JointState {
    basis: AtomBasis,
    dims: (FockDim, FockDim),
    amplitudes: Vec<Complex64>,
    weight: f64,
}

impl JointState {
    /// Tensor product of physical factors with two path amplitudes.
    pub fn product(
        path_amps: (Complex64, Complex64),
        atom: &AtomState,
        cavity1: &CavityState,
        cavity2: &CavityState,
    ) -> Result<Self> {
        let path_norm = path_amps.0.norm_sqr() + path_amps.1.norm_sqr();
        if (path_norm - 1.0).abs() > DEFAULT_NORM_TOL {
            return Err(Error::NormError {
                norm_sqr: path_norm,
            });
        }
        for norm_sqr in [atom.norm_sqr(), cavity1.norm_sqr(), cavity2.norm_sqr()] {
            if (norm_sqr - 1.0).abs() > DEFAULT_NORM_TOL {
                return Err(Error::NormError { norm_sqr });
            }
        }
        let (d1, d2) = (cavity1.dim().get(), cavity2.dim().get());
        let levels = atom.basis().len();
        let mut amplitudes = Vec::with_capacity(2 * levels * d1 * d2);
        for p in [path_amps.0, path_amps.1] {
            for a in atom.amplitudes() {
                for c1 in cavity1.amplitudes() {
                    for c2 in cavity2.amplitudes() {
                        amplitudes.push(p * a * c1 * c2);
                    }
                }
            }
        }
        Ok(JointState::from_parts(
            atom.basis(),
            (cavity1.dim(), cavity2.dim()),
            amplitudes,
        ))
    }

    pub(crate) fn from_parts(
        basis: AtomBasis,
        dims: (FockDim, FockDim),
        amplitudes: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(amplitudes.len(), 2 * basis.len() * dims.0.get() * dims.1.get());
        let weight = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        JointState {
            basis,
            dims,
            amplitudes,
            weight,
        }
    }

    pub fn basis(&self) -> AtomBasis {
        self.basis
    }

    pub fn dims(&self) -> (FockDim, FockDim) {
        self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared norm, kept as an explicit field so unnormalized intermediates
    /// carry their branch weight.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_physical(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= DEFAULT_NORM_TOL
    }

    /// Flat index of (path, atom, n1, n2).
    pub fn index(&self, path: usize, level: usize, n1: usize, n2: usize) -> usize {
        let (d1, d2) = (self.dims.0.get(), self.dims.1.get());
        ((path * self.basis.len() + level) * d1 + n1) * d2 + n2
    }

    fn expect_basis(&self, expected: AtomBasis) -> Result<()> {
        if self.basis != expected {
            return Err(Error::BasisMismatch {
                expected: expected.name(),
                found: self.basis.name(),
            });
        }
        Ok(())
    }

    fn cavity_levels(&self, cavity: Cavity) -> (usize, usize) {
        let (d1, d2) = (self.dims.0.get(), self.dims.1.get());
        match cavity {
            Cavity::C1 => (d1, d2),
            Cavity::C2 => (d2, d1),
        }
    }

    /// Dispersive two-level interaction on the chosen cavity: the |e>
    /// component picks up e^{-i phi (n+1)}, the |f> component e^{+i phi n}.
    pub fn apply_two_level_dispersive(
        &self,
        cavity: Cavity,
        phase: &InteractionPhase,
    ) -> Result<JointState> {
        self.expect_basis(AtomBasis::TwoLevel)?;
        let phi = phase.phi();
        let mut amplitudes = self.amplitudes.clone();
        let (dc, _) = self.cavity_levels(cavity);
        let mut factors_e = Vec::with_capacity(dc);
        let mut factors_f = Vec::with_capacity(dc);
        for n in 0..dc {
            factors_e.push(Complex64::from_polar(1.0, -phi * (n + 1) as f64));
            factors_f.push(Complex64::from_polar(1.0, phi * n as f64));
        }
        self.for_each_index(&mut |idx, _p, level, n1, n2| {
            let n = match cavity {
                Cavity::C1 => n1,
                Cavity::C2 => n2,
            };
            let factor = if level == 0 { factors_e[n] } else { factors_f[n] };
            amplitudes[idx] *= factor;
        });
        Ok(JointState::from_parts(self.basis, self.dims, amplitudes))
    }

    /// Dispersive lambda-atom interaction applied only within one slit's
    /// path block. Per Fock level n of the chosen cavity, the b/c sector is
    /// mixed by (1/2)(e^{i phi n} +/- 1) and the upper level a picks up
    /// e^{i phi (n+1)} (equal to -e^{i pi n} at phi = pi).
    pub fn apply_lambda_dispersive(
        &self,
        cavity: Cavity,
        phase: &InteractionPhase,
        conditioned_on_path: PathLabel,
    ) -> Result<JointState> {
        self.expect_basis(AtomBasis::Lambda)?;
        let phi = phase.phi();
        let mut amplitudes = self.amplitudes.clone();
        let (d1, d2) = (self.dims.0.get(), self.dims.1.get());
        let p = conditioned_on_path.index();
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                let n = match cavity {
                    Cavity::C1 => n1,
                    Cavity::C2 => n2,
                };
                let u = Complex64::from_polar(1.0, phi * n as f64);
                let plus = 0.5 * (u + 1.0);
                let minus = 0.5 * (u - 1.0);
                let upper = Complex64::from_polar(1.0, phi * (n + 1) as f64);
                let ia = self.index(p, 0, n1, n2);
                let ib = self.index(p, 1, n1, n2);
                let ic = self.index(p, 2, n1, n2);
                let (b, c) = (amplitudes[ib], amplitudes[ic]);
                amplitudes[ia] *= upper;
                amplitudes[ib] = plus * b + minus * c;
                amplitudes[ic] = minus * b + plus * c;
            }
        }
        Ok(JointState::from_parts(self.basis, self.dims, amplitudes))
    }

    /// Effective cascade interaction within one slit's path block: the |f>
    /// component gains e^{i phi n} on the chosen cavity, |g> is untouched.
    pub fn apply_cascade_dispersive(
        &self,
        cavity: Cavity,
        phase: &InteractionPhase,
        conditioned_on_path: PathLabel,
    ) -> Result<JointState> {
        self.expect_basis(AtomBasis::Cascade)?;
        let phi = phase.phi();
        let mut amplitudes = self.amplitudes.clone();
        let (d1, d2) = (self.dims.0.get(), self.dims.1.get());
        let p = conditioned_on_path.index();
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                let n = match cavity {
                    Cavity::C1 => n1,
                    Cavity::C2 => n2,
                };
                let idx = self.index(p, 0, n1, n2); // level f
                amplitudes[idx] *= Complex64::from_polar(1.0, phi * n as f64);
            }
        }
        Ok(JointState::from_parts(self.basis, self.dims, amplitudes))
    }

    /// Ramsey rotation on the atomic index, identity on paths and cavities.
    pub fn apply_ramsey(&self, rot: &RamseyRotation) -> Result<JointState> {
        self.apply_ramsey_inner(rot, None)
    }

    /// Ramsey rotation restricted to a single slit's path block, for zones
    /// that sit in one arm of the interferometer.
    pub fn apply_ramsey_on_path(
        &self,
        rot: &RamseyRotation,
        path: PathLabel,
    ) -> Result<JointState> {
        self.apply_ramsey_inner(rot, Some(path))
    }

    fn apply_ramsey_inner(
        &self,
        rot: &RamseyRotation,
        path: Option<PathLabel>,
    ) -> Result<JointState> {
        let (i, j) = rot.target_indices(self.basis)?;
        let m = rot.matrix();
        let mut amplitudes = self.amplitudes.clone();
        let (d1, d2) = (self.dims.0.get(), self.dims.1.get());
        let paths: &[usize] = match path {
            Some(p) => match p {
                PathLabel::Slit1 => &[0],
                PathLabel::Slit2 => &[1],
            },
            None => &[0, 1],
        };
        for &p in paths {
            for n1 in 0..d1 {
                for n2 in 0..d2 {
                    let ii = self.index(p, i, n1, n2);
                    let jj = self.index(p, j, n1, n2);
                    let (a, b) = (amplitudes[ii], amplitudes[jj]);
                    amplitudes[ii] = m[0][0] * a + m[0][1] * b;
                    amplitudes[jj] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
        Ok(JointState::from_parts(self.basis, self.dims, amplitudes))
    }

    /// Probability of finding the atom in `level`, without projecting.
    pub fn level_probability(&self, level: char) -> Result<f64> {
        let a = self.basis.index_of(level)?;
        let mut prob = 0.0;
        self.for_each_index(&mut |idx, _p, l, _n1, _n2| {
            if l == a {
                prob += self.amplitudes[idx].norm_sqr();
            }
        });
        Ok(prob)
    }

    /// Projective measurement of the atomic level. Returns the outcome
    /// probability and the renormalized post-measurement state; paths and
    /// cavities are untouched by the projection.
    pub fn measure_atom(&self, level: char) -> Result<(f64, JointState)> {
        let a = self.basis.index_of(level)?;
        let prob = self.level_probability(level)?;
        if prob < 1e-300 {
            return Err(Error::zero_probability(format!(
                "detecting level '{level}' has probability {prob:.3e}"
            )));
        }
        let scale = 1.0 / prob.sqrt();
        let mut amplitudes = vec![Complex64::ZERO; self.amplitudes.len()];
        self.for_each_index(&mut |idx, _p, l, _n1, _n2| {
            if l == a {
                amplitudes[idx] = self.amplitudes[idx] * scale;
            }
        });
        Ok((
            prob,
            JointState::from_parts(self.basis, self.dims, amplitudes),
        ))
    }

    /// Splits the state by path into weights and unit marker vectors over
    /// the non-path factors. Errors if either path block is empty.
    pub fn marker_states(&self) -> Result<MarkerDecomposition> {
        let block = self.block_len();
        let b1 = &self.amplitudes[..block];
        let b2 = &self.amplitudes[block..];
        let p1: f64 = b1.iter().map(|a| a.norm_sqr()).sum();
        let p2: f64 = b2.iter().map(|a| a.norm_sqr()).sum();
        if p1 < 1e-300 || p2 < 1e-300 {
            return Err(Error::zero_probability(
                "marker decomposition needs both path blocks populated",
            ));
        }
        let (s1, s2) = (1.0 / p1.sqrt(), 1.0 / p2.sqrt());
        let m1: Vec<Complex64> = b1.iter().map(|a| a * s1).collect();
        let m2: Vec<Complex64> = b2.iter().map(|a| a * s2).collect();
        let overlap = m1.iter().zip(&m2).map(|(x, y)| x.conj() * y).sum();
        Ok(MarkerDecomposition {
            p1,
            p2,
            m1,
            m2,
            overlap,
        })
    }

    /// Tolerant variant of [`marker_states`](Self::marker_states) for screen
    /// handoff: an empty branch yields zero weight and zero overlap.
    pub fn path_weights(&self) -> PathWeights {
        let block = self.block_len();
        let b1 = &self.amplitudes[..block];
        let b2 = &self.amplitudes[block..];
        let p1: f64 = b1.iter().map(|a| a.norm_sqr()).sum();
        let p2: f64 = b2.iter().map(|a| a.norm_sqr()).sum();
        let overlap = if p1 < 1e-300 || p2 < 1e-300 {
            Complex64::ZERO
        } else {
            let cross: Complex64 = b1.iter().zip(b2).map(|(x, y)| x.conj() * y).sum();
            cross / (p1.sqrt() * p2.sqrt())
        };
        PathWeights { p1, p2, overlap }
    }

    /// Extracts the normalized state of one cavity conditioned on a path
    /// and/or atomic outcome, together with branch weight, purity of the
    /// reduced density, and an optional fidelity against a reference.
    pub fn conditional_cavity_state(
        &self,
        cavity: Cavity,
        filter: OutcomeFilter,
        reference: Option<&CavityState>,
    ) -> Result<ConditionalCavity> {
        let level_idx = match filter.level {
            Some(l) => Some(self.basis.index_of(l)?),
            None => None,
        };
        let (dc, d_other) = self.cavity_levels(cavity);
        if let Some(r) = reference {
            if r.dim().get() != dc {
                return Err(Error::DimensionMismatch {
                    left: r.dim().get(),
                    right: dc,
                });
            }
        }
        // reduced density matrix of the chosen cavity over the selected block
        let mut rho = vec![Complex64::ZERO; dc * dc];
        let paths: Vec<usize> = match filter.path {
            Some(p) => vec![p.index()],
            None => vec![0, 1],
        };
        let levels: Vec<usize> = match level_idx {
            Some(a) => vec![a],
            None => (0..self.basis.len()).collect(),
        };
        let mut fiber = vec![Complex64::ZERO; dc];
        for &p in &paths {
            for &a in &levels {
                for other in 0..d_other {
                    for (m, slot) in fiber.iter_mut().enumerate() {
                        let (n1, n2) = match cavity {
                            Cavity::C1 => (m, other),
                            Cavity::C2 => (other, m),
                        };
                        *slot = self.amplitudes[self.index(p, a, n1, n2)];
                    }
                    for m in 0..dc {
                        for mp in 0..dc {
                            rho[m * dc + mp] += fiber[m] * fiber[mp].conj();
                        }
                    }
                }
            }
        }
        let weight: f64 = (0..dc).map(|m| rho[m * dc + m].re).sum();
        if weight < 1e-300 {
            return Err(Error::zero_probability(
                "requested conditional block carries no weight",
            ));
        }
        let purity = rho.iter().map(|e| e.norm_sqr()).sum::<f64>() / (weight * weight);
        // principal component: for a pure rho every nonzero column is the
        // state; take the one under the largest diagonal entry
        let j = (0..dc)
            .max_by(|&x, &y| {
                rho[x * dc + x]
                    .re
                    .partial_cmp(&rho[y * dc + y].re)
                    .unwrap()
            })
            .unwrap();
        let column: Vec<Complex64> = (0..dc).map(|m| rho[m * dc + j]).collect();
        let state = CavityState::new(column)?.renormalized()?;
        let reference_fidelity = match reference {
            Some(r) => {
                let mut overlap = 0.0;
                for m in 0..dc {
                    for mp in 0..dc {
                        overlap +=
                            (r.amplitudes()[m].conj() * rho[m * dc + mp] * r.amplitudes()[mp]).re;
                    }
                }
                Some(overlap / (weight * r.norm_sqr()))
            }
            None => None,
        };
        Ok(ConditionalCavity {
            state,
            weight,
            purity,
            reference_fidelity,
        })
    }

    fn block_len(&self) -> usize {
        self.basis.len() * self.dims.0.get() * self.dims.1.get()
    }

    fn for_each_index(&self, f: &mut dyn FnMut(usize, usize, usize, usize, usize)) {
        let (d1, d2) = (self.dims.0.get(), self.dims.1.get());
        let levels = self.basis.len();
        let mut idx = 0;
        for p in 0..2 {
            for a in 0..levels {
                for n1 in 0..d1 {
                    for n2 in 0..d2 {
                        f(idx, p, a, n1, n2);
                        idx += 1;
                    }
                }
            }
        }
    }

    /// Largest elementwise amplitude difference against another state.
    pub fn max_abs_diff(&self, other: &JointState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// |<self|other>|^2 between normalized rays.
    pub fn fidelity(&self, other: &JointState) -> Result<f64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                left: self.amplitudes.len(),
                right: other.amplitudes.len(),
            });
        }
        let (na, nb) = (self.norm_sqr(), other.norm_sqr());
        if na < 1e-300 || nb < 1e-300 {
            return Err(Error::NormError {
                norm_sqr: na.min(nb),
            });
        }
        let ip: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(ip.norm_sqr() / (na * nb))
    }
}
