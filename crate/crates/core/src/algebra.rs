//! Concrete finite-scale C*-algebras.
//!
//! Two carriers are supported: the full matrix algebra `M_n` (n ≤ 16, real
//! or complex scalars) with the conjugate-transpose involution and the
//! operator norm, and a sampled model of bounded functions `ℓ∞(S)` on a
//! finite grid with pointwise operations, pointwise conjugation and the
//! sup norm over the samples.
//!
//! Real matrices are embedded in the complex algebra for spectral work.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_MATRIX_DIM: usize = 16;
pub const MAX_GRID_SIZE: usize = 4096;

/// Sweep budget for the cyclic Jacobi eigen-iteration.
pub const JACOBI_MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scalars {
    Real,
    Complex,
}

/// Which algebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraDescriptor {
    Matrix { dim: usize, scalars: Scalars },
    Function { grid_size: usize },
}

impl AlgebraDescriptor {
    pub fn matrix(dim: usize, scalars: Scalars) -> Result<Self> {
        if dim == 0 || dim > MAX_MATRIX_DIM {
            return Err(Error::Domain(format!(
                "matrix dimension must be in 1..={MAX_MATRIX_DIM}, got {dim}"
            )));
        }
        Ok(AlgebraDescriptor::Matrix { dim, scalars })
    }

    pub fn function(grid_size: usize) -> Result<Self> {
        if grid_size == 0 || grid_size > MAX_GRID_SIZE {
            return Err(Error::Domain(format!(
                "grid size must be in 1..={MAX_GRID_SIZE}, got {grid_size}"
            )));
        }
        Ok(AlgebraDescriptor::Function { grid_size })
    }

    /// Number of stored complex entries.
    pub fn len(&self) -> usize {
        match *self {
            AlgebraDescriptor::Matrix { dim, .. } => dim * dim,
            AlgebraDescriptor::Function { grid_size } => grid_size,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_real(&self) -> bool {
        matches!(
            self,
            AlgebraDescriptor::Matrix {
                scalars: Scalars::Real,
                ..
            }
        )
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            descriptor: *self,
            entries: vec![Complex64::new(0.0, 0.0); self.len()],
        }
    }

    pub fn identity(&self) -> AlgebraElement {
        let mut e = self.zero();
        match *self {
            AlgebraDescriptor::Matrix { dim, .. } => {
                for i in 0..dim {
                    e.entries[i * dim + i] = Complex64::new(1.0, 0.0);
                }
            }
            AlgebraDescriptor::Function { .. } => {
                e.entries.fill(Complex64::new(1.0, 0.0));
            }
        }
        e
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraDescriptor::Matrix { dim, scalars } => {
                let field = match scalars {
                    Scalars::Real => "R",
                    Scalars::Complex => "C",
                };
                write!(f, "M{dim}({field})")
            }
            AlgebraDescriptor::Function { grid_size } => write!(f, "linf(grid={grid_size})"),
        }
    }
}

/// Numerical tolerances. Positivity and self-adjointness are relative to
/// `1 + ‖a‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    pub self_adjoint_tol: f64,
    pub positivity_tol: f64,
    pub norm_tol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            self_adjoint_tol: 1e-10,
            positivity_tol: 1e-10,
            norm_tol: 1e-10,
        }
    }
}

impl ToleranceProfile {
    pub fn uniform(tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be finite and >= 0, got {tol}"
            )));
        }
        Ok(ToleranceProfile {
            self_adjoint_tol: tol,
            positivity_tol: tol,
            norm_tol: tol,
        })
    }
}

/// A member of a concrete algebra. Matrices are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    descriptor: AlgebraDescriptor,
    entries: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn new(descriptor: AlgebraDescriptor, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != descriptor.len() {
            return Err(Error::Structural(format!(
                "{descriptor} needs {} entries, got {}",
                descriptor.len(),
                entries.len()
            )));
        }
        if let Some(bad) = entries
            .iter()
            .find(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Structural(format!("non-finite entry {bad}")));
        }
        if descriptor.is_real() && entries.iter().any(|z| z.im != 0.0) {
            return Err(Error::Structural(format!(
                "{descriptor} has real scalars but an entry has a nonzero imaginary part"
            )));
        }
        Ok(AlgebraElement {
            descriptor,
            entries,
        })
    }

    /// Real matrix from rows.
    pub fn real_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let descriptor = AlgebraDescriptor::matrix(dim, Scalars::Real)?;
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Structural("matrix rows must be square".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        AlgebraElement::new(descriptor, entries)
    }

    pub fn complex_matrix(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let descriptor = AlgebraDescriptor::matrix(dim, Scalars::Complex)?;
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Structural("matrix rows must be square".into()));
        }
        AlgebraElement::new(descriptor, rows.iter().flatten().copied().collect())
    }

    pub fn real_diag(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let descriptor = AlgebraDescriptor::matrix(dim, Scalars::Real)?;
        let mut e = descriptor.zero();
        for (i, &d) in diag.iter().enumerate() {
            e.entries[i * dim + i] = Complex64::new(d, 0.0);
        }
        AlgebraElement::new(descriptor, e.entries)
    }

    pub fn function(samples: Vec<Complex64>) -> Result<Self> {
        let descriptor = AlgebraDescriptor::function(samples.len())?;
        AlgebraElement::new(descriptor, samples)
    }

    pub fn real_function(samples: &[f64]) -> Result<Self> {
        AlgebraElement::function(samples.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant_function(grid_size: usize, value: f64) -> Result<Self> {
        AlgebraElement::real_function(&vec![value; grid_size])
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        self.descriptor
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix entry `(row, col)`; panics on function elements.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match self.descriptor {
            AlgebraDescriptor::Matrix { dim, .. } => self.entries[row * dim + col],
            AlgebraDescriptor::Function { .. } => panic!("entry(row, col) on a function element"),
        }
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<()> {
        if self.descriptor != other.descriptor {
            return Err(Error::Structural(format!(
                "algebra mismatch: {} vs {}",
                self.descriptor, other.descriptor
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    fn zip_map(
        &self,
        other: &AlgebraElement,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Self {
        AlgebraElement {
            descriptor: self.descriptor,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement {
            descriptor: self.descriptor,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    /// Multiply by a complex scalar. Fails in a real algebra when the
    /// scalar has an imaginary part.
    pub fn scale_complex(&self, s: Complex64) -> Result<AlgebraElement> {
        if self.descriptor.is_real() && s.im != 0.0 {
            return Err(Error::Structural(
                "complex scalar applied to a real algebra".into(),
            ));
        }
        Ok(AlgebraElement {
            descriptor: self.descriptor,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        })
    }

    /// Algebra product: matrix product or pointwise product.
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        match self.descriptor {
            AlgebraDescriptor::Matrix { dim, .. } => {
                let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
                for i in 0..dim {
                    for k in 0..dim {
                        let a = self.entries[i * dim + k];
                        if a == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for j in 0..dim {
                            out[i * dim + j] += a * other.entries[k * dim + j];
                        }
                    }
                }
                Ok(AlgebraElement {
                    descriptor: self.descriptor,
                    entries: out,
                })
            }
            AlgebraDescriptor::Function { .. } => Ok(self.zip_map(other, |a, b| a * b)),
        }
    }

    /// `a*`: conjugate transpose, or pointwise conjugation.
    pub fn involution(&self) -> AlgebraElement {
        match self.descriptor {
            AlgebraDescriptor::Matrix { dim, .. } => {
                let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
                for i in 0..dim {
                    for j in 0..dim {
                        out[j * dim + i] = self.entries[i * dim + j].conj();
                    }
                }
                AlgebraElement {
                    descriptor: self.descriptor,
                    entries: out,
                }
            }
            AlgebraDescriptor::Function { .. } => AlgebraElement {
                descriptor: self.descriptor,
                entries: self.entries.iter().map(|z| z.conj()).collect(),
            },
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &AlgebraElement) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Operator norm for matrices (largest singular value), sup norm over
    /// samples for functions.
    pub fn op_norm(&self) -> Result<f64> {
        match self.descriptor {
            AlgebraDescriptor::Matrix { dim, .. } => {
                if self.is_zero() {
                    return Ok(0.0);
                }
                let gram = self.involution().mul(self)?;
                let eig = hermitian_eigenvalues(gram.entries(), dim)?;
                let top = eig.last().copied().unwrap_or(0.0);
                Ok(top.max(0.0).sqrt())
            }
            AlgebraDescriptor::Function { .. } => Ok(self.max_abs_entry()),
        }
    }

    /// `‖a − a*‖`.
    pub fn self_adjoint_defect(&self) -> Result<f64> {
        self.sub(&self.involution())?.op_norm()
    }

    pub fn is_self_adjoint(&self, tol: &ToleranceProfile) -> Result<bool> {
        let norm = self.op_norm()?;
        Ok(self.self_adjoint_defect()? <= tol.self_adjoint_tol * (1.0 + norm))
    }

    /// `(a + a*) / 2`.
    pub fn hermitian_part(&self) -> AlgebraElement {
        self.add(&self.involution())
            .expect("same descriptor")
            .scale(0.5)
    }

    /// Spectrum. Self-adjoint matrices go through cyclic Jacobi sweeps;
    /// for `2×2` inputs the closed-form characteristic roots are used as an
    /// internal cross-check (and as the answer for non-self-adjoint 2×2).
    /// Function elements return their samples.
    pub fn spectrum(&self, tol: &ToleranceProfile) -> Result<Spectrum> {
        match self.descriptor {
            AlgebraDescriptor::Function { .. } => Ok(Spectrum::from_values(
                self.entries.clone(),
                tol.self_adjoint_tol,
            )),
            AlgebraDescriptor::Matrix { dim, .. } => {
                let norm = self.op_norm()?;
                let self_adjoint =
                    self.self_adjoint_defect()? <= tol.self_adjoint_tol * (1.0 + norm);
                if self_adjoint {
                    let h = self.hermitian_part();
                    let eig = hermitian_eigenvalues(h.entries(), dim)?;
                    if dim == 2 {
                        let roots = characteristic_roots_2x2(&h);
                        let mut closed: Vec<f64> = roots.iter().map(|z| z.re).collect();
                        closed.sort_by(f64::total_cmp);
                        let gap = eig
                            .iter()
                            .zip(&closed)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max);
                        if gap > 1e-9 * (1.0 + norm) {
                            return Err(Error::Consistency(format!(
                                "Jacobi eigenvalues {eig:?} disagree with characteristic roots {closed:?}"
                            )));
                        }
                    }
                    let values = eig.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
                    Ok(Spectrum::from_values(
                        values,
                        tol.self_adjoint_tol * (1.0 + norm),
                    ))
                } else if dim == 2 {
                    let roots = characteristic_roots_2x2(self);
                    Ok(Spectrum::from_values(
                        roots.to_vec(),
                        tol.self_adjoint_tol * (1.0 + norm),
                    ))
                } else {
                    Err(Error::Unsupported(format!(
                        "spectrum of a non-self-adjoint {dim}x{dim} matrix"
                    )))
                }
            }
        }
    }

    /// Membership in the positive cone: self-adjoint and spectrum in
    /// `[0, ∞)`, both up to tolerances scaled by `1 + ‖a‖`.
    pub fn is_positive(&self, tol: &ToleranceProfile) -> Result<bool> {
        let norm = self.op_norm()?;
        if self.self_adjoint_defect()? > tol.self_adjoint_tol * (1.0 + norm) {
            return Ok(false);
        }
        let spectrum = self.hermitian_part().spectrum(tol)?;
        Ok(spectrum.min_real() >= -tol.positivity_tol * (1.0 + norm))
    }

    /// `self ⪯ other` iff `other − self` is positive.
    pub fn precedes(&self, other: &AlgebraElement, tol: &ToleranceProfile) -> Result<bool> {
        other.sub(self)?.is_positive(tol)
    }
}

/// Serialized as `{algebra, entries}`; real algebras emit plain numbers,
/// complex ones `[re, im]` pairs.
impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("AlgebraElement", 2)?;
        st.serialize_field("algebra", &self.descriptor.to_string())?;
        if self.descriptor.is_real() {
            let re: Vec<f64> = self.entries.iter().map(|z| z.re).collect();
            st.serialize_field("entries", &re)?;
        } else {
            let pairs: Vec<[f64; 2]> = self.entries.iter().map(|z| [z.re, z.im]).collect();
            st.serialize_field("entries", &pairs)?;
        }
        st.end()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |z: &Complex64| {
            if z.im == 0.0 {
                format!("{}", z.re)
            } else {
                format!("{}{:+}i", z.re, z.im)
            }
        };
        match self.descriptor {
            AlgebraDescriptor::Matrix { dim, .. } => {
                write!(f, "[")?;
                for i in 0..dim {
                    let row: Vec<String> =
                        (0..dim).map(|j| show(&self.entries[i * dim + j])).collect();
                    write!(f, "{}[{}]", if i > 0 { ", " } else { "" }, row.join(", "))?;
                }
                write!(f, "]")
            }
            AlgebraDescriptor::Function { grid_size } => {
                let shown: Vec<String> = self.entries.iter().take(4).map(show).collect();
                let more = if grid_size > 4 { ", ..." } else { "" };
                write!(f, "f[{}{}] (grid {grid_size})", shown.join(", "), more)
            }
        }
    }
}

/// Spectrum values sorted ascending by real part, then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub is_real: Vec<bool>,
}

impl Spectrum {
    fn from_values(mut values: Vec<Complex64>, imag_tol: f64) -> Self {
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let is_real = values.iter().map(|z| z.im.abs() <= imag_tol).collect();
        Spectrum { values, is_real }
    }

    pub fn min_real(&self) -> f64 {
        self.values
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_real(&self) -> f64 {
        self.values
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_real(&self) -> bool {
        self.is_real.iter().all(|&r| r)
    }
}

/// Roots of `λ² − tr(a)λ + det(a)` for a 2×2 matrix.
pub fn characteristic_roots_2x2(a: &AlgebraElement) -> [Complex64; 2] {
    let (p, q, r, s) = (a.entry(0, 0), a.entry(0, 1), a.entry(1, 0), a.entry(1, 1));
    let half_trace = (p + s) * 0.5;
    let det = p * s - q * r;
    let disc = (half_trace * half_trace - det).sqrt();
    [half_trace - disc, half_trace + disc]
}

/// Eigenvalues (ascending) of a Hermitian `dim×dim` matrix given row-major.
/// Real symmetric input is diagonalized directly; complex Hermitian input
/// through its real `2n×2n` embedding `[[Re, −Im], [Im, Re]]`, whose
/// spectrum is the original one with every value doubled.
pub fn hermitian_eigenvalues(entries: &[Complex64], dim: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(entries.len(), dim * dim);
    if entries.iter().all(|z| z.im == 0.0) {
        let mut m: Vec<f64> = entries.iter().map(|z| z.re).collect();
        symmetrize(&mut m, dim);
        return jacobi_eigenvalues(m, dim);
    }
    let n = 2 * dim;
    let mut m = vec![0.0; n * n];
    for i in 0..dim {
        for j in 0..dim {
            let z = entries[i * dim + j];
            m[i * n + j] = z.re;
            m[(i + dim) * n + (j + dim)] = z.re;
            m[i * n + (j + dim)] = -z.im;
            m[(i + dim) * n + j] = z.im;
        }
    }
    symmetrize(&mut m, n);
    let doubled = jacobi_eigenvalues(m, n)?;
    Ok(doubled
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

fn symmetrize(m: &mut [f64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = avg;
            m[j * n + i] = avg;
        }
    }
}

/// Cyclic Jacobi rotations on a real symmetric matrix.
fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = f64::EPSILON * frob;

    let mut sweeps = 0;
    loop {
        let residual = off(&a);
        if residual <= target || residual == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}
