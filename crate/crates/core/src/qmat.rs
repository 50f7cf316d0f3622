//! Fixed-size complex linear algebra for one and two qubits.
//!
//! Matrices are 2x2 or 4x4, stored row-major. Two-qubit basis order is
//! |00>, |01>, |10>, |11> with subsystem A as the left tensor factor.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QcorrError, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance on max |M - M^dagger|.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on |Tr rho - 1|.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in [-POSITIVITY_TOL, 0) are clipped to zero; anything lower is rejected.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

/// Debug-dump layout: `{"dim": n, "re": [...], "im": [...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            re: m.entries.iter().map(|z| z.re).collect(),
            im: m.entries.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = QcorrError;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.im.len() {
            return Err(QcorrError::InvalidInput(format!(
                "re/im length mismatch: {} vs {}",
                j.re.len(),
                j.im.len()
            )));
        }
        let entries =
            j.re.into_iter()
                .zip(j.im)
                .map(|(re, im)| C64::new(re, im))
                .collect();
        ComplexMatrix::new(j.dim, entries)
    }
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(QcorrError::InvalidInput(format!(
                "dimension must be 2 or 4, got {dim}"
            )));
        }
        if entries.len() != dim * dim {
            return Err(QcorrError::InvalidInput(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "dimension must be 2 or 4");
        ComplexMatrix {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut entries = vec![ZERO; dim * dim];
        for (i, &v) in values.iter().enumerate() {
            entries[i * dim + i] = C64::new(v, 0.0);
        }
        Self::new(dim, entries)
    }

    /// Outer product |u><v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(QcorrError::InvalidInput(
                "outer product of unequal lengths".into(),
            ));
        }
        let dim = u.len();
        let entries = u
            .iter()
            .flat_map(|&ui| v.iter().map(move |&vj| ui * vj.conj()))
            .collect();
        Self::new(dim, entries)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let entries = match self {
            Pauli::I => vec![ONE, ZERO, ZERO, ONE],
            Pauli::X => vec![ZERO, ONE, ONE, ZERO],
            Pauli::Y => vec![ZERO, C64::new(0.0, -1.0), I, ZERO],
            Pauli::Z => vec![ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix { dim: 2, entries }
    }
}

/// Kronecker product of two single-qubit operators.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(QcorrError::InvalidInput(format!(
            "kron expects two 2x2 operands, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.get(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

fn pauli_pair(pa: Pauli, pb: Pauli) -> ComplexMatrix {
    kron(&pa.matrix(), &pb.matrix()).expect("pauli operands are 2x2")
}

/// Validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(QcorrError::InvalidInput(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QcorrError::InvalidInput(format!(
                "trace must be 1, got {}{:+}i",
                tr.re, tr.im
            )));
        }
        let spectrum = hermitian_eigenvalues(&matrix)?;
        let min = spectrum.last().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(QcorrError::InvalidState {
                min_eigenvalue: min,
            });
        }
        Ok(DensityMatrix(matrix))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Spectrum in descending order, negative noise clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
            .expect("validated density matrix is Hermitian")
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    }

    /// Pure state |psi><psi| from a (not necessarily normalized) vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(QcorrError::InvalidInput("zero state vector".into()));
        }
        let m = ComplexMatrix::outer(psi, psi)?.scale(C64::new(1.0 / norm2, 0.0));
        Self::new(m)
    }
}

/// Bloch coefficients of a two-qubit X state:
/// rho = (I + a Z.I + b I.Z + cx X.X + cy Y.Y + cz Z.Z) / 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XParams {
    pub a: f64,
    pub b: f64,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl XParams {
    /// Builds the parameters and checks that they describe a physical state.
    pub fn new(a: f64, b: f64, cx: f64, cy: f64, cz: f64) -> Result<Self> {
        let p = XParams { a, b, cx, cy, cz };
        p.validate()?;
        Ok(p)
    }

    pub fn bell_diagonal(cx: f64, cy: f64, cz: f64) -> Result<Self> {
        Self::new(0.0, 0.0, cx, cy, cz)
    }

    /// q |psi-><psi-| + (1-q) |00><00|.
    pub fn werner_like_q(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(QcorrError::InvalidInput(format!(
                "q must lie in [0,1], got {q}"
            )));
        }
        Self::new(1.0 - q, 1.0 - q, -q, -q, 1.0 - 2.0 * q)
    }

    pub fn singlet() -> Self {
        XParams {
            a: 0.0,
            b: 0.0,
            cx: -1.0,
            cy: -1.0,
            cz: -1.0,
        }
    }

    pub fn maximally_mixed() -> Self {
        XParams {
            a: 0.0,
            b: 0.0,
            cx: 0.0,
            cy: 0.0,
            cz: 0.0,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.a, self.b, self.cx, self.cy, self.cz]
    }

    fn check_range(&self) -> Result<()> {
        let names = ["a", "b", "cx", "cy", "cz"];
        for (name, v) in names.iter().zip(self.as_array()) {
            if !v.is_finite() || v.abs() > 1.0 + 1e-12 {
                return Err(QcorrError::InvalidInput(format!(
                    "parameter {name}={v} outside [-1, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Range check plus full positivity check of the spectrum.
    pub fn validate(&self) -> Result<()> {
        x_state_from_params(self).map(|_| ())
    }

    /// Spectrum from the 2x2 block decomposition of the X matrix, unsorted.
    pub fn block_spectrum(&self) -> [f64; 4] {
        let r_outer = ((self.a + self.b).powi(2) + (self.cx - self.cy).powi(2)).sqrt();
        let r_inner = ((self.a - self.b).powi(2) + (self.cx + self.cy).powi(2)).sqrt();
        [
            (1.0 + self.cz + r_outer) / 4.0,
            (1.0 + self.cz - r_outer) / 4.0,
            (1.0 - self.cz + r_inner) / 4.0,
            (1.0 - self.cz - r_inner) / 4.0,
        ]
    }

    /// Exchange the roles of A and B (a <-> b). Measurement on B of `self`
    /// equals measurement on A of the swapped state.
    pub fn swap_subsystems(&self) -> Self {
        XParams {
            a: self.b,
            b: self.a,
            ..*self
        }
    }
}

/// Builds rho^AB from its X-state Bloch coefficients and validates it.
pub fn x_state_from_params(p: &XParams) -> Result<DensityMatrix> {
    p.check_range()?;
    let terms = [
        (1.0, Pauli::I, Pauli::I),
        (p.a, Pauli::Z, Pauli::I),
        (p.b, Pauli::I, Pauli::Z),
        (p.cx, Pauli::X, Pauli::X),
        (p.cy, Pauli::Y, Pauli::Y),
        (p.cz, Pauli::Z, Pauli::Z),
    ];
    let mut rho = ComplexMatrix::zeros(4);
    for (coef, pa, pb) in terms {
        if coef != 0.0 {
            rho = &rho + &pauli_pair(pa, pb).scale(C64::new(coef / 4.0, 0.0));
        }
    }
    DensityMatrix::new(rho)
}

const X_SHAPE_TOL: f64 = 1e-10;

/// Inverse Pauli decomposition of an X-shaped two-qubit state.
pub fn params_from_density(rho: &DensityMatrix) -> Result<XParams> {
    let m = rho.matrix();
    if m.dim() != 4 {
        return Err(QcorrError::InvalidInput(
            "expected a two-qubit state".into(),
        ));
    }
    let allowed = |i: usize, j: usize| i == j || i + j == 3;
    let offending: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| !allowed(i, j) && m.get(i, j).norm() > X_SHAPE_TOL)
        .collect();
    if !offending.is_empty() {
        return Err(QcorrError::NotXShape { entries: offending });
    }
    let expect = |pa, pb| (m * &pauli_pair(pa, pb)).trace().re;
    Ok(XParams {
        a: expect(Pauli::Z, Pauli::I),
        b: expect(Pauli::I, Pauli::Z),
        cx: expect(Pauli::X, Pauli::X),
        cy: expect(Pauli::Y, Pauli::Y),
        cz: expect(Pauli::Z, Pauli::Z),
    })
}

fn sort_descending(v: &mut [f64]) {
    v.sort_by(|x, y| y.total_cmp(x));
}

/// Real spectrum of a Hermitian matrix in descending order.
///
/// 2x2 uses the closed quadratic form; 4x4 goes through cyclic Jacobi.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(QcorrError::InvalidInput(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    if m.dim() == 2 {
        let (p, q) = (m.get(0, 0).re, m.get(1, 1).re);
        let off = m.get(0, 1).norm();
        let mean = 0.5 * (p + q);
        let radius = (0.25 * (p - q) * (p - q) + off * off).sqrt();
        return Ok(vec![mean + radius, mean - radius]);
    }
    let (mut values, _) = jacobi(m, false);
    sort_descending(&mut values);
    Ok(values)
}

/// Eigenvalues (descending) with the matching unit eigenvectors as columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(QcorrError::InvalidInput(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let (values, vectors) = jacobi(m, true);
    let vectors = vectors.expect("vectors requested");
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut sorted = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            sorted.set(row, new_col, vectors.get(row, old_col));
        }
    }
    Ok((order.iter().map(|&i| values[i]).collect(), sorted))
}

/// Cyclic complex Jacobi. Each pivot (p, q) is diagonalized by a phase
/// change on q followed by a real Givens rotation.
fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.dim();
    let mut a = m.entries().to_vec();
    // symmetrize the noise away
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i].conj());
            a[i * n + j] = avg;
            a[j * n + i] = avg.conj();
        }
    }
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n).entries);

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let gabs = g.norm();
                if gabs < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = g / gabs; // e^{i alpha}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * gabs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U block: [[c, s], [-s e^{-i alpha}, c e^{-i alpha}]]
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                // A <- A U
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * u_pp + akq * u_qp;
                    a[k * n + q] = akp * u_pq + akq * u_qq;
                }
                // A <- U^dagger A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * u_pp + vkq * u_qp;
                        v[k * n + q] = vkp * u_pq + vkq * u_qq;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re).collect();
    (values, v.map(|entries| ComplexMatrix { dim: n, entries }))
}

/// -x log2 x with the 0 log 0 = 0 convention.
#[inline]
pub(crate) fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy (bits) of a spectrum, clipping eigenvalues within
/// `POSITIVITY_TOL` below zero.
pub fn spectrum_entropy(spectrum: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &x in spectrum {
        if x < -POSITIVITY_TOL {
            return Err(QcorrError::InvalidState { min_eigenvalue: x });
        }
        s += neg_xlog2x(x);
    }
    Ok(s.max(0.0))
}

/// S(rho) = -Tr rho log2 rho.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = hermitian_eigenvalues(rho.matrix())?;
    let s = spectrum_entropy(&spectrum)?;
    Ok(s.min((rho.dim() as f64).log2()))
}

/// h(x) = -x log2 x - (1-x) log2 (1-x).
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(QcorrError::InvalidInput(format!(
            "binary entropy argument {x} outside [0,1]"
        )));
    }
    Ok(h2(x))
}

/// Unchecked binary entropy; the argument is clamped to [0, 1].
#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    neg_xlog2x(x) + neg_xlog2x(1.0 - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of the `keep` subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    let m = rho.matrix();
    if m.dim() != 4 {
        return Err(QcorrError::InvalidInput(
            "partial trace expects a two-qubit state".into(),
        ));
    }
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let z: C64 = match keep {
                Subsystem::A => (0..2).map(|k| m.get(2 * i + k, 2 * j + k)).sum(),
                Subsystem::B => (0..2).map(|k| m.get(2 * k + i, 2 * k + j)).sum(),
            };
            out.set(i, j, z);
        }
    }
    DensityMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn singlet_vector() -> Vec<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![c(0.0), c(s), c(-s), c(0.0)]
    }

    #[test]
    fn kron_identity_and_paulis() {
        let id = Pauli::I.matrix();
        assert_eq!(kron(&id, &id).unwrap(), ComplexMatrix::identity(4));
        let zi = kron(&Pauli::Z.matrix(), &id).unwrap();
        assert_eq!(zi, ComplexMatrix::diag(&[1.0, 1.0, -1.0, -1.0]).unwrap());
        let xx = kron(&Pauli::X.matrix(), &Pauli::X.matrix()).unwrap();
        let anti = ComplexMatrix::from_real(
            4,
            &[
                0., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0., 0.,
            ],
        )
        .unwrap();
        assert_eq!(xx, anti);
    }

    #[test]
    fn kron_rejects_wrong_dimension() {
        let id4 = ComplexMatrix::identity(4);
        assert!(matches!(
            kron(&id4, &Pauli::X.matrix()),
            Err(QcorrError::InvalidInput(_))
        ));
    }

    #[test]
    fn matrix_dimension_checked() {
        assert!(ComplexMatrix::new(3, vec![ZERO; 9]).is_err());
        assert!(ComplexMatrix::new(2, vec![ZERO; 3]).is_err());
    }

    #[test]
    fn x_state_examples() {
        let mixed = x_state_from_params(&XParams::maximally_mixed()).unwrap();
        assert!(
            mixed
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale(c(0.25)))
                < 1e-15
        );

        let singlet = x_state_from_params(&XParams::singlet()).unwrap();
        let expected = DensityMatrix::pure(&singlet_vector()).unwrap();
        assert!(singlet.matrix().max_abs_diff(expected.matrix()) < 1e-15);

        let q = 0.8;
        let rho_q = x_state_from_params(&XParams::werner_like_q(q).unwrap()).unwrap();
        let psi_minus = expected.matrix().scale(c(q));
        let mut zero_zero = ComplexMatrix::zeros(4);
        zero_zero.set(0, 0, c(1.0 - q));
        assert!(rho_q.matrix().max_abs_diff(&(&psi_minus + &zero_zero)) < 1e-15);
    }

    #[test]
    fn x_state_rejects_non_states() {
        // inside the box but not positive
        let err = x_state_from_params(&XParams {
            a: 0.0,
            b: 0.0,
            cx: 1.0,
            cy: 1.0,
            cz: 1.0,
        })
        .unwrap_err();
        match err {
            QcorrError::InvalidState { min_eigenvalue } => {
                assert!((min_eigenvalue + 0.5).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            XParams::new(1.5, 0.0, 0.0, 0.0, 0.0),
            Err(QcorrError::InvalidInput(_))
        ));
    }

    #[test]
    fn params_round_trip_examples() {
        let mixed = x_state_from_params(&XParams::maximally_mixed()).unwrap();
        assert_eq!(
            params_from_density(&mixed).unwrap(),
            XParams::maximally_mixed()
        );
        let singlet = DensityMatrix::pure(&singlet_vector()).unwrap();
        let p = params_from_density(&singlet).unwrap();
        for (x, y) in p.as_array().iter().zip(XParams::singlet().as_array()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn params_from_density_rejects_non_x() {
        let plus = vec![c(0.5); 4];
        let rho = DensityMatrix::pure(&plus).unwrap();
        match params_from_density(&rho) {
            Err(QcorrError::NotXShape { entries }) => {
                assert!(entries.contains(&(0, 1)));
                assert!(!entries.contains(&(0, 3)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eigenvalues_examples() {
        let d = ComplexMatrix::diag(&[0.1, 0.4, 0.2, 0.3]).unwrap();
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![0.4, 0.3, 0.2, 0.1]);

        let p = XParams {
            a: 0.5,
            b: 0.3,
            cx: 0.2,
            cy: 0.1,
            cz: 0.4,
        };
        let rho = ComplexMatrix::new(4, {
            // assemble without validation; this point may or may not be physical
            let mut m = ComplexMatrix::zeros(4);
            m.set(0, 0, c((1.0 + p.a + p.b + p.cz) / 4.0));
            m.set(1, 1, c((1.0 + p.a - p.b - p.cz) / 4.0));
            m.set(2, 2, c((1.0 - p.a + p.b - p.cz) / 4.0));
            m.set(3, 3, c((1.0 - p.a - p.b + p.cz) / 4.0));
            m.set(0, 3, c((p.cx - p.cy) / 4.0));
            m.set(3, 0, c((p.cx - p.cy) / 4.0));
            m.set(1, 2, c((p.cx + p.cy) / 4.0));
            m.set(2, 1, c((p.cx + p.cy) / 4.0));
            m.entries
        })
        .unwrap();
        let mut expected = p.block_spectrum().to_vec();
        sort_descending(&mut expected);
        let got = hermitian_eigenvalues(&rho).unwrap();
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-10, "{got:?} vs {expected:?}");
        }

        let singlet = x_state_from_params(&XParams::singlet()).unwrap();
        let s = hermitian_eigenvalues(singlet.matrix()).unwrap();
        for (g, e) in s.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(hermitian_eigenvalues(&m).is_err());
    }

    #[test]
    fn eigenvectors_diagonalize_complex_matrix() {
        let mut m = ComplexMatrix::zeros(4);
        let vals = [
            [
                c(0.3),
                C64::new(0.1, 0.2),
                C64::new(-0.05, 0.0),
                C64::new(0.0, 0.07),
            ],
            [
                C64::new(0.1, -0.2),
                c(0.25),
                C64::new(0.02, 0.03),
                C64::new(0.01, 0.0),
            ],
            [
                C64::new(-0.05, 0.0),
                C64::new(0.02, -0.03),
                c(0.2),
                C64::new(0.0, -0.1),
            ],
            [
                C64::new(0.0, -0.07),
                C64::new(0.01, 0.0),
                C64::new(0.0, 0.1),
                c(0.25),
            ],
        ];
        for (i, row) in vals.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                m.set(i, j, z);
            }
        }
        let (values, vecs) = hermitian_eigen(&m).unwrap();
        let recon = &(&vecs * &ComplexMatrix::diag(&values).unwrap()) * &vecs.adjoint();
        assert!(recon.max_abs_diff(&m) < 1e-13);
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        assert!((values.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn entropy_examples() {
        let mixed = x_state_from_params(&XParams::maximally_mixed()).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 2.0).abs() < 1e-12);
        let singlet = x_state_from_params(&XParams::singlet()).unwrap();
        assert!(von_neumann_entropy(&singlet).unwrap().abs() < 1e-12);
        let rho_q = x_state_from_params(&XParams::werner_like_q(0.8).unwrap()).unwrap();
        let s = von_neumann_entropy(&rho_q).unwrap();
        assert!((s - 0.721_928_094_887_362_3).abs() < 1e-12, "{s}");
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        assert!(matches!(
            spectrum_entropy(&[0.6, 0.5, -0.1]),
            Err(QcorrError::InvalidState { .. })
        ));
        assert_eq!(spectrum_entropy(&[1.0, -1e-12]).unwrap(), 0.0);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let h = binary_entropy(0.8).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::diag(&[0.8, 0.2]).unwrap()).unwrap();
        assert!((h - 0.721_928_094_887_362_3).abs() < 1e-15);
        assert!((h - von_neumann_entropy(&rho).unwrap()).abs() < 1e-15);
        assert!(binary_entropy(1.0 + 1e-13).is_ok());
        assert!(binary_entropy(-0.01).is_err());
        assert!(binary_entropy(1.01).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let singlet = x_state_from_params(&XParams::singlet()).unwrap();
        let ra = partial_trace(&singlet, Subsystem::A).unwrap();
        assert!(
            ra.matrix()
                .max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5]).unwrap())
                < 1e-15
        );

        let p = XParams::new(0.6, 0.1, 0.1, 0.05, 0.2).unwrap();
        let ra = partial_trace(&x_state_from_params(&p).unwrap(), Subsystem::A).unwrap();
        assert!(
            ra.matrix()
                .max_abs_diff(&ComplexMatrix::diag(&[0.8, 0.2]).unwrap())
                < 1e-15
        );

        let rho_q = x_state_from_params(&XParams::werner_like_q(0.8).unwrap()).unwrap();
        let rb = partial_trace(&rho_q, Subsystem::B).unwrap();
        assert!(
            rb.matrix()
                .max_abs_diff(&ComplexMatrix::diag(&[0.6, 0.4]).unwrap())
                < 1e-15
        );
    }

    #[test]
    fn matrix_json_layout() {
        let m = Pauli::Y.matrix();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"dim":2,"re":[0.0,0.0,0.0,0.0],"im":[0.0,-1.0,1.0,0.0]}"#
        );
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"dim":3,"re":[],"im":[]}"#).is_err());
    }
}
