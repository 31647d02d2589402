//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here is deliberately minimal: row-major square matrices,
//! coordinate vectors in the number basis, and certified structural tags.
//! Operators that are functions of a hermitian observable are built from a
//! known eigenframe with [`spectral_synthesize`]; there is no general
//! eigensolver or matrix exponential.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Comparison tolerances. Defaults scale linearly with the dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Element-wise comparisons of vectors and scalars.
    pub tol_elem: f64,
    /// Norm checks on states.
    pub tol_norm: f64,
    /// Whole-operator comparisons (max-modulus of a difference).
    pub tol_op: f64,
}

impl TolerancePolicy {
    pub fn new(tol_elem: f64, tol_norm: f64, tol_op: f64) -> Result<Self> {
        for t in [tol_elem, tol_norm, tol_op] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(Self {
            tol_elem,
            tol_norm,
            tol_op,
        })
    }

    pub fn for_dim(dim: usize) -> Self {
        let d = dim.max(1) as f64;
        Self {
            tol_elem: 1e-12 * d,
            tol_norm: 1e-12 * d,
            tol_op: 1e-11 * d,
        }
    }
}

/// Wraps an angle into (-π, π]. Angles within 1e-12 of -π land on +π so
/// that a computed `e^{-iπ}` reports the same phase as `-1`.
pub fn wrap_phase(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a <= -PI + 1e-12 {
        a += 2.0 * PI;
    }
    a
}

/// Distance between two angles on the circle, in [0, π].
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

fn check_finite(values: &[C64], what: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A state in number-basis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amp: Vec<C64>,
}

impl StateVector {
    pub fn new(amp: Vec<C64>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_finite(&amp, "state amplitudes")?;
        Ok(Self { amp })
    }

    /// Number state `|n⟩`.
    ///
    /// Panics if `n >= dim`.
    pub fn basis(dim: usize, n: usize) -> Self {
        assert!(n < dim, "basis index {n} out of range for dim {dim}");
        let mut amp = vec![ZERO; dim];
        amp[n] = ONE;
        Self { amp }
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amp(&self) -> &[C64] {
        &self.amp
    }

    pub fn into_amp(self) -> Vec<C64> {
        self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: &TolerancePolicy) -> bool {
        (self.norm() - 1.0).abs() <= tol.tol_norm
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            amp: self.amp.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest element-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &StateVector) -> Result<OperatorMatrix> {
        same_dim(self.dim(), other.dim())?;
        let dim = self.dim();
        Ok(OperatorMatrix::from_fn(dim, |r, c| {
            self.amp[r] * other.amp[c].conj()
        }))
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// Structural property that can be certified on an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Hermitian,
    Unitary,
    Diagonal,
}

impl Tag {
    pub const ALL: [Tag; 3] = [Tag::Hermitian, Tag::Unitary, Tag::Diagonal];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Hermitian => "hermitian",
            Tag::Unitary => "unitary",
            Tag::Diagonal => "diagonal",
        }
    }

    fn bit(self) -> u8 {
        match self {
            Tag::Hermitian => 1,
            Tag::Unitary => 2,
            Tag::Diagonal => 4,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct TagSet(u8);

impl TagSet {
    fn contains(self, tag: Tag) -> bool {
        self.0 & tag.bit() != 0
    }
    fn insert(&mut self, tag: Tag) {
        self.0 |= tag.bit();
    }
}

/// Result of certifying a structural tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certification {
    pub holds: bool,
    pub deviation: f64,
}

/// Dense square complex matrix, row-major.
///
/// Tags are only ever attached after the corresponding predicate has been
/// checked numerically; arithmetic drops them (except diagonal·diagonal).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    data: Vec<C64>,
    tags: TagSet,
}

impl OperatorMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self {
            dim,
            data,
            tags: TagSet::default(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            same_dim(dim, row.len())?;
            data.extend(row);
        }
        check_finite(&data, "operator entries")?;
        Ok(Self {
            dim,
            data,
            tags: TagSet::default(),
        })
    }

    /// Real-valued convenience constructor, mostly for tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO });
        for tag in Tag::ALL {
            m.tags.insert(tag);
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::from_fn(entries.len(), |r, c| if r == c { entries[r] } else { ZERO });
        m.tags.insert(Tag::Diagonal);
        m
    }

    pub fn scalar(dim: usize, value: C64) -> Self {
        Self::diagonal(&vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
        self.tags = TagSet::default();
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim)
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn column(&self, col: usize) -> StateVector {
        StateVector {
            amp: (0..self.dim).map(|r| self.get(r, col)).collect(),
        }
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(tag)
    }

    pub fn tags(&self) -> Vec<Tag> {
        Tag::ALL.into_iter().filter(|t| self.has_tag(*t)).collect()
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        same_dim(self.dim, v.dim())?;
        let amp = self
            .rows()
            .map(|row| row.iter().zip(&v.amp).map(|(m, x)| m * x).sum())
            .collect();
        Ok(StateVector { amp })
    }

    pub fn mul(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        same_dim(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        if self.has_tag(Tag::Diagonal) && rhs.has_tag(Tag::Diagonal) {
            out.tags.insert(Tag::Diagonal);
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        let mut out = Self::from_fn(self.dim, |r, c| self.get(c, r).conj());
        out.tags = self.tags;
        out
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &OperatorMatrix,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<OperatorMatrix> {
        same_dim(self.dim, rhs.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
            tags: TagSet::default(),
        })
    }

    pub fn scaled(&self, factor: C64) -> OperatorMatrix {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
            tags: TagSet::default(),
        }
    }

    /// `self^k` by repeated multiplication; `k = 0` gives the identity.
    pub fn pow(&self, k: usize) -> OperatorMatrix {
        let mut acc = Self::identity(self.dim);
        acc.tags = TagSet::default();
        for _ in 0..k {
            acc = acc.mul(self).expect("square powers share a dimension");
        }
        acc
    }

    /// Largest element modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `V† M V`, i.e. the matrix elements `⟨v_r|M|v_c⟩` over a frame whose
    /// vectors are the columns of `frame`.
    pub fn in_frame(&self, frame: &OperatorMatrix) -> Result<OperatorMatrix> {
        frame.adjoint().mul(&self.mul(frame)?)
    }

    pub fn deviation(&self, tag: Tag) -> f64 {
        match tag {
            Tag::Hermitian => self
                .max_abs_diff(&self.adjoint())
                .expect("adjoint shares dimension"),
            Tag::Unitary => {
                let gram = self.adjoint().mul(self).expect("adjoint shares dimension");
                gram.max_abs_diff(&Self::identity(self.dim))
                    .expect("identity shares dimension")
            }
            Tag::Diagonal => {
                let mut worst = 0.0f64;
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        if r != c {
                            worst = worst.max(self.get(r, c).norm());
                        }
                    }
                }
                worst
            }
        }
    }

    /// Checks `tag` numerically and attaches it if the deviation is within
    /// `tol`. An already-attached tag that no longer holds is removed.
    pub fn certify(&mut self, tag: Tag, tol: f64) -> Certification {
        let deviation = self.deviation(tag);
        let holds = deviation <= tol;
        if holds {
            self.tags.insert(tag);
        } else {
            self.tags.0 &= !tag.bit();
        }
        Certification { holds, deviation }
    }

    /// Builder form of [`certify`](Self::certify) for several tags.
    pub fn certified(mut self, tags: &[Tag], tol: f64) -> Self {
        for &t in tags {
            self.certify(t, tol);
        }
        self
    }
}

/// Column matrix whose columns are the given vectors.
pub fn frame_matrix(vectors: &[StateVector]) -> Result<OperatorMatrix> {
    let dim = vectors.first().map(StateVector::dim).ok_or(Error::ZeroDimension)?;
    same_dim(dim, vectors.len())?;
    for v in vectors {
        same_dim(dim, v.dim())?;
    }
    Ok(OperatorMatrix::from_fn(dim, |r, c| vectors[c].amp[r]))
}

/// Max-modulus deviation of the Gram matrix `⟨v_i|v_j⟩` from the identity.
pub fn orthonormality_deviation(vectors: &[StateVector]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let expected = if i == j { ONE } else { ZERO };
            worst = worst.max((a.inner(b)? - expected).norm());
        }
    }
    Ok(worst)
}

pub fn mat_apply(m: &OperatorMatrix, v: &StateVector) -> Result<StateVector> {
    m.apply(v)
}

pub fn mat_mul(left: &OperatorMatrix, right: &OperatorMatrix) -> Result<OperatorMatrix> {
    left.mul(right)
}

pub fn adjoint(m: &OperatorMatrix) -> OperatorMatrix {
    m.adjoint()
}

pub fn certify(m: &mut OperatorMatrix, tag: Tag) -> Certification {
    let tol = TolerancePolicy::for_dim(m.dim()).tol_op;
    m.certify(tag, tol)
}

/// Outcome of comparing two states up to a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseComparison {
    pub equal: bool,
    /// `arg⟨u|v⟩` in (-π, π], present only when `equal`.
    pub phase: Option<f64>,
}

/// Decides whether `v = e^{iα} u` for some α, via the Cauchy-Schwarz bound
/// `|⟨u|v⟩| ≥ ‖u‖‖v‖(1 - tol)`.
pub fn equal_up_to_global_phase(
    u: &StateVector,
    v: &StateVector,
    tol: f64,
) -> Result<PhaseComparison> {
    let overlap = u.inner(v)?;
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let equal = overlap.norm() >= nu * nv * (1.0 - tol);
    Ok(PhaseComparison {
        equal,
        phase: equal.then(|| wrap_phase(overlap.arg())),
    })
}

/// `Σ_k λ_k |v_k⟩⟨v_k|` over an orthonormal, complete frame.
pub fn spectral_synthesize(eigvecs: &[StateVector], eigvals: &[C64]) -> Result<OperatorMatrix> {
    let dim = eigvecs.first().map(StateVector::dim).ok_or(Error::ZeroDimension)?;
    if eigvecs.len() != dim {
        return Err(Error::IncompleteFrame {
            count: eigvecs.len(),
            dim,
        });
    }
    if eigvals.len() != dim {
        return Err(Error::EigenvalueCount {
            count: eigvals.len(),
            dim,
        });
    }
    check_finite(eigvals, "eigenvalues")?;
    let tolerance = TolerancePolicy::for_dim(dim).tol_op;
    let deviation = orthonormality_deviation(eigvecs)?;
    if deviation > tolerance {
        return Err(Error::NotOrthonormal {
            deviation,
            tolerance,
        });
    }
    Ok(OperatorMatrix::from_fn(dim, |r, c| {
        eigvecs
            .iter()
            .zip(eigvals)
            .map(|(v, lambda)| lambda * v.amp[r] * v.amp[c].conj())
            .sum()
    }))
}
