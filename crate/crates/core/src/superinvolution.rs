//! Superinvolutions of M_{n,m}: the orthosymplectic and transpose-like
//! families, tensor products of involutions, and the axiom checks.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::CycScalar;
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::supermatrix::{super_transpose, Parity, SuperError, SuperSignature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("Φ must be {expected}x{expected}, got {rows}x{cols}")]
    PhiShape { expected: usize, rows: usize, cols: usize },
    #[error("Φ is singular")]
    SingularPhi,
    #[error("Φ has a nonzero entry at ({row},{col}) mixing parities")]
    PhiNotEven { row: usize, col: usize },
    #[error("Φ₀ is not symmetric")]
    PhiEvenNotSymmetric,
    #[error("Φ₁ is not skew-symmetric")]
    PhiOddNotSkew,
    #[error("orthosymplectic form needs an even odd-dimension, got m={0}")]
    OddSymplecticDimension(usize),
    #[error("transpose-like involution needs signature (n,n), got {0}")]
    UnbalancedSignature(String),
    #[error("map size {found} does not match signature size {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("not a superinvolution: {0}")]
    Axiom(AxiomViolation),
    #[error(transparent)]
    Super(#[from] SuperError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The first superinvolution axiom that fails, on matrix units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum AxiomViolation {
    /// The image of E_ij is not homogeneous of the parity of E_ij.
    Parity { unit: (usize, usize) },
    /// E_ij** ≠ E_ij.
    Order { unit: (usize, usize) },
    /// (ab)* ≠ (-1)^{|a||b|} b*a* for a = E_ij, b = E_kl.
    Antimultiplicative { left: (usize, usize), right: (usize, usize) },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Parity { unit } => write!(f, "image of E{:?} has the wrong parity", unit),
            AxiomViolation::Order { unit } => write!(f, "E{:?}** != E{:?}", unit, unit),
            AxiomViolation::Antimultiplicative { left, right } => {
                write!(f, "(ab)* != ±b*a* for a=E{:?}, b=E{:?}", left, right)
            }
        }
    }
}

type Sparse = Vec<(usize, CycScalar)>;

/// A linear endomorphism of the matrix space, stored as the sparse images
/// of the matrix units E_ij (index i*size + j).
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap {
    size: usize,
    images: Vec<Sparse>,
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearMap(M_{})", self.size)
    }
}

fn to_sparse(m: &Matrix) -> Sparse {
    m.entries()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, v.clone()))
        .collect()
}

fn sparse_to_matrix(size: usize, s: &Sparse) -> Matrix {
    let mut m = Matrix::zeros(size, size);
    for (k, v) in s {
        m.set(k / size, k % size, v.clone());
    }
    m
}

fn sparse_mul(size: usize, a: &Sparse, b: &Sparse) -> Sparse {
    let mut acc: BTreeMap<usize, CycScalar> = BTreeMap::new();
    for (p, x) in a {
        let (r, s) = (p / size, p % size);
        for (q, y) in b {
            if q / size == s {
                let slot = acc.entry(r * size + q % size).or_insert_with(CycScalar::zero);
                *slot += &(x * y);
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn sparse_eq(a: &Sparse, b: &Sparse) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0 && x.1 == y.1)
}

impl LinearMap {
    pub fn from_fn(size: usize, f: impl Fn(&Matrix) -> Matrix) -> Self {
        let images = (0..size * size)
            .map(|k| to_sparse(&f(&Matrix::unit(size, k / size, k % size))))
            .collect();
        Self { size, images }
    }

    pub fn identity(size: usize) -> Self {
        Self {
            size,
            images: (0..size * size).map(|k| vec![(k, CycScalar::one())]).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit_image(&self, i: usize, j: usize) -> Matrix {
        sparse_to_matrix(self.size, &self.images[i * self.size + j])
    }

    /// Nonzero entries (flat index, value) of the image of E_ij.
    pub fn unit_image_entries(&self, i: usize, j: usize) -> &[(usize, CycScalar)] {
        &self.images[i * self.size + j]
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        let mut acc = vec![CycScalar::zero(); self.size * self.size];
        for (k, v) in x.entries().iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (p, c) in &self.images[k] {
                acc[*p] += &(v * c);
            }
        }
        Matrix::from_flat(self.size, self.size, acc).expect("square")
    }

    fn apply_sparse(&self, x: &Sparse) -> Sparse {
        let mut acc: BTreeMap<usize, CycScalar> = BTreeMap::new();
        for (k, v) in x {
            for (p, c) in &self.images[*k] {
                *acc.entry(*p).or_insert_with(CycScalar::zero) += &(v * c);
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// self ∘ other
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            size: self.size,
            images: other.images.iter().map(|s| self.apply_sparse(s)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, s)| s.len() == 1 && s[0].0 == k && s[0].1.is_one())
    }

    /// The (size²)×(size²) matrix whose column k is the flattened image of unit k.
    pub fn to_matrix(&self) -> Matrix {
        let d = self.size * self.size;
        let mut m = Matrix::zeros(d, d);
        for (k, s) in self.images.iter().enumerate() {
            for (p, v) in s {
                m.set(*p, k, v.clone());
            }
        }
        m
    }

    /// {X : T(X) = λX}.
    pub fn eigenspace(&self, lambda: &CycScalar) -> Subspace {
        let d = self.size * self.size;
        let shifted = self.to_matrix().sub(&Matrix::identity(d).scale(lambda)).expect("square");
        shifted.nullspace()
    }

    /// X ↦ S⁻¹ T(X) S.
    pub fn conjugated(&self, s: &Matrix) -> Result<Self, LinalgError> {
        let s_inv = s.inverse()?;
        let size = self.size;
        Ok(Self::from_fn(size, |x| {
            let t = self.apply(x);
            s_inv.mul(&t).and_then(|y| y.mul(s)).expect("square")
        }))
    }

    /// outer ⊗ inner acting on Kronecker products, outer indexing the blocks.
    pub fn kronecker(outer: &Self, inner: &Self) -> Self {
        let (a, b) = (outer.size, inner.size);
        let size = a * b;
        let mut images = vec![Vec::new(); size * size];
        for i in 0..a {
            for j in 0..a {
                let oi = outer.unit_image(i, j);
                for k in 0..b {
                    for l in 0..b {
                        let ii = inner.unit_image(k, l);
                        let unit = (i * b + k) * size + (j * b + l);
                        images[unit] = to_sparse(&oi.kronecker(&ii));
                    }
                }
            }
        }
        Self { size, images }
    }

    /// Whether T maps `space` into itself.
    pub fn preserves(&self, space: &Subspace) -> Result<bool, LinalgError> {
        for b in space.basis_matrices() {
            if !space.contains_matrix(&self.apply(&b))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The image T(space).
    pub fn image_of(&self, space: &Subspace) -> Result<Subspace, LinalgError> {
        let mats: Vec<Matrix> = space.basis_matrices().iter().map(|b| self.apply(b)).collect();
        Subspace::span_matrices(space.ambient(), &mats)
    }
}

/// Check the three superinvolution axioms on matrix units.
pub fn check_axioms(sig: &SuperSignature, map: &LinearMap) -> Result<(), AxiomViolation> {
    let n = sig.size();
    assert_eq!(n, map.size(), "signature and map sizes differ");
    for i in 0..n {
        for j in 0..n {
            let want = sig.unit_parity(i, j);
            if map.images[i * n + j]
                .iter()
                .any(|(p, _)| sig.unit_parity(p / n, p % n) != want)
            {
                return Err(AxiomViolation::Parity { unit: (i, j) });
            }
        }
    }
    for k in 0..n * n {
        let twice = map.apply_sparse(&map.images[k]);
        if !(twice.len() == 1 && twice[0].0 == k && twice[0].1.is_one()) {
            return Err(AxiomViolation::Order { unit: (k / n, k % n) });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let a_star = &map.images[i * n + j];
            for k in 0..n {
                for l in 0..n {
                    let b_star = &map.images[k * n + l];
                    // (E_ij E_kl)* = δ_jk E_il*
                    let lhs: Sparse = if j == k { map.images[i * n + l].clone() } else { Vec::new() };
                    let sign = sig.unit_parity(i, j).sign(sig.unit_parity(k, l));
                    let mut rhs = sparse_mul(n, b_star, a_star);
                    if sign < 0 {
                        for e in rhs.iter_mut() {
                            e.1 = -&e.1;
                        }
                    }
                    if !sparse_eq(&lhs, &rhs) {
                        return Err(AxiomViolation::Antimultiplicative {
                            left: (i, j),
                            right: (k, l),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// X ↦ Φ⁻¹ X^τ Φ, with no conditions on Φ beyond invertibility.
pub fn osp_formula(sig: &SuperSignature, phi: &Matrix) -> Result<LinearMap, InvolutionError> {
    check_phi_shape(sig, phi)?;
    let inv = phi.inverse().map_err(|_| InvolutionError::SingularPhi)?;
    Ok(LinearMap::from_fn(sig.size(), |x| {
        inv.mul(&super_transpose(sig, x)).and_then(|y| y.mul(phi)).expect("square")
    }))
}

/// [[A,B],[C,D]] ↦ [[D^t,-B^t],[C^t,A^t]] on M_{n,n}.
pub fn trp_formula(sig: &SuperSignature) -> Result<LinearMap, InvolutionError> {
    let n = balanced(sig)?;
    Ok(LinearMap::from_fn(2 * n, |x| {
        let mut out = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let a = x.get(j, i).clone();
                let b = x.get(j, n + i);
                let c = x.get(n + j, i).clone();
                let d = x.get(n + j, n + i).clone();
                out.set(i, j, d);
                out.set(i, n + j, -b);
                out.set(n + i, j, c);
                out.set(n + i, n + j, a);
            }
        }
        out
    }))
}

fn balanced(sig: &SuperSignature) -> Result<usize, InvolutionError> {
    match sig.as_standard() {
        Some((n, m)) if n == m => Ok(n),
        _ => Err(InvolutionError::UnbalancedSignature(sig.to_string())),
    }
}

fn check_phi_shape(sig: &SuperSignature, phi: &Matrix) -> Result<(), InvolutionError> {
    if phi.rows() != sig.size() || phi.cols() != sig.size() {
        return Err(InvolutionError::PhiShape {
            expected: sig.size(),
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    Ok(())
}

/// Φ even, invertible, Φ₀ symmetric and Φ₁ skew.
pub fn validate_osp_phi(sig: &SuperSignature, phi: &Matrix) -> Result<(), InvolutionError> {
    check_phi_shape(sig, phi)?;
    let n = sig.size();
    for i in 0..n {
        for j in 0..n {
            if sig.parity(i) != sig.parity(j) && !phi.get(i, j).is_zero() {
                return Err(InvolutionError::PhiNotEven { row: i, col: j });
            }
        }
    }
    if !phi.is_invertible() {
        return Err(InvolutionError::SingularPhi);
    }
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (phi.get(i, j), phi.get(j, i));
            match sig.parity(i) {
                Parity::Even if a != b => return Err(InvolutionError::PhiEvenNotSymmetric),
                Parity::Odd if *a != -b => return Err(InvolutionError::PhiOddNotSkew),
                _ => {}
            }
        }
    }
    Ok(())
}

/// diag(I_n, Q) with Q = [[0, I_{m/2}], [-I_{m/2}, 0]].
pub fn canonical_osp_phi(n: usize, m: usize) -> Result<Matrix, InvolutionError> {
    if m % 2 != 0 {
        return Err(InvolutionError::OddSymplecticDimension(m));
    }
    let h = m / 2;
    let mut phi = Matrix::identity(n + m);
    for i in 0..m {
        phi.set(n + i, n + i, CycScalar::zero());
    }
    for i in 0..h {
        phi.set(n + i, n + h + i, CycScalar::one());
        phi.set(n + h + i, n + i, CycScalar::from_int(-1));
    }
    Ok(phi)
}

/// The flip [[0, I_n], [I_n, 0]].
pub fn flip_phi(n: usize) -> Matrix {
    let mut phi = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        phi.set(i, n + i, CycScalar::one());
        phi.set(n + i, i, CycScalar::one());
    }
    phi
}

/// Φ pairing consecutive blocks: each pair (p, p) of even blocks gets
/// [[0,I],[I,0]] and each pair (q, q) of odd blocks gets [[0,I],[-I,0]].
/// Requires even r and p_{2k-1} = p_{2k}, q_{2k-1} = q_{2k}.
pub fn paired_phi(p: &[usize], q: &[usize]) -> Option<Matrix> {
    if p.len() != q.len() || p.len() % 2 != 0 {
        return None;
    }
    let (n, m): (usize, usize) = (p.iter().sum(), q.iter().sum());
    let mut phi = Matrix::zeros(n + m, n + m);
    let mut offset = 0;
    for pair in p.chunks(2) {
        if pair[0] != pair[1] {
            return None;
        }
        for i in 0..pair[0] {
            phi.set(offset + i, offset + pair[0] + i, CycScalar::one());
            phi.set(offset + pair[0] + i, offset + i, CycScalar::one());
        }
        offset += 2 * pair[0];
    }
    for pair in q.chunks(2) {
        if pair[0] != pair[1] {
            return None;
        }
        for i in 0..pair[0] {
            phi.set(offset + i, offset + pair[0] + i, CycScalar::one());
            phi.set(offset + pair[0] + i, offset + i, CycScalar::from_int(-1));
        }
        offset += 2 * pair[0];
    }
    Some(phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvolutionKind {
    Osp,
    Trp,
    Exchange,
    Tensor,
    Conjugate,
    Custom,
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvolutionKind::Osp => "osp",
            InvolutionKind::Trp => "trp",
            InvolutionKind::Exchange => "exchange",
            InvolutionKind::Tensor => "tensor",
            InvolutionKind::Conjugate => "conjugate",
            InvolutionKind::Custom => "custom",
        };
        write!(f, "{s}")
    }
}

/// A map that has passed the superinvolution axioms.
#[derive(Debug, Clone)]
pub struct Superinvolution {
    kind: InvolutionKind,
    sig: SuperSignature,
    phi: Option<Matrix>,
    map: LinearMap,
}

impl Superinvolution {
    /// Validate an arbitrary map.
    pub fn from_map(kind: InvolutionKind, sig: &SuperSignature, map: LinearMap) -> Result<Self, InvolutionError> {
        if map.size() != sig.size() {
            return Err(InvolutionError::SizeMismatch {
                expected: sig.size(),
                found: map.size(),
            });
        }
        check_axioms(sig, &map).map_err(InvolutionError::Axiom)?;
        Ok(Self {
            kind,
            sig: sig.clone(),
            phi: None,
            map,
        })
    }

    pub fn osp(sig: &SuperSignature, phi: Matrix) -> Result<Self, InvolutionError> {
        Self::osp_kind(InvolutionKind::Osp, sig, phi)
    }

    fn osp_kind(kind: InvolutionKind, sig: &SuperSignature, phi: Matrix) -> Result<Self, InvolutionError> {
        validate_osp_phi(sig, &phi)?;
        let map = osp_formula(sig, &phi)?;
        let mut s = Self::from_map(kind, sig, map)?;
        s.phi = Some(phi);
        Ok(s)
    }

    /// The orthosymplectic superinvolution with Φ = diag(I_n, Q).
    pub fn canonical_osp(sig: &SuperSignature) -> Result<Self, InvolutionError> {
        let (n, m) = sig.as_standard().ok_or(SuperError::NotStandard)?;
        Self::osp(sig, canonical_osp_phi(n, m)?)
    }

    /// The ordinary transpose on a purely even signature.
    pub fn transpose(d: usize) -> Result<Self, InvolutionError> {
        let sig = SuperSignature::trivial(d)?;
        Self::osp(&sig, Matrix::identity(d))
    }

    pub fn trp(sig: &SuperSignature) -> Result<Self, InvolutionError> {
        let map = trp_formula(sig)?;
        Self::from_map(InvolutionKind::Trp, sig, map)
    }

    /// The orthosymplectic-form map for a Φ that pairs two copies of a space.
    pub fn exchange(sig: &SuperSignature, phi: Matrix) -> Result<Self, InvolutionError> {
        Self::osp_kind(InvolutionKind::Exchange, sig, phi)
    }

    /// (a ⊗ b)* = a* ⊗ b*, with `outer` indexing the Kronecker blocks.
    /// At least one factor should be purely even for this to be a superinvolution.
    pub fn tensor(outer: &Self, inner: &Self) -> Result<Self, InvolutionError> {
        let sig = outer.sig.tensor(&inner.sig);
        let map = LinearMap::kronecker(&outer.map, &inner.map);
        Self::from_map(InvolutionKind::Tensor, &sig, map)
    }

    /// X ↦ S⁻¹ X* S, kept only if it is again a superinvolution.
    pub fn conjugated(&self, s: &Matrix) -> Result<Self, InvolutionError> {
        let map = self.map.conjugated(s).map_err(|_| InvolutionError::SingularPhi)?;
        Self::from_map(InvolutionKind::Conjugate, &self.sig, map)
    }

    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    pub fn signature(&self) -> &SuperSignature {
        &self.sig
    }

    pub fn phi(&self) -> Option<&Matrix> {
        self.phi.as_ref()
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn apply_matrix(&self, x: &Matrix) -> Matrix {
        self.map.apply(x)
    }

    /// Re-run the axiom checks.
    pub fn check_axioms(&self) -> Result<(), AxiomViolation> {
        check_axioms(&self.sig, &self.map)
    }

    fn split(&self, sign: i64) -> Subspace {
        let n = self.sig.size();
        let vecs = (0..n * n)
            .map(|k| {
                let e = Matrix::unit(n, k / n, k % n);
                let t = self.map.apply(&e);
                if sign > 0 { e.add(&t) } else { e.sub(&t) }.expect("square").flatten()
            })
            .collect();
        Subspace::span(n * n, vecs).expect("square")
    }

    /// H = {x : x* = x}, spanned by the x + x*.
    pub fn h_space(&self) -> Subspace {
        self.split(1)
    }

    /// K = {x : x* = -x}, spanned by the x - x*.
    pub fn k_space(&self) -> Subspace {
        self.split(-1)
    }
}

/// The parity automorphism X ↦ PXP.
pub fn parity_map(sig: &SuperSignature) -> LinearMap {
    let p = sig.parity_matrix();
    LinearMap::from_fn(sig.size(), |x| p.mul(x).and_then(|y| y.mul(&p)).expect("square"))
}

/// Whether φ(x R y) ⊆ φ(y) R φ(x), with R = M_{n,m} spanned by matrix units.
pub fn antiauto_containment(map: &LinearMap, x: &Matrix, y: &Matrix) -> Result<bool, LinalgError> {
    let n = map.size();
    let (px, py) = (map.apply(x), map.apply(y));
    let mut left = Vec::with_capacity(n * n);
    let mut right = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let e = Matrix::unit(n, i, j);
            left.push(map.apply(&x.mul(&e)?.mul(y)?));
            right.push(py.mul(&e)?.mul(&px)?);
        }
    }
    let l = Subspace::span_matrices(n * n, &left)?;
    let r = Subspace::span_matrices(n * n, &right)?;
    l.is_subspace_of(&r)
}

/// H (fixed) or K (negated) part of an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Symmetric,
    Skew,
}

impl Part {
    pub fn sign(self) -> i64 {
        match self {
            Part::Symmetric => 1,
            Part::Skew => -1,
        }
    }
}

fn sub_block(x: &Matrix, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
    let mut b = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            b.set(i, j, x.get(r0 + i, c0 + j).clone());
        }
    }
    b
}

fn place(target: &mut Matrix, r0: usize, c0: usize, block: &Matrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target.set(r0 + i, c0 + j, block.get(i, j).clone());
        }
    }
}

/// The block description of H or K for X ↦ Φ⁻¹X^τΦ on a standard signature:
/// Φ₀⁻¹AᵗΦ₀ = ±A, Φ₁⁻¹DᵗΦ₁ = ±D, B free and C = ∓Φ₁⁻¹BᵗΦ₀.
pub fn osp_block_form(sig: &SuperSignature, phi: &Matrix, part: Part) -> Result<Subspace, InvolutionError> {
    let (n, m) = sig.as_standard().ok_or(InvolutionError::Super(SuperError::NotStandard))?;
    check_phi_shape(sig, phi)?;
    let size = n + m;
    let sign = CycScalar::from_int(part.sign());
    let mut mats = Vec::new();
    let mut diagonal = |offset: usize, d: usize| -> Result<(), InvolutionError> {
        if d == 0 {
            return Ok(());
        }
        let f = sub_block(phi, offset, offset, d, d);
        let f_inv = f.inverse().map_err(|_| InvolutionError::SingularPhi)?;
        let adj = LinearMap::from_fn(d, |a| f_inv.mul(&a.transpose()).and_then(|y| y.mul(&f)).expect("square"));
        for a in adj.eigenspace(&sign).basis_matrices() {
            let mut x = Matrix::zeros(size, size);
            place(&mut x, offset, offset, &a);
            mats.push(x);
        }
        Ok(())
    };
    diagonal(0, n)?;
    diagonal(n, m)?;
    if n > 0 && m > 0 {
        let phi0 = sub_block(phi, 0, 0, n, n);
        let phi1 = sub_block(phi, n, n, m, m);
        let phi1_inv = phi1.inverse().map_err(|_| InvolutionError::SingularPhi)?;
        let minus_sign = CycScalar::from_int(-part.sign());
        for i in 0..n {
            for j in 0..m {
                let b = Matrix::unit_rect(n, m, i, j);
                let c = phi1_inv.mul(&b.transpose())?.mul(&phi0)?.scale(&minus_sign);
                let mut x = Matrix::zeros(size, size);
                place(&mut x, 0, n, &b);
                place(&mut x, n, 0, &c);
                mats.push(x);
            }
        }
    }
    Ok(Subspace::span_matrices(size * size, &mats)?)
}

/// The block description of H or K for the transpose-like map on M_{n,n}:
/// H = [[A, B], [C, Aᵗ]] with B skew and C symmetric,
/// K = [[A, B], [C, -Aᵗ]] with B symmetric and C skew.
pub fn trp_block_form(n: usize, part: Part) -> Subspace {
    let size = 2 * n;
    let s = part.sign();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut x = Matrix::zeros(size, size);
            x.set(i, j, CycScalar::one());
            x.set(n + j, n + i, CycScalar::from_int(s));
            mats.push(x);
        }
    }
    // Off-diagonal blocks: (B, C) = (skew, symmetric) for H and the reverse for K.
    for (r0, c0, sym) in [(0, n, s < 0), (n, 0, s > 0)] {
        for i in 0..n {
            for j in i..n {
                if i == j && !sym {
                    continue;
                }
                let mut x = Matrix::zeros(size, size);
                x.set(r0 + i, c0 + j, CycScalar::one());
                if i != j {
                    x.set(r0 + j, c0 + i, CycScalar::from_int(if sym { 1 } else { -1 }));
                }
                mats.push(x);
            }
        }
    }
    Subspace::span_matrices(size * size, &mats).expect("square")
}
