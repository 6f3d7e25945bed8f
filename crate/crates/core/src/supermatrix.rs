//! The matrix superalgebra M_{n,m}: parity structure, the super products,
//! and sub-superalgebras given by a spanning subspace.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::CycScalar;
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::superinvolution::{InvolutionError, Superinvolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuperError {
    #[error("signature must have at least one row (n+m >= 1)")]
    EmptySignature,
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },
    #[error("matrix is {found}x{found}, signature needs {expected}x{expected}")]
    WrongSize { expected: usize, found: usize },
    #[error("the queer superalgebra needs n >= 1")]
    ZeroQueer,
    #[error("operation needs a standard (n,m) signature")]
    NotStandard,
    #[error("operation needs an associative view")]
    NotAssociative,
    #[error("exchange map failed its self-check: {0}")]
    ExchangeSelfCheck(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Involution(#[from] Box<InvolutionError>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// (-1)^{|a||b|}
    pub fn sign(self, other: Parity) -> i64 {
        if self == Parity::Odd && other == Parity::Odd {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// Parity of each row/column index. The standard M_{n,m} layout has the n
/// even indices first; other layouts arise from tensor products and the
/// interleaved block form of Type A gradings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperSignature {
    parities: Vec<Parity>,
}

impl SuperSignature {
    pub fn standard(n: usize, m: usize) -> Result<Self, SuperError> {
        if n + m == 0 {
            return Err(SuperError::EmptySignature);
        }
        let mut parities = vec![Parity::Even; n];
        parities.extend(std::iter::repeat(Parity::Odd).take(m));
        Ok(Self { parities })
    }

    pub fn from_parities(parities: Vec<Parity>) -> Result<Self, SuperError> {
        if parities.is_empty() {
            return Err(SuperError::EmptySignature);
        }
        Ok(Self { parities })
    }

    /// The purely even signature of an ordinary matrix algebra M_d.
    pub fn trivial(d: usize) -> Result<Self, SuperError> {
        Self::standard(d, 0)
    }

    pub fn size(&self) -> usize {
        self.parities.len()
    }

    /// Dimension of the matrix space, (n+m)².
    pub fn ambient_dim(&self) -> usize {
        self.size() * self.size()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn even_count(&self) -> usize {
        self.parities.iter().filter(|&&p| p == Parity::Even).count()
    }

    pub fn odd_count(&self) -> usize {
        self.size() - self.even_count()
    }

    /// (n, m) if the layout is the standard one.
    pub fn as_standard(&self) -> Option<(usize, usize)> {
        let n = self.even_count();
        let ok = self.parities[..n].iter().all(|&p| p == Parity::Even);
        ok.then_some((n, self.size() - n))
    }

    pub fn is_standard(&self) -> bool {
        self.as_standard().is_some()
    }

    /// n·m ≠ 0.
    pub fn is_nontrivial(&self) -> bool {
        self.even_count() > 0 && self.odd_count() > 0
    }

    /// Parity of the matrix unit E_ij.
    pub fn unit_parity(&self, i: usize, j: usize) -> Parity {
        self.parities[i] + self.parities[j]
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.parities[i] == Parity::Even).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.parities[i] == Parity::Odd).collect()
    }

    /// diag(±1), the matrix whose conjugation is the parity automorphism.
    pub fn parity_matrix(&self) -> Matrix {
        let n = self.size();
        let mut p = Matrix::zeros(n, n);
        for (i, par) in self.parities.iter().enumerate() {
            p.set(i, i, CycScalar::from_int(if *par == Parity::Even { 1 } else { -1 }));
        }
        p
    }

    /// The subspace of matrices of the given parity.
    pub fn parity_subspace(&self, parity: Parity) -> Subspace {
        let n = self.size();
        let vecs = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.unit_parity(i, j) == parity)
            .map(|(i, j)| Matrix::unit(n, i, j).flatten())
            .collect();
        Subspace::span(n * n, vecs).expect("unit vectors")
    }

    /// Layout of a Kronecker product with `self` as the outer factor.
    pub fn tensor(&self, inner: &Self) -> Self {
        let mut parities = Vec::with_capacity(self.size() * inner.size());
        for &a in &self.parities {
            for &b in &inner.parities {
                parities.push(a + b);
            }
        }
        Self { parities }
    }

    /// The layout obtained by sending index i to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut parities = vec![Parity::Even; self.size()];
        for (i, &p) in perm.iter().enumerate() {
            parities[p] = self.parities[i];
        }
        Self { parities }
    }

    pub fn check_matrix(&self, m: &Matrix) -> Result<(), SuperError> {
        if m.rows() != self.size() || m.cols() != self.size() {
            return Err(SuperError::WrongSize {
                expected: self.size(),
                found: m.rows(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for SuperSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_standard() {
            Some((n, m)) => write!(f, "({n},{m})"),
            None => {
                let s: String = self.parities.iter().map(|p| p.to_string()).collect();
                write!(f, "[{s}]")
            }
        }
    }
}

/// A matrix together with the super-signature that defines its blocks.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperMatrix {
    sig: SuperSignature,
    mat: Matrix,
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.sig, self.mat)
    }
}

impl SuperMatrix {
    pub fn new(sig: SuperSignature, mat: Matrix) -> Result<Self, SuperError> {
        sig.check_matrix(&mat)?;
        Ok(Self { sig, mat })
    }

    pub fn zero(sig: &SuperSignature) -> Self {
        Self {
            mat: Matrix::zeros(sig.size(), sig.size()),
            sig: sig.clone(),
        }
    }

    pub fn identity(sig: &SuperSignature) -> Self {
        Self {
            mat: Matrix::identity(sig.size()),
            sig: sig.clone(),
        }
    }

    pub fn unit(sig: &SuperSignature, i: usize, j: usize) -> Self {
        Self {
            mat: Matrix::unit(sig.size(), i, j),
            sig: sig.clone(),
        }
    }

    pub fn signature(&self) -> &SuperSignature {
        &self.sig
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    fn filter(&self, keep: Parity) -> Self {
        let n = self.sig.size();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if self.sig.unit_parity(i, j) == keep {
                    out.set(i, j, self.mat.get(i, j).clone());
                }
            }
        }
        Self {
            sig: self.sig.clone(),
            mat: out,
        }
    }

    pub fn even_part(&self) -> Self {
        self.filter(Parity::Even)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(Parity::Odd)
    }

    /// The parity of a homogeneous element; zero counts as even, mixed gives None.
    pub fn parity(&self) -> Option<Parity> {
        let even = self.odd_part().mat.is_zero();
        let odd = self.even_part().mat.is_zero();
        match (even, odd) {
            (true, _) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            (false, false) => None,
        }
    }

    fn same_sig(&self, other: &Self) -> Result<(), SuperError> {
        if self.sig != other.sig {
            return Err(SuperError::SignatureMismatch {
                left: self.sig.to_string(),
                right: other.sig.to_string(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SuperError> {
        self.same_sig(other)?;
        Ok(Self {
            sig: self.sig.clone(),
            mat: self.mat.mul(&other.mat)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SuperError> {
        self.same_sig(other)?;
        Ok(Self {
            sig: self.sig.clone(),
            mat: self.mat.add(&other.mat)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SuperError> {
        self.same_sig(other)?;
        Ok(Self {
            sig: self.sig.clone(),
            mat: self.mat.sub(&other.mat)?,
        })
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        Self {
            sig: self.sig.clone(),
            mat: self.mat.scale(s),
        }
    }

    /// [a,b] = ab - (-1)^{|a||b|} ba, extended bilinearly over homogeneous parts.
    pub fn supercommutator(&self, other: &Self) -> Result<Self, SuperError> {
        self.same_sig(other)?;
        Ok(Self {
            sig: self.sig.clone(),
            mat: supercommutator(&self.sig, &self.mat, &other.mat)?,
        })
    }

    /// a∘b = ½(ab + (-1)^{|a||b|} ba), extended bilinearly.
    pub fn jordan_superproduct(&self, other: &Self) -> Result<Self, SuperError> {
        self.same_sig(other)?;
        Ok(Self {
            sig: self.sig.clone(),
            mat: jordan_superproduct(&self.sig, &self.mat, &other.mat)?,
        })
    }
}

fn odd_filter(sig: &SuperSignature, m: &Matrix) -> Matrix {
    let n = sig.size();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if sig.unit_parity(i, j) == Parity::Odd {
                out.set(i, j, m.get(i, j).clone());
            }
        }
    }
    out
}

/// Supercommutator on plain matrices: ab - ba + 2·b₁a₁.
pub fn supercommutator(sig: &SuperSignature, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let b1a1 = odd_filter(sig, b).mul(&odd_filter(sig, a))?;
    ab.sub(&ba)?.add(&b1a1.scale(&CycScalar::from_int(2)))
}

/// Jordan superproduct on plain matrices: ½(ab + ba) - b₁a₁.
pub fn jordan_superproduct(sig: &SuperSignature, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let b1a1 = odd_filter(sig, b).mul(&odd_filter(sig, a))?;
    ab.add(&ba)?.scale(&CycScalar::frac(1, 2)).sub(&b1a1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductRule {
    Associative,
    JordanSuper,
    LieSuper,
}

impl ProductRule {
    pub fn apply(self, sig: &SuperSignature, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
        match self {
            ProductRule::Associative => a.mul(b),
            ProductRule::JordanSuper => jordan_superproduct(sig, a, b),
            ProductRule::LieSuper => supercommutator(sig, a, b),
        }
    }
}

impl fmt::Display for ProductRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProductRule::Associative => "associative",
            ProductRule::JordanSuper => "jordan-super",
            ProductRule::LieSuper => "lie-super",
        };
        write!(f, "{s}")
    }
}

/// A subspace of M_{n,m} regarded as a superalgebra under `rule`.
#[derive(Debug, Clone)]
pub struct SuperAlgebraView {
    sig: SuperSignature,
    basis: Subspace,
    rule: ProductRule,
}

/// Two basis elements whose product leaves the span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub left: usize,
    pub right: usize,
}

impl SuperAlgebraView {
    pub fn new(sig: SuperSignature, basis: Subspace, rule: ProductRule) -> Result<Self, SuperError> {
        if basis.ambient() != sig.ambient_dim() {
            return Err(SuperError::WrongSize {
                expected: sig.ambient_dim(),
                found: basis.ambient(),
            });
        }
        Ok(Self { sig, basis, rule })
    }

    pub fn full(sig: SuperSignature) -> Self {
        let basis = Subspace::full(sig.ambient_dim());
        Self {
            sig,
            basis,
            rule: ProductRule::Associative,
        }
    }

    pub fn signature(&self) -> &SuperSignature {
        &self.sig
    }

    pub fn space(&self) -> &Subspace {
        &self.basis
    }

    pub fn rule(&self) -> ProductRule {
        self.rule
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn even_dim(&self) -> usize {
        self.basis
            .intersect(&self.sig.parity_subspace(Parity::Even))
            .expect("same ambient")
            .dim()
    }

    pub fn odd_dim(&self) -> usize {
        self.basis
            .intersect(&self.sig.parity_subspace(Parity::Odd))
            .expect("same ambient")
            .dim()
    }

    /// Whether the space splits into its even and odd parts.
    pub fn is_super_subspace(&self) -> bool {
        self.even_dim() + self.odd_dim() == self.dim()
    }

    /// First pair of basis elements whose product is not in the span.
    pub fn closure_violation(&self) -> Result<Option<ClosureWitness>, SuperError> {
        let mats = self.basis.basis_matrices();
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                let p = self.rule.apply(&self.sig, a, b)?;
                if !self.basis.contains_matrix(&p)? {
                    return Ok(Some(ClosureWitness { left: i, right: j }));
                }
            }
        }
        Ok(None)
    }

    pub fn is_closed(&self) -> Result<bool, SuperError> {
        Ok(self.closure_violation()?.is_none())
    }

    pub fn contains(&self, m: &Matrix) -> Result<bool, SuperError> {
        Ok(self.basis.contains_matrix(m)?)
    }
}

/// Q(n) = {[[X,Y],[Y,X]]} inside M_{n,n}.
pub fn q_superalgebra(n: usize) -> Result<SuperAlgebraView, SuperError> {
    if n == 0 {
        return Err(SuperError::ZeroQueer);
    }
    let sig = SuperSignature::standard(n, n)?;
    let size = 2 * n;
    let mut vecs = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let mut even = Matrix::zeros(size, size);
            even.set(i, j, CycScalar::one());
            even.set(n + i, n + j, CycScalar::one());
            vecs.push(even.flatten());
            let mut odd = Matrix::zeros(size, size);
            odd.set(i, n + j, CycScalar::one());
            odd.set(n + i, j, CycScalar::one());
            vecs.push(odd.flatten());
        }
    }
    let basis = Subspace::span(size * size, vecs)?;
    SuperAlgebraView::new(sig, basis, ProductRule::Associative)
}

/// The super-transpose X^τ = [[A,-B],[C,D]]^t for any parity layout.
pub fn super_transpose(sig: &SuperSignature, x: &Matrix) -> Matrix {
    let n = sig.size();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = x.get(j, i);
            if v.is_zero() {
                continue;
            }
            // Entry (j,i) of X lies in the B block when j is even and i odd.
            let flip = sig.parity(j) == Parity::Even && sig.parity(i) == Parity::Odd;
            out.set(i, j, if flip { -v } else { v.clone() });
        }
    }
    out
}

/// A ⊕ A^sop realized inside M_{2n,2m} as {diag(a, b^τ)}, where the second
/// copy's ordinary product is the super-opposite product of A.
#[derive(Debug, Clone)]
pub struct ExchangePair {
    pub base: SuperAlgebraView,
    pub view: SuperAlgebraView,
    pub involution: Superinvolution,
    n: usize,
    m: usize,
}

impl ExchangePair {
    /// Index of row `i` of the first (`second == false`) or second copy.
    fn index(&self, i: usize, second: bool) -> usize {
        let (n, m) = (self.n, self.m);
        match (i < n, second) {
            (true, false) => i,
            (true, true) => n + i,
            (false, false) => 2 * n + (i - n),
            (false, true) => 2 * n + m + (i - n),
        }
    }

    fn place(&self, target: &mut Matrix, x: &Matrix, second: bool) {
        let size = self.n + self.m;
        for i in 0..size {
            for j in 0..size {
                let v = x.get(i, j);
                if !v.is_zero() {
                    target.set(self.index(i, second), self.index(j, second), v.clone());
                }
            }
        }
    }

    /// The element (a, b) of A ⊕ A^sop.
    pub fn embed(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let sig = self.base.signature();
        let d = 2 * (self.n + self.m);
        let mut out = Matrix::zeros(d, d);
        self.place(&mut out, a, false);
        self.place(&mut out, &super_transpose(sig, b), true);
        out
    }

    /// Inverse of [`Self::embed`] on the image.
    pub fn components(&self, x: &Matrix) -> (Matrix, Matrix) {
        let size = self.n + self.m;
        let mut a = Matrix::zeros(size, size);
        let mut bt = Matrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                a.set(i, j, x.get(self.index(i, false), self.index(j, false)).clone());
                bt.set(i, j, x.get(self.index(i, true), self.index(j, true)).clone());
            }
        }
        // τ has order 4 and τ² is the parity automorphism, so τ⁻¹ = τ³.
        let sig = self.base.signature();
        let b = super_transpose(sig, &super_transpose(sig, &super_transpose(sig, &bt)));
        (a, b)
    }

    /// H of the pair, i.e. the fixed points of the exchange map inside the view.
    pub fn symmetric_part(&self) -> Result<Subspace, SuperError> {
        Ok(self
            .involution
            .h_space()
            .intersect(self.view.space())?)
    }
}

/// Build A ⊕ A^sop with its exchange superinvolution (a, b) ↦ (b, a).
pub fn exchange_pair(a: &SuperAlgebraView) -> Result<ExchangePair, SuperError> {
    if a.rule() != ProductRule::Associative {
        return Err(SuperError::NotAssociative);
    }
    let (n, m) = a.signature().as_standard().ok_or(SuperError::NotStandard)?;
    let doubled = SuperSignature::standard(2 * n, 2 * m)?;
    let mut phi = Matrix::zeros(2 * (n + m), 2 * (n + m));
    for i in 0..n {
        phi.set(i, n + i, CycScalar::one());
        phi.set(n + i, i, CycScalar::one());
    }
    for i in 0..m {
        phi.set(2 * n + i, 2 * n + m + i, CycScalar::one());
        phi.set(2 * n + m + i, 2 * n + i, CycScalar::from_int(-1));
    }
    let involution = Superinvolution::exchange(&doubled, phi).map_err(Box::new)?;
    let mut pair = ExchangePair {
        base: a.clone(),
        view: SuperAlgebraView::full(doubled.clone()),
        involution,
        n,
        m,
    };
    let zero = Matrix::zeros(n + m, n + m);
    let mut vecs = Vec::new();
    for b in a.space().basis_matrices() {
        vecs.push(pair.embed(&b, &zero).flatten());
        vecs.push(pair.embed(&zero, &b).flatten());
    }
    pair.view = SuperAlgebraView::new(doubled.clone(), Subspace::span(doubled.ambient_dim(), vecs)?, ProductRule::Associative)?;

    // Self-check: the map must swap the two components on a basis.
    for a_el in a.space().basis_matrices() {
        for (x, y) in [(&a_el, &zero), (&zero, &a_el)] {
            let image = pair.involution.apply_matrix(&pair.embed(x, y));
            if image != pair.embed(y, x) {
                return Err(SuperError::ExchangeSelfCheck(format!(
                    "image of ({x:?}, {y:?}) is not the swapped pair"
                )));
            }
        }
    }
    if let Some(w) = pair.view.closure_violation()? {
        return Err(SuperError::ExchangeSelfCheck(format!("embedding not closed at {w:?}")));
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(x: i64) -> CycScalar {
        CycScalar::from_int(x)
    }

    fn sm(sig: &SuperSignature, rows: &[&[i64]]) -> SuperMatrix {
        SuperMatrix::new(sig.clone(), Matrix::from_ints(rows)).unwrap()
    }

    #[test]
    fn parts_of_the_identity() {
        let sig = SuperSignature::standard(2, 1).unwrap();
        let id = SuperMatrix::identity(&sig);
        assert_eq!(id.even_part(), id);
        assert!(id.odd_part().matrix().is_zero());
    }

    #[test]
    fn block_split_at_one_one() {
        let sig = SuperSignature::standard(1, 1).unwrap();
        let x = sm(&sig, &[&[1, 2], &[3, 4]]);
        assert_eq!(x.even_part(), sm(&sig, &[&[1, 0], &[0, 4]]));
        assert_eq!(x.odd_part(), sm(&sig, &[&[0, 2], &[3, 0]]));
        assert_eq!(x.even_part().add(&x.odd_part()).unwrap(), x);
        assert_eq!(x.parity(), None);
    }

    #[test]
    fn odd_times_odd_is_even() {
        let sig = SuperSignature::standard(1, 2).unwrap();
        let a = SuperMatrix::unit(&sig, 0, 1);
        let b = SuperMatrix::unit(&sig, 2, 0);
        assert_eq!(a.parity(), Some(Parity::Odd));
        let ab = b.mul(&a).unwrap();
        assert_eq!(ab.parity(), Some(Parity::Even));
        assert!(!ab.matrix().is_zero());
    }

    #[test]
    fn supercommutator_signs() {
        let sig = SuperSignature::standard(1, 1).unwrap();
        let e = sm(&sig, &[&[1, 0], &[0, 2]]);
        let f = sm(&sig, &[&[3, 0], &[0, 5]]);
        let plain = e.mul(&f).unwrap().sub(&f.mul(&e).unwrap()).unwrap();
        assert_eq!(e.supercommutator(&f).unwrap(), plain);
        let a = sm(&sig, &[&[0, 1], &[2, 0]]);
        let b = sm(&sig, &[&[0, 3], &[1, 0]]);
        let anti = a.mul(&b).unwrap().add(&b.mul(&a).unwrap()).unwrap();
        assert_eq!(a.supercommutator(&b).unwrap(), anti);
        let a2 = a.mul(&a).unwrap().scale(&q(2));
        assert_eq!(a.supercommutator(&a).unwrap(), a2);
    }

    #[test]
    fn jordan_signs() {
        let sig = SuperSignature::standard(1, 1).unwrap();
        let a = sm(&sig, &[&[0, 1], &[2, 0]]);
        let b = sm(&sig, &[&[0, 3], &[1, 0]]);
        let half = CycScalar::frac(1, 2);
        let expected = a.mul(&b).unwrap().sub(&b.mul(&a).unwrap()).unwrap().scale(&half);
        assert_eq!(a.jordan_superproduct(&b).unwrap(), expected);
        let x = sm(&sig, &[&[1, 2], &[3, 4]]);
        let id = SuperMatrix::identity(&sig);
        assert_eq!(x.jordan_superproduct(&id).unwrap(), x);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = SuperMatrix::identity(&SuperSignature::standard(1, 1).unwrap());
        let b = SuperMatrix::identity(&SuperSignature::standard(2, 0).unwrap());
        assert!(matches!(a.mul(&b), Err(SuperError::SignatureMismatch { .. })));
        assert!(SuperSignature::standard(0, 0).is_err());
    }

    #[test]
    fn queer_superalgebra() {
        let q1 = q_superalgebra(1).unwrap();
        assert_eq!(q1.dim(), 2);
        assert!(q1.contains(&Matrix::from_ints(&[&[1, 0], &[0, 1]])).unwrap());
        assert!(q1.contains(&Matrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap());
        let q2 = q_superalgebra(2).unwrap();
        assert_eq!(q2.dim(), 8);
        assert!(q2.is_closed().unwrap());
        assert_eq!(q2.even_dim(), 4);
        assert_eq!(q2.odd_dim(), 4);
        assert!(matches!(q_superalgebra(0), Err(SuperError::ZeroQueer)));
    }

    #[test]
    fn super_transpose_reverses_products() {
        let sig = SuperSignature::standard(1, 2).unwrap();
        let n = sig.size();
        for (i, j, k, l) in [(0, 1, 1, 2), (1, 0, 0, 2), (1, 2, 2, 0), (0, 0, 0, 1)] {
            let a = Matrix::unit(n, i, j);
            let b = Matrix::unit(n, k, l);
            let s = sig.unit_parity(i, j).sign(sig.unit_parity(k, l));
            let lhs = super_transpose(&sig, &a.mul(&b).unwrap());
            let rhs = super_transpose(&sig, &b)
                .mul(&super_transpose(&sig, &a))
                .unwrap()
                .scale(&q(s));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exchange_of_full_matrix_superalgebra() {
        let a = SuperAlgebraView::full(SuperSignature::standard(1, 1).unwrap());
        let pair = exchange_pair(&a).unwrap();
        assert_eq!(pair.view.dim(), 8);
        assert!(pair.involution.check_axioms().is_ok());
        assert_eq!(pair.symmetric_part().unwrap().dim(), a.dim());
        // Idempotent with a nonzero odd part.
        let w = Matrix::unit(2, 0, 1).add(&Matrix::unit(2, 1, 1)).unwrap();
        assert_eq!(w.mul(&w).unwrap(), w);
        let f = pair.embed(&w, &w);
        assert_eq!(f.mul(&f).unwrap(), f);
        assert_eq!(pair.involution.apply_matrix(&f), f);
        let fs = SuperMatrix::new(pair.view.signature().clone(), f).unwrap();
        assert!(!fs.odd_part().matrix().is_zero());
        let (x, y) = pair.components(&pair.embed(&w, &Matrix::unit(2, 1, 0)));
        assert_eq!(x, w);
        assert_eq!(y, Matrix::unit(2, 1, 0));
    }

    #[test]
    fn exchange_of_queer() {
        let q1 = q_superalgebra(1).unwrap();
        let pair = exchange_pair(&q1).unwrap();
        assert_eq!(pair.view.dim(), 4);
        assert_eq!(pair.symmetric_part().unwrap().dim(), 2);
        let half = CycScalar::frac(1, 2);
        let a = Matrix::from_ints(&[&[1, 1], &[1, 1]]).scale(&half);
        assert!(q1.contains(&a).unwrap());
        assert_eq!(a.mul(&a).unwrap(), a);
        let sa = SuperMatrix::new(q1.signature().clone(), a.clone()).unwrap();
        assert!(!sa.odd_part().matrix().is_zero());
        let f = pair.embed(&a, &a);
        assert_eq!(pair.involution.apply_matrix(&f), f);
        // a·op a = a₀² + a₀a₁ + a₁a₀ - a₁² differs from a² since a₁² = ¼I.
        assert_ne!(f.mul(&f).unwrap(), f);
        let (_, second) = pair.components(&f.mul(&f).unwrap());
        assert_eq!(second, Matrix::from_ints(&[&[0, 1], &[1, 0]]).scale(&half));
    }

    fn homogeneous(sig: SuperSignature) -> impl Strategy<Value = Matrix> {
        let n = sig.size();
        (proptest::collection::vec(-2i64..=2, n * n), any::<bool>()).prop_map(move |(v, odd)| {
            let want = if odd { Parity::Odd } else { Parity::Even };
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if sig.unit_parity(i, j) == want {
                        m.set(i, j, CycScalar::from_int(v[i * n + j]));
                    }
                }
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn super_jacobi(
            a in homogeneous(SuperSignature::standard(2, 2).unwrap()),
            b in homogeneous(SuperSignature::standard(2, 2).unwrap()),
            c in homogeneous(SuperSignature::standard(2, 2).unwrap()),
        ) {
            let sig = SuperSignature::standard(2, 2).unwrap();
            let par = |m: &Matrix| SuperMatrix::new(sig.clone(), m.clone()).unwrap().parity().unwrap();
            let (pa, pb, pc) = (par(&a), par(&b), par(&c));
            let br = |x: &Matrix, y: &Matrix| supercommutator(&sig, x, y).unwrap();
            // (-1)^{|a||c|}[a,[b,c]] + cyclic = 0
            let t1 = br(&a, &br(&b, &c)).scale(&q(pa.sign(pc)));
            let t2 = br(&b, &br(&c, &a)).scale(&q(pb.sign(pa)));
            let t3 = br(&c, &br(&a, &b)).scale(&q(pc.sign(pb)));
            prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
        }

        #[test]
        fn super_antisymmetry_and_supersymmetry(
            a in homogeneous(SuperSignature::standard(1, 2).unwrap()),
            b in homogeneous(SuperSignature::standard(1, 2).unwrap()),
        ) {
            let sig = SuperSignature::standard(1, 2).unwrap();
            let par = |m: &Matrix| SuperMatrix::new(sig.clone(), m.clone()).unwrap().parity().unwrap();
            let s = q(par(&a).sign(par(&b)));
            let ab = supercommutator(&sig, &a, &b).unwrap();
            let ba = supercommutator(&sig, &b, &a).unwrap();
            prop_assert_eq!(ab, ba.scale(&s).neg());
            let jab = jordan_superproduct(&sig, &a, &b).unwrap();
            let jba = jordan_superproduct(&sig, &b, &a).unwrap();
            prop_assert_eq!(jab, jba.scale(&s));
        }

        #[test]
        fn even_part_is_multiplicative_on_even_inputs(
            a in homogeneous(SuperSignature::standard(2, 1).unwrap()),
            b in homogeneous(SuperSignature::standard(2, 1).unwrap()),
        ) {
            let sig = SuperSignature::standard(2, 1).unwrap();
            let ea = SuperMatrix::new(sig.clone(), a).unwrap().even_part();
            let eb = SuperMatrix::new(sig.clone(), b).unwrap().even_part();
            let prod = ea.mul(&eb).unwrap();
            prop_assert_eq!(prod.even_part(), prod);
        }
    }
}
