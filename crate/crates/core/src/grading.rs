//! Group gradings of M_{n,m} by a finite abelian group G.
//!
//! A grading is stored as a homogeneous basis with a degree per element.
//! The components R_g are the spans of the basis elements of degree g.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian_group::{Character, FiniteAbelianGroup, GroupElement, GroupError};
use crate::cyclotomic::CycScalar;
use crate::linalg::{combine, LinalgError, Matrix, Subspace};
use crate::superinvolution::{LinearMap, Superinvolution};
use crate::supermatrix::{Parity, SuperError, SuperSignature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("θ has {found} entries, the signature has size {expected}")]
    ThetaLength { expected: usize, found: usize },
    #[error("basis has {found} elements, expected {expected}")]
    BasisSize { expected: usize, found: usize },
    #[error("homogeneous elements are linearly dependent")]
    DependentBasis,
    #[error("Pauli grading on M_{size} needs a power of two size")]
    PauliSize { size: usize },
    #[error("Pauli generators do not embed (Z2 x Z2)^{k} into the group")]
    PauliEmbedding { k: usize },
    #[error("factors are graded by different groups: {left} and {right}")]
    GroupMismatch { left: String, right: String },
    #[error("{element} must have order 2")]
    NotAnInvolution { element: String },
    #[error("Type Q data needs nonempty blocks of positive size")]
    EmptyBlocks,
    #[error("degrees {left} and {right} repeat")]
    RepeatedDegree { left: String, right: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Super(#[from] SuperError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How a grading was constructed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GradingSpec {
    /// E_ij has degree θ_i⁻¹θ_j.
    Elementary { theta: Vec<GroupElement> },
    /// Tensor power of Pauli gradings on M_2; factor i sends its generators
    /// diag(1,-1) and [[0,1],[1,0]] to the given pair.
    Pauli { generators: Vec<(GroupElement, GroupElement)> },
    /// The odd type with parity from the half-swap, moved to the standard
    /// signature by conjugation with [[I,I],[I,-I]].
    TypeQ { theta: Vec<GroupElement>, h: GroupElement },
    /// Kronecker product, `outer` indexing the blocks.
    Tensor { outer: Box<GradingSpec>, inner: Box<GradingSpec> },
    /// Conjugate of another grading by an invertible matrix.
    Conjugate { base: Box<GradingSpec> },
}

#[derive(Debug, Clone)]
enum Coords {
    /// Basis element k is E at flat position k.
    Units,
    /// Inverse of the matrix whose columns are the flattened basis elements.
    Dense(Matrix),
}

#[derive(Debug, Clone)]
pub struct Grading {
    group: FiniteAbelianGroup,
    sig: SuperSignature,
    spec: GradingSpec,
    basis: Vec<Matrix>,
    degrees: Vec<GroupElement>,
    components: BTreeMap<GroupElement, Subspace>,
    coords: Coords,
}

/// A basis element whose image under a map leaves its component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentViolation {
    pub degree: GroupElement,
    pub basis_index: usize,
}

fn pauli_generator(a: bool, b: bool) -> Matrix {
    match (a, b) {
        (false, false) => Matrix::identity(2),
        (true, false) => Matrix::from_ints(&[&[1, 0], &[0, -1]]),
        (false, true) => Matrix::from_ints(&[&[0, 1], &[1, 0]]),
        (true, true) => Matrix::from_ints(&[&[0, 1], &[-1, 0]]),
    }
}

/// V = [[I,I],[I,-I]] and its inverse ½V.
pub fn type_q_transport(n: usize) -> (Matrix, Matrix) {
    let mut v = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        v.set(i, i, CycScalar::one());
        v.set(i, n + i, CycScalar::one());
        v.set(n + i, i, CycScalar::one());
        v.set(n + i, n + i, CycScalar::from_int(-1));
    }
    let inv = v.scale(&CycScalar::frac(1, 2));
    (v, inv)
}

impl Grading {
    /// Build from a homogeneous basis of M_{n,m}.
    pub fn from_basis(
        group: FiniteAbelianGroup,
        sig: SuperSignature,
        spec: GradingSpec,
        basis: Vec<Matrix>,
        degrees: Vec<GroupElement>,
    ) -> Result<Self, GradingError> {
        let d = sig.ambient_dim();
        if basis.len() != d || degrees.len() != d {
            return Err(GradingError::BasisSize {
                expected: d,
                found: basis.len().min(degrees.len()),
            });
        }
        for g in &degrees {
            group.check(g)?;
        }
        for b in &basis {
            sig.check_matrix(b)?;
        }
        let units = basis
            .iter()
            .enumerate()
            .all(|(k, b)| b == &Matrix::unit(sig.size(), k / sig.size(), k % sig.size()));
        let coords = if units {
            Coords::Units
        } else {
            let mut cols = Matrix::zeros(d, d);
            for (k, b) in basis.iter().enumerate() {
                for (p, v) in b.entries().iter().enumerate() {
                    cols.set(p, k, v.clone());
                }
            }
            Coords::Dense(cols.inverse().map_err(|_| GradingError::DependentBasis)?)
        };
        let mut groups: BTreeMap<GroupElement, Vec<Vec<CycScalar>>> = BTreeMap::new();
        for (b, g) in basis.iter().zip(&degrees) {
            groups.entry(g.clone()).or_default().push(b.flatten());
        }
        let components = groups
            .into_iter()
            .map(|(g, vecs)| Ok((g, Subspace::span(d, vecs)?)))
            .collect::<Result<_, LinalgError>>()?;
        Ok(Self {
            group,
            sig,
            spec,
            basis,
            degrees,
            components,
            coords,
        })
    }

    /// The elementary grading defined by θ ∈ G^{n+m}.
    pub fn elementary(
        group: &FiniteAbelianGroup,
        sig: &SuperSignature,
        theta: &[GroupElement],
    ) -> Result<Self, GradingError> {
        let n = sig.size();
        if theta.len() != n {
            return Err(GradingError::ThetaLength {
                expected: n,
                found: theta.len(),
            });
        }
        for t in theta {
            group.check(t)?;
        }
        let mut basis = Vec::with_capacity(n * n);
        let mut degrees = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                basis.push(Matrix::unit(n, i, j));
                degrees.push(group.quotient_of(&theta[i], &theta[j]));
            }
        }
        Self::from_basis(
            group.clone(),
            sig.clone(),
            GradingSpec::Elementary { theta: theta.to_vec() },
            basis,
            degrees,
        )
    }

    /// The tensor-power Pauli grading on M_{2^k} with the given signature.
    pub fn pauli(
        group: &FiniteAbelianGroup,
        sig: &SuperSignature,
        generators: &[(GroupElement, GroupElement)],
    ) -> Result<Self, GradingError> {
        let k = generators.len();
        let size = 1usize << k;
        if sig.size() != size {
            return Err(GradingError::PauliSize { size: sig.size() });
        }
        for (a, b) in generators {
            group.check(a)?;
            group.check(b)?;
        }
        let mut basis = Vec::with_capacity(size * size);
        let mut degrees = Vec::with_capacity(size * size);
        let mut seen = std::collections::BTreeSet::new();
        for word in 0..(1usize << (2 * k)) {
            let mut mat = Matrix::identity(1);
            let mut deg = group.identity();
            for (f, (u, v)) in generators.iter().enumerate() {
                let a = word >> (2 * f) & 1 == 1;
                let b = word >> (2 * f + 1) & 1 == 1;
                mat = mat.kronecker(&pauli_generator(a, b));
                if a {
                    deg = group.mul(&deg, u)?;
                }
                if b {
                    deg = group.mul(&deg, v)?;
                }
            }
            seen.insert(deg.clone());
            basis.push(mat);
            degrees.push(deg);
        }
        let orders_ok = generators
            .iter()
            .all(|(u, v)| group.element_order(u) == 2 && group.element_order(v) == 2);
        if !orders_ok || seen.len() != size * size {
            return Err(GradingError::PauliEmbedding { k });
        }
        Self::from_basis(
            group.clone(),
            sig.clone(),
            GradingSpec::Pauli {
                generators: generators.to_vec(),
            },
            basis,
            degrees,
        )
    }

    /// Pauli grading of M_{2^k} by (Z2 x Z2)^k with the standard generators.
    pub fn pauli_standard(k: usize, sig: &SuperSignature) -> Result<Self, GradingError> {
        let group = FiniteAbelianGroup::from_cyclic_orders(&vec![2; 2 * k])?;
        let gens: Vec<_> = (0..k)
            .map(|f| {
                let mut u = vec![0i64; 2 * k];
                let mut v = vec![0i64; 2 * k];
                u[2 * f] = 1;
                v[2 * f + 1] = 1;
                Ok((group.element(&u)?, group.element(&v)?))
            })
            .collect::<Result<_, GroupError>>()?;
        Self::pauli(&group, sig, &gens)
    }

    /// The odd type on M_{n,n}: θ' = (g_1^(k_1), …, g_1h^(k_1), …), with the
    /// half-swap as parity, expressed in the standard (n,n) signature.
    pub fn type_q(
        group: &FiniteAbelianGroup,
        k: &[usize],
        gs: &[GroupElement],
        h: &GroupElement,
    ) -> Result<Self, GradingError> {
        if k.is_empty() || k.len() != gs.len() || k.contains(&0) {
            return Err(GradingError::EmptyBlocks);
        }
        group.check(h)?;
        if group.element_order(h) != 2 {
            return Err(GradingError::NotAnInvolution { element: h.to_string() });
        }
        for (i, a) in gs.iter().enumerate() {
            group.check(a)?;
            for b in &gs[..i] {
                if a == b || group.mul(a, h)? == *b {
                    return Err(GradingError::RepeatedDegree {
                        left: b.to_string(),
                        right: a.to_string(),
                    });
                }
            }
        }
        let mut theta = Vec::new();
        for (g, &ki) in gs.iter().zip(k) {
            theta.extend(std::iter::repeat(g.clone()).take(ki));
        }
        let shifted: Vec<_> = theta.iter().map(|g| group.mul_unchecked(g, h)).collect();
        theta.extend(shifted);
        let n: usize = k.iter().sum();
        let sig = SuperSignature::standard(n, n)?;
        let (v, v_inv) = type_q_transport(n);
        let size = 2 * n;
        let mut basis = Vec::with_capacity(size * size);
        let mut degrees = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                basis.push(v_inv.mul(&Matrix::unit(size, i, j))?.mul(&v)?);
                degrees.push(group.quotient_of(&theta[i], &theta[j]));
            }
        }
        Self::from_basis(
            group.clone(),
            sig,
            GradingSpec::TypeQ { theta, h: h.clone() },
            basis,
            degrees,
        )
    }

    /// Kronecker product of two gradings by the same group.
    pub fn tensor(outer: &Self, inner: &Self) -> Result<Self, GradingError> {
        if outer.group != inner.group {
            return Err(GradingError::GroupMismatch {
                left: outer.group.to_string(),
                right: inner.group.to_string(),
            });
        }
        let sig = outer.sig.tensor(&inner.sig);
        let mut basis = Vec::with_capacity(sig.ambient_dim());
        let mut degrees = Vec::with_capacity(sig.ambient_dim());
        let (a, b) = (outer.sig.size(), inner.sig.size());
        // Order basis by Kronecker position so unit bases stay units.
        for i in 0..a {
            for k in 0..b {
                for j in 0..a {
                    for l in 0..b {
                        let x = i * a + j;
                        let y = k * b + l;
                        basis.push(outer.basis[x].kronecker(&inner.basis[y]));
                        degrees.push(outer.group.mul_unchecked(&outer.degrees[x], &inner.degrees[y]));
                    }
                }
            }
        }
        Self::from_basis(
            outer.group.clone(),
            sig,
            GradingSpec::Tensor {
                outer: Box::new(outer.spec.clone()),
                inner: Box::new(inner.spec.clone()),
            },
            basis,
            degrees,
        )
    }

    /// The grading S⁻¹ R_g S.
    pub fn conjugate(&self, s: &Matrix) -> Result<Self, GradingError> {
        let s_inv = s.inverse()?;
        let basis = self
            .basis
            .iter()
            .map(|b| s_inv.mul(b)?.mul(s))
            .collect::<Result<_, _>>()?;
        Self::from_basis(
            self.group.clone(),
            self.sig.clone(),
            GradingSpec::Conjugate {
                base: Box::new(self.spec.clone()),
            },
            basis,
            self.degrees.clone(),
        )
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn signature(&self) -> &SuperSignature {
        &self.sig
    }

    pub fn spec(&self) -> &GradingSpec {
        &self.spec
    }

    pub fn theta(&self) -> Option<&[GroupElement]> {
        match &self.spec {
            GradingSpec::Elementary { theta } => Some(theta),
            _ => None,
        }
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn components(&self) -> &BTreeMap<GroupElement, Subspace> {
        &self.components
    }

    /// R_g, the zero space outside the support.
    pub fn component(&self, g: &GroupElement) -> Subspace {
        self.components
            .get(g)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.sig.ambient_dim()))
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.components.keys().cloned().collect()
    }

    pub fn identity_component(&self) -> Subspace {
        self.component(&self.group.identity())
    }

    /// Coefficients of x in the homogeneous basis.
    pub fn coefficients(&self, x: &Matrix) -> Result<Vec<CycScalar>, GradingError> {
        self.sig.check_matrix(x)?;
        Ok(match &self.coords {
            Coords::Units => x.flatten(),
            Coords::Dense(inv) => inv.apply(&x.flatten())?,
        })
    }

    fn recombine(&self, coef: &[CycScalar]) -> Matrix {
        let vecs: Vec<Vec<CycScalar>> = self.basis.iter().map(|b| b.flatten()).collect();
        let flat = combine(&vecs, coef, self.sig.ambient_dim());
        Matrix::unflatten(self.sig.size(), &flat).expect("square")
    }

    /// χ * x = Σ_g χ(g) x_g.
    pub fn dual_action(&self, chi: &Character, x: &Matrix) -> Result<Matrix, GradingError> {
        let m = self.group.field_order();
        let coef = self.coefficients(x)?;
        let mut cache: BTreeMap<&GroupElement, CycScalar> = BTreeMap::new();
        let mut scaled = Vec::with_capacity(coef.len());
        for (c, g) in coef.iter().zip(&self.degrees) {
            if c.is_zero() {
                scaled.push(CycScalar::zero());
                continue;
            }
            let v = match cache.get(g) {
                Some(v) => v.clone(),
                None => {
                    let v = self.group.char_eval(chi, g, m)?;
                    cache.insert(g, v.clone());
                    v
                }
            };
            scaled.push(c * &v);
        }
        Ok(self.recombine(&scaled))
    }

    /// Degrees g with x_g ≠ 0.
    pub fn degree_set(&self, x: &Matrix) -> Result<BTreeSet<GroupElement>, GradingError> {
        let coef = self.coefficients(x)?;
        Ok(coef
            .iter()
            .zip(&self.degrees)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, g)| g.clone())
            .collect())
    }

    /// x_g via character averaging: |G|⁻¹ Σ_χ χ(g)⁻¹ (χ * x).
    pub fn homogeneous_projection(&self, x: &Matrix, g: &GroupElement) -> Result<Matrix, GradingError> {
        self.group.check(g)?;
        let m = self.group.field_order();
        let g_inv = self.group.inverse(g);
        let mut acc = Matrix::zeros(self.sig.size(), self.sig.size());
        for chi in self.group.characters() {
            let w = self.group.char_eval(&chi, &g_inv, m)?;
            acc = acc.add(&self.dual_action(&chi, x)?.scale(&w))?;
        }
        Ok(acc.scale(&CycScalar::frac(1, self.group.order() as i64)))
    }

    /// x_g by solving for x in the direct sum of the component subspaces.
    pub fn projection_by_components(&self, x: &Matrix, g: &GroupElement) -> Result<Matrix, GradingError> {
        let d = self.sig.ambient_dim();
        let mut cols = Matrix::zeros(d, d);
        let mut owner = Vec::with_capacity(d);
        let mut k = 0;
        for (h, space) in &self.components {
            for v in space.basis() {
                for (p, e) in v.iter().enumerate() {
                    cols.set(p, k, e.clone());
                }
                owner.push(h == g);
                k += 1;
            }
        }
        let coef = cols.inverse()?.apply(&x.flatten())?;
        let mut out = vec![CycScalar::zero(); d];
        for (c, (col, keep)) in coef.iter().zip((0..d).zip(&owner)) {
            if *keep && !c.is_zero() {
                for (p, o) in out.iter_mut().enumerate() {
                    let e = cols.get(p, col);
                    if !e.is_zero() {
                        *o += &(c * e);
                    }
                }
            }
        }
        Ok(Matrix::unflatten(self.sig.size(), &out)?)
    }

    /// First pair of basis elements with b_k b_l ∉ R_{deg k · deg l}.
    pub fn multiplicativity_violation(&self) -> Result<Option<(usize, usize)>, GradingError> {
        for (k, (a, g)) in self.basis.iter().zip(&self.degrees).enumerate() {
            for (l, (b, h)) in self.basis.iter().zip(&self.degrees).enumerate() {
                let prod = a.mul(b)?;
                if prod.is_zero() {
                    continue;
                }
                let target = self.group.mul_unchecked(g, h);
                if !self.component(&target).contains_matrix(&prod)? {
                    return Ok(Some((k, l)));
                }
            }
        }
        Ok(None)
    }

    /// V = Σ_g (V ∩ R_g).
    pub fn is_graded_subspace_split(&self, v: &Subspace) -> Result<bool, GradingError> {
        let mut total = 0;
        for space in self.components.values() {
            total += v.intersect(space)?.dim();
        }
        Ok(total == v.dim())
    }

    /// χ * V ⊆ V for every character χ.
    pub fn is_graded_subspace_invariant(&self, v: &Subspace) -> Result<bool, GradingError> {
        let mats = v.basis_matrices();
        for chi in self.group.characters() {
            for b in &mats {
                if !v.contains_matrix(&self.dual_action(&chi, b)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_graded_subspace(&self, v: &Subspace) -> Result<bool, GradingError> {
        self.is_graded_subspace_split(v)
    }

    /// Every nonzero component is one-dimensional.
    pub fn is_fine(&self) -> bool {
        self.components.values().all(|c| c.dim() == 1)
    }

    /// Each R_g splits into its even and odd parts.
    pub fn is_super_compatible(&self) -> Result<bool, GradingError> {
        let even = self.sig.parity_subspace(Parity::Even);
        let odd = self.sig.parity_subspace(Parity::Odd);
        for c in self.components.values() {
            if c.intersect(&even)?.dim() + c.intersect(&odd)?.dim() != c.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First homogeneous basis element that `map` moves out of its component.
    pub fn map_violation(&self, map: &LinearMap) -> Result<Option<ComponentViolation>, GradingError> {
        let n = self.sig.size();
        if let (Coords::Units, Some(theta)) = (&self.coords, self.theta()) {
            // Elementary: compare degrees of matrix units directly.
            for k in 0..n * n {
                let (i, j) = (k / n, k % n);
                let want = &self.degrees[k];
                for (p, _) in map.unit_image_entries(i, j) {
                    let got = self.group.quotient_of(&theta[p / n], &theta[p % n]);
                    if &got != want {
                        return Ok(Some(ComponentViolation {
                            degree: want.clone(),
                            basis_index: k,
                        }));
                    }
                }
            }
            return Ok(None);
        }
        for (k, (b, g)) in self.basis.iter().zip(&self.degrees).enumerate() {
            if !self.component(g).contains_matrix(&map.apply(b))? {
                return Ok(Some(ComponentViolation {
                    degree: g.clone(),
                    basis_index: k,
                }));
            }
        }
        Ok(None)
    }

    /// The superinvolution maps every R_g into itself.
    pub fn is_graded_by(&self, inv: &Superinvolution) -> Result<bool, GradingError> {
        Ok(self.map_violation(inv.map())?.is_none())
    }

    /// (element, parity) multiset of an elementary grading with standard-layout θ.
    pub fn elementary_profile(sig: &SuperSignature, theta: &[GroupElement]) -> Vec<(GroupElement, Parity)> {
        let mut v: Vec<_> = theta
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), sig.parity(i)))
            .collect();
        v.sort();
        v
    }
}

/// A permutation π with θ₂[π(i)] = θ₁[i] and matching parities, which
/// realizes a graded isomorphism between two elementary gradings.
pub fn elementary_isomorphism(
    sig1: &SuperSignature,
    theta1: &[GroupElement],
    sig2: &SuperSignature,
    theta2: &[GroupElement],
) -> Option<Vec<usize>> {
    if theta1.len() != theta2.len() || sig1.size() != theta1.len() || sig2.size() != theta2.len() {
        return None;
    }
    let mut used = vec![false; theta2.len()];
    let mut perm = Vec::with_capacity(theta1.len());
    for (i, g) in theta1.iter().enumerate() {
        let j = (0..theta2.len()).find(|&j| !used[j] && &theta2[j] == g && sig2.parity(j) == sig1.parity(i))?;
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}
