//! Jordan and Lie superalgebras carried by H and K of a graded
//! superinvolution, with their induced gradings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::abelian_group::{FiniteAbelianGroup, GroupElement};
use crate::grading::{Grading, GradingError};
use crate::linalg::{LinalgError, Subspace};
use crate::report::{EvidenceKind, Instance, Report};
use crate::superinvolution::{InvolutionError, InvolutionKind, Superinvolution};
use crate::supermatrix::{supercommutator, Parity, ProductRule, SuperAlgebraView, SuperError, SuperSignature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("unknown structure kind {0:?} (expected osp-jordan, p-jordan or b-lie)")]
    UnknownKind(String),
    #[error("{kind} needs {needed}, got signature {sig}")]
    WrongSignature { kind: StructureKind, needed: &'static str, sig: String },
    #[error("{kind} needs an {needed} superinvolution, got {found}")]
    WrongInvolution { kind: StructureKind, needed: InvolutionKind, found: InvolutionKind },
    #[error("involution and grading live on different signatures")]
    SignatureMismatch,
    #[error("involution is not graded: the induced components miss {deficit} dimensions")]
    NotGraded { deficit: usize },
    #[error("carrier is not closed under {0}")]
    NotClosed(ProductRule),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Super(#[from] SuperError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    OspJordan,
    PJordan,
    BLie,
}

impl StructureKind {
    pub fn rule(self) -> ProductRule {
        match self {
            StructureKind::OspJordan | StructureKind::PJordan => ProductRule::JordanSuper,
            StructureKind::BLie => ProductRule::LieSuper,
        }
    }

    /// Whether the carrier is H (symmetric elements) rather than K.
    pub fn uses_symmetric(self) -> bool {
        self != StructureKind::BLie
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::OspJordan => "osp-jordan",
            StructureKind::PJordan => "p-jordan",
            StructureKind::BLie => "b-lie",
        })
    }
}

impl FromStr for StructureKind {
    type Err = StructureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "osp-jordan" => Ok(StructureKind::OspJordan),
            "p-jordan" => Ok(StructureKind::PJordan),
            "b-lie" => Ok(StructureKind::BLie),
            other => Err(StructureError::UnknownKind(other.to_string())),
        }
    }
}

/// Components V ∩ R_g of a subspace and whether they add up to V.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedGrading {
    pub components: BTreeMap<GroupElement, Subspace>,
    pub total: bool,
    /// dim V minus the sum of the component dimensions.
    pub deficit: usize,
}

pub fn induced_grading(grading: &Grading, carrier: &Subspace) -> Result<InducedGrading, LinalgError> {
    let mut components = BTreeMap::new();
    let mut sum = 0;
    for (g, comp) in grading.components() {
        let part = carrier.intersect(comp)?;
        if !part.is_zero() {
            sum += part.dim();
            components.insert(g.clone(), part);
        }
    }
    Ok(InducedGrading {
        components,
        total: sum == carrier.dim(),
        deficit: carrier.dim() - sum,
    })
}

#[derive(Debug, Clone)]
pub struct GradedSuperStructure {
    kind: StructureKind,
    grading: Grading,
    involution: Superinvolution,
    carrier: Subspace,
    components: BTreeMap<GroupElement, Subspace>,
}

impl GradedSuperStructure {
    /// Carrier H or K of a graded superinvolution, checked closed under the
    /// kind's product and graded by the intersections with R_g.
    pub fn build(
        kind: StructureKind,
        grading: &Grading,
        involution: &Superinvolution,
    ) -> Result<Self, StructureError> {
        if grading.signature() != involution.signature() {
            return Err(StructureError::SignatureMismatch);
        }
        let carrier = if kind.uses_symmetric() {
            involution.h_space()
        } else {
            involution.k_space()
        };
        let induced = induced_grading(grading, &carrier)?;
        if !induced.total {
            return Err(StructureError::NotGraded {
                deficit: induced.deficit,
            });
        }
        let view = SuperAlgebraView::new(grading.signature().clone(), carrier.clone(), kind.rule())?;
        if !view.is_closed()? {
            return Err(StructureError::NotClosed(kind.rule()));
        }
        Ok(Self {
            kind,
            grading: grading.clone(),
            involution: involution.clone(),
            carrier,
            components: induced.components,
        })
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn involution(&self) -> &Superinvolution {
        &self.involution
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }

    pub fn rule(&self) -> ProductRule {
        self.kind.rule()
    }

    pub fn components(&self) -> &BTreeMap<GroupElement, Subspace> {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn view(&self) -> SuperAlgebraView {
        SuperAlgebraView::new(self.grading.signature().clone(), self.carrier.clone(), self.rule())
            .expect("carrier checked at construction")
    }

    /// (degree, even dim, odd dim) for each nonzero component.
    pub fn degree_parity_dims(&self) -> Vec<(GroupElement, usize, usize)> {
        let sig = self.grading.signature();
        let (even, odd) = (sig.parity_subspace(Parity::Even), sig.parity_subspace(Parity::Odd));
        self.components
            .iter()
            .map(|(g, c)| {
                let e = c.intersect(&even).map(|s| s.dim()).unwrap_or(0);
                let o = c.intersect(&odd).map(|s| s.dim()).unwrap_or(0);
                (g.clone(), e, o)
            })
            .collect()
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new(self.kind.to_string(), EvidenceKind::Exact);
        let view = self.view();
        r.push(
            Instance::new(format!("carrier closed under {}", self.rule()), view.is_closed().unwrap_or(false))
                .with_details(json!({
                    "dim": self.dim(),
                    "even": view.even_dim(),
                    "odd": view.odd_dim(),
                })),
        );
        let dims: Vec<_> = self
            .degree_parity_dims()
            .into_iter()
            .map(|(g, e, o)| json!({"degree": g.to_string(), "even": e, "odd": o}))
            .collect();
        let sum: usize = self.components.values().map(|c| c.dim()).sum();
        r.push(
            Instance::new("induced components add up to the carrier", sum == self.dim())
                .with_details(json!(dims)),
        );
        r.note("simplicity of the carrier is taken from the literature, not checked");
        r
    }
}

fn require_kind(kind: StructureKind, inv: &Superinvolution, needed: InvolutionKind) -> Result<(), StructureError> {
    if inv.kind() != needed {
        return Err(StructureError::WrongInvolution {
            kind,
            needed,
            found: inv.kind(),
        });
    }
    Ok(())
}

/// H(R, osp) with the Jordan superproduct on signature (n, 2m).
pub fn build_osp_jordan(grading: &Grading, inv: &Superinvolution) -> Result<GradedSuperStructure, StructureError> {
    let kind = StructureKind::OspJordan;
    require_kind(kind, inv, InvolutionKind::Osp)?;
    GradedSuperStructure::build(kind, grading, inv)
}

/// H(M_{n,n}, trp) with the Jordan superproduct.
pub fn build_p_jordan(grading: &Grading, inv: &Superinvolution) -> Result<GradedSuperStructure, StructureError> {
    let kind = StructureKind::PJordan;
    require_kind(kind, inv, InvolutionKind::Trp)?;
    GradedSuperStructure::build(kind, grading, inv)
}

/// K(R, osp) with the supercommutator on signature (2n+1, 2m).
pub fn build_b_lie(grading: &Grading, inv: &Superinvolution) -> Result<GradedSuperStructure, StructureError> {
    let kind = StructureKind::BLie;
    let sig = grading.signature();
    match sig.as_standard() {
        Some((n, m)) if n % 2 == 1 && m % 2 == 0 => {}
        _ => {
            return Err(StructureError::WrongSignature {
                kind,
                needed: "signature (2n+1, 2m)",
                sig: sig.to_string(),
            })
        }
    }
    require_kind(kind, inv, InvolutionKind::Osp)?;
    GradedSuperStructure::build(kind, grading, inv)
}

/// span{[h, h'] : h, h' ∈ H} under the supercommutator.
pub fn bracket_span(sig: &SuperSignature, h: &Subspace) -> Result<Subspace, LinalgError> {
    let basis = homogeneous_basis(sig, h)?;
    let mut out = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i..] {
            let c = supercommutator(sig, a, b)?;
            if !c.is_zero() {
                out.push(c);
            }
        }
    }
    Subspace::span_matrices(sig.ambient_dim(), &out)
}

fn homogeneous_basis(sig: &SuperSignature, space: &Subspace) -> Result<Vec<crate::linalg::Matrix>, LinalgError> {
    let mut out = Vec::new();
    for par in [Parity::Even, Parity::Odd] {
        out.extend(space.intersect(&sig.parity_subspace(par))?.basis_matrices());
    }
    Ok(out)
}

fn kron_span(amb: usize, left: &Subspace, right: &Subspace) -> Result<Subspace, LinalgError> {
    let mut mats = Vec::new();
    for a in left.basis_matrices() {
        for b in right.basis_matrices() {
            mats.push(a.kronecker(&b));
        }
    }
    Subspace::span_matrices(amb, &mats)
}

fn graded_dims(grading: &Grading, space: &Subspace) -> Result<BTreeMap<GroupElement, usize>, StructureError> {
    let induced = induced_grading(grading, space)?;
    if !induced.total {
        return Err(StructureError::NotGraded {
            deficit: induced.deficit,
        });
    }
    Ok(induced.components.iter().map(|(g, c)| (g.clone(), c.dim())).collect())
}

fn convolve(
    group: &FiniteAbelianGroup,
    terms: &[(&BTreeMap<GroupElement, usize>, &BTreeMap<GroupElement, usize>)],
) -> BTreeMap<GroupElement, usize> {
    let mut out = BTreeMap::new();
    for (left, right) in terms {
        for (a, da) in left.iter() {
            for (b, db) in right.iter() {
                *out.entry(group.mul(a, b).expect("same group")).or_insert(0) += da * db;
            }
        }
    }
    out
}

/// For R fine-graded with an involution (outer factor) and T an
/// elementary-graded superalgebra with a superinvolution, compare H and K
/// of R⊗T with the sums of tensor products of the factor parts, as exact
/// subspaces and degree by degree.
pub fn decomposition_check(
    r: &Grading,
    r_inv: &Superinvolution,
    t: &Grading,
    t_inv: &Superinvolution,
) -> Result<Report, StructureError> {
    let group = r.group().clone();
    let prod = Grading::tensor(r, t)?;
    let inv = Superinvolution::tensor(r_inv, t_inv)?;
    let amb = prod.signature().ambient_dim();
    let (hr, kr) = (r_inv.h_space(), r_inv.k_space());
    let (ht, kt) = (t_inv.h_space(), t_inv.k_space());
    let dims_hr = graded_dims(r, &hr)?;
    let dims_kr = graded_dims(r, &kr)?;
    let dims_ht = graded_dims(t, &ht)?;
    let dims_kt = graded_dims(t, &kt)?;

    let mut report = Report::new("tensor-decomposition", EvidenceKind::Exact);
    report.note(format!(
        "R: {} with its {} involution; T: {} with its {} superinvolution",
        r.signature(),
        r_inv.kind(),
        t.signature(),
        t_inv.kind()
    ));
    report.check("the product superinvolution is graded", prod.is_graded_by(&inv)?);
    let h = inv.h_space();
    let k = inv.k_space();
    let h_expected = kron_span(amb, &kr, &kt)?.sum(&kron_span(amb, &hr, &ht)?)?;
    let k_expected = kron_span(amb, &kr, &ht)?.sum(&kron_span(amb, &hr, &kt)?)?;
    report.push(
        Instance::new("H(R⊗T) = K(R)⊗K(T) + H(R)⊗H(T)", h == h_expected).with_details(json!({"dim": h.dim()})),
    );
    report.push(
        Instance::new("K(R⊗T) = K(R)⊗H(T) + H(R)⊗K(T)", k == k_expected).with_details(json!({"dim": k.dim()})),
    );
    let h_pred = convolve(&group, &[(&dims_kr, &dims_kt), (&dims_hr, &dims_ht)]);
    let k_pred = convolve(&group, &[(&dims_kr, &dims_ht), (&dims_hr, &dims_kt)]);
    for (name, space, pred) in [("H", &h, &h_pred), ("K", &k, &k_pred)] {
        let actual = induced_grading(&prod, space)?;
        let got: BTreeMap<GroupElement, usize> =
            actual.components.iter().map(|(g, c)| (g.clone(), c.dim())).collect();
        let pred: BTreeMap<GroupElement, usize> = pred.iter().filter(|(_, &d)| d > 0).map(|(g, d)| (g.clone(), *d)).collect();
        let rendered: BTreeMap<String, usize> = got.iter().map(|(g, d)| (g.to_string(), *d)).collect();
        report.push(
            Instance::new(format!("{name}: per-degree dimensions match the factor count"), actual.total && got == pred)
                .with_details(json!(rendered)),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::superinvolution::trp_block_form;
    use crate::superinvolution::Part;

    fn sig(n: usize, m: usize) -> SuperSignature {
        SuperSignature::standard(n, m).unwrap()
    }

    fn trivial_grading(s: &SuperSignature) -> Grading {
        let g = FiniteAbelianGroup::trivial();
        Grading::elementary(&g, s, &vec![g.identity(); s.size()]).unwrap()
    }

    #[test]
    fn osp_jordan_on_one_two() {
        let s = sig(1, 2);
        let inv = Superinvolution::canonical_osp(&s).unwrap();
        let j = build_osp_jordan(&trivial_grading(&s), &inv).unwrap();
        assert_eq!(j.dim(), inv.h_space().dim());
        assert_eq!(j.components().len(), 1);
        let e = FiniteAbelianGroup::trivial().identity();
        assert!(j.components()[&e].contains_matrix(&Matrix::identity(3)).unwrap());
        assert!(j.report().passed());
    }

    #[test]
    fn p_jordan_small() {
        let s = sig(1, 1);
        let inv = Superinvolution::trp(&s).unwrap();
        let j = build_p_jordan(&trivial_grading(&s), &inv).unwrap();
        assert_eq!(j.dim(), 2);
        assert_eq!((j.view().even_dim(), j.view().odd_dim()), (1, 1));
        let s2 = sig(2, 2);
        let inv2 = Superinvolution::trp(&s2).unwrap();
        let j2 = build_p_jordan(&trivial_grading(&s2), &inv2).unwrap();
        assert_eq!(j2.carrier(), &trp_block_form(2, Part::Symmetric));
    }

    #[test]
    fn b_lie_smallest() {
        let s = sig(1, 2);
        let inv = Superinvolution::canonical_osp(&s).unwrap();
        let l = build_b_lie(&trivial_grading(&s), &inv).unwrap();
        let hh = bracket_span(&s, &inv.h_space()).unwrap();
        assert!(hh.is_subspace_of(l.carrier()).unwrap());
        assert_eq!(&hh, l.carrier());
        assert_eq!(l.dim(), 5);
        assert!(matches!(
            build_b_lie(&trivial_grading(&sig(2, 2)), &Superinvolution::canonical_osp(&sig(2, 2)).unwrap()),
            Err(StructureError::WrongSignature { .. })
        ));
        assert!(matches!(
            build_osp_jordan(&trivial_grading(&sig(1, 1)), &Superinvolution::trp(&sig(1, 1)).unwrap()),
            Err(StructureError::WrongInvolution { .. })
        ));
    }

    #[test]
    fn brackets_of_symmetric_elements_on_one_one() {
        // For the transpose-like map on M_{1,1}, H is spanned by I and E_21,
        // whose supercommutators all vanish.
        let s = sig(1, 1);
        let inv = Superinvolution::trp(&s).unwrap();
        assert!(bracket_span(&s, &inv.h_space()).unwrap().is_zero());
        assert_eq!(inv.k_space().dim(), 2);
    }

    #[test]
    fn non_graded_involution_loses_dimensions() {
        let s = sig(1, 1);
        let grading = Grading::pauli_standard(1, &s).unwrap();
        let inv = Superinvolution::trp(&s).unwrap();
        assert!(!grading.is_graded_by(&inv).unwrap());
        let induced = induced_grading(&grading, &inv.h_space()).unwrap();
        assert!(!induced.total && induced.deficit > 0);
        assert!(matches!(
            build_p_jordan(&grading, &inv),
            Err(StructureError::NotGraded { .. })
        ));
    }

    #[test]
    fn kind_round_trip() {
        for k in [StructureKind::OspJordan, StructureKind::PJordan, StructureKind::BLie] {
            assert_eq!(k.to_string().parse::<StructureKind>().unwrap(), k);
        }
        assert!("c-lie".parse::<StructureKind>().is_err());
    }

    #[test]
    fn decomposition_with_scalar_factor() {
        let g = FiniteAbelianGroup::trivial();
        let r = Grading::pauli(&g, &SuperSignature::trivial(1).unwrap(), &[]).unwrap();
        let r_inv = Superinvolution::transpose(1).unwrap();
        let s = sig(1, 2);
        let t = trivial_grading(&s);
        let t_inv = Superinvolution::canonical_osp(&s).unwrap();
        let rep = decomposition_check(&r, &r_inv, &t, &t_inv).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn decomposition_with_pauli_factor() {
        let g: FiniteAbelianGroup = "Z2xZ2xZ2".parse().unwrap();
        let r = Grading::pauli(
            &g,
            &SuperSignature::trivial(2).unwrap(),
            &[(g.element(&[1, 0, 0]).unwrap(), g.element(&[0, 1, 0]).unwrap())],
        )
        .unwrap();
        let r_inv = Superinvolution::transpose(2).unwrap();
        let s = sig(1, 1);
        let t = Grading::elementary(&g, &s, &[g.identity(), g.element(&[0, 0, 1]).unwrap()]).unwrap();
        let t_inv = Superinvolution::trp(&s).unwrap();
        let rep = decomposition_check(&r, &r_inv, &t, &t_inv).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
}
