use proptest::prelude::*;

use supergrade::supermatrix::{jordan_superproduct, supercommutator};
use supergrade::superinvolution::paired_phi;
use supergrade::{CycScalar, FiniteAbelianGroup, Grading, Matrix, SuperSignature, Subspace, Superinvolution};

fn involutions() -> Vec<(String, Superinvolution)> {
    let mut out = Vec::new();
    for (n, m) in [(1, 2), (2, 2), (3, 2), (2, 4), (4, 0)] {
        let s = SuperSignature::standard(n, m).unwrap();
        out.push((format!("osp ({n},{m})"), Superinvolution::canonical_osp(&s).unwrap()));
    }
    let s = SuperSignature::standard(2, 2).unwrap();
    out.push(("paired (2,2)".into(), Superinvolution::osp(&s, paired_phi(&[1, 1], &[1, 1]).unwrap()).unwrap()));
    for n in 1..=3 {
        out.push((format!("trp ({n},{n})"), Superinvolution::trp(&SuperSignature::standard(n, n).unwrap()).unwrap()));
    }
    out
}

#[test]
fn symmetric_and_skew_parts_split_the_ambient() {
    for (label, inv) in involutions() {
        let (h, k) = (inv.h_space(), inv.k_space());
        let amb = inv.signature().ambient_dim();
        assert_eq!(h.dim() + k.dim(), amb, "{label}");
        assert!(h.intersect(&k).unwrap().is_zero(), "{label}");
        assert_eq!(h.sum(&k).unwrap(), Subspace::full(amb), "{label}");
    }
}

fn combo(space: &Subspace, coef: &[i64]) -> Matrix {
    let basis = space.basis_matrices();
    let size = basis[0].rows();
    let mut x = Matrix::zeros(size, size);
    for (b, &c) in basis.iter().zip(coef.iter().cycle()) {
        x = x.add(&b.scale(&CycScalar::from_int(c))).unwrap();
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jordan_and_lie_closure(which in 0usize..9, a in prop::collection::vec(-3i64..=3, 1..7), b in prop::collection::vec(-3i64..=3, 1..7)) {
        let (label, inv) = &involutions()[which];
        let sig = inv.signature();
        let (h, k) = (inv.h_space(), inv.k_space());
        let (x, y) = (combo(&h, &a), combo(&h, &b));
        prop_assert!(h.contains_matrix(&jordan_superproduct(sig, &x, &y).unwrap()).unwrap(), "{}", label);
        prop_assert!(k.contains_matrix(&supercommutator(sig, &x, &y).unwrap()).unwrap(), "{}", label);
        let (u, v) = (combo(&k, &a), combo(&k, &b));
        prop_assert!(k.contains_matrix(&supercommutator(sig, &u, &v).unwrap()).unwrap(), "{}", label);
    }

    #[test]
    fn conjugating_by_a_permutation_permutes_theta(theta in prop::collection::vec(0i64..4, 3), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let g: FiniteAbelianGroup = "Z4".parse().unwrap();
        let sig = SuperSignature::trivial(3).unwrap();
        let els: Vec<_> = theta.iter().map(|&a| g.element(&[a]).unwrap()).collect();
        let mut moved = els.clone();
        for (i, &p) in perm.iter().enumerate() {
            moved[p] = els[i].clone();
        }
        let base = Grading::elementary(&g, &sig, &els).unwrap();
        let conj = base.conjugate(&Matrix::permutation(&perm).transpose()).unwrap();
        let direct = Grading::elementary(&g, &sig, &moved).unwrap();
        for h in g.elements() {
            prop_assert_eq!(conj.component(&h), direct.component(&h));
        }
    }
}
