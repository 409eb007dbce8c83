use super::*;
use crate::homological::{homological_matrix, lie_derivative, split};
use crate::linalg::{same_span as span_eq_dim, span_rank as rank_dim};
use crate::polyalg::{int, rat, MultiIndex, Poly};

fn mono(dim_in: usize, dim_out: usize, j: usize, e: &[u32]) -> HomPolyMap {
    assert_eq!(e.len(), dim_in);
    HomPolyMap::monomial(dim_out, j, MultiIndex::new(e.to_vec()), int(1))
}

fn coords_of(maps: &[HomPolyMap]) -> Vec<Vec<Rational>> {
    let b = VfBasis::new(maps[0].dim_in(), maps[0].dim_out(), maps[0].degree());
    maps.iter().map(|f| b.coords(f).unwrap()).collect()
}

fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    span_eq_dim(a[0].len(), a, b)
}

fn bru2() -> ControlLinearPart {
    brunovsky_pair(2).unwrap()
}

fn expected_complement() -> Vec<HomPolyMap> {
    let a = mono(3, 2, 0, &[2, 0, 0]).add(&mono(3, 2, 1, &[1, 1, 0])).unwrap();
    let b = mono(3, 2, 1, &[2, 0, 0]);
    let c = mono(3, 2, 1, &[1, 0, 1])
        .scale(&int(2))
        .sub(&mono(3, 2, 1, &[0, 2, 0]))
        .unwrap();
    vec![a, b, c]
}

#[test]
fn skew_basis_dimensions() {
    assert_eq!(skew_basis(2, 1, 2).len(), 12);
    assert_eq!(skew_basis(1, 1, 2).len(), 4);
    assert_eq!(skew_basis(2, 1, 3).len(), 18);
    let b = skew_basis(2, 1, 2);
    assert!(b[..6].iter().all(|p| p.p_u().is_zero()));
    assert!(b[6..].iter().all(|p| p.p_x().is_zero()));
}

#[test]
fn control_operator_examples() {
    let lin = bru2();
    let p = SkewGenerator::new(mono(2, 2, 0, &[2, 0]), HomPolyMap::zero(3, 1, 2)).unwrap();
    assert_eq!(
        control_homological(&lin, &p).unwrap(),
        mono(3, 2, 0, &[1, 1, 0]).scale(&int(2))
    );

    let q = mono(3, 1, 0, &[0, 1, 1]);
    let p = SkewGenerator::new(HomPolyMap::zero(2, 2, 2), q).unwrap();
    assert_eq!(
        control_homological(&lin, &p).unwrap(),
        mono(3, 2, 1, &[0, 1, 1]).scale(&int(-1))
    );
}

#[test]
fn zero_b_reduces_to_lie_derivative() {
    let a = Matrix::from_i64(&[&[1, 2], &[0, -1]]);
    let lin = ControlLinearPart::new(a.clone(), Matrix::zeros(2, 1)).unwrap();
    let px = mono(2, 2, 0, &[1, 1]).add(&mono(2, 2, 1, &[0, 2])).unwrap();
    let p = SkewGenerator::new(px.clone(), mono(3, 1, 0, &[0, 0, 2])).unwrap();
    let expected = lie_derivative(&LinearPart::new(a).unwrap(), &px).unwrap().extend_vars(1);
    assert_eq!(control_homological(&lin, &p).unwrap(), expected);
}

#[test]
fn augmented_operator_shape_and_reduction() {
    let m = augmented_matrix_operator(&bru2(), 2).unwrap();
    assert_eq!((m.rows(), m.cols()), (18, 18));
    let c = control_homological_matrix(&bru2(), 2).unwrap();
    assert_eq!((c.rows(), c.cols()), (12, 12));

    let a = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
    let lin = ControlLinearPart::new(a.clone(), Matrix::zeros(2, 0)).unwrap();
    assert_eq!(
        augmented_matrix_operator(&lin, 3).unwrap().matrix,
        homological_matrix(&LinearPart::new(a).unwrap(), 3).unwrap().matrix
    );
}

#[test]
fn brunovsky_complements() {
    let kernel = control_complement(&bru2(), 2).unwrap();
    assert_eq!(kernel.len(), 3);
    assert!(same_span(&coords_of(&kernel), &coords_of(&expected_complement())));

    let fredholm = range_complement(&bru2(), 2).unwrap();
    assert_eq!(fredholm.len(), 1);
    assert!(same_span(&coords_of(&fredholm), &coords_of(&[mono(3, 2, 0, &[0, 0, 2])])));
}

#[test]
fn augmented_complement_is_larger() {
    let diag = augmented_complement(&bru2(), 2).unwrap();
    assert_eq!(diag.len(), 6);
    for q in expected_complement() {
        let mut family = coords_of(&diag);
        let before = rank_dim(family[0].len(), &family);
        family.push(coords_of(&[q])[0].clone());
        assert_eq!(rank_dim(family[0].len(), &family), before);
    }
}

#[test]
fn theorem1_examples() {
    let lin = bru2();
    for q in expected_complement() {
        assert!(theorem1_residual(&lin, &q).unwrap().is_zero());
    }
    assert!(!theorem1_residual(&lin, &mono(3, 2, 0, &[0, 2, 0])).unwrap().is_zero());
    assert!(theorem1_residual(&lin, &mono(3, 2, 0, &[0, 0, 2])).unwrap().is_zero());
}

#[test]
fn zero_input_reduction_matches_ode() {
    let a = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
    let lin = ControlLinearPart::new(a.clone(), Matrix::zeros(2, 0)).unwrap();
    let ode = split(&LinearPart::new(a).unwrap(), 2).unwrap().complement_basis;
    assert!(same_span(
        &coords_of(&control_complement(&lin, 2).unwrap()),
        &coords_of(&ode)
    ));
    assert!(same_span(
        &coords_of(&range_complement(&lin, 2).unwrap()),
        &coords_of(&ode)
    ));
}

fn system(f2: HomPolyMap, max: u32) -> ControlSystem {
    let s = PolySeries::new(3, 2, max).with_term(f2).unwrap();
    ControlSystem::new(bru2(), s).unwrap()
}

#[test]
fn normalize_removable_quadratic() {
    let sys = system(mono(3, 2, 0, &[0, 2, 0]), 2);
    let report = normalize_control(&sys, 2).unwrap();
    assert!(report.normal_form.term(2).is_zero());
    assert_eq!(report.log.len(), 1);
    assert!(report.kernel_ok() && report.conjugacy_ok());
    assert_eq!(report.dimensions[&2], DimensionRecord { space: 12, range: 11, complement: 1 });
}

#[test]
fn normalize_keeps_complement_terms() {
    let sys = system(mono(3, 2, 0, &[0, 0, 2]).scale(&rat(3, 2)), 3);
    let report = normalize_control(&sys, 3).unwrap();
    assert!(report.log.is_empty());
    assert_eq!(report.normal_form, sys);

    let empty = normalize_control(&ControlSystem::linear_only(bru2(), 3), 3).unwrap();
    assert!(empty.log.is_empty() && empty.normal_form.nonlinear.is_nonlinear_zero());
}

#[test]
fn pushforward_single_step() {
    let lin = bru2();
    let sys = ControlSystem::linear_only(lin.clone(), 4);
    let p = SkewGenerator::new(mono(2, 2, 1, &[1, 1]), mono(3, 1, 0, &[1, 0, 1])).unwrap();
    let g = pushforward_control(&sys, &p, 4).unwrap();
    assert_eq!(g.term(2), control_homological(&lin, &p).unwrap().scale(&int(-1)));
    assert_eq!(pushforward_control(&sys, &SkewGenerator::zero(2, 1, 2), 4).unwrap(), sys);
}

#[test]
fn skew_generator_embedding_round_trip() {
    let p = SkewGenerator::new(mono(2, 2, 1, &[1, 1]), mono(3, 1, 0, &[1, 0, 1])).unwrap();
    assert_eq!(SkewGenerator::from_embedded(&p.embed(), 2).unwrap(), p);
    let bad = mono(3, 3, 0, &[0, 1, 1]);
    assert!(SkewGenerator::from_embedded(&bad, 2).is_err());
}

#[test]
fn brunovsky_pairs() {
    let p = brunovsky_pair(2).unwrap();
    assert_eq!(p.a(), &Matrix::from_i64(&[&[0, 1], &[0, 0]]));
    assert_eq!(p.b(), &Matrix::from_i64(&[&[0], &[1]]));
    let p = brunovsky_pair(1).unwrap();
    assert!(p.a().is_zero() && p.b() == &Matrix::from_i64(&[&[1]]));
    let p = brunovsky_pair(4).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(p.a()[(i, j)], int(i64::from(j == i + 1)));
        }
    }
}

#[test]
fn characteristic_fields() {
    let f = characteristic_field(&bru2());
    assert_eq!(f.components(), &[Poly::zero(3), Poly::var(3, 0), Poly::var(3, 1)]);
    let f = characteristic_field(&uncontrollable_example());
    assert_eq!(
        f.components(),
        &[Poly::zero(4), Poly::zero(4), Poly::var(4, 0), Poly::var(4, 2)]
    );
    let zero = ControlLinearPart::new(Matrix::zeros(2, 2), Matrix::zeros(2, 1)).unwrap();
    assert!(characteristic_field(&zero).is_zero());
}

#[test]
fn first_integral_examples() {
    let l = brunovsky_first_integrals(2).unwrap();
    assert_eq!(l.len(), 2);
    let expected = Poly::from_terms(
        3,
        vec![
            (MultiIndex::new(vec![0, 2, 0]), rat(1, 2)),
            (MultiIndex::new(vec![1, 0, 1]), int(-1)),
        ],
    );
    assert_eq!(l[1].poly, expected);
    assert_eq!(brunovsky_first_integrals(1).unwrap().len(), 1);
    assert_eq!(brunovsky_first_integrals(3).unwrap().len(), 2);
    assert_eq!(uncontrollable_first_integrals_example().unwrap().len(), 3);
}
