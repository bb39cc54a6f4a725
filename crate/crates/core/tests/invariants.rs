use tensorbody_core::bm_distance::{lambda_for_map, tensorial_bm_upper, verify_witness, DistanceOptions};
use tensorbody_core::ellipsoid_analysis::{
    is_tensorial_ellipsoid, kronecker_decompose, sandwich_check_euclidean, slice_ellipsoid, KRONECKER_TOL,
};
use tensorbody_core::random::{self, SeededRng};
use tensorbody_core::tensor_products::{eps_product, hilbert_product, pi_product};
use tensorbody_core::tensoriality::{
    boundary_anchor, canonical_anchor, factorization_check, is_tensorial, sections_at, sections_unique_up_to_scaling,
    Violation,
};
use tensorbody_core::{Body, Error, Matrix, TensorMap, TensorShape};

fn shape(d: &[usize]) -> TensorShape {
    TensorShape::new(d.to_vec()).unwrap()
}

fn polytope(rng: &mut SeededRng, d: usize) -> Body<f64> {
    Body::v_polytope((0..d + 1).map(|_| random::gaussian_vec(rng, d)).collect()).unwrap()
}

fn ellipsoid(rng: &mut SeededRng, d: usize) -> Body<f64> {
    Body::ellipsoid(random::pd_matrix(rng, d).add(&Matrix::identity(d).scale(&0.2)).unwrap()).unwrap()
}

fn kron(vs: &[Vec<f64>]) -> Vec<f64> {
    vs.iter().fold(vec![1.0], |acc, v| acc.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect())
}

#[test]
fn products_are_tensorial_with_their_factors_as_sections() {
    let mut rng = random::seeded(1);
    let s = shape(&[2, 2]);
    for kind in 0..3 {
        let fs: Vec<Body<f64>> = match kind {
            0 => (0..2).map(|_| polytope(&mut rng, 2)).collect(),
            1 => (0..2).map(|_| polytope(&mut rng, 2).polar().unwrap()).collect(),
            _ => (0..2).map(|_| ellipsoid(&mut rng, 2)).collect(),
        };
        let q = match kind {
            0 => pi_product(&s, &fs).unwrap(),
            1 => eps_product(&s, &fs).unwrap(),
            _ => hilbert_product(&s, &fs).unwrap(),
        };
        let r = is_tensorial(&s, &q, 1e-8).unwrap();
        assert!(r.verdict, "kind {kind}");
        let l = sections_unique_up_to_scaling(&fs, &r.sections.sections, 1e-9, 50, 3).unwrap();
        assert!((l.iter().product::<f64>() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn verdict_does_not_depend_on_the_anchor() {
    let mut rng = random::seeded(2);
    let s = shape(&[2, 2]);
    let q = pi_product(&s, &[polytope(&mut rng, 2), polytope(&mut rng, 2)]).unwrap();
    let base = sections_at(&s, &q, &canonical_anchor(&s, &q).unwrap()).unwrap();
    for _ in 0..5 {
        let a = boundary_anchor(&s, &q, vec![random::gaussian_vec(&mut rng, 2), random::gaussian_vec(&mut rng, 2)]).unwrap();
        let fam = sections_at(&s, &q, &a).unwrap();
        let l = sections_unique_up_to_scaling(&base.sections, &fam.sections, 1e-8, 50, 4).unwrap();
        assert!((l.iter().product::<f64>() - 1.0).abs() <= 1e-8);
        let f = factorization_check(&s, &q, &fam.sections, 100, 1e-9, 5).unwrap();
        assert!(f.passed, "{f:?}");
    }
}

#[test]
fn decomposable_maps_preserve_tensoriality() {
    let mut rng = random::seeded(3);
    let s = shape(&[2, 3]);
    for _ in 0..5 {
        let q = eps_product(&s, &[polytope(&mut rng, 2).polar().unwrap(), polytope(&mut rng, 3).polar().unwrap()]).unwrap();
        let t = TensorMap::new(
            s.clone(),
            vec![0, 1],
            vec![random::invertible_matrix(&mut rng, 2), random::invertible_matrix(&mut rng, 3)],
        )
        .unwrap();
        assert!(is_tensorial(&s, &t.image(&q).unwrap(), 1e-8).unwrap().verdict);
    }
}

#[test]
fn rejections_carry_checkable_certificates() {
    let mut rng = random::seeded(4);
    let s = shape(&[2, 2]);
    // generic mixtures of two products are not tensorial
    let mut rejected = 0;
    for _ in 0..6 {
        let a = pi_product(&s, &[polytope(&mut rng, 2), polytope(&mut rng, 2)]).unwrap();
        let g = random::invertible_matrix(&mut rng, 4);
        let q = Body::v_polytope(
            a.generators().unwrap().iter().map(|v| g.mul_vec(v).unwrap()).collect(),
        )
        .unwrap();
        let r = match is_tensorial(&s, &q, 1e-8) {
            Ok(r) => r,
            Err(Error::NumericallyAmbiguous) => continue,
            Err(e) => panic!("{e}"),
        };
        if r.verdict {
            continue;
        }
        rejected += 1;
        let secs = &r.sections.sections;
        match r.violation.expect("rejection without certificate") {
            Violation::ProductPointOutside { factors, .. } => {
                for (x, b) in factors.iter().zip(secs) {
                    assert!(b.gauge_value(x).unwrap() <= 1.0 + 1e-8);
                }
                assert!(q.gauge_value(&kron(&factors)).unwrap() > 1.0 + 1e-8);
            }
            Violation::InjectiveConstraint { point, functional, .. } => {
                assert!(q.gauge_value(&point).unwrap() <= 1.0 + 1e-8);
                for (z, b) in functional.iter().zip(secs) {
                    assert!(b.support(z).unwrap() <= 1.0 + 1e-8);
                }
                let v: f64 = point.iter().zip(kron(&functional)).map(|(a, b)| a * b).sum();
                assert!(v > 1.0 + 1e-8);
            }
        }
    }
    assert!(rejected >= 3, "only {rejected} random images rejected");
}

#[test]
fn lp_balls_factor_for_every_p() {
    // ℓ_p balls of the tensor space are tensorial only for p ∈ {1, 2, ∞};
    // the factorization identity on decomposables holds for every p.
    let s = shape(&[2, 2]);
    for p in [1.5, 3.0] {
        let q = Body::<f64>::lp_ball(4, p).unwrap();
        let secs = vec![Body::lp_ball(2, p).unwrap(), Body::lp_ball(2, p).unwrap()];
        let f = factorization_check(&s, &q, &secs, 200, 1e-9, 6).unwrap();
        assert!(f.passed, "p = {p}: {f:?}");
    }
}

#[test]
fn distance_is_one_on_equal_bodies_and_symmetric() {
    let mut rng = random::seeded(5);
    let s = shape(&[2, 2]);
    let p = pi_product(&s, &[polytope(&mut rng, 2), polytope(&mut rng, 2)]).unwrap();
    let q = eps_product(&s, &[polytope(&mut rng, 2).polar().unwrap(), polytope(&mut rng, 2).polar().unwrap()]).unwrap();
    let opts = DistanceOptions { budget: 10, ..DistanceOptions::default() };
    assert!((tensorial_bm_upper(&s, &p, &p, &opts).unwrap().upper - 1.0).abs() <= 1e-12);
    let pq = tensorial_bm_upper(&s, &p, &q, &opts).unwrap();
    let qp = tensorial_bm_upper(&s, &q, &p, &opts).unwrap();
    assert!((pq.upper.ln() - qp.upper.ln()).abs() <= 0.05, "{} vs {}", pq.upper, qp.upper);
    assert!(verify_witness(&p, &q, &pq.witness, pq.upper, 1e-9).unwrap());
    assert!(pq.upper <= pq.diameter_bound);
}

#[test]
fn planted_distances_are_invariant_and_submultiplicative() {
    let mut rng = random::seeded(6);
    let s = shape(&[2, 2]);
    let p = pi_product(&s, &[polytope(&mut rng, 2), polytope(&mut rng, 2)]).unwrap();
    let t = TensorMap::new(s.clone(), vec![1, 0], vec![random::invertible_matrix(&mut rng, 2), random::invertible_matrix(&mut rng, 2)]).unwrap();
    let tp = t.image(&p).unwrap();
    let q = eps_product(&s, &[polytope(&mut rng, 2).polar().unwrap(), polytope(&mut rng, 2).polar().unwrap()]).unwrap();
    let opts = DistanceOptions { budget: 10, ..DistanceOptions::default() };
    let pq = tensorial_bm_upper(&s, &p, &q, &opts).unwrap();
    // seeding with the composed witness reproduces the distance from TP
    let seeded = DistanceOptions {
        seed_maps: vec![pq.witness_map.clone().unwrap().compose(&t.inverse().unwrap()).unwrap()],
        ..opts.clone()
    };
    let tpq = tensorial_bm_upper(&s, &tp, &q, &seeded).unwrap();
    assert!((tpq.upper - pq.upper).abs() <= 1e-6 * pq.upper, "{} vs {}", tpq.upper, pq.upper);
    let p_tp = tensorial_bm_upper(&s, &p, &tp, &opts).unwrap();
    assert!(p_tp.upper <= 1.0 + 1e-6);
    // certified triangle inequality through the planted map
    assert!(tpq.upper <= p_tp.upper * pq.upper * (1.0 + 1e-6));
    let direct = lambda_for_map(&s, &p, &tp, &t).unwrap();
    assert!((direct - 1.0).abs() <= 1e-9);
}

#[test]
fn ellipsoid_pathways_agree() {
    let mut rng = random::seeded(7);
    let s = shape(&[2, 2]);
    for k in 0..50 {
        let a = random::pd_matrix(&mut rng, 2).add(&Matrix::identity(2).scale(&0.3)).unwrap();
        let b = random::pd_matrix(&mut rng, 2).add(&Matrix::identity(2).scale(&0.3)).unwrap();
        let mut m = a.kron(&b);
        if k % 2 == 1 {
            let e = random::gaussian_matrix(&mut rng, 4, 4).symmetrize();
            m = m.add(&e.scale(&(0.1 / e.frobenius()))).unwrap();
        }
        let direct = is_tensorial_ellipsoid(&s, &m, KRONECKER_TOL).unwrap().verdict;
        let general = is_tensorial(&s, &Body::ellipsoid(m).unwrap(), 1e-8).unwrap().verdict;
        assert_eq!(direct, general, "matrix #{k}");
        assert_eq!(direct, k % 2 == 0);
    }
}

#[test]
fn recovered_factors_rebuild_the_same_ellipsoid() {
    let mut rng = random::seeded(8);
    let s = shape(&[2, 3]);
    let h = hilbert_product(&s, &[ellipsoid(&mut rng, 2), ellipsoid(&mut rng, 3)]).unwrap();
    let fs = kronecker_decompose(&s, h.ellipsoid_matrix().unwrap(), KRONECKER_TOL).unwrap();
    let back = hilbert_product(&s, &fs.into_iter().map(|f| Body::ellipsoid(f).unwrap()).collect::<Vec<_>>()).unwrap();
    for _ in 0..200 {
        let u = random::gaussian_vec(&mut rng, 6);
        let (a, b) = (h.gauge_value(&u).unwrap(), back.gauge_value(&u).unwrap());
        assert!((a - b).abs() <= 1e-9 * a);
    }
}

#[test]
fn slices_of_passing_ellipsoids_pass() {
    let mut rng = random::seeded(9);
    let s = shape(&[2, 2, 2]);
    let u = Matrix::kron_all(&[random::orthogonal_matrix(&mut rng, 2), random::orthogonal_matrix(&mut rng, 2), random::orthogonal_matrix(&mut rng, 2)]);
    let m = u.transpose().matmul(&u).unwrap().symmetrize();
    assert!(sandwich_check_euclidean(&s, &m, 1e-9, 10, 1).unwrap().passed);
    for _ in 0..5 {
        let z = random::unit_vec(&mut rng, 2);
        let sl = slice_ellipsoid(&s, &m, &z).unwrap();
        assert!(sandwich_check_euclidean(&shape(&[2, 2]), &sl, 1e-9, 10, 2).unwrap().passed);
        assert!(sl.sub(&Matrix::identity(4)).unwrap().frobenius() < 1e-12);
    }
}
