//! Randomized cross-checks of the membership engine against itself: the
//! exact rules, the sampled rule, and the witness certificates must tell
//! one consistent story on matrices that are NOT in canonical Jordan
//! coordinates, and membership must be preserved by conjugation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use collat::collineation::{col_check, col_check_nilpotent, col_check_sampled, Verdict};
use collat::matrix::Matrix;
use collat::opspaces::{alg_lat_commutant, commutant};
use collat::scalar::GaussianRational as G;
use collat::structure::{jordan_matrix, jordan_type, nilpotent_similarity, JordanType};
use collat::VectorSample;

fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(d, d, |_, _| G::from_int(rng.gen_range(-2i64..=2)));
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_type(rng: &mut ChaCha8Rng, max_dim: usize) -> JordanType {
    let d = rng.gen_range(2..=max_dim);
    let all = JordanType::all_of_dim(d);
    all[rng.gen_range(0..all.len())].clone()
}

#[test]
fn verdicts_transport_through_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    for _ in 0..25 {
        let t_ref = random_type(&mut rng, 5);
        let canonical = jordan_matrix(&t_ref);
        let d = canonical.rows();
        let p = random_invertible(&mut rng, d);
        let p_inv = p.inverse().unwrap();
        // A conjugated nilpotent with the same type.
        let n = &(&p * &canonical) * &p_inv;
        assert_eq!(jordan_type(&n).unwrap(), t_ref);

        // Conjugated commutant elements are exact members of the
        // conjugated operator.
        let comm = commutant(&canonical).unwrap();
        let coeffs: Vec<G> = (0..comm.dim())
            .map(|_| G::from_int(rng.gen_range(-3i64..=3)))
            .collect();
        let b = comm.element(&coeffs);
        if !b.is_invertible() {
            continue;
        }
        let t = &(&p * &b) * &p_inv;
        let sample = VectorSample::new(d, 20, 1);
        let v = col_check_nilpotent(&n, &t, &sample).unwrap();
        assert_eq!(v.verdict, Verdict::MemberExact, "type {t_ref}");
    }
}

#[test]
fn refutations_carry_verifying_witnesses_off_canonical_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    let zero = [G::zero()];
    let mut refuted = 0;
    for _ in 0..40 {
        let t_ref = random_type(&mut rng, 5);
        let canonical = jordan_matrix(&t_ref);
        let d = canonical.rows();
        let p = random_invertible(&mut rng, d);
        let p_inv = p.inverse().unwrap();
        let n = &(&p * &canonical) * &p_inv;
        // Arbitrary invertible maps are usually not collineations.
        let t = random_invertible(&mut rng, d);
        let sample = VectorSample::new(d, 30, 2);
        let v = col_check_nilpotent(&n, &t, &sample).unwrap();
        if v.verdict == Verdict::NonMember {
            refuted += 1;
            let w = v.witness.expect("refutations carry witnesses");
            assert!(
                w.verify(&n, &t, &zero).unwrap(),
                "witness failed to re-verify for type {t_ref} ({})",
                w.kind_name()
            );
        }
    }
    assert!(refuted > 10, "random maps should mostly be refuted");
}

#[test]
fn exact_members_survive_the_sampler() {
    // Whenever an exact rule certifies membership, the sampled test must
    // find no counterexample.
    let mut rng = ChaCha8Rng::seed_from_u64(503);
    for _ in 0..15 {
        let t_ref = random_type(&mut rng, 4);
        let n = jordan_matrix(&t_ref);
        let d = n.rows();
        let alg = alg_lat_commutant(&n).unwrap();
        let t = loop {
            let coeffs: Vec<G> = (0..alg.dim())
                .map(|_| G::from_int(rng.gen_range(-3i64..=3)))
                .collect();
            let cand = alg.element(&coeffs);
            if cand.is_invertible() {
                break cand;
            }
        };
        let sample = VectorSample::new(d, 50, 4);
        let v = col_check_nilpotent(&n, &t, &sample).unwrap();
        if v.verdict == Verdict::MemberExact {
            assert!(
                col_check_sampled(&n, &t, &sample).unwrap().pass,
                "sampler contradicted an exact certificate for type {t_ref}"
            );
        }
    }
}

#[test]
fn members_compose_within_similarity_groups() {
    // Col(A) is a group: products and inverses of certified members are
    // members, including across a component swap.
    let a = Matrix::block_diag(&[
        Matrix::jordan_block(2),
        &Matrix::identity(2) + &Matrix::jordan_block(2),
    ]);
    let spectrum = [G::zero(), G::one()];
    let pd = collat::structure::primary_decompose(&a, &spectrum).unwrap();
    let swap = collat::collineation::build_swap_collineation(&a, &pd, 0, 1).unwrap();
    let diag = Matrix::diagonal(&[G::one(), G::one(), G::from_int(3), G::from_int(3)]);
    let sample = VectorSample::new(4, 20, 5);
    for t in [&swap, &diag] {
        assert!(col_check(&a, t, &spectrum, &sample).unwrap().is_member());
    }
    let prod = &swap * &diag;
    assert!(col_check(&a, &prod, &spectrum, &sample).unwrap().is_member());
    let inv = prod.inverse().unwrap();
    assert!(col_check(&a, &inv, &spectrum, &sample).unwrap().is_member());
}

#[test]
fn similarity_is_an_equivalence_on_random_conjugates() {
    let mut rng = ChaCha8Rng::seed_from_u64(504);
    for _ in 0..20 {
        let t_ref = random_type(&mut rng, 5);
        let canonical = jordan_matrix(&t_ref);
        let d = canonical.rows();
        let p = random_invertible(&mut rng, d);
        let q = random_invertible(&mut rng, d);
        let n1 = &(&p * &canonical) * &p.inverse().unwrap();
        let n2 = &(&q * &canonical) * &q.inverse().unwrap();
        let s = nilpotent_similarity(&n1, &n2)
            .unwrap()
            .expect("equal types are similar");
        assert!(s.is_invertible());
        assert_eq!(&(&s * &n1), &(&n2 * &s));
    }
}

#[test]
fn factor_sampling_works_when_factor_dim_differs_from_ambient() {
    // Two similar {3,2} components: the ambient space is 10-dimensional but
    // each nilpotent factor lives in 5 dimensions, so the sampled factor
    // rule must resample at the factor dimension instead of erroring.
    let block = Matrix::block_diag(&[Matrix::jordan_block(3), Matrix::jordan_block(2)]);
    let a = Matrix::block_diag(&[block.clone(), &Matrix::identity(5) + &block]);
    let spectrum = [G::zero(), G::one()];
    // Per-component diagonals inside Alg Lat but outside the commutant force
    // the sampled path for type {3,2}.
    let d1 = Matrix::diagonal(&[
        G::from_int(1),
        G::from_int(2),
        G::from_int(3),
        G::from_int(4),
        G::from_int(5),
    ]);
    let t = Matrix::block_diag(&[d1.clone(), d1]);
    let sample = VectorSample::new(10, 20, 6);
    let v = col_check(&a, &t, &spectrum, &sample).unwrap();
    // This diagonal breaks the chain-transport ratio between the blocks,
    // so the sampler refutes it; the point here is that the factor check
    // runs at dimension 5 and the witness transports back to dimension 10.
    assert_eq!(v.verdict, Verdict::NonMember);
    let w = v.witness.unwrap();
    assert_eq!(w.subspace().ambient_dim(), 10);
    assert!(w.verify(&a, &t, &spectrum).unwrap());

    // And a commutant-blockwise member of the same shape stays exact.
    let toeplitz = Matrix::from_int_rows(&[
        &[2, 7, 1, 0, 0],
        &[0, 2, 7, 0, 0],
        &[0, 0, 2, 0, 0],
        &[0, 0, 0, 2, 7],
        &[0, 0, 0, 0, 2],
    ]);
    let member = Matrix::block_diag(&[toeplitz.clone(), toeplitz]);
    let v = col_check(&a, &member, &spectrum, &sample).unwrap();
    assert_eq!(v.verdict, Verdict::MemberExact);
}
