use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vrpf_core::lemmalab::{random_ia_automorphism, random_word};
use vrpf_core::pfiltration::{build_lambda_oracle, Caps, QuotientGroup};
use vrpf_core::MagnusContext;

#[test]
fn magnus_embedding_is_multiplicative_on_ten_thousand_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (p, rank, degree, pairs) in [(2, 2, 4, 4000), (3, 3, 3, 3000), (5, 2, 5, 3000)] {
        let ctx = MagnusContext::new(p, rank, degree, &Caps::default()).unwrap();
        for _ in 0..pairs {
            let a = random_word(rank, 10, &mut rng);
            let b = random_word(rank, 10, &mut rng);
            let lhs = ctx.embed(&a.concat(&b)).unwrap();
            let rhs = ctx.mul(&ctx.embed(&a).unwrap(), &ctx.embed(&b).unwrap());
            assert_eq!(lhs, rhs, "p={p}: {a} · {b}");
        }
    }
}

#[test]
fn embedding_of_inverse_is_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let ctx = MagnusContext::new(3, 2, 6, &Caps::default()).unwrap();
    for _ in 0..500 {
        let a = random_word(2, 12, &mut rng);
        let e = ctx.embed(&a).unwrap();
        assert!(ctx.is_one(&ctx.mul(&e, &ctx.embed(&a.inverse()).unwrap())));
    }
}

#[test]
fn ia_automorphisms_act_trivially_on_the_first_quotient() {
    // θ₁ = id, so σ_2 is trivial on F/γ^p_2 = L_1
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for p in [2, 3] {
        let o = build_lambda_oracle(p, 2, 2, &caps).unwrap();
        let q = QuotientGroup::new(&o, 2, &caps).unwrap();
        assert_eq!(q.order(), (p * p) as usize);
        for _ in 0..50 {
            let a = random_ia_automorphism(2, p, &mut rng);
            let s = vrpf_core::pfiltration::sigma_n(&a, &q).unwrap();
            assert!(s.perm().is_identity());
        }
    }
}
