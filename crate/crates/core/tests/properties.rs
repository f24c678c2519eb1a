//! Invariants over seeded random inputs, driven by proptest.

use std::str::FromStr;

use proptest::prelude::*;

use fhs_core::exact::{canonical_subspace, GaussScalar};
use fhs_core::fhs::{exactness_issues, ker_coker_fhs, FhsMorphism};
use fhs_core::functors::twist_fhs;
use fhs_core::io::{parse, print_payload, Payload};
use fhs_core::random::{FhsShape, Gen};
use fhs_core::vecn::{ext1_vec2_from_hom, is_short_exact, snake_boundary, TowerMorphism};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

fn scalar() -> impl Strategy<Value = GaussScalar> {
    (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, b, c, d)| {
        &GaussScalar::from_ratio(a, b) + &(&GaussScalar::from_ratio(c, d) * &GaussScalar::i())
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn scalars_print_and_parse(x in scalar()) {
        prop_assert_eq!(GaussScalar::from_str(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn division_undoes_multiplication(a in scalar(), b in scalar()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(&(&a * &b) / &b, a);
    }

    #[test]
    fn canonical_bases_ignore_generators(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let m = g.matrix(3, 2);
        let mixed = &m * &g.invertible(2);
        prop_assert_eq!(canonical_subspace(&m), canonical_subspace(&mixed));
    }

    #[test]
    fn iota_and_eta_images(seed in any::<u64>(), n in 1usize..4) {
        let v = Gen::new(seed).tower(n, 3);
        let up = v.iota();
        prop_assert_eq!(up.truncate(), v.clone());
        let iso = up.in_iota_image().expect("iota output is in the image");
        prop_assert!(iso.check().is_ok() && iso.is_iso());
        prop_assert!(v.eta().in_eta_image());
        prop_assert_eq!(v.eta().truncate(), v);
    }

    #[test]
    fn vec2_boundary_inverts_construction(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (v, w) = (g.tower(2, 3), g.tower(2, 3));
        let (r, c) = fhs_core::vecn::boundary_shape(&v, &w);
        let phi = g.matrix(r, c);
        let (i, p) = ext1_vec2_from_hom(&v, &w, &phi).unwrap();
        prop_assert!(is_short_exact(&i, &p));
        prop_assert_eq!(snake_boundary(&i, &p).unwrap(), phi);
        let split = ext1_vec2_from_hom(&v, &w, &fhs_core::exact::GMatrix::zeros(r, c)).unwrap();
        prop_assert!(snake_boundary(&split.0, &split.1).unwrap().is_zero());
        prop_assert!(TowerMorphism::identity(&v).is_iso());
    }

    #[test]
    fn twisting_is_involutive(seed in any::<u64>(), k in -3i64..4) {
        let x = Gen::new(seed).fhs(&FhsShape::small(2));
        let y = twist_fhs(&x, k);
        prop_assert!(y.validate().is_valid());
        prop_assert_eq!(twist_fhs(&y, -k), x);
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), level in 1usize..4) {
        let x = Gen::new(seed).fhs(&FhsShape { torsion: true, ..FhsShape::small(level) });
        let text = print_payload(Payload::Fhs(x.clone()));
        let doc = parse(&text).unwrap();
        prop_assert_eq!(&doc.payload, &Payload::Fhs(x));
        prop_assert_eq!(print_payload(doc.payload), text);
    }

    #[test]
    fn kernel_and_cokernel_sequences_are_exact(seed in any::<u64>(), level in 1usize..4) {
        let f = Gen::new(seed).interesting_morphism(&FhsShape { torsion: true, ..FhsShape::small(level) });
        let kc = ker_coker_fhs(&f).unwrap();
        prop_assert!(kc.ker().validate().is_valid() && kc.coker().validate().is_valid());
        // 0 -> ker -> X and Y -> coker -> 0 extend to short exact sequences through the image
        let im = ker_coker_fhs(&kc.proj).unwrap();
        prop_assert!(exactness_issues(&im.incl, &kc.proj).is_empty());
        let coim = ker_coker_fhs(&kc.incl).unwrap();
        prop_assert!(exactness_issues(&kc.incl, &coim.proj).is_empty());
        prop_assert!(f.compose(&FhsMorphism::identity(&f.source)).same_as(&f));
    }
}
