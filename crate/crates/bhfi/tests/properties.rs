mod common;

use proptest::prelude::*;

use bhfi::equivalence::homology_basis_of_mor;
use bhfi::f2::{mapping_cone, reduce, ChainComplex, ChainMap};
use bhfi::standard::{cfa_zero_handlebody_over, cfda_az, split_algebra};
use bhfi::structures::{box_tensor, check_structure, is_homotopy_equivalence};

fn random_complex(n: usize, seed: u64) -> ChainComplex {
    // Strictly two-step: columns in the upper half hit only the lower half, so d^2 = 0.
    let mut x = seed;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    let half = n / 2;
    let mut d = vec![Vec::new(); n];
    for col in d.iter_mut().skip(half) {
        for i in 0..half {
            if next() % 3 == 0 {
                col.push(i as u32);
            }
        }
    }
    ChainComplex::new((0..n).map(|i| format!("g{i}")).collect(), d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_type_d_is_valid(seed in any::<u64>()) {
        let p = common::random_type_d(seed);
        prop_assert!(check_structure(&p).is_empty());
        prop_assert!(p.is_bounded());
    }

    #[test]
    fn az_tensor_is_a_structure_equivalent_to_p(seed in any::<u64>()) {
        let p = common::random_type_d(seed);
        let alg = p.out_strands().unwrap().clone();
        let q = box_tensor(&cfda_az(&alg).unwrap(), &p).unwrap().0;
        prop_assert!(check_structure(&q).is_empty());
        // Mor(AZ ⊠ P, P) and Mor(P, P) have the same homology.
        let a = homology_basis_of_mor(&q, &p).unwrap().dim();
        let b = homology_basis_of_mor(&p, &p).unwrap().dim();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reduce_preserves_homology(seed in any::<u64>()) {
        let p = common::random_type_d(seed);
        let m = cfa_zero_handlebody_over(&split_algebra(1).unwrap()).unwrap();
        let c = box_tensor(&m, &p).unwrap().0.to_chain_complex();
        let c = ChainComplex::new(c.labels().to_vec(), c.differential().to_vec()).unwrap();
        let r = reduce(&c).unwrap();
        prop_assert_eq!(r.reduced.len(), c.homology().dim);
        prop_assert!(r.to_reduced.is_chain_map(&c, &r.reduced));
        prop_assert!(r.from_reduced.is_chain_map(&r.reduced, &c));
        prop_assert!(is_quasi(&c, &r.reduced, &r.to_reduced));
    }

    #[test]
    fn identity_is_an_equivalence(seed in any::<u64>()) {
        let p = common::random_type_d(seed);
        prop_assert!(is_homotopy_equivalence(&p, &p, &p.identity()).unwrap());
    }

    #[test]
    fn homology_invariant_under_permutation(n in 2usize..24, seed in any::<u64>(), shift in 0usize..24) {
        let c = random_complex(n, seed | 1);
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        prop_assert_eq!(c.permuted(&perm).homology().dim, c.homology().dim);
    }

    #[test]
    fn cone_of_identity_is_acyclic(n in 1usize..20, seed in any::<u64>()) {
        let c = random_complex(n, seed | 1);
        let cone = mapping_cone(&c, &c, &ChainMap::identity(n)).unwrap();
        prop_assert_eq!(cone.homology().dim, 0);
    }

    #[test]
    fn euler_characteristic_mod_two(n in 1usize..24, seed in any::<u64>()) {
        let c = random_complex(n, seed | 1);
        prop_assert_eq!(c.homology().dim % 2, n % 2);
    }
}

fn is_quasi(a: &ChainComplex, b: &ChainComplex, f: &ChainMap) -> bool {
    bhfi::f2::is_quasi_isomorphism(a, b, f).unwrap()
}
