use fusionseed::criterion;
use fusionseed::gfp::{self, FpMatrix, Prime, Subspace};
use fusionseed::grp;
use fusionseed::modrep::{self, FpModule};
use fusionseed::zoo::{self, FamilySpec, Sl2Group};
use proptest::prelude::*;

fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

fn matrix(p: u32, n: usize) -> impl Strategy<Value = FpMatrix> {
    prop::collection::vec(0..p as u8, n * n).prop_map(move |d| FpMatrix::from_data(prime(p), n, n, d))
}

fn invertible(p: u32, n: usize) -> impl Strategy<Value = FpMatrix> {
    matrix(p, n).prop_filter("singular", FpMatrix::is_invertible)
}

fn vectors(p: u32, n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0..p as u8, n), 0..=k)
}

fn conjugate(v: &FpModule, c: &FpMatrix) -> FpModule {
    let ci = c.inverse().unwrap();
    let gens = v.generators().iter().map(|g| c.mul(g).mul(&ci)).collect();
    FpModule::from_generators(v.prime(), v.dim(), gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_two_sided(a in invertible(7, 4)) {
        let b = a.inverse().unwrap();
        prop_assert!(a.mul(&b).is_identity());
        prop_assert!(b.mul(&a).is_identity());
    }

    #[test]
    fn rank_plus_nullity(a in matrix(5, 5)) {
        let k = gfp::kernel_basis(&a);
        let im = gfp::image_basis(&a);
        prop_assert_eq!(k.dim() + im.dim(), 5);
        for v in k.basis() {
            prop_assert!(a.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn subspace_dimension_formula(u in vectors(5, 4, 3), w in vectors(5, 4, 3)) {
        let p = prime(5);
        let (u, w) = (Subspace::span(p, 4, &u), Subspace::span(p, 4, &w));
        prop_assert_eq!(u.sum(&w).dim() + u.intersect(&w).dim(), u.dim() + w.dim());
        prop_assert_eq!(u.annihilator().dim(), 4 - u.dim());
        prop_assert!(u.sum(&w).contains(&u) && u.contains(&u.intersect(&w)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The verdict, `m`, the `E0` menu and `μ` do not depend on the basis.
    #[test]
    fn criterion_is_basis_free(case in 0usize..6, c in invertible(5, 3)) {
        let specs = [
            FamilySpec::Sl2pSimple { p: 5, i: 3, group: Sl2Group::Full },
            FamilySpec::Sl2pSimple { p: 5, i: 3, group: Sl2Group::Gl2 },
            FamilySpec::Sl2pSimple { p: 5, i: 3, group: Sl2Group::Base },
            FamilySpec::SnDeleted { p: 5, n: 5, scalars: false },
            FamilySpec::SnDeleted { p: 5, n: 5, scalars: true },
            FamilySpec::AnDeleted { p: 5, n: 5, scalars: false },
        ];
        let v = zoo::build(&specs[case], false).unwrap().module;
        let w = conjugate(&v, &c);
        let (a, b) = (criterion::evaluate(&v).unwrap(), criterion::evaluate(&w).unwrap());
        prop_assert_eq!(a.passes, b.passes);
        prop_assert_eq!(a.m, b.m);
        prop_assert_eq!(a.menu_labels(), b.menu_labels());
        prop_assert_eq!(a.mu.map(|m| m.image), b.mu.map(|m| m.image));
    }

    /// `Z`, `[V, U]` and the Jordan profile of `u` fit together: the number of
    /// blocks is `dim Z`, a single block has length `m`, and `Z0 = Z ∩ [V, U]`.
    #[test]
    fn canonical_subspaces_match_jordan_blocks(p in prop::sample::select(vec![5u32, 7]), i in 2usize..=7, ext in any::<bool>()) {
        prop_assume!(i <= p as usize);
        let v = if ext && i < p as usize - 1 {
            zoo::sl2_ext(p, &[p as usize - 1 - i, i], Sl2Group::Gl2).unwrap()
        } else {
            zoo::sl2_simple(p, i, Sl2Group::Gl2).unwrap()
        };
        let class = grp::class_gg(v.group()).unwrap();
        let syl = class.sylow().unwrap();
        let cs = modrep::canonical_subspaces(&v, syl);
        let profile = modrep::jordan_profile(&v, &syl.u).unwrap();
        prop_assert_eq!(profile.len(), cs.z.dim());
        prop_assert_eq!(cs.commutator.dim(), v.dim() - cs.z.dim());
        prop_assert_eq!(cs.z0.clone(), cs.z.intersect(&cs.commutator));
        if profile.len() == 1 {
            prop_assert_eq!(profile[0], cs.m);
        }
    }

    /// Catalog labels parse back to the same `FamilySpec`.
    #[test]
    fn labels_parse_back(k in 0usize..64) {
        let catalog = zoo::catalog();
        let spec = &catalog[k % catalog.len()];
        let label = spec.label();
        let mut words = label.split_whitespace();
        let family = words.next().unwrap();
        let params: Vec<String> = words.map(str::to_string).collect();
        prop_assert_eq!(&FamilySpec::from_params(family, &params).unwrap(), spec);
    }
}
