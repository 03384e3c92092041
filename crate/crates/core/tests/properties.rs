use std::sync::Arc;

use artin_core::artinian::ArtinianAlgebra;
use artin_core::exactpoly::{Field, Monomial};
use artin_core::family::DirectedFamily;
use artin_core::flatcert::{random_relation, solve, verify};
use artin_core::idealkit::{height_monomial, is_regular_sequence, FgIdeal};
use artin_core::series::{ext_membership, minimal_primes, random_series, residue_map, SeriesContext, SeriesElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rationals(n: usize, d: u32) -> Arc<SeriesContext> {
    let fam = DirectedFamily::constant("Q", ArtinianAlgebra::base_field(Field::Rational));
    SeriesContext::with_standard_vars(fam, n, d).unwrap()
}

fn monomials(ctx: &Arc<SeriesContext>, exps: &[Vec<u32>]) -> Vec<SeriesElement> {
    let fam = ctx.family();
    let one = fam.base().one();
    exps.iter()
        .map(|e| {
            ctx.term(&fam.base_handle(), &one, Monomial::from_exponents(e.clone()))
                .unwrap()
        })
        .collect()
}

/// Nonzero exponent vectors in 3 variables with entries at most 2.
fn exponent() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=2, 3).prop_filter("not a unit", |e| e.iter().any(|&x| x > 0))
}

/// Least number of variables meeting every support.
fn cover(exps: &[Vec<u32>]) -> usize {
    (0u32..8)
        .filter(|s| exps.iter().all(|e| (0..3).any(|v| s & (1 << v) != 0 && e[v] > 0)))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn height_is_at_most_generator_count(exps in prop::collection::vec(exponent(), 1..=3)) {
        let ctx = rationals(3, 7);
        let comps = minimal_primes(&ctx, &ctx.family().base_handle()).unwrap();
        let gens = monomials(&ctx, &exps);
        let h = height_monomial(&gens, &comps[0]).unwrap();
        prop_assert!(h <= gens.len());
        prop_assert_eq!(h, cover(&exps));
    }

    #[test]
    fn regular_iff_prefix_heights(exps in prop::collection::vec(exponent(), 1..=3)) {
        let ctx = rationals(3, 7);
        let gens = monomials(&ctx, &exps);
        let regular = is_regular_sequence(&ctx, &gens).unwrap().is_regular();
        let prefixes = (1..=exps.len()).all(|i| cover(&exps[..i]) == i);
        prop_assert_eq!(regular, prefixes);
    }

    #[test]
    fn permuting_monomial_sequences(exps in prop::collection::vec(exponent(), 2..=3), rot in 0usize..3) {
        let ctx = rationals(3, 7);
        let gens = monomials(&ctx, &exps);
        let mut perm = gens.clone();
        perm.rotate_left(rot % gens.len());
        perm.swap(0, gens.len() - 1);
        let a = is_regular_sequence(&ctx, &gens).unwrap().is_regular();
        let b = is_regular_sequence(&ctx, &perm).unwrap().is_regular();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn certificates_verify(seed in any::<u64>(), len in 1usize..=3, which in 0usize..3) {
        let (fam, s) = match which {
            0 => (DirectedFamily::example_ring(Field::Rational), 2),
            1 => (DirectedFamily::split(Field::Rational, 2).unwrap(), 0),
            _ => (DirectedFamily::quadratic_tower(), 1),
        };
        let ctx = SeriesContext::with_standard_vars(Arc::clone(&fam), 2, 3).unwrap();
        let inst = random_relation(&ctx, &fam.window(s), len, seed).unwrap();
        prop_assert!(inst.relation().unwrap().is_zero());
        let cert = solve(&inst).unwrap();
        prop_assert!(verify(&inst, &cert).unwrap());
    }

    #[test]
    fn kernel_identity(seed in any::<u64>(), which in 0usize..2) {
        let (fam, s) = match which {
            0 => (DirectedFamily::example_ring(Field::Rational), 2),
            _ => (DirectedFamily::split(Field::Rational, 2).unwrap(), 0),
        };
        let ctx = SeriesContext::with_standard_vars(Arc::clone(&fam), 2, 3).unwrap();
        let h = fam.window(s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in minimal_primes(&ctx, &h).unwrap() {
            let mut f = random_series(&ctx, &h, 0.5, &mut rng).unwrap();
            if seed % 2 == 0 {
                let g = &c.maximal().generators()[0];
                f = ctx.constant(&h, g).unwrap().mul(&f).unwrap();
            }
            prop_assert_eq!(residue_map(&f, &c).unwrap().is_zero(), ext_membership(&f, &c).unwrap());
        }
    }
}

#[test]
fn zero_ideal_has_height_zero() {
    let ctx = rationals(2, 4);
    let comps = minimal_primes(&ctx, &ctx.family().base_handle()).unwrap();
    let i = FgIdeal::new(&ctx, Vec::new()).unwrap();
    assert_eq!(height_monomial(i.gens(), &comps[0]).unwrap(), 0);
}
