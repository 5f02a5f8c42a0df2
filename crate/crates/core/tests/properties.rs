use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use tropiclust::character::initial_characters;
use tropiclust::lattice::{lattice_adjoint, pair, sign_split, smith_cokernel, IntMatrix, IntVector, LabeledLattice, Lattice};
use tropiclust::poly::LaurentPoly;
use tropiclust::random::{random_path, random_seed, rng_from, SeedShape};
use tropiclust::seed::json::{parse_seed_value, seed_value};
use tropiclust::seed::{ef_matrices, mutate_matrix, Seed, Sign};
use tropiclust::tropical::{initial_state, tropical_audit};

fn lattice(d: &[i64]) -> Lattice {
    let labels: Vec<String> = (1..=d.len()).map(|i| format!("u{i}")).collect();
    LabeledLattice::with_multipliers(&labels, d).unwrap().shared()
}

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| x.into()).collect()
}

fn multipliers() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=4, 1..=4)
}

fn seed() -> impl Strategy<Value = (Seed, u64)> {
    any::<u64>().prop_map(|x| {
        let mut rng = rng_from(x);
        (random_seed(&mut rng, &SeedShape::default()), x)
    })
}

fn direction(s: &Seed, pick: usize) -> String {
    let d = s.directions();
    d[pick % d.len()].clone()
}

/// Product of random elementary row operations: unimodular.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect()).collect();
    for &(a, b, c) in ops {
        let (a, b) = (a % n, b % n);
        if a == b {
            m.swap(a, (a + 1) % n);
            continue;
        }
        let row = m[b].clone();
        for (x, y) in m[a].iter_mut().zip(row) {
            *x += y * c;
        }
    }
    m
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect())
        .collect()
}

fn poly(lat: &Lattice) -> impl Strategy<Value = LaurentPoly> {
    let n = lat.len();
    let lat = lat.clone();
    prop::collection::vec((prop::collection::vec(-2i64..=2, n), -3i64..=3), 0..5)
        .prop_map(move |ts| LaurentPoly::from_terms(&lat, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_is_bilinear(
        d in multipliers(),
        raw in prop::collection::vec(-5i64..=5, 12),
        a in -4i64..=4,
        b in -4i64..=4,
    ) {
        let l = lattice(&d);
        let n = d.len();
        let v = |k: usize| IntVector::from_dense(&l, &raw[k * 4..k * 4 + n]).unwrap();
        let (x, y, z) = (v(0), v(1), v(2));
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let comb = x.scale(&a).try_add(&y.scale(&b)).unwrap();
        let lhs = pair(&comb, &z).unwrap();
        prop_assert_eq!(lhs, &a * pair(&x, &z).unwrap() + &b * pair(&y, &z).unwrap());
        let lhs = pair(&z, &comb).unwrap();
        prop_assert_eq!(lhs, &a * pair(&z, &x).unwrap() + &b * pair(&z, &y).unwrap());
        prop_assert_eq!(pair(&x, &y).unwrap(), pair(&y, &x).unwrap());
    }

    #[test]
    fn adjoint_is_an_involution(
        dr in multipliers(),
        dc in multipliers(),
        raw in prop::collection::vec(-3i64..=3, 16),
        xs in prop::collection::vec(-3i64..=3, 4),
        ys in prop::collection::vec(-3i64..=3, 4),
    ) {
        let (rows, cols) = (lattice(&dr), lattice(&dc));
        // multiples of every row multiplier keep the adjoint integral
        let data: Vec<Vec<i64>> =
            (0..dr.len()).map(|i| (0..dc.len()).map(|j| raw[i * 4 + j] * 12).collect()).collect();
        let a = IntMatrix::from_rows(&rows, &cols, &data).unwrap();
        let star = lattice_adjoint(&a).unwrap();
        prop_assert_eq!(&lattice_adjoint(&star).unwrap(), &a);

        let x = IntVector::from_dense(&rows, &xs[..dr.len()]).unwrap();
        let y = IntVector::from_dense(&cols, &ys[..dc.len()]).unwrap();
        let weighted = |u: &IntVector, v: &IntVector, d: &[i64]| -> BigRational {
            u.dense().into_iter().zip(v.dense()).zip(d)
                .map(|((p, q), w)| BigRational::new(p * q, BigInt::from(*w)))
                .fold(BigRational::zero(), |s, t| s + t)
        };
        let lhs = weighted(&star.try_apply(&x).unwrap(), &y, &dc);
        let rhs = weighted(&x, &a.try_apply(&y).unwrap(), &dr);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sign_split_recombines(d in multipliers(), raw in prop::collection::vec(-9i64..=9, 4)) {
        let l = lattice(&d);
        let v = IntVector::from_dense(&l, &raw[..d.len()]).unwrap();
        let (p, m) = sign_split(&v);
        prop_assert!(p.is_nonnegative() && m.is_nonnegative());
        prop_assert_eq!(p.try_sub(&m).unwrap(), v);
        for (x, y) in p.dense().iter().zip(m.dense()) {
            prop_assert!(x.is_zero() || y.is_zero());
        }
    }

    #[test]
    fn smith_form_is_unimodular_invariant(
        rows in 1usize..=4,
        cols in 1usize..=4,
        raw in prop::collection::vec(-6i64..=6, 16),
        left in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8),
        right in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8),
    ) {
        let (rl, cl) = (lattice(&vec![1; rows]), lattice(&vec![1; cols]));
        let a: Vec<Vec<BigInt>> = (0..rows).map(|i| big(&raw[i * 4..i * 4 + cols])).collect();
        let transformed = matmul(&matmul(&unimodular(rows, &left), &a), &unimodular(cols, &right));
        let m = IntMatrix::from_rows(&rl, &cl, &a).unwrap();
        let t = IntMatrix::from_rows(&rl, &cl, &transformed).unwrap();
        prop_assert_eq!(smith_cokernel(&m), smith_cokernel(&t));
    }

    #[test]
    fn mutation_is_involutive((s, _) in seed(), pick in 0usize..8) {
        let k = direction(&s, pick);
        let once = s.mutate(&k).unwrap();
        prop_assert_eq!(once.mutate(&k).unwrap(), s);
    }

    #[test]
    fn mutation_negates_column_and_keeps_symmetrizer((s, _) in seed(), pick in 0usize..8) {
        let k = direction(&s, pick);
        let m = s.mutate(&k).unwrap();
        prop_assert!(m.validate().is_valid(), "{}", m.validate());
        prop_assert_eq!(m.b().column(&k).unwrap(), s.b().column(&k).unwrap().scale(&BigInt::from(-1)));
        prop_assert_eq!(m.lattice().multipliers(), s.lattice().multipliers());
    }

    #[test]
    fn sign_choice_does_not_matter((s, _) in seed(), pick in 0usize..8) {
        let k = direction(&s, pick);
        let want = mutate_matrix(&s, &k).unwrap();
        for sign in Sign::both() {
            let (e, f) = ef_matrices(&s, &k, sign).unwrap();
            prop_assert_eq!(&e.try_mul(s.b()).unwrap().try_mul(&f).unwrap(), &want);
            prop_assert!(e.try_mul(&e).unwrap() == IntMatrix::identity(s.lattice()));
            prop_assert!(f.try_mul(&f).unwrap() == IntMatrix::identity(s.mutable_lattice()));
        }
    }

    #[test]
    fn tropical_identities_along_paths((s, x) in seed(), len in 1usize..6) {
        let mut rng = rng_from(x ^ 0x9e37);
        let path = random_path(&mut rng, &s, len);
        let mut st = initial_state(&s).unwrap();
        for k in &path {
            let next = st.mutate(k).unwrap();
            let audit = tropical_audit(&next);
            prop_assert!(audit.passed(), "{:?}: {}", next.path(), audit);
            prop_assert!(next.mutate(k).unwrap().same_data(&st));
            st = next;
        }
    }

    #[test]
    fn seed_json_round_trips((s, _) in seed(), pick in 0usize..8) {
        let m = s.mutate(&direction(&s, pick)).unwrap();
        for t in [s, m] {
            let back = parse_seed_value(&seed_value(&t, None)).unwrap();
            prop_assert_eq!(back.seed, t);
        }
    }

    #[test]
    fn character_mutation_is_involutive((s, _) in seed(), pick in 0usize..8) {
        let k = direction(&s, pick);
        let cs = initial_characters(&s).unwrap();
        let once = cs.mutate(&k).unwrap();
        prop_assert!(once.mutate(&k).unwrap().same_data(&cs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laurent_ring_axioms(
        (p, q, r) in {
            let l = lattice(&[1, 1, 1]);
            (poly(&l), poly(&l), poly(&l))
        }
    ) {
        prop_assert_eq!(&(&p * &(&q + &r)), &(&(&p * &q) + &(&p * &r)));
        prop_assert_eq!(&(&p * &q), &(&q * &p));
        prop_assert!((&p - &p).is_zero());
        if !q.is_zero() {
            prop_assert_eq!((&p * &q).div_exact(&q), Some(p.clone()));
        }
    }
}
