//! Randomized property suites for the exterior algebra and the exact linear
//! algebra underneath it.

use num::Zero;
use proptest::prelude::*;

use lescalc::forms::{annihilator, binomial, tuple_basis, Form};
use lescalc::label::{Label, Level, Side};
use lescalc::ratmat::{rat, RationalMatrix, Subspace};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1200))]

    /// a∧b = (−1)^{pq} b∧a for random forms on T⁵.
    #[test]
    fn graded_commutativity(
        p in 1usize..=3,
        q in 1usize..=3,
        seed_a in proptest::collection::vec(-4i64..=4, 10),
        seed_b in proptest::collection::vec(-4i64..=4, 10),
    ) {
        let n = 5;
        let build = |degree: usize, seed: &[i64]| {
            let mut f = Form::zero(n, degree);
            for (t, c) in tuple_basis(n, degree).iter().zip(seed.iter().cycle()) {
                f = f.with_term(t, rat(*c));
            }
            f
        };
        let a = build(p, &seed_a);
        let b = build(q, &seed_b);
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        let expected = if (p * q) % 2 == 0 { ba.clone() } else { ba.neg() };
        prop_assert_eq!(ab, expected);
    }

    /// (a∧b)∧c = a∧(b∧c) for random small forms.
    #[test]
    fn wedge_associativity(
        seed_a in proptest::collection::vec(-3i64..=3, 5),
        seed_b in proptest::collection::vec(-3i64..=3, 10),
        seed_c in proptest::collection::vec(-3i64..=3, 10),
    ) {
        let n = 5;
        let build = |degree: usize, seed: &[i64]| {
            let mut f = Form::zero(n, degree);
            for (t, c) in tuple_basis(n, degree).iter().zip(seed.iter().cycle()) {
                f = f.with_term(t, rat(*c));
            }
            f
        };
        let a = build(1, &seed_a);
        let b = build(2, &seed_b);
        let c = build(2, &seed_c);
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    /// a∧a = 0 for every odd-degree form.
    #[test]
    fn odd_square_vanishes(
        degree in prop_oneof![Just(1usize), Just(3usize)],
        seed in proptest::collection::vec(-5i64..=5, 10),
    ) {
        let n = 5;
        let mut a = Form::zero(n, degree);
        for (t, c) in tuple_basis(n, degree).iter().zip(seed.iter().cycle()) {
            a = a.with_term(t, rat(*c));
        }
        prop_assert!(a.wedge(&a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// rank + nullity = columns on random small matrices.
    #[test]
    fn rank_nullity(
        rows in 1usize..=6,
        cols in 1usize..=6,
        entries in proptest::collection::vec(-5i64..=5, 36),
    ) {
        let mut m = RationalMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rat(entries[r * cols + c]));
            }
        }
        prop_assert_eq!(m.rank() + m.kernel_basis().dim(), cols);
        // kernel vectors annihilate
        for v in m.kernel_basis().basis() {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    /// cokernel representatives complete the image to the ambient space.
    #[test]
    fn cokernel_completes_image(
        rows in 1usize..=6,
        cols in 0usize..=6,
        entries in proptest::collection::vec(-5i64..=5, 36),
    ) {
        let mut m = RationalMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rat(entries[r * 6 + c]));
            }
        }
        let (reps, proj) = m.cokernel();
        let image = m.image_basis();
        prop_assert_eq!(reps.dim() + image.dim(), rows);
        prop_assert_eq!(reps.sum(&image).dim(), rows);
        for c in 0..cols {
            prop_assert!(proj.mul_vec(&m.col(c)).iter().all(|x| x.is_zero()));
        }
    }

    /// canonical subspace bases do not depend on the order of the spanning set.
    #[test]
    fn canonical_bases_under_shuffles(
        ambient in 1usize..=5,
        count in 1usize..=5,
        entries in proptest::collection::vec(-4i64..=4, 25),
        swap_a in 0usize..5,
        swap_b in 0usize..5,
    ) {
        let rows: Vec<Vec<_>> = (0..count)
            .map(|r| (0..ambient).map(|c| rat(entries[r * 5 + c])).collect())
            .collect();
        let mut shuffled = rows.clone();
        let (a, b) = (swap_a % count, swap_b % count);
        shuffled.swap(a, b);
        prop_assert_eq!(
            Subspace::from_rows(ambient, rows),
            Subspace::from_rows(ambient, shuffled)
        );
    }

    /// annihilator dimension = C(n,k) − rank of the pairing matrix.
    #[test]
    fn annihilator_dimension(
        k in 1usize..=3,
        count in 0usize..=3,
        entries in proptest::collection::vec(-3i64..=3, 30),
    ) {
        let n = 5;
        let dim = tuple_basis(n, k).len();
        let forms: Vec<Form> = (0..count)
            .map(|f| {
                let mut form = Form::zero(n, k);
                for (j, t) in tuple_basis(n, k).iter().enumerate() {
                    form = form.with_term(t, rat(entries[(f * dim + j) % 30]));
                }
                form
            })
            .collect();
        let ann = annihilator(&forms, n, k);
        let pairing_rank = if forms.is_empty() {
            0
        } else {
            RationalMatrix::from_rows(forms.iter().map(|f| f.coefficients()).collect()).rank()
        };
        prop_assert_eq!(ann.dim(), binomial(n, k) - pairing_rank);
    }

    /// rendered combinations parse back to themselves.
    #[test]
    fn combo_render_parse_round_trip(
        picks in proptest::collection::vec((0usize..10, -3i64..=3, 1i64..=2), 1..6),
    ) {
        use lescalc::label::{parse_combo, Combo};
        let pool = [
            "L13^0", "L2^1.5", "pt^3.5", "Lf^0", "L2f^1.5", "Z24^2", "Z13^1-",
            "Zf^1+", "T1+3", "(L13-L24)^3.5",
        ];
        let mut combo = Combo::zero();
        for (which, num, den) in picks {
            combo.push(
                lescalc::label::parse_label(pool[which]).unwrap(),
                lescalc::ratmat::ratio(num, den),
            );
        }
        let rendered = combo.render();
        let parsed = parse_combo(&rendered).unwrap();
        prop_assert_eq!(parsed, combo);
    }

    /// index substitution applied twice is the identity on labels.
    #[test]
    fn label_mirror_is_involutive(
        indices in proptest::collection::vec(1usize..=4, 0..=2),
        num in 0i64..=14,
        kind in 0usize..=2,
    ) {
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let level = Level::new(num, 2);
        let label = match kind {
            0 => Label::LevelTorus { indices: sorted, level },
            1 => Label::FixedTorus { indices: sorted, lambda: level },
            _ => Label::SphereSection { indices: sorted, lambda: level, side: Side::Minus },
        };
        let mirror = |l: &Label| l.map_indices_and_levels(
            |i| 5 - i,
            |s| Level::from_rational(&(rat(7) - s.to_rational())).unwrap(),
            |side| match side { Side::Minus => Side::Plus, Side::Plus => Side::Minus },
        );
        let (once, s1) = mirror(&label);
        let (twice, s2) = mirror(&once);
        prop_assert_eq!(twice, label);
        prop_assert_eq!(s1 * s2, 1);
    }
}
