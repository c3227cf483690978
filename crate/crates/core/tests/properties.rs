use std::sync::{Arc, OnceLock};

use lcsknot::group::{AmbientGroup, FiniteGroup, GElem, Group, OverG};
use lcsknot::homology::{h1_kernel_via_rs, h1_twisted, GroupRingElement};
use lcsknot::intmat::{abelian_invariants, from_i64, smith};
use lcsknot::io::format::{parse_document, parse_word, render_document, InputDocument};
use lcsknot::nq::{nilpotent_quotient, NilpotentQuotient};
use lcsknot::pc::{PcGroup, PcPresentation};
use lcsknot::relquo::RelativeQuotient;
use lcsknot::words::{FpPresentation, FreeWord};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn word(ngens: usize, max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..ngens, prop_oneof![-2i64..=-1, 1i64..=2]), 0..=max_len)
        .prop_map(FreeWord::from_syllables)
}

fn names(n: usize) -> Vec<String> {
    ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect()
}

fn free_nq() -> &'static NilpotentQuotient {
    static Q: OnceLock<NilpotentQuotient> = OnceLock::new();
    Q.get_or_init(|| nilpotent_quotient(&FpPresentation::free(["x", "y"]), 4).unwrap())
}

fn f2_over_z3() -> &'static RelativeQuotient {
    static Q: OnceLock<RelativeQuotient> = OnceLock::new();
    Q.get_or_init(|| {
        let g = Arc::new(AmbientGroup::cyclic(3).unwrap());
        let over = OverG::new(FpPresentation::free(["x", "y"]), g, vec![GElem::Fin(1), GElem::Fin(0)]).unwrap();
        RelativeQuotient::new(&over, 3).unwrap()
    })
}

fn s3() -> AmbientGroup {
    let (fg, _) = FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
    AmbientGroup::table(fg.table().to_vec()).unwrap()
}

fn ring_element(order: usize) -> impl Strategy<Value = GroupRingElement> {
    prop::collection::vec((0..order, -3i64..=3), 0..5)
        .prop_map(|t| GroupRingElement::from_terms(t.into_iter().map(|(h, c)| (GElem::Fin(h), c))))
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b[0].len();
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

// Laplace expansion, fine for the 3x3 inputs below
fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_words_form_a_group(u in word(3, 6), v in word(3, 6), w in word(3, 6)) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        prop_assert!(u.mul(&u.inverse()).is_identity());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
        prop_assert_eq!(u.mul(&FreeWord::identity()), u.clone());
    }

    #[test]
    fn word_text_round_trips(u in word(4, 8)) {
        let n = names(4);
        prop_assert_eq!(parse_word(&u.render(&n), &n).unwrap(), u);
    }

    #[test]
    fn collection_is_a_group_law(u in word(2, 6), v in word(2, 6), w in word(2, 6)) {
        let q = free_nq();
        let (x, y, z) = (q.map_word(&u), q.map_word(&v), q.map_word(&w));
        let g = &q.group;
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        prop_assert_eq!(q.map_word(&u.mul(&v)), g.mul(&x, &y));
    }

    #[test]
    fn heisenberg_collection_is_a_group_law(a in prop::collection::vec(-4i64..=4, 3), b in prop::collection::vec(-4i64..=4, 3), c in prop::collection::vec(-4i64..=4, 3)) {
        let g = PcGroup::new(PcPresentation::heisenberg()).unwrap();
        let (a, b, c) = (g.collect(&syl(&a)), g.collect(&syl(&b)), g.collect(&syl(&c)));
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
        prop_assert!(g.is_identity(&g.mul(&g.inv(&a), &a)));
        let k = g.comm(&a, &b);
        prop_assert_eq!(g.mul(&k, &c), g.mul(&c, &k));
    }

    #[test]
    fn substitution_commutes_with_collection(w in word(2, 5), s in word(2, 4), t in word(2, 4)) {
        let q = free_nq();
        let direct = q.map_word(&w.substitute(&[s.clone(), t.clone()]));
        let images = [q.map_word(&s), q.map_word(&t)];
        prop_assert_eq!(direct, q.group.eval_word(&w, &images));
    }

    #[test]
    fn projection_routes_agree(u in word(2, 6), v in word(2, 6)) {
        let e = f2_over_z3();
        prop_assert_eq!(e.project(&u), e.project_by_rewriting(&u).unwrap());
        prop_assert_eq!(e.project(&u.mul(&v)), e.mul(&e.project(&u), &e.project(&v)));
    }

    #[test]
    fn regular_representation_is_multiplicative(u in ring_element(6), v in ring_element(6)) {
        let g = s3();
        let lhs = u.mul(&v, &g).regular_matrix(&g).unwrap();
        let rhs = matmul(&u.regular_matrix(&g).unwrap(), &v.regular_matrix(&g).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn smith_diagonal_divides_and_keeps_determinant(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 3)) {
        let (diag, _) = smith(&from_i64(&m), 3);
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(!w[0].is_zero() && (&w[1] % &w[0]).is_zero());
            }
        }
        prop_assert!(diag.iter().all(|d| !d.is_negative()));
        let d = det(&m);
        let prod = diag.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc * x);
        let full = diag.len() == 3 && diag.iter().all(|x| !x.is_zero());
        if full {
            prop_assert_eq!(prod, num_bigint::BigInt::from(d.abs()));
        } else {
            prop_assert_eq!(d, 0);
        }
        let inv = abelian_invariants(&from_i64(&m), 3).unwrap();
        if d != 0 {
            prop_assert_eq!(inv.order(), Some(d.unsigned_abs()));
        } else {
            prop_assert!(inv.free_rank > 0);
        }
    }

    #[test]
    fn documents_round_trip(rels in prop::collection::vec(word(3, 5), 0..3)) {
        let rels: Vec<FreeWord> = rels.into_iter().filter(|r| !r.is_identity()).collect();
        let doc = InputDocument {
            group: Some(FpPresentation::new(names(3), rels).unwrap()),
            ..Default::default()
        };
        let text = render_document(&doc);
        prop_assert_eq!(parse_document(&text).unwrap(), doc);
    }

    #[test]
    fn twisted_h1_matches_kernel_route(
        n in 2usize..=4,
        ex in 1usize..=3,
        pairs in prop::collection::vec((word(2, 3), word(2, 3)), 1..3),
    ) {
        let rels: Vec<FreeWord> = pairs.iter().map(|(u, v)| FreeWord::commutator(u, v)).filter(|r| !r.is_identity()).collect();
        let pi = FpPresentation::new(vec!["x".into(), "y".into()], rels).unwrap();
        let g = Arc::new(AmbientGroup::cyclic(n).unwrap());
        let over = OverG::new(pi, g, vec![GElem::Fin(1), GElem::Fin(ex % n)]);
        prop_assume!(over.is_ok());
        let over = over.unwrap();
        let (a, b) = (h1_twisted(&over), h1_kernel_via_rs(&over));
        prop_assert_eq!(a.unwrap(), b.unwrap());
    }
}

fn syl(e: &[i64]) -> Vec<(usize, i64)> {
    e.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
}
