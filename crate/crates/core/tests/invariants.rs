//! Property suites for J and the multiplicity engines. Run alone with
//! `cargo test -p hornvol --test invariants`.

use hornvol::bzpolytope::{lr_bz_b2, Point};
use hornvol::multiplicity::LrEngine;
use hornvol::rational::{q, qi, Rational};
use hornvol::rootsys::weyl::B2Weyl;
use hornvol::volume::{horn_contains_b2, horn_polygon_b2, j_b2};
use hornvol::RootSystem;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-80i64..80, 1i64..6).prop_map(|(n, d)| q(n, d))
}

fn pt() -> impl Strategy<Value = Point> {
    (rat(), rat()).prop_map(|(a, b)| [a, b])
}

/// `x1 > x2 > 0` with small denominators.
fn regular() -> impl Strategy<Value = Point> {
    (1i64..40, 1i64..40, 1i64..4).prop_map(|(a, b, d)| [q(a + b, d), q(b, d)])
}

fn labels() -> impl Strategy<Value = [i64; 2]> {
    (0i64..7, 0i64..7).prop_map(|(a, b)| [a, b])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weyl_skew(a in pt(), b in pt(), g in pt()) {
        let base = j_b2(&a, &b, &g);
        for w in B2Weyl::all() {
            let s = qi(w.sign() as i64);
            prop_assert_eq!(j_b2(&w.apply(&a), &b, &g), &base * &s);
            prop_assert_eq!(j_b2(&a, &w.apply(&b), &g), &base * &s);
            prop_assert_eq!(j_b2(&a, &b, &w.apply(&g)), &base * &s);
        }
    }

    #[test]
    fn alpha_beta_symmetry(a in pt(), b in pt(), g in pt()) {
        prop_assert_eq!(j_b2(&a, &b, &g), j_b2(&b, &a, &g));
    }

    #[test]
    fn quadratic_homogeneity(a in pt(), b in pt(), g in pt(), n in 1i64..9, d in 1i64..4) {
        let s = q(n, d);
        let sc = |x: &Point| [&x[0] * &s, &x[1] * &s];
        prop_assert_eq!(j_b2(&sc(&a), &sc(&b), &sc(&g)), j_b2(&a, &b, &g) * &s * &s);
    }

    #[test]
    fn positive_inside_zero_outside(a in regular(), b in regular(), w in proptest::collection::vec(1i64..30, 8)) {
        let horn = horn_polygon_b2(&a, &b).unwrap();
        prop_assume!(horn.vertices.len() >= 3);
        let vs = &horn.vertices;
        let ws: Vec<Rational> = vs.iter().enumerate().map(|(i, _)| qi(w[i % w.len()])).collect();
        let tot: Rational = ws.iter().sum();
        let g = [
            vs.iter().zip(&ws).map(|(v, x)| &v[0] * x).sum::<Rational>() / &tot,
            vs.iter().zip(&ws).map(|(v, x)| &v[1] * x).sum::<Rational>() / &tot,
        ];
        prop_assert!(j_b2(&a, &b, &g).is_positive());
        // push the same point far outside, staying in the chamber
        let far = [&g[0] + &a[0] + &b[0] + qi(1), g[1].clone()];
        prop_assert!(!horn_contains_b2(&a, &b, &far).unwrap());
        prop_assert!(j_b2(&a, &b, &far).is_zero());
    }

    #[test]
    fn lr_symmetric_and_methods_agree(l in labels(), m in labels(), n in labels()) {
        let rs = RootSystem::b2();
        let e = LrEngine::new(&rs).unwrap();
        let k = e.klimyk(&l, &m, &n).unwrap();
        prop_assert_eq!(k, e.klimyk(&m, &l, &n).unwrap());
        prop_assert_eq!(k, e.steinberg(&l, &m, &n).unwrap());
        prop_assert_eq!(k, lr_bz_b2(&l, &m, &n));
        if !rs.is_compatible(&l, &m, &n) {
            prop_assert_eq!(k, 0);
        }
    }
}
