use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use verlinde_core::{RootSystem, Weight};

const TYPES: &[&str] = &[
    "A1", "A2", "A3", "A4", "A7", "B2", "B3", "B4", "B6", "C2", "C3", "C4", "C5", "D4", "D5", "D6", "E6", "E7", "E8", "F4", "G2",
];

fn sys(s: &str) -> RootSystem {
    RootSystem::new(s.parse().unwrap())
}

/// Textbook constants: (dim 𝔤, |Φ⁺|, h^∨).
fn textbook(name: &str) -> (usize, usize, i64) {
    let n: usize = name[1..].parse().unwrap();
    let ni = n as i64;
    match &name[..1] {
        "A" => (n * (n + 2), n * (n + 1) / 2, ni + 1),
        "B" => (n * (2 * n + 1), n * n, 2 * ni - 1),
        "C" => (n * (2 * n + 1), n * n, ni + 1),
        "D" => (n * (2 * n - 1), n * (n - 1), 2 * ni - 2),
        "E" => match n {
            6 => (78, 36, 12),
            7 => (133, 63, 18),
            _ => (248, 120, 30),
        },
        "F" => (52, 24, 9),
        _ => (14, 6, 4),
    }
}

#[test]
fn global_constants_match_textbook_values() {
    for name in TYPES {
        let rs = sys(name);
        let (dim, npos, h) = textbook(name);
        assert_eq!(rs.dimension(), dim, "{name}");
        assert_eq!(rs.positive_roots().len(), npos, "{name}");
        assert_eq!(rs.dual_coxeter(), h, "{name}");
        assert_eq!(rs.dual_coxeter(), 1 + rs.comarks().iter().sum::<i64>(), "{name}");
    }
}

#[test]
fn highest_root_has_norm_two_and_rho_pairs_to_one() {
    for name in TYPES {
        let rs = sys(name);
        let theta = rs.highest_root();
        assert_eq!(rs.inner_product(theta, theta).unwrap(), BigRational::from_integer(2.into()), "{name}");
        for i in 1..=rs.rank() {
            assert_eq!(rs.coroot_pairing(rs.rho(), i).unwrap(), 1, "{name} i={i}");
        }
    }
}

#[test]
fn positive_roots_closed_under_simple_reflections() {
    for name in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"] {
        let rs = sys(name);
        let pos: BTreeSet<Weight> = rs.positive_roots().iter().cloned().collect();
        for beta in &pos {
            for i in 1..=rs.rank() {
                let img = rs.reflect(i, beta);
                assert!(pos.contains(&img) || pos.contains(&-&img), "{name}: s_{i} {beta}");
                if beta == rs.simple_root(i) {
                    assert_eq!(img, -beta);
                } else {
                    assert!(pos.contains(&img), "{name}: s_{i} permutes Φ⁺ minus α_{i}");
                }
            }
        }
    }
}

/// Closure of the simple reflection matrices, built independently of the
/// library's group enumeration.
fn weyl_closure_size(rs: &RootSystem) -> usize {
    let l = rs.rank();
    let start: Vec<Weight> = (0..l).map(|j| (0..l).map(|i| i64::from(i == j)).collect::<Vec<_>>().into()).collect();
    let mut seen: BTreeSet<Vec<Weight>> = BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(m) = frontier.pop() {
        for i in 1..=l {
            let next: Vec<Weight> = m.iter().map(|c| rs.reflect(i, c)).collect();
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.len()
}

#[test]
fn weyl_group_orders() {
    for name in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
        let rs = sys(name);
        let closure = weyl_closure_size(&rs);
        assert_eq!(rs.weyl_order(), closure as u128, "{name}");
        let group = rs.weyl_group().unwrap();
        assert_eq!(group.len(), closure, "{name}");
        let odd = group.iter().filter(|g| g.sign == -1).count();
        assert_eq!(2 * odd, closure, "{name}: half the elements are odd");
    }
    // S_{n+1} acting on the weights of the defining representation.
    for n in 1..=4usize {
        let factorial: u128 = (1..=(n as u128 + 1)).product();
        assert_eq!(sys(&format!("A{n}")).weyl_order(), factorial);
    }
    assert_eq!(sys("E8").weyl_order(), 696_729_600);
}

#[test]
fn qform_is_symmetric_positive_and_integral_on_roots() {
    for name in TYPES {
        let rs = sys(name);
        let f = rs.qform();
        let l = rs.rank();
        for i in 0..l {
            assert!(f[i][i] > BigRational::zero());
            for j in 0..l {
                assert_eq!(f[i][j], f[j][i], "{name}");
            }
        }
        for a in rs.positive_roots() {
            for b in rs.positive_roots() {
                let p = rs.inner_product(a, b).unwrap();
                // root pairings are integral or half-integral for |θ|² = 2
                assert!((p.clone() * BigRational::from_integer(6.into())).is_integer(), "{name}");
            }
        }
        let shortest = rs.positive_roots().iter().map(|a| rs.inner_product(a, a).unwrap()).min().unwrap();
        assert!(shortest <= BigRational::from_integer(2.into()) && shortest > BigRational::zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn theta_pairing_is_linear_and_matches_inner_product(
        ix in 0usize..TYPES.len(),
        a in proptest::collection::vec(-9i64..9, 8),
        b in proptest::collection::vec(-9i64..9, 8),
    ) {
        let rs = sys(TYPES[ix]);
        let l = rs.rank();
        let x = Weight::new(a[..l].to_vec());
        let y = Weight::new(b[..l].to_vec());
        let p = |w: &Weight| rs.coroot_pairing(w, 0).unwrap();
        prop_assert_eq!(p(&(&x + &y)), p(&x) + p(&y));
        let comark_sum: i64 = x.labels().iter().zip(rs.comarks()).map(|(u, c)| u * c).sum();
        prop_assert_eq!(p(&x), comark_sum);
        let ip = rs.inner_product(&x, rs.highest_root()).unwrap();
        prop_assert_eq!(BigRational::from_integer(p(&x).into()), ip);
    }

    #[test]
    fn simple_reflections_are_involutive_isometries(
        ix in 0usize..TYPES.len(),
        a in proptest::collection::vec(-9i64..9, 8),
        i in 1usize..9,
    ) {
        let rs = sys(TYPES[ix]);
        let l = rs.rank();
        let i = 1 + (i - 1) % l;
        let x = Weight::new(a[..l].to_vec());
        let y = rs.reflect(i, &x);
        prop_assert_eq!(rs.reflect(i, &y), x.clone());
        prop_assert_eq!(rs.inner_product_scaled(&x, &x), rs.inner_product_scaled(&y, &y));
        let (d, _) = rs.to_dominant(&x);
        prop_assert!(d.is_dominant());
        prop_assert_eq!(rs.inner_product_scaled(&d, &d), rs.inner_product_scaled(&x, &x));
    }
}
