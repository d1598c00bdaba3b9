use fusioncat_core::catalog::{u_ring, vltau_ring, VLabel};
use fusioncat_core::{FusionRing, RingElement};
use proptest::prelude::*;

/// `g x -` as a map on labels, if every product is a single label.
fn translation(r: &FusionRing, g: usize) -> Option<Vec<usize>> {
    (0..r.rank())
        .map(|x| match r.product(g, x) {
            [(y, 1)] => Some(*y),
            _ => None,
        })
        .collect()
}

fn assert_simple_currents_permute(r: &FusionRing) {
    let currents = r.simple_currents();
    assert!(currents.contains(&r.unit()));
    for &g in &currents {
        let t = translation(r, g).expect("simple current fuses to single labels");
        let mut seen = t.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), r.rank(), "translation by {} is not a bijection", r.label(g));
        // inverse is translation by the dual
        let d = r.dual_of(g).unwrap();
        let back = translation(r, d).unwrap();
        for x in 0..r.rank() {
            assert_eq!(back[t[x]], x);
        }
    }
    for i in 0..r.rank() {
        assert_eq!(currents.contains(&i), r.is_permutation(i));
    }
}

/// Group ring of `Z_a x Z_b`, labels shuffled by `perm`.
fn group_ring(a: usize, b: usize, perm: &[usize]) -> FusionRing {
    let n = a * b;
    let idx = |x: usize, y: usize| perm[x * b + y];
    let mut labels = vec![String::new(); n];
    let mut entries = Vec::new();
    for x in 0..a {
        for y in 0..b {
            labels[idx(x, y)] = format!("g{x}_{y}");
            for u in 0..a {
                for v in 0..b {
                    entries.push((idx(x, y), idx(u, v), idx((x + u) % a, (y + v) % b), 1));
                }
            }
        }
    }
    FusionRing::new(labels, idx(0, 0), entries).unwrap()
}

proptest! {
    #[test]
    fn group_rings_are_pointed(
        (a, b, perm) in (1usize..5, 1usize..5).prop_flat_map(|(a, b)| {
            (Just(a), Just(b), Just((0..a * b).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let r = group_ring(a, b, &perm);
        prop_assert!(r.validate().passed());
        prop_assert_eq!(r.simple_currents().len(), a * b);
        assert_simple_currents_permute(&r);
        for i in 0..r.rank() {
            prop_assert!((r.qdim_pf(i).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn u_simple_currents() {
    let r = u_ring();
    let currents: Vec<&str> = r.simple_currents().into_iter().map(|i| r.label(i)).collect();
    assert_eq!(currents, ["M~_0[0]", "M~_0[1]", "M~_0[2]", "M~_1[0]", "M~_1[1]", "M~_1[2]"]);
    assert_simple_currents_permute(&r);
}

#[test]
fn vltau_simple_currents_form_z3_squared() {
    let r = vltau_ring();
    let currents = r.simple_currents();
    let zero: Vec<usize> =
        VLabel::all().into_iter().filter(|l| matches!(l, VLabel::Zero { .. })).map(VLabel::index).collect();
    assert_eq!(currents, zero);
    assert_simple_currents_permute(&r);
    // nine currents, each of order dividing 3
    for &g in &currents {
        let g2 = r.product(g, g)[0].0;
        assert_eq!(r.product(g2, g), &[(r.unit(), 1)]);
    }
}

#[test]
fn perron_frobenius_dimensions() {
    let fib = FusionRing::new(
        vec!["1".into(), "t".into()],
        0,
        [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
    )
    .unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((fib.qdim_pf(1).unwrap() - phi).abs() < 1e-10);

    let mut e = Vec::new();
    for (i, j, k) in [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 0), (1, 2, 2), (2, 2, 0), (2, 2, 1)] {
        e.push((i, j, k, 1));
        if i != j {
            e.push((j, i, k, 1));
        }
    }
    let ising = FusionRing::new(vec!["1".into(), "psi".into(), "sigma".into()], 0, e).unwrap();
    assert!(ising.validate().passed());
    assert!((ising.qdim_pf(2).unwrap() - 2f64.sqrt()).abs() < 1e-10);
    assert_eq!(ising.simple_currents(), vec![0, 1]);
}

#[test]
fn violations_are_found() {
    let noncomm = FusionRing::new(
        vec!["1".into(), "a".into(), "b".into()],
        0,
        [
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (1, 0, 1, 1),
            (0, 2, 2, 1),
            (2, 0, 2, 1),
            (1, 1, 0, 1),
            (2, 2, 0, 1),
            (1, 2, 1, 1),
            (2, 1, 2, 1),
        ],
    )
    .unwrap();
    let rep = noncomm.validate();
    assert!(rep.commutativity.is_some());
    assert!(!rep.passed());
}

#[test]
fn fuse_elements() {
    let r = u_ring();
    let m0 = r.index_of("M^0").unwrap();
    let x = RingElement::from_terms([(m0, 1), (r.unit(), 2)]);
    let y = r.fuse(&x, &RingElement::basis(m0)).unwrap();
    assert_eq!(r.format_element(&y), "M~_0[0] + M~_0[1] + M~_0[2] + 4*M^0");
}
