//! One line per acceptance criterion. Exits nonzero if any line fails.

#![allow(clippy::needless_range_loop)]

use fusioncat_io::core::catalog::{
    build_u, build_vltau, count_orbifold_irreducibles, u_ring, vltau_ring, weight_table_check, ULabel, VLabel,
};
use fusioncat_io::core::lattice::{l_coset, z_beta1_coset, Half};
use fusioncat_io::core::qseries::{qdim_extrapolated, theta_coset, DEFAULT_YS};
use fusioncat_io::core::{CycNum, FusionRing, Lattice, QSeries, Q};
use fusioncat_io::fcat;
use fusioncat_tests::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

struct Outcome {
    passed: bool,
    detail: String,
    limit: Option<Duration>,
}

fn ok(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into(), limit: None }
}

fn timed(passed: bool, detail: impl Into<String>, limit: Duration) -> Outcome {
    Outcome { passed, detail: detail.into(), limit: Some(limit) }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("C1 s~ golden table", c1_golden),
        ("C2 Verlinde round-trip", c2_verlinde),
        ("C3 modular consistency", c3_modular),
        ("C4 quantum dimensions", c4_qdims),
        ("C5 counting", c5_counting),
        ("C6 weight reconstruction", c6_weights),
        ("C7 VLtau ring", c7_vltau),
        ("C8 characters", c8_characters),
        ("C9 property suite", c9_properties),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t0 = Instant::now();
        let mut o = std::panic::catch_unwind(f).unwrap_or_else(|_| ok(false, "panicked"));
        let dt = t0.elapsed();
        if let Some(limit) = o.limit {
            if dt >= limit {
                o.passed = false;
                o.detail = format!("{} (over the {:?} limit)", o.detail, limit);
            }
        }
        if !o.passed {
            failed += 1;
        }
        println!("{} {name}: {} [{:.2}s]", if o.passed { "PASS" } else { "FAIL" }, o.detail, dt.as_secs_f64());
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn c1_golden() -> Outcome {
    if data_digest(PUBLISHED) != recorded_digest(PUBLISHED) {
        return ok(false, "fixture checksum mismatch");
    }
    let published = published_table();
    let ours = build_u().unwrap().stilde().unwrap();
    let mut blocks: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut first = None;
    for i in 0..20 {
        for j in 0..20 {
            if published[i][j] != ours[i][j] {
                *blocks.entry((sector(i), sector(j))).or_default() += 1;
                first.get_or_insert((i, j));
            }
        }
    }
    let total: usize = blocks.values().sum();
    if total == 0 {
        return timed(true, "400/400 entries equal", Duration::from_secs(5));
    }
    let (i, j) = first.unwrap();
    let sectors = ["untwisted", "t", "t^2"];
    let by_block: Vec<String> =
        blocks.iter().map(|((a, b), n)| format!("{}x{}: {n}", sectors[*a], sectors[*b])).collect();
    timed(
        false,
        format!(
            "{total} of 400 entries differ ({}); e.g. ({i},{j}) table {} vs derived {}",
            by_block.join(", "),
            published[i][j],
            ours[i][j]
        ),
        Duration::from_secs(5),
    )
}

/// Fusion constants of U written out from the module-level rules, by index
/// arithmetic on (i mod 2, eps mod 3). `literal` uses charge `2-s` in place
/// of `1-s` for same-sector twisted products.
fn u_rules(literal: bool) -> Vec<[[u32; 20]; 20]> {
    let diag = |i: i64, e: i64| (3 * i.rem_euclid(2) + e.rem_euclid(3)) as usize;
    let off = |i: i64| 6 + i.rem_euclid(2) as usize;
    let tw = |k: i64, i: i64, e: i64| (8 + 6 * (k - 1) + 3 * i.rem_euclid(2) + e.rem_euclid(3)) as usize;
    enum L {
        D(i64, i64),
        O(i64),
        T(i64, i64, i64),
    }
    let label = |w: usize| -> L {
        let w = w as i64;
        match w {
            0..=5 => L::D(w / 3, w % 3),
            6 | 7 => L::O(w - 6),
            _ => L::T((w - 8) / 6 + 1, (w - 8) % 6 / 3, (w - 8) % 3),
        }
    };
    let mut n = vec![[[0u32; 20]; 20]; 20];
    for a in 0..20 {
        for b in 0..20 {
            let mut out: Vec<usize> = Vec::new();
            match (label(a), label(b)) {
                (L::D(i, e), L::D(j, f)) => out.push(diag(i + j, e + f)),
                (L::D(i, _), L::O(j)) | (L::O(j), L::D(i, _)) => out.push(off(i + j)),
                (L::D(i, e), L::T(k, j, f)) | (L::T(k, j, f), L::D(i, e)) => out.push(tw(k, i + j, k * e + f)),
                (L::O(i), L::O(j)) => {
                    out.extend((0..3).map(|r| diag(i + j, r)));
                    out.extend([off(i + j), off(i + j)]);
                }
                (L::O(i), L::T(k, j, _)) | (L::T(k, j, _), L::O(i)) => out.extend((0..3).map(|r| tw(k, i + j, r))),
                (L::T(k, i, e), L::T(k1, j, f)) if k == k1 => {
                    let s = e + f;
                    let second = if literal { 2 - s } else { 1 - s };
                    out.extend([tw(3 - k, i + j, -s), tw(3 - k, i + j, second)]);
                }
                (L::T(k, i, e), L::T(_, j, f)) => {
                    let (e, f) = if k == 1 { (e, f) } else { (f, e) };
                    out.extend([diag(i + j, e + 2 * f), off(i + j)]);
                }
            }
            for c in out {
                n[a][b][c] += 1;
            }
        }
    }
    n
}

fn c2_verlinde() -> Outcome {
    let md = build_u().unwrap();
    let mut got = vec![[[0u32; 20]; 20]; 20];
    for (i, j, k, m) in md.verlinde().unwrap() {
        got[i][j][k] = m;
    }
    let want = u_rules(false);
    let literal = u_rules(true);
    let mut wrong = 0;
    let mut off_literal = 0;
    for i in 0..20 {
        for j in 0..20 {
            for k in 0..20 {
                wrong += usize::from(got[i][j][k] != want[i][j][k]);
                off_literal += usize::from(got[i][j][k] != literal[i][j][k]);
            }
        }
    }
    timed(
        wrong == 0,
        format!(
            "{} of 8000 triples match the transcribed rules; {off_literal} differ from the literal 2-s charge",
            8000 - wrong
        ),
        Duration::from_secs(30),
    )
}

fn c3_modular() -> Outcome {
    let md = build_u().unwrap();
    let rep = md.verify_modular().unwrap();
    let failing: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let ring = md.ring();
    let duals_ok = ULabel::all().into_iter().all(|l| ring.dual_of(l.index()) == Some(l.dual().index()));
    let conj_ok = md.stilde().unwrap() == md.stilde_conjugate_form().unwrap();
    let passed = failing.is_empty() && duals_ok && conj_ok;
    let detail = if passed {
        format!("{} exact checks; C is the stated duality; conjugate form equal", rep.checks.len())
    } else {
        format!("failing: {failing:?}, duals {duals_ok}, conjugate form {conj_ok}")
    };
    ok(passed, detail)
}

fn c4_qdims() -> Outcome {
    let md = build_u().unwrap();
    let ring = md.ring();
    let mut bad = Vec::new();
    for l in ULabel::all() {
        let i = l.index();
        let pf = ring.qdim_pf(i).unwrap();
        let ratio = md.column_ratio(i).unwrap();
        if (pf - l.qdim() as f64).abs() >= 1e-8 || ratio != CycNum::from_integer(l.qdim()) {
            bad.push(l.name());
        }
    }
    let d2 = md.global_dim_squared().unwrap();
    let passed = bad.is_empty() && d2 == CycNum::from_integer(72);
    ok(passed, format!("{}/20 labels match (PF and column ratio), mismatches {bad:?}; sum d^2 = {d2}", 20 - bad.len()))
}

fn c5_counting() -> Outcome {
    let integral = (1..=100u64).all(|n| 3 * count_orbifold_irreducibles(n) == n * n * n + 26 * n);
    let c2 = count_orbifold_irreducibles(2);
    ok(c2 == 20 && integral, format!("n=2 gives {c2}; integral for n=1..100: {integral}"))
}

fn c6_weights() -> Outcome {
    let rows = weight_table_check();
    let bad: Vec<usize> = rows.iter().filter(|r| !r.passed).map(|r| r.w).collect();
    let spot =
        [(6, Q::new(1, 2)), (7, Q::new(1, 4)), (3, Q::new(3, 4))].iter().all(|&(w, x)| rows[w].recomputed == vec![x]);
    ok(
        bad.is_empty() && spot && rows.len() == 20,
        format!("{}/20 weight rows reproduced, failing {bad:?}", 20 - bad.len()),
    )
}

fn c7_vltau() -> Outcome {
    let ring = vltau_ring();
    let valid = ring.validate().passed();
    let mut bad = Vec::new();
    for l in VLabel::all() {
        let i = l.index();
        let pf = ring.qdim_pf(i).unwrap();
        if (pf - l.qdim() as f64).abs() >= 1e-8 || ring.dual_of(i) != Some(l.dual().index()) {
            bad.push(l.name());
        }
    }
    let modular = match build_vltau().map(|md| md.verify_modular()) {
        Ok(Ok(r)) if r.passed() => "modular datum passes every check".to_string(),
        Ok(Ok(r)) => format!("modular datum fails {} check(s)", r.checks.iter().filter(|c| !c.passed).count()),
        Ok(Err(e)) => format!("modular datum rejected: {e}"),
        Err(e) => format!("modular datum not built: {e}"),
    };
    ok(
        valid && bad.is_empty(),
        format!("axioms {valid}; {}/30 labels match qdim and dual, mismatches {bad:?}; {modular}", 30 - bad.len()),
    )
}

fn c8_characters() -> Outcome {
    let cutoff = Q::from_integer(30);
    let mut sum = QSeries::zero(cutoff);
    for h in Half::ALL {
        for j in 0..3 {
            sum = sum.add(&theta_coset(&l_coset(h, j), cutoff));
        }
    }
    let dual_gram = vec![vec![Q::new(1, 3), Q::new(1, 6)], vec![Q::new(1, 6), Q::new(1, 3)]];
    let dual = theta_coset(&fusioncat_io::core::Coset::zero(&Lattice::new(dual_gram).unwrap()), cutoff);
    let theta_ok = sum == dual;
    let big = Q::from_integer(600);
    let v = theta_coset(&z_beta1_coset(Q::from_integer(0)), big);
    let m = theta_coset(&z_beta1_coset(Q::new(1, 2)), big);
    match qdim_extrapolated(&m, &v, &DEFAULT_YS) {
        Ok(r) => ok(
            theta_ok && (r - 1.0).abs() < 1e-3,
            format!("theta sum equal to cutoff 30: {theta_ok}; qdim of the rank-1 simple current {r:.6}"),
        ),
        Err(e) => ok(false, format!("qdim ratio: {e}")),
    }
}

fn cyc() -> impl Strategy<Value = CycNum> {
    const ORDERS: [u32; 8] = [1, 3, 4, 8, 9, 12, 24, 72];
    (prop::sample::select(&ORDERS[..]), prop::collection::vec((-5i64..=5, 0u32..72), 1..5), 1i64..=5).prop_map(
        |(n, terms, den)| {
            let mut x = CycNum::zero();
            for (c, k) in terms {
                x = &x + &(&CycNum::root_of_unity(i64::from(k % n), n) * &CycNum::from_integer(c));
            }
            &x * &CycNum::from_ratio(1, den)
        },
    )
}

fn simple_currents_permute(r: &FusionRing) -> bool {
    r.simple_currents().into_iter().all(|g| {
        let mut image: Vec<usize> = (0..r.rank())
            .filter_map(|x| match r.product(g, x) {
                [(y, 1)] => Some(*y),
                _ => None,
            })
            .collect();
        image.sort_unstable();
        image.dedup();
        image.len() == r.rank()
    })
}

fn c9_properties() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 256, failure_persistence: None, ..Config::default() });
    let field = runner.run(&(cyc(), cyc(), cyc()), |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        Ok(())
    });
    let canonical = runner.run(&(cyc(), cyc()), |(a, b)| {
        let detour = &(&a + &b) - &b;
        prop_assert_eq!(detour.to_string(), a.to_string());
        prop_assert_eq!(a.to_string().parse::<CycNum>().unwrap(), a);
        Ok(())
    });
    let mut fcat_ok = true;
    for (name, md) in [("U", build_u().unwrap()), ("VLtau", build_vltau().unwrap())] {
        let text = fcat::emit(name, &md);
        let doc = fcat::parse(&text).unwrap();
        fcat_ok &= fcat::emit(&doc.name, &doc.datum) == text;
    }
    let currents = simple_currents_permute(&u_ring()) && simple_currents_permute(&vltau_ring());
    let passed = field.is_ok() && canonical.is_ok() && fcat_ok && currents;
    ok(
        passed,
        format!(
            "field axioms {}, canonical form {}, FCAT byte-stable {fcat_ok}, simple currents permute {currents}",
            field.is_ok(),
            canonical.is_ok()
        ),
    )
}
