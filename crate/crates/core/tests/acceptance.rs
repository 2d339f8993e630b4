//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use bianchi_core::arith::{make_ring, GroupElement, QuadInt, QuadRat, UhsPoint};
use bianchi_core::bredon::build_bredon_complex;
use bianchi_core::complex::OrbitComplex;
use bianchi_core::homology::equivariant::DoubleComplex;
use bianchi_core::homology::matrix::{determinant, smith_normal_form};
use bianchi_core::homology::IntMatrix;
use bianchi_core::pipeline::{analyse, compute_complex, torsion_summary, Report, Settings};
use bianchi_core::reference::{self, FIGURE};
use bianchi_core::torsion::verify_rigidity_counts;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const MS: [u64; 15] = [1, 2, 3, 5, 6, 7, 10, 11, 13, 15, 19, 39, 43, 67, 163];
const Q_MAX: usize = 10;

struct Case {
    m: u64,
    complex: OrbitComplex,
    report: Report,
}

fn compute_all() -> Vec<Case> {
    let settings = Settings { q_max: Q_MAX, ..Default::default() };
    std::thread::scope(|s| {
        let hs: Vec<_> = MS
            .iter()
            .map(|&m| {
                let settings = &settings;
                s.spawn(move || {
                    let complex = compute_complex(m, settings.norm_cap).unwrap_or_else(|e| panic!("m = {m}: {e}"));
                    let report = analyse(&complex, settings).unwrap_or_else(|e| panic!("m = {m}: {e}"));
                    Case { m, complex, report }
                })
            })
            .collect();
        hs.into_iter().map(|h| h.join().expect("pipeline thread")).collect()
    })
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok_detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: ok_detail }
    } else {
        Outcome { pass: false, detail: failures.join("; ") }
    }
}

fn case(cases: &[Case], m: u64) -> &Case {
    cases.iter().find(|c| c.m == m).expect("computed")
}

fn poincare(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    for m in [19, 43, 67, 163] {
        let h = &case(cases, m).report.homology;
        for l in [2, 3] {
            let want: Vec<usize> = reference::proposition_series(l).unwrap().coefficients(Q_MAX)[3..].iter().map(|&x| x as usize).collect();
            let got = &h.mod_l(l).unwrap().dims;
            if *got != want {
                bad.push(format!("m = {m}, l = {l}: {got:?} vs {want:?}"));
            }
        }
    }
    outcome(bad, "mod-2 and mod-3 dimensions for q = 3..10 equal the series coefficients for m = 19, 43, 67, 163".into())
}

fn homology_table(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    for m in [19, 43, 67, 163] {
        let h = &case(cases, m).report.homology;
        let (h1, h2) = reference::low_homology(m).unwrap();
        if h.integral[1].as_ref() != Some(&h1) || h.beta_1 != reference::betti(m) {
            bad.push(format!("m = {m}: H_1 = {:?}", h.integral[1]));
        }
        if h.integral[2].as_ref() != Some(&h2) {
            bad.push(format!("m = {m}: H_2 = {:?}", h.integral[2]));
        }
        match h.extensions.iter().find(|e| e.q == 2) {
            Some(e) => {
                let order = |g: &bianchi_core::homology::AbelianGroup| g.torsion.iter().product::<u64>();
                let consistent = e.direct_sum.rank == e.resolved.rank && order(&e.direct_sum) == order(&e.resolved);
                if !consistent || e.resolved != h2 || e.direct_sum == e.resolved {
                    bad.push(format!("m = {m}: extension {} to {}", e.direct_sum, e.resolved));
                }
            }
            None => bad.push(format!("m = {m}: Z/4 extension not flagged")),
        }
    }
    outcome(bad, "H_1 = Z^b for b = 1, 2, 3, 7; H_2 = Z^(b-1) + Z/4 + Z/2 + Z/3 with the split E-infinity sum flagged and resolved to Z/4 + Z/2".into())
}

fn figure(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = Vec::new();
    let mut rows = [false; 4];
    for c in cases {
        let Some(i) = FIGURE.iter().position(|r| r.ms.contains(&c.m)) else { continue };
        let row = &FIGURE[i];
        let t = c.report.torsion.iter().find(|t| t.l == 3).unwrap();
        let want: Vec<usize> = row.series().coefficients(Q_MAX)[3..].iter().map(|&x| x as usize).collect();
        let got = &c.report.homology.mod_l(3).unwrap().dims;
        if t.homeo_type != row.homeo_type() || *got != want {
            bad.push(format!("m = {}: {} {got:?}, expected {} {want:?}", c.m, t.homeo_type, row.homeo_type()));
        }
        rows[i] = true;
        checked.push(c.m);
    }
    if checked.len() < 8 || !rows.iter().all(|&r| r) || !checked.contains(&39) || !checked.contains(&15) {
        bad.push(format!("coverage too small: {checked:?}"));
    }
    outcome(bad, format!("3-torsion type and P3 coefficients match for m = {checked:?}"))
}

fn k_homology(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    for m in reference::PRINCIPAL {
        let (k0, k1) = reference::k_homology(m).unwrap();
        match &case(cases, m).report.k_homology {
            Some(k) if k.k0 == k0 && k.k1 == k1 => {}
            other => bad.push(format!("m = {m}: {other:?}")),
        }
    }
    outcome(bad, "(K_0, K_1) match for all nine principal m".into())
}

fn rigidity(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    for c in cases {
        let r = verify_rigidity_counts(&c.complex).unwrap();
        rows += r.rows.len();
        bad.extend(r.failures().iter().map(|f| format!("m = {}: {f:?}", c.m)));
    }
    outcome(bad, format!("{rows} (vertex, l) counts agree with the table across {} values of m", cases.len()))
}

fn axes(cases: &[Case]) -> Outcome {
    let bad = cases.iter().flat_map(|c| c.report.axes_failures.iter().map(move |v| format!("m = {}, vertex {v}", c.m))).collect();
    let n: usize = cases.iter().map(|c| c.complex.cells[0].iter().filter(|v| !v.ideal && v.stabiliser.order() > 1).count()).sum();
    outcome(bad, format!("{n} nontrivial vertex stabilisers checked"))
}

fn invariance(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    let mut pairs = 0;
    for l in [2, 3] {
        let mut groups: BTreeMap<String, Vec<&Case>> = BTreeMap::new();
        for c in cases {
            let t = c.report.torsion.iter().find(|t| t.l == l).unwrap();
            groups.entry(t.homeo_type.to_string()).or_default().push(c);
        }
        for (ty, members) in &groups {
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    pairs += 1;
                    if a.report.homology.e2_primary(l) != b.report.homology.e2_primary(l) {
                        bad.push(format!("l = {l}, {ty}: m = {} and m = {} differ", a.m, b.m));
                    }
                }
            }
        }
    }
    outcome(bad, format!("{pairs} pairs with equal reduced type have equal l-primary E2 for 1 <= q <= {Q_MAX}"))
}

fn degenerate_prime(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    for c in cases {
        let t = torsion_summary(&c.complex, 5);
        if !t.vertices.is_empty() || t.edges > 0 {
            bad.push(format!("m = {}: 5-torsion subcomplex nonempty", c.m));
        }
        let h = &c.report.homology;
        if h.integral[3..].iter().flatten().any(|g| g.torsion.iter().any(|t| t % 5 == 0)) {
            bad.push(format!("m = {}: 5-torsion in homology", c.m));
        }
    }
    outcome(bad, format!("empty 5-torsion subcomplex and no 5-torsion in H_q, q >= 3, for {} values of m", cases.len()))
}

fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=30, 1usize..=30).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![5 => Just(0i64), 4 => -4i64..=4, 1 => -60i64..=60], r * c)
            .prop_map(move |v| IntMatrix::from_rows(&v.chunks(c).map(|x| x.to_vec()).collect::<Vec<_>>()))
    })
}

fn smith_ok(a: &IntMatrix) -> bool {
    let s = smith_normal_form(a);
    let d = &s.d;
    let off_diagonal_zero = (0..d.rows()).all(|i| (0..d.cols()).all(|j| i == j || d[(i, j)].is_zero()));
    let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect();
    let k = diag.iter().take_while(|x| !x.is_zero()).count();
    let chain = diag[..k].iter().all(|x| x.is_positive()) && diag[..k].windows(2).all(|w| (&w[1] % &w[0]).is_zero()) && diag[k..].iter().all(|x| x.is_zero());
    s.u.mul(a).mul(&s.v) == s.d && off_diagonal_zero && chain && determinant(&s.u).abs().is_one() && determinant(&s.v).abs().is_one()
}

fn arb_word(m: u64) -> impl Strategy<Value = GroupElement> {
    let r = make_ring(m).unwrap();
    prop::collection::vec((0usize..3, -3i64..4, -2i64..3), 1..7).prop_map(move |w| {
        w.into_iter().fold(GroupElement::identity(r), |g, (k, x, y)| {
            let s = GroupElement::inversion(r);
            let h = match k {
                0 => GroupElement::translation(QuadInt::new(x, y, r)),
                1 => s,
                _ => s.mul(&GroupElement::translation(QuadInt::new(y, x, r))),
            };
            g.mul(&h)
        })
    })
}

fn arb_triple() -> impl Strategy<Value = (GroupElement, GroupElement, UhsPoint)> {
    prop::sample::select(vec![1u64, 2, 3, 5, 7, 15, 19, 163]).prop_flat_map(|m| {
        let r = make_ring(m).unwrap();
        let p = (-15i64..15, -15i64..15, 1i64..9, 1i64..40, 1i64..40)
            .prop_map(move |(a, b, d, n, e)| UhsPoint::new(QuadRat::new(QuadInt::new(a, b, r), BigInt::from(d)), BigRational::new(n.into(), e.into())));
        (arb_word(m), arb_word(m), p)
    })
}

fn engine(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    if let Err(e) = runner.run(&arb_matrix(), |a| {
        prop_assert!(smith_ok(&a));
        Ok(())
    }) {
        bad.push(format!("Smith normal form: {e}"));
    }
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    if let Err(e) = runner.run(&arb_triple(), |(g, h, p)| {
        prop_assert_eq!(g.mul(&h).act(&p).unwrap(), g.act(&h.act(&p).unwrap()).unwrap());
        Ok(())
    }) {
        bad.push(format!("action: {e}"));
    }
    for c in cases {
        let dc = DoubleComplex::new(&c.complex, Q_MAX + 1).unwrap();
        if let Err(e) = dc.check().and_then(|_| dc.check_first_differential()) {
            bad.push(format!("m = {}: {e}", c.m));
        }
        if !c.complex.has_ideal_vertices() {
            if let Err(e) = build_bredon_complex(&c.complex).and_then(|b| b.check()) {
                bad.push(format!("m = {}: Bredon {e}", c.m));
            }
        }
        if !c.report.homology.uct_consistent {
            bad.push(format!("m = {}: universal coefficients", c.m));
        }
    }
    outcome(bad, "1000 Smith forms, 1000 action triples, d1 d1 = 0 and boundary squares zero, universal coefficients, on every computed m".into())
}

fn main() -> ExitCode {
    let cases = compute_all();
    let checks: [(&str, fn(&[Case]) -> Outcome); 9] = [
        ("Poincare series reproduction", poincare),
        ("homology table in degrees 1 and 2", homology_table),
        ("3-torsion figure", figure),
        ("K-homology table", k_homology),
        ("rigidity counts", rigidity),
        ("rotation axes", axes),
        ("invariance of the l-primary E2 page", invariance),
        ("degenerate prime 5", degenerate_prime),
        ("engine properties", engine),
    ];
    let mut all = true;
    for (i, (name, f)) in checks.iter().enumerate() {
        let o = f(&cases);
        all &= o.pass;
        println!("criterion {} {}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
