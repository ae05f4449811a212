//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use oddsbox_core::tables::{
    bct_row, boomerang_spectrum_power, cddt_entry, cddt_row, cdiff_spectrum_power,
    differential_uniformity,
};
use oddsbox_core::theorems::{
    q_values, reported_switch_rows, search_du_preserving_switches, verify_apn_catalog,
    verify_binomial_all, verify_bridge, verify_identity_i1, verify_identity_i2,
    verify_inverse_boom_spectrum, verify_inverse_cdu, verify_inverse_cdu_all,
    verify_inverse_m1_spectrum, verify_modified_inverse, verify_switch_bounds_random,
    verify_switch_search, SearchRanges,
};
use oddsbox_core::{
    catalog, materialize, Chi, Claim, Family, Field, FnSpec, FnTable, Fx, Status, VerifyOptions,
};

const MATRIX: [(u64, u32); 15] = [
    (5, 1),
    (7, 1),
    (11, 1),
    (13, 1),
    (17, 1),
    (19, 1),
    (29, 1),
    (3, 2),
    (3, 3),
    (3, 4),
    (5, 2),
    (5, 3),
    (7, 2),
    (11, 2),
    (13, 2),
];

fn field(p: u64, n: u32) -> Field {
    Field::new(p, n, None).expect("valid field")
}

fn table(f: &Field, spec: &FnSpec) -> FnTable {
    materialize(f, spec).expect("materializes")
}

fn label(f: &Field) -> String {
    if f.n() == 1 {
        format!("F_{}", f.p())
    } else {
        format!("F_{}^{}", f.p(), f.n())
    }
}

/// Collects failures; a criterion passes when none were recorded.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    facts: Vec<String>,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn fact(&mut self, s: impl Into<String>) {
        self.facts.push(s.into());
    }
}

fn bridge() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    let mut runs: Vec<(Field, FnSpec, String)> = [(5, 2), (7, 2), (11, 2)]
        .into_iter()
        .map(|(p, n)| (field(p, n), FnSpec::power(3), "X^3".to_string()))
        .collect();
    let f125 = field(5, 3);
    for fam in [Family::F5 { k: 1 }, Family::F6] {
        runs.push((f125.clone(), catalog(&f125, fam).unwrap(), fam.to_string()));
    }
    for (f, spec, name) in runs {
        let r = verify_bridge(&table(&f, &spec), &opts);
        c.expect(r.status == Status::Pass && r.mismatch_count == 0, || {
            format!(
                "{name} over {}: {:?}, {} mismatches",
                label(&f),
                r.status,
                r.mismatch_count
            )
        });
        c.fact(format!("{name}/{} B={:?}", label(&f), r.observed));
    }
    c
}

fn inverse_cdu() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    for (p, n) in [(17, 1), (19, 1), (13, 1), (7, 1), (3, 3), (5, 2)] {
        let f = field(p, n);
        let r = verify_inverse_cdu_all(&f, &opts);
        c.expect(r.passed(), || {
            format!(
                "{}: {} mismatches {:?}",
                label(&f),
                r.mismatch_count,
                r.counterexamples
            )
        });
    }
    let f17 = field(17, 1);
    let r = verify_inverse_cdu(&f17, Fx::new(4), &opts).unwrap();
    c.expect(r.passed() && r.observed == Claim::Exact(3), || {
        format!("F_17, c = 4: {:?}", r.observed)
    });
    let f19 = field(19, 1);
    let c19 = f19.inv(Fx::new(4)).unwrap();
    let r = verify_inverse_cdu(&f19, c19, &opts).unwrap();
    c.expect(r.passed() && r.observed == Claim::Exact(3), || {
        format!("F_19, c = 1/4: {:?}", r.observed)
    });
    c.fact("F_17 c=4 -> 3, F_19 c=1/4 -> 3");
    c
}

fn m1_spectrum() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    let cases = [
        ((3, 2), "(1)"),
        ((3, 3), "(2)"),
        ((11, 1), "(3)"),
        ((7, 1), "(4)"),
        ((29, 1), "(5)"),
        ((13, 1), "(6)"),
        ((5, 1), "(7)"),
        ((5, 3), "(7)"),
    ];
    for ((p, n), case) in cases {
        let f = field(p, n);
        let r = verify_inverse_m1_spectrum(&f, &opts);
        c.expect(r.prediction.case.starts_with(case), || {
            format!(
                "{}: case {} fired, expected {case}",
                label(&f),
                r.prediction.case
            )
        });
        c.expect(r.passed(), || {
            format!(
                "{}: predicted {:?}, observed {:?}",
                label(&f),
                r.prediction.predicted,
                r.observed
            )
        });
    }
    c.fact("cases (1)-(7) all hit");
    c
}

fn boom_spectrum() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    for (p, n) in [(3, 3), (3, 2), (13, 1), (13, 2), (7, 1), (5, 2)] {
        let f = field(p, n);
        let r = verify_inverse_boom_spectrum(&f, &opts);
        c.expect(r.passed(), || {
            format!(
                "{} [{}]: predicted {:?}, observed {:?}",
                label(&f),
                r.prediction.case,
                r.prediction.predicted,
                r.observed
            )
        });
    }
    let r = verify_inverse_boom_spectrum(&field(3, 3), &opts);
    let want: BTreeMap<u32, u64> = [(0, 12), (2, 12), (3, 2)].into();
    c.expect(r.observed == Claim::Spectrum(want), || {
        format!("F_3^3 observed {:?}", r.observed)
    });
    c.fact("F_3^3 = {v_0 = 12, v_2 = 12, v_3 = 2}");
    c
}

fn catalog_report(f: &Field, family: &str) -> Option<oddsbox_core::VerificationReport> {
    verify_apn_catalog(f, &VerifyOptions::default())
        .into_iter()
        .find(|r| r.prediction.params["family"] == family && r.status != Status::NotApplicable)
}

fn apn_catalog() -> Check {
    let mut c = Check::default();
    let expect_b3 = |c: &mut Check, f: &Field, family: &str| match catalog_report(f, family) {
        Some(r) => {
            c.expect(r.passed() && r.observed == Claim::Exact(3), || {
                format!(
                    "{family} over {}: B = {:?}, {:?}",
                    label(f),
                    r.observed,
                    r.counterexamples
                )
            });
        }
        None => c.expect(false, || {
            format!("{family} not applicable over {}", label(f))
        }),
    };
    for (p, n) in [(5, 2), (7, 2)] {
        expect_b3(&mut c, &field(p, n), "f1");
    }
    // f2 wherever it is defined in the matrix; the report also checks it
    // is the compositional inverse of f1
    let mut f2_fields = Vec::new();
    for (p, n) in MATRIX {
        let f = field(p, n);
        if f.q() % 3 == 2 {
            expect_b3(&mut c, &f, "f2");
            f2_fields.push(label(&f));
        }
    }
    c.fact(format!("f2 checked over {}", f2_fields.join(", ")));
    let f125 = field(5, 3);
    for family in ["f5(k=1)", "f6"] {
        expect_b3(&mut c, &f125, family);
    }
    let f49 = field(7, 2);
    match catalog_report(&f49, "f4") {
        Some(r) => {
            c.expect(r.passed(), || {
                format!("f4 over F_7^2: B = {:?}", r.observed)
            });
            c.fact(format!("f4 over F_7^2: B = {:?} (bound 5)", r.observed));
        }
        None => c.expect(false, || "f4 not applicable over F_7^2".into()),
    }
    c
}

fn modified_inverse() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    let want = [
        ((3, 3), 3),
        ((3, 2), 4),
        ((7, 1), 4),
        ((11, 1), 4),
        ((5, 2), 4),
        ((13, 1), 4),
        ((13, 2), 5),
    ];
    for ((p, n), du) in want {
        let f = field(p, n);
        let r = verify_modified_inverse(&f, &opts);
        c.expect(r.passed() && r.observed == Claim::Exact(du), || {
            format!(
                "{}: DU {:?}, expected {du}; {:?} {:?}",
                label(&f),
                r.observed,
                r.counterexamples,
                r.notes
            )
        });
    }
    for ((p, n), entry) in [((13, 2), 5), ((13, 1), 3)] {
        let f = field(p, n);
        let t = table(&f, &catalog(&f, Family::ModifiedInverse).unwrap());
        let (four, nine) = (f.from_int(4), f.from_int(9));
        for (a, b) in [(four, nine), (nine, four)] {
            let got = cddt_entry(&t, Fx::ONE, a, b);
            c.expect(got == entry, || {
                format!("{}: DDT({a}, {b}) = {got}, expected {entry}", label(&f))
            });
        }
    }
    c.fact("F_13^2: DU 5 at (4,9) and (9,4)");
    c
}

fn binomial() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    for (p, n) in [(5, 1), (7, 1), (3, 3), (13, 1)] {
        let f = field(p, n);
        let r = verify_binomial_all(&f, &opts);
        c.expect(r.passed(), || {
            format!("{}: worst DU {:?}", label(&f), r.observed)
        });
        c.fact(format!("{} max {:?}", label(&f), r.observed));
    }
    c
}

fn switch_bounds() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    for (p, n) in [(7, 1), (3, 3), (5, 2)] {
        let f = field(p, n);
        for spec in [FnSpec::inverse(&f), FnSpec::power(3)] {
            let r = verify_switch_bounds_random(&f, &spec, &opts).unwrap();
            c.expect(r.passed(), || {
                format!(
                    "{} {:?}: {:?}, {:?}",
                    label(&f),
                    spec,
                    r.observed,
                    r.counterexamples
                )
            });
            c.fact(format!(
                "{} d={:?}: max {:?}; {}",
                label(&f),
                spec,
                r.observed,
                r.notes.join("; ")
            ));
        }
    }
    c
}

fn switch_search() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    let want: [((u64, u32), &[u64], u32); 4] = [
        ((3, 3), &[13, 17, 23, 25], 3),
        ((5, 2), &[19, 23], 4),
        ((5, 3), &[99, 119, 123], 2),
        ((7, 2), &[41, 47], 4),
    ];
    for ((p, n), ds, du) in want {
        let f = field(p, n);
        let ranges = SearchRanges {
            s: 0..=0,
            ..SearchRanges::full(&f)
        };
        let rows = search_du_preserving_switches(&f, &ranges);
        let got: Vec<u64> = rows.iter().map(|r| r.d).filter(|&d| d != 0).collect();
        c.expect(got == ds, || {
            format!("{}: s = 0 found {got:?}, expected {ds:?}", label(&f))
        });
        c.expect(rows.iter().all(|r| r.du == du), || {
            format!("{}: DU differs from {du}", label(&f))
        });
        c.expect(rows.first().map(|r| (r.d, r.s)) == Some((0, 0)), || {
            format!("{}: (0,0) missing", label(&f))
        });

        let full = verify_switch_search(&f, &opts);
        c.expect(full.passed(), || {
            format!("{}: full search {:?}", label(&f), full.counterexamples)
        });
        c.fact(format!("{}: {}", label(&f), full.notes.join("; ")));
    }
    c.expect(reported_switch_rows(3, 2).is_some(), || {
        "published (3,2) row missing".into()
    });
    c
}

fn power_maps(f: &Field) -> Vec<u64> {
    let q = f.q() as u64;
    let mut ds = vec![2, 3, q - 2];
    for fam in [Family::F2, Family::F4, Family::F5 { k: 1 }, Family::F6] {
        if let Ok(FnSpec::PowerMap { d }) = catalog(f, fam) {
            ds.push(d);
        }
    }
    ds.sort();
    ds.dedup();
    ds
}

fn properties() -> Check {
    let mut c = Check::default();
    let opts = VerifyOptions::default();
    let mut fields: Vec<Field> = MATRIX.iter().map(|&(p, n)| field(p, n)).collect();
    fields.push(field(7, 3));
    let mut i2_count = 0;
    for f in &fields {
        let q = f.q();
        let name = label(f);
        let inverse = table(f, &FnSpec::inverse(f));
        let modified = table(f, &catalog(f, Family::ModifiedInverse).unwrap());

        // row sums, every c
        for cc in f.elements() {
            for a in f.elements() {
                let s: u32 = cddt_row(&inverse, cc, a).iter().sum();
                c.expect(s == q, || {
                    format!("{name}: c-DDT row sum c={cc} a={a} is {s}")
                });
            }
        }

        // identities (I1) for the tested power maps and every c; row reduction
        for d in power_maps(f) {
            let t = table(f, &FnSpec::power(d));
            for cc in f.elements() {
                let r = verify_identity_i1(&t, cc, &opts).unwrap();
                c.expect(r.passed(), || {
                    format!("{name} X^{d} c={cc}: I1 {:?}", r.observed)
                });
            }
            if q <= 125 {
                for cc in [f.neg_one(), Fx::ONE, f.primitive_element()] {
                    let base = cddt_row(&t, cc, Fx::ONE);
                    for a in f.nonzero() {
                        let row = cddt_row(&t, cc, a);
                        let scale = f.inv(f.pow(a, d)).unwrap();
                        for b in f.elements() {
                            let want = base[f.mul(b, scale).index()];
                            c.expect(row[b.index()] == want, || {
                                format!("{name} X^{d}: c-DDT reduction fails c={cc} a={a} b={b}")
                            });
                        }
                    }
                }
            }
            if q <= 169 {
                let base = bct_row(&t, Fx::ONE);
                for a in f.nonzero() {
                    let row = bct_row(&t, a);
                    let ad = f.pow(a, d);
                    for b in f.nonzero() {
                        if let Ok(scale) = f.inv(ad) {
                            let want = base[f.mul(b, scale).index()];
                            c.expect(row[b.index()] == want, || {
                                format!("{name} X^{d}: BCT reduction fails a={a} b={b}")
                            });
                        }
                    }
                }
            }
        }

        // BCT second moment and sign symmetry
        if q <= 169 {
            for t in [&inverse, &modified, &table(f, &FnSpec::power(3))] {
                for a in f.nonzero() {
                    let row = bct_row(t, a);
                    let total: u64 = row.iter().map(|&v| v as u64).sum();
                    let moment: u64 = cddt_row(t, Fx::ONE, a)
                        .iter()
                        .map(|&v| (v as u64).pow(2))
                        .sum();
                    c.expect(total == moment, || {
                        format!("{name}: BCT second moment a={a}: {total} vs {moment}")
                    });
                    for b in f.elements() {
                        c.expect(row[b.index()] == row[f.neg(b).index()], || {
                            format!("{name}: BCT sign symmetry a={a} b={b}")
                        });
                    }
                }
            }
        }

        // (I2) for every odd APN power map
        if q <= 169 {
            for d in 1..q as u64 - 1 {
                let t = table(f, &FnSpec::power(d));
                if !t.is_odd() || differential_uniformity(&t) != 2 {
                    continue;
                }
                i2_count += 1;
                let r = verify_identity_i2(&t, &opts).unwrap();
                c.expect(r.passed(), || {
                    format!(
                        "{name} X^{d}: I2 {:?} vs {:?}",
                        r.prediction.predicted, r.observed
                    )
                });
                let s = boomerang_spectrum_power(&t).unwrap();
                let sm1 = cdiff_spectrum_power(&t, f.neg_one()).unwrap();
                c.expect(s.total() == q as u64 - 1 && sm1.total() == q as u64, || {
                    format!("{name} X^{d}: totals")
                });
            }
        }

        // chi multiplicativity
        for x in f.elements() {
            for y in f.elements() {
                let lhs = f.chi(f.mul(x, y));
                c.expect(lhs == f.chi(x) * f.chi(y), || {
                    format!("{name}: chi({x}*{y})")
                });
            }
        }

        // Q1 Q2 = chi(13) wherever both are defined and nonzero
        if let Some(qv) = q_values(f, false) {
            if qv.q1 != Chi::Zero && qv.q2 != Chi::Zero {
                let chi13 = f.chi(f.from_int(13));
                c.expect(qv.q1 * qv.q2 == chi13, || {
                    format!("{name}: Q1 Q2 != chi(13)")
                });
            }
        }
    }
    c.expect(i2_count > 0, || "no odd APN power map found".into());
    c.fact(format!("I2 checked on {i2_count} odd APN power maps"));
    c
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 10] = [
        (1, "bridge BCT = (-1)-DDT", bridge),
        (2, "c-differential uniformity of the inverse", inverse_cdu),
        (3, "(-1)-differential spectrum of the inverse", m1_spectrum),
        (4, "boomerang spectrum of the inverse", boom_spectrum),
        (5, "odd APN catalog", apn_catalog),
        (6, "modified inverse", modified_inverse),
        (7, "binomial X^(q-2) + uX^2", binomial),
        (8, "switching bounds", switch_bounds),
        (9, "switch search, s = 0", switch_search),
        (10, "property suites", properties),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let check = run();
        let secs = start.elapsed().as_secs_f64();
        if check.failures.is_empty() {
            println!("criterion {n:>2} PASS  {name} ({secs:.1}s)");
        } else {
            failed += 1;
            println!("criterion {n:>2} FAIL  {name} ({secs:.1}s)");
            for f in check.failures.iter().take(10) {
                println!("    {f}");
            }
            if check.failures.len() > 10 {
                println!("    ... {} more", check.failures.len() - 10);
            }
        }
        for fact in &check.facts {
            println!("    {fact}");
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
