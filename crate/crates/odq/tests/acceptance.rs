//! Acceptance suite. Each criterion prints one PASS/FAIL line; run with
//! `cargo test -p odq --test acceptance -- --nocapture` to see them.

mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use odq_core::{
    assess, infer_type, parse_dataset, parse_type_vectors, score_file_format, AliasMap, Dataset,
    Dimension, FeatureColumn, FeaturePath, FeatureSpec, FileFormat, ParseOptions, StandardSpec,
    Value,
};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use support::oracle::{self, Instance};

const TYPE_VECTORS: &str = include_str!("../../core/data/type-vectors.tsv");
const PROPERTY_CASES: u32 = 256;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn path(s: &str) -> FeaturePath {
    FeaturePath::parse(s).unwrap()
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    check: fn(),
}

fn format_table() {
    let expected = [
        (FileFormat::Json, 100.0),
        (FileFormat::JsonLd, 100.0),
        (FileFormat::GeoJson, 100.0),
        (FileFormat::Xml, 75.0),
        (FileFormat::Gml, 75.0),
        (FileFormat::Kml, 75.0),
        (FileFormat::Rdf, 75.0),
        (FileFormat::Csv, 50.0),
        (FileFormat::Xls, 25.0),
        (FileFormat::Xlsx, 25.0),
        (FileFormat::Pdf, 0.0),
        (FileFormat::Txt, 0.0),
    ];
    assert_eq!(expected.len(), 12);
    for (format, points) in expected {
        assert_eq!(score_file_format(format).points(), points, "{format}");
    }
    let levels: BTreeSet<u64> = expected.iter().map(|(_, p)| *p as u64).collect();
    assert_eq!(levels, [0, 25, 50, 75, 100].into());
}

fn weight_example() {
    let features = (0..7)
        .map(|i| FeatureSpec::mandatory(&format!("m{i}")).unwrap())
        .collect();
    let spec = StandardSpec::new("urn:x", features).unwrap();
    let present: BTreeSet<_> = [path("m1"), path("m5")].into();
    let w = spec.local_weights(&present).unwrap();
    assert_eq!(w.len(), 2);
    assert_eq!(w.get(&path("m1")), Some(50.0));
    assert_eq!(w.get(&path("m5")), Some(50.0));
}

fn weights_sum_property() {
    use proptest::prelude::*;
    runner(1000)
        .run(&(1usize..=30, 0usize..=30), |(m, o)| {
            let mut features: Vec<_> = (0..m)
                .map(|i| FeatureSpec::mandatory(&format!("m{i}")).unwrap())
                .collect();
            features.extend((0..o).map(|i| FeatureSpec::optional(&format!("o{i}")).unwrap()));
            let total = StandardSpec::new("urn:x", features)
                .unwrap()
                .weights()
                .total();
            prop_assert!((total - 100.0).abs() < 1e-9, "m={m} o={o} total={total}");
            Ok(())
        })
        .unwrap();
}

fn perfect_and_pathological() {
    let spec = StandardSpec::from_json(support::TOY_STANDARD).unwrap();
    let format = odq_core::detect_format("poi.geojson", None, support::PERFECT_GEOJSON.as_bytes());
    assert_eq!(format, FileFormat::GeoJson);
    let d = parse_dataset(
        format,
        support::PERFECT_GEOJSON.as_bytes(),
        &ParseOptions::default(),
    )
    .unwrap();
    let r = assess("perfect", &d, &spec, &AliasMap::default()).unwrap();
    for dim in Dimension::ALL {
        assert_eq!(r.score(dim).unwrap().display_2dp(), "100.00", "{dim}");
    }

    let n = 4;
    let bad = Dataset::new(
        FileFormat::Txt,
        n,
        vec![
            FeatureColumn {
                path: path("name"),
                values: vec![
                    Value::text("Hrad"),
                    Value::Integer(3),
                    Value::text("https://x.cz"),
                    Value::Null,
                ],
            },
            FeatureColumn {
                path: path("location"),
                values: vec![
                    Value::text("Hlavní 12"),
                    Value::Float(1.5),
                    Value::text("a@b.cz"),
                    Value::Bool(true),
                ],
            },
            FeatureColumn {
                path: path("entry_fee"),
                values: vec![Value::Null, Value::text(""), Value::Null, Value::text("  ")],
            },
        ],
    )
    .unwrap();
    let r = assess("pathological", &bad, &spec, &AliasMap::default()).unwrap();
    assert_eq!(r.score(Dimension::FileFormat).unwrap().points(), 0.0);
    assert_eq!(r.score(Dimension::SchemaAccuracy).unwrap().points(), 0.0);
    assert!(r.score(Dimension::TypeConsistency).unwrap().points() < 100.0);
    assert!(r.score(Dimension::DataCompleteness).unwrap().points() < 100.0);
}

fn engine_scores(instance: &Instance) -> [Option<f64>; 5] {
    let r = assess(
        "x",
        &instance.dataset(),
        &instance.spec(),
        &instance.alias_map(),
    )
    .unwrap();
    r.scores().map(|s| s.map(|s| s.points()))
}

fn oracle_equivalence() {
    runner(1000)
        .run(&oracle::instance(), |instance| {
            let engine = engine_scores(&instance);
            let reference = oracle::score(&instance).as_array();
            for (dim, (e, o)) in Dimension::ALL
                .iter()
                .zip(engine.iter().zip(reference.iter()))
            {
                match (e, o) {
                    (Some(e), Some(o)) => {
                        if (e - o).abs() > 1e-9 {
                            return Err(TestCaseError::fail(format!(
                                "{dim}: engine {e} oracle {o}"
                            )));
                        }
                    }
                    (None, None) => {}
                    _ => {
                        return Err(TestCaseError::fail(format!(
                            "{dim}: engine {e:?} oracle {o:?}"
                        )))
                    }
                }
            }
            Ok(())
        })
        .unwrap();
}

fn invariant_suite() {
    // score bounds
    runner(PROPERTY_CASES)
        .run(&oracle::instance(), |instance| {
            for s in engine_scores(&instance).into_iter().flatten() {
                if !(0.0..=100.0).contains(&s) {
                    return Err(TestCaseError::fail(format!("score {s} out of bounds")));
                }
            }
            Ok(())
        })
        .unwrap();

    // record permutation
    runner(PROPERTY_CASES)
        .run(
            &(oracle::instance(), proptest::prelude::any::<u64>()),
            |(instance, seed)| {
                let mut shuffled = instance.clone();
                let mut order: Vec<usize> = (0..instance.record_count).collect();
                let mut state = seed;
                for i in (1..order.len()).rev() {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    order.swap(i, (state >> 33) as usize % (i + 1));
                }
                for (_, cells) in &mut shuffled.columns {
                    *cells = order.iter().map(|&i| cells[i].clone()).collect();
                }
                let (a, b) = (engine_scores(&instance), engine_scores(&shuffled));
                for (x, y) in a.iter().zip(&b) {
                    match (x, y) {
                        (Some(x), Some(y)) if (x - y).abs() <= 1e-9 => {}
                        (None, None) => {}
                        _ => return Err(TestCaseError::fail(format!("{a:?} vs {b:?}"))),
                    }
                }
                Ok(())
            },
        )
        .unwrap();

    // renaming a feature to its exact standard name never lowers accuracy
    runner(PROPERTY_CASES)
        .run(&oracle::instance(), |instance| {
            let standard: Vec<String> = instance
                .mandatory
                .iter()
                .chain(&instance.optional)
                .cloned()
                .collect();
            let present: BTreeSet<String> =
                instance.columns.iter().map(|(n, _)| n.clone()).collect();
            let Some(target) = standard.iter().find(|s| !present.contains(*s)) else {
                return Ok(());
            };
            let Some(index) = instance
                .columns
                .iter()
                .position(|(n, _)| !standard.contains(n))
            else {
                return Ok(());
            };
            let mut renamed = instance.clone();
            renamed.columns[index].0 = target.clone();
            renamed.alias.clear();
            let before = engine_scores(&instance)[1].unwrap();
            let after = engine_scores(&renamed)[1].unwrap();
            if after + 1e-12 < before {
                return Err(TestCaseError::fail(format!(
                    "accuracy dropped {before} -> {after}"
                )));
            }
            Ok(())
        })
        .unwrap();

    // identity-compatible alias maps never make completeness trail accuracy
    runner(PROPERTY_CASES)
        .run(&oracle::instance(), |instance| {
            let s = engine_scores(&instance);
            let (accuracy, completeness) = (s[1].unwrap(), s[2].unwrap());
            if completeness + 1e-12 < accuracy {
                return Err(TestCaseError::fail(format!("{completeness} < {accuracy}")));
            }
            Ok(())
        })
        .unwrap();

    // full type consistency iff every feature is single-typed
    runner(PROPERTY_CASES)
        .run(&oracle::instance(), |instance| {
            let Some(tc) = engine_scores(&instance)[3] else {
                return Ok(());
            };
            let all_single = instance.columns.iter().all(|(_, cells)| {
                cells
                    .iter()
                    .map(|(v, _)| infer_type(v))
                    .collect::<BTreeSet<_>>()
                    .len()
                    == 1
            });
            let full = tc >= 100.0 - 1e-9;
            if full != all_single {
                return Err(TestCaseError::fail(format!(
                    "score {tc}, all single-typed: {all_single}"
                )));
            }
            Ok(())
        })
        .unwrap();
}

fn type_vector_conformance() {
    let vectors = parse_type_vectors(TYPE_VECTORS).unwrap();
    let mut failures = Vec::new();
    for v in &vectors {
        let got = infer_type(&Value::text(v.input.clone()));
        if got != v.expected {
            failures.push(format!(
                "line {}: {:?} -> {got}, expected {}",
                v.line, v.input, v.expected
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    for exemplar in [
        "https://brno.cz/hrad",
        "info@brno.cz",
        "Hlavní 12",
        "POINT (16.6068 49.1951)",
        "+420 123 456 789",
        "+44 2071234567",
    ] {
        assert!(
            vectors.iter().any(|v| v.input == exemplar),
            "missing exemplar {exemplar}"
        );
    }
}

fn radar_shape() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = support::six_dataset_manifest(dir.path());
    let out = dir.path().join("out");
    let output = support::odq(&[
        "assess",
        "--standard",
        dir.path().join("standard.json").to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
        "--report",
        "radar",
        "--report",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        output.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );

    let radar = std::fs::read_to_string(out.join("radar.csv")).unwrap();
    let mut reader = csv::Reader::from_reader(radar.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 5);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for row in &rows {
        assert_eq!(row.len(), 5);
        for cell in row {
            let v: f64 = cell.parse().unwrap();
            assert!((0.0..=100.0).contains(&v));
        }
    }

    let table = std::fs::read_to_string(out.join("report.csv")).unwrap();
    let ids: Vec<String> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_owned())
        .collect();
    assert_eq!(
        ids,
        ["brno", "decin", "hradec", "huntirov", "ostrava", "praha"]
    );
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion {
            name: "file-format conversion table",
            budget: Some(Duration::from_secs(1)),
            check: format_table,
        },
        Criterion {
            name: "local weight example (2 of 7 mandatory -> 50 each)",
            budget: None,
            check: weight_example,
        },
        Criterion {
            name: "weights sum to 100 over 1000 random standards",
            budget: Some(Duration::from_secs(5)),
            check: weights_sum_property,
        },
        Criterion {
            name: "perfect GeoJSON scores 100 x5, pathological scores 0 in format/accuracy",
            budget: Some(Duration::from_secs(1)),
            check: perfect_and_pathological,
        },
        Criterion {
            name: "brute-force oracle equivalence on 1000 instances",
            budget: Some(Duration::from_secs(60)),
            check: oracle_equivalence,
        },
        Criterion {
            name: "invariant suite (bounds, permutation, rename, alias, type consistency)",
            budget: None,
            check: invariant_suite,
        },
        Criterion {
            name: "type-vector conformance",
            budget: None,
            check: type_vector_conformance,
        },
        Criterion {
            name: "six-entry manifest yields a 6x5 radar grid",
            budget: None,
            check: radar_shape,
        },
    ];

    let mut failed = Vec::new();
    for criterion in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(criterion.check));
        let elapsed = start.elapsed();
        let verdict = match (&outcome, criterion.budget) {
            (Err(_), _) => "FAIL",
            (Ok(()), Some(budget)) if elapsed > budget => "FAIL (over time budget)",
            _ => "PASS",
        };
        let budget = criterion
            .budget
            .map(|b| format!(" / budget {b:?}"))
            .unwrap_or_default();
        println!("[{verdict}] {} ({elapsed:.2?}{budget})", criterion.name);
        if verdict != "PASS" {
            failed.push(criterion.name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
