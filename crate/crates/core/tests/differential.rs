mod common;

fn env_or(name: &str, default: u64) -> u64 {
    std::env::var(name).ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

/// `SEED` and `CASES` override the defaults for longer soak runs.
#[test]
fn engine_agrees_with_oracle() {
    let report = common::differential(env_or("SEED", 0x5eed), env_or("CASES", 2000) as usize);
    for d in report.divergences.iter().take(3) {
        eprintln!("{}\n{}\nengine:\n{}\noracle:\n{}\n", d.query, d.graph, d.engine, d.oracle);
    }
    assert!(report.non_empty * 4 > report.checked, "too few non-empty results");
    assert_eq!(report.divergences.len(), 0, "{} divergences", report.divergences.len());
}

#[test]
fn generated_queries_cover_the_grammar() {
    let report = common::differential(7, 500);
    let missing: Vec<&str> = common::FEATURES
        .iter()
        .map(|(n, _)| *n)
        .filter(|n| !report.features.contains(n))
        .collect();
    assert!(missing.is_empty(), "{missing:?}");
}
