use qpcat::verify::{verify_paper, Status, VerifyConfig};

#[test]
fn acceptance() {
    let report = verify_paper(&VerifyConfig::default());
    for c in &report.checks {
        println!("{}", c);
    }
    assert_eq!(report.checks.len(), 11);
    let ids: Vec<u32> = report.checks.iter().map(|c| c.id).collect();
    assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    let failed: Vec<&str> = report.checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.name).collect();
    assert!(failed.is_empty(), "not passing: {:?}", failed);
}
