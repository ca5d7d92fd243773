use ztop::family::{compare_grid, PrintedStatus};
use ztop::resolve::ResolveOptions;

#[test]
fn engines_agree_across_the_grid() {
    let grid = compare_grid(
        &[(2, 3), (2, 5), (3, 4), (3, 5)],
        &[1, 2, 3, 4, 5],
        ResolveOptions::default(),
    )
    .unwrap();
    for c in &grid {
        print!("{}", c.to_text());
        assert!(c.engines_agree, "{}", c.params);
        assert!(c.derived_agrees, "{}", c.params);
        assert!(c.double_pole_ok(), "{}", c.params);
        assert!(c.leading_terms_agree(), "{}", c.params);
        if c.params.a == 1 {
            assert_eq!(c.printed_status, PrintedStatus::Agree, "{}", c.params);
        } else {
            assert_ne!(c.printed_status, PrintedStatus::Mismatch, "{}", c.params);
        }
    }
}
