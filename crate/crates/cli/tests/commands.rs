use std::path::PathBuf;

use prn::format::parse_network;
use prn_cli::{run, Outcome};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn prn(args: &[&str]) -> Outcome {
    let args: Vec<String> =
        args.iter().map(|a| if a.contains('.') && !a.starts_with('-') { fixture(a) } else { a.to_string() }).collect();
    run(args)
}

fn ok(args: &[&str]) -> String {
    let out = prn(args);
    assert_eq!(out.code, 0, "{args:?} failed: {}", out.stderr);
    out.stdout
}

#[test]
fn matrix_prints_exact_decimals() {
    assert_eq!(
        ok(&["matrix", "reference.prn"]),
        "0.67    0 0.33    0\n0.21 0.46 0.11 0.22\n   0    0    1    0\n   0    0 0.32 0.68\n"
    );
}

#[test]
fn steady_state_sits_on_the_absorbing_state() {
    assert_eq!(ok(&["steady", "reference.prn"]), "(0,0) 0.0\n(0,1) 0.0\n(1,0) 1.0\n(1,1) 0.0\n");
}

#[test]
fn steady_state_needs_one_recurrent_class() {
    let out = prn(&["steady", "cascade.prn"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not unique"), "{}", out.stderr);
}

#[test]
fn epsilon_of_the_identity() {
    assert_eq!(ok(&["epsilon", "reduced.prn", "reference.prn", "maps/identity.map"]), "11/100 (= 0.11)\n");
}

#[test]
fn check_hom_reports_witnesses() {
    let text = ok(&["check-hom", "reduced.prn", "reference.prn", "maps/identity.map"]);
    assert!(text.starts_with("homomorphism: yes\n"));
    assert!(text.ends_with("epsilon: 11/100 (= 0.11)\n"));
}

#[test]
fn negative_answers_only_fail_when_asked() {
    let args = ["check-hom", "conjugate_first.prn", "conjugate_second.prn", "maps/identity.map"];
    let quiet = prn(&args);
    assert_eq!(quiet.code, 0);
    assert!(quiet.stdout.starts_with("homomorphism: no"));
    let mut strict = vec!["--fail-on-negative"];
    strict.extend(args);
    assert_eq!(prn(&strict).code, 1);
}

#[test]
fn searches_find_the_conjugating_map() {
    let map = ok(&["check-hom", "conjugate_first.prn", "conjugate_second.prn", "maps/conjugating.map"]);
    assert_eq!(map, "homomorphism: yes\n  f1 -> f2\nepsilon: 0\n");
    let text = ok(&["search-iso", "conjugate_first.prn", "conjugate_second.prn"]);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.ends_with("epsilon=0")));
}

#[test]
fn power_profile_starts_at_epsilon() {
    let text = ok(&["power-profile", "reduced.prn", "reference.prn", "3"]);
    assert_eq!(text.lines().next(), Some("1 0.11"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn sum_and_product_print_documents() {
    let sum = parse_network(&ok(&["sum", "z2_identity_one.prn", "z2_identity_zero.prn"])).unwrap();
    assert_eq!(sum.state_count(), 4);
    let product = parse_network(&ok(&["product", "z2_identity_one.prn", "z2_identity_zero.prn"])).unwrap();
    let names: Vec<&str> = product.functions().map(|f| f.name()).collect();
    assert_eq!(names, ["(f1,f1)", "(f1,f3)", "(f2,f1)", "(f2,f3)"]);
}

#[test]
fn average_combiner_is_rejected() {
    let out = prn(&["product", "z2_identity_one.prn", "z2_identity_zero.prn", "--combiner", "average"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not stochastic"));
}

#[test]
fn restrict_checks_invariance() {
    let doc = ok(&["restrict", "reference.prn", "{(0,0),(1,0)}"]);
    assert_eq!(parse_network(&doc).unwrap().state_count(), 2);
    let out = prn(&["restrict", "reference.prn", "{(0,0)}"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("f3 sends (0,0) to (1,0)"), "{}", out.stderr);
}

#[test]
fn invariant_subsets_and_irreducibles() {
    assert_eq!(
        ok(&["invariants", "reference.prn"]),
        "{(1,0)}  (irreducible)\n{(0,0), (1,0)}\n{(1,0), (1,1)}\n{(0,0), (1,0), (1,1)}\n{(0,0), (0,1), (1,0), (1,1)}\n"
    );
    assert_eq!(ok(&["irreducible", "reference.prn"]), "{(1,0)}\n");
}

#[test]
fn projections_onto_a_fixed_point() {
    let text = ok(&["projections", "reference.prn", "{(1,0)}"]);
    assert_eq!(text, "(0,0) -> (1,0), (0,1) -> (1,0), (1,0) -> (1,0), (1,1) -> (1,0)  epsilon=0.89\n");
    let out = prn(&["--fail-on-negative", "projections", "reference.prn", "{(0,0)}"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("{(0,0)} is not invariant"));
}

#[test]
fn decompose_into_a_product() {
    let text = ok(&["decompose", "reference.prn", "{(0,0),(1,0)}", "{(1,0),(1,1)}"]);
    assert!(text.starts_with("isomorphic to the product\n"));
    assert!(text.ends_with("epsilon: 11/2500 (= 0.0044)\n"));
}

#[test]
fn expand_pbn_weights() {
    let doc = parse_network(&ok(&["expand-pbn", "two_genes.pbn"])).unwrap();
    let probs: Vec<String> =
        (0..doc.function_count()).map(|i| prn::exact::format_rational(doc.probability(i))).collect();
    assert_eq!(probs, ["0.42", "0.18", "0.28", "0.12"]);
}

#[test]
fn linear_enumeration_counts() {
    let text = ok(&["linear-enum", "2", "2", "--classes"]);
    let headers: Vec<&str> = text.lines().filter(|l| l.ends_with("matrices")).collect();
    assert_eq!(
        headers,
        ["x^2 mod 2: 4 matrices", "x^2+x mod 2: 6 matrices", "x^2+1 mod 2: 4 matrices", "x^2+x+1 mod 2: 2 matrices"]
    );
    assert!(text.contains("6 isomorphism classes\n"));
    let out = prn(&["linear-enum", "4", "2"]);
    assert_eq!(out.code, 2);
}

#[test]
fn export_dot_edges() {
    let text = ok(&["export-dot", "reference.prn"]);
    assert!(text.contains("  \"(0,1)\" -> \"(1,0)\" [label=\"f4: 0.11\"];\n"));
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 16);
    assert_eq!(text, ok(&["export-dot", "reference.prn"]));
}

#[test]
fn sum_digraph_has_eight_nodes() {
    let text = ok(&["export-dot", "cascade_sum.prn"]);
    assert_eq!(text.lines().filter(|l| l.ends_with("\";")).count(), 8);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["matrix"],
        &["matrix", "missing.prn"],
        &["power-profile", "reduced.prn", "reference.prn", "x"],
    ] {
        let out = prn(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_goes_to_stdout() {
    let out = prn(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("export-dot"));
}

#[test]
fn document_errors_carry_locations() {
    let dir = std::env::temp_dir().join(format!("prn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("short.prn");
    std::fs::write(&bad, "prn/1\nspace product 2\nfunction a 0.5\n  (0) -> (0)\n  (1) -> (1)\nfunction b 0.49\n  (0) -> (1)\n  (1) -> (0)\n").unwrap();
    let out = run(["matrix".to_string(), bad.to_string_lossy().into_owned()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).unwrap();
}
