use lgcoh_web::{cohomology, divisor, integrate, version};

const TWISTED: &str = r#"
[groupoid]
kind = "infinite_cyclic"

[module]
fiber = "Z"
action = "inversion"
"#;

#[test]
fn twisted_lattice_table() {
    let out = cohomology(TWISTED, "0..2", false);
    assert!(out.contains("H^0 = 0\nH^1 = Z/2\nH^2 = 0\n"), "{out}");
    assert!(out.contains("# input: browser"));
}

#[test]
fn single_degree_and_bad_degree() {
    assert!(cohomology(TWISTED, "1", false).contains("H^1 = Z/2"));
    assert!(cohomology(TWISTED, "x", false).starts_with("error: "));
}

#[test]
fn heisenberg_form_integrates() {
    let spec = "[group]\nbuiltin = \"heisenberg\"\n\n[vanest]\nform = \"da^dc\"\n";
    let out = integrate(spec);
    assert!(out.contains("cocycle = 1/2*a'^2*b + a'*c"), "{out}");
    assert!(out.contains("differentiates to = da^dc"), "{out}");
    assert!(out.contains("trace:"), "{out}");
}

#[test]
fn parse_errors_point_at_the_line() {
    let out = integrate("[group]\nbuiltin = 3\n");
    assert!(out.starts_with("error: browser:2:"), "{out}");
}

#[test]
fn divisor_dlog_of_x_is_one() {
    let spec = "[divisor]\nsections = [\"x^1 * (1)\"]\n";
    let out = divisor(spec, 4);
    assert!(out.contains("dlog x^1 * (1) = 1 + O(x^5)"), "{out}");
}

#[test]
fn version_names_the_tool() {
    assert!(version().starts_with("lgcoh "));
}
