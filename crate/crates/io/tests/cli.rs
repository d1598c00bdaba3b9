use fusioncat_io::cli::run;
use std::io::Write;
use std::process::{Command, Stdio};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fc(args: &[&str]) -> Out {
    fc_stdin(args, b"")
}

fn fc_stdin(args: &[&str], input: &[u8]) -> Out {
    let mut stdin = input;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("fusioncat").chain(args.iter().copied()), &mut stdin, &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn assert_usage_error(o: &Out, needle: &str) {
    assert_eq!(o.code, 2, "stdout: {}", o.stdout);
    assert_eq!(o.stderr.lines().count(), 1, "{:?}", o.stderr);
    assert!(o.stderr.starts_with("fusioncat: "));
    assert!(o.stderr.contains(needle), "{:?}", o.stderr);
}

#[test]
fn fuse_and_aliases() {
    let o = fc(&["fuse", "--catalog", "U", "M^0", "M^0"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "M~_0[0] + M~_0[1] + M~_0[2] + 2*M^0\n");
    // W13 is Mhat_t1_1[2]; its square lands in the t^2 sector
    let by_index = fc(&["fuse", "--catalog", "U", "W13", "W13"]);
    let by_name = fc(&["fuse", "--catalog", "U", "Mhat_t1_1[2]", "Mhat_t1_1[2]"]);
    assert_eq!(by_index.stdout, by_name.stdout);
    assert_eq!(by_index.stdout, "Mhat_t2_0[0] + Mhat_t2_0[2]\n");
    // three-fold product folds left
    let o = fc(&["fuse", "--catalog", "VLtau", "V(c,1)", "V(c,1)", "V(0,0)[1]"]);
    assert_eq!(o.code, 0);
    assert!(!o.stdout.trim().is_empty());
}

#[test]
fn count() {
    assert_eq!(fc(&["count", "2"]).stdout, "20\n");
    assert_eq!(fc(&["count", "1"]).stdout, "9\n");
    assert_eq!(fc(&["count", "3"]).stdout, "35\n");
}

#[test]
fn verify_catalogs() {
    for name in ["U", "VLtau"] {
        let o = fc(&["verify", "--catalog", name]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert!(o.stdout.lines().any(|l| l == "PASS Verlinde round-trip"));
        assert!(!o.stdout.contains("FAIL"));
        assert!(o.stdout.ends_with("all checks passed\n"));
    }
    let o = fc(&["verify", "--catalog", "U"]);
    assert!(o.stdout.contains("\nD^2 = 72\n"));
    assert!(o.stdout.contains("\nc = 3\n"));
    let o = fc(&["verify", "--catalog", "VLtau"]);
    assert!(o.stdout.contains("\nD^2 = 108\n"));
}

#[test]
fn catalog_pipes_into_verify() {
    for name in ["U", "VLtau"] {
        let text = fc(&["catalog", name]).stdout;
        let o = fc_stdin(&["verify", "-"], text.as_bytes());
        assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
        assert_eq!(o.stdout, fc(&["verify", "--catalog", name]).stdout);
        // re-emitting through verlinde gives exactly the N lines
        let v = fc_stdin(&["verlinde", "-"], text.as_bytes()).stdout;
        let n_lines: String = text.lines().filter(|l| l.starts_with("N ")).map(|l| format!("{l}\n")).collect();
        assert_eq!(v, n_lines);
    }
}

#[test]
fn real_binary_pipe() {
    let exe = env!("CARGO_BIN_EXE_fusioncat");
    let cat = Command::new(exe).args(["catalog", "U"]).output().unwrap();
    assert!(cat.status.success());
    let mut child =
        Command::new(exe).args(["verify", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(&cat.stdout).unwrap();
    let res = child.wait_with_output().unwrap();
    assert!(res.status.success());
    assert!(String::from_utf8(res.stdout).unwrap().ends_with("all checks passed\n"));

    let bad = Command::new(exe).args(["fuse", "--catalog", "U", "nope", "M^0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

#[test]
fn grid_output_is_stable() {
    let a = fc(&["smatrix", "--catalog", "U", "--format", "grid"]);
    let b = fc(&["smatrix", "--catalog", "U", "--format", "grid"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout.lines().count(), 400);
    let t = fc(&["smatrix", "--catalog", "U", "--stilde", "--format", "grid"]);
    assert_eq!(t.stdout.lines().count(), 400);
    assert!(t.stdout.lines().any(|l| l == "0 0 1"));
    assert!(t.stdout.lines().any(|l| l == "6 7 -3"));
    let table = fc(&["smatrix", "--catalog", "U", "--stilde"]).stdout;
    assert_eq!(table.lines().count(), 20);
    assert!(table.lines().all(|l| l.split('\t').count() == 20));
}

#[test]
fn tmatrix_reports_both_relations() {
    let o = fc(&["tmatrix", "--catalog", "U"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("# (ST)^3 = S^2: yes\n"));
    assert!(o.stdout.contains("# (ST)^3 = e(c/8) S^2: no\n"));
    assert!(fc(&["tmatrix", "--catalog", "U", "--format", "fcat"]).code == 2);
}

#[test]
fn characters() {
    let o = fc(&["char", "--catalog", "U", "M^1"]);
    assert_eq!(o.code, 0);
    let mut lines = o.stdout.lines();
    assert_eq!(lines.next(), Some("1/8 2"));
    assert_eq!(lines.next(), Some("9/8 14"));
    assert!(o.stdout.lines().last().unwrap().starts_with("# cutoff "));
    assert_eq!(fc(&["char", "--catalog", "U", "M^0"]).stdout.lines().next(), Some("3/8 4"));
    assert_usage_error(&fc(&["char", "--catalog", "U", "M~_0[0]"]), "no lattice character");
    assert_usage_error(&fc(&["char", "--catalog", "U", "M^1", "--cutoff", "0"]), "cutoff must be positive");
    assert_usage_error(&fc(&["char", "--catalog", "U", "M^1", "--cutoff=x"]), "bad cutoff");
}

#[test]
fn qdim_lists_every_label() {
    let o = fc(&["qdim", "--catalog", "U"]);
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 20);
    assert_eq!(lines[0], "0 M~_0[0] 1 1");
    assert!(lines[6].starts_with("6 M^0 3 "), "{}", lines[6]);
}

#[test]
fn usage_errors_are_one_line() {
    assert_usage_error(&fc(&["fuse", "--catalog", "U", "nope", "M^0"]), "unknown label `nope`");
    assert_usage_error(&fc(&["verify", "--catalog", "U", "--frobnicate"]), "--frobnicate");
    assert_usage_error(&fc(&["verify"]), "no input");
    assert_usage_error(&fc(&["verify", "/nonexistent/x.fcat"]), "/nonexistent/x.fcat");
    let bad = "# FCAT v1\ncategory X\nlabel 0 one\nunit 0\nN 0 0 0 1\nN 0 0 7 1\n";
    assert_usage_error(&fc_stdin(&["verify", "-"], bad.as_bytes()), "<stdin>: line 6");
}

#[test]
fn perturbed_twist_fails_verification() {
    let text = fc(&["catalog", "U"]).stdout;
    let twist = text.lines().find(|l| l.starts_with("twist 7 ")).unwrap().to_string();
    let perturbed = text.replace(&format!("{twist}\n"), "twist 7 1/7\n");
    assert_ne!(perturbed, text);
    let o = fc_stdin(&["verify", "-"], perturbed.as_bytes());
    assert_eq!(o.code, 1, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("FAIL") || !o.stderr.is_empty());
}

#[test]
fn help_exits_zero() {
    let o = fc(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("verify"));
}

#[test]
fn fibonacci_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fibonacci.fcat");
    let o = fc(&["verify", path]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("\nc = 14/5\n"));
    let q = fc(&["qdim", "--input", path]);
    assert!(q.stdout.lines().nth(1).unwrap().starts_with("1 tau 1.618033989 "), "{}", q.stdout);
    assert_eq!(fc(&["fuse", path, "tau", "tau"]).code, 2);
    assert_eq!(fc(&["fuse", "--input", path, "tau", "tau"]).stdout, "1 + tau\n");
}
