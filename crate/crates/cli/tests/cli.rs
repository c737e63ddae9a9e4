use orelab_cli::run;

fn orelab(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("orelab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn eval_prints_the_value() {
    let (code, out, _) = orelab(&["eval", "--ring", "Poly(Z,y)", "--sigma", "id", "--delta", "d_dy", "x*y - y*x"]);
    assert_eq!((code, out.trim()), (0, "1"));
    let (code, out, _) = orelab(&["eval", "--ring", "Free(u,v,x|xu=0,xv=0)", "x*u"]);
    assert_eq!((code, out.trim()), (0, "0"));
    let (code, out, _) = orelab(&["eval", "--ring", "Poly(Z,t)", "--sigma", "id", "--var", "d", "d*t - t*d"]);
    assert_eq!((code, out.trim()), (0, "0"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let (code, _, err) = orelab(&["eval", "--ring", "Poly(Z,y)", "y y"]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error at 2"), "{err}");
    assert_eq!(orelab(&["eval", "--ring", "Poly(Z,y)", "q"]).0, 2);
    assert_eq!(orelab(&["eval", "--ring", "Nope", "1"]).0, 2);
    assert_eq!(orelab(&["suite", "no_such_suite"]).0, 2);
    assert_eq!(orelab(&["frobnicate"]).0, 2);
    assert_eq!(orelab(&["eval", "--ring", "Z", "--delta", "d_dy", "1"]).0, 2);
    assert_eq!(orelab(&["map", "--ring", "Z/2", "check", "inj"]).0, 2);
    assert_eq!(orelab(&["demo", "skew-finiteness", "--ring", "Z"]).0, 2);
}

#[test]
fn help_exits_0() {
    let (code, out, _) = orelab(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("suite"));
}

#[test]
fn suite_list_and_json() {
    let (code, out, _) = orelab(&["suite", "list"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 14);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, out, _) = orelab(&["suite", "kernel_powers", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let json = std::fs::read_to_string(&path).unwrap();
    assert!(json.contains("\"suite\": \"kernel_powers\""));
    assert!(json.contains("\"status\": \"pass\""));
}

#[test]
fn map_checks_report_through_exit_codes() {
    let inj = ["map", "--ring", "Z/2", "--side", "left", "--matrix", "[[1, 1]]", "check", "inj"];
    assert_eq!(orelab(&inj).0, 0);
    let (code, out, _) = orelab(&["map", "--ring", "Z/2", "--side", "left", "--matrix", "[[1, 1]]", "check", "surj"]);
    assert_eq!(code, 1);
    assert!(out.contains("is not reached"), "{out}");
    let (code, out, _) = orelab(&["map", "--ring", "Z/4", "--matrix", "[[2]]", "check", "inj"]);
    assert_eq!(code, 1);
    assert!(out.contains("same image"), "{out}");
    let (code, out, _) = orelab(&["map", "--ring", "Z/2", "--side", "right", "search", "mono", "2", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("none (definitive)"), "{out}");
    let (code, out, _) = orelab(&["map", "--ring", "Z/3", "search", "mono", "1", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("found"), "{out}");
    let (code, out, _) = orelab(&["map", "--ring", "Poly(Z,y)", "--side", "right", "--matrix", "[[y^2, -y]]", "kernel", "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(1, y)"), "{out}");
}

#[test]
fn finiteness_and_demos() {
    let (code, out, _) = orelab(&["finiteness", "direct", "--ring", "Z/6"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("holds"));
    let (code, out, _) = orelab(&["finiteness", "stable", "--ring", "Z/2", "--upto", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("upto(2)"));
    let (code, out, _) = orelab(&["demo", "one-sided-inverse"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("y*x != 1"));
    let (code, out, _) = orelab(&["demo", "skew-finiteness", "--ring", "Z/4", "--sigma", "id", "--prec", "8"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = orelab(&["demo", "umat-finiteness", "--ring", "Z", "--assume-directly-finite"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn budget_env_caps_searches() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_orelab"))
        .args(["finiteness", "direct", "--ring", "M2(Z/2)"])
        .env("ORELAB_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("inconclusive"));
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_orelab"))
        .args(["finiteness", "direct", "--ring", "Z/2"])
        .env("ORELAB_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
