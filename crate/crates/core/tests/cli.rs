use std::process::Command;

fn bendlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bendlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_prints_lengths() {
    let o = bendlab(&["solve", "--theta-alpha", "1.5708", "--theta-beta", "1.5708"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let get = |k: &str| -> f64 {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(k))
            .and_then(|l| l.split_whitespace().nth(1))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((get("l_alpha_star") - 1.31696).abs() < 1e-5);
    assert!((get("d") - 1.31696).abs() < 1e-5);
}

#[test]
fn minimize_prints_closed_form() {
    let o = bendlab(&["minimize", "--a", "1", "--b", "2"]);
    assert!(o.status.success());
    let row: Vec<String> = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .map(String::from)
        .collect();
    assert!(row[2].starts_with("2.88727"), "{row:?}");
    assert!(row[3].starts_with("0.96242"), "{row:?}");
}

#[test]
fn verify_exits_zero() {
    let o = bendlab(&["verify", "--seed", "7"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
}

#[test]
fn errors_are_single_line() {
    let o = bendlab(&["sweep", "--a", "40", "--b", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error kind=Sweep msg="), "{err}");

    let o = bendlab(&["render", "--width", "many"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error kind=usage"), "{err}");
}
