use std::fs;
use std::path::Path;

use serde_json::Value;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn wqo(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = wqo::run(std::iter::once("wqo").chain(args.iter().copied()), &mut out, &mut err);
    Output { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn json(args: &[&str]) -> (i32, Value) {
    let o = wqo(args);
    assert!(o.err.is_empty(), "{}", o.err);
    (o.code, serde_json::from_str(&o.out).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn documented_examples() {
    let o = wqo(&["decide", "--order", "prefix", "--regex", "a*b"]);
    assert_eq!(o.code, 1);
    assert!(o.out.contains("verdict: not-wqo"));
    assert!(o.out.contains("antichain (5): b ab aab aaab aaaab"), "{}", o.out);

    let (code, v) = json(&["decide", "--order", "infix", "--regex", "a*b*|b*a*", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "wqo");

    let o = wqo(&["infinite", "--sequence", "thue-morse", "--check", "cube-free", "--length", "4096"]);
    assert_eq!(o.code, 0, "{}", o.err);
}

#[test]
fn report_schema() {
    let o = wqo(&["decide", "--order", "prefix", "--regex", "a*", "--json"]);
    assert_eq!(o.code, 0);
    let v: Value = serde_json::from_str(&o.out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["certificate", "ordinal_bounds", "relation", "verdict"]);
    // Key order in the text itself.
    let pos = |k: &str| o.out.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("relation") < pos("verdict") && pos("verdict") < pos("certificate"));
    assert!(pos("certificate") < pos("ordinal_bounds"));
    assert_eq!(v["relation"], "prefix");
    assert_eq!(v["certificate"]["kind"], "chain-decomposition");
    assert_eq!(v["certificate"]["chain_count"], 1);
    let b = &v["ordinal_bounds"];
    assert_eq!(b["height"], "w");
    assert_eq!(b["height_strict"], false);
    // One chain: width at most 1, and mot below w^3 as in every wqo report.
    assert_eq!((b["width"].as_str(), b["width_strict"].as_bool()), (Some("1"), Some(false)));
    let mot: wqo_core::OrdinalExpr = b["mot"].as_str().unwrap().parse().unwrap();
    assert!(mot <= wqo_core::OrdinalExpr::omega_pow(3).unwrap());
    assert!(b["mot_strict"].is_boolean());

    let (code, v) = json(&["decide", "--order", "suffix", "--regex", "a*b", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "wqo");

    let (code, v) = json(&["decide", "--order", "prefix", "--regex", "a*b", "--json", "--antichain-size", "7"]);
    assert_eq!(code, 1);
    assert_eq!(v["ordinal_bounds"], Value::Null);
    assert_eq!(v["certificate"]["antichain"].as_array().unwrap().len(), 7);
}

#[test]
fn empty_language_has_no_chains() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.aut", "alphabet: a b\nstates: q0\ninitial: q0\naccepting:\nq0 a q0\n");
    let (code, v) = json(&["decide", "--order", "prefix", "--automaton", &empty, "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "wqo");
    assert_eq!(v["certificate"]["chain_count"], 0);
    let (code, _) = json(&["decide", "--order", "infix", "--automaton", &empty, "--json"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["decide", "--order", "prefix"],
        vec!["decide", "--order", "prefix", "--regex", "a", "--grammar", "g.txt"],
        vec!["decide", "--order", "sideways", "--regex", "a"],
        vec!["decide", "--order", "prefix", "--regex", "a", "--frobnicate"],
        vec!["frobnicate"],
        vec!["infinite", "--check", "cube-free"],
    ] {
        let o = wqo(&args);
        assert_eq!(o.code, 2, "{args:?}");
        assert!(o.out.is_empty() && !o.err.is_empty(), "{args:?}");
    }
    let o = wqo(&["decide", "--order", "prefix", "--automaton", "/nonexistent/file"]);
    assert_eq!(o.code, 2);
    assert!(o.err.starts_with("error: /nonexistent/file"), "{}", o.err);
    let o = wqo(&["decide", "--order", "prefix", "--regex", "a(b"]);
    assert_eq!(o.code, 2);
    // A budget too small for the subset construction.
    let o = wqo(&["decide", "--order", "infix", "--regex", "(a|b)*a(a|b)(a|b)(a|b)", "--max-states", "4"]);
    assert_eq!(o.code, 2, "{}", o.out);
    assert!(!o.err.is_empty());
    assert_eq!(wqo(&["--help"]).code, 0);
}

#[test]
fn automaton_files() {
    let dir = tempfile::tempdir().unwrap();
    let text = "# a*b, written by hand\nalphabet: a b\nstates: s t\ninitial: s\naccepting: t\ns a s\ns b t\n";
    let path = write(dir.path(), "astarb.aut", text);
    let o = wqo(&["decide", "--order", "prefix", "--automaton", &path]);
    assert_eq!(o.code, 1);
    assert!(o.out.contains("b ab aab"));
    let bad = write(dir.path(), "bad.aut", "alphabet: a\nstates: s\ninitial: s\ns b s\n");
    let o = wqo(&["decide", "--order", "prefix", "--automaton", &bad]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("line 4"), "{}", o.err);

    // Closures print automata that parse back.
    let o = wqo(&["closure", "--kind", "infix", "--regex", "ab"]);
    assert_eq!(o.code, 0);
    let closed = write(dir.path(), "closed.aut", &o.out);
    let n = wqo::parse_automaton(&o.out).unwrap();
    for (w, inside) in [("", true), ("a", true), ("b", true), ("ab", true), ("ba", false), ("aa", false)] {
        assert_eq!(n.accepts(&wqo_core::Word::from(w)), inside, "{w}");
    }
    assert_eq!(wqo(&["decide", "--order", "infix", "--automaton", &closed]).code, 0);
}

#[test]
fn grammar_sources() {
    let dir = tempfile::tempdir().unwrap();
    let anbn = write(dir.path(), "anbn.cfg", "S -> a S b | eps\n");
    let pal = write(dir.path(), "pal.cfg", "S -> a S a | b S b | a | b | eps\n");
    assert_eq!(wqo(&["decide", "--order", "infix", "--grammar", &anbn]).code, 0);
    let (code, v) = json(&["decide", "--order", "infix", "--grammar", &pal, "--json", "--antichain-size", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["certificate"]["antichain"].as_array().unwrap().len(), 4);

    let o = wqo(&["bounded", "--grammar", &anbn]);
    assert_eq!((o.code, o.out.as_str()), (0, "bounded: yes\nwords: a b\n"));
    let o = wqo(&["bounded", "--grammar", &pal]);
    assert_eq!(o.code, 1);
    assert!(o.out.starts_with("bounded: no"));

    let o = wqo(&["closure", "--kind", "subword", "--grammar", &anbn]);
    assert_eq!(o.code, 0);
    let n = wqo::parse_automaton(&o.out).unwrap();
    assert!(n.accepts(&wqo_core::Word::from("aab")) && !n.accepts(&wqo_core::Word::from("ba")));
    assert_eq!(wqo(&["closure", "--kind", "prefix", "--grammar", &anbn]).code, 2);

    let o = wqo(&["reduce", "--kind", "marker", "--grammar", &anbn]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains('#'));
}

#[test]
fn witness_and_bounded() {
    let o = wqo(&["witness", "--size", "3", "--order", "prefix", "--regex", "a*b"]);
    assert_eq!((o.code, o.out.as_str()), (1, "b\nab\naab\n"));
    let o = wqo(&["witness", "--size", "3", "--regex", "a*"]);
    assert_eq!(o.code, 0);
    let (code, v) = json(&["witness", "--size", "6", "--regex", "(a|b)*", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(v["antichain"].as_array().unwrap().len(), 6);

    let o = wqo(&["bounded", "--regex", "a*b*"]);
    assert_eq!((o.code, o.out.as_str()), (0, "bounded: yes\nwords: a b\n"));
    let (code, v) = json(&["bounded", "--regex", "(a|b)*", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(v["bounded"], false);
    let (u, w) = (v["witness"]["u"].as_str().unwrap(), v["witness"]["v"].as_str().unwrap());
    assert_ne!(format!("{u}{w}"), format!("{w}{u}"));
}

#[test]
fn words_and_periods() {
    let o = wqo(&["period", "--word", "abaab"]);
    assert_eq!(o.out, "period: 3\nprimitive root: abaab\ncanonical period: aabab\n");
    let (_, v) = json(&["period", "--word", "abab", "--json"]);
    assert_eq!(v["period"], 2);
    assert_eq!(v["primitive_root"], "ab");
    assert_eq!(wqo(&["period", "--word", ""]).code, 2);

    let o = wqo(&["infchain", "--period", "ba", "--test", "babab", "--test", "a"]);
    assert_eq!(o.code, 0, "{}", o.out);
    assert!(o.out.contains("components: 4"));
    assert_eq!(wqo(&["infchain", "--period", "ab", "--test", "aa"]).code, 1);
}

#[test]
fn infinite_words() {
    let dir = tempfile::tempdir().unwrap();
    let tm = write(
        dir.path(),
        "tm.auto",
        "base: 2\nalphabet: 0 1\nstates: e o\ninitial: e\naccepting: e o\ne 0 e\ne 1 o\no 0 o\no 1 e\noutput: e 0\noutput: o 1\n",
    );
    let builtin = wqo(&["infinite", "--sequence", "thue-morse", "--check", "recurrence", "--horizon", "4096"]);
    assert_eq!(builtin.code, 0);
    let from_file = wqo(&["infinite", "--sequence-file", &tm, "--check", "recurrence", "--horizon", "4096"]);
    assert_eq!(from_file.code, 0);
    // Same table, different name line.
    assert_eq!(builtin.out.lines().skip(1).collect::<Vec<_>>(), from_file.out.lines().skip(1).collect::<Vec<_>>());

    let (code, v) = json(&["infinite", "--sequence", "block", "--check", "ultimately-ur", "--horizon", "4096", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["detail"]["factor"], "b");
    let o = wqo(&["infinite", "--sequence", "thue-morse", "--check", "ultimately-ur", "--horizon", "4096"]);
    assert_eq!(o.code, 0);
    let o = wqo(&["infinite", "--sequence", "block", "--check", "cube-free", "--length", "64"]);
    assert_eq!(o.code, 1);
}

#[test]
fn reductions_print_automata() {
    let o = wqo(&["reduce", "--kind", "marker", "--regex", "a*b"]);
    assert_eq!(o.code, 0);
    let marked = wqo::parse_automaton(&o.out).unwrap();
    assert!(marked.accepts(&wqo_core::Word::from("#aab")));
    assert!(!marked.accepts(&wqo_core::Word::from("aab")));
    let o = wqo(&["reduce", "--kind", "full-image", "--regex", "ab"]);
    let image = wqo::parse_automaton(&o.out).unwrap();
    assert!(image.accepts(&wqo_core::Word::from("bbab")));
}
