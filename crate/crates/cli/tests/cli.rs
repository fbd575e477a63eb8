use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mytranslit"))
        .args(args)
        .env_remove("MYTRANSLIT_PACK")
        .env_remove("MYTRANSLIT_LEXICON")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hotel_ranks_first() {
    let o = run(&["en2my", "HOTEL"], "");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "1\tဟိုတယ်\t0"), "{text}");
    assert!(text.ends_with('\n'));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn k_limits_output() {
    let o = run(&["en2my", "--k", "1", "SALAD"], "");
    assert_eq!(stdout(&o).lines().count(), 1);
    assert_eq!(run(&["--k", "0", "en2my", "SALAD"], "").status.code(), Some(1));
}

#[test]
fn missing_word_is_usage_error() {
    let o = run(&["en2my"], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(run(&[], "").status.code(), Some(1));
}

#[test]
fn pinyin_word() {
    let o = run(&["py2my", "kunming"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ကုမင်း"));
}

#[test]
fn stdin_batch_tsv() {
    let o = run(&["en2my", "--tsv", "-"], "WEB\n\nBUS\n");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.split('\t').count() == 4), "{text}");
    assert!(text.contains("WEB\t2\tဝက်ဘ်\t"));
    assert!(text.contains("BUS\t2\tဘတ်စ်\t"));
}

#[test]
fn missing_pack_is_data_error() {
    assert_eq!(run(&["--pack", "/nonexistent/pack", "en2my", "HOTEL"], "").status.code(), Some(2));
    assert_eq!(run(&["eval", "--corpus", "/nonexistent/corpus.tsv"], "").status.code(), Some(2));
}

#[test]
fn unmapped_word_exits_three() {
    let dir = std::env::temp_dir().join(format!("mytranslit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pack = dir.join("tiny.pack");
    std::fs::write(&pack, "default\tB@onset\t*\tဘ-\t0\n").unwrap();
    let o = run(&["--pack", pack.to_str().unwrap(), "--no-lexicon", "en2my", "BUS"], "");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("BUS\t"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn explain_shows_alignment_and_rules() {
    let o = run(&["explain", "--k", "1", "HORN"], "");
    let text = stdout(&o);
    assert!(text.starts_with("1\tဟွန်း\t0\n"), "{text}");
    assert!(text.contains("-- rules"));
}

#[test]
fn eval_tsv_is_stable() {
    let a = run(&["eval", "--tsv"], "");
    let b = run(&["eval", "--tsv"], "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("scope\tentries\ttop1\ttopk\tsyllable_accuracy\n"));
}
