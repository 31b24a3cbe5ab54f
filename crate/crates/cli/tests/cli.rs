use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const TABLE: &str = "a\t30\nb\t50\nc\t40\nd\t30\ne\t10\nf\t10\ng\t20\n";
const TXS: &str = "a:1 c:1 d:1 f:3\na:2 b:2 c:6 f:5\nb:2 f:5 g:5\nb:4 c:3 e:2\na:2 c:2 d:6 e:1 f:1\n";
const SAMPLE_AT_500: &str = "a c #UTIL: 510\nb c #UTIL: 660\na c f #UTIL: 600\n";

fn mip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mip")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Dataset {
    _dir: TempDir,
    table: PathBuf,
    txs: PathBuf,
}

impl Dataset {
    fn new(table: &str, txs: &str) -> Self {
        let dir = TempDir::new().unwrap();
        let (t, x) = (dir.path().join("utility.txt"), dir.path().join("tx.txt"));
        std::fs::write(&t, table).unwrap();
        std::fs::write(&x, txs).unwrap();
        Dataset {
            _dir: dir,
            table: t,
            txs: x,
        }
    }

    fn sample() -> Self {
        Self::new(TABLE, TXS)
    }

    fn run(&self, sub: &str, extra: &[&str]) -> Output {
        let mut args = vec![
            sub,
            "--input",
            self.txs.to_str().unwrap(),
            "--utility-table",
            self.table.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        mip(&args)
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mine_sample_golden() {
    let out = Dataset::sample().run("mine", &["--min-util", "500"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), SAMPLE_AT_500);
}

#[test]
fn every_miner_and_option_agrees_byte_for_byte() {
    let d = Dataset::sample();
    for (sub, extra) in [
        ("mine", vec!["--order", "twu"]),
        ("mine", vec!["--prune-singletons"]),
        ("mine", vec!["--no-mark", "--order", "twu"]),
        ("oracle", vec![]),
        ("baseline", vec![]),
        ("baseline", vec!["--order", "twu"]),
    ] {
        let mut args = vec!["--min-util", "500"];
        args.extend(extra.iter().copied());
        let out = d.run(sub, &args);
        assert_eq!(out.status.code(), Some(0), "{sub} {extra:?}: {}", stderr(&out));
        assert_eq!(stdout(&out), SAMPLE_AT_500, "{sub} {extra:?}");
    }
}

#[test]
fn percentage_threshold_and_output_file() {
    let d = Dataset::sample();
    let out_path = d._dir.path().join("out.txt");
    // 33% of 1510 is 498.3
    let out = d.run("mine", &["--min-util-pct", "33", "--output", path(&out_path)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "");
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), SAMPLE_AT_500);
}

#[test]
fn explicit_precision_renders_fixed_digits() {
    let out = Dataset::sample().run("mine", &["--min-util", "600", "--precision", "2"]);
    assert_eq!(stdout(&out), "b c #UTIL: 660.00\na c f #UTIL: 600.00\n");
}

#[test]
fn threshold_above_total_gives_empty_output() {
    let d = Dataset::sample();
    let out_path = d._dir.path().join("out.txt");
    let out = d.run("mine", &["--min-util", "1511", "--output", path(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), "");
}

#[test]
fn parse_errors_exit_2_with_line_number() {
    let d = Dataset::new(TABLE, "a:1 c:1\nb:2 zz:1\n");
    let out = d.run("mine", &["--min-util", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("line 2") && err.contains("zz") && err.contains("tx.txt"),
        "{err}"
    );

    let d = Dataset::new("a\t1.5\n", "a:1\n");
    let out = d.run("mine", &["--min-util", "1", "--precision", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"));

    let out = Dataset::sample().run("mine", &["--min-util-pct", "101"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Dataset::sample().run("mine", &["--min-util", "-3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mip(&["mine", "--input", "nowhere.txt", "--format", "spmf", "--min-util", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn overflow_exits_3() {
    let d = Dataset::new("a\t9000000000\nb\t1\n", "a:4000000000 b:1\n");
    let out = d.run("mine", &["--min-util", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn conflicting_flags_exit_4() {
    let d = Dataset::sample();
    let out = d.run("mine", &["--min-util", "500", "--min-util-pct", "10"]);
    assert_eq!(out.status.code(), Some(4));
    let out = d.run("mine", &["--min-util", "500", "--format", "spmf"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn missing_threshold_exits_2() {
    let out = Dataset::sample().run("mine", &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_refuses_wide_datasets() {
    let names: Vec<String> = (1..=25).map(|k| format!("i{k}")).collect();
    let table: String = names.iter().map(|n| format!("{n}\t1\n")).collect();
    let txs: String = names.iter().map(|n| format!("{n}:1")).collect::<Vec<_>>().join(" ") + "\n";
    let d = Dataset::new(&table, &txs);
    let out = d.run("oracle", &["--min-util", "1"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("bound is 20"));
    // the other miners are not bounded
    assert_eq!(d.run("mine", &["--min-util", "25"]).status.code(), Some(0));
}

#[test]
fn spmf_matches_its_native_expansion() {
    let dir = TempDir::new().unwrap();
    let spmf = dir.path().join("d.spmf");
    std::fs::write(
        &spmf,
        "1 3 4:14:2 5 7\n2 3:9:4 5\n1 2 3 4:20:3 3 10 4\n4:6:6\n10 2:5:1 4\n",
    )
    .unwrap();
    // external utility 1 everywhere, count = the per-entry utility
    let native = Dataset::new(
        "1\t1\n2\t1\n3\t1\n4\t1\n10\t1\n",
        "1:2 3:5 4:7\n2:4 3:5\n1:3 2:3 3:10 4:4\n4:6\n10:1 2:4\n",
    );
    for threshold in ["1", "9", "15", "30"] {
        let from_spmf = mip(&[
            "mine",
            "--input",
            path(&spmf),
            "--format",
            "spmf",
            "--min-util",
            threshold,
        ]);
        let from_native = native.run("mine", &["--min-util", threshold]);
        assert!(from_spmf.status.success(), "{}", stderr(&from_spmf));
        assert_eq!(stdout(&from_spmf), stdout(&from_native), "at {threshold}");
    }
    let at_15 = stdout(&native.run("mine", &["--min-util", "15"]));
    assert!(at_15.starts_with("3 #UTIL: 20\n"), "{at_15}");
}

#[test]
fn spmf_total_mismatch_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let spmf = dir.path().join("d.spmf");
    std::fs::write(&spmf, "1 2:3:1 2\n1 2:4:1 2\n").unwrap();
    let out = mip(&[
        "baseline",
        "--input",
        path(&spmf),
        "--format",
        "spmf",
        "--min-util",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn stats_sample_row() {
    let out = Dataset::sample().run("stats", &["--min-util", "500", "--dataset", "sample"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "dataset,threshold,order,explored,emitted,avg_punlist,avg_utillist,reduction_ratio,t2_ms,total_ms,peak_rss_kb"
    );
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cols.len(), 11);
    assert_eq!(&cols[..3], ["sample", "500", "support"]);
    assert_eq!(cols[4], "3");
    // (1+2+1)/3 and (3+2+3)/3
    assert_eq!(&cols[5..8], ["1.3333", "2.6667", "2.0000"]);
}

#[test]
fn stats_on_disjoint_transactions_has_ratio_one() {
    let d = Dataset::new("a\t1\nb\t2\nc\t3\nd\t4\n", "a:1 b:1\nc:1 d:1\n");
    let out = d.run(
        "stats",
        &[
            "--min-util",
            "1",
            "--no-header",
            "--population",
            "explored",
            "--order",
            "twu",
        ],
    );
    let row = stdout(&out);
    let cols: Vec<&str> = row.trim_end().split(',').collect();
    assert_eq!(&cols[2..8], ["twu", "6", "6", "1.0000", "1.0000", "1.0000"]);
}

#[test]
fn gen_is_deterministic_and_parses_back() {
    let dir = TempDir::new().unwrap();
    let run = |prefix: &str| {
        let p = dir.path().join(prefix);
        let out = mip(&[
            "gen",
            "--seed",
            "42",
            "--items",
            "60",
            "--transactions",
            "1000",
            "--avg-len",
            "6",
            "--out-prefix",
            path(&p),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let read = |s: &str| std::fs::read_to_string(dir.path().join(format!("{prefix}{s}"))).unwrap();
        (read("-utility.txt"), read("-transactions.txt"))
    };
    let (a, b) = (run("one"), run("two"));
    assert_eq!(a, b);
    assert_eq!(a.1.lines().count(), 1000);
    assert_eq!(a.0.lines().count(), 60);

    let p = dir.path().join("one");
    let out = mip(&[
        "mine",
        "--input",
        &format!("{}-transactions.txt", path(&p)),
        "--utility-table",
        &format!("{}-utility.txt", path(&p)),
        "--min-util-pct",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out)
        .lines()
        .all(|l| l.contains(" #UTIL: ") && l.split(" #UTIL: ").nth(1).unwrap().contains('.')));
}

#[test]
fn gen_rejects_invalid_specs() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("x");
    let out = mip(&[
        "gen",
        "--seed",
        "1",
        "--items",
        "0",
        "--transactions",
        "5",
        "--avg-len",
        "2",
        "--out-prefix",
        path(&p),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
