//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use forestcount::enumerate::{
    enumerate_ppr_forests, enumerate_rooted_forests, enumerate_unrooted_forests,
};
use forestcount::exactmath::{
    cayley_rooted_forest_count, matching_selection_count, rooted_forest_count_specified_roots,
    takacs_count, takacs_count_eq1,
};
use forestcount::{
    apply, classify, count_stream, Enumerator, InvolutionAction, MergeSite, Natural, PprForest,
    SplitSite,
};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(started: Instant, budget: Duration) -> Check {
    let elapsed = started.elapsed();
    ensure(elapsed <= budget, || {
        format!("took {elapsed:?}, budget {budget:?}")
    })
}

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

/// Formula vs brute force for unrooted forests, n = 0..=7.
fn criterion_1() -> Check {
    let started = Instant::now();
    let expected = [1u64, 1, 2, 7, 38, 291, 2932, 36961];
    for (n, &value) in expected.iter().enumerate() {
        let oracle = count_stream(enumerate_unrooted_forests(n).map_err(|e| e.to_string())?);
        let formula = takacs_count(n as u32).map_err(|e| e.to_string())?;
        ensure(oracle == nat(value), || {
            format!("n={n}: oracle {oracle}, expected {value}")
        })?;
        ensure(formula == oracle, || {
            format!("n={n}: formula {formula}, oracle {oracle}")
        })?;
    }
    within(started, Duration::from_secs(120))
}

/// Rational form equals the integer sum for n = 1..=200.
fn criterion_2() -> Check {
    let started = Instant::now();
    for n in 1..=200u32 {
        let rational = takacs_count_eq1(n).map_err(|e| format!("n={n}: {e}"))?;
        let integer = takacs_count(n).map_err(|e| e.to_string())?;
        ensure(rational == integer, || {
            format!("n={n}: {rational} != {integer}")
        })?;
    }
    within(started, Duration::from_secs(5))
}

/// Fixed-root rooted forest counts, every m <= 6 and every root set.
fn criterion_3() -> Check {
    let started = Instant::now();
    for m in 1..=6usize {
        let mut by_size: Vec<Option<Natural>> = vec![None; m + 1];
        for mask in 1u32..1 << m {
            let roots: Vec<usize> = (1..=m).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            let k = roots.len();
            let counted =
                count_stream(enumerate_rooted_forests(m, &roots).map_err(|e| e.to_string())?);
            let formula = rooted_forest_count_specified_roots(m as u32, k as u32)
                .map_err(|e| e.to_string())?;
            ensure(counted == formula, || {
                format!("m={m} roots={roots:?}: {counted} != {formula}")
            })?;
            match &by_size[k] {
                Some(seen) => ensure(*seen == counted, || {
                    format!("m={m} k={k}: count depends on the root set")
                })?,
                None => by_size[k] = Some(counted),
            }
        }
    }
    within(started, Duration::from_secs(30))
}

/// Rooted forests on [n] with any roots number (n+1)^(n-1), n = 1..=5.
fn criterion_4() -> Check {
    let started = Instant::now();
    let e = Enumerator::default();
    for n in 1..=5usize {
        let counted = count_stream(e.all_rooted_forests(n).map_err(|e| e.to_string())?);
        let formula = cayley_rooted_forest_count(n as u32).map_err(|e| e.to_string())?;
        ensure(counted == formula, || {
            format!("n={n}: {counted} != {formula}")
        })?;
    }
    within(started, Duration::from_secs(30))
}

/// PPR forests of each pair-count match the corresponding term, n <= 6.
fn criterion_5() -> Check {
    let started = Instant::now();
    for n in 0..=6usize {
        for j in 0..=n / 2 {
            let counted =
                count_stream(enumerate_ppr_forests(n, Some(j)).map_err(|e| e.to_string())?);
            let a = matching_selection_count(n as u32, j as u32).map_err(|e| e.to_string())?;
            let b = rooted_forest_count_specified_roots(n as u32 + 1, 2 * j as u32 + 1)
                .map_err(|e| e.to_string())?;
            let product = a * b;
            ensure(counted == product, || {
                format!("n={n} j={j}: {counted} != {product}")
            })?;
        }
    }
    within(started, Duration::from_secs(120))
}

/// Involution properties on every PPR forest with n <= 6.
fn criterion_6() -> Check {
    let started = Instant::now();
    let mut at_six = 0usize;
    for n in 0..=6usize {
        for f in enumerate_ppr_forests(n, None).map_err(|e| e.to_string())? {
            if n == 6 {
                at_six += 1;
            }
            let key = f.canonical_hex();
            let g = apply(&f).map_err(|e| e.to_string())?;
            let back = apply(&g).map_err(|e| e.to_string())?;
            ensure(back.canonical_encode() == f.canonical_encode(), || {
                format!("not an involution at {key}")
            })?;
            ensure((g == f) == f.is_special(), || {
                format!("fixed point mismatch at {key}")
            })?;
            if f.is_special() {
                continue;
            }
            ensure(g.pair_count().abs_diff(f.pair_count()) == 1, || {
                format!("pair-count step at {key}")
            })?;
            ensure(g.weight() == -f.weight(), || {
                format!("weight not reversed at {key}")
            })?;
            let here = classify(&f).map_err(|e| e.to_string())?;
            let there = classify(&g).map_err(|e| e.to_string())?;
            let dual = match here {
                InvolutionAction::Merge(MergeSite { a, u, v }) => {
                    InvolutionAction::Split(SplitSite {
                        a_prime: a,
                        v_prime: v,
                        u_prime: u,
                    })
                }
                InvolutionAction::Split(SplitSite {
                    a_prime,
                    v_prime,
                    u_prime,
                }) => InvolutionAction::Merge(MergeSite {
                    a: a_prime,
                    u: u_prime,
                    v: v_prime,
                }),
                InvolutionAction::Special => {
                    return Err(format!("non-special classified special at {key}"))
                }
            };
            ensure(there == dual, || {
                format!("merge/split duality fails at {key}")
            })?;
        }
    }
    ensure(at_six == 33_832, || {
        format!("{at_six} PPR forests at n=6, expected 33832")
    })?;
    within(started, Duration::from_secs(180))
}

/// Special forests biject with unrooted forests, n <= 6.
fn criterion_7() -> Check {
    for n in 0..=6usize {
        let specials: Vec<PprForest> = enumerate_ppr_forests(n, None)
            .map_err(|e| e.to_string())?
            .filter(PprForest::is_special)
            .collect();
        let expected = takacs_count(n as u32).map_err(|e| e.to_string())?;
        ensure(nat(specials.len() as u64) == expected, || {
            format!(
                "n={n}: {} special forests, expected {expected}",
                specials.len()
            )
        })?;
        let mut images = HashSet::new();
        for f in &specials {
            let g = f.to_unrooted().map_err(|e| e.to_string())?;
            ensure(&PprForest::from_unrooted(&g) == f, || {
                format!("n={n}: from(to(f)) != f")
            })?;
            images.insert(g);
        }
        for g in enumerate_unrooted_forests(n).map_err(|e| e.to_string())? {
            let back = PprForest::from_unrooted(&g)
                .to_unrooted()
                .map_err(|e| e.to_string())?;
            ensure(back == g, || format!("n={n}: to(from(g)) != g"))?;
            ensure(images.contains(&g), || {
                format!("n={n}: unrooted forest missed")
            })?;
        }
    }
    Ok(())
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_forestcount"))
}

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(binary())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let input = stdin.unwrap_or_default().to_vec();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(&input).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

/// takacs_count(100) is fast, deterministic, and survives the CLI's plain output.
fn criterion_8() -> Check {
    let started = Instant::now();
    let value = takacs_count(100).map_err(|e| e.to_string())?;
    within(started, Duration::from_secs(1))?;
    ensure(
        takacs_count(100).map_err(|e| e.to_string())? == value,
        || "not deterministic".into(),
    )?;
    ensure(
        takacs_count_eq1(100).map_err(|e| e.to_string())? == value,
        || "eq1 disagrees".into(),
    )?;
    for method in ["eq2", "eq1"] {
        let out = run(&["count", "--n", "100", "--method", method], None);
        ensure(out.status.code() == Some(0), || {
            format!("{method}: exit {:?}", out.status)
        })?;
        let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
        let parsed: Natural = text
            .trim_end()
            .parse()
            .map_err(|e| format!("{method}: {e}"))?;
        ensure(parsed == value, || {
            format!("{method}: printed {parsed}, expected {value}")
        })?;
    }
    Ok(())
}

fn golden(name: &str) -> Vec<u8> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read(path).expect("golden file present")
}

/// Golden outputs and the exit-code matrix.
fn criterion_9() -> Check {
    let cases: [(&[&str], &str); 3] = [
        (&["terms", "--n", "3", "--format", "csv"], "terms_n3.csv"),
        (&["sequence", "--max-n", "7"], "sequence_max7.txt"),
        (
            &["enumerate", "--n", "2", "--kind", "ppr", "--format", "json"],
            "enumerate_ppr_n2.jsonl",
        ),
    ];
    for (args, file) in cases {
        let first = run(args, None);
        let second = run(args, None);
        ensure(first.status.success(), || format!("{args:?} failed"))?;
        ensure(first.stdout == golden(file), || {
            format!("{args:?} differs from {file}")
        })?;
        ensure(first.stdout == second.stdout, || {
            format!("{args:?} not stable")
        })?;
    }
    let ok = run(&["count", "--n", "3"], None);
    ensure(ok.status.code() == Some(0), || "count exit code".into())?;
    let invalid = run(
        &["apply"],
        Some(br#"{"n":2,"parent":[null,null,0],"pairs":[]}"#),
    );
    ensure(invalid.status.code() == Some(1), || {
        format!("validation exit {:?}", invalid.status)
    })?;
    ensure(
        String::from_utf8_lossy(&invalid.stderr).contains("unpaired non-zero root"),
        || "validation message".into(),
    )?;
    let capacity = run(&["enumerate", "--n", "9", "--kind", "unrooted"], None);
    ensure(capacity.status.code() == Some(2), || {
        format!("capacity exit {:?}", capacity.status)
    })?;
    let usage = run(&["count", "--n", "3", "--method", "nope"], None);
    ensure(usage.status.code() == Some(2), || {
        format!("usage exit {:?}", usage.status)
    })?;
    let malformed = run(&["apply"], Some(b"{"));
    ensure(malformed.status.code() == Some(2), || {
        format!("parse exit {:?}", malformed.status)
    })?;
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 formula vs brute force, n = 0..7", criterion_1),
        (
            "2 rational form equals integer sum, n = 1..200",
            criterion_2,
        ),
        ("3 fixed-root forest counts, m <= 6", criterion_3),
        (
            "4 rooted forests on [n] = (n+1)^(n-1), n = 1..5",
            criterion_4,
        ),
        (
            "5 PPR forests per pair-count match the terms, n <= 6",
            criterion_5,
        ),
        ("6 involution properties, n <= 6", criterion_6),
        (
            "7 special forests biject with unrooted forests, n <= 6",
            criterion_7,
        ),
        ("8 n = 100 scale smoke test", criterion_8),
        ("9 CLI goldens and exit codes", criterion_9),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS criterion {name}"),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
