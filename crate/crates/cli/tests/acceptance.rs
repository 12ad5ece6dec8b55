//! Acceptance suite: one check per criterion, one PASS/FAIL line each.
//!
//! Lines are written straight to stderr so they show up even when the test
//! harness captures output.

use std::collections::BTreeMap;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use artex::synthetic::{generate, SyntheticConfig};
use artex::{
    benchmark, divergence, fresa_report, pseudo_vectors, run_corpus, score, score_normalized,
    scorer::{normalized_scale, score_with},
    select, BenchConfig, CompressionSpec, CorpusLayout, CorpusSpec, EvalPreprocessor, Language,
    NgramOrder, NgramProfile, NormalizationMode, Pipeline, RunConfig, ScoreVector, Sentence,
    SentenceTermMatrix, StopList, System, TopicVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn report(id: u8, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let mut result = f();
    let elapsed = start.elapsed();
    if let (Ok(_), Some(limit)) = (&result, limit) {
        if elapsed > limit {
            result = Err(format!("took {elapsed:.1?}, limit {limit:?}"));
        }
    }
    let (tag, detail) = match &result {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let _ = writeln!(
        std::io::stderr(),
        "[{tag}] criterion {id}: {title} ({detail}; {:.2}s)",
        elapsed.as_secs_f64()
    );
    result.is_ok()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    x == y || (x - y).abs() <= rel * x.abs().max(y.abs())
}

fn random_matrices(count: usize, seed: u64) -> Vec<Vec<Vec<u32>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = rng.gen_range(1..=50);
            let n = rng.gen_range(1..=200);
            let density: f64 = rng.gen_range(0.05..=1.0);
            (0..p)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if rng.gen_bool(density) {
                                rng.gen_range(0..=5)
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn rank_consistency(matrices: &[Vec<Vec<u32>>]) -> Check {
    for (k, dense) in matrices.iter().enumerate() {
        let (p, n) = (dense.len(), dense[0].len());
        let m = SentenceTermMatrix::from_dense(n, dense);
        let pv = pseudo_vectors(&m);
        let s = score(&m, &pv);
        let s2 = score_normalized(&m, &pv);
        let by_value = |v: &[f64]| {
            let mut idx: Vec<usize> = (0..v.len()).collect();
            idx.sort_by(|&x, &y| v[y].partial_cmp(&v[x]).unwrap());
            idx
        };
        ensure(by_value(&s.raw) == by_value(&s2.raw), || {
            format!("matrix {k}: argsort differs")
        })?;
        ensure(s.ranking() == s2.ranking(), || {
            format!("matrix {k}: rankings differ")
        })?;
        ensure(
            s.ranking() == score_with(&m, &pv, TopicVector::Mean).ranking(),
            || format!("matrix {k}: topic routes rank differently"),
        )?;
        let factor = normalized_scale(n, p) / (n * p) as f64;
        for i in 0..p {
            ensure(close(s.raw[i], s2.raw[i] * factor, 1e-10), || {
                format!("matrix {k} row {i}: {} vs {}", s.raw[i], s2.raw[i] * factor)
            })?;
        }
    }
    Ok(format!("{} matrices", matrices.len()))
}

// Direct evaluation of the definitions on dense storage.
fn naive_scores(dense: &[Vec<u32>]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let p = dense.len();
    let n = dense[0].len();
    let mut a = vec![0.0; p];
    let mut b = vec![0.0; n];
    for i in 0..p {
        for j in 0..n {
            a[i] += f64::from(dense[i][j]);
            b[j] += f64::from(dense[i][j]);
        }
    }
    a.iter_mut().for_each(|x| *x /= n as f64);
    b.iter_mut().for_each(|x| *x /= p as f64);
    let mut raw = vec![0.0; p];
    for i in 0..p {
        let mut dot = 0.0;
        for j in 0..n {
            dot += f64::from(dense[i][j]) * b[j];
        }
        raw[i] = dot * a[i] / (n as f64 * p as f64);
    }
    (a, b, raw)
}

fn oracle_agreement(matrices: &[Vec<Vec<u32>>]) -> Check {
    for (k, dense) in matrices.iter().enumerate() {
        let m = SentenceTermMatrix::from_dense(dense[0].len(), dense);
        let pv = pseudo_vectors(&m);
        let (a, b, raw) = naive_scores(dense);
        let pairs = a.iter().zip(&pv.a).chain(b.iter().zip(&pv.b));
        for (x, y) in pairs {
            ensure(close(*x, *y, 1e-12), || {
                format!("matrix {k}: pseudo-vector {x} vs {y}")
            })?;
        }
        for topic in [TopicVector::Mean, TopicVector::ColumnSum] {
            let s = score_with(&m, &pv, topic);
            for (i, (x, y)) in raw.iter().zip(&s.raw).enumerate() {
                ensure(close(*x, *y, 1e-12), || {
                    format!("matrix {k} row {i} ({topic:?}): {x} vs {y}")
                })?;
            }
        }
    }
    Ok(format!("{} matrices, both topic routes", matrices.len()))
}

fn hand_check() -> Check {
    let m = SentenceTermMatrix::from_dense(2, &[vec![1, 0], vec![0, 1]]);
    let pv = pseudo_vectors(&m);
    let raw = score(&m, &pv).raw;
    let norm = score_normalized(&m, &pv).raw;
    ensure(raw == [0.0625, 0.0625], || format!("raw {raw:?}"))?;
    ensure(norm == [0.015625, 0.015625], || {
        format!("normalized {norm:?}")
    })?;
    Ok(format!("raw {raw:?}, normalized {norm:?}"))
}

const SOURCE_EN: &str = "The river carried timber from the northern forests to the mill. \
    Workers at the mill sorted the timber by length before cutting. \
    In spring the river rose and the mill slowed its saws. \
    Timber that reached the mill late was stacked along the river bank. \
    The village grew around the mill and the river crossing. \
    Merchants bought cut timber at the river crossing every market day.";

fn divergence_identities() -> Check {
    let eval = EvalPreprocessor::builtin(Language::En);
    let src = eval.segments(SOURCE_EN);
    let own = fresa_report(&src, &src).map_err(|e| e.to_string())?;
    ensure((own.f_avg - 1.0).abs() <= 1e-12, || {
        format!("self f_avg {}", own.f_avg)
    })?;

    let empty: Vec<Vec<String>> = Vec::new();
    let none = fresa_report(&src, &empty).map_err(|e| e.to_string())?;
    ensure(
        none.f1 == 0.0 && none.f2 == 0.0 && none.f_su4 == 0.0,
        || format!("empty summary {none:?}"),
    )?;

    let x = NgramProfile::from_segments(&[vec!["x".to_string()]], NgramOrder::Unigram);
    let y = NgramProfile::from_segments(&[vec!["y".to_string()]], NgramOrder::Unigram);
    let d = divergence(&x, &y).map_err(|e| e.to_string())?;
    ensure((d - std::f64::consts::LN_2).abs() <= 1e-12, || {
        format!("d = {d}")
    })?;
    Ok(format!(
        "self f_avg {:.15}, single-term d {d:.15}",
        own.f_avg
    ))
}

fn corpus_spec(root: &Path) -> CorpusSpec {
    CorpusSpec {
        root: root.join("docs"),
        layout: CorpusLayout::Flat,
        language: Language::En,
    }
}

fn timing_trend() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = generate(&SyntheticConfig::default());
    corpus.write_to(dir.path()).map_err(|e| e.to_string())?;

    let fix1 = NormalizationMode::UltraStem(NonZeroUsize::MIN);
    let modes = vec![NormalizationMode::Lemmatize, NormalizationMode::Stem, fix1];
    let mut cfg = BenchConfig::new(modes, 5);
    cfg.lemma_dict = Some(dir.path().join("lemmas.tsv"));
    let bench = benchmark(&corpus_spec(dir.path()), &cfg).map_err(|e| e.to_string())?;
    let median = |m| bench.mode(m).map(|s| s.median_secs).unwrap_or(f64::NAN);
    let (f, s, l) = (
        median(fix1),
        median(NormalizationMode::Stem),
        median(NormalizationMode::Lemmatize),
    );
    let detail = format!("median fix1 {f:.4}s, stem {s:.4}s, lemma {l:.4}s");
    ensure(f < s && s < l, || detail.clone())?;
    Ok(detail)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

fn beats_random() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = generate(&SyntheticConfig {
        documents: 40,
        ..SyntheticConfig::default()
    });
    corpus.write_to(dir.path()).map_err(|e| e.to_string())?;
    let spec = corpus_spec(dir.path());

    let mut cfg = RunConfig::new(dir.path().join("out"));
    cfg.budget = CompressionSpec::WordRatio(0.2);
    let artex = run_corpus(&spec, &cfg).map_err(|e| e.to_string())?;
    let artex = mean(artex.iter().map(|o| o.report.f_avg));

    cfg.systems = vec![System::Random];
    let mut per_seed = Vec::new();
    for seed in 0..20 {
        cfg.seed = seed;
        let out = run_corpus(&spec, &cfg).map_err(|e| e.to_string())?;
        per_seed.push(mean(out.iter().map(|o| o.report.f_avg)));
    }
    let random = mean(per_seed.iter().copied());
    let detail =
        format!("40 documents, mean f_avg artex {artex:.4}, random {random:.4} over 20 seeds");
    ensure(artex > random, || detail.clone())?;
    Ok(detail)
}

const SOURCE_FR: &str = "Le port de la ville reçoit des navires chaque matin. \
    Les navires apportent du sel et du vin au port. \
    Le sel est vendu au marché de la ville. \
    Les marchands du port achètent le vin des navires.";

const SOURCE_ES: &str = "El tren sale de la estación antes del amanecer. \
    Los viajeros esperan el tren en la estación fría. \
    El tren cruza el valle y llega a la ciudad. \
    En la ciudad los viajeros dejan la estación con prisa.";

fn preprocessing_invariants() -> Check {
    let corpus = generate(&SyntheticConfig {
        documents: 40,
        ..SyntheticConfig::default()
    });
    let dict = Arc::new(corpus.dictionary());
    let mut docs: Vec<_> = corpus
        .documents
        .iter()
        .map(|d| (d.clone(), Language::En))
        .collect();
    for (id, text, lang) in [
        ("river", SOURCE_EN, Language::En),
        ("port", SOURCE_FR, Language::Fr),
        ("tren", SOURCE_ES, Language::Es),
    ] {
        docs.push((artex::RawDocument::new(id, text, lang), lang));
    }

    let pipeline = |lang, mode| {
        Pipeline::new(lang, mode, StopList::builtin(lang), Some(dict.clone()))
            .map_err(|e| e.to_string())
    };
    let fix = |n| NormalizationMode::ultra_stem(n).unwrap();
    let mut checked = 0usize;
    for (doc, lang) in &docs {
        let stop = StopList::builtin(*lang);
        let raw = pipeline(*lang, NormalizationMode::Raw)?
            .analyze(std::slice::from_ref(doc))
            .map_err(|e| e.to_string())?;
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in raw.sentences.iter().flat_map(|s| &s.tokens) {
            ensure(!stop.contains(t), || {
                format!("{}: stop word {t:?} kept", doc.id)
            })?;
            *counts.entry(t).or_default() += 1;
        }
        if let Some((t, _)) = counts.iter().find(|(_, &c)| c < 2) {
            return Err(format!("{}: hapax {t:?} kept", doc.id));
        }
        checked += counts.values().sum::<usize>();

        let mut sizes = BTreeMap::new();
        for n in 1..=4 {
            let a = pipeline(*lang, fix(n))?
                .analyze(std::slice::from_ref(doc))
                .map_err(|e| e.to_string())?;
            for t in a.sentences.iter().flat_map(|s| &s.tokens) {
                ensure(t.chars().count() <= n, || {
                    format!("{}: fix{n} token {t:?}", doc.id)
                })?;
            }
            sizes.insert(n, a.vocabulary.len());
        }
        let stem = pipeline(*lang, NormalizationMode::Stem)?
            .analyze(std::slice::from_ref(doc))
            .map_err(|e| e.to_string())?
            .vocabulary
            .len();
        let raw_n = raw.vocabulary.len();
        ensure(
            sizes[&1] <= sizes[&2] && sizes[&2] <= stem && sizes[&2] <= raw_n && stem <= raw_n,
            || {
                format!(
                    "{}: N fix1 {} fix2 {} stem {stem} raw {raw_n}",
                    doc.id, sizes[&1], sizes[&2]
                )
            },
        )?;
    }
    Ok(format!(
        "{} documents, {checked} filtered tokens",
        docs.len()
    ))
}

fn run_batch(bin: &str, corpus: &Path, out: &Path) -> Result<(), String> {
    let status = Command::new(bin)
        .arg("batch")
        .arg(corpus)
        .args([
            "--layout",
            "flat",
            "--systems",
            "artex,lead,random",
            "--norm",
            "stem",
        ])
        .args(["--seed", "17", "--timing", "--out"])
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("batch exited with {status}"))
}

fn tree(root: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n != "timings.csv") {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                files.insert(rel, std::fs::read(&path).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(files)
}

fn batch_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = generate(&SyntheticConfig {
        documents: 12,
        words_per_doc: 600,
        ..SyntheticConfig::default()
    });
    corpus.write_to(dir.path()).map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_artex");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_batch(bin, &dir.path().join("docs"), &a)?;
    run_batch(bin, &dir.path().join("docs"), &b)?;
    let (ta, tb) = (tree(&a)?, tree(&b)?);
    ensure(ta.len() == 12 * 3 + 1, || {
        format!("{} output files", ta.len())
    })?;
    ensure(ta.keys().eq(tb.keys()), || "file sets differ".into())?;
    if let Some(name) = ta.keys().find(|k| ta[*k] != tb[*k]) {
        return Err(format!("{name} differs"));
    }
    Ok(format!("{} files identical", ta.len()))
}

fn summary_contract() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let p = rng.gen_range(1..=40);
        // few distinct values so ties are common
        let levels = rng.gen_range(1..=4);
        let raw: Vec<f64> = (0..p)
            .map(|_| f64::from(rng.gen_range(0..levels)))
            .collect();
        let sentences: Vec<Sentence> = (0..p)
            .map(|i| {
                let words = rng.gen_range(1..=15);
                let mut s = Sentence::new(i, vec!["w"; words].join(" "));
                if rng.gen_bool(0.1) {
                    s.tokens.clear();
                }
                s
            })
            .collect();
        let budget = if rng.gen_bool(0.5) {
            CompressionSpec::Sentences(rng.gen_range(1..=p + 3))
        } else {
            CompressionSpec::WordRatio(rng.gen_range(0.01..=1.0))
        };
        let summary = select(&ScoreVector::from_raw(raw.clone()), &sentences, budget);
        let sel = &summary.selected;
        let fail = |what: &str| Err(format!("case {case} ({budget}): {what}, selected {sel:?}"));

        if !sel.windows(2).all(|w| w[0] < w[1]) {
            return fail("indices not strictly increasing");
        }
        let mut eligible: Vec<usize> = (0..p)
            .filter(|&i| !sentences[i].tokens.is_empty())
            .collect();
        if eligible.is_empty() {
            eligible = (0..p).collect();
        }
        if sel.iter().any(|i| !eligible.contains(i)) {
            return fail("selected a sentence without tokens");
        }
        for &i in sel {
            for &j in &eligible {
                if !sel.contains(&j) && (raw[j] > raw[i] || (raw[j] == raw[i] && j < i)) {
                    return fail(&format!("{j} outranks selected {i}"));
                }
            }
        }
        let words = |ids: &[usize]| {
            ids.iter()
                .map(|&i| sentences[i].word_count())
                .sum::<usize>()
        };
        match budget {
            CompressionSpec::Sentences(k) => {
                if sel.len() != k.min(eligible.len()) {
                    return fail("wrong sentence count");
                }
            }
            CompressionSpec::WordRatio(r) => {
                let want = r * words(&(0..p).collect::<Vec<_>>()) as f64;
                let got = words(sel) as f64;
                if got + 1e-9 < want && sel.len() < eligible.len() {
                    return fail("ratio budget not reached");
                }
                // dropping the lowest-ranked pick must fall short
                let last = *sel
                    .iter()
                    .min_by(|&&x, &&y| raw[x].total_cmp(&raw[y]).then(y.cmp(&x)))
                    .unwrap();
                let rest = got - sentences[last].word_count() as f64;
                if sel.len() > 1 && rest + 1e-9 >= want {
                    return fail("more than one sentence over the budget");
                }
            }
        }
    }
    Ok("200 cases".into())
}

#[test]
fn acceptance() {
    let matrices = random_matrices(500, 20120);
    let results = [
        report(
            1,
            "rank equivalence of score and score'",
            Some(Duration::from_secs(10)),
            || rank_consistency(&matrices),
        ),
        report(
            2,
            "sparse scoring matches dense oracle",
            Some(Duration::from_secs(10)),
            || oracle_agreement(&matrices),
        ),
        report(3, "identity-matrix hand values", None, hand_check),
        report(4, "divergence identities", None, divergence_identities),
        report(
            5,
            "median time fix1 < stem < lemma",
            Some(Duration::from_secs(300)),
            timing_trend,
        ),
        report(
            6,
            "artex beats random baseline",
            Some(Duration::from_secs(120)),
            beats_random,
        ),
        report(
            7,
            "preprocessing invariants",
            Some(Duration::from_secs(30)),
            preprocessing_invariants,
        ),
        report(8, "batch determinism", None, batch_determinism),
        report(9, "summary contract", None, summary_contract),
    ];
    let failed: Vec<usize> = (1..=9).filter(|&i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
