//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! measured runtime and limit, and exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reroot::fixtures;
use reroot::metrics::{
    bleu, jaccard_diversity, parse_bracketed, score_pair, ted, ted3, tedf, tokenize,
};
use reroot::penman::{
    graph_equal, parse_penman, parse_tree, serialize, token_stream, write_tree, Style, Variable,
};
use reroot::pipeline::{filter_by_perplexity, run_with, Endpoints, MockAdapter, PipelineConfig, Profile};
use reroot::refocus::{build_spanning_tree, linearize, refocus};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_fixtures() -> Outcome {
    let g = parse_penman(fixtures::KNOW_ROOTED).map_err(|e| e.to_string())?;
    for (focus, listing) in [("z3", fixtures::NEED_FOCUS), ("z4", fixtures::THEY_FOCUS)] {
        let v = linearize(&g, &Variable::new(focus).unwrap(), Style::default()).map_err(|e| e.to_string())?;
        let got = token_stream(&v.linearized).map_err(|e| e.to_string())?;
        let want = token_stream(listing).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("focus {focus}: token streams differ\n{}", v.linearized))?;
        let parsed = parse_penman(listing).map_err(|e| e.to_string())?;
        ensure(graph_equal(&parsed, &g), || format!("listing for {focus} is not the same graph"))?;
    }
    Ok("z3 and z4 listings reproduced token for token".into())
}

fn round_trip_one(text: &str) -> Result<(), String> {
    let g = parse_penman(text).map_err(|e| format!("{e}\n{text}"))?;
    let tree = parse_tree(text).map_err(|e| e.to_string())?;
    let out = serialize(&g, &tree, Style::default()).map_err(|e| e.to_string())?;
    let again = parse_penman(&out).map_err(|e| format!("{e}\n{out}"))?;
    ensure(again.normalized_key() == g.normalized_key() && again.top() == g.top(), || {
        format!("round trip changed the graph:\n{text}\n{out}")
    })
}

fn penman_round_trip() -> Outcome {
    const GRAPHS: u64 = 1000;
    for text in [fixtures::KNOW_ROOTED, fixtures::NEED_FOCUS, fixtures::THEY_FOCUS] {
        round_trip_one(text)?;
    }
    let mut triples = 0;
    for seed in 0..GRAPHS {
        let g = common::random_graph(seed, 20);
        triples += g.triples().len();
        let text = write_tree(&build_spanning_tree(&g, g.top()).map_err(|e| e.to_string())?, Style::default());
        let parsed = parse_penman(&text).map_err(|e| e.to_string())?;
        ensure(graph_equal(&parsed, &g) && parsed.top() == g.top(), || format!("seed {seed}: parse changed the graph"))?;
        round_trip_one(&text).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!("{GRAPHS} random graphs ({triples} triples) + 3 fixtures, 0 failures"))
}

fn refocus_invariants() -> Outcome {
    const GRAPHS: u64 = 1000;
    let mut foci = 0;
    for seed in 0..GRAPHS {
        let g = common::random_graph(10_000 + seed, 20);
        for v in g.variables() {
            if v == g.top() {
                continue;
            }
            foci += 1;
            let r = refocus(&g, v).map_err(|e| format!("seed {seed}, focus {v}: {e}"))?;
            ensure(graph_equal(&g, &r), || format!("seed {seed}, focus {v}: graph changed"))?;
            ensure(r.top() == v, || format!("seed {seed}, focus {v}: wrong top {}", r.top()))?;
            let back = refocus(&r, g.top()).map_err(|e| e.to_string())?;
            ensure(graph_equal(&g, &back) && back.top() == g.top(), || {
                format!("seed {seed}, focus {v}: double refocus lost the original")
            })?;
        }
    }
    Ok(format!("{GRAPHS} random graphs, {foci} foci, 0 failures"))
}

fn ted_oracle() -> Outcome {
    const PAIRS: usize = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(2023);
    let mut total = 0;
    for i in 0..PAIRS {
        let a = common::random_tree(&mut rng, 8);
        let b = common::random_tree(&mut rng, 8);
        let fast = ted(&a, &b);
        let brute = common::brute_force_ted(&a, &b);
        let forest = common::ForestOracle::distance(&a, &b);
        ensure(fast == brute && fast == forest, || {
            format!("pair {i}: zhang-shasha {fast}, brute force {brute}, forest {forest}\n{a}\n{b}")
        })?;
        total += fast;
    }
    Ok(format!("{PAIRS} pairs of <= 8 nodes, 0 mismatches (mean distance {:.2})", total as f64 / PAIRS as f64))
}

fn metric_identities() -> Outcome {
    const TRIALS: usize = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let vocab = ["the", "cat", "sat", "on", "mat", ",", ".", "a", "dog", "They", "'ll"];
    let sentence = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(0..14);
        (0..n).map(|_| vocab[rng.gen_range(0..vocab.len())]).collect::<Vec<_>>().join(" ")
    };
    for i in 0..TRIALS {
        let s = sentence(&mut rng);
        let t = sentence(&mut rng);
        let ta = common::random_tree(&mut rng, 12);
        let tb = common::random_tree(&mut rng, 12);
        let same = score_pair(&s, &s, Some((&ta, &ta)), None).map_err(|e| e.to_string())?;
        let lex_zero = same.lex_jaccard == 0.0 && (tokenize(&s).is_empty() || same.lex_bleu == 0.0);
        ensure(lex_zero && same.ted3 == Some(0) && same.tedf == Some(0), || {
            format!("trial {i}: identical inputs scored {same:?}")
        })?;
        let (ts, tt) = (tokenize(&s), tokenize(&t));
        let d_bleu = 1.0 - bleu(&tt, &ts);
        let d_jac = jaccard_diversity(&ts, &tt);
        ensure((0.0..=1.0).contains(&d_bleu) && (0.0..=1.0).contains(&d_jac), || {
            format!("trial {i}: out of range 1-BLEU {d_bleu}, 1-J {d_jac}")
        })?;
        // TED values are unsigned; check they stay within the trivial bound.
        ensure(tedf(&ta, &tb) <= ta.size() + tb.size() && ted3(&ta, &tb) <= ta.size() + tb.size(), || {
            format!("trial {i}: TED above delete-all/insert-all cost")
        })?;
    }
    Ok(format!("{TRIALS} randomized pairs, identities exact, all values in range"))
}

fn pipeline_determinism() -> Outcome {
    let sources = common::mock_corpus();
    let config = PipelineConfig {
        seed: 42,
        ..Default::default()
    };
    let first = run_with(&config, &sources, &mut Endpoints::mock(MockAdapter::new()));
    let second = run_with(&config, &sources, &mut Endpoints::mock(MockAdapter::new()));
    ensure(first.dataset_jsonl() == second.dataset_jsonl(), || "datasets differ between runs".into())?;
    ensure(first.manifest_json() == second.manifest_json(), || "manifests differ between runs".into())?;

    // Hand count: n words give min(8, n - 1) variants at perplexity 10 (n + 1).
    let filter = first.manifest.stages.iter().find(|s| s.stage == "filter").ok_or("no filter stage")?;
    ensure((filter.input, filter.kept, filter.dropped) == (50, 26, 24), || format!("filter counts {filter:?}"))?;
    let per_source: Vec<usize> = sources
        .iter()
        .map(|(id, _)| first.records.iter().filter(|r| &r.source_id == id).count())
        .collect();
    ensure(per_source == [2, 8, 0, 4, 0, 1, 0, 8, 3, 0], || format!("kept per source {per_source:?}"))?;
    ensure(first.manifest.stages.iter().all(|s| s.balanced()), || "unbalanced stage counts".into())?;

    let expected = [(Profile::Dataset, 120.0), (Profile::Embeddings, 110.0), (Profile::Generation, 85.0), (Profile::Fewshot, 110.0)];
    for (profile, threshold) in expected {
        let mut c = PipelineConfig::default();
        c.apply_profile(profile);
        ensure(c.effective_threshold() == threshold, || format!("{profile} binds {}", c.effective_threshold()))?;
    }
    let all: Vec<_> = run_with(
        &PipelineConfig { threshold: Some(1e9), ..config.clone() },
        &sources,
        &mut Endpoints::mock(MockAdapter::new()),
    )
    .records;
    let kept = |t: f64| filter_by_perplexity(all.clone(), t).0.len();
    let (k120, k110, k85) = (kept(120.0), kept(110.0), kept(85.0));
    ensure(k85 <= k110 && k110 <= k120, || format!("presets not nested: {k120}/{k110}/{k85}"))?;
    Ok(format!(
        "2 runs byte-identical ({} records); filter 50 -> 26 kept / 24 dropped; presets 120/110/85 keep {k120}/{k110}/{k85}",
        first.records.len()
    ))
}

fn syntactic_contrast() -> Outcome {
    use common::contrast::*;
    let parse = |s: &str| parse_bracketed(s).map_err(|e| e.to_string());
    let (src, nmt, amr) = (parse(SOURCE_PARSE)?, parse(NMT_PARSE)?, parse(AMR_PARSE)?);
    ensure(src.terminals().len() == tokenize(SOURCE).len() - 1, || "source parse does not cover the sentence".into())?;
    let f_nmt = tedf(&src, &nmt);
    let f_amr = tedf(&src, &amr);
    let o_nmt = common::ForestOracle::distance(&src, &nmt);
    let o_amr = common::ForestOracle::distance(&src, &amr);
    ensure(f_nmt == o_nmt && f_amr == o_amr, || {
        format!("oracle disagrees: zhang-shasha {f_nmt}/{f_amr}, forest {o_nmt}/{o_amr}")
    })?;
    ensure((f_nmt, f_amr) == (5, 18), || format!("TED-F {f_nmt}/{f_amr}, expected 5/18"))?;
    let (t_nmt, t_amr) = (ted3(&src, &nmt), ted3(&src, &amr));
    ensure((t_nmt, t_amr) == (0, 2), || format!("TED-3 {t_nmt}/{t_amr}, expected 0/2"))?;
    ensure(f_amr > f_nmt, || "re-rooted paraphrase is not more diverse".into())?;
    Ok(format!("TED-F re-rooted {f_amr} > translation {f_nmt}; TED-3 {t_amr} vs {t_nmt}"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("golden fixtures", Duration::from_secs(1), golden_fixtures),
        ("penman round trip", Duration::from_secs(10), penman_round_trip),
        ("refocus invariants", Duration::from_secs(30), refocus_invariants),
        ("ted oracle", Duration::from_secs(60), ted_oracle),
        ("metric identities", Duration::from_secs(60), metric_identities),
        ("pipeline determinism and filtering", Duration::from_secs(60), pipeline_determinism),
        ("syntactic contrast", Duration::from_secs(5), syntactic_contrast),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let line = match result {
            Ok(detail) if took <= limit => format!("PASS  {name}: {detail}"),
            Ok(detail) => format!("FAIL  {name}: over time limit; {detail}"),
            Err(why) => format!("FAIL  {name}: {why}"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line} [{:.3} s, limit {} s]", took.as_secs_f64(), limit.as_secs());
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
