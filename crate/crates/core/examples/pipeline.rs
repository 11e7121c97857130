//! End to end through the command layer: write toy inputs, train two seeds
//! with sparse features, reload a checkpoint and score new pairs.

mod common;

use std::fmt::Write as _;
use std::fs;

use lexent::cli::{load_bundle, run_training, score_stream, ResourceOverrides, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("lexent-pipeline-{}", std::process::id()));
    fs::create_dir_all(&dir)?;

    let mut toy = common::Toy::new(40, 21);
    let mut emb = format!("{} {}\n", toy.table.len(), common::DIM);
    for (i, w) in toy.table.words().iter().enumerate() {
        let v: Vec<String> = toy
            .table
            .vector(i)
            .iter()
            .map(|x| format!("{x:.6}"))
            .collect();
        writeln!(emb, "{w} {}", v.join(" "))?;
    }
    fs::write(dir.join("emb.txt"), emb)?;
    fs::write(dir.join("corpus.txt"), toy.corpus(400).join("\n"))?;
    let mut conll = String::new();
    for line in toy.corpus(200) {
        // flat trees: every token hangs off the first one
        for (i, w) in line.split(' ').enumerate() {
            let (head, rel) = if i == 0 { (0, "root") } else { (1, "dep") };
            writeln!(conll, "{}\t{w}\t{w}\tX\tX\t_\t{head}\t{rel}\t_\t_", i + 1)?;
        }
        conll.push('\n');
    }
    fs::write(dir.join("corpus.conll"), conll)?;
    let mut data = String::from("word1\tword2\tscore\n");
    for p in toy.graded(300) {
        writeln!(data, "{}\t{}\t{}", p.word1, p.word2, p.gold.target(10.0))?;
    }
    fs::write(dir.join("pairs.tsv"), data)?;

    let config = "paths.embeddings = \"emb.txt\"\n\
         paths.window_corpus = \"corpus.txt\"\n\
         paths.dependency_corpus = \"corpus.conll\"\n\
         paths.data = \"pairs.tsv\"\n\
         paths.output_dir = \"run\"\n\
         features.sdf = true\n\
         model.mapped_dim = 8\n\
         model.hidden_dim = 6\n\
         train.max_epochs = 30\n\
         train.batch_size = 16\n\
         train.seeds = \"1..2\"\n";
    let config_path = dir.join("run.toml");
    fs::write(&config_path, config)?;

    let mut run = RunConfig::load(&config_path)?;
    run.apply_overrides(&["--patience".to_string(), "5".to_string()])?;
    let outcome = run_training(&run)?;
    println!(
        "rho over {} seeds: mean {:.3}, std {:.3}",
        outcome.report.n_runs,
        outcome.report.mean.unwrap_or(f64::NAN),
        outcome.report.std.unwrap_or(f64::NAN)
    );

    let (bundle, meta) = load_bundle(&outcome.checkpoints[0], &ResourceOverrides::default())?;
    println!("reloaded seed {} checkpoint", meta.seed);
    let queries = "w1\tw2\nw2\tw1\nw3\tnot-a-word\n";
    let mut out = Vec::new();
    score_stream(&bundle, queries.as_bytes(), &mut out)?;
    print!("{}", String::from_utf8(out)?);

    fs::remove_dir_all(&dir)?;
    Ok(())
}
