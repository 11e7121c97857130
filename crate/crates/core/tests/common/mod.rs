//! Shared fixtures and independent oracles for the integration suites.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use lexent::model::{Dims, ModelParams};
use lexent::EmbeddingTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(n: usize, scale: f64, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Parameters with every entry (biases and slope included) drawn from
/// `[-scale, scale)`.
pub fn random_params(dims: Dims, max_score: f64, scale: f64, rng: &mut impl Rng) -> ModelParams {
    let mut p = ModelParams::zeros(dims, max_score);
    for (_, t) in p.tensors_mut() {
        for v in t.iter_mut() {
            *v = rng.gen_range(-scale..scale);
        }
    }
    p
}

fn sig(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Straight-line recomputation of the network output from raw parameter
/// entries, written without the library's matrix helpers.
pub fn oracle_output(p: &ModelParams, w1: &[f64], w2: &[f64], x: Option<&[f64]>) -> f64 {
    let d = p.dims.input;
    let m = p.dims.mapped;
    let h = p.dims.hidden;

    let mut g1 = vec![0.0; d];
    let mut g2 = vec![0.0; d];
    for i in 0..d {
        let mut a = p.gate1.bias[i];
        let mut b = p.gate2.bias[i];
        for j in 0..d {
            a += p.gate1.weight.as_slice()[i * d + j] * w1[j];
            b += p.gate2.weight.as_slice()[i * d + j] * w2[j];
        }
        g1[i] = sig(a);
        g2[i] = sig(b);
    }
    let t1: Vec<f64> = (0..d).map(|i| w1[i] * g2[i]).collect();
    let t2: Vec<f64> = (0..d).map(|i| w2[i] * g1[i]).collect();

    let mut prod = vec![0.0; m];
    for i in 0..m {
        let mut a = p.map1.bias[i];
        let mut b = p.map2.bias[i];
        for j in 0..d {
            a += p.map1.weight.as_slice()[i * d + j] * t1[j];
            b += p.map2.weight.as_slice()[i * d + j] * t2[j];
        }
        prod[i] = a.tanh() * b.tanh();
    }

    let mut hidden = vec![0.0; h];
    for i in 0..h {
        let mut a = p.compose.bias[i];
        for j in 0..m {
            a += p.compose.weight.as_slice()[i * m + j] * prod[j];
        }
        if let (Some(wx), Some(x)) = (&p.feature_weight, x) {
            for j in 0..x.len() {
                a += wx.as_slice()[i * x.len() + j] * x[j];
            }
        }
        hidden[i] = a.tanh();
    }

    let mut logit = p.output_bias;
    for i in 0..h {
        logit += p.output_weight[i] * hidden[i];
    }
    p.max_score * sig(p.slope * logit)
}

/// An embedding table of `n` random words `w0..w{n-1}`.
pub fn random_table(n: usize, dim: usize, rng: &mut impl Rng) -> EmbeddingTable {
    EmbeddingTable::from_rows(
        dim,
        (0..n).map(|i| (format!("w{i}"), uniform_vec(dim, 1.0, rng))),
    )
    .unwrap()
}

/// Average-of-ties ranks by counting, independent of any sort.
pub fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let less = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Textbook Pearson correlation (`cov / (sd * sd)`).
pub fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / n;
    let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n).sqrt();
    let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / n).sqrt();
    cov / (sx * sy)
}

pub fn brute_spearman(x: &[f64], y: &[f64]) -> f64 {
    brute_pearson(&brute_ranks(x), &brute_ranks(y))
}

/// Co-occurrence counts from an explicit double loop over token positions.
pub fn brute_window_counts(lines: &[String], window: usize) -> HashMap<(String, String), u64> {
    let mut out = HashMap::new();
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        for i in 0..toks.len() {
            for j in 0..toks.len() {
                if i != j && i.abs_diff(j) <= window {
                    *out.entry((toks[i].to_string(), toks[j].to_string()))
                        .or_insert(0) += 1;
                }
            }
        }
    }
    out
}

/// A random corpus of at most `max_tokens` tokens over a small vocabulary.
pub fn random_corpus(max_tokens: usize, vocab: usize, rng: &mut impl Rng) -> Vec<String> {
    let mut lines = Vec::new();
    let mut used = 0;
    let target = rng.gen_range(1..=max_tokens);
    while used < target {
        let len = rng.gen_range(1..=12).min(target - used);
        let line: Vec<String> = (0..len)
            .map(|_| format!("t{}", rng.gen_range(0..vocab)))
            .collect();
        lines.push(line.join(" "));
        used += len;
    }
    lines
}

/// Files for a small end-to-end run.
pub struct ToyWorkspace {
    pub dir: std::path::PathBuf,
    pub embeddings: std::path::PathBuf,
    pub window_corpus: std::path::PathBuf,
    pub dependency_corpus: std::path::PathBuf,
    pub data: std::path::PathBuf,
    pub binary_data: std::path::PathBuf,
    pub lexicon: std::path::PathBuf,
}

pub const TOY_WORDS: usize = 40;
pub const TOY_DIM: usize = 6;

/// Writes embeddings, both corpora, a graded and a binary dataset and a
/// lexicon into `dir`. Gold scores follow a planted direction `u`:
/// `gold = clamp(5 + 2.5 (u·e1 − u·e2), 0, 10)`.
pub fn toy_workspace(dir: &std::path::Path, seed: u64) -> ToyWorkspace {
    use std::fmt::Write as _;
    let mut r = rng(seed);
    let words: Vec<String> = (0..TOY_WORDS).map(|i| format!("w{i}")).collect();
    let vectors: Vec<Vec<f64>> = words
        .iter()
        .map(|_| uniform_vec(TOY_DIM, 1.0, &mut r))
        .collect();
    let u = uniform_vec(TOY_DIM, 1.0, &mut r);
    let proj: Vec<f64> = vectors
        .iter()
        .map(|v| v.iter().zip(&u).map(|(a, b)| a * b).sum())
        .collect();

    let mut emb = format!("{} {}\n", TOY_WORDS, TOY_DIM);
    for (w, v) in words.iter().zip(&vectors) {
        let comps: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
        let _ = writeln!(emb, "{w} {}", comps.join(" "));
    }

    let mut corpus = String::new();
    for _ in 0..300 {
        let len = r.gen_range(3..10);
        let toks: Vec<&str> = (0..len)
            .map(|_| words[r.gen_range(0..TOY_WORDS)].as_str())
            .collect();
        let _ = writeln!(corpus, "{}", toks.join(" "));
    }

    let rels = ["nsubj", "dobj", "amod", "nmod"];
    let mut conll = String::new();
    for _ in 0..150 {
        let len = r.gen_range(2..8);
        let root = r.gen_range(1..=len);
        for id in 1..=len {
            let head = if id == root {
                0
            } else {
                let mut h = r.gen_range(1..=len);
                while h == id {
                    h = r.gen_range(1..=len);
                }
                h
            };
            let rel = if head == 0 {
                "root"
            } else {
                rels[r.gen_range(0..rels.len())]
            };
            let w = &words[r.gen_range(0..TOY_WORDS)];
            let _ = writeln!(conll, "{id}\t{w}\t{w}\tNN\tNN\t_\t{head}\t{rel}\t_\t_");
        }
        conll.push('\n');
    }

    let mut data = String::from("word1\tword2\tscore\n");
    let mut binary = String::new();
    let mut seen = std::collections::HashSet::new();
    while seen.len() < 160 {
        let (a, b) = (r.gen_range(0..TOY_WORDS), r.gen_range(0..TOY_WORDS));
        if a == b || !seen.insert((a, b)) {
            continue;
        }
        let gold = (5.0 + 2.5 * (proj[a] - proj[b])).clamp(0.0, 10.0);
        let _ = writeln!(data, "{}\t{}\t{gold:.3}", words[a], words[b]);
        let _ = writeln!(
            binary,
            "{}\t{}\t{}",
            words[a],
            words[b],
            if gold >= 5.0 { "True" } else { "False" }
        );
    }
    // two pairs with a word unknown to the embeddings
    let _ = writeln!(data, "w0\tunseen\t5.0");
    let _ = writeln!(binary, "unseen\tw1\tTrue");

    let mut lexicon = String::new();
    for _ in 0..80 {
        let (a, b) = (r.gen_range(0..TOY_WORDS), r.gen_range(0..TOY_WORDS));
        let label = if proj[a] > proj[b] { "pos" } else { "neg" };
        let _ = writeln!(lexicon, "{}\t{}\t{label}", words[a], words[b]);
    }

    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    ToyWorkspace {
        dir: dir.to_path_buf(),
        embeddings: write("emb.txt", &emb),
        window_corpus: write("corpus.txt", &corpus),
        dependency_corpus: write("corpus.conll", &conll),
        data: write("graded.tsv", &data),
        binary_data: write("binary.tsv", &binary),
        lexicon: write("lexicon.tsv", &lexicon),
    }
}

impl ToyWorkspace {
    /// A small, fast config over this workspace. `extra` is appended
    /// verbatim.
    pub fn config(&self, output: &std::path::Path, extra: &str) -> String {
        format!(
            "paths.embeddings = {:?}\npaths.window_corpus = {:?}\npaths.dependency_corpus = {:?}\n\
             paths.data = {:?}\npaths.lexicon = {:?}\npaths.output_dir = {:?}\n\
             model.mapped_dim = 5\nmodel.hidden_dim = 4\ntask.ratios = [0.6, 0.2, 0.2]\n\
             train.max_epochs = 15\ntrain.patience = 5\ntrain.batch_size = 8\ntrain.seeds = \"1..2\"\n{extra}\n",
            self.embeddings, self.window_corpus, self.dependency_corpus, self.data, self.lexicon, output
        )
    }
}
