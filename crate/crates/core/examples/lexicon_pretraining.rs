//! One hinge-loss pass over binary lexicon pairs before supervised
//! training, compared with starting from scratch.

mod common;

use lexent::eval::{cap_lexicon, make_random_split, mean_std, TaskKind};
use lexent::model::{Dims, ModelParams};
use lexent::training::{dev_metric, pretrain, train, Inputs};
use lexent::TrainConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut toy = common::Toy::new(80, 5);
    // few graded pairs, many cheap binary ones
    let pairs = toy.graded(200);
    let lexicon = cap_lexicon(toy.lexicon(2000), 10, 1);
    println!("lexicon: {} pairs after capping", lexicon.len());

    let split = make_random_split(&pairs, [0.3, 0.3, 0.4], 9)?;
    let inputs = Inputs::new(&toy.table, None);
    let (train_set, _) = inputs.prepare(&split.train);
    let (dev_set, _) = inputs.prepare(&split.dev);
    let (test_set, _) = inputs.prepare(&split.test);
    let config = TrainConfig {
        max_epochs: 40,
        patience: 10,
        batch_size: 8,
        ..TrainConfig::default()
    };
    let dims = Dims::new(common::DIM, 10, 8, false);

    // small dev sets make single runs noisy, so average a few seeds
    let seeds = 1..=5u64;
    for with_lexicon in [false, true] {
        let mut rhos = Vec::new();
        for seed in seeds.clone() {
            let mut params = ModelParams::init(dims, 10.0, seed);
            if with_lexicon {
                pretrain(&mut params, &inputs, &lexicon, &config, seed)?;
            }
            let outcome = train(
                params,
                &inputs,
                &train_set,
                &dev_set,
                TaskKind::Graded,
                &config,
                seed,
            )?;
            let scores = inputs.predict(&outcome.params, &test_set)?;
            rhos.push(
                dev_metric(TaskKind::Graded, &scores, &test_set, 10.0)
                    .0
                    .unwrap_or(f64::NAN),
            );
        }
        let (mean, std) = mean_std(&rhos);
        let runs: Vec<String> = rhos.iter().map(|r| format!("{r:.2}")).collect();
        println!(
            "{:<13} test rho {mean:.3} +- {std:.3}  [{}]",
            if with_lexicon {
                "with lexicon"
            } else {
                "from scratch"
            },
            runs.join(" ")
        );
    }
    Ok(())
}
