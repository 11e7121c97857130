//! Binary entailment detection: train on 0/1 targets, tune a threshold on
//! dev, then report precision, recall and F1 on test.

mod common;

use lexent::eval::{evaluate_binary, make_random_split, predict, TaskKind, ThresholdPolicy};
use lexent::model::{Dims, ModelBundle, ModelParams};
use lexent::training::{train, Inputs};
use lexent::TrainConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut toy = common::Toy::new(60, 11);
    let pairs = toy.binary(500);
    let split = make_random_split(&pairs, [0.6, 0.2, 0.2], 4)?;

    let inputs = Inputs::new(&toy.table, None);
    let (train_set, _) = inputs.prepare(&split.train);
    let (dev_set, _) = inputs.prepare(&split.dev);
    let config = TrainConfig {
        max_epochs: 50,
        patience: 8,
        batch_size: 16,
        ..TrainConfig::default()
    };
    let init = ModelParams::init(Dims::new(common::DIM, 10, 8, false), 10.0, 1);
    let outcome = train(
        init,
        &inputs,
        &train_set,
        &dev_set,
        TaskKind::Binary,
        &config,
        1,
    )?;
    println!(
        "best dev F1 {:.3} at epoch {}",
        outcome.best_dev_metric.unwrap_or(f64::NAN),
        outcome.best_epoch
    );

    let bundle = ModelBundle::new(outcome.params, toy.table.clone(), None)?;
    let dev = predict(&bundle, &split.dev);
    let tuned = ThresholdPolicy::TuneOnDev {
        gold: dev.gold_labels(),
        scores: dev.scores,
    };
    for (name, policy) in [("tuned", tuned), ("fixed 5.0", ThresholdPolicy::Fixed(5.0))] {
        let r = evaluate_binary(&bundle, &split.test, &policy)?;
        println!(
            "{name:<10} threshold {:.3}  P {:.3}  R {:.3}  F1 {:.3}",
            r.threshold.unwrap_or(f64::NAN),
            r.precision.unwrap_or(f64::NAN),
            r.recall.unwrap_or(f64::NAN),
            r.f1.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
