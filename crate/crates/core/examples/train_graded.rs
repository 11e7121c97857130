//! Train on graded pairs with early stopping and report Spearman's rho on
//! held-out pairs.

mod common;

use lexent::eval::{make_random_split, TaskKind};
use lexent::model::{Dims, ModelParams};
use lexent::training::{dev_metric, train, Inputs};
use lexent::TrainConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut toy = common::Toy::new(60, 1);
    let pairs = toy.graded(500);
    let split = make_random_split(&pairs, [0.7, 0.15, 0.15], 42)?;

    let inputs = Inputs::new(&toy.table, None);
    let (train_set, _) = inputs.prepare(&split.train);
    let (dev_set, _) = inputs.prepare(&split.dev);
    let (test_set, _) = inputs.prepare(&split.test);

    let config = TrainConfig {
        max_epochs: 60,
        patience: 8,
        batch_size: 16,
        ..TrainConfig::default()
    };
    let init = ModelParams::init(Dims::new(common::DIM, 10, 8, false), 10.0, 3);
    let outcome = train(
        init,
        &inputs,
        &train_set,
        &dev_set,
        TaskKind::Graded,
        &config,
        3,
    )?;
    for e in outcome.log.epochs.iter().step_by(5) {
        println!(
            "epoch {:>3}  train loss {:>8.3}  dev rho {:.3}",
            e.epoch,
            e.train_loss,
            e.dev_metric.unwrap_or(f64::NAN)
        );
    }
    println!("best epoch {}", outcome.best_epoch);

    let scores = inputs.predict(&outcome.params, &test_set)?;
    let (rho, _) = dev_metric(TaskKind::Graded, &scores, &test_set, 10.0);
    println!(
        "test rho = {:.3} over {} pairs",
        rho.unwrap_or(f64::NAN),
        test_set.len()
    );
    Ok(())
}
