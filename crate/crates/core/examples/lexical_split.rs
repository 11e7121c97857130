//! Random versus lexical splits: the lexical one partitions the vocabulary
//! so no test word was seen in training.

mod common;

use std::collections::BTreeSet;

use lexent::eval::{make_lexical_split, make_random_split, vocabulary, DatasetSplit};

fn overlap(split: &DatasetSplit) -> usize {
    let train: BTreeSet<&str> = vocabulary(&split.train);
    vocabulary(&split.test).intersection(&train).count()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut toy = common::Toy::new(50, 3);
    let pairs = toy.graded(1200);

    let random = make_random_split(&pairs, [0.6, 0.2, 0.2], 8)?;
    let lexical = make_lexical_split(&pairs, [0.6, 0.2, 0.2], 8)?;
    for (name, s) in [("random", &random), ("lexical", &lexical)] {
        println!(
            "{name:<8} train {:>4}  dev {:>4}  test {:>4}  discarded {:>4}  shared train/test words {}",
            s.train.len(),
            s.dev.len(),
            s.test.len(),
            s.discarded,
            overlap(s)
        );
    }
    Ok(())
}
