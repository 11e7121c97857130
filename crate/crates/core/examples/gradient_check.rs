//! Run the gated network forward and compare analytic gradients with
//! central differences.

use lexent::model::{backward, forward, Dims, Mode, ModelParams};
use lexent::sparse::FEATURE_COUNT;
use lexent::training::mse_loss;
use rand::rngs::mock::StepRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dims = Dims::new(4, 3, 3, true);
    let params = ModelParams::init(dims, 10.0, 7);
    let w1 = [0.3, -0.8, 0.5, 0.1];
    let w2 = [-0.2, 0.4, 0.9, -0.6];
    let x = [0.25; FEATURE_COUNT];
    let target = 8.0;

    let run = |p: &ModelParams| forward(p, &w1, &w2, Some(&x), Mode::Eval, &mut StepRng::new(0, 0));
    let trace = run(&params)?;
    println!("score(w1, w2) = {:.4}", trace.y);
    let swapped = forward(
        &params,
        &w2,
        &w1,
        Some(&x),
        Mode::Eval,
        &mut StepRng::new(0, 0),
    )?;
    println!("score(w2, w1) = {:.4}", swapped.y);

    let (loss, dy) = mse_loss(trace.y, target);
    println!("loss against {target} = {loss:.4}");
    let grads = backward(&params, &trace, dy);

    let eps = 1e-5;
    for (t, (name, g)) in grads.tensors().into_iter().enumerate() {
        let mut worst = 0.0f64;
        for (i, &analytic) in g.iter().enumerate() {
            let mut plus = params.clone();
            plus.tensors_mut()[t].1[i] += eps;
            let mut minus = params.clone();
            minus.tensors_mut()[t].1[i] -= eps;
            let numeric = (mse_loss(run(&plus)?.y, target).0 - mse_loss(run(&minus)?.y, target).0)
                / (2.0 * eps);
            let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
            worst = worst.max(rel);
        }
        println!("{name:<16} {:>3} entries  max rel err {worst:.1e}", g.len());
    }
    Ok(())
}
