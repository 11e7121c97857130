/// Squared error `(y - gold)²` and its derivative in `y`.
pub fn mse_loss(y: f64, gold: f64) -> (f64, f64) {
    let d = y - gold;
    (d * d, 2.0 * d)
}

/// Margin hinge on squared error for binary targets `gold ∈ {0, S}`:
/// `max((y - gold)² - (S/2 - R)², 0)`.
///
/// Zero, with zero gradient, whenever `|y - gold| <= S/2 - R`; predictions on
/// the correct side of `S/2` by at least `R` are left alone.
pub fn hinge_loss(y: f64, gold: f64, max_score: f64, margin: f64) -> (f64, f64) {
    let d = y - gold;
    let allowed = max_score / 2.0 - margin;
    let excess = d * d - allowed * allowed;
    if excess > 0.0 {
        (excess, 2.0 * d)
    } else {
        (0.0, 0.0)
    }
}

/// Sum of per-example squared errors.
pub fn batch_mse(pred: &[f64], gold: &[f64]) -> f64 {
    pred.iter().zip(gold).map(|(y, g)| mse_loss(*y, *g).0).sum()
}
