use super::result::{Sample, SolverResult};

/// Distinct states within `window` of the lowest energy, at most `cap`.
pub fn select_states(res: &SolverResult, cap: usize, window: f64) -> Vec<Sample> {
    let Some(best) = res.samples.first() else { return Vec::new() };
    let limit = best.energy + window;
    let mut out: Vec<Sample> = Vec::new();
    for s in &res.samples {
        if out.len() >= cap || s.energy > limit {
            break;
        }
        if !out.iter().any(|o| o.spins == s.spins) {
            out.push(s.clone());
        }
    }
    out
}
