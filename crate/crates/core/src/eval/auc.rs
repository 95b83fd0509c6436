use super::scan::Scored;

/// Weighted area under the ROC curve, ties counted as one half. An
/// auxiliary diagnostic only.
pub fn auc(signal: &[Scored], background: &[Scored]) -> f64 {
    let mut all: Vec<(f64, f64, bool)> = signal
        .iter()
        .map(|&(x, w)| (x, w, true))
        .chain(background.iter().map(|&(x, w)| (x, w, false)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ws: f64 = signal.iter().map(|x| x.1).sum();
    let wb: f64 = background.iter().map(|x| x.1).sum();
    if ws <= 0.0 || wb <= 0.0 {
        return 0.5;
    }
    let mut below_b = 0.0;
    let mut area = 0.0;
    let mut k = 0;
    while k < all.len() {
        let x = all[k].0;
        let (mut grp_s, mut grp_b) = (0.0, 0.0);
        while k < all.len() && all[k].0 == x {
            if all[k].2 {
                grp_s += all[k].1;
            } else {
                grp_b += all[k].1;
            }
            k += 1;
        }
        area += grp_s * (below_b + 0.5 * grp_b);
        below_b += grp_b;
    }
    area / (ws * wb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_and_ties() {
        let s = [(1.0, 1.0), (2.0, 1.0)];
        let b = [(-1.0, 1.0), (0.0, 2.0)];
        assert_eq!(auc(&s, &b), 1.0);
        assert_eq!(auc(&b, &s), 0.0);
        assert_eq!(auc(&[(0.0, 1.0)], &[(0.0, 3.0)]), 0.5);
    }
}
