//! Small order statistics used by the checks and summaries.

/// Most frequent value; ties go to the smaller value. Values are compared
/// after rounding to 1/1000 px so float noise does not split modes.
pub fn mode(values: &[f64]) -> Option<f64> {
    let mut keyed: Vec<(i64, f64)> = values
        .iter()
        .filter(|v| v.is_finite())
        .map(|v| ((v * 1000.0).round() as i64, *v))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut best: Option<(usize, f64)> = None;
    let mut i = 0;
    while i < keyed.len() {
        let mut j = i;
        while j < keyed.len() && keyed[j].0 == keyed[i].0 {
            j += 1;
        }
        let count = j - i;
        if best.is_none_or(|(c, _)| count > c) {
            best = Some((count, keyed[i].1));
        }
        i = j;
    }
    best.map(|(_, v)| v)
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

/// Nearest-rank percentile, `p` in (0, 100].
pub fn percentile(values: &[f64], p: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((p / 100.0) * v.len() as f64).ceil().max(1.0) as usize;
    Some(v[rank.min(v.len()) - 1])
}
